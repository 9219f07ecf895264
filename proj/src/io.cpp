#include "qrtw/io.hpp"

#include <unistd.h>

#include <array>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qrtw::io {
namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorKind::Parse, what); }

double number(const Json& j, const char* what) {
  if (!j.is_number()) parse_error(std::string(what) + ": expected a number");
  return j.get<double>();
}

double to_double(std::string_view s, int line) {
  double v = 0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    parse_error("line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

int to_int(std::string_view s, int line) {
  int v = 0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    parse_error("line " + std::to_string(line) + ": bad integer '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  for (;;) {
    const size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// Data rows of a CSV document after checking the header.
std::vector<std::string_view> data_lines(const std::string& text, std::string_view header) {
  std::vector<std::string_view> lines;
  std::string_view rest(text);
  while (!rest.empty()) {
    const size_t nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    rest.remove_prefix(nl + 1);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines.front() != header) {
    parse_error("expected CSV header '" + std::string(header) + "'");
  }
  lines.erase(lines.begin());
  return lines;
}

}  // namespace

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json complex_to_json(Complex<double> z) { return Json::array({z.real(), z.imag()}); }

Complex<double> complex_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_array() || j.size() != 2) parse_error("complex value must be [re, im]");
  return {number(j[0], "real part"), number(j[1], "imaginary part")};
}

Coin<double> coin_from_json(const Json& j) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "identity") return make_coin<double>(1, 0, 0, 1);
    if (name == "hadamard") return hadamard<double>();
    parse_error("unknown coin preset '" + name + "'");
  }
  if (!j.is_object()) parse_error("coin must be a preset name or an object");
  if (j.size() == 1 && j.contains("hwp")) return half_wave_plate(number(j["hwp"], "hwp"));
  if (j.size() == 1 && j.contains("free")) {
    const auto& f = j["free"];
    if (!f.is_array() || f.size() != 2) parse_error("free coin needs [p, q]");
    return free_coin(number(f[0], "p"), number(f[1], "q"));
  }
  for (const char* key : {"a", "b", "c", "d"}) {
    if (!j.contains(key)) parse_error(std::string("coin entry '") + key + "' missing");
  }
  return make_coin<double>(complex_from_json(j["a"]), complex_from_json(j["b"]),
                           complex_from_json(j["c"]), complex_from_json(j["d"]));
}

Json coin_to_json(const Coin<double>& u) {
  return {{"a", complex_to_json(u.a())},
          {"b", complex_to_json(u.b())},
          {"c", complex_to_json(u.c())},
          {"d", complex_to_json(u.d())}};
}

Coin<double> parse_coin(const std::string& text) {
  if (text == "identity" || text == "hadamard") return coin_from_json(Json(text));
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception&) {
    parse_error("coin is neither a preset nor valid JSON: " + text);
  }
  return coin_from_json(j);
}

TunnelingConfig<double> config_from_json(const Json& j) {
  if (!j.is_object()) parse_error("config must be a JSON object");
  for (const char* key : {"p", "q", "barrier", "m"}) {
    if (!j.contains(key)) parse_error(std::string("config field '") + key + "' missing");
  }
  TunnelingConfig<double> cfg;
  cfg.p = number(j["p"], "p");
  cfg.q = number(j["q"], "q");
  cfg.barrier = coin_from_json(j["barrier"]);
  if (!j["m"].is_number_integer()) parse_error("m must be an integer");
  cfg.m = j["m"].get<int>();
  if (j.contains("delta")) cfg.delta = number(j["delta"], "delta");
  cfg.validate();
  return cfg;
}

Json config_to_json(const TunnelingConfig<double>& cfg) {
  return {{"p", cfg.p},
          {"q", cfg.q},
          {"barrier", coin_to_json(cfg.barrier)},
          {"m", cfg.m},
          {"delta", cfg.delta}};
}

Json solution_to_json(const StationarySolution<double>& sol) {
  return {{"r", complex_to_json(sol.r)},
          {"t", complex_to_json(sol.t)},
          {"r_tilde", complex_to_json(sol.r_tilde)},
          {"t_tilde", complex_to_json(sol.t_tilde)},
          {"T", sol.T},
          {"R", sol.R},
          {"method", to_string(sol.method)},
          {"injection", to_string(sol.injection)},
          {"delta", sol.delta},
          {"tilde_undefined", sol.tilde_undefined}};
}

std::string profile_csv(const AmplitudeProfile<double>& profile) {
  std::string out = "x,psiL_re,psiL_im,psiR_re,psiR_im,mu\n";
  const Window w = profile.window();
  for (int x = w.lo; x <= w.hi; ++x) {
    const auto l = profile.left(x), r = profile.right(x);
    out += std::to_string(x);
    for (double v : {l.real(), l.imag(), r.real(), r.imag(), std::norm(l) + std::norm(r)}) {
      out += ',';
      out += format_real(v);
    }
    out += '\n';
  }
  return out;
}

AmplitudeProfile<double> parse_profile_csv(const std::string& text) {
  const auto lines = data_lines(text, "x,psiL_re,psiL_im,psiR_re,psiR_im,mu");
  if (lines.empty()) parse_error("profile has no rows");
  std::vector<int> xs;
  std::vector<std::array<double, 4>> vals;
  for (size_t i = 0; i < lines.size(); ++i) {
    const int line = static_cast<int>(i) + 2;
    const auto cells = split(lines[i]);
    if (cells.size() != 6) parse_error("line " + std::to_string(line) + ": expected 6 columns");
    xs.push_back(to_int(cells[0], line));
    if (i > 0 && xs[i] != xs[i - 1] + 1) {
      parse_error("line " + std::to_string(line) + ": positions must be consecutive");
    }
    vals.push_back({to_double(cells[1], line), to_double(cells[2], line),
                    to_double(cells[3], line), to_double(cells[4], line)});
    to_double(cells[5], line);
  }
  AmplitudeProfile<double> profile(Window{xs.front(), xs.back()});
  for (size_t i = 0; i < xs.size(); ++i) {
    profile.left(xs[i]) = {vals[i][0], vals[i][1]};
    profile.right(xs[i]) = {vals[i][2], vals[i][3]};
  }
  return profile;
}

std::string spectrum_csv(const std::vector<SpectrumSample<double>>& samples) {
  std::string out = "k,T\n";
  for (const auto& s : samples) {
    out += format_real(s.k);
    out += ',';
    out += format_real(s.T);
    out += '\n';
  }
  return out;
}

std::vector<SpectrumSample<double>> parse_spectrum_csv(const std::string& text) {
  std::vector<SpectrumSample<double>> out;
  const auto lines = data_lines(text, "k,T");
  for (size_t i = 0; i < lines.size(); ++i) {
    const int line = static_cast<int>(i) + 2;
    const auto cells = split(lines[i]);
    if (cells.size() != 2) parse_error("line " + std::to_string(line) + ": expected 2 columns");
    out.push_back({to_double(cells[0], line), to_double(cells[1], line)});
  }
  return out;
}

Json resonances_to_json(double alpha, double s, int m, const ResonanceSet<double>& set) {
  return {{"alpha", alpha},
          {"s", s},
          {"m", m},
          {"roots", set.roots},
          {"all_resonant", set.all_resonant}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(ErrorKind::Io, "write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::Io, "cannot rename onto '" + path + "': " + ec.message());
  }
}

}  // namespace qrtw::io
