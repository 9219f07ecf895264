#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qrtw/lattice.hpp"
#include "qrtw/profile.hpp"
#include "qrtw/qgraph.hpp"
#include "qrtw/scattering.hpp"

// Front end of the qrtw executable.
namespace qrtw::cli {

enum class Command { Stationary, Evolve, Spectrum, Resonances, Verify };
enum class Format { Csv, Json };

const char* to_string(Command c);

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kModel = 2;
inline constexpr int kDegenerate = 3;
inline constexpr int kNoConvergence = 4;
/// verify ran but at least one check failed.
inline constexpr int kVerifyFailed = 5;
}  // namespace exit_code

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown by parse_config for --help; carries the help text.
struct HelpRequested {
  std::string text;
};

struct KRange {
  double min = 0.1;
  double max = 5.0;
  int n = 4096;
};

struct RunConfig {
  Command command = Command::Stationary;
  /// Walk model for stationary, evolve and verify; graph model (k unused)
  /// for spectrum and resonances.
  std::variant<TunnelingConfig<double>, GraphParams<double>> model;
  Injection injection = Injection::Left;
  /// Output prefix; a name ending in .csv or .json selects a single file.
  std::optional<std::string> output_path;
  std::optional<Format> format;
  std::optional<Window> window;
  std::optional<double> tol;
  std::optional<long> max_steps;
  KRange k;
  /// Series terms reported by verify.
  long terms = 200;
  long dump_every = 0;
  /// Worker cap for spectrum; 0 means hardware concurrency.
  unsigned threads = 0;

  const TunnelingConfig<double>& walk() const { return std::get<TunnelingConfig<double>>(model); }
  const GraphParams<double>& graph() const { return std::get<GraphParams<double>>(model); }
};

/// `args` excludes the program name. Throws UsageError, HelpRequested, or
/// qrtw::Error for an invalid model.
RunConfig parse_config(const std::vector<std::string>& args);

/// Executes one command. Results go to files when an output path is set and
/// to `out` otherwise; diagnostics go to `err`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parse, apply QRTW_THREADS, run, map failures to exit codes.
int main(int argc, char** argv);

}  // namespace qrtw::cli
