#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qrtw/coin.hpp"
#include "qrtw/lattice.hpp"
#include "qrtw/profile.hpp"
#include "qrtw/qgraph.hpp"
#include "qrtw/scattering.hpp"

// Text formats: coin and config JSON, profile and spectrum CSV, resonance
// lists. All numbers are written with 17 significant digits.
namespace qrtw::io {

using Json = nlohmann::json;

std::string format_real(double v);

Json complex_to_json(Complex<double> z);
Complex<double> complex_from_json(const Json& j);

/// Accepts {"a":[re,im],...}, "identity", "hadamard", {"hwp": theta} and
/// {"free": [p, q]}.
Coin<double> coin_from_json(const Json& j);
Json coin_to_json(const Coin<double>& u);
/// A preset name or JSON text.
Coin<double> parse_coin(const std::string& text);

TunnelingConfig<double> config_from_json(const Json& j);
Json config_to_json(const TunnelingConfig<double>& cfg);

Json solution_to_json(const StationarySolution<double>& sol);

std::string profile_csv(const AmplitudeProfile<double>& profile);
AmplitudeProfile<double> parse_profile_csv(const std::string& text);

std::string spectrum_csv(const std::vector<SpectrumSample<double>>& samples);
std::vector<SpectrumSample<double>> parse_spectrum_csv(const std::string& text);

Json resonances_to_json(double alpha, double s, int m, const ResonanceSet<double>& set);

std::string read_file(const std::string& path);
/// Writes through a temporary file in the same directory and renames it
/// over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace qrtw::io
