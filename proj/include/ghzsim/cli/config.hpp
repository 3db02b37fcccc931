#pragma once

// Run and sweep configurations as JSON documents. Parsing is strict: unknown
// keys and wrong types raise InvalidConfig with the dotted field path.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ghzsim/model.hpp"
#include "json.hpp"

namespace ghzsim::cli {

using json = nlohmann::json;

inline constexpr const char* kToolName = "ghzsim";
inline constexpr const char* kToolVersion = "0.1.0";

enum class Method { Reduced, Full };

struct RunConfig {
  ChainSpec chain;
  DriveProfile drive;
  std::string initial = "--";          // one '+'/'-' per spin, spin 1 first
  std::optional<std::string> target;   // default: every spin of initial flipped
  double tol = 1e-10;
  std::size_t n_samples = 2001;
  std::uint64_t seed = 1;
  Method method = Method::Reduced;
  bool cross_check = false;            // reduced runs also propagate the full space
};

enum class SweepAxis { Lambda, NQubits, TauWindow };

struct SweepConfig {
  SweepAxis axis = SweepAxis::Lambda;
  std::vector<double> values;
  RunConfig base;
};

// Bit k of the index is spin k+1; '+' sets the bit. Accepts U+2212 for '-'.
BasisIndex parse_bitstring(std::string_view bits, int n_qubits, std::string_view field);
std::string to_bitstring(BasisIndex index, int n_qubits);

// Accepts chain.lambda in place of chain.gamma_x (gamma_x = sqrt(lambda alpha)).
// A tangent drive without tangent_scale gets the matched slope.
RunConfig parse_run_config(const json& doc);
SweepConfig parse_sweep_config(const json& doc);

// Checks model, options and bitstrings together. Throws the library error.
void validate(const RunConfig& config);
void validate(const SweepConfig& config);

// Fully resolved form; hashing this gives the config hash.
json to_json(const RunConfig& config);
json to_json(const SweepConfig& config);

// Hex SHA-256 of the compact dump (keys sorted).
std::string config_hash(const json& canonical);
std::string sha256_hex(std::string_view data);

// Base config with the axis value applied.
RunConfig sweep_point(const SweepConfig& config, double value);

// Lambda of the configured chain: (gamma_x^2 + gamma_y^2) / alpha. Empty for
// the Constant kind, which has no slope.
std::optional<double> config_lambda(const RunConfig& config);

json load_json_file(const std::filesystem::path& path);

const char* to_string(Method method);
const char* to_string(SweepAxis axis);

}  // namespace ghzsim::cli
