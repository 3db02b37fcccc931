#include "ghzsim/cli/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "ghzsim/errors.hpp"

namespace ghzsim::cli {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::InvalidConfig, "field '" + field + "' " + what);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void require_object(const json& obj, const std::string& path) {
  if (!obj.is_object()) bad(path.empty() ? "<root>" : path, "must be an object");
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) bad(join(path, item.key()), "is not a recognised key");
  }
}

double get_number(const json& obj, const std::string& path, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) bad(join(path, key), "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) bad(join(path, key), "must be finite");
  return x;
}

std::int64_t get_integer(const json& obj, const std::string& path, const char* key,
                         std::int64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) bad(join(path, key), "must be an integer");
  return v.get<std::int64_t>();
}

std::string get_string(const json& obj, const std::string& path, const char* key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) bad(join(path, key), "must be a string");
  return v.get<std::string>();
}

bool get_bool(const json& obj, const std::string& path, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) bad(join(path, key), "must be true or false");
  return v.get<bool>();
}

ChainSpec parse_chain(const json& obj, double alpha) {
  const std::string path = "chain";
  require_object(obj, path);
  check_keys(obj, path, {"n_qubits", "gamma_x", "gamma_y", "gamma_z", "lambda"});
  ChainSpec spec;
  const auto n = get_integer(obj, path, "n_qubits", spec.n_qubits);
  if (n < 2 || n > kMaxQubits) bad("chain.n_qubits", "must lie in [2, 62]");
  spec.n_qubits = static_cast<int>(n);
  if (obj.contains("lambda") && obj.contains("gamma_x"))
    bad("chain.lambda", "cannot be combined with chain.gamma_x");
  if (obj.contains("lambda")) {
    const double lambda = get_number(obj, path, "lambda", 0.0);
    if (lambda < 0.0) bad("chain.lambda", "must be >= 0");
    spec.gamma_x = std::sqrt(lambda * alpha);
  } else {
    spec.gamma_x = get_number(obj, path, "gamma_x", spec.gamma_x);
  }
  spec.gamma_y = get_number(obj, path, "gamma_y", spec.gamma_y);
  spec.gamma_z = get_number(obj, path, "gamma_z", spec.gamma_z);
  return spec;
}

DriveProfile parse_drive(const json& obj) {
  const std::string path = "drive";
  require_object(obj, path);
  check_keys(obj, path, {"kind", "alpha", "tau_i", "tau_f", "omega0", "tangent_scale"});
  DriveProfile drive;
  const std::string kind = get_string(obj, path, "kind", to_string(drive.kind));
  try {
    drive.kind = drive_kind_from_string(kind);
  } catch (const Error&) {
    bad("drive.kind", "must be one of linear_symmetric, linear_asymmetric, tangent, constant");
  }
  drive.alpha = get_number(obj, path, "alpha", drive.alpha);
  if (drive.kind == DriveKind::LinearAsymmetric && !obj.contains("tau_i")) drive.tau_i = 0.0;
  drive.tau_i = get_number(obj, path, "tau_i", drive.tau_i);
  drive.tau_f = get_number(obj, path, "tau_f", drive.tau_f);
  drive.omega0 = get_number(obj, path, "omega0", drive.omega0);
  const double matched = drive.alpha > 0.0 ? matched_tangent_scale(drive.alpha, drive.tau_f) : 0.0;
  drive.tangent_scale = get_number(obj, path, "tangent_scale",
                                   drive.kind == DriveKind::Tangent ? matched : 0.0);
  return drive;
}

Method parse_method(const std::string& name) {
  if (name == "reduced") return Method::Reduced;
  if (name == "full") return Method::Full;
  bad("method", "must be 'reduced' or 'full'");
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "lambda") return SweepAxis::Lambda;
  if (name == "n_qubits") return SweepAxis::NQubits;
  if (name == "tau_window") return SweepAxis::TauWindow;
  bad("axis", "must be one of lambda, n_qubits, tau_window");
}

std::string resolved_target(const RunConfig& config) {
  if (config.target) return *config.target;
  const BasisIndex init = parse_bitstring(config.initial, config.chain.n_qubits, "initial");
  const BasisIndex mask = (BasisIndex{1} << config.chain.n_qubits) - 1;
  return to_bitstring(init ^ mask, config.chain.n_qubits);
}

bool uniform(const std::string& bits) {
  return !bits.empty() && std::all_of(bits.begin(), bits.end(),
                                      [&](char c) { return c == bits.front(); });
}

}  // namespace

BasisIndex parse_bitstring(std::string_view bits, int n_qubits, std::string_view field) {
  const std::string name(field);
  std::string ascii;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    // U+2212 MINUS SIGN is E2 88 92 in UTF-8.
    if (bits.substr(i, 3) == "\xE2\x88\x92") {
      ascii.push_back('-');
      i += 2;
    } else {
      ascii.push_back(bits[i]);
    }
  }
  if (ascii.size() != static_cast<std::size_t>(n_qubits))
    bad(name, "has length " + std::to_string(ascii.size()) + ", expected n_qubits = " +
                  std::to_string(n_qubits));
  BasisIndex index = 0;
  for (std::size_t k = 0; k < ascii.size(); ++k) {
    if (ascii[k] == '+') index |= BasisIndex{1} << k;
    else if (ascii[k] != '-') bad(name, "may only contain '+' and '-'");
  }
  return index;
}

std::string to_bitstring(BasisIndex index, int n_qubits) {
  std::string bits(static_cast<std::size_t>(n_qubits), '-');
  for (int k = 0; k < n_qubits; ++k)
    if ((index >> k) & 1u) bits[static_cast<std::size_t>(k)] = '+';
  return bits;
}

RunConfig parse_run_config(const json& doc) {
  require_object(doc, "");
  check_keys(doc, "", {"chain", "drive", "initial", "target", "tol", "n_samples", "seed",
                       "method", "cross_check"});
  RunConfig config;
  config.drive = parse_drive(doc.value("drive", json::object()));
  config.chain = parse_chain(doc.value("chain", json::object()), config.drive.alpha);
  config.initial = get_string(doc, "", "initial", std::string(config.chain.n_qubits, '-'));
  if (doc.contains("target")) config.target = get_string(doc, "", "target", "");
  config.tol = get_number(doc, "", "tol", config.tol);
  const auto samples = get_integer(doc, "", "n_samples", 2001);
  if (samples < 2) bad("n_samples", "must be >= 2");
  config.n_samples = static_cast<std::size_t>(samples);
  const auto seed = get_integer(doc, "", "seed", 1);
  if (seed < 0) bad("seed", "must be >= 0");
  config.seed = static_cast<std::uint64_t>(seed);
  config.method = parse_method(get_string(doc, "", "method", "reduced"));
  config.cross_check = get_bool(doc, "", "cross_check", false);
  validate(config);
  return config;
}

SweepConfig parse_sweep_config(const json& doc) {
  require_object(doc, "");
  check_keys(doc, "", {"axis", "values", "base"});
  SweepConfig config;
  if (!doc.contains("axis")) bad("axis", "is required");
  config.axis = parse_axis(get_string(doc, "", "axis", ""));
  if (!doc.contains("values") || !doc.at("values").is_array()) bad("values", "must be an array");
  for (const auto& v : doc.at("values")) {
    if (!v.is_number()) bad("values", "must contain numbers only");
    config.values.push_back(v.get<double>());
  }
  config.base = parse_run_config(doc.value("base", json::object()));
  validate(config);
  return config;
}

void validate(const RunConfig& config) {
  validate_spec(config.chain);
  validate_drive(config.drive);
  if (!(config.tol >= 1e-13 && config.tol <= 1e-6)) bad("tol", "must lie in [1e-13, 1e-6]");
  if (config.n_samples < 2) bad("n_samples", "must be >= 2");
  const int n = config.chain.n_qubits;
  const BasisIndex init = parse_bitstring(config.initial, n, "initial");
  if (config.target) {
    const BasisIndex target = parse_bitstring(*config.target, n, "target");
    const BasisIndex mask = (BasisIndex{1} << n) - 1;
    if (config.method == Method::Reduced && target != init && target != (init ^ mask))
      bad("target", "must lie in the pair of 'initial' for reduced runs");
  }
  if (config.method == Method::Full || config.cross_check) {
    if (static_cast<std::size_t>(n) > 14)
      throw Error(ErrorCode::DimensionTooLarge, "full-space runs need n_qubits <= 14");
  }
}

void validate(const SweepConfig& config) {
  if (config.values.empty()) bad("values", "must not be empty");
  for (double v : config.values)
    if (!std::isfinite(v)) bad("values", "must be finite");
  if (config.values.size() > 1) {
    const bool up = config.values[1] > config.values[0];
    for (std::size_t i = 1; i < config.values.size(); ++i) {
      const bool step_up = config.values[i] > config.values[i - 1];
      if (config.values[i] == config.values[i - 1] || step_up != up)
        bad("values", "must be strictly monotone");
    }
  }
  for (double v : config.values) {
    switch (config.axis) {
      case SweepAxis::Lambda:
        if (v < 0.0) bad("values", "lambda values must be >= 0");
        if (config.base.drive.kind == DriveKind::Constant)
          bad("axis", "lambda sweeps need a ramped drive");
        break;
      case SweepAxis::NQubits:
        if (v != std::floor(v) || v < 2 || v > kMaxQubits)
          bad("values", "n_qubits values must be integers in [2, 62]");
        if (!uniform(config.base.initial) || (config.base.target && !uniform(*config.base.target)))
          bad("base.initial", "must be uniform ('---' or '+++') for an n_qubits sweep");
        break;
      case SweepAxis::TauWindow:
        if (v <= 0.0) bad("values", "tau_window values must be > 0");
        break;
    }
  }
}

json to_json(const RunConfig& config) {
  json chain = {{"n_qubits", config.chain.n_qubits},
                {"gamma_x", config.chain.gamma_x},
                {"gamma_y", config.chain.gamma_y},
                {"gamma_z", config.chain.gamma_z}};
  json drive = {{"kind", to_string(config.drive.kind)},
                {"alpha", config.drive.alpha},
                {"tau_i", config.drive.tau_i},
                {"tau_f", config.drive.tau_f},
                {"omega0", config.drive.omega0},
                {"tangent_scale", config.drive.tangent_scale}};
  return {{"chain", chain},
          {"drive", drive},
          {"initial", config.initial},
          {"target", resolved_target(config)},
          {"tol", config.tol},
          {"n_samples", config.n_samples},
          {"seed", config.seed},
          {"method", to_string(config.method)},
          {"cross_check", config.cross_check}};
}

json to_json(const SweepConfig& config) {
  json base = to_json(config.base);
  // The base target follows n_qubits on that axis, so keep it unresolved.
  if (config.axis == SweepAxis::NQubits && !config.base.target) base.erase("target");
  return {{"axis", to_string(config.axis)}, {"values", config.values}, {"base", base}};
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

std::string config_hash(const json& canonical) { return sha256_hex(canonical.dump()); }

RunConfig sweep_point(const SweepConfig& config, double value) {
  RunConfig run = config.base;
  switch (config.axis) {
    case SweepAxis::Lambda: {
      const double g2 = run.chain.gamma_x * run.chain.gamma_x + run.chain.gamma_y * run.chain.gamma_y;
      const double want = value * run.drive.alpha;
      if (g2 == 0.0) {
        run.chain.gamma_x = std::sqrt(want);
      } else {
        const double s = std::sqrt(want / g2);
        run.chain.gamma_x *= s;
        run.chain.gamma_y *= s;
      }
      break;
    }
    case SweepAxis::NQubits: {
      const int n = static_cast<int>(value);
      run.chain.n_qubits = n;
      run.initial = std::string(static_cast<std::size_t>(n), run.initial.front());
      if (run.target) run.target = std::string(static_cast<std::size_t>(n), run.target->front());
      break;
    }
    case SweepAxis::TauWindow: {
      // A tangent scale left at the matched value keeps matching the new window.
      const bool matched = run.drive.kind == DriveKind::Tangent &&
                           run.drive.tangent_scale ==
                               matched_tangent_scale(run.drive.alpha, run.drive.tau_f);
      switch (run.drive.kind) {
        case DriveKind::LinearSymmetric:
        case DriveKind::Tangent:
          run.drive.tau_i = -value / 2.0;
          run.drive.tau_f = value / 2.0;
          break;
        case DriveKind::LinearAsymmetric:
        case DriveKind::Constant:
          run.drive.tau_f = run.drive.tau_i + value;
          break;
      }
      if (matched) run.drive.tangent_scale = matched_tangent_scale(run.drive.alpha, run.drive.tau_f);
      break;
    }
  }
  return run;
}

std::optional<double> config_lambda(const RunConfig& config) {
  if (config.drive.kind == DriveKind::Constant) return std::nullopt;
  const auto& c = config.chain;
  return (c.gamma_x * c.gamma_x + c.gamma_y * c.gamma_y) / config.drive.alpha;
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
  }
}

const char* to_string(Method method) { return method == Method::Reduced ? "reduced" : "full"; }

const char* to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Lambda: return "lambda";
    case SweepAxis::NQubits: return "n_qubits";
    case SweepAxis::TauWindow: return "tau_window";
  }
  return "unknown";
}

}  // namespace ghzsim::cli
