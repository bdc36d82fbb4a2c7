#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cprsim/abm.hpp"
#include "cprsim/model.hpp"
#include "cprsim/ode.hpp"
#include "cprsim/sweep.hpp"

namespace cprsim {

/// Syntax, schema or invariant problem in a run configuration. `key()` is the
/// dotted key path involved, empty for file-level syntax errors.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::string key = {})
      : std::runtime_error(what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct ModelSection {
  FamilyParams family{};
  double growth_rate = 2.0;
  double e_c_hat = 0.0;
  double e_d_hat = 0.0;

  ModelSpec spec() const;
  friend bool operator==(const ModelSection&, const ModelSection&) = default;
};

struct SweepSection {
  GridSpec grid{};
  int realizations = 10;
  // critical-map lattice
  Interval e_c_range{0.05, 0.95};
  Interval e_d_range{1.05, 1.95};
  int map_resolution = 91;
  int threads = 0;  // 0: hardware concurrency

  friend bool operator==(const SweepSection&, const SweepSection&) = default;
};

struct OutputSection {
  std::string directory;
  std::string format = "csv";

  friend bool operator==(const OutputSection&, const OutputSection&) = default;
};

struct RunConfig {
  ModelSection model;
  IntegratorOptions integrator;  // record_interval defaults to 0.1 here
  AbmConfig abm;                 // abm.initial doubles as the ODE initial state
  // Raw per-player extraction rates; when set, model.ec/ed were derived from them.
  std::optional<double> e_c_raw;
  std::optional<double> e_d_raw;
  SweepSection sweep;
  OutputSection output;

  // Keys that were filled from defaults while parsing. Not part of equality.
  std::vector<std::string> defaulted;

  friend bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.model == b.model && a.integrator == b.integrator && a.abm == b.abm &&
           a.e_c_raw == b.e_c_raw && a.e_d_raw == b.e_d_raw && a.sweep == b.sweep &&
           a.output == b.output;
  }
};

/// Directory used when output.dir is not given: $CPRSIM_OUT_DIR, else "cprsim_out".
std::string default_output_directory();

/// Flat dotted-key view of a config before validation. Later assignments to
/// the same key replace earlier ones (used for CLI overrides).
class ConfigText {
 public:
  /// INI-style text: `[section]` headers, `key = value` lines, `#`/`;` comments.
  /// Keys may also be written fully qualified as `section.key`.
  static ConfigText parse(const std::string& text);

  void set(const std::string& key, const std::string& value);
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Validates and resolves a key set into a RunConfig.
RunConfig resolve_config(const ConfigText& text);

inline RunConfig parse_config(const std::string& text) {
  return resolve_config(ConfigText::parse(text));
}

/// Every key written explicitly, numbers with 17 significant digits.
std::string serialize(const RunConfig& config);

/// 17 significant digits ("%.17g"); reads back to the same double.
std::string format_double(double v);

}  // namespace cprsim
