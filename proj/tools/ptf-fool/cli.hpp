#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ptffool::cli {

using json = nlohmann::json;

enum class Verdict { pass, fail, inconclusive };

std::string to_string(Verdict v);

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitUsage = 64;

int exit_code(Verdict v);

// A config field that is missing, mistyped or unknown.
class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& field, const std::string& what = "invalid value")
      : std::runtime_error(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// {"command", "params", "seed", "outputs", "tolerances"}. Report paths are
/// not part of the config so a replay can write elsewhere and still embed
/// the identical config.
json make_config(const std::string& command, json params, std::uint64_t seed, json outputs = json::object(),
                 json tolerances = json::object());

// FNV-1a over the compact serialization (keys sorted).
std::uint64_t config_hash(const json& config);
std::string hex64(std::uint64_t v);

std::string version_string();

struct Outcome {
  json report;
  Verdict verdict = Verdict::pass;
};

// Validates the config, resets tolerances to their defaults plus the
// config's overrides, runs the command and assembles the report. Throws
// SchemaError for schema problems.
Outcome run(const json& config);

std::vector<std::string> commands();

// Both reports with the top-level timestamp removed, compared as text.
bool same_report(const json& a, const json& b);

// Reads a config, or the config embedded in a report.
json load_config(const std::string& path);

/// Typed access to a params object that remembers which keys were read, so
/// leftovers can be rejected.
class Params {
 public:
  Params(const json& j, std::string scope);

  bool has(const std::string& key) const;
  std::string str(const std::string& key) const;
  std::string str(const std::string& key, const std::string& def) const;
  std::uint64_t uint(const std::string& key) const;
  std::uint64_t uint(const std::string& key, std::uint64_t def) const;
  double real(const std::string& key) const;
  double real(const std::string& key, double def) const;
  bool flag(const std::string& key, bool def = false) const;
  std::vector<std::uint64_t> uints(const std::string& key, std::vector<std::uint64_t> def) const;
  std::vector<std::string> strs(const std::string& key, std::vector<std::string> def) const;

  // Throws on keys that were never read.
  void finish() const;

 private:
  const json& at(const std::string& key) const;
  std::string field(const std::string& key) const { return scope_ + "." + key; }

  const json& j_;
  std::string scope_;
  mutable std::set<std::string> used_;
};

struct Context {
  std::uint64_t seed = 0;
  json outputs;
  std::optional<std::string> output(const std::string& key) const;
  // Rejects output keys outside `allowed`.
  void allow_outputs(std::initializer_list<const char*> allowed) const;
};

// Command bodies; each fills `result` and returns the verdict.
using CommandFn = Verdict (*)(const Params&, const Context&, json& result);
CommandFn find_command(const std::string& name);

}  // namespace ptffool::cli
