#include "cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "ptffool/common.hpp"

#ifndef PTFFOOL_VERSION
#define PTFFOOL_VERSION "0.0.0"
#endif
#ifndef PTFFOOL_GIT_DESCRIBE
#define PTFFOOL_GIT_DESCRIBE "unknown"
#endif

namespace ptffool::cli {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::pass: return kExitPass;
    case Verdict::fail: return kExitFail;
    case Verdict::inconclusive: return kExitInconclusive;
  }
  return kExitFail;
}

json make_config(const std::string& command, json params, std::uint64_t seed, json outputs, json tolerances) {
  json c;
  c["command"] = command;
  c["params"] = std::move(params);
  c["seed"] = seed;
  c["outputs"] = std::move(outputs);
  c["tolerances"] = std::move(tolerances);
  return c;
}

std::uint64_t config_hash(const json& config) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : config.dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return s;
}

std::string version_string() { return std::string("ptf-fool ") + PTFFOOL_VERSION + " (" + PTFFOOL_GIT_DESCRIBE + ")"; }

namespace {

bool non_negative_integer(const json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void apply_tolerances(const json& overrides) {
  tolerances() = Tolerances{};
  if (!overrides.is_object()) throw SchemaError("tolerances", "must be an object");
  for (const auto& [name, value] : overrides.items()) {
    if (!value.is_number()) throw SchemaError("tolerances." + name, "must be a number");
    if (!set_tolerance(name, value.get<double>())) throw SchemaError("tolerances." + name, "unknown tolerance");
  }
}

}  // namespace

Outcome run(const json& config) {
  if (!config.is_object()) throw SchemaError("config", "must be an object");
  for (const auto& [key, value] : config.items()) {
    if (key != "command" && key != "params" && key != "seed" && key != "outputs" && key != "tolerances")
      throw SchemaError(key, "unknown field");
  }
  if (!config.contains("command") || !config["command"].is_string()) throw SchemaError("command", "missing");
  const std::string command = config["command"].get<std::string>();
  CommandFn fn = find_command(command);
  if (fn == nullptr) throw SchemaError("command", "unknown command " + command);
  if (!config.contains("seed") || !non_negative_integer(config["seed"])) throw SchemaError("seed", "missing");
  const json params = config.value("params", json::object());
  const json outputs = config.value("outputs", json::object());
  if (!outputs.is_object()) throw SchemaError("outputs", "must be an object");
  for (const auto& [key, value] : outputs.items())
    if (!value.is_string()) throw SchemaError("outputs." + key, "must be a path");
  apply_tolerances(config.value("tolerances", json::object()));

  Context ctx;
  ctx.seed = config["seed"].get<std::uint64_t>();
  ctx.outputs = outputs;
  Params p(params, "params");
  json result = json::object();
  Verdict verdict = fn(p, ctx, result);

  Outcome out;
  out.verdict = verdict;
  out.report["command"] = command;
  out.report["config"] = config;
  out.report["config_hash"] = hex64(config_hash(config));
  out.report["version"] = version_string();
  out.report["seed"] = ctx.seed;
  out.report["status"] = to_string(verdict);
  out.report["result"] = std::move(result);
  out.report["timestamp"] = utc_timestamp();
  tolerances() = Tolerances{};
  return out;
}

bool same_report(const json& a, const json& b) {
  json x = a;
  json y = b;
  x.erase("timestamp");
  y.erase("timestamp");
  return x.dump() == y.dump();
}

json load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw SchemaError("config", "cannot read " + path);
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw SchemaError("config", std::string("not JSON: ") + e.what());
  }
  if (j.is_object() && j.contains("config") && j.contains("config_hash")) return j["config"];
  return j;
}

Params::Params(const json& j, std::string scope) : j_(j), scope_(std::move(scope)) {
  if (!j_.is_object()) throw SchemaError(scope_, "must be an object");
}

bool Params::has(const std::string& key) const {
  used_.insert(key);
  return j_.contains(key);
}

const json& Params::at(const std::string& key) const {
  used_.insert(key);
  if (!j_.contains(key)) throw SchemaError(field(key), "required");
  return j_.at(key);
}

std::string Params::str(const std::string& key) const {
  const auto& v = at(key);
  if (!v.is_string()) throw SchemaError(field(key), "must be a string");
  return v.get<std::string>();
}

std::string Params::str(const std::string& key, const std::string& def) const {
  return has(key) ? str(key) : def;
}

std::uint64_t Params::uint(const std::string& key) const {
  const auto& v = at(key);
  if (!non_negative_integer(v)) throw SchemaError(field(key), "must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::uint64_t Params::uint(const std::string& key, std::uint64_t def) const {
  return has(key) ? uint(key) : def;
}

double Params::real(const std::string& key) const {
  const auto& v = at(key);
  if (!v.is_number()) throw SchemaError(field(key), "must be a number");
  return v.get<double>();
}

double Params::real(const std::string& key, double def) const { return has(key) ? real(key) : def; }

bool Params::flag(const std::string& key, bool def) const {
  if (!has(key)) return def;
  const auto& v = at(key);
  if (!v.is_boolean()) throw SchemaError(field(key), "must be a boolean");
  return v.get<bool>();
}

std::vector<std::uint64_t> Params::uints(const std::string& key, std::vector<std::uint64_t> def) const {
  if (!has(key)) return def;
  const auto& v = at(key);
  if (!v.is_array()) throw SchemaError(field(key), "must be an array");
  std::vector<std::uint64_t> out;
  for (const auto& e : v) {
    if (!non_negative_integer(e)) throw SchemaError(field(key), "entries must be non-negative integers");
    out.push_back(e.get<std::uint64_t>());
  }
  return out;
}

std::vector<std::string> Params::strs(const std::string& key, std::vector<std::string> def) const {
  if (!has(key)) return def;
  const auto& v = at(key);
  if (!v.is_array()) throw SchemaError(field(key), "must be an array");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw SchemaError(field(key), "entries must be strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

void Params::finish() const {
  for (const auto& [key, value] : j_.items())
    if (!used_.contains(key)) throw SchemaError(field(key), "unknown parameter");
}

std::optional<std::string> Context::output(const std::string& key) const {
  if (!outputs.contains(key)) return std::nullopt;
  return outputs[key].get<std::string>();
}

void Context::allow_outputs(std::initializer_list<const char*> allowed) const {
  for (const auto& [key, value] : outputs.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw SchemaError("outputs." + key, "not produced by this command");
  }
}

}  // namespace ptffool::cli
