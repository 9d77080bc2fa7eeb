#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli.hpp"
#include "ptffool/common.hpp"

namespace {

using ptffool::cli::json;

enum class Kind { str, uint, real, flag, no_flag, uint_list, str_list, output };

struct OptionSpec {
  const char* flag;
  const char* key;
  Kind kind;
  const char* help;
};

struct CommandSpec {
  const char* group;  // nullptr for top-level commands
  const char* name;
  const char* help;
  std::vector<OptionSpec> options;
};

const std::vector<CommandSpec>& command_specs() {
  static const std::vector<CommandSpec> specs = {
      {"kwise", "build", "Build a k-wise independent space over {-1,1}^n",
       {{"--n", "n", Kind::uint, "dimension"},
        {"--k", "k", Kind::uint, "independence order"},
        {"--method", "method", Kind::str, "vandermonde_bit or bch_parity"},
        {"--out", "out", Kind::output, "space file to write"}}},
      {"kwise", "verify", "Check zero bias on all parities of size <= k",
       {{"--space", "space", Kind::str, "space file"}, {"--k", "k", Kind::uint, "order (default: claimed)"}}},
      {"poly", "info", "Fourier mass, influences, regularity and critical index",
       {{"--poly", "poly", Kind::str, "polynomial file"}, {"--tau", "tau", Kind::real, "regularity threshold"}}},
      {"poly", "decompose", "Spectral decomposition p1 - p2 + p3 + p4 + C",
       {{"--poly", "poly", Kind::str, "polynomial file"},
        {"--delta", "delta", Kind::real, "eigenvalue threshold"},
        {"--out", "out", Kind::output, "decomposition JSON to write"}}},
      {nullptr, "moments", "Absolute moments against the eigenvalue or hypercontractive bound",
       {{"--poly", "poly", Kind::str, "polynomial file"},
        {"--k", "k", Kind::uint_list, "moment orders"},
        {"--mode", "mode", Kind::str, "exact or mc"},
        {"--center", "center", Kind::str, "trace or none"},
        {"--samples", "samples", Kind::uint, "Monte Carlo samples"}}},
      {"ftmol", "check", "FT-mollifier numerics",
       {{"--d", "d", Kind::uint, "dimension (1 or 2)"},
        {"--c", "c", Kind::real, "scale"},
        {"--suite", "suite", Kind::str_list, "unit, l1, tail, moment, mollify"}}},
      {"fool", "exact", "Exact deviation of a stored space",
       {{"--poly", "poly", Kind::str, "polynomial file"}, {"--space", "space", Kind::str, "space file"}}},
      {"fool", "lp", "Worst-case deviation over all k-wise independent distributions",
       {{"--poly", "poly", Kind::str, "polynomial file"},
        {"--k", "k", Kind::uint, "independence order"},
        {"--sense", "sense", Kind::str, "max, min or both"},
        {"--no-certificates", "certificates", Kind::no_flag, "skip sandwich certificates"},
        {"--permutation-seed", "permutation_seed", Kind::uint, "re-solve with permuted columns"},
        {"--emit-witness", "witness", Kind::output, "extremal distribution to write"},
        {"--emit-cert", "cert", Kind::output, "sandwich certificate to write"}}},
      {"fool", "sweep", "LP deviation for k = 1..kmax",
       {{"--poly", "poly", Kind::str, "polynomial file"},
        {"--kmax", "kmax", Kind::uint, "largest order"},
        {"--csv", "csv", Kind::output, "CSV to write"}}},
      {"tree", "build", "Restriction decision tree",
       {{"--poly", "poly", Kind::str, "polynomial file"},
        {"--tau", "tau", Kind::real, "regularity threshold"},
        {"--max-depth", "max_depth", Kind::uint, "depth cap (0: default)"},
        {"--space", "space", Kind::str, "space for reach probabilities"},
        {"--probes", "probes", Kind::uint, "restriction probes per leaf"},
        {"--out", "out", Kind::output, "tree JSON to write"}}},
      {"gw", "round", "Hyperplane rounding with a k-wise independent Gaussian space",
       {{"--graph", "graph", Kind::str, "graph file"},
        {"--cycle", "cycle", Kind::uint, "use the n-cycle"},
        {"--embedding", "embedding", Kind::str, "embedding file"},
        {"--generate", "generate", Kind::str, "antipodal, cycle_optimal or random_unit"},
        {"--dim", "dim", Kind::uint, "dimension for generated embeddings"},
        {"--eps", "eps", Kind::real, "accuracy; k defaults to ceil(4/eps^2)"},
        {"--k", "k", Kind::uint, "independence order"},
        {"--trials", "trials", Kind::uint, "Monte Carlo trials"},
        {"--method", "method", Kind::str, "inverse_cdf or binomial_sum"},
        {"--resolution", "resolution", Kind::uint, "q (inverse_cdf) or odd N (binomial_sum)"},
        {"--exhaustive", "exhaustive", Kind::flag, "enumerate every seed"},
        {"--reference", "reference", Kind::flag, "also round with independent Gaussians"},
        {"--csv", "csv", Kind::output, "CSV to write"}}},
      {nullptr, "suite", "Per-module acceptance subsets",
       {{"name", "name", Kind::str, "all or kwise, poly, moments, ftmol, fool, tree, gw"},
        {"--quick", "quick", Kind::flag, "smaller instances"}}},
  };
  return specs;
}

struct Bound {
  const CommandSpec* spec = nullptr;
  CLI::App* app = nullptr;
  std::vector<std::pair<const OptionSpec*, CLI::Option*>> options;
  std::map<std::string, std::string> strs;
  std::map<std::string, std::uint64_t> uints;
  std::map<std::string, double> reals;
  std::map<std::string, bool> flags;
  std::map<std::string, std::vector<std::uint64_t>> uint_lists;
  std::map<std::string, std::vector<std::string>> str_lists;
};

void bind(Bound& b) {
  for (const auto& o : b.spec->options) {
    const std::string key = o.key;
    CLI::Option* opt = nullptr;
    switch (o.kind) {
      case Kind::str:
      case Kind::output: opt = b.app->add_option(o.flag, b.strs[key], o.help); break;
      case Kind::uint: opt = b.app->add_option(o.flag, b.uints[key], o.help); break;
      case Kind::real: opt = b.app->add_option(o.flag, b.reals[key], o.help); break;
      case Kind::flag:
      case Kind::no_flag: opt = b.app->add_flag(o.flag, b.flags[key], o.help); break;
      case Kind::uint_list: opt = b.app->add_option(o.flag, b.uint_lists[key], o.help)->delimiter(','); break;
      case Kind::str_list: opt = b.app->add_option(o.flag, b.str_lists[key], o.help)->delimiter(','); break;
    }
    b.options.emplace_back(&o, opt);
  }
}

json collect(const Bound& b, json& outputs) {
  json params = json::object();
  for (const auto& [o, opt] : b.options) {
    if (opt->count() == 0) continue;
    const std::string key = o->key;
    switch (o->kind) {
      case Kind::str: params[key] = b.strs.at(key); break;
      case Kind::output: outputs[key] = b.strs.at(key); break;
      case Kind::uint: params[key] = b.uints.at(key); break;
      case Kind::real: params[key] = b.reals.at(key); break;
      case Kind::flag: params[key] = true; break;
      case Kind::no_flag: params[key] = false; break;
      case Kind::uint_list: params[key] = b.uint_lists.at(key); break;
      case Kind::str_list: params[key] = b.str_lists.at(key); break;
    }
  }
  return params;
}

json parse_tolerances(const std::vector<std::string>& items) {
  json t = json::object();
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ptffool::cli::SchemaError("tolerances", "expected name=value, got " + item);
    const std::string name = item.substr(0, eq);
    try {
      std::size_t used = 0;
      const double v = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument(item);
      t[name] = v;
    } catch (const std::logic_error&) {
      throw ptffool::cli::SchemaError("tolerances." + name, "not a number");
    }
  }
  return t;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream os(path);
  ptffool::require(static_cast<bool>(os), ptffool::ErrorKind::resource, "cannot write " + path);
  os << j.dump(2) << "\n";
}

int error_exit(ptffool::ErrorKind kind) {
  using ptffool::ErrorKind;
  switch (kind) {
    case ErrorKind::parse:
    case ErrorKind::invalid_argument:
    case ErrorKind::invalid_order:
    case ErrorKind::configuration: return ptffool::cli::kExitUsage;
    case ErrorKind::inconclusive:
    case ErrorKind::tolerance: return ptffool::cli::kExitInconclusive;
    default: return ptffool::cli::kExitFail;
  }
}

int emit(const ptffool::cli::Outcome& out, const std::string& report_path) {
  if (report_path.empty()) std::cout << out.report.dump(2) << "\n";
  else write_json(report_path, out.report);
  std::cerr << out.report["command"].get<std::string>() << ": " << ptffool::cli::to_string(out.verdict) << "\n";
  return ptffool::cli::exit_code(out.verdict);
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = ptffool::cli;
  CLI::App app{"Fooling degree-2 threshold functions with k-wise independence"};
  app.set_version_flag("--version", cli::version_string());
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string report_path;
  std::string save_config;
  std::vector<std::string> tol_items;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--report", report_path, "report JSON (default: stdout)");
    sub->add_option("--tol", tol_items, "tolerance override name=value");
    sub->add_option("--save-config", save_config, "write the run config");
  };

  std::map<std::string, CLI::App*> groups;
  std::vector<std::unique_ptr<Bound>> bound;
  for (const auto& spec : command_specs()) {
    CLI::App* parent = &app;
    if (spec.group) {
      auto& g = groups[spec.group];
      if (!g) {
        g = app.add_subcommand(spec.group, std::string(spec.group) + " commands");
        g->require_subcommand(1);
      }
      parent = g;
    }
    auto b = std::make_unique<Bound>();
    b->spec = &spec;
    b->app = parent->add_subcommand(spec.name, spec.help);
    bind(*b);
    add_common(b->app);
    bound.push_back(std::move(b));
  }

  std::string replay_config;
  std::string compare_path;
  CLI::App* replay = app.add_subcommand("replay", "Re-run a stored config or report");
  replay->add_option("--config", replay_config, "config or report JSON")->required();
  replay->add_option("--report", report_path, "report JSON (default: stdout)");
  replay->add_option("--compare", compare_path, "report to compare against, timestamp excluded");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kExitUsage;
  }

  try {
    if (replay->parsed()) {
      const json config = cli::load_config(replay_config);
      const auto out = cli::run(config);
      int rc = emit(out, report_path);
      if (!compare_path.empty()) {
        std::ifstream is(compare_path);
        ptffool::require(static_cast<bool>(is), ptffool::ErrorKind::resource, "cannot read " + compare_path);
        const bool same = cli::same_report(json::parse(is), out.report);
        std::cerr << "replay " << (same ? "identical" : "differs") << "\n";
        if (!same) rc = cli::kExitFail;
      }
      return rc;
    }
    for (const auto& b : bound) {
      if (!b->app->parsed()) continue;
      json outputs = json::object();
      json params = collect(*b, outputs);
      const std::string command = b->spec->group ? std::string(b->spec->group) + " " + b->spec->name : b->spec->name;
      const json config = cli::make_config(command, std::move(params), seed, std::move(outputs),
                                           parse_tolerances(tol_items));
      if (!save_config.empty()) write_json(save_config, config);
      return emit(cli::run(config), report_path);
    }
  } catch (const cli::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitUsage;
  } catch (const ptffool::Error& e) {
    std::cerr << "error (" << ptffool::to_string(e.kind()) << "): " << e.what() << "\n";
    return error_exit(e.kind());
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitUsage;
  }
  return cli::kExitUsage;
}
