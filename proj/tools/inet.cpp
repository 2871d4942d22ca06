// inet: validate, reduce, export and audit interaction-net programs.
//
// Exit codes: 0 success; 1 invalid input or confluence counterexample;
// 2 I/O failure; 3 fuel exhausted; 4 stuck (deadlock or missing rule).

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "inet/canonical.hpp"
#include "inet/combinators.hpp"
#include "inet/dot.hpp"
#include "inet/engine.hpp"
#include "inet/oracle.hpp"
#include "inet/parser.hpp"
#include "inet/report.hpp"

namespace {

using namespace inet;

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kIo = 2;
constexpr int kFuel = 3;
constexpr int kStuck = 4;

const std::string kBuiltin = "builtin:combinators";

// Carries an exit code out of the loading helpers.
struct Exit {
  int code;
};

void report_errors(const SourceDocument& doc, const std::vector<ParseError>& errors) {
  for (const auto& e : errors) std::cerr << format_error(doc, e) << "\n";
}

SourceDocument read(const std::string& path) {
  try {
    return SourceDocument::from_file(path);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    throw Exit{kIo};
  }
}

struct Loaded {
  InteractionSystem system;
  std::optional<Configuration> config;
};

// The system comes from --system; a configuration found in the same file is
// used when --config is absent.
Loaded load(const std::string& system_source, const std::string& config_path) {
  std::optional<InteractionSystem> system;
  std::optional<Configuration> config;
  if (system_source == kBuiltin) {
    system = combinator_system();
  } else {
    auto doc = read(system_source);
    auto parsed = parse_document(doc);
    if (!parsed.ok()) {
      report_errors(doc, parsed.errors);
      throw Exit{kInvalid};
    }
    if (!parsed.value->system) {
      std::cerr << system_source << ": error: no agents declaration\n";
      throw Exit{kInvalid};
    }
    system = std::move(parsed.value->system);
    config = std::move(parsed.value->config);
  }
  if (!config_path.empty()) {
    auto doc = read(config_path);
    auto parsed = parse_configuration(doc, system->signature());
    if (!parsed.ok()) {
      report_errors(doc, parsed.errors);
      throw Exit{kInvalid};
    }
    config = std::move(parsed.value);
  }
  return {std::move(*system), std::move(config)};
}

Configuration require_config(Loaded& loaded) {
  if (!loaded.config) {
    std::cerr << "error: no configuration given (use --config)\n";
    throw Exit{kInvalid};
  }
  return std::move(*loaded.config);
}

struct Options {
  std::vector<std::string> paths;
  std::string system = kBuiltin;
  std::string config;
  std::string strategy = "index";
  std::optional<std::uint64_t> seed;
  std::size_t fuel = 1'000'000;
  bool trace = false;
  std::string format = "text";
  std::size_t samples = 1000;
  std::size_t max_agents = 12;
  std::size_t max_nodes = kDefaultNodeCap;
};

Strategy strategy_of(const Options& o) {
  if (o.strategy == "fifo") return Strategy::fifo();
  if (o.strategy == "lifo") return Strategy::lifo();
  if (o.strategy == "index") return Strategy::by_index();
  if (!o.seed) {
    std::cerr << "error: --strategy random needs --seed\n";
    throw Exit{kInvalid};
  }
  return Strategy::random(*o.seed);
}

int cmd_check(const Options& o) {
  if (o.paths.empty()) {
    std::cerr << "error: no input files\n";
    return kInvalid;
  }
  std::optional<InteractionSystem> fallback;
  if (o.system == kBuiltin) {
    fallback = combinator_system();
  } else {
    try {
      fallback = load(o.system, "").system;
    } catch (const Exit& e) {
      return e.code;
    }
  }
  int status = kOk;
  for (const auto& path : o.paths) {
    SourceDocument doc;
    try {
      doc = SourceDocument::from_file(path);
    } catch (const IoError& e) {
      std::cerr << "error: " << e.what() << "\n";
      status = kIo;
      continue;
    }
    auto parsed = parse_document(doc, &fallback->signature());
    if (!parsed.ok()) {
      report_errors(doc, parsed.errors);
      if (status == kOk) status = kInvalid;
    }
  }
  return status;
}

int cmd_run(const Options& o) {
  auto loaded = load(o.system, o.config);
  auto config = require_config(loaded);
  const auto& sig = loaded.system.signature();
  auto result = normalize(config, loaded.system, strategy_of(o), o.fuel, o.trace);
  if (o.format == "structured") {
    std::cout << format_structured(result, sig);
  } else if (o.format == "dot") {
    std::cout << to_dot(result.final, sig);
  } else {
    std::cout << format_text(result, sig);
  }
  switch (result.status) {
    case Status::normal:
      return kOk;
    case Status::fuel_exhausted:
      return kFuel;
    default:
      return kStuck;
  }
}

int cmd_dot(const Options& o) {
  auto loaded = load(o.system, o.config);
  auto config = require_config(loaded);
  std::cout << to_dot(config, loaded.system.signature());
  return kOk;
}

int cmd_confluence(const Options& o) {
  auto loaded = load(o.system, "");
  const auto& sig = loaded.system.signature();
  auto audit = audit_confluence(loaded.system, o.samples, o.max_agents, o.max_nodes, o.seed.value_or(0));

  if (o.format == "structured") {
    for (const auto& sample : audit.samples) {
      if (!sample.failed()) continue;
      nlohmann::json j{{"type", "counterexample"}, {"sample", sample.index}, {"config", render(sample.config, sig)}};
      for (const auto& w : sample.witness) j["witness"].push_back(render(w, sig));
      std::cout << j.dump() << "\n";
    }
    nlohmann::json summary{{"type", "summary"},           {"samples", o.samples},
                           {"passed", audit.passed},      {"failed", audit.failed},
                           {"inconclusive", audit.inconclusive}};
    std::cout << summary.dump() << "\n";
  } else {
    for (const auto& sample : audit.samples) {
      if (!sample.failed()) continue;
      std::cout << "counterexample in sample " << sample.index << "\n";
      std::cout << "  start: " << render(sample.config, sig) << "\n";
      if (sample.diamond.verdict == Verdict::fails) {
        std::cout << "  fork:  " << render(sample.witness[0], sig) << "\n";
        std::cout << "  left:  " << render(sample.witness[1], sig) << "\n";
        std::cout << "  right: " << render(sample.witness[2], sig) << "\n";
      } else {
        for (const auto& w : sample.witness) std::cout << "  normal form: " << render(w, sig) << "\n";
      }
    }
    std::cout << "samples: " << o.samples << "\n";
    std::cout << "passed: " << audit.passed << "\n";
    std::cout << "failed: " << audit.failed << "\n";
    std::cout << "inconclusive: " << audit.inconclusive << "\n";
  }
  if (audit.inconclusive > 0) {
    std::cerr << "warning: " << audit.inconclusive << " of " << o.samples
              << " samples inconclusive (reduction graph truncated at " << o.max_nodes << " nodes or "
              << kDefaultCanonicalCap << " agents)\n";
  }
  return audit.failed == 0 ? kOk : kInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interaction nets: check, reduce, export and audit."};
  app.require_subcommand(1);
  Options o;

  auto add_system = [&](CLI::App* cmd) {
    cmd->add_option("--system", o.system, "System file or " + kBuiltin)->capture_default_str();
  };
  auto add_config = [&](CLI::App* cmd) { cmd->add_option("--config", o.config, "Configuration file"); };

  auto* check = app.add_subcommand("check", "Parse and validate files");
  check->add_option("paths", o.paths, "Files to check")->required();
  add_system(check);

  auto* run = app.add_subcommand("run", "Reduce a configuration");
  add_system(run);
  add_config(run);
  run->add_option("--strategy", o.strategy, "Redex selection")
      ->check(CLI::IsMember({"fifo", "lifo", "index", "random"}))
      ->capture_default_str();
  run->add_option("--seed", o.seed, "Seed for --strategy random");
  run->add_option("--fuel", o.fuel, "Maximum number of interactions")->capture_default_str();
  run->add_flag("--trace", o.trace, "Print every step");
  run->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"text", "structured", "dot"}))
      ->capture_default_str();

  auto* dot = app.add_subcommand("dot", "Print a configuration as a DOT graph");
  add_system(dot);
  add_config(dot);

  auto* confluence = app.add_subcommand("confluence", "Audit strong confluence on random configurations");
  add_system(confluence);
  confluence->add_option("--samples", o.samples, "Number of configurations")->capture_default_str();
  confluence->add_option("--max-agents", o.max_agents, "Agents per configuration")->capture_default_str();
  confluence->add_option("--max-nodes", o.max_nodes, "Reduction graph size cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  confluence->add_option("--seed", o.seed, "Sample seed");
  confluence->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"text", "structured"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*check) return cmd_check(o);
    if (*run) return cmd_run(o);
    if (*dot) return cmd_dot(o);
    if (*confluence) return cmd_confluence(o);
  } catch (const Exit& e) {
    return e.code;
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kOk;
}
