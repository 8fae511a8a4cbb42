#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>

#include "commands.hpp"
#include "config.hpp"
#include "rankfield/errors.hpp"

namespace {

using rankfield::cli::ConfigError;
using rankfield::cli::Json;
using rankfield::cli::KeySpec;
using rankfield::cli::ValueType;

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

std::string flag_name(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return "--" + key;
}

void setup_logging() {
  auto logger = spdlog::stderr_logger_st("rankfield");
  logger->set_pattern("rankfield [%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("RANKFIELD_LOG")) {
    const std::string value = env;
    const auto level = spdlog::level::from_str(value);
    if (level == spdlog::level::off && value != "off") {
      throw ConfigError("RANKFIELD_LOG: unknown level '" + value + "'");
    }
    spdlog::set_level(level);
  }
}

/// A flag bound to one config key; `process` flags fill the process object.
struct BoundFlag {
  CLI::Option* option;
  KeySpec spec;
  bool process;
  std::string value;
};

struct Subcommand {
  CLI::App* app = nullptr;
  std::string config;
  std::vector<std::string> inputs;
  std::vector<std::unique_ptr<BoundFlag>> flags;
};

void bind_flag(Subcommand& sub, const KeySpec& spec, bool process, const std::string& name) {
  auto flag = std::make_unique<BoundFlag>();
  flag->spec = spec;
  flag->process = process;
  flag->option = sub.app->add_option(name, flag->value, spec.help);
  sub.flags.push_back(std::move(flag));
}

Json collect_flags(const Subcommand& sub) {
  Json flags = Json::object();
  if (!sub.inputs.empty()) flags["inputs"] = sub.inputs;
  for (const auto& f : sub.flags) {
    if (f->option->count() == 0) continue;
    auto value = rankfield::cli::parse_flag_value(f->spec, f->value);
    if (f->process) {
      flags["process"][f->spec.key] = std::move(value);
    } else {
      flags[f->spec.key] = std::move(value);
    }
  }
  return flags;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    setup_logging();
  } catch (const ConfigError& e) {
    std::cerr << "rankfield: error: " << e.what() << "\n";
    return kExitConfig;
  }

  CLI::App app{"Persistent-homology rank functions of spatial point patterns"};
  app.require_subcommand(1, 1);
  std::map<std::string, Subcommand> subs;
  for (const auto& name : rankfield::cli::command_names()) {
    auto& sub = subs[name];
    sub.app = app.add_subcommand(name, rankfield::cli::command_description(name));
    sub.app->add_option("--config", sub.config, "JSON run configuration; flags override it")
        ->check(CLI::ExistingFile);
    for (const auto& spec : rankfield::cli::command_keys(name)) {
      switch (spec.type) {
        case ValueType::Strings:
          sub.app->add_option(spec.key, sub.inputs, spec.help);
          break;
        case ValueType::Processes:
          break;  // config only
        case ValueType::Process:
          for (const auto& p : rankfield::cli::process_keys()) {
            bind_flag(sub, p, true, p.key == "kind" ? "--process" : flag_name(p.key));
          }
          break;
        default:
          bind_flag(sub, spec, false, spec.key == "input" ? spec.key : flag_name(spec.key));
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  const auto* selected = app.get_subcommands().front();
  const auto& sub = subs.at(selected->get_name());
  try {
    const auto file = sub.config.empty() ? Json() : rankfield::cli::load_config_file(sub.config);
    const rankfield::cli::Settings settings(selected->get_name(), file, collect_flags(sub));
    const auto start = std::chrono::steady_clock::now();
    auto result = rankfield::cli::run_command(settings);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    Json summary;
    summary["command"] = settings.command();
    for (auto& [key, value] : result.items()) summary[key] = std::move(value);
    summary["seconds"] = elapsed.count();
    std::cout << summary.dump() << std::endl;
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "rankfield: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "rankfield: error: " << e.what() << "\n";
    return kExitFailure;
  }
}
