#pragma once

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "onebit/cli/commands.hpp"
#include "onebit/cli/config.hpp"
#include "onebit/version.hpp"

namespace onebit::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfigError = 2 };

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Writes to a sibling temporary and renames it into place.
inline void write_atomically(const std::filesystem::path& path, const std::string& bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::size_t resolve_threads(std::optional<std::size_t> flag) {
  if (flag) {
    if (*flag == 0) throw ConfigError("--threads must be >= 1");
    return *flag;
  }
  if (const char* env = std::getenv("ONEBIT_RIP_THREADS"); env && *env) {
    try {
      const long v = std::stol(env);
      if (v < 1) throw ConfigError("ONEBIT_RIP_THREADS must be >= 1");
      return static_cast<std::size_t>(v);
    } catch (const std::logic_error&) {
      throw ConfigError("ONEBIT_RIP_THREADS is not an integer");
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Entry point shared by the executable and the tests. Returns the process
/// exit code: 0 all checks passed, 1 a check failed, 2 configuration error.
inline int run(int argc, const char* const* argv, std::ostream& log = std::cerr) {
  CLI::App app{"Monte-Carlo harness for 1-bit Gaussian sign embeddings", "onebit-rip"};
  app.set_version_flag("--version", kVersion);
  std::string config_path, out_path;
  std::optional<std::uint64_t> seed_flag;
  std::optional<std::size_t> threads_flag;
  bool dump_codes = false;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--seed", seed_flag, "Master seed (overrides the config)");
  app.add_option("--out", out_path, "Output CSV path (overrides the config)");
  app.add_option("--threads", threads_flag, "Worker threads; never changes output");
  app.add_flag("--dump-codes", dump_codes, "Write embedding codes next to the CSV (embed-mc)");
  app.require_subcommand(1);
  for (const char* name : {"metric-table", "embed-mc", "rip-sweep", "noisy-floor", "vc"})
    app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, log, log);
    return code == 0 ? kOk : kConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  Runner runner;
  RunContext ctx;
  nlohmann::json effective;
  std::filesystem::path csv_path;
  try {
    ConfigReader cfg = config_path.empty() ? ConfigReader(nlohmann::json::object())
                                           : ConfigReader::from_file(config_path);
    ctx.seed = cfg.get<std::uint64_t>("seed", 0);
    if (seed_flag) {
      ctx.seed = *seed_flag;
      cfg.set_effective("seed", ctx.seed);
    }
    const auto configured_out = cfg.get<std::string>("out", "");
    if (!out_path.empty()) cfg.set_effective("out", out_path);
    csv_path = out_path.empty() ? configured_out : out_path;
    if (csv_path.empty()) throw ConfigError("no output path: pass --out or set \"out\" in the config");
    if (dump_codes && command != "embed-mc") throw ConfigError("--dump-codes is only supported by embed-mc");

    if (command == "metric-table") runner = prepare_metric_table(cfg);
    else if (command == "embed-mc") runner = prepare_embed_mc(cfg);
    else if (command == "rip-sweep") runner = prepare_rip_sweep(cfg);
    else if (command == "noisy-floor") runner = prepare_noisy_floor(cfg);
    else runner = prepare_vc(cfg);
    cfg.finish();
    effective = cfg.effective();
    ctx.threads = resolve_threads(threads_flag);
    ctx.dump_codes = dump_codes;
  } catch (const ConfigError& e) {
    log << "onebit-rip: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    log << "onebit-rip: invalid configuration: " << e.what() << '\n';
    return kConfigError;
  }

  const std::string started = utc_timestamp();
  CommandOutcome outcome;
  try {
    outcome = runner(ctx);
  } catch (const std::exception& e) {
    log << "onebit-rip: " << command << " failed: " << e.what() << '\n';
    return kCheckFailed;
  }
  const int code = outcome.passed ? kOk : kCheckFailed;

  try {
    write_atomically(csv_path, outcome.csv);
    if (ctx.dump_codes) {
      std::ostringstream bin;
      for (const auto& c : outcome.codes) write_code(bin, c);
      write_atomically(csv_path.string() + ".codes.bin", bin.str());
    }
    nlohmann::json manifest = {{"tool", "onebit-rip"},
                               {"version", kVersion},
                               {"subcommand", command},
                               {"config", effective},
                               {"seed", ctx.seed},
                               {"started_at", started},
                               {"finished_at", utc_timestamp()},
                               {"trial_seeds", outcome.trial_seeds},
                               {"summary", outcome.summary},
                               {"csv", csv_path.string()},
                               {"exit_code", code}};
    write_atomically(csv_path.string() + ".manifest.json", manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    log << "onebit-rip: cannot write output: " << e.what() << '\n';
    return kConfigError;
  }
  log << "onebit-rip " << command << ": " << (outcome.passed ? "all checks passed" : "CHECK FAILED") << '\n';
  return code;
}

} // namespace onebit::cli
