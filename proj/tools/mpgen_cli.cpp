// Command-line front end: run, verify, psi.
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "mpgen/mpgen.h"

namespace {

struct ConfigDeleter {
  void operator()(mpgen_config* p) const { mpgen_config_free(p); }
};
struct TraceDeleter {
  void operator()(mpgen_trace* p) const { mpgen_trace_free(p); }
};
struct ReportDeleter {
  void operator()(mpgen_report* p) const { mpgen_report_free(p); }
};
struct StringDeleter {
  void operator()(char* p) const { mpgen_string_free(p); }
};

using ConfigPtr = std::unique_ptr<mpgen_config, ConfigDeleter>;
using TracePtr = std::unique_ptr<mpgen_trace, TraceDeleter>;
using ReportPtr = std::unique_ptr<mpgen_report, ReportDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

int report_error(mpgen_status status, const std::string& context) {
  std::cerr << "mpgen: " << context << ": " << mpgen_last_error() << "\n";
  return static_cast<int>(status == MPGEN_ERR_ARGUMENT ? MPGEN_ERR_RUNTIME : status);
}

bool write_text(const std::string& path, const char* text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return false;
  out << text;
  return static_cast<bool>(out.flush());
}

int cmd_run(const std::string& config_path, std::string out_path) {
  mpgen_config* raw_cfg = nullptr;
  if (auto st = mpgen_config_load(config_path.c_str(), &raw_cfg); st != MPGEN_OK) return report_error(st, config_path);
  ConfigPtr cfg(raw_cfg);
  if (out_path.empty()) out_path = mpgen_config_out_path(cfg.get());
  if (out_path.empty()) {
    std::cerr << "mpgen: no output path; pass --out or set \"out\" in the config\n";
    return MPGEN_ERR_RUNTIME;
  }
  mpgen_trace* raw_trace = nullptr;
  if (auto st = mpgen_run(cfg.get(), &raw_trace); st != MPGEN_OK) return report_error(st, "run");
  TracePtr trace(raw_trace);
  if (auto st = mpgen_trace_write(trace.get(), out_path.c_str()); st != MPGEN_OK) return report_error(st, out_path);
  return 0;
}

int cmd_verify(const std::string& trace_path, const std::string& config_path, const std::string& checks,
               const std::string& report_path) {
  mpgen_trace* raw_trace = nullptr;
  if (auto st = mpgen_trace_load(trace_path.c_str(), &raw_trace); st != MPGEN_OK) return report_error(st, trace_path);
  TracePtr trace(raw_trace);
  mpgen_config* raw_cfg = nullptr;
  if (auto st = mpgen_config_load(config_path.c_str(), &raw_cfg); st != MPGEN_OK) return report_error(st, config_path);
  ConfigPtr cfg(raw_cfg);

  mpgen_report* raw_report = nullptr;
  const auto verdict = mpgen_verify(trace.get(), cfg.get(), checks.c_str(), &raw_report);
  if (verdict != MPGEN_OK && verdict != MPGEN_CHECK_FAILED) return report_error(verdict, "verify");
  ReportPtr report(raw_report);

  char* raw_json = nullptr;
  if (auto st = mpgen_report_serialize(report.get(), &raw_json); st != MPGEN_OK) return report_error(st, "report");
  StringPtr json(raw_json);
  if (report_path.empty()) {
    std::cout << json.get();
  } else if (!write_text(report_path, json.get())) {
    std::cerr << "mpgen: cannot write report to " << report_path << "\n";
    return MPGEN_ERR_RUNTIME;
  }
  if (verdict == MPGEN_CHECK_FAILED) std::cerr << "mpgen: verification failed\n";
  return static_cast<int>(verdict);
}

int cmd_psi(const std::string& trace_path, const std::string& config_path, std::uint64_t e0, std::uint64_t e1,
            std::uint64_t bound) {
  mpgen_trace* raw_trace = nullptr;
  if (auto st = mpgen_trace_load(trace_path.c_str(), &raw_trace); st != MPGEN_OK) return report_error(st, trace_path);
  TracePtr trace(raw_trace);
  mpgen_config* raw_cfg = nullptr;
  if (auto st = mpgen_config_load(config_path.c_str(), &raw_cfg); st != MPGEN_OK) return report_error(st, config_path);
  ConfigPtr cfg(raw_cfg);
  char* raw_json = nullptr;
  if (auto st = mpgen_psi(trace.get(), cfg.get(), e0, e1, bound, &raw_json); st != MPGEN_OK)
    return report_error(st, "psi");
  StringPtr json(raw_json);
  std::cout << json.get();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-horizon simulator for the generic-degree minimal pair construction"};
  app.set_version_flag("--version", std::string(mpgen_version()));
  app.require_subcommand(1);

  std::string config_path, out_path, trace_path, checks = "all", report_path;
  std::uint64_t e0 = 0, e1 = 1, bound = 1000;

  auto* run = app.add_subcommand("run", "Run the construction and write a trace");
  run->add_option("--config", config_path, "Config file")->required();
  run->add_option("--out", out_path, "Trace output path (overrides the config)");

  auto* verify = app.add_subcommand("verify", "Check a trace and write a report");
  verify->add_option("--trace", trace_path, "Trace file")->required();
  verify->add_option("--config", config_path, "Config file the trace was produced from")->required();
  verify->add_option("--checks", checks, "Comma-separated checks or 'all'");
  verify->add_option("--report", report_path, "Report output path (default: stdout)");

  auto* psi = app.add_subcommand("psi", "Synthesize the reduction table from a trace");
  psi->add_option("--trace", trace_path, "Trace file")->required();
  psi->add_option("--config", config_path, "Config file")->required();
  psi->add_option("--e0", e0, "Operator index for side 0")->required();
  psi->add_option("--e1", e1, "Operator index for side 1")->required();
  psi->add_option("--bound", bound, "Density bound N")->required()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : MPGEN_ERR_RUNTIME;
  }

  if (*run) return cmd_run(config_path, out_path);
  if (*verify) return cmd_verify(trace_path, config_path, checks, report_path);
  return cmd_psi(trace_path, config_path, e0, e1, bound);
}
