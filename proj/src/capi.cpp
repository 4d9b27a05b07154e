#include <cstdlib>
#include <cstring>
#include <set>
#include <string>

#include "json.hpp"
#include "mpgen/config.hpp"
#include "mpgen/mpgen.h"
#include "mpgen/trace_io.hpp"
#include "mpgen/verify.hpp"

struct mpgen_config {
  mpgen::RunConfig config;
  std::string source;
};

struct mpgen_trace {
  mpgen::Trace trace;
};

struct mpgen_report {
  mpgen::VerificationReport report;
  mpgen::ReportMeta meta;
};

namespace {

thread_local std::string last_error;

mpgen_status fail(mpgen_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Maps exceptions escaping the core onto status codes.
template <class F>
mpgen_status guarded(F&& body) {
  try {
    return body();
  } catch (const mpgen::MalformedTrace& err) {
    return fail(MPGEN_ERR_TRACE, err.what());
  } catch (const mpgen::ConfigError& err) {
    return fail(MPGEN_ERR_RUNTIME, std::string("config: ") + err.what());
  } catch (const mpgen::SuiteValidationError& err) {
    return fail(MPGEN_ERR_RUNTIME, std::string("suite validation: ") + err.what());
  } catch (const std::exception& err) {
    return fail(MPGEN_ERR_RUNTIME, err.what());
  } catch (...) {
    return fail(MPGEN_ERR_RUNTIME, "unknown error");
  }
}

char* duplicate(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* mpgen_version(void) { return "1.0.0"; }
const char* mpgen_last_error(void) { return last_error.c_str(); }
void mpgen_string_free(char* s) { std::free(s); }

mpgen_status mpgen_config_parse(const char* json, mpgen_config** out) {
  if (!json || !out) return fail(MPGEN_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new mpgen_config{mpgen::parse_config(json), "<memory>"};
    return MPGEN_OK;
  });
}

mpgen_status mpgen_config_load(const char* path, mpgen_config** out) {
  if (!path || !out) return fail(MPGEN_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new mpgen_config{mpgen::load_config(path), path};
    return MPGEN_OK;
  });
}

mpgen_status mpgen_config_serialize(const mpgen_config* cfg, char** out) {
  if (!cfg || !out) return fail(MPGEN_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = duplicate(mpgen::serialize_config(cfg->config));
    return MPGEN_OK;
  });
}

uint64_t mpgen_config_horizon(const mpgen_config* cfg) { return cfg ? cfg->config.horizon : 0; }
const char* mpgen_config_out_path(const mpgen_config* cfg) { return cfg ? cfg->config.out.c_str() : ""; }
void mpgen_config_free(mpgen_config* cfg) { delete cfg; }

mpgen_status mpgen_run(const mpgen_config* cfg, mpgen_trace** out) {
  if (!cfg || !out) return fail(MPGEN_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new mpgen_trace{mpgen::run_config(cfg->config)};
    return MPGEN_OK;
  });
}

mpgen_status mpgen_reference_run(const mpgen_config* cfg, mpgen_trace** out) {
  if (!cfg || !out) return fail(MPGEN_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    const auto suites = mpgen::build_suites(cfg->config);
    *out = new mpgen_trace{mpgen::reference_run(suites.functionals, cfg->config.horizon, cfg->config.snapshot_every)};
    return MPGEN_OK;
  });
}

mpgen_status mpgen_trace_parse(const char* text, mpgen_trace** out) {
  if (!text || !out) return fail(MPGEN_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new mpgen_trace{mpgen::parse_trace(text)};
    return MPGEN_OK;
  });
}

mpgen_status mpgen_trace_load(const char* path, mpgen_trace** out) {
  if (!path || !out) return fail(MPGEN_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new mpgen_trace{mpgen::load_trace(path)};
    return MPGEN_OK;
  });
}

mpgen_status mpgen_trace_write(const mpgen_trace* trace, const char* path) {
  if (!trace || !path) return fail(MPGEN_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    mpgen::write_trace(trace->trace, path);
    return MPGEN_OK;
  });
}

mpgen_status mpgen_trace_serialize(const mpgen_trace* trace, char** out) {
  if (!trace || !out) return fail(MPGEN_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = duplicate(mpgen::serialize_trace(trace->trace));
    return MPGEN_OK;
  });
}

uint64_t mpgen_trace_horizon(const mpgen_trace* trace) { return trace ? trace->trace.horizon() : 0; }

size_t mpgen_trace_action_count(const mpgen_trace* trace) {
  if (!trace) return 0;
  size_t n = 0;
  for (const auto& ev : trace->trace.events)
    if (ev.action) ++n;
  return n;
}

size_t mpgen_trace_members(const mpgen_trace* trace, int side, uint64_t* buf, size_t cap) {
  if (!trace || side < 0 || side > 1) return 0;
  const auto& m = trace->trace.summary.members[static_cast<unsigned>(side)];
  for (size_t i = 0; i < m.size() && i < cap && buf; ++i) buf[i] = m[i];
  return m.size();
}

void mpgen_trace_free(mpgen_trace* trace) { delete trace; }

mpgen_status mpgen_verify(const mpgen_trace* trace, const mpgen_config* cfg, const char* checks, mpgen_report** out) {
  if (!trace || !cfg || !out) return fail(MPGEN_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    const auto selected = mpgen::parse_check_list(checks ? checks : "");
    auto* r = new mpgen_report{mpgen::verify_trace(trace->trace, cfg->config, selected),
                               {trace->trace.horizon(), cfg->source}};
    *out = r;
    return r->report.failed() ? MPGEN_CHECK_FAILED : MPGEN_OK;
  });
}

int mpgen_report_failed(const mpgen_report* report) { return report && report->report.failed() ? 1 : 0; }
size_t mpgen_report_check_count(const mpgen_report* report) { return report ? report->report.checks.size() : 0; }

mpgen_status mpgen_report_serialize(const mpgen_report* report, char** out) {
  if (!report || !out) return fail(MPGEN_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = duplicate(mpgen::serialize_report(report->report, report->meta));
    return MPGEN_OK;
  });
}

void mpgen_report_free(mpgen_report* report) { delete report; }

mpgen_status mpgen_psi(const mpgen_trace* trace, const mpgen_config* cfg, uint64_t e0, uint64_t e1, uint64_t bound,
                       char** out) {
  if (!trace || !cfg || !out) return fail(MPGEN_ERR_ARGUMENT, "null argument");
  if (bound == 0) return fail(MPGEN_ERR_ARGUMENT, "bound must be >= 1");
  return guarded([&] {
    const auto suites = mpgen::build_suites(cfg->config);
    const auto table = mpgen::synthesize_psi(trace->trace, suites.operators, e0, e1);
    nlohmann::json entries = nlohmann::json::array();
    std::set<mpgen::Natural> domain;
    for (const auto& [n, entry] : table.entries) {
      entries.push_back({n, entry.value, entry.found_at});
      domain.insert(n);
    }
    const auto density = mpgen::partial_density(domain, bound);
    nlohmann::json j = {{"e0", e0},       {"e1", e1},           {"horizon", table.horizon},
                        {"bound", bound}, {"entries", entries}, {"domain_density", density.str()}};
    if (cfg->config.end_to_end) {
      nlohmann::json wrong = nlohmann::json::array();
      for (const auto& [n, entry] : table.entries)
        if (entry.value != mpgen::target_bit(cfg->config.end_to_end->target, n)) wrong.push_back(n);
      j["target_disagreements"] = wrong;
    }
    *out = duplicate(j.dump() + "\n");
    return MPGEN_OK;
  });
}

}  // extern "C"
