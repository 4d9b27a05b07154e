#include "mpgen/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace mpgen {

using nlohmann::json;

ConfigError::ConfigError(std::string field, const std::string& message, std::size_t line)
    : std::runtime_error((line ? "line " + std::to_string(line) + ": " : std::string()) +
                         (field.empty() ? std::string() : field + ": ") + message),
      field_(std::move(field)),
      line_(line) {}

Rational EndToEndSpec::threshold_rational() const {
  return Rational(static_cast<std::uint64_t>(std::llround(threshold * 1e9)), 1'000'000'000ULL);
}

ProbeGrid RunConfig::effective_probe() const {
  if (probe) return *probe;
  ProbeGrid g;
  g.points = std::min<Natural>(std::max<Natural>(horizon, 1), 256);
  g.stages = horizon + 1;
  return g;
}

namespace {

// Strict object reader: every key must be consumed or the config is rejected.
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& get(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) throw ConfigError(sub(key), "missing field");
    return j_.at(key);
  }

  std::uint64_t natural(const std::string& key) {
    const auto& v = get(key);
    if (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)
      throw ConfigError(sub(key), "must be >= 0");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      throw ConfigError(sub(key), "expected a nonnegative integer");
    return v.get<std::uint64_t>();
  }

  std::uint64_t natural_or(const std::string& key, std::uint64_t fallback) {
    return has(key) ? natural(key) : fallback;
  }

  Bit bit(const std::string& key) {
    const auto v = natural(key);
    if (v > 1) throw ConfigError(sub(key), "expected 0 or 1");
    return static_cast<Bit>(v);
  }

  double number(const std::string& key) {
    const auto& v = get(key);
    if (!v.is_number()) throw ConfigError(sub(key), "expected a number");
    return v.get<double>();
  }

  std::string string(const std::string& key) {
    const auto& v = get(key);
    if (!v.is_string()) throw ConfigError(sub(key), "expected a string");
    return v.get<std::string>();
  }

  const json& array(const std::string& key) {
    const auto& v = get(key);
    if (!v.is_array()) throw ConfigError(sub(key), "expected an array");
    return v;
  }

  std::string sub(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  const std::string& path() const { return path_; }

  void finish() const {
    for (const auto& [key, _] : j_.items())
      if (!seen_.contains(key)) throw ConfigError(sub(key), "unknown field");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::string indexed(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

template <class Enum>
Enum parse_enum(const std::string& field, const std::string& text,
                std::initializer_list<std::pair<const char*, Enum>> names) {
  for (const auto& [name, value] : names)
    if (text == name) return value;
  throw ConfigError(field, "unknown value '" + text + "'");
}

template <class Enum>
std::string enum_name(Enum value, std::initializer_list<std::pair<const char*, Enum>> names) {
  for (const auto& [name, v] : names)
    if (v == value) return name;
  return "?";
}

const std::initializer_list<std::pair<const char*, FillRule>> kFillNames = {
    {"zero", FillRule::zero}, {"one", FillRule::one}, {"cycle", FillRule::cycle}, {"parity", FillRule::parity}};
const std::initializer_list<std::pair<const char*, ValueRule>> kValueNames = {
    {"zero", ValueRule::zero}, {"one", ValueRule::one}, {"parity", ValueRule::parity}, {"random", ValueRule::random}};
const std::initializer_list<std::pair<const char*, TargetRule>> kTargetNames = {
    {"parity", TargetRule::parity}, {"ones", TargetRule::ones}, {"zeros", TargetRule::zeros}};
const std::initializer_list<std::pair<const char*, GuardRule>> kGuardNames = {
    {"none", GuardRule::none}, {"self", GuardRule::self}, {"mod", GuardRule::mod}};

std::vector<Instruction> parse_program(const json& arr, const std::string& path) {
  std::vector<Instruction> program;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) throw ConfigError(indexed(path, i), "expected an instruction string");
    try {
      program.push_back(parse_instruction(arr[i].get<std::string>()));
    } catch (const std::invalid_argument& err) {
      throw ConfigError(indexed(path, i), err.what());
    }
  }
  return program;
}

json program_json(const std::vector<Instruction>& program) {
  json arr = json::array();
  for (const auto& ins : program) arr.push_back(to_string(ins));
  return arr;
}

FunctionalSpec parse_functional(const json& j, const std::string& path) {
  Fields f(j, path);
  const auto kind = f.string("kind");
  FunctionalSpec out;
  if (kind == "total_const") {
    out.kind = spec::TotalConst{f.bit("value")};
  } else if (kind == "total_fn") {
    spec::TotalFn k;
    const auto& table = f.array("table");
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (!table[i].is_number_unsigned() || table[i].get<std::uint64_t>() > 1)
        throw ConfigError(indexed(f.sub("table"), i), "expected 0 or 1");
      k.table.push_back(table[i].get<Bit>());
    }
    if (f.has("fill")) k.fill = parse_enum(f.sub("fill"), f.string("fill"), kFillNames);
    if (k.fill == FillRule::cycle && k.table.empty()) throw ConfigError(f.sub("table"), "cycle fill needs entries");
    out.kind = std::move(k);
  } else if (kind == "undefined_on_class") {
    spec::UndefinedOnClass k;
    const auto cls = f.natural("class");
    if (cls > 63) throw ConfigError(f.sub("class"), "class index must be < 64");
    k.cls = static_cast<unsigned>(cls);
    if (f.has("value")) k.value = f.bit("value");
    out.kind = k;
  } else if (kind == "delayed") {
    spec::Delayed k;
    k.inner = std::make_shared<const FunctionalSpec>(parse_functional(f.get("inner"), f.sub("inner")));
    k.slope = f.natural_or("slope", 0);
    k.offset = f.natural_or("offset", 0);
    out.kind = std::move(k);
  } else if (kind == "random_partial") {
    spec::RandomPartial k;
    k.density = f.number("density");
    if (!(k.density >= 0.0 && k.density <= 1.0)) throw ConfigError(f.sub("density"), "must lie in [0,1]");
    if (f.has("values")) k.values = parse_enum(f.sub("values"), f.string("values"), kValueNames);
    if (f.has("seed")) k.seed = f.natural("seed");
    k.max_delay = f.natural_or("max_delay", 0);
    out.kind = k;
  } else if (kind == "empty") {
    out.kind = spec::Empty{};
  } else if (kind == "staged_table") {
    spec::StagedTable k;
    const auto& entries = f.array("entries");
    for (std::size_t i = 0; i < entries.size(); ++i) {
      Fields ef(entries[i], indexed(f.sub("entries"), i));
      spec::StagedEntry en;
      en.n = ef.natural("n");
      en.value = ef.bit("value");
      en.from = ef.natural("from");
      if (ef.has("until")) en.until = ef.natural("until");
      ef.finish();
      k.entries.push_back(en);
    }
    out.kind = std::move(k);
  } else if (kind == "machine") {
    out.kind = spec::Machine{parse_program(f.array("program"), f.sub("program"))};
  } else {
    throw ConfigError(f.sub("kind"), "unknown functional kind '" + kind + "'");
  }
  f.finish();
  return out;
}

OperatorSpec parse_operator(const json& j, const std::string& path) {
  Fields f(j, path);
  const auto kind = f.string("kind");
  OperatorSpec out;
  if (kind == "axioms") {
    spec::AxiomList list;
    const auto& axioms = f.array("axioms");
    for (std::size_t i = 0; i < axioms.size(); ++i) {
      const auto apath = indexed(f.sub("axioms"), i);
      Fields af(axioms[i], apath);
      spec::AxiomSpec a;
      const auto& premise = af.array("premise");
      for (std::size_t p = 0; p < premise.size(); ++p) {
        const auto& pt = premise[p];
        if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number_unsigned() || !pt[1].is_number_unsigned() ||
            pt[1].get<std::uint64_t>() > 1)
          throw ConfigError(indexed(af.sub("premise"), p), "expected [n, bit]");
        a.premise.emplace_back(pt[0].get<Natural>(), pt[1].get<Bit>());
      }
      if (af.has("output") == af.has("output_pair"))
        throw ConfigError(apath, "exactly one of output and output_pair is required");
      if (af.has("output")) {
        a.output = af.natural("output");
      } else {
        const auto& op = af.array("output_pair");
        if (op.size() != 2 || !op[0].is_number_unsigned() || !op[1].is_number_unsigned())
          throw ConfigError(af.sub("output_pair"), "expected [n, k]");
        a.output = std::pair<Natural, Natural>{op[0].get<Natural>(), op[1].get<Natural>()};
      }
      if (af.has("stage")) a.stage = af.natural("stage");
      af.finish();
      list.axioms.push_back(std::move(a));
    }
    out.kind = std::move(list);
  } else if (kind == "reduction") {
    spec::Reduction r;
    r.target = parse_enum(f.sub("target"), f.string("target"), kTargetNames);
    r.bound = f.natural("bound");
    if (f.has("guard")) r.guard = parse_enum(f.sub("guard"), f.string("guard"), kGuardNames);
    r.modulus = f.natural_or("modulus", 1);
    if (r.guard == GuardRule::mod && r.modulus == 0) throw ConfigError(f.sub("modulus"), "must be >= 1");
    r.delay = f.natural_or("delay", 0);
    out.kind = r;
  } else if (kind == "empty") {
    out.kind = spec::EmptyOperator{};
  } else if (kind == "machine") {
    out.kind = spec::MachineOperator{parse_program(f.array("program"), f.sub("program"))};
  } else {
    throw ConfigError(f.sub("kind"), "unknown operator kind '" + kind + "'");
  }
  f.finish();
  return out;
}

json functional_json(const FunctionalSpec& fs);

struct FunctionalToJson {
  json operator()(const spec::TotalConst& k) const { return {{"kind", "total_const"}, {"value", k.value}}; }
  json operator()(const spec::TotalFn& k) const {
    return {{"kind", "total_fn"}, {"table", k.table}, {"fill", enum_name(k.fill, kFillNames)}};
  }
  json operator()(const spec::UndefinedOnClass& k) const {
    return {{"kind", "undefined_on_class"}, {"class", k.cls}, {"value", k.value}};
  }
  json operator()(const spec::Delayed& k) const {
    return {{"kind", "delayed"}, {"inner", functional_json(*k.inner)}, {"slope", k.slope}, {"offset", k.offset}};
  }
  json operator()(const spec::RandomPartial& k) const {
    json j = {{"kind", "random_partial"},
              {"density", k.density},
              {"values", enum_name(k.values, kValueNames)},
              {"max_delay", k.max_delay}};
    if (k.seed) j["seed"] = *k.seed;
    return j;
  }
  json operator()(const spec::Empty&) const { return {{"kind", "empty"}}; }
  json operator()(const spec::StagedTable& k) const {
    json entries = json::array();
    for (const auto& en : k.entries) {
      json e = {{"n", en.n}, {"value", en.value}, {"from", en.from}};
      if (en.until) e["until"] = *en.until;
      entries.push_back(e);
    }
    return {{"kind", "staged_table"}, {"entries", entries}};
  }
  json operator()(const spec::Machine& k) const { return {{"kind", "machine"}, {"program", program_json(k.program)}}; }
};

json functional_json(const FunctionalSpec& fs) { return std::visit(FunctionalToJson{}, fs.kind); }

struct OperatorToJson {
  json operator()(const spec::AxiomList& k) const {
    json axioms = json::array();
    for (const auto& a : k.axioms) {
      json premise = json::array();
      for (const auto& [n, v] : a.premise) premise.push_back({n, v});
      json aj = {{"premise", premise}};
      if (const auto* raw = std::get_if<Natural>(&a.output))
        aj["output"] = *raw;
      else {
        const auto& p = std::get<std::pair<Natural, Natural>>(a.output);
        aj["output_pair"] = {p.first, p.second};
      }
      if (a.stage) aj["stage"] = *a.stage;
      axioms.push_back(aj);
    }
    return {{"kind", "axioms"}, {"axioms", axioms}};
  }
  json operator()(const spec::Reduction& r) const {
    return {{"kind", "reduction"},  {"target", enum_name(r.target, kTargetNames)},
            {"bound", r.bound},     {"guard", enum_name(r.guard, kGuardNames)},
            {"modulus", r.modulus}, {"delay", r.delay}};
  }
  json operator()(const spec::EmptyOperator&) const { return {{"kind", "empty"}}; }
  json operator()(const spec::MachineOperator& k) const {
    return {{"kind", "machine"}, {"program", program_json(k.program)}};
  }
};

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ConfigError("", err.what(), line_of(text, err.byte == 0 ? 0 : err.byte - 1));
  }

  RunConfig cfg;
  Fields f(root, "");
  {
    const auto& h = f.get("horizon");
    if (h.is_number_integer() && !h.is_number_unsigned() && h.get<long long>() < 0)
      throw ConfigError("horizon", "horizon must be >= 0");
    cfg.horizon = f.natural("horizon");
  }
  cfg.snapshot_every = f.natural_or("snapshot_every", 0);
  cfg.seed = f.natural_or("seed", 0);
  if (f.has("out")) cfg.out = f.string("out");
  cfg.description_bound = f.natural_or("description_bound", 1000);
  if (cfg.description_bound == 0) throw ConfigError("description_bound", "must be >= 1");
  if (f.has("probe")) {
    Fields pf(f.get("probe"), "probe");
    ProbeGrid g;
    g.indices = pf.natural_or("indices", 0);
    g.points = pf.natural_or("points", g.points);
    g.stages = pf.natural_or("stages", g.stages);
    pf.finish();
    cfg.probe = g;
  }
  {
    Fields sf(f.get("suite"), "suite");
    if (sf.has("functionals")) {
      const auto& arr = sf.array("functionals");
      for (std::size_t i = 0; i < arr.size(); ++i)
        cfg.suite.functionals.push_back(parse_functional(arr[i], indexed("suite.functionals", i)));
    }
    if (sf.has("operators")) {
      const auto& arr = sf.array("operators");
      for (std::size_t i = 0; i < arr.size(); ++i)
        cfg.suite.operators.push_back(parse_operator(arr[i], indexed("suite.operators", i)));
    }
    sf.finish();
  }
  if (f.has("end_to_end")) {
    Fields ef(f.get("end_to_end"), "end_to_end");
    EndToEndSpec e;
    e.target = parse_enum("end_to_end.target", ef.string("target"), kTargetNames);
    e.e0 = ef.natural_or("e0", 0);
    e.e1 = ef.natural_or("e1", 1);
    e.bound = ef.natural_or("bound", 1000);
    if (e.bound == 0) throw ConfigError("end_to_end.bound", "must be >= 1");
    if (ef.has("threshold")) e.threshold = ef.number("threshold");
    if (!(e.threshold >= 0.0 && e.threshold <= 1.0)) throw ConfigError("end_to_end.threshold", "must lie in [0,1]");
    ef.finish();
    cfg.end_to_end = e;
  }
  f.finish();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
  json root;
  root["horizon"] = cfg.horizon;
  root["snapshot_every"] = cfg.snapshot_every;
  root["seed"] = cfg.seed;
  if (!cfg.out.empty()) root["out"] = cfg.out;
  root["description_bound"] = cfg.description_bound;
  if (cfg.probe)
    root["probe"] = {{"indices", cfg.probe->indices}, {"points", cfg.probe->points}, {"stages", cfg.probe->stages}};
  json fns = json::array();
  for (const auto& fs : cfg.suite.functionals) fns.push_back(functional_json(fs));
  json ops = json::array();
  for (const auto& os : cfg.suite.operators) ops.push_back(std::visit(OperatorToJson{}, os.kind));
  root["suite"] = {{"functionals", fns}, {"operators", ops}};
  if (cfg.end_to_end) {
    const auto& e = *cfg.end_to_end;
    root["end_to_end"] = {{"target", enum_name(e.target, kTargetNames)},
                          {"e0", e.e0},
                          {"e1", e.e1},
                          {"bound", e.bound},
                          {"threshold", e.threshold}};
  }
  return root.dump(2) + "\n";
}

Suites build_suites(const RunConfig& config) {
  BuildOptions opts;
  opts.horizon = config.horizon;
  opts.seed = config.seed;
  opts.probe = config.effective_probe();
  return build_suite(config.suite, opts);
}

Trace run_config(const RunConfig& config, const EngineOptions& engine,
                 const std::function<void(const TraceEvent&)>& sink) {
  const auto suites = build_suites(config);
  RunOptions opts;
  opts.horizon = config.horizon;
  opts.engine = engine;
  opts.engine.snapshot_every = config.snapshot_every;
  return run(suites.functionals, opts, sink);
}

}  // namespace mpgen
