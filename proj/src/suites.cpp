#include "mpgen/suites.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace mpgen {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit_interval(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

bool exceeds(Stage s, Natural slope, Natural n, Natural offset) {
  __extension__ typedef unsigned __int128 u128;
  return static_cast<u128>(s) > static_cast<u128>(slope) * n + offset;
}

}  // namespace

// ---------------------------------------------------------------------------
// Micro machine

Instruction parse_instruction(const std::string& text) {
  std::istringstream in(text);
  std::string op;
  in >> op;
  std::transform(op.begin(), op.end(), op.begin(), [](unsigned char c) { return std::toupper(c); });
  Instruction ins;
  long long reg = -1;
  long long target = -1;
  if (op == "HALT") {
    ins.op = Instruction::Op::halt;
  } else if (op == "INC") {
    ins.op = Instruction::Op::inc;
    in >> reg;
  } else if (op == "DECJZ") {
    ins.op = Instruction::Op::decjz;
    in >> reg >> target;
    if (!in || target < 0) throw std::invalid_argument("DECJZ needs a register and an address: '" + text + "'");
    ins.target = static_cast<std::size_t>(target);
  } else {
    throw std::invalid_argument("unknown instruction '" + text + "'");
  }
  if (ins.op != Instruction::Op::halt) {
    if (!in || reg < 0 || reg > 63) throw std::invalid_argument("bad register in '" + text + "'");
    ins.reg = static_cast<unsigned>(reg);
  }
  std::string rest;
  if (in >> rest) throw std::invalid_argument("trailing tokens in '" + text + "'");
  return ins;
}

std::string to_string(const Instruction& ins) {
  switch (ins.op) {
    case Instruction::Op::inc:
      return "INC " + std::to_string(ins.reg);
    case Instruction::Op::decjz:
      return "DECJZ " + std::to_string(ins.reg) + " " + std::to_string(ins.target);
    case Instruction::Op::halt:
      break;
  }
  return "HALT";
}

MicroMachine::MicroMachine(std::vector<Instruction> program) : program_(std::move(program)) {
  for (const auto& ins : program_) registers_ = std::max(registers_, ins.reg + 1);
}

MicroMachine::Outcome MicroMachine::execute(Natural input, std::uint64_t step_limit) const {
  std::vector<std::uint64_t> reg(registers_, 0);
  reg[0] = input;
  std::size_t pc = 0;
  Outcome out;
  while (true) {
    if (pc >= program_.size()) {
      out.halted = true;
      break;
    }
    if (out.steps == step_limit) break;
    ++out.steps;
    const auto& ins = program_[pc];
    if (ins.op == Instruction::Op::halt) {
      out.halted = true;
      break;
    }
    if (ins.op == Instruction::Op::inc) {
      ++reg[ins.reg];
      ++pc;
    } else if (reg[ins.reg] == 0) {
      pc = ins.target;
    } else {
      --reg[ins.reg];
      ++pc;
    }
  }
  out.output = reg[0];
  return out;
}

// ---------------------------------------------------------------------------
// Compiled functionals

namespace {

class TotalConstFn final : public Functional {
 public:
  explicit TotalConstFn(Bit v) : v_(v) {}
  std::optional<Bit> query(Natural n, Stage s) const override {
    if (n >= s) return std::nullopt;
    return v_;
  }

 private:
  Bit v_;
};

class TableFn final : public Functional {
 public:
  TableFn(std::vector<Bit> table, FillRule fill) : table_(std::move(table)), fill_(fill) {}
  std::optional<Bit> query(Natural n, Stage s) const override {
    if (n >= s) return std::nullopt;
    if (n < table_.size()) return table_[n];
    switch (fill_) {
      case FillRule::zero:
        return Bit{0};
      case FillRule::one:
        return Bit{1};
      case FillRule::cycle:
        return table_[n % table_.size()];
      case FillRule::parity:
        break;
    }
    return static_cast<Bit>(n % 2);
  }

 private:
  std::vector<Bit> table_;
  FillRule fill_;
};

class UndefinedOnClassFn final : public Functional {
 public:
  UndefinedOnClassFn(unsigned cls, Bit v) : cls_(cls), v_(v) {}
  std::optional<Bit> query(Natural n, Stage s) const override {
    if (n >= s || in_class(n, cls_)) return std::nullopt;
    return v_;
  }

 private:
  unsigned cls_;
  Bit v_;
};

class DelayedFn final : public Functional {
 public:
  DelayedFn(std::shared_ptr<const Functional> inner, Natural slope, Natural offset)
      : inner_(std::move(inner)), slope_(slope), offset_(offset) {}
  std::optional<Bit> query(Natural n, Stage s) const override {
    if (!exceeds(s, slope_, n, offset_)) return std::nullopt;
    return inner_->query(n, s);
  }

 private:
  std::shared_ptr<const Functional> inner_;
  Natural slope_, offset_;
};

class RandomPartialFn final : public Functional {
 public:
  RandomPartialFn(double density, ValueRule values, std::uint64_t seed, Natural max_delay)
      : density_(density), values_(values), seed_(seed), max_delay_(max_delay) {}

  std::optional<Bit> query(Natural n, Stage s) const override {
    if (n >= s) return std::nullopt;
    const auto h = splitmix64(seed_ ^ splitmix64(n));
    if (unit_interval(h) >= density_) return std::nullopt;
    const auto h2 = splitmix64(h);
    if (max_delay_ > 0 && !exceeds(s, 1, n, h2 % (max_delay_ + 1))) return std::nullopt;
    switch (values_) {
      case ValueRule::zero:
        return Bit{0};
      case ValueRule::one:
        return Bit{1};
      case ValueRule::parity:
        return static_cast<Bit>(n % 2);
      case ValueRule::random:
        break;
    }
    return static_cast<Bit>(splitmix64(h2) >> 63);
  }

 private:
  double density_;
  ValueRule values_;
  std::uint64_t seed_;
  Natural max_delay_;
};

class EmptyFn final : public Functional {
 public:
  std::optional<Bit> query(Natural, Stage) const override { return std::nullopt; }
};

class StagedTableFn final : public Functional {
 public:
  explicit StagedTableFn(std::vector<spec::StagedEntry> entries) : entries_(std::move(entries)) {}
  std::optional<Bit> query(Natural n, Stage s) const override {
    for (const auto& en : entries_)
      if (en.n == n && en.from <= s && (!en.until || s < *en.until)) return en.value;
    return std::nullopt;
  }

 private:
  std::vector<spec::StagedEntry> entries_;
};

// Remembers the longest run tried per input, so repeated queries at growing
// stages do not re-simulate from scratch more than logarithmically often.
class MachineFn final : public Functional {
 public:
  explicit MachineFn(MicroMachine m) : machine_(std::move(m)) {}

  std::optional<Bit> query(Natural n, Stage s) const override {
    if (n >= s) return std::nullopt;
    const auto r = run(n, s);
    if (!r.halted || r.steps > s) return std::nullopt;
    return static_cast<Bit>(r.output % 2);
  }

 private:
  struct Entry {
    MicroMachine::Outcome outcome;
    std::uint64_t tried = 0;
  };

  MicroMachine::Outcome run(Natural n, std::uint64_t limit) const {
    std::lock_guard lock(mu_);
    auto& entry = cache_[n];
    if (entry.outcome.halted || entry.tried >= limit) return entry.outcome;
    const auto budget = std::max<std::uint64_t>(limit, 2 * entry.tried);
    entry.outcome = machine_.execute(n, budget);
    entry.tried = budget;
    return entry.outcome;
  }

  MicroMachine machine_;
  mutable std::mutex mu_;
  mutable std::unordered_map<Natural, Entry> cache_;
};

}  // namespace

bool spec::Delayed::operator==(const Delayed& o) const {
  const bool same_inner = (inner == o.inner) || (inner && o.inner && *inner == *o.inner);
  return same_inner && slope == o.slope && offset == o.offset;
}

FunctionalSpec delayed(FunctionalSpec inner, Natural slope, Natural offset) {
  return {spec::Delayed{std::make_shared<const FunctionalSpec>(std::move(inner)), slope, offset}};
}

std::shared_ptr<const Functional> compile_functional(const FunctionalSpec& fs, std::uint64_t seed) {
  return std::visit(
      overloaded{
          [](const spec::TotalConst& k) -> std::shared_ptr<const Functional> {
            if (k.value > 1) throw std::invalid_argument("total_const value must be a bit");
            return std::make_shared<TotalConstFn>(k.value);
          },
          [](const spec::TotalFn& k) -> std::shared_ptr<const Functional> {
            if (k.fill == FillRule::cycle && k.table.empty())
              throw std::invalid_argument("total_fn with cycle fill needs a nonempty table");
            if (std::any_of(k.table.begin(), k.table.end(), [](Bit b) { return b > 1; }))
              throw std::invalid_argument("total_fn table entries must be bits");
            return std::make_shared<TableFn>(k.table, k.fill);
          },
          [](const spec::UndefinedOnClass& k) -> std::shared_ptr<const Functional> {
            return std::make_shared<UndefinedOnClassFn>(k.cls, k.value);
          },
          [seed](const spec::Delayed& k) -> std::shared_ptr<const Functional> {
            if (!k.inner) throw std::invalid_argument("delayed spec without an inner spec");
            return std::make_shared<DelayedFn>(compile_functional(*k.inner, seed), k.slope, k.offset);
          },
          [seed](const spec::RandomPartial& k) -> std::shared_ptr<const Functional> {
            if (!(k.density >= 0.0 && k.density <= 1.0))
              throw std::invalid_argument("random_partial density must lie in [0,1]");
            return std::make_shared<RandomPartialFn>(k.density, k.values, k.seed.value_or(seed), k.max_delay);
          },
          [](const spec::Empty&) -> std::shared_ptr<const Functional> { return std::make_shared<EmptyFn>(); },
          [](const spec::StagedTable& k) -> std::shared_ptr<const Functional> {
            return std::make_shared<StagedTableFn>(k.entries);
          },
          [](const spec::Machine& k) -> std::shared_ptr<const Functional> {
            return std::make_shared<MachineFn>(MicroMachine(k.program));
          },
      },
      fs.kind);
}

Bit target_bit(TargetRule rule, Natural n) {
  switch (rule) {
    case TargetRule::ones:
      return 1;
    case TargetRule::zeros:
      return 0;
    case TargetRule::parity:
      break;
  }
  return static_cast<Bit>(n % 2);
}

EnumOperator compile_operator(const OperatorSpec& os, Stage horizon) {
  std::vector<StagedAxiom> axioms;
  std::visit(overloaded{
                 [&](const spec::AxiomList& k) {
                   for (const auto& a : k.axioms) {
                     std::vector<Code> premise;
                     for (const auto& [n, v] : a.premise) premise.push_back(pair(n, v));
                     const Natural out =
                         std::visit(overloaded{
                                        [](Natural raw) { return raw; },
                                        [](const std::pair<Natural, Natural>& p) { return pair(p.first, p.second); },
                                    },
                                    a.output);
                     Axiom axiom(std::move(premise), out);
                     const Stage at = a.stage.value_or(axiom.use());
                     axioms.push_back({std::move(axiom), at});
                   }
                 },
                 [&](const spec::Reduction& k) {
                   if (k.guard == GuardRule::mod && k.modulus == 0)
                     throw std::invalid_argument("reduction with mod guard needs modulus >= 1");
                   for (Natural n = 0; n < k.bound; ++n) {
                     std::vector<Code> premise;
                     if (k.guard == GuardRule::self) premise.push_back(pair(n, 1));
                     if (k.guard == GuardRule::mod) premise.push_back(pair(n % k.modulus, 1));
                     Axiom axiom(std::move(premise), pair(n, target_bit(k.target, n)));
                     const Stage at = std::max<Stage>(n + 1, axiom.use()) + k.delay;
                     axioms.push_back({std::move(axiom), at});
                   }
                 },
                 [](const spec::EmptyOperator&) {},
                 [&](const spec::MachineOperator& k) {
                   const MicroMachine machine(k.program);
                   for (Code c = 0; c < horizon; ++c) {
                     const auto r = machine.execute(c, horizon);
                     if (!r.halted) continue;
                     const Stage at = std::max<Stage>(c + 1, r.steps);
                     if (at > horizon) continue;
                     const auto [set_code, k_out] = unpair(c);
                     std::vector<Code> premise;
                     for (unsigned b = 0; b < 64; ++b)
                       if ((set_code >> b) & 1U) premise.push_back(b);
                     axioms.push_back({Axiom(std::move(premise), k_out), at});
                   }
                 },
             },
             os.kind);
  return EnumOperator(std::move(axioms));
}

// ---------------------------------------------------------------------------
// Suites

std::optional<Bit> FunctionalSuite::query(Natural e, Natural n, Stage s) const {
  if (e >= entries_.size()) return std::nullopt;
  return entries_[e]->query(n, s);
}

std::vector<Natural> FunctionalSuite::domain(Natural e, Stage s) const {
  std::vector<Natural> out;
  if (e >= entries_.size()) return out;
  for (Natural n = 0; n < s; ++n)
    if (entries_[e]->query(n, s)) out.push_back(n);
  return out;
}

std::vector<Natural> FunctionalSuite::domain_in_class(Natural e, Stage s) const {
  std::vector<Natural> out;
  if (e >= entries_.size() || e >= 63) return out;
  const Natural step = Natural{1} << (e + 1);
  for (Natural n = Natural{1} << e; n < s; n += step)
    if (entries_[e]->query(n, s)) out.push_back(n);
  return out;
}

std::set<Natural> phi_domain(const FunctionalSuite& suite, Natural e, Stage s) {
  const auto d = suite.domain(e, s);
  return {d.begin(), d.end()};
}

const EnumOperator& OperatorSuite::at(Natural e) const {
  static const EnumOperator none;
  if (e >= entries_.size()) return none;
  return entries_[e];
}

SuiteValidationError::SuiteValidationError(std::string invariant, Natural e, Natural n, Stage s, Stage s2)
    : std::runtime_error(invariant + " violated at e=" + std::to_string(e) + " n=" + std::to_string(n) +
                         " s=" + std::to_string(s) + " s'=" + std::to_string(s2)),
      invariant_(std::move(invariant)),
      e_(e),
      n_(n),
      s_(s),
      s2_(s2) {}

void validate_functionals(const FunctionalSuite& suite, const ProbeGrid& probe) {
  const Natural indices = probe.indices == 0 ? suite.size() : std::min<Natural>(probe.indices, suite.size());
  for (Natural e = 0; e < indices; ++e) {
    for (Natural n = 0; n < probe.points; ++n) {
      std::optional<Bit> first;
      Stage first_stage = 0;
      for (Stage s = 0; s <= probe.stages; ++s) {
        const auto v = suite.query(e, n, s);
        if (v && n >= s) throw SuiteValidationError("stage-bound", e, n, s, s);
        if (first && v != first) throw SuiteValidationError("monotone-stability", e, n, first_stage, s);
        if (!first && v) {
          first = v;
          first_stage = s;
        }
      }
    }
  }
}

void validate_operators(const OperatorSuite& suite) {
  for (Natural e = 0; e < suite.size(); ++e) {
    if (auto bad = suite.at(e).use_bound_violation())
      throw SuiteValidationError("use-bound", e, bad->axiom.output, bad->appears_at, bad->axiom.use());
  }
}

Suites build_suite(const SuiteSpec& spec, const BuildOptions& options) {
  std::vector<std::shared_ptr<const Functional>> fns;
  fns.reserve(spec.functionals.size());
  for (std::size_t i = 0; i < spec.functionals.size(); ++i)
    fns.push_back(compile_functional(spec.functionals[i], splitmix64(options.seed + i)));
  std::vector<EnumOperator> ops;
  ops.reserve(spec.operators.size());
  for (const auto& os : spec.operators) ops.push_back(compile_operator(os, options.horizon));

  Suites out{FunctionalSuite(std::move(fns)), OperatorSuite(std::move(ops))};
  validate_functionals(out.functionals, options.probe);
  validate_operators(out.operators);
  return out;
}

}  // namespace mpgen
