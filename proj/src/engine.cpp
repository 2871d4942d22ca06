#include "inet/engine.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <unordered_map>

namespace inet {
namespace {

// (name, equation) pairs sorted by name; every name has at most two entries.
class Occurrences {
 public:
  explicit Occurrences(const Configuration& c) {
    std::vector<NameId> names;
    for (std::size_t i = 0; i < c.equations.size(); ++i) {
      names.clear();
      c.equations[i].lhs.collect_names(names);
      c.equations[i].rhs.collect_names(names);
      for (auto n : names) pairs_.emplace_back(n.value, i);
    }
    std::sort(pairs_.begin(), pairs_.end());
  }

  std::optional<std::size_t> other_equation(NameId x, std::size_t i) const {
    auto it = std::lower_bound(pairs_.begin(), pairs_.end(), std::pair<std::uint32_t, std::size_t>{x.value, 0});
    for (; it != pairs_.end() && it->first == x.value; ++it)
      if (it->second != i) return it->second;
    return std::nullopt;
  }

 private:
  std::vector<std::pair<std::uint32_t, std::size_t>> pairs_;
};

enum class Class { interaction, norule, indirection, deadlock, answer };

struct Classified {
  Class kind;
  InteractionRedex interaction{};
  IndirectionRedex indirection{};
};

Classified classify(const Configuration& c, std::size_t i, const InteractionSystem* s, const Occurrences& where) {
  const auto& [lhs, rhs] = c.equations[i];
  if (lhs.is_agent() && rhs.is_agent()) {
    if (s != nullptr) {
      if (auto m = s->lookup(lhs.agent_id(), rhs.agent_id())) {
        return {Class::interaction, {i, RuleKey::of(lhs.agent_id(), rhs.agent_id()), m->flipped}, {}};
      }
    }
    return {Class::norule, {}, {}};
  }
  if ((lhs.is_name() && rhs.contains(lhs.name_id())) || (rhs.is_name() && lhs.contains(rhs.name_id()))) {
    return {Class::deadlock, {}, {}};
  }
  for (auto side : {Side::lhs, Side::rhs}) {
    const Term& t = side == Side::lhs ? lhs : rhs;
    if (!t.is_name() || c.is_interface(t.name_id())) continue;
    if (auto j = where.other_equation(t.name_id(), i)) return {Class::indirection, {}, {i, side, *j}};
  }
  return {Class::answer, {}, {}};
}

std::optional<IndirectionRedex> first_indirection(const Configuration& c) {
  Occurrences where(c);
  for (std::size_t i = 0; i < c.equations.size(); ++i) {
    auto cl = classify(c, i, nullptr, where);
    if (cl.kind == Class::indirection) return cl.indirection;
  }
  return std::nullopt;
}

Term instantiate(const Term& t, std::map<NameId, NameId>& renaming, NameSupply& fresh) {
  if (t.is_name()) {
    auto it = renaming.find(t.name_id());
    if (it == renaming.end()) it = renaming.emplace(t.name_id(), fresh.fresh()).first;
    return Term::name(it->second);
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(instantiate(a, renaming, fresh));
  return Term::agent(t.agent_id(), std::move(args));
}

StepInfo indirection_info(const IndirectionRedex& r) {
  return {StepKind::indirection, std::nullopt, r.equation, r.name_side == Side::rhs, r.target, 0};
}

// Substitutes the name side of equation r.equation into r.target and drops
// the equation.
void indirect_in_place(Configuration& c, const IndirectionRedex& r) {
  Equation eq = std::move(c.equations[r.equation]);
  const Term& name = r.name_side == Side::lhs ? eq.lhs : eq.rhs;
  const Term& value = r.name_side == Side::lhs ? eq.rhs : eq.lhs;
  const NameId x = name.name_id();
  c.labels.erase(x);
  Equation& target = c.equations[r.target];
  if (!target.lhs.replace_name(x, value)) target.rhs.replace_name(x, value);
  c.equations.erase(c.equations.begin() + static_cast<std::ptrdiff_t>(r.equation));
}

Stepped do_indirection(const Configuration& c, const IndirectionRedex& r) {
  Stepped out{c, indirection_info(r)};
  indirect_in_place(out.config, r);
  return out;
}

Status stuck_status(const RedexReport& r) {
  if (!r.norule.empty()) return Status::stuck_norule;
  if (!r.deadlocks.empty()) return Status::stuck_deadlock;
  return Status::normal;
}

// A reduction in progress. Stamps record when each equation last changed, for
// the fifo and lifo strategies.
class Run {
 public:
  Run(Configuration c, const InteractionSystem& s, const Strategy& strategy, NameSupply supply, bool trace)
      : system_(s),
        strategy_(strategy),
        config_(std::move(c)),
        stamps_(config_.equations.size(), 0),
        supply_(supply),
        rng_(strategy.seed) {
    if (trace) trace_.emplace();
  }

  void resolve() {
    while (auto r = first_indirection(config_)) {
      indirect_in_place(config_, *r);
      stamps_[r->target] = ++clock_;
      stamps_.erase(stamps_.begin() + static_cast<std::ptrdiff_t>(r->equation));
      ++indirections_;
      record(indirection_info(*r));
    }
  }

  StepInfo interact(const std::vector<InteractionRedex>& redexes) {
    const auto& chosen = redexes[pick(redexes)];
    const auto before = config_.equations.size();
    auto stepped = apply_interaction(config_, chosen.equation, system_, supply_);
    const auto added = stepped.config.equations.size() + 1 - before;
    auto at = stamps_.erase(stamps_.begin() + static_cast<std::ptrdiff_t>(chosen.equation));
    stamps_.insert(at, added, ++clock_);
    config_ = std::move(stepped.config);
    ++interactions_;
    record(stepped.info);
    return stepped.info;
  }

  const Configuration& config() const { return config_; }
  Configuration& config() { return config_; }
  NameSupply supply() const { return supply_; }
  std::size_t interactions() const { return interactions_; }
  std::size_t indirections() const { return indirections_; }
  std::optional<std::vector<TraceEntry>>& trace() { return trace_; }

 private:
  std::size_t pick(const std::vector<InteractionRedex>& redexes) {
    switch (strategy_.kind) {
      case Strategy::Kind::by_index:
        return 0;
      case Strategy::Kind::random:
        return static_cast<std::size_t>(rng_() % redexes.size());
      case Strategy::Kind::fifo: {
        std::size_t best = 0;
        for (std::size_t k = 1; k < redexes.size(); ++k)
          if (stamps_[redexes[k].equation] < stamps_[redexes[best].equation]) best = k;
        return best;
      }
      case Strategy::Kind::lifo: {
        std::size_t best = 0;
        for (std::size_t k = 1; k < redexes.size(); ++k)
          if (stamps_[redexes[k].equation] >= stamps_[redexes[best].equation]) best = k;
        return best;
      }
    }
    return 0;
  }

  void record(const StepInfo& info) {
    if (trace_) trace_->push_back({info, config_});
  }

  const InteractionSystem& system_;
  Strategy strategy_;
  Configuration config_;
  std::vector<std::uint64_t> stamps_;
  std::uint64_t clock_ = 0;
  NameSupply supply_;
  std::mt19937_64 rng_;
  std::size_t interactions_ = 0;
  std::size_t indirections_ = 0;
  std::optional<std::vector<TraceEntry>> trace_;
};

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::normal:
      return "normal";
    case Status::fuel_exhausted:
      return "fuel-exhausted";
    case Status::stuck_deadlock:
      return "stuck-deadlock";
    case Status::stuck_norule:
      return "stuck-norule";
  }
  return "?";
}

const char* to_string(Strategy::Kind k) {
  switch (k) {
    case Strategy::Kind::fifo:
      return "fifo";
    case Strategy::Kind::lifo:
      return "lifo";
    case Strategy::Kind::by_index:
      return "index";
    case Strategy::Kind::random:
      return "random";
  }
  return "?";
}

RedexReport find_redexes(const Configuration& c, const InteractionSystem& s) {
  RedexReport report;
  Occurrences where(c);
  for (std::size_t i = 0; i < c.equations.size(); ++i) {
    auto cl = classify(c, i, &s, where);
    switch (cl.kind) {
      case Class::interaction:
        report.interactions.push_back(cl.interaction);
        break;
      case Class::norule:
        report.norule.push_back(i);
        break;
      case Class::indirection:
        report.indirections.push_back(cl.indirection);
        break;
      case Class::deadlock:
        report.deadlocks.push_back(i);
        break;
      case Class::answer:
        report.answers.push_back(i);
        break;
    }
  }
  return report;
}

Stepped apply_interaction(const Configuration& c, std::size_t i, const InteractionSystem& s, NameSupply& fresh) {
  if (i >= c.equations.size()) throw NotARedex("equation " + std::to_string(i) + " does not exist");
  const auto& [lhs, rhs] = c.equations[i];
  if (!lhs.is_agent() || !rhs.is_agent()) throw NotARedex("equation " + std::to_string(i) + " is not an active pair");
  auto match = s.lookup(lhs.agent_id(), rhs.agent_id());
  if (!match) {
    const auto& sig = s.signature();
    throw NoRule("no rule for pair {" + sig[lhs.agent_id()].name + "," + sig[rhs.agent_id()].name + "}");
  }
  const Rule& rule = *match->rule;
  const Term& alpha_term = match->flipped ? rhs : lhs;
  const Term& beta_term = match->flipped ? lhs : rhs;

  std::map<NameId, NameId> renaming;
  std::vector<Equation> produced;
  produced.reserve(rule.alpha_side.size() + rule.beta_side.size());
  for (std::size_t k = 0; k < rule.alpha_side.size(); ++k)
    produced.push_back({alpha_term.args()[k], instantiate(rule.alpha_side[k], renaming, fresh)});
  for (std::size_t k = 0; k < rule.beta_side.size(); ++k)
    produced.push_back({beta_term.args()[k], instantiate(rule.beta_side[k], renaming, fresh)});

  Configuration out;
  out.interface = c.interface;
  out.labels = c.labels;
  out.equations.reserve(c.equations.size() - 1 + produced.size());
  out.equations.insert(out.equations.end(), c.equations.begin(), c.equations.begin() + static_cast<std::ptrdiff_t>(i));
  out.equations.insert(out.equations.end(), std::make_move_iterator(produced.begin()),
                       std::make_move_iterator(produced.end()));
  out.equations.insert(out.equations.end(), c.equations.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                       c.equations.end());

  StepInfo info{StepKind::interaction, RuleKey::of(lhs.agent_id(), rhs.agent_id()), i, match->flipped, 0,
                renaming.size()};
  return {std::move(out), info};
}

Stepped apply_indirection(const Configuration& c, std::size_t i) {
  if (i >= c.equations.size()) throw NotARedex("equation " + std::to_string(i) + " does not exist");
  auto cl = classify(c, i, nullptr, Occurrences(c));
  if (cl.kind != Class::indirection) throw NotARedex("equation " + std::to_string(i) + " is not an indirection");
  return do_indirection(c, cl.indirection);
}

Configuration resolve_indirections(const Configuration& c) {
  Configuration out = c;
  while (auto r = first_indirection(out)) indirect_in_place(out, *r);
  return out;
}

StepResult step(const Configuration& c, const InteractionSystem& s, const Strategy& strategy, NameSupply& fresh) {
  auto report = find_redexes(c, s);
  if (report.interactions.empty()) {
    auto status = stuck_status(report);
    if (status == Status::normal && report.indirections.empty()) return StepNormal{};
    if (status == Status::normal) {
      // only administrative work left
      Configuration resolved = resolve_indirections(c);
      return Stepped{resolved, StepInfo{StepKind::indirection, std::nullopt, report.indirections.front().equation,
                                        report.indirections.front().name_side == Side::rhs,
                                        report.indirections.front().target, 0}};
    }
    return StepStuck{status, std::move(report)};
  }
  Run run(c, s, strategy, fresh, false);
  auto info = run.interact(report.interactions);
  run.resolve();
  fresh = run.supply();
  return Stepped{std::move(run.config()), info};
}

NormalizeResult normalize(const Configuration& c, const InteractionSystem& s, const Strategy& strategy,
                          std::size_t fuel, bool want_trace) {
  Run run(c, s, strategy, NameSupply::after(c), want_trace);
  run.resolve();
  NormalizeResult result;
  for (;;) {
    auto report = find_redexes(run.config(), s);
    result.max_width = std::max(result.max_width, report.interactions.size());
    if (report.interactions.empty()) {
      result.status = stuck_status(report);
      result.report = std::move(report);
      break;
    }
    if (run.interactions() >= fuel) {
      result.status = Status::fuel_exhausted;
      result.report = std::move(report);
      break;
    }
    run.interact(report.interactions);
    run.resolve();
  }
  result.final = std::move(run.config());
  result.interactions = run.interactions();
  result.indirections = run.indirections();
  result.trace = std::move(run.trace());
  return result;
}

CycleReport detect_cycle(const Configuration& c, const InteractionSystem& s, const Strategy& strategy,
                         std::size_t max_states, std::size_t canonical_cap) {
  Run run(c, s, strategy, NameSupply::after(c), false);
  run.resolve();
  std::map<std::vector<std::int64_t>, std::size_t> seen;
  seen.emplace(canonical_net_key(run.config(), canonical_cap), 0);
  for (;;) {
    auto report = find_redexes(run.config(), s);
    if (report.interactions.empty()) return {};
    run.interact(report.interactions);
    run.resolve();
    auto [it, inserted] = seen.emplace(canonical_net_key(run.config(), canonical_cap), run.interactions());
    if (!inserted) return {true, run.interactions() - it->second, it->second};
    if (seen.size() > max_states) {
      throw StateCapExceeded("no repeated state within " + std::to_string(max_states) + " states");
    }
  }
}

}  // namespace inet
