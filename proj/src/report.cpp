#include "inet/report.hpp"

#include <json.hpp>

#include "inet/parser.hpp"

namespace inet {
namespace {

std::string rule_key(const RuleKey& k, const Signature& s) {
  return "{" + s[k.first].name + "," + s[k.second].name + "}";
}

std::string kind_name(StepKind k) { return k == StepKind::interaction ? "interaction" : "indirection"; }

nlohmann::json equation_list(const std::vector<std::size_t>& eqs) { return nlohmann::json(eqs); }

}  // namespace

std::string format_step(std::size_t k, const StepInfo& info, const Signature& s) {
  std::string out = "STEP " + std::to_string(k);
  if (info.kind == StepKind::interaction && info.rule) {
    out += " INTERACTION " + rule_key(*info.rule, s);
  } else {
    out += " INDIRECTION";
  }
  return out + " eq=" + std::to_string(info.equation);
}

std::string format_text(const NormalizeResult& r, const Signature& s) {
  std::string out;
  if (r.trace) {
    std::size_t k = 1;
    for (const auto& entry : *r.trace) {
      out += format_step(k++, entry.info, s) + "\n";
      out += render(entry.after, s) + "\n";
    }
  }
  out += "status: " + std::string(to_string(r.status)) + "\n";
  out += "interactions: " + std::to_string(r.interactions) + "\n";
  out += "indirections: " + std::to_string(r.indirections) + "\n";
  out += "maxWidth: " + std::to_string(r.max_width) + "\n";
  if (!r.report.deadlocks.empty()) {
    out += "deadlocks:";
    for (auto i : r.report.deadlocks) out += " eq=" + std::to_string(i);
    out += "\n";
  }
  if (!r.report.norule.empty()) {
    out += "norule:";
    for (auto i : r.report.norule) out += " eq=" + std::to_string(i);
    out += "\n";
  }
  out += "final: " + render(r.final, s) + "\n";
  return out;
}

std::string format_structured(const NormalizeResult& r, const Signature& s) {
  std::string out;
  if (r.trace) {
    std::size_t k = 1;
    std::size_t interactions = 0;
    std::size_t indirections = 0;
    for (const auto& entry : *r.trace) {
      nlohmann::json j;
      j["type"] = "step";
      j["step"] = k++;
      j["kind"] = kind_name(entry.info.kind);
      j["equation"] = entry.info.equation;
      if (entry.info.kind == StepKind::interaction) {
        ++interactions;
        j["rule"] = entry.info.rule ? nlohmann::json(rule_key(*entry.info.rule, s)) : nlohmann::json(nullptr);
      } else {
        ++indirections;
      }
      j["interactions"] = interactions;
      j["indirections"] = indirections;
      j["equations"] = entry.after.equations.size();
      out += j.dump() + "\n";
    }
  }
  nlohmann::json summary;
  summary["type"] = "summary";
  summary["status"] = to_string(r.status);
  summary["interactions"] = r.interactions;
  summary["indirections"] = r.indirections;
  summary["maxWidth"] = r.max_width;
  summary["deadlocks"] = equation_list(r.report.deadlocks);
  summary["norule"] = equation_list(r.report.norule);
  summary["final"] = render(r.final, s);
  out += summary.dump() + "\n";
  return out;
}

}  // namespace inet
