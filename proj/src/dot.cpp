#include "inet/dot.hpp"

#include <map>
#include <set>
#include <tuple>
#include <variant>

namespace inet {
namespace {

// A concrete port: agent occurrence (port 0 is principal) or interface slot.
struct End {
  bool interface = false;
  std::size_t index = 0;
  std::size_t port = 0;
  friend auto operator<=>(const End&, const End&) = default;
};

struct SideRef {
  std::size_t equation;
  int side;
  friend auto operator<=>(const SideRef&, const SideRef&) = default;
};

// Where one occurrence of a name sits: an agent's auxiliary port, a whole
// equation side, or the interface list.
using Attachment = std::variant<End, SideRef>;

class DotBuilder {
 public:
  DotBuilder(const Configuration& c, const Signature& s) : c_(c), s_(s) {}

  std::string run() {
    for (std::size_t i = 0; i < c_.interface.size(); ++i)
      attach(c_.interface[i], End{true, i, 0});
    for (std::size_t e = 0; e < c_.equations.size(); ++e) {
      for (int side = 0; side < 2; ++side) {
        const Term& t = side == 0 ? c_.equations[e].lhs : c_.equations[e].rhs;
        if (t.is_name()) {
          attach(t.name_id(), SideRef{e, side});
        } else {
          side_agent_[{e, side}] = walk(t);
        }
      }
    }

    for (std::size_t e = 0; e < c_.equations.size(); ++e) {
      const bool lhs_agent = side_agent_.contains({e, 0});
      const bool rhs_agent = side_agent_.contains({e, 1});
      if (lhs_agent && rhs_agent) {
        active_.insert(std::minmax(End{false, side_agent_[{e, 0}], 0}, End{false, side_agent_[{e, 1}], 0}));
      } else if (lhs_agent || rhs_agent) {
        const int agent_side = lhs_agent ? 0 : 1;
        const Term& other = agent_side == 0 ? c_.equations[e].rhs : c_.equations[e].lhs;
        link(End{false, side_agent_[{e, agent_side}], 0}, other.name_id(), SideRef{e, 1 - agent_side});
      }
    }
    for (const auto& [end, name] : name_ports_) link(end, name, end);

    std::string out = "graph net {\n  node [shape=circle];\n";
    for (std::size_t i = 0; i < labels_.size(); ++i)
      out += "  a" + std::to_string(i) + " [label=\"" + labels_[i] + "\"];\n";
    for (std::size_t i = 0; i < c_.interface.size(); ++i) {
      auto it = c_.labels.find(c_.interface[i]);
      const std::string label = it != c_.labels.end() ? it->second : "r" + std::to_string(i);
      out += "  i" + std::to_string(i) + " [label=\"" + label + "\", shape=plaintext];\n";
    }
    for (const auto& [a, b] : active_) out += edge(a, b, true);
    for (const auto& [a, b] : wires_) out += edge(a, b, false);
    out += "}\n";
    return out;
  }

 private:
  std::size_t walk(const Term& t) {
    const std::size_t id = labels_.size();
    const auto& type = s_[t.agent_id()];
    labels_.push_back(type.name + "/" + std::to_string(type.arity));
    for (std::size_t k = 0; k < t.args().size(); ++k) {
      const Term& a = t.args()[k];
      if (a.is_name()) {
        attach(a.name_id(), End{false, id, k + 1});
        name_ports_.emplace_back(End{false, id, k + 1}, a.name_id());
      } else {
        const std::size_t child = walk(a);
        wires_.insert({End{false, id, k + 1}, End{false, child, 0}});
      }
    }
    return id;
  }

  void attach(NameId n, Attachment a) { attachments_[n].push_back(a); }

  std::optional<Attachment> partner(NameId n, const Attachment& self) const {
    auto it = attachments_.find(n);
    if (it == attachments_.end()) return std::nullopt;
    for (const auto& a : it->second)
      if (a != self) return a;
    return std::nullopt;
  }

  // Follows name chains (x = y equations) from one occurrence of `n` to the
  // concrete port at the far end.
  std::optional<End> far_end(NameId n, Attachment from) const {
    for (std::size_t guard = 0; guard <= c_.equations.size() + 1; ++guard) {
      auto q = partner(n, from);
      if (!q) return std::nullopt;
      if (auto* end = std::get_if<End>(&*q)) return *end;
      const auto ref = std::get<SideRef>(*q);
      const SideRef opposite{ref.equation, 1 - ref.side};
      if (auto it = side_agent_.find(opposite); it != side_agent_.end()) return End{false, it->second, 0};
      const Term& t = opposite.side == 0 ? c_.equations[ref.equation].lhs : c_.equations[ref.equation].rhs;
      n = t.name_id();
      from = opposite;
    }
    return std::nullopt;  // closed loop
  }

  void link(End start, NameId n, Attachment from) {
    if (auto far = far_end(n, from)) wires_.insert(std::minmax(start, *far));
  }

  static std::string node_id(const End& e) { return (e.interface ? "i" : "a") + std::to_string(e.index); }

  static std::string edge(const End& a, const End& b, bool active) {
    std::string out = "  " + node_id(a) + " -- " + node_id(b) + " [";
    if (!a.interface) out += "taillabel=\"" + std::to_string(a.port) + "\"";
    if (!b.interface) out += std::string(a.interface ? "" : ", ") + "headlabel=\"" + std::to_string(b.port) + "\"";
    if (active) out += ", style=bold, color=red";
    return out + "];\n";
  }

  const Configuration& c_;
  const Signature& s_;
  std::vector<std::string> labels_;
  std::map<NameId, std::vector<Attachment>> attachments_;
  std::map<SideRef, std::size_t> side_agent_;
  std::vector<std::pair<End, NameId>> name_ports_;
  std::set<std::pair<End, End>> active_;
  std::set<std::pair<End, End>> wires_;
};

}  // namespace

std::string to_dot(const Configuration& c, const Signature& s, std::size_t canonical_cap) {
  return DotBuilder(canonical_net_form(c, canonical_cap).config, s).run();
}

}  // namespace inet
