#include "port_graph.hpp"

#include <stdexcept>
#include <utility>

#include "inet/combinators.hpp"

namespace testing {

std::size_t PortGraph::add(Kind k) {
  nodes_.push_back(Node{k, true, {{0, 0}, {0, 0}, {0, 0}}});
  return nodes_.size() - 1;
}

void PortGraph::link(Port a, Port b) {
  nodes_[a.node].ports[a.slot] = b;
  nodes_[b.node].ports[b.slot] = a;
  if (a.slot == 0 && b.slot == 0 && nodes_[a.node].kind != Kind::free && nodes_[b.node].kind != Kind::free)
    active_.emplace_back(a.node, b.node);
}

std::size_t PortGraph::build_tree(const inet::Term& t) {
  auto names = inet::combinator_names();
  if (t.agent_id() == names.eps) return add(Kind::era);
  if (t.agent_id() != names.gam) throw std::logic_error("only gam/eps trees");
  auto n = add(Kind::con);
  for (int i = 0; i < 2; ++i) link({n, i + 1}, {build_tree(t.args()[i]), 0});
  return n;
}

std::size_t PortGraph::reduce() {
  std::size_t count = 0;
  while (!active_.empty()) {
    auto [a, b] = active_.back();
    active_.pop_back();
    if (!nodes_[a].alive || !nodes_[b].alive) continue;
    interact(a, b);
    ++count;
  }
  return count;
}

void PortGraph::interact(std::size_t a, std::size_t b) {
  if (nodes_[a].kind > nodes_[b].kind) std::swap(a, b);
  Kind ka = nodes_[a].kind, kb = nodes_[b].kind;
  auto aux = [&](std::size_t n, int i) {
    Port p = peer({n, i});
    if (p.node == a || p.node == b) throw std::logic_error("auxiliary wire inside an active pair");
    return p;
  };
  nodes_[a].alive = nodes_[b].alive = false;

  if (ka == Kind::era && kb == Kind::era) return;
  if (ka == Kind::era) {
    for (int i = 1; i <= 2; ++i) link(aux(b, i), {add(Kind::era), 0});
    return;
  }
  if (ka == kb) {
    Port a1 = aux(a, 1), a2 = aux(a, 2), b1 = aux(b, 1), b2 = aux(b, 2);
    if (ka == Kind::con) {
      link(a1, b2);
      link(a2, b1);
    } else {
      link(a1, b1);
      link(a2, b2);
    }
    return;
  }
  // con (a) against dup (b): each copies the other.
  Port a1 = aux(a, 1), a2 = aux(a, 2), b1 = aux(b, 1), b2 = aux(b, 2);
  auto g1 = add(Kind::con), g2 = add(Kind::con), d1 = add(Kind::dup), d2 = add(Kind::dup);
  link({g1, 1}, {d1, 1});
  link({g1, 2}, {d2, 1});
  link({g2, 1}, {d1, 2});
  link({g2, 2}, {d2, 2});
  link(b1, {g1, 0});
  link(b2, {g2, 0});
  link(a1, {d1, 0});
  link(a2, {d2, 0});
}

inet::Term PortGraph::read_back(std::size_t free_node) const { return read_at(peer({free_node, 0})); }

inet::Term PortGraph::read_at(Port p) const {
  auto names = inet::combinator_names();
  if (p.slot != 0) throw std::logic_error("read-back reached an auxiliary port");
  const Node& n = nodes_[p.node];
  if (n.kind == Kind::era) return inet::Term::agent(names.eps);
  if (n.kind != Kind::con) throw std::logic_error("read-back reached a non-tree node");
  return inet::Term::agent(names.gam, {read_at(n.ports[1]), read_at(n.ports[2])});
}

std::size_t PortGraph::live_nodes() const {
  std::size_t n = 0;
  for (const auto& node : nodes_) n += node.alive && node.kind != Kind::free;
  return n;
}

}  // namespace testing
