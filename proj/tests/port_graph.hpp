#pragma once

// A direct pointer-machine for the interaction combinators, independent of
// the equational engine. Nodes have a principal port 0 and auxiliary ports
// 1 and 2; free nodes stand for interface wires.

#include <cstddef>
#include <vector>

#include "inet/core.hpp"

namespace testing {

class PortGraph {
 public:
  enum class Kind { era, con, dup, free };
  struct Port {
    std::size_t node;
    int slot;
  };

  std::size_t add(Kind k);
  void link(Port a, Port b);

  /// Builds an eps-closed {gam, eps} tree and returns its root node.
  std::size_t build_tree(const inet::Term& t);

  /// Reduces to normal form; returns the number of interactions.
  std::size_t reduce();

  /// Reads the tree hanging off the free node's only port.
  inet::Term read_back(std::size_t free_node) const;

  std::size_t live_nodes() const;

 private:
  struct Node {
    Kind kind;
    bool alive = true;
    Port ports[3];
  };
  std::vector<Node> nodes_;
  std::vector<std::pair<std::size_t, std::size_t>> active_;

  Port peer(Port p) const { return nodes_[p.node].ports[p.slot]; }
  void interact(std::size_t a, std::size_t b);
  inet::Term read_at(Port p) const;
};

}  // namespace testing
