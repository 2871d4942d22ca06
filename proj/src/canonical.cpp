#include "inet/canonical.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>

namespace inet {
namespace {

using Token = std::int64_t;
using Tokens = std::vector<Token>;

// A sequence of token strings stored back to back.
struct Keys {
  Tokens data;
  std::vector<std::size_t> begin{0};

  void finish() { begin.push_back(data.size()); }
  std::size_t size() const { return begin.size() - 1; }
  std::strong_ordering compare(std::size_t a, std::size_t b) const {
    return std::lexicographical_compare_three_way(data.begin() + static_cast<std::ptrdiff_t>(begin[a]),
                                                  data.begin() + static_cast<std::ptrdiff_t>(begin[a + 1]),
                                                  data.begin() + static_cast<std::ptrdiff_t>(begin[b]),
                                                  data.begin() + static_cast<std::ptrdiff_t>(begin[b + 1]));
  }
  void clear() {
    data.clear();
    begin.assign(1, 0);
  }
};

// Replaces each key by its rank among the distinct keys.
std::vector<int> rank_of(const Keys& keys) {
  std::vector<int> order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return keys.compare(a, b) < 0; });
  std::vector<int> out(keys.size());
  int rank = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i > 0 && keys.compare(order[i], order[i - 1]) != 0) ++rank;
    out[order[i]] = rank;
  }
  return out;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

class Canonicalizer {
 public:
  explicit Canonicalizer(const Configuration& c) : c_(c), sides_(2 * c.equations.size()) {
    // (name, side, leaf) for every name leaf, grouped by name to assign
    // dense ids and find each leaf's partner occurrence.
    struct Leaf {
      std::uint32_t name;
      int side;
      int leaf;
      auto operator<=>(const Leaf&) const = default;
    };
    std::vector<Leaf> all;
    all.reserve(4 * c.equations.size());
    std::vector<NameId> names;
    for (std::size_t e = 0; e < c.equations.size(); ++e) {
      sides_[2 * e].term = &c.equations[e].lhs;
      sides_[2 * e + 1].term = &c.equations[e].rhs;
    }
    for (std::size_t s = 0; s < sides_.size(); ++s) {
      names.clear();
      sides_[s].term->collect_names(names);
      sides_[s].first_leaf = all.size();
      sides_[s].leaf_count = names.size();
      for (std::size_t j = 0; j < names.size(); ++j)
        all.push_back({names[j].value, static_cast<int>(s), static_cast<int>(j)});
    }
    leaves_.resize(all.size());
    partners_.assign(all.size(), Occurrence{-1, -1});
    std::sort(all.begin(), all.end());
    std::vector<std::uint32_t> ids;
    for (std::size_t i = 0; i < all.size();) {
      std::size_t j = i;
      while (j < all.size() && all[j].name == all[i].name) ++j;
      const int d = static_cast<int>(ids.size());
      ids.push_back(all[i].name);
      for (std::size_t k = i; k < j; ++k) leaf_at(all[k].side, all[k].leaf) = d;
      if (j - i == 2) {
        partner_at(all[i].side, all[i].leaf) = {all[i + 1].side, all[i + 1].leaf};
        partner_at(all[i + 1].side, all[i + 1].leaf) = {all[i].side, all[i].leaf};
      }
      i = j;
    }
    name_count_ = ids.size();
    iface_pos_.assign(name_count_, -1);
    for (std::size_t i = 0; i < c.interface.size(); ++i) {
      auto it = std::lower_bound(ids.begin(), ids.end(), c.interface[i].value);
      int d;
      if (it != ids.end() && *it == c.interface[i].value) {
        d = static_cast<int>(it - ids.begin());
      } else {
        d = static_cast<int>(name_count_++);
        iface_pos_.push_back(-1);
      }
      iface_pos_[d] = static_cast<int>(i);
      iface_dense_.push_back(d);
    }
    refine();
  }

  void run() {
    number_.assign(name_count_, -1);
    for (std::size_t i = 0; i < iface_dense_.size(); ++i) number_[iface_dense_[i]] = static_cast<Token>(i);
    next_ = static_cast<Token>(c_.interface.size());
    used_.assign(c_.equations.size(), false);
    tokens_.reserve(4 * leaves_.size() + 8 * c_.equations.size());
    search();
  }

  Tokens key() const {
    Tokens out{static_cast<Token>(c_.interface.size()), static_cast<Token>(c_.equations.size())};
    out.insert(out.end(), best_tokens_.begin(), best_tokens_.end());
    return out;
  }

  Configuration build() const {
    Configuration out;
    std::vector<std::int64_t> renaming(name_count_, -1);
    for (std::size_t i = 0; i < c_.interface.size(); ++i) {
      NameId fixed{static_cast<std::uint32_t>(i)};
      renaming[iface_dense_[i]] = i;
      out.interface.push_back(fixed);
      if (auto it = c_.labels.find(c_.interface[i]); it != c_.labels.end()) out.labels.emplace(fixed, it->second);
    }
    auto next = static_cast<std::int64_t>(c_.interface.size());
    out.equations.reserve(best_items_.size());
    for (int item : best_items_) {
      const int* leaf = leaves_of(item);
      Term lhs = rename(lhs_of(item), leaf, renaming, next);
      leaf = leaves_of(item ^ 1);
      Term rhs = rename(rhs_of(item), leaf, renaming, next);
      out.equations.push_back({std::move(lhs), std::move(rhs)});
    }
    return out;
  }

 private:
  struct Occurrence {
    int side;
    int leaf;
  };
  // Per-leaf data of all sides lives in leaves_ and partners_, side by side
  // in preorder.
  struct Side {
    const Term* term = nullptr;
    std::size_t first_leaf = 0;
    std::size_t leaf_count = 0;
  };

  int& leaf_at(int side, int leaf) { return leaves_[sides_[side].first_leaf + leaf]; }
  Occurrence& partner_at(int side, int leaf) { return partners_[sides_[side].first_leaf + leaf]; }
  const int* leaves_of(int side) const { return leaves_.data() + sides_[side].first_leaf; }

  static Term rename(const Term& t, const int*& leaf, std::vector<std::int64_t>& renaming, std::int64_t& next) {
    if (t.is_name()) {
      auto& r = renaming[*leaf++];
      if (r < 0) r = next++;
      return Term::name(NameId{static_cast<std::uint32_t>(r)});
    }
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const auto& a : t.args()) args.push_back(rename(a, leaf, renaming, next));
    return Term::agent(t.agent_id(), std::move(args));
  }

  void shape(const Term& t, const int*& leaf, Tokens& out) const {
    if (t.is_name()) {
      const int pos = iface_pos_[*leaf++];
      out.push_back(pos >= 0 ? -static_cast<Token>(pos) - 1 : 0);
      return;
    }
    out.push_back(static_cast<Token>(t.agent_id().value) + 1);
    for (const auto& a : t.args()) shape(a, leaf, out);
  }

  // Colour refinement over equation sides, linked through shared names and
  // through the sibling side of the same equation.
  void refine() {
    Keys keys;
    for (std::size_t s = 0; s < sides_.size(); ++s) {
      const int* leaf = leaves_of(static_cast<int>(s));
      shape(*sides_[s].term, leaf, keys.data);
      keys.finish();
    }
    side_color_ = rank_of(keys);

    std::size_t classes = 0;
    for (std::size_t round = 0; round <= sides_.size(); ++round) {
      std::size_t now = side_color_.empty() ? 0 : *std::max_element(side_color_.begin(), side_color_.end()) + 1;
      if (now == classes) break;
      classes = now;
      keys.clear();
      for (std::size_t s = 0; s < sides_.size(); ++s) {
        auto& key = keys.data;
        key.push_back(side_color_[s]);
        key.push_back(side_color_[s ^ 1]);
        for (std::size_t j = 0; j < sides_[s].leaf_count; ++j) {
          const std::size_t at = sides_[s].first_leaf + j;
          if (int pos = iface_pos_[leaves_[at]]; pos >= 0) {
            key.push_back(-1);
            key.push_back(pos);
            continue;
          }
          const Occurrence& partner = partners_[at];
          key.push_back(partner.side < 0 ? -2 : side_color_[partner.side]);
          key.push_back(partner.side < 0 ? 0 : partner.leaf);
        }
        keys.finish();
      }
      side_color_ = rank_of(keys);
    }

    Keys eq_keys;
    for (std::size_t e = 0; e < c_.equations.size(); ++e) {
      auto [lo, hi] = std::minmax(side_color_[2 * e], side_color_[2 * e + 1]);
      eq_keys.data.push_back(lo);
      eq_keys.data.push_back(hi);
      eq_keys.finish();
    }
    eq_color_ = rank_of(eq_keys);
  }

  // Appends the encoding of t; `leaf` walks the dense ids of t's name leaves.
  void encode(const Term& t, const int*& leaf, Tokens& out) {
    if (t.is_name()) {
      int d = *leaf++;
      if (number_[d] < 0) {
        number_[d] = next_++;
        fresh_.push_back(d);
      }
      out.push_back(-number_[d] - 1);
      return;
    }
    out.push_back(static_cast<Token>(t.agent_id().value) + 1);
    for (const auto& a : t.args()) encode(a, leaf, out);
  }

  // Items are 2*equation + orientation; orientation 1 swaps the sides.
  const Term& lhs_of(int item) const { return *sides_[item].term; }
  const Term& rhs_of(int item) const { return *sides_[item ^ 1].term; }

  void chunk(int item, Tokens& out) {
    out.push_back(eq_color_[item / 2]);
    out.push_back(side_color_[item]);
    const int* leaf = leaves_of(item);
    encode(lhs_of(item), leaf, out);
    leaf = leaves_of(item ^ 1);
    encode(rhs_of(item), leaf, out);
  }

  void forget(std::size_t mark) {
    for (std::size_t i = mark; i < fresh_.size(); ++i) number_[fresh_[i]] = -1;
    next_ -= static_cast<Token>(fresh_.size() - mark);
    fresh_.resize(mark);
  }

  bool fixes_prefix(const std::vector<int>& perm) const {
    return std::all_of(items_.begin(), items_.end(), [&](int x) { return perm[x] == x; });
  }

  // Orbits of the automorphisms found so far that fix the current prefix.
  UnionFind orbits() const {
    UnionFind uf(sides_.size());
    for (const auto& perm : automorphisms_) {
      if (!fixes_prefix(perm)) continue;
      for (std::size_t x = 0; x < perm.size(); ++x) uf.unite(static_cast<int>(x), perm[x]);
    }
    return uf;
  }

  void leaf() {
    if (!have_best_ || tokens_ < best_tokens_) {
      best_tokens_ = tokens_;
      best_items_ = items_;
      have_best_ = true;
    } else if (tokens_ == best_tokens_) {
      std::vector<int> perm(sides_.size());
      for (std::size_t i = 0; i < items_.size(); ++i) {
        perm[items_[i]] = best_items_[i];
        perm[items_[i] ^ 1] = best_items_[i] ^ 1;
      }
      automorphisms_.push_back(std::move(perm));
    }
  }

  // True when the current prefix is already worse than the best leaf.
  bool worse_than_best() const {
    if (!have_best_) return false;
    auto n = std::min(tokens_.size(), best_tokens_.size());
    return std::lexicographical_compare(best_tokens_.begin(), best_tokens_.begin() + n, tokens_.begin(),
                                        tokens_.begin() + n);
  }

  void search() {
    if (items_.size() == c_.equations.size()) {
      leaf();
      return;
    }
    int min_color = -1;
    for (std::size_t e = 0; e < used_.size(); ++e)
      if (!used_[e] && (min_color < 0 || eq_color_[e] < min_color)) min_color = eq_color_[e];

    // Only orientations producing the least next chunk can lead to the
    // least encoding.
    const auto mark = tokens_.size();
    const auto fresh_mark = fresh_.size();
    Tokens least;
    std::vector<int> candidates;
    bool introduces_names = false;
    for (std::size_t e = 0; e < used_.size(); ++e) {
      if (used_[e] || eq_color_[e] != min_color) continue;
      for (int o = 0; o < 2; ++o) {
        int item = static_cast<int>(2 * e) + o;
        chunk(item, tokens_);
        const bool fresh = fresh_.size() > fresh_mark;
        forget(fresh_mark);
        auto ch = tokens_.begin() + static_cast<std::ptrdiff_t>(mark);
        if (!candidates.empty()) {
          auto c = std::lexicographical_compare_three_way(ch, tokens_.end(), least.begin(), least.end());
          if (c > 0) {
            tokens_.resize(mark);
            continue;
          }
          if (c < 0) candidates.clear();
        }
        if (candidates.empty()) {
          least.assign(ch, tokens_.end());
          introduces_names = fresh;
        }
        candidates.push_back(item);
        tokens_.resize(mark);
      }
    }

    // Identical chunks with no new names denote identical equations.
    if (!introduces_names) candidates.resize(1);

    std::optional<UnionFind> uf;
    std::vector<int> explored;
    for (int item : candidates) {
      if (!explored.empty() && !automorphisms_.empty()) {
        uf = orbits();
        if (std::any_of(explored.begin(), explored.end(), [&](int x) { return uf->find(x) == uf->find(item); }))
          continue;
      }
      explored.push_back(item);

      chunk(item, tokens_);
      items_.push_back(item);
      used_[item / 2] = true;

      if (!worse_than_best()) search();

      used_[item / 2] = false;
      items_.pop_back();
      tokens_.resize(mark);
      forget(fresh_mark);
    }
  }

  const Configuration& c_;
  std::vector<Side> sides_;
  std::vector<int> leaves_;  // dense name per leaf
  std::vector<Occurrence> partners_;  // other occurrence of the leaf's name, if in an equation
  std::size_t name_count_ = 0;
  std::vector<int> iface_pos_;    // per dense name: interface position or -1
  std::vector<int> iface_dense_;  // per interface position: dense name
  std::vector<int> side_color_;
  std::vector<int> eq_color_;

  std::vector<Token> number_;
  Token next_ = 0;
  std::vector<bool> used_;
  std::vector<int> fresh_;  // names numbered so far, in numbering order
  Tokens tokens_;
  std::vector<int> items_;

  bool have_best_ = false;
  Tokens best_tokens_;
  std::vector<int> best_items_;
  std::vector<std::vector<int>> automorphisms_;
};

}  // namespace

Configuration canonicalize(const Configuration& c, std::size_t max_agents) {
  if (auto n = c.agent_count(); n > max_agents) {
    throw CapExceeded("configuration has " + std::to_string(n) + " agents, canonicalization cap is " +
                      std::to_string(max_agents));
  }
  if (c.equations.empty()) {
    Configuration out;
    for (std::size_t i = 0; i < c.interface.size(); ++i) {
      NameId fixed{static_cast<std::uint32_t>(i)};
      out.interface.push_back(fixed);
      if (auto it = c.labels.find(c.interface[i]); it != c.labels.end()) out.labels.emplace(fixed, it->second);
    }
    return out;
  }
  Canonicalizer canon(c);
  canon.run();
  return canon.build();
}

CanonicalForm canonical_form(const Configuration& c, std::size_t max_agents) {
  if (auto n = c.agent_count(); n > max_agents) {
    throw CapExceeded("configuration has " + std::to_string(n) + " agents, canonicalization cap is " +
                      std::to_string(max_agents));
  }
  if (c.equations.empty()) return {{static_cast<std::int64_t>(c.interface.size()), 0}, canonicalize(c, max_agents)};
  Canonicalizer canon(c);
  canon.run();
  return {canon.key(), canon.build()};
}

std::vector<std::int64_t> canonical_key(const Configuration& c, std::size_t max_agents) {
  if (auto n = c.agent_count(); n > max_agents) {
    throw CapExceeded("configuration has " + std::to_string(n) + " agents, canonicalization cap is " +
                      std::to_string(max_agents));
  }
  if (c.equations.empty()) return {static_cast<std::int64_t>(c.interface.size()), 0};
  Canonicalizer canon(c);
  canon.run();
  return canon.key();
}

bool alpha_equivalent(const Configuration& a, const Configuration& b, std::size_t max_agents) {
  if (a.equations.size() != b.equations.size() || a.interface.size() != b.interface.size()) return false;
  if (a.interface_labels() != b.interface_labels()) return false;
  return canonicalize(a, max_agents) == canonicalize(b, max_agents);
}

namespace {

inline constexpr std::size_t kMaxCutVariants = 4096;

void check_cap(const Configuration& c, std::size_t max_agents) {
  if (auto n = c.agent_count(); n > max_agents) {
    throw CapExceeded("configuration has " + std::to_string(n) + " agents, canonicalization cap is " +
                      std::to_string(max_agents));
  }
}

// The agents on the path from the root of t down to the leaf x, and the
// argument slot taken at each of them.
bool find_path(const Term& t, NameId x, std::vector<const Term*>& agents, std::vector<std::size_t>& slots) {
  if (t.is_name()) return t.name_id() == x;
  agents.push_back(&t);
  for (std::size_t k = 0; k < t.args().size(); ++k) {
    slots.push_back(k);
    if (find_path(t.args()[k], x, agents, slots)) return true;
    slots.pop_back();
  }
  agents.pop_back();
  return false;
}

// The deadlock x = t[x] cut open at the principal port of agents[start].
Term unroll(const std::vector<const Term*>& agents, const std::vector<std::size_t>& slots, std::size_t i,
            std::size_t start, NameId x) {
  const Term& r = *agents[i];
  std::vector<Term> args = r.args();
  const std::size_t next = (i + 1) % agents.size();
  args[slots[i]] = next == start ? Term::name(x) : unroll(agents, slots, next, start, x);
  return Term::agent(r.agent_id(), std::move(args));
}

void cut_shape(const Term& t, NameId x, const Configuration& c, Tokens& out) {
  if (t.is_name()) {
    if (t.name_id() == x) {
      out.push_back(-1);
    } else if (auto pos = c.interface_position(t.name_id())) {
      out.push_back(-static_cast<Token>(*pos) - 2);
    } else {
      out.push_back(0);
    }
    return;
  }
  out.push_back(static_cast<Token>(t.agent_id().value) + 1);
  for (const auto& a : t.args()) cut_shape(a, x, c, out);
}

// Cuts of a deadlock equation whose name-free shape is least. The choice
// depends only on the net, so ties are left to the canonical search.
std::vector<Term> least_cuts(const Configuration& c, NameId x, const Term& t) {
  std::vector<const Term*> agents;
  std::vector<std::size_t> slots;
  find_path(t, x, agents, slots);
  std::vector<Term> best;
  Tokens best_shape;
  for (std::size_t start = 0; start < agents.size(); ++start) {
    Term cut = start == 0 ? t : unroll(agents, slots, start, start, x);
    Tokens shape;
    cut_shape(cut, x, c, shape);
    if (best.empty() || shape < best_shape) {
      best.clear();
      best_shape = std::move(shape);
    } else if (shape > best_shape) {
      continue;
    }
    best.push_back(std::move(cut));
  }
  return best;
}

// Configurations denoting the same net as c that differ only in where each
// vicious circle is cut, restricted to the least cuts.
std::vector<Configuration> cut_variants(const Configuration& c) {
  std::vector<std::pair<std::size_t, std::vector<Term>>> choices;
  std::size_t total = 1;
  for (std::size_t e = 0; e < c.equations.size(); ++e) {
    const auto& [lhs, rhs] = c.equations[e];
    const Term* name = nullptr;
    const Term* body = nullptr;
    if (lhs.is_name() && rhs.is_agent() && rhs.contains(lhs.name_id())) {
      name = &lhs;
      body = &rhs;
    } else if (rhs.is_name() && lhs.is_agent() && lhs.contains(rhs.name_id())) {
      name = &rhs;
      body = &lhs;
    }
    if (name == nullptr) continue;
    auto cuts = least_cuts(c, name->name_id(), *body);
    total *= cuts.size();
    if (total > kMaxCutVariants) throw CapExceeded("too many symmetric deadlock cuts to canonicalize");
    choices.emplace_back(e, std::move(cuts));
  }

  std::vector<Configuration> out;
  std::vector<std::size_t> pick(choices.size(), 0);
  for (;;) {
    Configuration v = c;
    for (std::size_t k = 0; k < choices.size(); ++k) {
      const auto& [e, cuts] = choices[k];
      v.equations[e] = {c.equations[e].lhs.is_name() ? c.equations[e].lhs : c.equations[e].rhs, cuts[pick[k]]};
    }
    out.push_back(std::move(v));
    std::size_t k = 0;
    while (k < choices.size() && ++pick[k] == choices[k].second.size()) pick[k++] = 0;
    if (k == choices.size()) break;
  }
  return out;
}

bool has_deadlock(const Configuration& c) {
  return std::any_of(c.equations.begin(), c.equations.end(), [](const Equation& eq) {
    return (eq.lhs.is_name() && eq.rhs.is_agent() && eq.rhs.contains(eq.lhs.name_id())) ||
           (eq.rhs.is_name() && eq.lhs.is_agent() && eq.lhs.contains(eq.rhs.name_id()));
  });
}

template <class Finish>
auto least_over_cuts(const Configuration& c, std::size_t max_agents, Finish finish) {
  check_cap(c, max_agents);
  if (c.equations.empty() || !has_deadlock(c)) {
    Canonicalizer canon(c);
    canon.run();
    return finish(canon);
  }
  auto variants = cut_variants(c);
  std::optional<Canonicalizer> best;
  Tokens best_key;
  for (const auto& v : variants) {
    Canonicalizer canon(v);
    canon.run();
    Tokens key = canon.key();
    if (!best || key < best_key) {
      best_key = std::move(key);
      best.emplace(std::move(canon));
    }
  }
  return finish(*best);
}

}  // namespace

CanonicalForm canonical_net_form(const Configuration& c, std::size_t max_agents) {
  if (c.equations.empty()) return canonical_form(c, max_agents);
  return least_over_cuts(c, max_agents, [](const Canonicalizer& canon) { return CanonicalForm{canon.key(), canon.build()}; });
}

std::vector<std::int64_t> canonical_net_key(const Configuration& c, std::size_t max_agents) {
  if (c.equations.empty()) return canonical_key(c, max_agents);
  return least_over_cuts(c, max_agents, [](const Canonicalizer& canon) { return canon.key(); });
}

bool net_equivalent(const Configuration& a, const Configuration& b, std::size_t max_agents) {
  if (a.equations.size() != b.equations.size() || a.interface.size() != b.interface.size()) return false;
  if (a.interface_labels() != b.interface_labels()) return false;
  return canonical_net_key(a, max_agents) == canonical_net_key(b, max_agents);
}

}  // namespace inet
