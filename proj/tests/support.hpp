#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "inet/combinators.hpp"
#include "inet/core.hpp"
#include "inet/parser.hpp"

namespace testing {

inline inet::Configuration parse_config(std::string_view text, const inet::Signature& s) {
  auto doc = inet::SourceDocument::from_string(std::string(text));
  auto r = inet::parse_configuration(doc, s);
  if (!r.ok()) {
    std::string msg;
    for (const auto& e : r.errors) msg += inet::format_error(doc, e) + "\n";
    throw std::runtime_error("bad test configuration: " + msg);
  }
  return *r.value;
}

inline inet::InteractionSystem parse_system(std::string_view text) {
  auto doc = inet::SourceDocument::from_string(std::string(text));
  auto r = inet::parse_system(doc);
  if (!r.ok()) {
    std::string msg;
    for (const auto& e : r.errors) msg += inet::format_error(doc, e) + "\n";
    throw std::runtime_error("bad test system: " + msg);
  }
  return *r.value;
}

inline const inet::InteractionSystem& combinators() {
  static const inet::InteractionSystem s = inet::combinator_system();
  return s;
}

inline inet::Configuration comb(std::string_view text) { return parse_config(text, combinators().signature()); }

inline inet::Term rename_term(const inet::Term& t, const std::vector<std::uint32_t>& map) {
  if (t.is_name()) return inet::Term::name(inet::NameId{map[t.name_id().value]});
  std::vector<inet::Term> args;
  for (const auto& a : t.args()) args.push_back(rename_term(a, map));
  return inet::Term::agent(t.agent_id(), std::move(args));
}

// Same configuration under a random injective renaming, equation order and
// orientation. Interface labels follow their names.
inline inet::Configuration alpha_variant(const inet::Configuration& c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uint32_t n = c.name_bound();
  std::vector<std::uint32_t> map(n);
  for (std::uint32_t i = 0; i < n; ++i) map[i] = i + 7;
  std::shuffle(map.begin(), map.end(), rng);

  inet::Configuration out;
  for (const auto& eq : c.equations) {
    auto l = rename_term(eq.lhs, map);
    auto r = rename_term(eq.rhs, map);
    if (rng() % 2) std::swap(l, r);
    out.equations.push_back({std::move(l), std::move(r)});
  }
  std::shuffle(out.equations.begin(), out.equations.end(), rng);
  for (auto x : c.interface) out.interface.push_back(inet::NameId{map[x.value]});
  for (const auto& [id, label] : c.labels) {
    if (c.is_interface(id)) out.labels[inet::NameId{map[id.value]}] = label;
  }
  return out;
}

// Complete gam tree of the given depth with eps leaves.
inline inet::Term gamma_tree(std::size_t depth) {
  auto names = inet::combinator_names();
  if (depth == 0) return inet::Term::agent(names.eps);
  return inet::Term::agent(names.gam, {gamma_tree(depth - 1), gamma_tree(depth - 1)});
}

// All eps-closed {gam, eps} trees with exactly `internal` gam nodes.
inline std::vector<inet::Term> gamma_trees(std::size_t internal) {
  auto names = inet::combinator_names();
  if (internal == 0) return {inet::Term::agent(names.eps)};
  std::vector<inet::Term> out;
  for (std::size_t left = 0; left < internal; ++left) {
    auto ls = gamma_trees(left);
    auto rs = gamma_trees(internal - 1 - left);
    for (const auto& l : ls)
      for (const auto& r : rs) out.push_back(inet::Term::agent(names.gam, {l, r}));
  }
  return out;
}

}  // namespace testing
