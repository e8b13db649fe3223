#pragma once

#include "cofix/automata.hpp"
#include "cofix/fixpoint.hpp"
#include "cofix/rng.hpp"
#include "cofix/terms.hpp"

namespace cofix::gen {

struct TreeOptions {
    std::size_t max_height = 6;
    std::uint64_t stop_percent = 35; // chance a node becomes a leaf before max height
    std::vector<Rational> weight_grid; // empty means the default grid
};

/// Finite grid of edge weights used by the random tree generator.
std::vector<Rational> default_weight_grid();

/// Seeded random probabilistic tree with node ids in document order.
TermPtr random_prob_tree(Rng& rng, const TreeOptions& opts);

struct BtaOptions {
    std::size_t max_states = 3;
    std::vector<std::pair<std::string, std::size_t>> constructors = {{"a", 0}, {"g", 2}};
    std::uint64_t entry_percent = 55; // chance a state enters any given transition set
};

/// Seeded random bottom-up automaton over the given ranked alphabet.
automata::BottomUpTA random_bta(Rng& rng, const BtaOptions& opts);

struct GtaOptions {
    std::size_t max_states = 3;
    std::vector<std::pair<std::string, std::size_t>> constructors = {{"a", 0}, {"g", 2}};
    std::size_t max_productions = 3; // per state
};

/// Seeded random generative automaton. States may end up deadlocked.
automata::GenerativeTA random_gta(Rng& rng, const GtaOptions& opts);

/// Scales every node value of a submartingale by an independent random
/// rational from [0,1]. The result stays pointwise below the input but need
/// not satisfy the branch-expectation condition; callers re-check.
PredicateMap perturb_submartingale(Rng& rng, const PredicateMap& f);

/// Random tree over an attribute-free signature (used to pair trees with
/// automata). Leaves are forced at max_height.
TermPtr random_signature_tree(Rng& rng, const Signature& sig, std::size_t max_height,
                              std::uint64_t stop_percent = 35);

} // namespace cofix::gen
