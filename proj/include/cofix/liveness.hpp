#pragma once

#include "cofix/fixpoint.hpp"
#include "cofix/terms.hpp"
#include "cofix/verdict.hpp"

namespace cofix::liveness {

inline constexpr const char* kLeaf = "leaf";
inline constexpr const char* kCheck = "check"; // success node: liveness achieved here
inline constexpr const char* kQuery = "query"; // probabilistic branch with weights (p, 1-p)

/// leaf/0, check/2 and query/2 with probability-pair attributes.
Signature prob_signature();

/// Checks t is a probabilistic tree over prob_signature with unique node ids.
void validate_prob_tree(const Term& t);

/// The evaluation rule: leaves 0, success nodes 1, branch nodes the
/// expectation p*left + (1-p)*right over the unit interval.
MonotoneAlgebra sigma_ptr();

/// Probability of eventually hitting a success node, as fold of sigma_ptr.
Rational reach_probability(const Term& t);

/// The same quantity by brute force: enumerates every success node with no
/// success ancestor and sums the root-path weight products. Never calls fold.
Rational oracle_reach_probability(const Term& t);

/// Domain of t's node ids (sorted), for witness maps.
std::shared_ptr<const Domain> node_domain(const Term& t);

/// Builds a node_id -> [0,1] witness map; every node of t must be covered.
PredicateMap make_submartingale(const Term& t, const std::map<std::string, Rational>& values);

/// Checks the submartingale conditions:
///   leaf_zero:    f(n) = 0 at every leaf
///   expectation:  f(n) <= p*f(left) + (1-p)*f(right) at every branch node
/// Success nodes are unconstrained. Reports the first violating node in
/// document (preorder) order. A passing witness certifies
/// f(root) <= reach_probability(t).
Verdict check_submartingale(const Term& t, const PredicateMap& f);

/// The greatest submartingale: 0 at leaves, 1 at success nodes, the exact
/// expectation at branch nodes. Its root value equals reach_probability(t).
PredicateMap greatest_submartingale(const Term& t);

} // namespace cofix::liveness
