#pragma once

#include <optional>

#include "cofix/fixpoint.hpp"
#include "cofix/terms.hpp"
#include "cofix/verdict.hpp"

namespace cofix::automata {

/// A transition-table key: constructor name plus the child states read.
struct DeltaKey {
    std::string ctor;
    std::vector<std::string> states;

    friend bool operator<(const DeltaKey& a, const DeltaKey& b) {
        if (a.ctor != b.ctor) return a.ctor < b.ctor;
        return a.states < b.states;
    }
    std::string str() const;
};

/// Nondeterministic bottom-up tree automaton with one accepting state.
/// delta is total: keys absent from the table mean the empty state set.
struct BottomUpTA {
    StateSet states;
    std::string accept;
    Signature sig;
    std::map<DeltaKey, StateSet> delta;

    const StateSet& delta_at(const std::string& ctor, const std::vector<std::string>& qs) const;
};

/// Checks carrier membership of accept and of every delta entry, and that
/// delta keys use signature constructors at the right arity.
void validate_bta(const BottomUpTA& a);

/// The evaluation rule over the powerset of states: a leaf evaluates to its
/// transition set, an inner node to the union of delta over all child-state
/// combinations.
MonotoneAlgebra sigma_bu(const BottomUpTA& a);

/// States reachable at the root of t, as fold of sigma_bu.
StateSet reachable_states(const BottomUpTA& a, const Term& t);

/// Brute-force reference: enumerates all |Q|^|N| node labelings of t and
/// keeps those satisfying the local run conditions. Never calls fold.
/// Throws CapExceeded when |Q|^|N| exceeds cap.
std::vector<std::map<std::string, std::string>> oracle_runs(const BottomUpTA& a, const Term& t,
                                                            std::uint64_t cap = 20000000);

/// True iff some run labels the root with the accepting state.
bool accepts(const BottomUpTA& a, const Term& t);

/// Builds a node_id -> state-set witness map over t's nodes.
PredicateMap make_invariant(const BottomUpTA& a, const Term& t,
                            const std::map<std::string, StateSet>& values);

/// Checks the acceptance-invariant conditions:
///   leaf_bound:     f(n) subset of delta(s) at every leaf
///   child_bound:    f(n) subset of union of delta(s, q...) over q_i in f(child_i)
///   root_accepting: the accepting state lies in f(root)
/// Nodes are scanned in document order; the root condition comes last.
Verdict check_acceptance_invariant(const BottomUpTA& a, const Term& t, const PredicateMap& f);

/// The greatest acceptance invariant: f(n) = reachable_states of the subtree
/// at n. Returned iff it satisfies the root condition, i.e. iff accepts(a,t).
std::optional<PredicateMap> synth_acceptance_invariant(const BottomUpTA& a, const Term& t);

/// One production of a generative automaton: a constructor applied to
/// generator states (arity-many of them).
struct Production {
    std::string ctor;
    std::vector<std::string> args;
    std::string str() const;
};

/// Top-down generative tree automaton: c maps every state to the finite set
/// of productions it admits. States with no productions are deadlocked.
struct GenerativeTA {
    StateSet states;
    std::string init;
    Signature sig;
    std::map<std::string, std::vector<Production>> c;

    const std::vector<Production>& productions(const std::string& x) const;
};

void validate_gta(const GenerativeTA& g);

/// All trees of height <= max_height generated from init, deterministically
/// ordered and deduplicated by shape. An under-approximation of the full
/// (finite-tree) language of g.
std::vector<TermPtr> generate_trees(const GenerativeTA& g, std::size_t max_height,
                                    std::uint64_t cap = 1000000);

/// delta lifted through a state predicate f: the set of automaton states the
/// production a can evaluate to when each generator state x contributes f(x).
StateSet delta_f(const BottomUpTA& a, const PredicateMap& f, const Production& p);

/// Checks the model-checking invariant over generator states:
///   state_closure:     f(x) subset of intersection of delta_f(a) over a in c(x)
///                      (an empty intersection means all states)
///   initial_accepting: the accepting state lies in f(init)
Verdict check_model_invariant(const BottomUpTA& a, const GenerativeTA& g, const PredicateMap& f);

/// Greatest model invariant via the descending chain of
/// Phi(f)(x) = intersection of delta_f(a) over a in c(x), computed with gfp.
/// Returned iff the accepting state lies in f(init).
std::optional<PredicateMap> synth_model_invariant(const BottomUpTA& a, const GenerativeTA& g);

struct BoundedResult {
    bool holds = true;
    TermPtr counterexample; // first rejected tree in generation order, fresh node ids
    std::size_t trees_checked = 0;
};

/// Checks acceptance of every generated tree up to the height bound.
BoundedResult model_check_bounded(const BottomUpTA& a, const GenerativeTA& g, std::size_t max_height);

/// Merged signature for a paired automaton and generator; rejects
/// constructors declared at two different arities.
Signature merged_signature(const BottomUpTA& a, const GenerativeTA& g);

} // namespace cofix::automata
