#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cofix/lattice.hpp"
#include "cofix/terms.hpp"
#include "cofix/verdict.hpp"

namespace cofix {

/// A finite indexed domain: node ids, automaton states, or enumerated terms.
/// Identifier domains iterate in sorted order; term domains iterate in
/// enumeration order under dense zero-padded ids, which is the same thing.
class Domain {
public:
    static std::shared_ptr<const Domain> of_ids(std::vector<std::string> ids);
    static std::shared_ptr<const Domain> of_terms(std::vector<TermPtr> terms);

    std::size_t size() const { return dense_ ? terms_.size() : ids_.size(); }
    std::string id_at(std::size_t i) const;
    std::size_t index_of(const std::string& id) const; // throws DomainError
    bool contains(const std::string& id) const;

    bool is_term_domain() const { return dense_; }
    const std::vector<TermPtr>& terms() const { return terms_; }
    const TermPtr& term_at(std::size_t i) const { return terms_.at(i); }
    /// Index of a term by pointer identity; decompose-closed enumerations
    /// share child pointers so this never misses for them.
    std::size_t term_index(const Term* t) const; // throws DomainError

private:
    std::vector<std::string> ids_;
    std::map<std::string, std::size_t> pos_;
    std::vector<TermPtr> terms_;
    std::unordered_map<const Term*, std::size_t> term_pos_;
    bool dense_ = false;
};

/// A total map from a finite domain into a lattice. Totality holds by
/// construction: every element carries a value at all times.
class PredicateMap {
public:
    PredicateMap(std::shared_ptr<const Domain> dom, std::vector<OmegaValue> vals);
    static PredicateMap constant(std::shared_ptr<const Domain> dom, const OmegaValue& v);

    const std::shared_ptr<const Domain>& domain() const { return dom_; }
    std::size_t size() const { return vals_.size(); }

    const OmegaValue& at(const std::string& id) const { return vals_[dom_->index_of(id)]; }
    const OmegaValue& at_index(std::size_t i) const { return vals_.at(i); }
    void set(const std::string& id, OmegaValue v) { vals_[dom_->index_of(id)] = std::move(v); }
    void set_index(std::size_t i, OmegaValue v) { vals_.at(i) = std::move(v); }

    const std::vector<OmegaValue>& values() const { return vals_; }
    std::vector<OmegaValue>& values() { return vals_; }

    friend bool operator==(const PredicateMap& a, const PredicateMap& b);
    friend bool operator!=(const PredicateMap& a, const PredicateMap& b) { return !(a == b); }

private:
    std::shared_ptr<const Domain> dom_;
    std::vector<OmegaValue> vals_;
};

bool pointwise_leq(const Lattice& l, const PredicateMap& a, const PredicateMap& b);

/// A monotone step function on predicate maps over a fixed finite domain.
/// step reads only its argument (Jacobi style), never partial updates.
struct Transformer {
    Lattice lattice;
    std::shared_ptr<const Domain> domain;
    std::function<void(const PredicateMap& in, PredicateMap& out)> step_into;
    bool monotone_checked = false;

    PredicateMap step(const PredicateMap& in) const;
};

/// How one domain element unfolds: its constructor, attribute payload, and
/// successor elements (one per child position).
struct Unfolding {
    std::string ctor;
    Attribute attr;
    std::vector<std::string> successors;
};

/// Builds the transformer (step g)(x) = sigma(c_x, attrs_x, [g(succ_i(x))]).
/// Unfoldings are resolved eagerly; a successor outside the domain raises
/// DomainError naming the offending element.
Transformer make_transformer(const MonotoneAlgebra& sigma, std::shared_ptr<const Domain> domain,
                             const std::function<Unfolding(const std::string&)>& unfold);

/// Same transformer over an enumerated term domain, with unfold = decompose.
Transformer make_term_transformer(const MonotoneAlgebra& sigma, std::vector<TermPtr> terms);

struct FixpointOptions {
    std::size_t max_iter = 100000;
    /// When set, chains of rational values stop once successive iterates are
    /// within epsilon pointwise (for user-provided approximate algebras).
    /// Default is exact equality.
    std::optional<Rational> epsilon;
};

struct FixpointResult {
    PredicateMap map;
    std::size_t iterations = 0; // first k with g_{k+1} = g_k
    bool converged = false;     // false means max_iter hit, never silent truncation
    bool monotone_checked = false;
};

/// Kleene iteration from bottom (lfp) / top (gfp), stopping at the first
/// repeated iterate. Non-convergence within max_iter is reported, and the
/// last iterate returned.
FixpointResult lfp(const Transformer& t, const FixpointOptions& opts = {});
FixpointResult gfp(const Transformer& t, const FixpointOptions& opts = {});

/// Samples pointwise-ordered child-value vectors (exhaustively for small
/// powerset lattices) and reports the first monotonicity violation of sigma.
Verdict check_monotone(const MonotoneAlgebra& sigma, std::size_t sample_count, std::uint64_t seed);

struct StageAgreement {
    std::size_t stage = 0;
    std::size_t terms_checked = 0;
    bool lfp_eq_fold = true;
    bool gfp_eq_fold = true;
    bool lfp_eq_gfp = true;
    bool passed() const { return lfp_eq_fold && gfp_eq_fold && lfp_eq_gfp; }
};

struct CoincidenceReport {
    bool passed = false; // every stage agreed, both chains converged, and they met
    std::vector<StageAgreement> stages;
    std::size_t lfp_iterations = 0;
    std::size_t gfp_iterations = 0;
    bool lfp_converged = false;
    bool gfp_converged = false;
    bool coincided = false; // final lfp == fold == gfp across the whole domain
    std::size_t term_count = 0;
    Lattice lattice;
    std::shared_ptr<const Domain> domain;   // the enumerated term domain
    std::vector<OmegaValue> fixed_point;    // final least-chain values, aligned with domain
};

struct CoincidenceOptions {
    std::size_t height_bound = 3;
    std::vector<Rational> prob_samples;
    std::uint64_t cap = 1000000;
    std::size_t max_iter = 100000;
};

/// Enumerates the decompose-closed term domain up to the height bound, runs
/// the ascending and descending chains of the induced transformer, and checks
/// per stage i that both chains agree with fold on all terms of height <= i.
CoincidenceReport coincidence_check(const MonotoneAlgebra& sigma, const Signature& sig,
                                    const CoincidenceOptions& opts);

} // namespace cofix
