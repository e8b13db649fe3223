#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cofix/errors.hpp"
#include "cofix/lattice.hpp"
#include "cofix/rational.hpp"

namespace cofix {

/// What a constructor carries besides its children.
enum class AttrSchema {
    None,
    ProbPair, // pair of rationals in [0,1] summing to exactly 1
    Label,    // one label from a finite set
};

struct Constructor {
    std::string name;
    std::size_t arity = 0;
    AttrSchema schema = AttrSchema::None;
    std::vector<std::string> labels; // Label schema only
};

/// A ranked alphabet with attribute schemas. Constructor names are unique.
class Signature {
public:
    Signature() = default;
    explicit Signature(std::vector<Constructor> ctors);

    const Constructor* find(const std::string& name) const;
    /// Like find, but throws SchemaError for unknown names.
    const Constructor& at(const std::string& name) const;
    const std::vector<Constructor>& constructors() const { return ctors_; }
    bool has_nullary() const;
    std::size_t max_arity() const;

private:
    std::vector<Constructor> ctors_;
    std::map<std::string, std::size_t> index_;
};

/// Attribute payload of one term node.
class Attribute {
public:
    enum class Kind { None, Prob, Label };

    Attribute() = default;
    static Attribute none() { return Attribute(); }
    /// Probabilistic pair (p, 1-p); p must lie in [0,1].
    static Attribute prob(Rational p);
    /// Probabilistic pair (p, q); requires p + q = 1 exactly, both in [0,1].
    static Attribute prob_pair(Rational p, Rational q);
    static Attribute label(std::string value);

    Kind kind() const { return kind_; }
    const Rational& p() const;
    const Rational& q() const;
    const std::string& label_value() const;

    std::string str() const;
    friend bool operator==(const Attribute& a, const Attribute& b);
    friend bool operator!=(const Attribute& a, const Attribute& b) { return !(a == b); }

private:
    Kind kind_ = Kind::None;
    Rational p_, q_;
    std::string label_;
};

class Term;
using TermPtr = std::shared_ptr<const Term>;

/// An immutable finite tree node. Children are shared, so whole stages of an
/// enumeration can reuse earlier terms without copying. node_id exists only
/// to index witnesses; structural equality ignores it.
class Term {
public:
    Term(std::string ctor, std::shared_ptr<const Attribute> attr, std::vector<TermPtr> children,
         std::string node_id);

    static TermPtr make(std::string ctor, std::vector<TermPtr> children = {}, std::string node_id = "");
    static TermPtr make(std::string ctor, Attribute attr, std::vector<TermPtr> children,
                        std::string node_id = "");

    const std::string& ctor() const { return ctor_; }
    const Attribute& attr() const;
    const std::shared_ptr<const Attribute>& attr_ptr() const { return attr_; }
    const std::vector<TermPtr>& children() const { return children_; }
    const std::string& node_id() const { return node_id_; }

    /// Height with leaves at 1; node count. Both cached at construction.
    std::size_t height() const { return height_; }
    std::size_t size() const { return size_; }

    bool same_shape(const Term& other) const;

private:
    std::string node_id_;
    std::string ctor_;
    std::shared_ptr<const Attribute> attr_; // null means no attribute
    std::vector<TermPtr> children_;
    std::size_t height_ = 1;
    std::size_t size_ = 1;
};

struct Decomposition {
    const std::string& ctor;
    const Attribute& attr;
    const std::vector<TermPtr>& children;
};

/// Splits a term into its top constructor, attributes and children.
Decomposition decompose(const Term& t);

std::size_t height(const Term& t);

/// Canonical structural rendering, e.g. "query[1/2](check[1/3](leaf,leaf),leaf)".
/// Ignores node ids; equal shapes render equally.
std::string shape(const Term& t);

/// Copy of t with node ids "n1","n2",... assigned in document (preorder) order.
TermPtr with_fresh_node_ids(const TermPtr& t);

/// Nodes of t in document (preorder) order.
std::vector<const Term*> preorder(const Term& t);

/// Checks t against sig: known constructors, exact arities, attribute payloads
/// matching the schema. When require_ids is set, also checks that every node
/// has a unique non-empty node_id. Throws SchemaError / ValidationError.
void validate_term(const Signature& sig, const Term& t, bool require_ids = true);

/// A monotone evaluation rule: one lattice value per constructor application.
struct MonotoneAlgebra {
    Signature sig;
    Lattice lattice;
    std::string provenance; // "builtin:sigma_ptr" | "builtin:sigma_bu" | "user"
    std::function<OmegaValue(const Constructor&, const Attribute&, const std::vector<OmegaValue>&)> evaluate;
};

/// Evaluates t bottom-up through sigma (structural recursion).
OmegaValue fold(const MonotoneAlgebra& sigma, const Term& t);

struct EnumerateOptions {
    std::size_t max_height = 1;
    std::vector<Rational> prob_samples; // required when sig has a ProbPair constructor
    std::uint64_t cap = 1000000;
};

/// All terms of height <= max_height over sig, modulo attribute sampling,
/// in a deterministic order: by height stage, then constructor order, then
/// attribute sample order, then child combinations. Children are shared
/// with earlier stages. Throws CapExceeded when the projected count
/// (see projected_term_count) exceeds opts.cap.
std::vector<TermPtr> enumerate_terms(const Signature& sig, const EnumerateOptions& opts);
std::vector<TermPtr> enumerate_terms(const Signature& sig, std::size_t max_height);

/// Number of terms enumerate_terms would return, computed from the stage
/// recurrence without building anything. Saturates at 2^64-1.
std::uint64_t projected_term_count(const Signature& sig, const EnumerateOptions& opts);

/// Structural hash-consing: identical shapes become identical pointers.
class TermInterner {
public:
    TermPtr leaf(const std::string& ctor);
    TermPtr node(const std::string& ctor, const std::vector<TermPtr>& children);
    TermPtr node(const std::string& ctor, const Attribute& attr, const std::vector<TermPtr>& children);
    std::size_t size() const { return by_key_.size(); }

private:
    std::map<std::string, TermPtr> by_key_;
};

} // namespace cofix
