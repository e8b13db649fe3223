#include "cofix/terms.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdio>
#include <limits>
#include <set>

namespace cofix {

Signature::Signature(std::vector<Constructor> ctors) : ctors_(std::move(ctors)) {
    for (std::size_t i = 0; i < ctors_.size(); ++i) {
        const Constructor& c = ctors_[i];
        if (c.name.empty()) throw ValidationError("constructor with empty name");
        if (!index_.emplace(c.name, i).second)
            throw ValidationError("duplicate constructor name '" + c.name + "'");
        if (c.schema == AttrSchema::Label) {
            if (c.labels.empty())
                throw ValidationError("constructor '" + c.name + "' has a label schema but no labels");
            std::set<std::string> uniq(c.labels.begin(), c.labels.end());
            if (uniq.size() != c.labels.size())
                throw ValidationError("constructor '" + c.name + "' has duplicate labels");
        } else if (!c.labels.empty()) {
            throw ValidationError("constructor '" + c.name + "' carries labels without a label schema");
        }
    }
}

const Constructor* Signature::find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? nullptr : &ctors_[it->second];
}

const Constructor& Signature::at(const std::string& name) const {
    const Constructor* c = find(name);
    if (!c) throw SchemaError("unknown constructor '" + name + "'");
    return *c;
}

bool Signature::has_nullary() const {
    return std::any_of(ctors_.begin(), ctors_.end(), [](const Constructor& c) { return c.arity == 0; });
}

std::size_t Signature::max_arity() const {
    std::size_t m = 0;
    for (const auto& c : ctors_) m = std::max(m, c.arity);
    return m;
}

Attribute Attribute::prob(Rational p) {
    if (!p.in_unit_range()) throw ValidationError("edge weight " + p.str() + " outside [0,1]");
    Attribute a;
    a.kind_ = Kind::Prob;
    a.q_ = Rational(1) - p;
    a.p_ = std::move(p);
    return a;
}

Attribute Attribute::prob_pair(Rational p, Rational q) {
    if (p + q != Rational(1))
        throw ValidationError("edge weights " + p.str() + " + " + q.str() + " do not sum to 1");
    return prob(std::move(p));
}

Attribute Attribute::label(std::string value) {
    Attribute a;
    a.kind_ = Kind::Label;
    a.label_ = std::move(value);
    return a;
}

const Rational& Attribute::p() const {
    if (kind_ != Kind::Prob) throw TypeError("attribute has no probability pair");
    return p_;
}

const Rational& Attribute::q() const {
    if (kind_ != Kind::Prob) throw TypeError("attribute has no probability pair");
    return q_;
}

const std::string& Attribute::label_value() const {
    if (kind_ != Kind::Label) throw TypeError("attribute has no label");
    return label_;
}

std::string Attribute::str() const {
    switch (kind_) {
    case Kind::None: return "";
    case Kind::Prob: return p_.str();
    case Kind::Label: return label_;
    }
    return "";
}

bool operator==(const Attribute& a, const Attribute& b) {
    if (a.kind_ != b.kind_) return false;
    switch (a.kind_) {
    case Attribute::Kind::None: return true;
    case Attribute::Kind::Prob: return a.p_ == b.p_;
    case Attribute::Kind::Label: return a.label_ == b.label_;
    }
    return false;
}

namespace {
const Attribute kNoAttribute;
} // namespace

Term::Term(std::string ctor, std::shared_ptr<const Attribute> attr, std::vector<TermPtr> children,
           std::string node_id)
    : node_id_(std::move(node_id)), ctor_(std::move(ctor)), attr_(std::move(attr)),
      children_(std::move(children)) {
    for (const auto& c : children_) {
        if (!c) throw ValidationError("null child under constructor '" + ctor_ + "'");
        height_ = std::max(height_, c->height() + 1);
        size_ += c->size();
    }
}

TermPtr Term::make(std::string ctor, std::vector<TermPtr> children, std::string node_id) {
    return std::make_shared<Term>(std::move(ctor), nullptr, std::move(children), std::move(node_id));
}

TermPtr Term::make(std::string ctor, Attribute attr, std::vector<TermPtr> children, std::string node_id) {
    auto shared = attr.kind() == Attribute::Kind::None
                      ? nullptr
                      : std::make_shared<const Attribute>(std::move(attr));
    return std::make_shared<Term>(std::move(ctor), std::move(shared), std::move(children), std::move(node_id));
}

const Attribute& Term::attr() const {
    return attr_ ? *attr_ : kNoAttribute;
}

bool Term::same_shape(const Term& other) const {
    if (ctor_ != other.ctor_ || children_.size() != other.children_.size()) return false;
    if (height_ != other.height_ || size_ != other.size_) return false;
    if (attr() != other.attr()) return false;
    for (std::size_t i = 0; i < children_.size(); ++i) {
        if (children_[i].get() == other.children_[i].get()) continue;
        if (!children_[i]->same_shape(*other.children_[i])) return false;
    }
    return true;
}

Decomposition decompose(const Term& t) {
    return Decomposition{t.ctor(), t.attr(), t.children()};
}

std::size_t height(const Term& t) { return t.height(); }

namespace {

void shape_into(const Term& t, std::string& out) {
    out += t.ctor();
    if (t.attr().kind() != Attribute::Kind::None) {
        out += '[';
        out += t.attr().str();
        out += ']';
    }
    if (!t.children().empty()) {
        out += '(';
        for (std::size_t i = 0; i < t.children().size(); ++i) {
            if (i) out += ',';
            shape_into(*t.children()[i], out);
        }
        out += ')';
    }
}

TermPtr relabel(const Term& t, std::size_t& next) {
    const std::string id = "n" + std::to_string(next++);
    std::vector<TermPtr> kids;
    kids.reserve(t.children().size());
    for (const auto& c : t.children()) kids.push_back(relabel(*c, next));
    return std::make_shared<Term>(t.ctor(), t.attr_ptr(), std::move(kids), id);
}

} // namespace

std::string shape(const Term& t) {
    std::string out;
    out.reserve(t.size() * 8);
    shape_into(t, out);
    return out;
}

TermPtr with_fresh_node_ids(const TermPtr& t) {
    if (!t) throw ValidationError("cannot relabel a null term");
    std::size_t next = 1;
    return relabel(*t, next);
}

std::vector<const Term*> preorder(const Term& t) {
    std::vector<const Term*> out;
    out.reserve(t.size());
    std::vector<const Term*> stack{&t};
    while (!stack.empty()) {
        const Term* n = stack.back();
        stack.pop_back();
        out.push_back(n);
        for (auto it = n->children().rbegin(); it != n->children().rend(); ++it)
            stack.push_back(it->get());
    }
    return out;
}

namespace {

void validate_node(const Signature& sig, const Term& t) {
    const Constructor& c = sig.at(t.ctor());
    if (t.children().size() != c.arity)
        throw SchemaError("constructor '" + c.name + "' expects " + std::to_string(c.arity) +
                          " children, node '" + t.node_id() + "' has " +
                          std::to_string(t.children().size()));
    switch (c.schema) {
    case AttrSchema::None:
        if (t.attr().kind() != Attribute::Kind::None)
            throw SchemaError("constructor '" + c.name + "' carries an unexpected attribute");
        break;
    case AttrSchema::ProbPair:
        if (t.attr().kind() != Attribute::Kind::Prob)
            throw SchemaError("constructor '" + c.name + "' requires a probability pair at node '" +
                              t.node_id() + "'");
        break;
    case AttrSchema::Label:
        if (t.attr().kind() != Attribute::Kind::Label)
            throw SchemaError("constructor '" + c.name + "' requires a label at node '" + t.node_id() + "'");
        if (std::find(c.labels.begin(), c.labels.end(), t.attr().label_value()) == c.labels.end())
            throw SchemaError("label '" + t.attr().label_value() + "' not allowed for constructor '" +
                              c.name + "'");
        break;
    }
}

} // namespace

void validate_term(const Signature& sig, const Term& t, bool require_ids) {
    std::set<std::string> seen;
    for (const Term* n : preorder(t)) {
        validate_node(sig, *n);
        if (require_ids) {
            if (n->node_id().empty())
                throw ValidationError("node with empty node_id under constructor '" + n->ctor() + "'");
            if (!seen.insert(n->node_id()).second)
                throw ValidationError("duplicate node_id '" + n->node_id() + "'");
        }
    }
}

OmegaValue fold(const MonotoneAlgebra& sigma, const Term& t) {
    const Constructor& c = sigma.sig.at(t.ctor());
    validate_node(sigma.sig, t);
    std::vector<OmegaValue> child_values;
    child_values.reserve(t.children().size());
    for (const auto& child : t.children()) child_values.push_back(fold(sigma, *child));
    OmegaValue v = sigma.evaluate(c, t.attr(), child_values);
    validate_value(sigma.lattice, v);
    return v;
}

namespace {

using BigInt = boost::multiprecision::cpp_int;

std::size_t variant_count(const Constructor& c, const EnumerateOptions& opts) {
    switch (c.schema) {
    case AttrSchema::None: return 1;
    case AttrSchema::ProbPair: return opts.prob_samples.size();
    case AttrSchema::Label: return c.labels.size();
    }
    return 1;
}

BigInt pow_big(const BigInt& base, std::size_t exp) {
    BigInt r = 1;
    for (std::size_t i = 0; i < exp; ++i) r *= base;
    return r;
}

BigInt projected_count_big(const Signature& sig, const EnumerateOptions& opts) {
    BigInt upto_prev = 0, upto = 0;
    for (std::size_t h = 1; h <= opts.max_height; ++h) {
        BigInt next = 0;
        for (const auto& c : sig.constructors()) {
            const BigInt variants = variant_count(c, opts);
            if (c.arity == 0) {
                if (h == 1) next += variants;
            } else if (h >= 2) {
                next += variants * (pow_big(upto, c.arity) - pow_big(upto_prev, c.arity));
            }
        }
        upto_prev = upto;
        upto += next;
    }
    return upto;
}

std::vector<std::shared_ptr<const Attribute>> attribute_variants(const Constructor& c,
                                                                 const EnumerateOptions& opts) {
    std::vector<std::shared_ptr<const Attribute>> out;
    switch (c.schema) {
    case AttrSchema::None:
        out.push_back(nullptr);
        break;
    case AttrSchema::ProbPair:
        if (opts.prob_samples.empty())
            throw ValidationError("constructor '" + c.name +
                                  "' needs a probability sample set for enumeration");
        for (const auto& p : opts.prob_samples)
            out.push_back(std::make_shared<const Attribute>(Attribute::prob(p)));
        break;
    case AttrSchema::Label:
        for (const auto& l : c.labels)
            out.push_back(std::make_shared<const Attribute>(Attribute::label(l)));
        break;
    }
    return out;
}

} // namespace

std::uint64_t projected_term_count(const Signature& sig, const EnumerateOptions& opts) {
    const BigInt n = projected_count_big(sig, opts);
    if (n > BigInt(std::numeric_limits<std::uint64_t>::max()))
        return std::numeric_limits<std::uint64_t>::max();
    return n.convert_to<std::uint64_t>();
}

std::vector<TermPtr> enumerate_terms(const Signature& sig, const EnumerateOptions& opts) {
    if (opts.max_height == 0) return {};
    for (const auto& p : opts.prob_samples)
        if (!p.in_unit_range())
            throw ValidationError("probability sample " + p.str() + " outside [0,1]");

    const BigInt projected = projected_count_big(sig, opts);
    if (projected > BigInt(opts.cap))
        throw CapExceeded("enumeration of " + projected.str() + " terms exceeds the cap of " +
                          std::to_string(opts.cap));

    std::vector<TermPtr> out;
    out.reserve(projected.convert_to<std::size_t>());

    std::vector<std::vector<std::shared_ptr<const Attribute>>> variants;
    variants.reserve(sig.constructors().size());
    for (const auto& c : sig.constructors()) variants.push_back(attribute_variants(c, opts));

    std::size_t upto_prev = 0; // terms of height <= h-2
    std::size_t upto = 0;      // terms of height <= h-1
    for (std::size_t h = 1; h <= opts.max_height; ++h) {
        const std::size_t stage_begin = out.size();
        for (std::size_t ci = 0; ci < sig.constructors().size(); ++ci) {
            const Constructor& c = sig.constructors()[ci];
            if (c.arity == 0) {
                if (h == 1)
                    for (const auto& attr : variants[ci])
                        out.push_back(std::make_shared<Term>(c.name, attr, std::vector<TermPtr>{}, ""));
                continue;
            }
            if (h < 2 || upto == 0) continue;
            for (const auto& attr : variants[ci]) {
                std::vector<std::size_t> idx(c.arity, 0);
                while (true) {
                    // At least one child of height exactly h-1.
                    if (std::any_of(idx.begin(), idx.end(),
                                    [&](std::size_t i) { return i >= upto_prev; })) {
                        std::vector<TermPtr> kids;
                        kids.reserve(c.arity);
                        for (std::size_t i : idx) kids.push_back(out[i]);
                        out.push_back(std::make_shared<Term>(c.name, attr, std::move(kids), ""));
                    }
                    std::size_t pos = c.arity;
                    while (pos > 0) {
                        if (++idx[pos - 1] < upto) break;
                        idx[pos - 1] = 0;
                        --pos;
                    }
                    if (pos == 0) break;
                }
            }
        }
        upto_prev = upto;
        upto = out.size();
        if (out.size() == stage_begin) break; // no new terms can appear at greater heights
    }
    return out;
}

std::vector<TermPtr> enumerate_terms(const Signature& sig, std::size_t max_height) {
    EnumerateOptions opts;
    opts.max_height = max_height;
    return enumerate_terms(sig, opts);
}

TermPtr TermInterner::leaf(const std::string& ctor) { return node(ctor, Attribute::none(), {}); }

TermPtr TermInterner::node(const std::string& ctor, const std::vector<TermPtr>& children) {
    return node(ctor, Attribute::none(), children);
}

TermPtr TermInterner::node(const std::string& ctor, const Attribute& attr,
                           const std::vector<TermPtr>& children) {
    // Children must themselves be interned pointers for this key to be sound.
    std::string key = ctor;
    key += '[';
    key += attr.str();
    key += ']';
    char buf[8 + sizeof(void*) * 2];
    for (const auto& c : children) {
        std::snprintf(buf, sizeof buf, "|%p", static_cast<const void*>(c.get()));
        key += buf;
    }
    auto it = by_key_.find(key);
    if (it != by_key_.end()) return it->second;
    auto shared = attr.kind() == Attribute::Kind::None ? nullptr : std::make_shared<const Attribute>(attr);
    TermPtr t = std::make_shared<Term>(ctor, shared, children, "");
    by_key_.emplace(std::move(key), t);
    return t;
}

} // namespace cofix
