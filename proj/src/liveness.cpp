#include "cofix/liveness.hpp"

namespace cofix::liveness {

Signature prob_signature() {
    return Signature({
        Constructor{kLeaf, 0, AttrSchema::None, {}},
        Constructor{kCheck, 2, AttrSchema::ProbPair, {}},
        Constructor{kQuery, 2, AttrSchema::ProbPair, {}},
    });
}

void validate_prob_tree(const Term& t) {
    validate_term(prob_signature(), t, /*require_ids=*/true);
}

MonotoneAlgebra sigma_ptr() {
    MonotoneAlgebra a;
    a.sig = prob_signature();
    a.lattice = Lattice::unit_interval();
    a.provenance = "builtin:sigma_ptr";
    a.evaluate = [](const Constructor& c, const Attribute& attr,
                    const std::vector<OmegaValue>& kids) -> OmegaValue {
        if (c.name == kLeaf) return OmegaValue::rational(Rational(0));
        if (c.name == kCheck) return OmegaValue::rational(Rational(1));
        if (c.name == kQuery)
            return OmegaValue::rational(attr.p() * kids[0].rat() + attr.q() * kids[1].rat());
        throw SchemaError("sigma_ptr has no rule for constructor '" + c.name + "'");
    };
    return a;
}

Rational reach_probability(const Term& t) {
    validate_term(prob_signature(), t, /*require_ids=*/false);
    return fold(sigma_ptr(), t).rat();
}

Rational oracle_reach_probability(const Term& t) {
    validate_term(prob_signature(), t, /*require_ids=*/false);
    Rational total(0);
    std::vector<std::pair<const Term*, Rational>> stack{{&t, Rational(1)}};
    while (!stack.empty()) {
        auto [n, weight] = std::move(stack.back());
        stack.pop_back();
        if (n->ctor() == kCheck) {
            total = total + weight;
        } else if (n->ctor() == kQuery) {
            stack.emplace_back(n->children()[0].get(), weight * n->attr().p());
            stack.emplace_back(n->children()[1].get(), weight * n->attr().q());
        }
        // leaves contribute nothing
    }
    return total;
}

std::shared_ptr<const Domain> node_domain(const Term& t) {
    validate_prob_tree(t);
    std::vector<std::string> ids;
    for (const Term* n : preorder(t)) ids.push_back(n->node_id());
    return Domain::of_ids(std::move(ids));
}

PredicateMap make_submartingale(const Term& t, const std::map<std::string, Rational>& values) {
    auto dom = node_domain(t);
    for (const auto& [id, v] : values) {
        if (!dom->contains(id))
            throw ValidationError("witness names unknown node '" + id + "'");
        if (!v.in_unit_range())
            throw ValidationError("witness value " + v.str() + " at node '" + id + "' outside [0,1]");
    }
    std::vector<OmegaValue> vals(dom->size(), OmegaValue::rational(Rational(0)));
    for (std::size_t i = 0; i < dom->size(); ++i) {
        auto it = values.find(dom->id_at(i));
        if (it == values.end())
            throw DomainError("witness misses node '" + dom->id_at(i) + "'");
        vals[i] = OmegaValue::rational(it->second);
    }
    return PredicateMap(std::move(dom), std::move(vals));
}

Verdict check_submartingale(const Term& t, const PredicateMap& f) {
    validate_prob_tree(t);
    for (const Term* n : preorder(t)) {
        const Rational& v = f.at(n->node_id()).rat();
        if (!v.in_unit_range())
            return Verdict::fail(n->node_id(), "range",
                                 "witness value " + v.str() + " outside [0,1]");
        if (n->ctor() == kLeaf) {
            if (v != Rational(0))
                return Verdict::fail(n->node_id(), "leaf_zero",
                                     "leaf carries " + v.str() + ", expected 0/1");
        } else if (n->ctor() == kQuery) {
            const Rational rhs = n->attr().p() * f.at(n->children()[0]->node_id()).rat() +
                                 n->attr().q() * f.at(n->children()[1]->node_id()).rat();
            if (!(v <= rhs))
                return Verdict::fail(n->node_id(), "expectation",
                                     "f = " + v.str() + " exceeds branch expectation " + rhs.str());
        }
    }
    return Verdict::pass("submartingale conditions hold; certified lower bound f(root) = " +
                         f.at(t.node_id()).rat().str());
}

namespace {

Rational greatest_at(const Term& n, PredicateMap& out) {
    Rational v(0);
    if (n.ctor() == kCheck) {
        for (const auto& c : n.children()) greatest_at(*c, out);
        v = Rational(1);
    } else if (n.ctor() == kQuery) {
        const Rational left = greatest_at(*n.children()[0], out);
        const Rational right = greatest_at(*n.children()[1], out);
        v = n.attr().p() * left + n.attr().q() * right;
    }
    out.set(n.node_id(), OmegaValue::rational(v));
    return v;
}

} // namespace

PredicateMap greatest_submartingale(const Term& t) {
    auto dom = node_domain(t);
    PredicateMap out = PredicateMap::constant(dom, OmegaValue::rational(Rational(0)));
    greatest_at(t, out);
    return out;
}

} // namespace cofix::liveness
