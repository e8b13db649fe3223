#include "cofix/fixpoint.hpp"

#include <algorithm>
#include <cstdio>

#include "cofix/rng.hpp"

namespace cofix {

namespace {

std::string dense_id(std::size_t i) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "t%07zu", i);
    return buf;
}

} // namespace

std::shared_ptr<const Domain> Domain::of_ids(std::vector<std::string> ids) {
    auto d = std::make_shared<Domain>();
    std::sort(ids.begin(), ids.end());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i && ids[i] == ids[i - 1])
            throw ValidationError("duplicate domain identifier '" + ids[i] + "'");
        d->pos_.emplace(ids[i], i);
    }
    d->ids_ = std::move(ids);
    return d;
}

std::shared_ptr<const Domain> Domain::of_terms(std::vector<TermPtr> terms) {
    auto d = std::make_shared<Domain>();
    d->dense_ = true;
    d->term_pos_.reserve(terms.size() * 2);
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (!terms[i]) throw ValidationError("null term in domain");
        if (!d->term_pos_.emplace(terms[i].get(), i).second)
            throw ValidationError("repeated term in domain: " + shape(*terms[i]));
    }
    d->terms_ = std::move(terms);
    return d;
}

std::string Domain::id_at(std::size_t i) const {
    if (i >= size()) throw DomainError("domain index " + std::to_string(i) + " out of range");
    return dense_ ? dense_id(i) : ids_[i];
}

std::size_t Domain::index_of(const std::string& id) const {
    if (dense_) {
        if (id.size() >= 2 && id[0] == 't') {
            std::size_t k = 0;
            bool digits = true;
            for (std::size_t i = 1; i < id.size(); ++i) {
                if (id[i] < '0' || id[i] > '9') { digits = false; break; }
                k = k * 10 + std::size_t(id[i] - '0');
            }
            if (digits && k < terms_.size() && dense_id(k) == id) return k;
        }
        throw DomainError("'" + id + "' is not in the domain");
    }
    auto it = pos_.find(id);
    if (it == pos_.end()) throw DomainError("'" + id + "' is not in the domain");
    return it->second;
}

bool Domain::contains(const std::string& id) const {
    try {
        index_of(id);
        return true;
    } catch (const DomainError&) {
        return false;
    }
}

std::size_t Domain::term_index(const Term* t) const {
    auto it = term_pos_.find(t);
    if (it == term_pos_.end())
        throw DomainError("term " + (t ? shape(*t) : std::string("<null>")) +
                          " is not in the domain (decomposition left the enumeration)");
    return it->second;
}

PredicateMap::PredicateMap(std::shared_ptr<const Domain> dom, std::vector<OmegaValue> vals)
    : dom_(std::move(dom)), vals_(std::move(vals)) {
    if (!dom_) throw ValidationError("predicate map without a domain");
    if (dom_->size() != vals_.size())
        throw ValidationError("predicate map has " + std::to_string(vals_.size()) + " values for " +
                              std::to_string(dom_->size()) + " domain elements");
}

PredicateMap PredicateMap::constant(std::shared_ptr<const Domain> dom, const OmegaValue& v) {
    if (!dom) throw ValidationError("predicate map without a domain");
    std::vector<OmegaValue> vals(dom->size(), v);
    return PredicateMap(std::move(dom), std::move(vals));
}

namespace {

bool same_domain(const Domain& a, const Domain& b) {
    if (&a == &b) return true;
    if (a.size() != b.size()) return false;
    if (a.is_term_domain() != b.is_term_domain()) return false;
    if (a.is_term_domain()) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            const Term* x = a.term_at(i).get();
            const Term* y = b.term_at(i).get();
            if (x != y && !x->same_shape(*y)) return false;
        }
        return true;
    }
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a.id_at(i) != b.id_at(i)) return false;
    return true;
}

} // namespace

bool operator==(const PredicateMap& a, const PredicateMap& b) {
    if (!same_domain(*a.dom_, *b.dom_)) return false;
    return a.vals_ == b.vals_;
}

bool pointwise_leq(const Lattice& l, const PredicateMap& a, const PredicateMap& b) {
    if (!same_domain(*a.domain(), *b.domain()))
        throw DomainError("pointwise comparison of maps over different domains");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!leq(l, a.at_index(i), b.at_index(i))) return false;
    return true;
}

PredicateMap Transformer::step(const PredicateMap& in) const {
    PredicateMap out = in;
    step_into(in, out);
    return out;
}

namespace {

struct Entry {
    std::size_t ctor_idx = 0;
    std::shared_ptr<const Attribute> attr; // null means no attribute
    std::vector<std::size_t> kids;
};

using Entries = std::shared_ptr<const std::vector<Entry>>;

const Attribute kNoAttr;

const Attribute& attr_ref(const Entry& e) { return e.attr ? *e.attr : kNoAttr; }

Transformer transformer_from_entries(const MonotoneAlgebra& sigma,
                                     std::shared_ptr<const Domain> domain, Entries entries) {
    auto sig = std::make_shared<const Signature>(sigma.sig);
    auto eval = sigma.evaluate;
    const Lattice lattice = sigma.lattice;
    Transformer t;
    t.lattice = lattice;
    t.domain = domain;
    t.step_into = [sig, eval, lattice, entries](const PredicateMap& in, PredicateMap& out) {
        std::vector<OmegaValue> args;
        for (std::size_t i = 0; i < entries->size(); ++i) {
            const Entry& e = (*entries)[i];
            const Constructor& c = sig->constructors()[e.ctor_idx];
            args.clear();
            args.reserve(e.kids.size());
            for (std::size_t k : e.kids) args.push_back(in.at_index(k));
            OmegaValue v = eval(c, attr_ref(e), args);
            validate_value(lattice, v);
            out.set_index(i, std::move(v));
        }
    };
    return t;
}

std::size_t ctor_index(const Signature& sig, const std::string& name) {
    const auto& cs = sig.constructors();
    for (std::size_t i = 0; i < cs.size(); ++i)
        if (cs[i].name == name) return i;
    throw SchemaError("unknown constructor '" + name + "'");
}

Entries term_entries(const MonotoneAlgebra& sigma, const std::shared_ptr<const Domain>& dom) {
    auto entries = std::make_shared<std::vector<Entry>>();
    entries->reserve(dom->size());
    for (std::size_t i = 0; i < dom->size(); ++i) {
        const TermPtr& t = dom->term_at(i);
        Entry e;
        e.ctor_idx = ctor_index(sigma.sig, t->ctor());
        const Constructor& c = sigma.sig.constructors()[e.ctor_idx];
        if (t->children().size() != c.arity)
            throw SchemaError("constructor '" + c.name + "' expects " + std::to_string(c.arity) +
                              " children, term " + shape(*t) + " has " +
                              std::to_string(t->children().size()));
        e.attr = t->attr_ptr();
        e.kids.reserve(t->children().size());
        for (const auto& child : t->children()) e.kids.push_back(dom->term_index(child.get()));
        entries->push_back(std::move(e));
    }
    return entries;
}

std::vector<OmegaValue> fold_values(const MonotoneAlgebra& sigma, const Entries& entries) {
    std::vector<OmegaValue> v(entries->size());
    std::vector<OmegaValue> args;
    for (std::size_t i = 0; i < entries->size(); ++i) {
        const Entry& e = (*entries)[i];
        args.clear();
        for (std::size_t k : e.kids) {
            if (k >= i) throw DomainError("term domain is not in dependency order");
            args.push_back(v[k]);
        }
        v[i] = sigma.evaluate(sigma.sig.constructors()[e.ctor_idx], attr_ref(e), args);
        validate_value(sigma.lattice, v[i]);
    }
    return v;
}

} // namespace

Transformer make_transformer(const MonotoneAlgebra& sigma, std::shared_ptr<const Domain> domain,
                             const std::function<Unfolding(const std::string&)>& unfold) {
    auto entries = std::make_shared<std::vector<Entry>>();
    entries->reserve(domain->size());
    for (std::size_t i = 0; i < domain->size(); ++i) {
        const std::string id = domain->id_at(i);
        Unfolding u = unfold(id);
        Entry e;
        e.ctor_idx = ctor_index(sigma.sig, u.ctor);
        const Constructor& c = sigma.sig.constructors()[e.ctor_idx];
        if (u.successors.size() != c.arity)
            throw SchemaError("unfolding of '" + id + "' yields " + std::to_string(u.successors.size()) +
                              " successors, constructor '" + c.name + "' expects " +
                              std::to_string(c.arity));
        if (u.attr.kind() != Attribute::Kind::None)
            e.attr = std::make_shared<const Attribute>(std::move(u.attr));
        e.kids.reserve(u.successors.size());
        for (const auto& s : u.successors) {
            try {
                e.kids.push_back(domain->index_of(s));
            } catch (const DomainError&) {
                throw DomainError("successor '" + s + "' of '" + id + "' escapes the domain");
            }
        }
        entries->push_back(std::move(e));
    }
    return transformer_from_entries(sigma, std::move(domain), std::move(entries));
}

Transformer make_term_transformer(const MonotoneAlgebra& sigma, std::vector<TermPtr> terms) {
    auto dom = Domain::of_terms(std::move(terms));
    return transformer_from_entries(sigma, dom, term_entries(sigma, dom));
}

namespace {

bool values_equal(const std::vector<OmegaValue>& a, const std::vector<OmegaValue>& b,
                  const std::optional<Rational>& eps) {
    if (!eps) return a == b;
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_rational() && b[i].is_rational()) {
            const Rational d = a[i].rat() <= b[i].rat() ? b[i].rat() - a[i].rat()
                                                        : a[i].rat() - b[i].rat();
            if (!(d <= *eps)) return false;
        } else if (a[i] != b[i]) {
            return false;
        }
    }
    return true;
}

FixpointResult iterate_from(const Transformer& t, const OmegaValue& start,
                            const FixpointOptions& opts) {
    PredicateMap cur = PredicateMap::constant(t.domain, start);
    PredicateMap next = cur;
    for (std::size_t k = 0; k < opts.max_iter; ++k) {
        t.step_into(cur, next);
        if (values_equal(cur.values(), next.values(), opts.epsilon))
            return FixpointResult{std::move(cur), k, true, t.monotone_checked};
        std::swap(cur, next);
    }
    return FixpointResult{std::move(cur), opts.max_iter, false, t.monotone_checked};
}

} // namespace

FixpointResult lfp(const Transformer& t, const FixpointOptions& opts) {
    return iterate_from(t, bot(t.lattice), opts);
}

FixpointResult gfp(const Transformer& t, const FixpointOptions& opts) {
    return iterate_from(t, top(t.lattice), opts);
}

namespace {

std::string render_args(const std::vector<OmegaValue>& vs) {
    std::string out = "(";
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) out += ", ";
        out += vs[i].str();
    }
    return out + ")";
}

std::vector<Attribute> monotone_attr_samples(const Constructor& c) {
    switch (c.schema) {
    case AttrSchema::None: return {Attribute::none()};
    case AttrSchema::ProbPair: {
        std::vector<Attribute> out;
        for (const char* s : {"0/1", "1/4", "1/3", "1/2", "2/3", "3/4", "1/1"})
            out.push_back(Attribute::prob(Rational::parse(s)));
        return out;
    }
    case AttrSchema::Label: {
        std::vector<Attribute> out;
        for (const auto& l : c.labels) out.push_back(Attribute::label(l));
        return out;
    }
    }
    return {Attribute::none()};
}

std::uint64_t pow_sat(std::uint64_t b, std::size_t e, std::uint64_t limit) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < e; ++i) {
        if (r > limit / (b ? b : 1)) return limit + 1;
        r *= b;
    }
    return r;
}

} // namespace

Verdict check_monotone(const MonotoneAlgebra& sigma, std::size_t sample_count, std::uint64_t seed) {
    Rng rng(seed);
    const Lattice& l = sigma.lattice;
    std::size_t checked = 0;

    for (const Constructor& c : sigma.sig.constructors()) {
        const std::vector<Attribute> attrs = monotone_attr_samples(c);

        // Ordered argument-vector pairs (lo <= hi pointwise).
        std::vector<std::pair<std::vector<OmegaValue>, std::vector<OmegaValue>>> arg_pairs;
        const std::uint64_t exhaustive_limit = 600000;
        bool exhaustive = false;
        if (l.kind == Lattice::Kind::Powerset) {
            const std::uint64_t per_pos = pow_sat(3, l.carrier.size(), exhaustive_limit);
            exhaustive = pow_sat(per_pos, c.arity, exhaustive_limit) <= exhaustive_limit;
        } else {
            exhaustive = c.arity == 0;
        }

        if (exhaustive && l.kind == Lattice::Kind::Powerset) {
            std::vector<std::pair<OmegaValue, OmegaValue>> pairs;
            const auto subsets = all_subsets(l.carrier);
            for (const auto& a : subsets)
                for (const auto& b : subsets)
                    if (set_subset(a.set(), b.set())) pairs.emplace_back(a, b);
            std::vector<std::size_t> idx(c.arity, 0);
            while (true) {
                std::vector<OmegaValue> lo, hi;
                for (std::size_t i : idx) {
                    lo.push_back(pairs[i].first);
                    hi.push_back(pairs[i].second);
                }
                arg_pairs.emplace_back(std::move(lo), std::move(hi));
                std::size_t pos = c.arity;
                while (pos > 0) {
                    if (++idx[pos - 1] < pairs.size()) break;
                    idx[pos - 1] = 0;
                    --pos;
                }
                if (pos == 0) break;
            }
        } else if (c.arity == 0) {
            arg_pairs.emplace_back(std::vector<OmegaValue>{}, std::vector<OmegaValue>{});
        } else {
            for (std::size_t s = 0; s < sample_count; ++s) {
                std::vector<OmegaValue> lo, hi;
                for (std::size_t pos = 0; pos < c.arity; ++pos) {
                    if (l.kind == Lattice::Kind::Powerset) {
                        StateSet big, small;
                        for (const auto& q : l.carrier) {
                            if (!rng.coin()) continue;
                            big.push_back(q);
                            if (rng.coin()) small.push_back(q);
                        }
                        lo.push_back(OmegaValue::states(small));
                        hi.push_back(OmegaValue::states(big));
                    } else {
                        Rational x(static_cast<long long>(rng.below(33)), 32);
                        Rational y(static_cast<long long>(rng.below(33)), 32);
                        if (y < x) std::swap(x, y);
                        lo.push_back(OmegaValue::rational(x));
                        hi.push_back(OmegaValue::rational(y));
                    }
                }
                arg_pairs.emplace_back(std::move(lo), std::move(hi));
            }
        }

        for (const Attribute& attr : attrs) {
            for (const auto& [lo, hi] : arg_pairs) {
                const OmegaValue out_lo = sigma.evaluate(c, attr, lo);
                const OmegaValue out_hi = sigma.evaluate(c, attr, hi);
                validate_value(l, out_lo);
                validate_value(l, out_hi);
                ++checked;
                if (!leq(l, out_lo, out_hi)) {
                    std::string attr_part = attr.kind() == Attribute::Kind::None
                                                ? std::string("")
                                                : "[" + attr.str() + "]";
                    return Verdict::fail(
                        c.name, "monotone",
                        "sigma(" + c.name + attr_part + ") maps ordered arguments " + render_args(lo) +
                            " <= " + render_args(hi) + " to " + out_lo.str() + " !<= " + out_hi.str());
                }
            }
        }
    }
    return Verdict::pass("monotonicity held on " + std::to_string(checked) + " ordered sample pairs");
}

CoincidenceReport coincidence_check(const MonotoneAlgebra& sigma, const Signature& sig,
                                    const CoincidenceOptions& opts) {
    EnumerateOptions eo;
    eo.max_height = opts.height_bound;
    eo.prob_samples = opts.prob_samples;
    eo.cap = opts.cap;
    std::vector<TermPtr> terms = enumerate_terms(sig, eo);

    CoincidenceReport rep;
    rep.lattice = sigma.lattice;
    rep.term_count = terms.size();

    // Terms arrive in height stages, so "height <= i" is a prefix.
    std::vector<std::size_t> prefix(opts.height_bound + 1, 0);
    {
        std::vector<std::size_t> cnt(opts.height_bound + 1, 0);
        for (const auto& t : terms) cnt.at(t->height()) += 1;
        for (std::size_t i = 1; i <= opts.height_bound; ++i) prefix[i] = prefix[i - 1] + cnt[i];
    }

    auto dom = Domain::of_terms(std::move(terms));
    rep.domain = dom;
    const Entries entries = term_entries(sigma, dom);
    Transformer t = transformer_from_entries(sigma, dom, entries);
    t.monotone_checked = true;

    const std::vector<OmegaValue> foldv = fold_values(sigma, entries);

    PredicateMap lo = PredicateMap::constant(dom, bot(sigma.lattice));
    PredicateMap hi = PredicateMap::constant(dom, top(sigma.lattice));
    PredicateMap lo_next = lo, hi_next = hi;
    bool lo_done = dom->size() == 0, hi_done = dom->size() == 0;

    auto stage_check = [&](std::size_t i) {
        StageAgreement sa;
        sa.stage = i;
        sa.terms_checked = prefix[std::min(i, opts.height_bound)];
        for (std::size_t idx = 0; idx < sa.terms_checked; ++idx) {
            if (lo.at_index(idx) != foldv[idx]) sa.lfp_eq_fold = false;
            if (hi.at_index(idx) != foldv[idx]) sa.gfp_eq_fold = false;
            if (lo.at_index(idx) != hi.at_index(idx)) sa.lfp_eq_gfp = false;
        }
        rep.stages.push_back(sa);
    };

    stage_check(0);
    std::size_t k = 0;
    while ((!lo_done || !hi_done) && k < opts.max_iter) {
        if (!lo_done) {
            t.step_into(lo, lo_next);
            if (lo.values() == lo_next.values()) {
                lo_done = true;
                rep.lfp_iterations = k;
            } else {
                std::swap(lo, lo_next);
            }
        }
        if (!hi_done) {
            t.step_into(hi, hi_next);
            if (hi.values() == hi_next.values()) {
                hi_done = true;
                rep.gfp_iterations = k;
            } else {
                std::swap(hi, hi_next);
            }
        }
        ++k;
        if (k <= opts.height_bound) stage_check(k);
    }
    rep.lfp_converged = lo_done;
    rep.gfp_converged = hi_done;
    while (rep.stages.size() <= opts.height_bound) stage_check(rep.stages.size());

    rep.coincided = lo_done && hi_done && lo.values() == foldv && hi.values() == foldv;
    bool stages_ok = true;
    for (const auto& s : rep.stages) stages_ok = stages_ok && s.passed();
    rep.passed = rep.lfp_converged && rep.gfp_converged && rep.coincided && stages_ok;
    rep.fixed_point = std::move(lo.values());
    return rep;
}

} // namespace cofix
