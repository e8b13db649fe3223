#include "cofix/lattice.hpp"

#include <algorithm>

namespace cofix {

StateSet canon_states(StateSet s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

bool set_member(const StateSet& s, const std::string& q) {
    return std::binary_search(s.begin(), s.end(), q);
}

StateSet set_union(const StateSet& a, const StateSet& b) {
    StateSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

StateSet set_intersect(const StateSet& a, const StateSet& b) {
    StateSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool set_subset(const StateSet& a, const StateSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::string set_str(const StateSet& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += s[i];
    }
    return out + "}";
}

const Rational& OmegaValue::rat() const {
    if (!is_rational()) throw TypeError("expected a unit-interval value, got a state set");
    return std::get<Rational>(v_);
}

const StateSet& OmegaValue::set() const {
    if (!is_states()) throw TypeError("expected a state-set value, got a rational");
    return std::get<StateSet>(v_);
}

std::string OmegaValue::str() const {
    return is_rational() ? rat().str() : set_str(set());
}

Lattice Lattice::powerset(StateSet carrier) {
    carrier = canon_states(std::move(carrier));
    if (carrier.empty()) throw ValidationError("powerset lattice requires a non-empty carrier");
    return Lattice{Kind::Powerset, std::move(carrier)};
}

void validate_value(const Lattice& l, const OmegaValue& v) {
    if (l.kind == Lattice::Kind::UnitInterval) {
        if (!v.is_rational()) throw TypeError("unit-interval lattice cannot hold a state set");
        if (!v.rat().in_unit_range())
            throw ValidationError("value " + v.rat().str() + " outside [0,1]");
    } else {
        if (!v.is_states()) throw TypeError("powerset lattice cannot hold a rational");
        for (const auto& q : v.set())
            if (!set_member(l.carrier, q))
                throw ValidationError("state '" + q + "' outside the lattice carrier " + set_str(l.carrier));
    }
}

bool leq(const Lattice& l, const OmegaValue& a, const OmegaValue& b) {
    if (l.kind == Lattice::Kind::UnitInterval) return a.rat() <= b.rat();
    return set_subset(a.set(), b.set());
}

OmegaValue join(const Lattice& l, const OmegaValue& a, const OmegaValue& b) {
    if (l.kind == Lattice::Kind::UnitInterval)
        return OmegaValue::rational(a.rat() <= b.rat() ? b.rat() : a.rat());
    return OmegaValue::states(set_union(a.set(), b.set()));
}

OmegaValue meet(const Lattice& l, const OmegaValue& a, const OmegaValue& b) {
    if (l.kind == Lattice::Kind::UnitInterval)
        return OmegaValue::rational(a.rat() <= b.rat() ? a.rat() : b.rat());
    return OmegaValue::states(set_intersect(a.set(), b.set()));
}

OmegaValue join(const Lattice& l, const std::vector<OmegaValue>& vs) {
    OmegaValue acc = bot(l);
    for (const auto& v : vs) acc = join(l, acc, v);
    return acc;
}

OmegaValue meet(const Lattice& l, const std::vector<OmegaValue>& vs) {
    OmegaValue acc = top(l);
    for (const auto& v : vs) acc = meet(l, acc, v);
    return acc;
}

OmegaValue bot(const Lattice& l) {
    if (l.kind == Lattice::Kind::UnitInterval) return OmegaValue::rational(Rational(0));
    return OmegaValue::states({});
}

OmegaValue top(const Lattice& l) {
    if (l.kind == Lattice::Kind::UnitInterval) return OmegaValue::rational(Rational(1));
    return OmegaValue::states(l.carrier);
}

LatticeOps LatticeOps::of(const Lattice& l) {
    return LatticeOps{
        [l](const OmegaValue& a, const OmegaValue& b) { return cofix::leq(l, a, b); },
        [l](const OmegaValue& a, const OmegaValue& b) { return cofix::join(l, a, b); },
        [l](const OmegaValue& a, const OmegaValue& b) { return cofix::meet(l, a, b); },
        cofix::bot(l),
        cofix::top(l),
    };
}

bool LawReport::all_passed() const {
    for (const auto& r : laws)
        if (!r.passed) return false;
    return true;
}

const LawResult* LawReport::first_failure() const {
    for (const auto& r : laws)
        if (!r.passed) return &r;
    return nullptr;
}

namespace {

std::string render(const std::vector<OmegaValue>& vs) {
    std::string out = "(";
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) out += ", ";
        out += vs[i].str();
    }
    return out + ")";
}

using Check1 = std::function<bool(const OmegaValue&)>;
using Check2 = std::function<bool(const OmegaValue&, const OmegaValue&)>;
using Check3 = std::function<bool(const OmegaValue&, const OmegaValue&, const OmegaValue&)>;

LawResult over1(const std::string& law, const std::vector<OmegaValue>& s, const Check1& ok) {
    for (const auto& a : s)
        if (!ok(a)) return LawResult{law, false, {a}, law + " fails at " + render({a})};
    return LawResult{law, true, {}, ""};
}

LawResult over2(const std::string& law, const std::vector<OmegaValue>& s, const Check2& ok) {
    for (const auto& a : s)
        for (const auto& b : s)
            if (!ok(a, b)) return LawResult{law, false, {a, b}, law + " fails at " + render({a, b})};
    return LawResult{law, true, {}, ""};
}

LawResult over3(const std::string& law, const std::vector<OmegaValue>& s, const Check3& ok) {
    for (const auto& a : s)
        for (const auto& b : s)
            for (const auto& c : s)
                if (!ok(a, b, c))
                    return LawResult{law, false, {a, b, c}, law + " fails at " + render({a, b, c})};
    return LawResult{law, true, {}, ""};
}

} // namespace

LawReport check_lattice_laws(const LatticeOps& ops, const std::vector<OmegaValue>& samples) {
    LawReport rep;
    rep.samples = samples.size();
    const auto& s = samples;

    rep.laws.push_back(over3("join-assoc", s, [&](const auto& a, const auto& b, const auto& c) {
        return ops.join(ops.join(a, b), c) == ops.join(a, ops.join(b, c));
    }));
    rep.laws.push_back(over3("meet-assoc", s, [&](const auto& a, const auto& b, const auto& c) {
        return ops.meet(ops.meet(a, b), c) == ops.meet(a, ops.meet(b, c));
    }));
    rep.laws.push_back(over2("join-comm", s, [&](const auto& a, const auto& b) {
        return ops.join(a, b) == ops.join(b, a);
    }));
    rep.laws.push_back(over2("meet-comm", s, [&](const auto& a, const auto& b) {
        return ops.meet(a, b) == ops.meet(b, a);
    }));
    rep.laws.push_back(over1("join-idem", s, [&](const auto& a) { return ops.join(a, a) == a; }));
    rep.laws.push_back(over1("meet-idem", s, [&](const auto& a) { return ops.meet(a, a) == a; }));
    rep.laws.push_back(over2("absorption-join", s, [&](const auto& a, const auto& b) {
        return ops.join(a, ops.meet(a, b)) == a;
    }));
    rep.laws.push_back(over2("absorption-meet", s, [&](const auto& a, const auto& b) {
        return ops.meet(a, ops.join(a, b)) == a;
    }));
    rep.laws.push_back(over1("bot-neutral", s, [&](const auto& a) { return ops.join(a, ops.bot) == a; }));
    rep.laws.push_back(over1("top-neutral", s, [&](const auto& a) { return ops.meet(a, ops.top) == a; }));
    rep.laws.push_back(over2("order-join", s, [&](const auto& a, const auto& b) {
        return ops.leq(a, b) == (ops.join(a, b) == b);
    }));
    rep.laws.push_back(over2("order-meet", s, [&](const auto& a, const auto& b) {
        return ops.leq(a, b) == (ops.meet(a, b) == a);
    }));
    return rep;
}

LawReport check_lattice_laws(const Lattice& l, const std::vector<OmegaValue>& samples) {
    for (const auto& v : samples) validate_value(l, v);
    return check_lattice_laws(LatticeOps::of(l), samples);
}

std::vector<OmegaValue> all_subsets(const StateSet& carrier) {
    const StateSet c = canon_states(carrier);
    if (c.size() > 20) throw CapExceeded("carrier too large to enumerate all subsets: " + std::to_string(c.size()));
    std::vector<OmegaValue> out;
    out.reserve(std::size_t(1) << c.size());
    for (std::size_t mask = 0; mask < (std::size_t(1) << c.size()); ++mask) {
        StateSet sub;
        for (std::size_t i = 0; i < c.size(); ++i)
            if (mask & (std::size_t(1) << i)) sub.push_back(c[i]);
        out.push_back(OmegaValue::states(std::move(sub)));
    }
    return out;
}

std::vector<OmegaValue> rational_grid(std::size_t points) {
    if (points < 2) throw ValidationError("rational grid needs at least 2 points");
    std::vector<OmegaValue> out;
    out.reserve(points);
    for (std::size_t k = 0; k < points; ++k)
        out.push_back(OmegaValue::rational(Rational(static_cast<long long>(k), static_cast<long long>(points - 1))));
    return out;
}

} // namespace cofix
