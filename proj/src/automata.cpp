#include "cofix/automata.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace cofix::automata {

std::string DeltaKey::str() const {
    if (states.empty()) return ctor;
    std::string out = ctor + "(";
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (i) out += ",";
        out += states[i];
    }
    return out + ")";
}

const StateSet& BottomUpTA::delta_at(const std::string& ctor,
                                     const std::vector<std::string>& qs) const {
    static const StateSet empty;
    auto it = delta.find(DeltaKey{ctor, qs});
    return it == delta.end() ? empty : it->second;
}

void validate_bta(const BottomUpTA& a) {
    if (a.states.empty()) throw ValidationError("automaton with no states");
    if (a.states != canon_states(a.states))
        throw ValidationError("automaton state list is not in canonical (sorted, unique) form");
    if (!set_member(a.states, a.accept))
        throw ValidationError("accepting state '" + a.accept + "' is not an automaton state");
    for (const auto& [key, out] : a.delta) {
        const Constructor& c = a.sig.at(key.ctor);
        if (key.states.size() != c.arity)
            throw ValidationError("transition key '" + key.str() + "' has " +
                                  std::to_string(key.states.size()) + " argument states, constructor '" +
                                  c.name + "' has arity " + std::to_string(c.arity));
        for (const auto& q : key.states)
            if (!set_member(a.states, q))
                throw ValidationError("transition key '" + key.str() + "' uses unknown state '" + q + "'");
        if (out != canon_states(out))
            throw ValidationError("transition set for '" + key.str() + "' is not canonical");
        for (const auto& q : out)
            if (!set_member(a.states, q))
                throw ValidationError("transition for '" + key.str() + "' targets unknown state '" + q + "'");
    }
}

namespace {

/// Union of delta(ctor, q1..qk) over all combinations q_i from child_sets[i].
StateSet apply_delta(const BottomUpTA& a, const std::string& ctor,
                     const std::vector<StateSet>& child_sets) {
    for (const auto& s : child_sets)
        if (s.empty()) return {};
    StateSet acc;
    std::vector<std::size_t> idx(child_sets.size(), 0);
    while (true) {
        std::vector<std::string> combo;
        combo.reserve(child_sets.size());
        for (std::size_t i = 0; i < child_sets.size(); ++i) combo.push_back(child_sets[i][idx[i]]);
        acc = set_union(acc, a.delta_at(ctor, combo));
        std::size_t pos = child_sets.size();
        while (pos > 0) {
            if (++idx[pos - 1] < child_sets[pos - 1].size()) break;
            idx[pos - 1] = 0;
            --pos;
        }
        if (pos == 0) break;
    }
    return acc;
}

std::uint64_t pow_sat(std::uint64_t b, std::size_t e, std::uint64_t limit) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < e; ++i) {
        if (b != 0 && r > limit / b) return limit + 1;
        r *= b;
    }
    return r;
}

} // namespace

MonotoneAlgebra sigma_bu(const BottomUpTA& a) {
    validate_bta(a);
    auto ta = std::make_shared<const BottomUpTA>(a);
    MonotoneAlgebra m;
    m.sig = a.sig;
    m.lattice = Lattice::powerset(a.states);
    m.provenance = "builtin:sigma_bu";
    m.evaluate = [ta](const Constructor& c, const Attribute&,
                      const std::vector<OmegaValue>& kids) -> OmegaValue {
        std::vector<StateSet> child_sets;
        child_sets.reserve(kids.size());
        for (const auto& k : kids) child_sets.push_back(k.set());
        return OmegaValue::states(apply_delta(*ta, c.name, child_sets));
    };
    return m;
}

StateSet reachable_states(const BottomUpTA& a, const Term& t) {
    return fold(sigma_bu(a), t).set();
}

std::vector<std::map<std::string, std::string>> oracle_runs(const BottomUpTA& a, const Term& t,
                                                            std::uint64_t cap) {
    validate_bta(a);
    validate_term(a.sig, t, /*require_ids=*/true);
    const std::vector<const Term*> nodes = preorder(t);
    const std::size_t n = nodes.size();
    const std::uint64_t total = pow_sat(a.states.size(), n, cap);
    if (total > cap)
        throw CapExceeded("oracle would enumerate more than " + std::to_string(cap) + " labelings (" +
                          std::to_string(a.states.size()) + "^" + std::to_string(n) + ")");

    std::unordered_map<const Term*, std::size_t> pos;
    for (std::size_t i = 0; i < n; ++i) pos.emplace(nodes[i], i);

    std::vector<std::map<std::string, std::string>> runs;
    std::vector<std::size_t> label(n, 0);
    while (true) {
        bool valid = true;
        for (std::size_t i = 0; i < n && valid; ++i) {
            std::vector<std::string> child_states;
            child_states.reserve(nodes[i]->children().size());
            for (const auto& c : nodes[i]->children())
                child_states.push_back(a.states[label[pos.at(c.get())]]);
            valid = set_member(a.delta_at(nodes[i]->ctor(), child_states), a.states[label[i]]);
        }
        if (valid) {
            std::map<std::string, std::string> run;
            for (std::size_t i = 0; i < n; ++i) run.emplace(nodes[i]->node_id(), a.states[label[i]]);
            runs.push_back(std::move(run));
        }
        std::size_t p = n;
        while (p > 0) {
            if (++label[p - 1] < a.states.size()) break;
            label[p - 1] = 0;
            --p;
        }
        if (p == 0) break;
    }
    return runs;
}

bool accepts(const BottomUpTA& a, const Term& t) {
    return set_member(reachable_states(a, t), a.accept);
}

PredicateMap make_invariant(const BottomUpTA& a, const Term& t,
                            const std::map<std::string, StateSet>& values) {
    validate_bta(a);
    validate_term(a.sig, t, /*require_ids=*/true);
    std::vector<std::string> ids;
    for (const Term* n : preorder(t)) ids.push_back(n->node_id());
    auto dom = Domain::of_ids(std::move(ids));
    for (const auto& [id, qs] : values) {
        if (!dom->contains(id)) throw ValidationError("witness names unknown node '" + id + "'");
        for (const auto& q : qs)
            if (!set_member(a.states, q))
                throw ValidationError("witness at node '" + id + "' uses unknown state '" + q + "'");
    }
    std::vector<OmegaValue> vals(dom->size(), OmegaValue::states({}));
    for (std::size_t i = 0; i < dom->size(); ++i) {
        auto it = values.find(dom->id_at(i));
        if (it == values.end()) throw DomainError("witness misses node '" + dom->id_at(i) + "'");
        vals[i] = OmegaValue::states(it->second);
    }
    return PredicateMap(std::move(dom), std::move(vals));
}

Verdict check_acceptance_invariant(const BottomUpTA& a, const Term& t, const PredicateMap& f) {
    validate_bta(a);
    validate_term(a.sig, t, /*require_ids=*/true);
    for (const Term* n : preorder(t)) {
        const StateSet& fn = f.at(n->node_id()).set();
        if (n->children().empty()) {
            const StateSet& allowed = a.delta_at(n->ctor(), {});
            if (!set_subset(fn, allowed))
                return Verdict::fail(n->node_id(), "leaf_bound",
                                     "f = " + set_str(fn) + " is not a subset of delta(" + n->ctor() +
                                         ") = " + set_str(allowed));
        } else {
            std::vector<StateSet> child_sets;
            child_sets.reserve(n->children().size());
            for (const auto& c : n->children()) child_sets.push_back(f.at(c->node_id()).set());
            const StateSet allowed = apply_delta(a, n->ctor(), child_sets);
            if (!set_subset(fn, allowed))
                return Verdict::fail(n->node_id(), "child_bound",
                                     "f = " + set_str(fn) + " is not a subset of " + set_str(allowed) +
                                         " derived from the children");
        }
    }
    const StateSet& root = f.at(t.node_id()).set();
    if (!set_member(root, a.accept))
        return Verdict::fail(t.node_id(), "root_accepting",
                             "accepting state '" + a.accept + "' not in root set " + set_str(root));
    return Verdict::pass("acceptance invariant holds; root set " + set_str(root));
}

namespace {

StateSet synth_at(const BottomUpTA& a, const Term& n, std::map<std::string, StateSet>& out) {
    std::vector<StateSet> child_sets;
    child_sets.reserve(n.children().size());
    for (const auto& c : n.children()) child_sets.push_back(synth_at(a, *c, out));
    StateSet v = apply_delta(a, n.ctor(), child_sets);
    out[n.node_id()] = v;
    return v;
}

} // namespace

std::optional<PredicateMap> synth_acceptance_invariant(const BottomUpTA& a, const Term& t) {
    validate_bta(a);
    validate_term(a.sig, t, /*require_ids=*/true);
    std::map<std::string, StateSet> values;
    const StateSet root = synth_at(a, t, values);
    if (!set_member(root, a.accept)) return std::nullopt;
    return make_invariant(a, t, values);
}

std::string Production::str() const {
    if (args.empty()) return ctor;
    std::string out = ctor + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ",";
        out += args[i];
    }
    return out + ")";
}

const std::vector<Production>& GenerativeTA::productions(const std::string& x) const {
    static const std::vector<Production> empty;
    if (!set_member(states, x)) throw DomainError("unknown generator state '" + x + "'");
    auto it = c.find(x);
    return it == c.end() ? empty : it->second;
}

void validate_gta(const GenerativeTA& g) {
    if (g.states.empty()) throw ValidationError("generator with no states");
    if (g.states != canon_states(g.states))
        throw ValidationError("generator state list is not in canonical (sorted, unique) form");
    if (!set_member(g.states, g.init))
        throw ValidationError("initial state '" + g.init + "' is not a generator state");
    for (const auto& [x, prods] : g.c) {
        if (!set_member(g.states, x))
            throw ValidationError("production table names unknown state '" + x + "'");
        for (const auto& p : prods) {
            const Constructor& c = g.sig.at(p.ctor);
            if (p.args.size() != c.arity)
                throw ValidationError("production '" + p.str() + "' of state '" + x + "' has " +
                                      std::to_string(p.args.size()) + " arguments, constructor '" +
                                      c.name + "' has arity " + std::to_string(c.arity));
            for (const auto& arg : p.args)
                if (!set_member(g.states, arg))
                    throw ValidationError("production '" + p.str() + "' uses unknown state '" + arg + "'");
        }
    }
}

std::vector<TermPtr> generate_trees(const GenerativeTA& g, std::size_t max_height, std::uint64_t cap) {
    validate_gta(g);
    TermInterner intern;
    std::map<std::pair<std::string, std::size_t>, std::vector<TermPtr>> memo;
    std::uint64_t produced = 0;

    std::function<const std::vector<TermPtr>&(const std::string&, std::size_t)> trees =
        [&](const std::string& x, std::size_t h) -> const std::vector<TermPtr>& {
        const auto key = std::make_pair(x, h);
        auto found = memo.find(key);
        if (found != memo.end()) return found->second;

        std::vector<TermPtr> out;
        std::set<const Term*> seen;
        auto push = [&](const TermPtr& t) {
            if (!seen.insert(t.get()).second) return;
            if (++produced > cap)
                throw CapExceeded("tree generation exceeds the cap of " + std::to_string(cap));
            out.push_back(t);
        };

        if (h >= 1) {
            for (const Production& p : g.productions(x)) {
                const Constructor& ctor = g.sig.at(p.ctor);
                if (ctor.arity == 0) {
                    push(intern.leaf(p.ctor));
                    continue;
                }
                if (h < 2) continue;
                std::vector<const std::vector<TermPtr>*> lists;
                lists.reserve(ctor.arity);
                bool any_empty = false;
                for (const auto& arg : p.args) {
                    lists.push_back(&trees(arg, h - 1));
                    any_empty = any_empty || lists.back()->empty();
                }
                if (any_empty) continue;
                std::vector<std::size_t> idx(ctor.arity, 0);
                while (true) {
                    std::vector<TermPtr> kids;
                    kids.reserve(ctor.arity);
                    for (std::size_t i = 0; i < ctor.arity; ++i) kids.push_back((*lists[i])[idx[i]]);
                    push(intern.node(p.ctor, kids));
                    std::size_t pos = ctor.arity;
                    while (pos > 0) {
                        if (++idx[pos - 1] < lists[pos - 1]->size()) break;
                        idx[pos - 1] = 0;
                        --pos;
                    }
                    if (pos == 0) break;
                }
            }
        }
        return memo.emplace(key, std::move(out)).first->second;
    };

    return trees(g.init, max_height);
}

StateSet delta_f(const BottomUpTA& a, const PredicateMap& f, const Production& p) {
    std::vector<StateSet> child_sets;
    child_sets.reserve(p.args.size());
    for (const auto& arg : p.args) child_sets.push_back(f.at(arg).set());
    return apply_delta(a, p.ctor, child_sets);
}

Verdict check_model_invariant(const BottomUpTA& a, const GenerativeTA& g, const PredicateMap& f) {
    validate_bta(a);
    validate_gta(g);
    for (const auto& x : g.states) {
        const StateSet& fx = f.at(x).set();
        StateSet allowed = a.states; // empty intersection = all states
        for (const Production& p : g.productions(x)) allowed = set_intersect(allowed, delta_f(a, f, p));
        if (!set_subset(fx, allowed))
            return Verdict::fail(x, "state_closure",
                                 "f = " + set_str(fx) + " is not a subset of " + set_str(allowed) +
                                     " allowed by the productions of '" + x + "'");
    }
    const StateSet& init_set = f.at(g.init).set();
    if (!set_member(init_set, a.accept))
        return Verdict::fail(g.init, "initial_accepting",
                             "accepting state '" + a.accept + "' not in f(init) = " + set_str(init_set));
    return Verdict::pass("model invariant holds; f(init) = " + set_str(init_set));
}

std::optional<PredicateMap> synth_model_invariant(const BottomUpTA& a, const GenerativeTA& g) {
    validate_bta(a);
    validate_gta(g);
    auto ta = std::make_shared<const BottomUpTA>(a);
    auto gen = std::make_shared<const GenerativeTA>(g);
    auto dom = Domain::of_ids(std::vector<std::string>(g.states.begin(), g.states.end()));

    Transformer t;
    t.lattice = Lattice::powerset(a.states);
    t.domain = dom;
    t.monotone_checked = true;
    t.step_into = [ta, gen, dom](const PredicateMap& in, PredicateMap& out) {
        for (std::size_t i = 0; i < dom->size(); ++i) {
            StateSet allowed = ta->states;
            for (const Production& p : gen->productions(dom->id_at(i)))
                allowed = set_intersect(allowed, delta_f(*ta, in, p));
            out.set_index(i, OmegaValue::states(std::move(allowed)));
        }
    };

    FixpointResult r = gfp(t);
    if (!r.converged)
        throw Error("model-invariant chain did not converge within the iteration limit");
    if (!set_member(r.map.at(g.init).set(), a.accept)) return std::nullopt;
    return r.map;
}

BoundedResult model_check_bounded(const BottomUpTA& a, const GenerativeTA& g, std::size_t max_height) {
    BottomUpTA merged = a;
    merged.sig = merged_signature(a, g);
    BoundedResult res;
    for (const TermPtr& t : generate_trees(g, max_height)) {
        ++res.trees_checked;
        if (!accepts(merged, *t)) {
            res.holds = false;
            res.counterexample = with_fresh_node_ids(t);
            return res;
        }
    }
    return res;
}

Signature merged_signature(const BottomUpTA& a, const GenerativeTA& g) {
    std::vector<Constructor> ctors = a.sig.constructors();
    for (const auto& c : g.sig.constructors()) {
        const Constructor* have = a.sig.find(c.name);
        if (!have) {
            ctors.push_back(c);
        } else if (have->arity != c.arity) {
            throw ValidationError("constructor '" + c.name + "' has arity " +
                                  std::to_string(have->arity) + " in the automaton but " +
                                  std::to_string(c.arity) + " in the generator");
        }
    }
    return Signature(std::move(ctors));
}

} // namespace cofix::automata
