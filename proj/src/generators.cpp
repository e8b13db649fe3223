#include "cofix/generators.hpp"

#include <algorithm>
#include <functional>

#include "cofix/liveness.hpp"

namespace cofix::gen {

std::vector<Rational> default_weight_grid() {
    return {Rational(0), Rational(1, 4), Rational(1, 3), Rational(1, 2),
            Rational(2, 3), Rational(3, 4), Rational(1)};
}

namespace {

TermPtr random_prob_subtree(Rng& rng, const TreeOptions& opts, const std::vector<Rational>& grid,
                            std::size_t depth) {
    if (depth >= opts.max_height || rng.percent(opts.stop_percent))
        return Term::make(liveness::kLeaf);
    const char* ctor = rng.coin() ? liveness::kCheck : liveness::kQuery;
    const Rational p = rng.pick(grid);
    TermPtr left = random_prob_subtree(rng, opts, grid, depth + 1);
    TermPtr right = random_prob_subtree(rng, opts, grid, depth + 1);
    return Term::make(ctor, Attribute::prob(p), {std::move(left), std::move(right)});
}

} // namespace

TermPtr random_prob_tree(Rng& rng, const TreeOptions& opts) {
    if (opts.max_height == 0) throw ValidationError("random tree needs max_height >= 1");
    const std::vector<Rational> grid = opts.weight_grid.empty() ? default_weight_grid() : opts.weight_grid;
    return with_fresh_node_ids(random_prob_subtree(rng, opts, grid, 1));
}

namespace {

StateSet random_subset(Rng& rng, const StateSet& states, std::uint64_t entry_percent) {
    StateSet out;
    for (const auto& q : states)
        if (rng.percent(entry_percent)) out.push_back(q);
    return out;
}

StateSet numbered_states(Rng& rng, std::size_t max_states, const char* prefix) {
    const std::size_t n = 1 + rng.below(max_states);
    StateSet states;
    for (std::size_t i = 0; i < n; ++i) states.push_back(prefix + std::to_string(i));
    return canon_states(states);
}

Signature signature_of(const std::vector<std::pair<std::string, std::size_t>>& ctors) {
    std::vector<Constructor> cs;
    for (const auto& [name, arity] : ctors) cs.push_back(Constructor{name, arity, AttrSchema::None, {}});
    return Signature(std::move(cs));
}

void key_combos(const StateSet& states, std::size_t arity,
                const std::function<void(const std::vector<std::string>&)>& visit) {
    std::vector<std::size_t> idx(arity, 0);
    while (true) {
        std::vector<std::string> combo;
        combo.reserve(arity);
        for (std::size_t i : idx) combo.push_back(states[i]);
        visit(combo);
        std::size_t pos = arity;
        while (pos > 0) {
            if (++idx[pos - 1] < states.size()) break;
            idx[pos - 1] = 0;
            --pos;
        }
        if (pos == 0) break;
    }
}

} // namespace

automata::BottomUpTA random_bta(Rng& rng, const BtaOptions& opts) {
    automata::BottomUpTA a;
    a.states = numbered_states(rng, opts.max_states, "q");
    a.accept = a.states[rng.below(a.states.size())];
    a.sig = signature_of(opts.constructors);
    for (const auto& [name, arity] : opts.constructors) {
        const std::string& ctor = name;
        key_combos(a.states, arity, [&](const std::vector<std::string>& combo) {
            StateSet targets = random_subset(rng, a.states, opts.entry_percent);
            if (!targets.empty()) a.delta.emplace(automata::DeltaKey{ctor, combo}, std::move(targets));
        });
    }
    automata::validate_bta(a);
    return a;
}

automata::GenerativeTA random_gta(Rng& rng, const GtaOptions& opts) {
    automata::GenerativeTA g;
    g.states = numbered_states(rng, opts.max_states, "x");
    g.init = g.states[rng.below(g.states.size())];
    g.sig = signature_of(opts.constructors);
    for (const auto& x : g.states) {
        std::vector<automata::Production> prods;
        const std::size_t n = rng.below(opts.max_productions + 1);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& [name, arity] = opts.constructors[rng.below(opts.constructors.size())];
            automata::Production p;
            p.ctor = name;
            for (std::size_t k = 0; k < arity; ++k) p.args.push_back(g.states[rng.below(g.states.size())]);
            if (std::find_if(prods.begin(), prods.end(), [&](const automata::Production& q) {
                    return q.ctor == p.ctor && q.args == p.args;
                }) == prods.end())
                prods.push_back(std::move(p));
        }
        g.c.emplace(x, std::move(prods));
    }
    automata::validate_gta(g);
    return g;
}

PredicateMap perturb_submartingale(Rng& rng, const PredicateMap& f) {
    PredicateMap out = f;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Rational scale(static_cast<long long>(rng.below(33)), 32);
        out.set_index(i, OmegaValue::rational(scale * f.at_index(i).rat()));
    }
    return out;
}

namespace {

TermPtr random_signature_subtree(Rng& rng, const Signature& sig, std::size_t max_height,
                                 std::uint64_t stop_percent, std::size_t depth,
                                 const std::vector<const Constructor*>& nullary,
                                 const std::vector<const Constructor*>& inner) {
    if (depth >= max_height || inner.empty() || rng.percent(stop_percent))
        return Term::make(nullary[rng.below(nullary.size())]->name);
    const Constructor* c = inner[rng.below(inner.size())];
    std::vector<TermPtr> kids;
    kids.reserve(c->arity);
    for (std::size_t i = 0; i < c->arity; ++i)
        kids.push_back(random_signature_subtree(rng, sig, max_height, stop_percent, depth + 1, nullary, inner));
    return Term::make(c->name, std::move(kids));
}

} // namespace

TermPtr random_signature_tree(Rng& rng, const Signature& sig, std::size_t max_height,
                              std::uint64_t stop_percent) {
    std::vector<const Constructor*> nullary, inner;
    for (const auto& c : sig.constructors())
        (c.arity == 0 ? nullary : inner).push_back(&c);
    if (nullary.empty()) throw ValidationError("random tree needs a nullary constructor");
    return with_fresh_node_ids(
        random_signature_subtree(rng, sig, max_height, stop_percent, 1, nullary, inner));
}

} // namespace cofix::gen
