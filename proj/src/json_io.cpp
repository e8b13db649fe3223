#include "cofix/json_io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

#include "cofix/liveness.hpp"

namespace cofix::io {

namespace {

void check_format(const json& j, const std::string& what) {
    if (!j.is_object()) throw ValidationError(what + ": expected a JSON object");
    if (j.contains("format")) {
        const json& f = j.at("format");
        if (!f.is_string() || f.get<std::string>() != kFormat)
            throw ValidationError(what + ": unsupported format " + f.dump() + ", expected \"" +
                                  kFormat + "\"");
    }
}

const json& field(const json& j, const char* key, const std::string& ctx) {
    if (!j.is_object() || !j.contains(key))
        throw ValidationError(ctx + ": missing field \"" + key + "\"");
    return j.at(key);
}

std::string str_field(const json& j, const char* key, const std::string& ctx) {
    const json& f = field(j, key, ctx);
    if (!f.is_string()) throw ValidationError(ctx + ": field \"" + key + "\" must be a string");
    return f.get<std::string>();
}

std::vector<std::string> str_array(const json& j, const std::string& ctx) {
    if (!j.is_array()) throw ValidationError(ctx + ": expected an array of strings");
    std::vector<std::string> out;
    for (const auto& e : j) {
        if (!e.is_string()) throw ValidationError(ctx + ": expected an array of strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    std::size_t e = s.find_last_not_of(" \t");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

/// Splits "g(q0,q1)" into its constructor and argument names; "a" has none.
std::pair<std::string, std::vector<std::string>> parse_applied(const std::string& key,
                                                               const std::string& ctx) {
    const auto open = key.find('(');
    if (open == std::string::npos) {
        const std::string name = trim(key);
        if (name.empty()) throw ValidationError(ctx + ": empty constructor name in '" + key + "'");
        return {name, {}};
    }
    if (key.back() != ')')
        throw ValidationError(ctx + ": malformed key '" + key + "' (missing closing parenthesis)");
    const std::string name = trim(key.substr(0, open));
    if (name.empty()) throw ValidationError(ctx + ": empty constructor name in '" + key + "'");
    std::vector<std::string> args;
    std::string body = key.substr(open + 1, key.size() - open - 2);
    if (trim(body).empty())
        throw ValidationError(ctx + ": key '" + key + "' has empty argument list; write '" + name +
                              "' for a nullary constructor");
    std::size_t start = 0;
    while (true) {
        const auto comma = body.find(',', start);
        const std::string arg = trim(body.substr(start, comma - start));
        if (arg.empty() || arg.find('(') != std::string::npos || arg.find(')') != std::string::npos)
            throw ValidationError(ctx + ": malformed argument in key '" + key + "'");
        args.push_back(arg);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return {name, args};
}

std::string canonical_ctor(const std::string& name) {
    if (name == "?") return "query";
    if (name == "✓") return "check";
    return name;
}

} // namespace

json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError(path + ": cannot open file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

std::string dump(const json& j) {
    return j.dump(2) + "\n";
}

Rational rational_from_json(const json& j, const std::string& ctx) {
    if (!j.is_string())
        throw ValidationError(ctx + ": rationals are written as \"num/den\" strings, got " + j.dump());
    try {
        return Rational::parse(j.get<std::string>());
    } catch (const ValidationError& e) {
        throw ValidationError(ctx + ": " + e.what());
    }
}

Lattice lattice_from_json(const json& doc) {
    check_format(doc, "lattice document");
    const json& l = field(doc, "lattice", "lattice document");
    const std::string kind = str_field(l, "kind", "lattice");
    if (kind == "unit_interval") return Lattice::unit_interval();
    if (kind == "powerset")
        return Lattice::powerset(str_array(field(l, "states", "lattice"), "lattice.states"));
    throw ValidationError("lattice: unknown kind '" + kind +
                          "' (expected \"unit_interval\" or \"powerset\")");
}

json lattice_to_json(const Lattice& l) {
    json inner;
    if (l.kind == Lattice::Kind::UnitInterval) {
        inner = {{"kind", "unit_interval"}};
    } else {
        inner = {{"kind", "powerset"}, {"states", l.carrier}};
    }
    return json{{"format", kFormat}, {"lattice", inner}};
}

Signature signature_from_json(const json& doc, std::vector<std::string>* warnings) {
    check_format(doc, "signature document");
    const json& s = field(doc, "signature", "signature document");
    const json& cs = field(s, "constructors", "signature");
    if (!cs.is_array()) throw ValidationError("signature.constructors must be an array");
    std::vector<Constructor> ctors;
    for (const auto& cj : cs) {
        Constructor c;
        c.name = str_field(cj, "name", "signature constructor");
        const json& a = field(cj, "arity", "constructor '" + c.name + "'");
        if (!a.is_number_unsigned())
            throw ValidationError("constructor '" + c.name + "': arity must be a non-negative integer");
        c.arity = a.get<std::size_t>();
        if (cj.contains("attrs")) {
            const json& attrs = cj.at("attrs");
            if (attrs.is_string() && attrs.get<std::string>() == "none") {
                c.schema = AttrSchema::None;
            } else if (attrs.is_string() && attrs.get<std::string>() == "prob_pair") {
                c.schema = AttrSchema::ProbPair;
            } else if (attrs.is_object() && attrs.contains("labels")) {
                c.schema = AttrSchema::Label;
                c.labels = str_array(attrs.at("labels"), "constructor '" + c.name + "' labels");
            } else {
                throw ValidationError("constructor '" + c.name +
                                      "': attrs must be \"none\", \"prob_pair\" or {\"labels\":[...]}");
            }
        }
        ctors.push_back(std::move(c));
    }
    Signature sig(std::move(ctors));
    if (warnings && !sig.has_nullary())
        warnings->push_back("signature has no nullary constructor; it generates no finite terms");
    return sig;
}

json signature_to_json(const Signature& sig) {
    json cs = json::array();
    for (const auto& c : sig.constructors()) {
        json cj{{"name", c.name}, {"arity", c.arity}};
        if (c.schema == AttrSchema::ProbPair) cj["attrs"] = "prob_pair";
        if (c.schema == AttrSchema::Label) cj["attrs"] = json{{"labels", c.labels}};
        cs.push_back(std::move(cj));
    }
    return json{{"format", kFormat}, {"signature", {{"constructors", cs}}}};
}

namespace {

TermPtr term_node_from_json(const json& j, const std::string& ctx) {
    if (!j.is_object()) throw ValidationError(ctx + ": term nodes are JSON objects");
    const std::string ctor = canonical_ctor(str_field(j, "ctor", ctx));
    const std::string id = j.contains("node") ? str_field(j, "node", ctx) : "";

    Attribute attr = Attribute::none();
    if (j.contains("attrs") && !j.at("attrs").is_null()) {
        const json& a = j.at("attrs");
        if (!a.is_object()) throw ValidationError(ctx + ": attrs must be an object");
        if (a.contains("p")) {
            const Rational p = rational_from_json(a.at("p"), ctx + ".attrs.p");
            if (a.contains("q")) {
                attr = Attribute::prob_pair(p, rational_from_json(a.at("q"), ctx + ".attrs.q"));
            } else {
                if (!p.in_unit_range())
                    throw ValidationError(ctx + ": edge weight " + p.str() + " outside [0,1]");
                attr = Attribute::prob(p);
            }
            for (const auto& [k, v] : a.items())
                if (k != "p" && k != "q")
                    throw ValidationError(ctx + ": unknown attribute field \"" + k + "\"");
        } else if (a.contains("label")) {
            attr = Attribute::label(str_field(a, "label", ctx + ".attrs"));
            for (const auto& [k, v] : a.items())
                if (k != "label") throw ValidationError(ctx + ": unknown attribute field \"" + k + "\"");
        } else if (!a.empty()) {
            throw ValidationError(ctx + ": attrs must carry \"p\" (and optional \"q\") or \"label\"");
        }
    }

    std::vector<TermPtr> kids;
    if (j.contains("children")) {
        const json& cs = j.at("children");
        if (!cs.is_array()) throw ValidationError(ctx + ": children must be an array");
        for (std::size_t i = 0; i < cs.size(); ++i)
            kids.push_back(term_node_from_json(cs[i], ctx + ".children[" + std::to_string(i) + "]"));
    }
    return Term::make(ctor, std::move(attr), std::move(kids), id);
}

} // namespace

TermPtr term_from_json(const json& doc) {
    check_format(doc, "term document");
    return term_node_from_json(doc, "term");
}

json term_node_to_json(const Term& t) {
    json j;
    if (!t.node_id().empty()) j["node"] = t.node_id();
    j["ctor"] = t.ctor();
    if (t.attr().kind() == Attribute::Kind::Prob) {
        j["attrs"] = json{{"p", t.attr().p().str()}};
    } else if (t.attr().kind() == Attribute::Kind::Label) {
        j["attrs"] = json{{"label", t.attr().label_value()}};
    }
    if (!t.children().empty()) {
        json cs = json::array();
        for (const auto& c : t.children()) cs.push_back(term_node_to_json(*c));
        j["children"] = std::move(cs);
    }
    return j;
}

json term_to_json(const Term& t) {
    json j = term_node_to_json(t);
    j["format"] = kFormat;
    return j;
}

namespace {

Signature infer_signature(const std::map<std::string, std::size_t>& arities) {
    std::vector<Constructor> ctors;
    for (const auto& [name, arity] : arities)
        ctors.push_back(Constructor{name, arity, AttrSchema::None, {}});
    return Signature(std::move(ctors));
}

void note_arity(std::map<std::string, std::size_t>& arities, const std::string& name,
                std::size_t arity, const std::string& ctx) {
    auto [it, fresh] = arities.emplace(name, arity);
    if (!fresh && it->second != arity)
        throw ValidationError(ctx + ": constructor '" + name + "' used at arity " +
                              std::to_string(arity) + " and " + std::to_string(it->second));
}

std::string accept_from_json(const json& doc) {
    const json& a = field(doc, "accept", "automaton");
    if (a.is_string()) return a.get<std::string>();
    if (a.is_array() && a.size() == 1 && a[0].is_string()) return a[0].get<std::string>();
    if (a.is_array())
        throw ValidationError(
            "automaton: exactly one accepting state is supported; encode multiple accepting "
            "states by adding a fresh state that every accepting combination transitions into");
    throw ValidationError("automaton: \"accept\" must be a state name");
}

} // namespace

automata::BottomUpTA bta_from_json(const json& doc) {
    check_format(doc, "automaton document");
    automata::BottomUpTA a;
    a.states = canon_states(str_array(field(doc, "states", "automaton"), "automaton.states"));
    a.accept = accept_from_json(doc);

    std::map<std::string, std::size_t> arities;
    if (doc.contains("constructors")) {
        const json& cs = doc.at("constructors");
        if (!cs.is_object()) throw ValidationError("automaton.constructors must be an object");
        for (const auto& [name, arity] : cs.items()) {
            if (!arity.is_number_unsigned())
                throw ValidationError("automaton.constructors['" + name +
                                      "']: arity must be a non-negative integer");
            note_arity(arities, name, arity.get<std::size_t>(), "automaton.constructors");
        }
    }

    const json& d = field(doc, "delta", "automaton");
    if (!d.is_object()) throw ValidationError("automaton.delta must be an object");
    for (const auto& [key, out] : d.items()) {
        auto [ctor, args] = parse_applied(key, "automaton.delta");
        note_arity(arities, ctor, args.size(), "automaton.delta");
        StateSet targets = canon_states(str_array(out, "automaton.delta['" + key + "']"));
        automata::DeltaKey dk{std::move(ctor), std::move(args)};
        if (!a.delta.emplace(std::move(dk), std::move(targets)).second)
            throw ValidationError("automaton.delta: duplicate key '" + key + "'");
    }
    a.sig = infer_signature(arities);
    automata::validate_bta(a);
    return a;
}

json bta_to_json(const automata::BottomUpTA& a) {
    json d = json::object();
    for (const auto& [key, out] : a.delta) d[key.str()] = out;
    json cs = json::object();
    for (const auto& c : a.sig.constructors()) cs[c.name] = c.arity;
    return json{{"format", kFormat}, {"states", a.states},  {"accept", a.accept},
                {"delta", d},        {"constructors", cs}};
}

automata::GenerativeTA gta_from_json(const json& doc) {
    check_format(doc, "generator document");
    automata::GenerativeTA g;
    g.states = canon_states(str_array(field(doc, "states", "generator"), "generator.states"));
    g.init = str_field(doc, "init", "generator");

    std::map<std::string, std::size_t> arities;
    const json& c = field(doc, "c", "generator");
    if (!c.is_object()) throw ValidationError("generator.c must be an object");
    for (const auto& [x, prods] : c.items()) {
        if (!prods.is_array())
            throw ValidationError("generator.c['" + x + "'] must be an array of productions");
        std::vector<automata::Production> list;
        for (const auto& pj : prods) {
            if (!pj.is_string())
                throw ValidationError("generator.c['" + x + "']: productions are strings");
            auto [ctor, args] = parse_applied(pj.get<std::string>(), "generator.c['" + x + "']");
            note_arity(arities, ctor, args.size(), "generator.c");
            list.push_back(automata::Production{std::move(ctor), std::move(args)});
        }
        g.c.emplace(x, std::move(list));
    }
    for (const auto& x : g.states) g.c.try_emplace(x); // missing states are deadlocked
    g.sig = infer_signature(arities);
    automata::validate_gta(g);
    return g;
}

json gta_to_json(const automata::GenerativeTA& g) {
    json c = json::object();
    for (const auto& [x, prods] : g.c) {
        json list = json::array();
        for (const auto& p : prods) list.push_back(p.str());
        c[x] = std::move(list);
    }
    return json{{"format", kFormat}, {"states", g.states}, {"init", g.init}, {"c", c}};
}

namespace {

const json& witness_values(const json& doc, const char* kind) {
    check_format(doc, "witness document");
    if (doc.contains("kind")) {
        const json& k = doc.at("kind");
        if (!k.is_string() || k.get<std::string>() != kind)
            throw ValidationError(std::string("witness document has kind ") + k.dump() +
                                  ", expected \"" + kind + "\"");
    }
    const json& v = field(doc, "values", "witness document");
    if (!v.is_object()) throw ValidationError("witness values must be an object");
    return v;
}

} // namespace

PredicateMap submartingale_from_json(const Term& tree, const json& doc) {
    const json& v = witness_values(doc, "submartingale");
    std::map<std::string, Rational> values;
    for (const auto& [id, rv] : v.items())
        values.emplace(id, rational_from_json(rv, "witness values['" + id + "']"));
    return liveness::make_submartingale(tree, values);
}

json submartingale_to_json(const PredicateMap& f) {
    json v = json::object();
    for (std::size_t i = 0; i < f.size(); ++i)
        v[f.domain()->id_at(i)] = f.at_index(i).rat().str();
    return json{{"format", kFormat}, {"kind", "submartingale"}, {"values", v}};
}

namespace {

std::map<std::string, StateSet> state_map_from_json(const json& v) {
    std::map<std::string, StateSet> values;
    for (const auto& [id, sv] : v.items())
        values.emplace(id, canon_states(str_array(sv, "witness values['" + id + "']")));
    return values;
}

json state_map_to_json(const PredicateMap& f, const char* kind) {
    json v = json::object();
    for (std::size_t i = 0; i < f.size(); ++i)
        v[f.domain()->id_at(i)] = f.at_index(i).set();
    return json{{"format", kFormat}, {"kind", kind}, {"values", v}};
}

} // namespace

PredicateMap acceptance_invariant_from_json(const automata::BottomUpTA& a, const Term& tree,
                                            const json& doc) {
    return automata::make_invariant(a, tree, state_map_from_json(witness_values(doc, "acceptance_invariant")));
}

json acceptance_invariant_to_json(const PredicateMap& f) {
    return state_map_to_json(f, "acceptance_invariant");
}

PredicateMap model_invariant_from_json(const automata::BottomUpTA& a,
                                       const automata::GenerativeTA& g, const json& doc) {
    const auto values = state_map_from_json(witness_values(doc, "model_invariant"));
    auto dom = Domain::of_ids(std::vector<std::string>(g.states.begin(), g.states.end()));
    for (const auto& [id, qs] : values) {
        if (!dom->contains(id)) throw ValidationError("witness names unknown generator state '" + id + "'");
        for (const auto& q : qs)
            if (!set_member(a.states, q))
                throw ValidationError("witness at state '" + id + "' uses unknown state '" + q + "'");
    }
    std::vector<OmegaValue> vals(dom->size(), OmegaValue::states({}));
    for (std::size_t i = 0; i < dom->size(); ++i) {
        auto it = values.find(dom->id_at(i));
        if (it == values.end())
            throw DomainError("witness misses generator state '" + dom->id_at(i) + "'");
        vals[i] = OmegaValue::states(it->second);
    }
    return PredicateMap(std::move(dom), std::move(vals));
}

json model_invariant_to_json(const PredicateMap& f) {
    return state_map_to_json(f, "model_invariant");
}

json verdict_to_json(const Verdict& v) {
    return json{{"format", kFormat},
                {"verdict",
                 {{"status", v.status_str()},
                  {"location", v.location},
                  {"condition", v.condition},
                  {"detail", v.detail},
                  {"confidence", v.confidence}}}};
}

json law_report_to_json(const LawReport& r) {
    json laws = json::array();
    for (const auto& l : r.laws) {
        json w = json::array();
        for (const auto& v : l.witness) {
            if (v.is_rational()) {
                w.push_back(v.rat().str());
            } else {
                w.push_back(v.set());
            }
        }
        laws.push_back(json{{"law", l.law}, {"passed", l.passed}, {"witness", w}, {"detail", l.detail}});
    }
    return json{{"format", kFormat},
                {"report", "lattice_laws"},
                {"samples", r.samples},
                {"all_passed", r.all_passed()},
                {"laws", laws}};
}

json coincidence_report_to_json(const CoincidenceReport& r, bool include_table) {
    json stages = json::array();
    for (const auto& s : r.stages)
        stages.push_back(json{{"stage", s.stage},
                              {"terms_checked", s.terms_checked},
                              {"lfp_eq_fold", s.lfp_eq_fold},
                              {"gfp_eq_fold", s.gfp_eq_fold},
                              {"lfp_eq_gfp", s.lfp_eq_gfp}});
    json out{{"format", kFormat},
             {"report", "coincidence"},
             {"passed", r.passed},
             {"term_count", r.term_count},
             {"lfp_iterations", r.lfp_iterations},
             {"gfp_iterations", r.gfp_iterations},
             {"lfp_converged", r.lfp_converged},
             {"gfp_converged", r.gfp_converged},
             {"coincided", r.coincided},
             {"stages", stages}};
    if (include_table && r.domain) {
        json table = json::object();
        for (std::size_t i = 0; i < r.domain->size(); ++i) {
            const OmegaValue& v = r.fixed_point[i];
            if (v.is_rational()) {
                table[shape(*r.domain->term_at(i))] = v.rat().str();
            } else {
                table[shape(*r.domain->term_at(i))] = v.set();
            }
        }
        out["fixed_point"] = std::move(table);
    } else {
        out["fixed_point_omitted"] = true;
    }
    return out;
}

json bounded_result_to_json(const automata::BoundedResult& r, std::size_t height) {
    json out{{"format", kFormat},
             {"report", "bounded_model_check"},
             {"holds", r.holds},
             {"height", height},
             {"trees_checked", r.trees_checked}};
    if (r.counterexample) {
        out["counterexample"] = term_node_to_json(*r.counterexample);
    } else {
        out["counterexample"] = nullptr;
    }
    return out;
}

} // namespace cofix::io
