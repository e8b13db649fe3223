#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "cofix/automata.hpp"
#include "cofix/errors.hpp"
#include "cofix/fixpoint.hpp"
#include "cofix/json_io.hpp"
#include "cofix/lattice.hpp"
#include "cofix/liveness.hpp"
#include "cofix/rational.hpp"
#include "cofix/terms.hpp"

namespace py = pybind11;

using cofix::io::json;

namespace {

// The Python layer speaks JSON strings in the same documents the CLI reads
// and writes; the wrappers here parse, dispatch, and serialize back.

json parse(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw cofix::ValidationError(std::string(what) + ": " + e.what());
    }
}

cofix::TermPtr tree_arg(const std::string& text) {
    return cofix::io::term_from_json(parse(text, "tree"));
}

cofix::automata::BottomUpTA bta_arg(const std::string& text) {
    return cofix::io::bta_from_json(parse(text, "automaton"));
}

cofix::automata::GenerativeTA gta_arg(const std::string& text) {
    return cofix::io::gta_from_json(parse(text, "generator"));
}

std::string out(const json& j) { return cofix::io::dump(j); }

std::string reach_probability(const std::string& tree) {
    cofix::TermPtr t = tree_arg(tree);
    cofix::liveness::validate_prob_tree(*t);
    return cofix::liveness::reach_probability(*t).str();
}

std::string oracle_reach_probability(const std::string& tree) {
    cofix::TermPtr t = tree_arg(tree);
    cofix::liveness::validate_prob_tree(*t);
    return cofix::liveness::oracle_reach_probability(*t).str();
}

std::string check_submartingale(const std::string& tree, const std::string& witness) {
    cofix::TermPtr t = tree_arg(tree);
    cofix::liveness::validate_prob_tree(*t);
    const cofix::PredicateMap f = cofix::io::submartingale_from_json(*t, parse(witness, "witness"));
    return out(cofix::io::verdict_to_json(cofix::liveness::check_submartingale(*t, f)));
}

std::string synth_submartingale(const std::string& tree) {
    cofix::TermPtr t = tree_arg(tree);
    cofix::liveness::validate_prob_tree(*t);
    return out(cofix::io::submartingale_to_json(cofix::liveness::greatest_submartingale(*t)));
}

std::string reachable_states(const std::string& automaton, const std::string& tree) {
    const auto a = bta_arg(automaton);
    cofix::TermPtr t = tree_arg(tree);
    cofix::validate_term(a.sig, *t, /*require_ids=*/false);
    return out(json(cofix::automata::reachable_states(a, *t)));
}

bool accepts(const std::string& automaton, const std::string& tree) {
    const auto a = bta_arg(automaton);
    cofix::TermPtr t = tree_arg(tree);
    cofix::validate_term(a.sig, *t, /*require_ids=*/false);
    return cofix::automata::accepts(a, *t);
}

std::string check_acceptance_invariant(const std::string& automaton, const std::string& tree,
                                       const std::string& witness) {
    const auto a = bta_arg(automaton);
    cofix::TermPtr t = tree_arg(tree);
    cofix::validate_term(a.sig, *t);
    const cofix::PredicateMap f =
        cofix::io::acceptance_invariant_from_json(a, *t, parse(witness, "witness"));
    return out(cofix::io::verdict_to_json(cofix::automata::check_acceptance_invariant(a, *t, f)));
}

std::string synth_acceptance_invariant(const std::string& automaton, const std::string& tree) {
    const auto a = bta_arg(automaton);
    cofix::TermPtr t = tree_arg(tree);
    cofix::validate_term(a.sig, *t);
    const auto inv = cofix::automata::synth_acceptance_invariant(a, *t);
    if (!inv) return out(json(nullptr));
    return out(cofix::io::acceptance_invariant_to_json(*inv));
}

std::string check_model_invariant(const std::string& automaton, const std::string& generator,
                                  const std::string& witness) {
    const auto a = bta_arg(automaton);
    const auto g = gta_arg(generator);
    cofix::automata::merged_signature(a, g);
    const cofix::PredicateMap f = cofix::io::model_invariant_from_json(a, g, parse(witness, "witness"));
    return out(cofix::io::verdict_to_json(cofix::automata::check_model_invariant(a, g, f)));
}

std::string synth_model_invariant(const std::string& automaton, const std::string& generator) {
    const auto a = bta_arg(automaton);
    const auto g = gta_arg(generator);
    cofix::automata::merged_signature(a, g);
    const auto inv = cofix::automata::synth_model_invariant(a, g);
    if (!inv) return out(json(nullptr));
    return out(cofix::io::model_invariant_to_json(*inv));
}

std::string model_check_bounded(const std::string& automaton, const std::string& generator,
                                std::size_t max_height) {
    const auto a = bta_arg(automaton);
    const auto g = gta_arg(generator);
    cofix::automata::merged_signature(a, g);
    return out(cofix::io::bounded_result_to_json(cofix::automata::model_check_bounded(a, g, max_height),
                                                 max_height));
}

std::string generate_trees(const std::string& generator, std::size_t max_height, std::uint64_t cap) {
    const auto g = gta_arg(generator);
    json list = json::array();
    for (const auto& t : cofix::automata::generate_trees(g, max_height, cap))
        list.push_back(cofix::io::term_node_to_json(*cofix::with_fresh_node_ids(t)));
    return out(list);
}

std::string coincidence(const std::string& signature, const std::string& sigma_spec,
                        std::size_t height_bound, const std::vector<std::string>& prob_samples,
                        std::uint64_t cap) {
    const cofix::Signature sig = cofix::io::signature_from_json(parse(signature, "signature"));
    cofix::MonotoneAlgebra sigma;
    if (sigma_spec == "ptr") {
        sigma = cofix::liveness::sigma_ptr();
    } else {
        sigma = cofix::automata::sigma_bu(bta_arg(sigma_spec));
    }
    cofix::CoincidenceOptions opts;
    opts.height_bound = height_bound;
    opts.cap = cap;
    for (const auto& s : prob_samples) opts.prob_samples.push_back(cofix::Rational::parse(s));
    const cofix::CoincidenceReport rep = cofix::coincidence_check(sigma, sig, opts);
    return out(cofix::io::coincidence_report_to_json(rep, rep.term_count <= 10000));
}

std::string lattice_laws(const std::string& lattice) {
    const cofix::Lattice l = cofix::io::lattice_from_json(parse(lattice, "lattice"));
    std::vector<cofix::OmegaValue> samples;
    if (l.kind == cofix::Lattice::Kind::Powerset && l.carrier.size() <= 5) {
        samples = cofix::all_subsets(l.carrier);
    } else if (l.kind == cofix::Lattice::Kind::Powerset) {
        throw cofix::ValidationError("lattice_laws: carriers above 5 states need the CLI's sampled mode");
    } else {
        samples = cofix::rational_grid(9);
    }
    return out(cofix::io::law_report_to_json(cofix::check_lattice_laws(l, samples)));
}

} // namespace

PYBIND11_MODULE(_cofix, m) {
    m.doc() = "chain-based verification for inductive datatypes (JSON-string core API)";

    py::register_exception<cofix::Error>(m, "CofixError", PyExc_ValueError);

    m.def("reach_probability", &reach_probability, py::arg("tree"));
    m.def("oracle_reach_probability", &oracle_reach_probability, py::arg("tree"));
    m.def("check_submartingale", &check_submartingale, py::arg("tree"), py::arg("witness"));
    m.def("synth_submartingale", &synth_submartingale, py::arg("tree"));

    m.def("reachable_states", &reachable_states, py::arg("automaton"), py::arg("tree"));
    m.def("accepts", &accepts, py::arg("automaton"), py::arg("tree"));
    m.def("check_acceptance_invariant", &check_acceptance_invariant, py::arg("automaton"),
          py::arg("tree"), py::arg("witness"));
    m.def("synth_acceptance_invariant", &synth_acceptance_invariant, py::arg("automaton"),
          py::arg("tree"));

    m.def("check_model_invariant", &check_model_invariant, py::arg("automaton"), py::arg("generator"),
          py::arg("witness"));
    m.def("synth_model_invariant", &synth_model_invariant, py::arg("automaton"), py::arg("generator"));
    m.def("model_check_bounded", &model_check_bounded, py::arg("automaton"), py::arg("generator"),
          py::arg("max_height"));
    m.def("generate_trees", &generate_trees, py::arg("generator"), py::arg("max_height"),
          py::arg("cap") = 1000000);

    m.def("coincidence", &coincidence, py::arg("signature"), py::arg("sigma"),
          py::arg("height_bound") = 3, py::arg("prob_samples") = std::vector<std::string>{"1/2"},
          py::arg("cap") = 1000000);
    m.def("lattice_laws", &lattice_laws, py::arg("lattice"));

    m.attr("__version__") = "1.0.0";
    m.attr("FORMAT") = cofix::io::kFormat;
}
