#pragma once

#include <nlohmann/json_fwd.hpp>

#include <string>
#include <vector>

#include "cofix/automata.hpp"
#include "cofix/fixpoint.hpp"
#include "cofix/lattice.hpp"
#include "cofix/terms.hpp"
#include "cofix/verdict.hpp"

namespace cofix::io {

/// Every document this toolkit writes carries this format tag; loaders accept
/// documents without the tag but reject a tag with any other value.
inline constexpr const char* kFormat = "cofix/1";

using json = nlohmann::json;

/// Reads and parses a JSON file. Parse failures raise ValidationError naming
/// the file and the byte position.
json load_json_file(const std::string& path);

/// Canonical rendering: two-space indent, sorted keys, trailing newline.
/// Identical data always yields identical bytes.
std::string dump(const json& j);

Rational rational_from_json(const json& j, const std::string& ctx);

Lattice lattice_from_json(const json& doc);
json lattice_to_json(const Lattice& l);

/// Signature documents. A signature without any nullary constructor loads
/// fine but appends a warning (it generates no finite terms).
Signature signature_from_json(const json& doc, std::vector<std::string>* warnings = nullptr);
json signature_to_json(const Signature& sig);

/// Term documents: the root node object carries the format tag inline.
/// Constructor aliases "?" (query) and the check mark (check) are accepted
/// on input; canonical names are always written.
TermPtr term_from_json(const json& doc);
json term_to_json(const Term& t);
/// Bare node object without the format tag (used inside other documents).
json term_node_to_json(const Term& t);

/// Bottom-up automaton documents:
///   {"states":[...],"accept":"qF","delta":{"a":["q0"],"g(q0,q1)":["q1"]}}
/// The signature is inferred from the transition keys; an optional
/// "constructors" object ({"name":arity}) declares extra constructors.
/// Exactly one accepting state is allowed.
automata::BottomUpTA bta_from_json(const json& doc);
json bta_to_json(const automata::BottomUpTA& a);

/// Generative automaton documents:
///   {"states":[...],"init":"x0","c":{"x0":["a","g(x0,x0)"]}}
automata::GenerativeTA gta_from_json(const json& doc);
json gta_to_json(const automata::GenerativeTA& g);

/// Witness documents: {"kind":..., "values":{id: value}} where a value is a
/// rational string (submartingales) or a state array (invariants).
PredicateMap submartingale_from_json(const Term& tree, const json& doc);
json submartingale_to_json(const PredicateMap& f);

PredicateMap acceptance_invariant_from_json(const automata::BottomUpTA& a, const Term& tree,
                                            const json& doc);
json acceptance_invariant_to_json(const PredicateMap& f);

PredicateMap model_invariant_from_json(const automata::BottomUpTA& a,
                                       const automata::GenerativeTA& g, const json& doc);
json model_invariant_to_json(const PredicateMap& f);

json verdict_to_json(const Verdict& v);
json law_report_to_json(const LawReport& r);

/// Coincidence reports include the term -> value fixed-point table when
/// include_table is set (callers omit it for very large domains).
json coincidence_report_to_json(const CoincidenceReport& r, bool include_table = true);

json bounded_result_to_json(const automata::BoundedResult& r, std::size_t height);

} // namespace cofix::io
