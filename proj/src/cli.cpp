#include "cofix/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>

#include "cofix/automata.hpp"
#include "cofix/fixpoint.hpp"
#include "cofix/generators.hpp"
#include "cofix/json_io.hpp"
#include "cofix/lattice.hpp"
#include "cofix/liveness.hpp"
#include "cofix/rng.hpp"

namespace cofix::cli {

namespace {

struct Ctx {
    bool json = false;
    std::uint64_t seed = 0;
    std::ostream* out = nullptr;
    std::ostream* err = nullptr;
};

int emit_verdict(const Ctx& ctx, const Verdict& v) {
    if (ctx.json) {
        *ctx.out << io::dump(io::verdict_to_json(v));
    } else if (v.status == Verdict::Status::Pass) {
        *ctx.out << "PASS (" << v.confidence << "): " << v.detail << "\n";
    } else if (v.status == Verdict::Status::Fail) {
        *ctx.out << "FAIL (" << v.confidence << ") at " << v.location << " [" << v.condition
                 << "]: " << v.detail << "\n";
    } else {
        *ctx.out << "ERROR: " << v.detail << "\n";
    }
    return v.exit_code();
}

/// Writes a witness document to --out or stdout.
void emit_document(const Ctx& ctx, const io::json& doc, const std::string& out_path) {
    const std::string text = io::dump(doc);
    if (out_path.empty()) {
        *ctx.out << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw ValidationError(out_path + ": cannot open for writing");
    f << text;
    if (!f) throw ValidationError(out_path + ": write failed");
    *ctx.out << "wrote " << out_path << "\n";
}

TermPtr load_term(const std::string& path) {
    return io::term_from_json(io::load_json_file(path));
}

int cmd_liveness_prob(const Ctx& ctx, const std::string& tree_path) {
    TermPtr t = load_term(tree_path);
    liveness::validate_prob_tree(*t);
    const Rational p = liveness::reach_probability(*t);
    if (ctx.json) {
        *ctx.out << io::dump(io::json{{"format", io::kFormat}, {"reach_probability", p.str()}});
    } else {
        *ctx.out << p.str() << "\n";
    }
    return 0;
}

int cmd_liveness_check(const Ctx& ctx, const std::string& tree_path, const std::string& witness_path) {
    TermPtr t = load_term(tree_path);
    liveness::validate_prob_tree(*t);
    const PredicateMap f = io::submartingale_from_json(*t, io::load_json_file(witness_path));
    return emit_verdict(ctx, liveness::check_submartingale(*t, f));
}

int cmd_liveness_synth(const Ctx& ctx, const std::string& tree_path, const std::string& out_path) {
    TermPtr t = load_term(tree_path);
    liveness::validate_prob_tree(*t);
    const PredicateMap f = liveness::greatest_submartingale(*t);
    emit_document(ctx, io::submartingale_to_json(f), out_path);
    if (!ctx.json && !out_path.empty())
        *ctx.out << "certified lower bound f(root) = " << f.at(t->node_id()).rat().str() << "\n";
    return 0;
}

int cmd_ta_accept(const Ctx& ctx, const std::string& a_path, const std::string& tree_path,
                  const std::string& witness_path, bool synth, const std::string& out_path) {
    const automata::BottomUpTA a = io::bta_from_json(io::load_json_file(a_path));
    TermPtr t = load_term(tree_path);
    validate_term(a.sig, *t);

    if (!witness_path.empty()) {
        const PredicateMap f = io::acceptance_invariant_from_json(a, *t, io::load_json_file(witness_path));
        return emit_verdict(ctx, automata::check_acceptance_invariant(a, *t, f));
    }

    const std::optional<PredicateMap> inv = automata::synth_acceptance_invariant(a, *t);
    if (!inv) {
        const StateSet root = automata::reachable_states(a, *t);
        return emit_verdict(ctx, Verdict::fail(t->node_id(), "root_accepting",
                                               "tree is not accepted: reachable root states " +
                                                   set_str(root) + " miss '" + a.accept +
                                                   "'; no acceptance invariant exists"));
    }
    if (synth) {
        emit_document(ctx, io::acceptance_invariant_to_json(*inv), out_path);
        return 0;
    }
    return emit_verdict(ctx, Verdict::pass("accepted; invariant root set " +
                                           set_str(inv->at(t->node_id()).set())));
}

int cmd_ta_modelcheck(const Ctx& ctx, const std::string& a_path, const std::string& c_path,
                      const std::string& witness_path, bool synth, std::int64_t bounded,
                      const std::string& out_path) {
    const automata::BottomUpTA a = io::bta_from_json(io::load_json_file(a_path));
    const automata::GenerativeTA g = io::gta_from_json(io::load_json_file(c_path));
    automata::merged_signature(a, g); // arity compatibility

    if (bounded >= 0) {
        const std::size_t height = static_cast<std::size_t>(bounded);
        const automata::BoundedResult r = automata::model_check_bounded(a, g, height);
        if (ctx.json) {
            *ctx.out << io::dump(io::bounded_result_to_json(r, height));
            return r.holds ? 0 : 1;
        }
        if (r.holds) {
            return emit_verdict(ctx, Verdict::pass("all " + std::to_string(r.trees_checked) +
                                                       " generated trees up to height " +
                                                       std::to_string(height) + " are accepted",
                                                   Verdict::bounded(height)));
        }
        return emit_verdict(ctx, Verdict::fail(g.init, "bounded_accept",
                                               "generated tree rejected: " + shape(*r.counterexample),
                                               Verdict::bounded(height)));
    }

    if (!witness_path.empty()) {
        const PredicateMap f = io::model_invariant_from_json(a, g, io::load_json_file(witness_path));
        return emit_verdict(ctx, automata::check_model_invariant(a, g, f));
    }

    const std::optional<PredicateMap> inv = automata::synth_model_invariant(a, g);
    if (!inv) {
        return emit_verdict(
            ctx, Verdict::fail(g.init, "initial_accepting",
                               "no invariant certificate: the greatest invariant does not put '" +
                                   a.accept + "' on '" + g.init +
                                   "'; invariant checking is sound but not complete, try --bounded H"));
    }
    if (synth) {
        emit_document(ctx, io::model_invariant_to_json(*inv), out_path);
        return 0;
    }
    return emit_verdict(ctx, Verdict::pass("invariant certificate found; f(" + g.init + ") = " +
                                           set_str(inv->at(g.init).set())));
}

int cmd_demo_coincidence(const Ctx& ctx, const std::string& sig_path, const std::string& sigma_spec,
                         std::size_t height, const std::vector<std::string>& samples,
                         std::uint64_t cap) {
    std::vector<std::string> warnings;
    const Signature sig = io::signature_from_json(io::load_json_file(sig_path), &warnings);
    for (const auto& w : warnings) *ctx.err << "warning: " << w << "\n";

    std::string spec = sigma_spec;
    if (spec.rfind("sigma=", 0) == 0) spec = spec.substr(6);
    MonotoneAlgebra sigma;
    if (spec == "ptr") {
        sigma = liveness::sigma_ptr();
    } else if (spec.rfind("bu:", 0) == 0) {
        sigma = automata::sigma_bu(io::bta_from_json(io::load_json_file(spec.substr(3))));
    } else {
        throw ValidationError("unknown algebra '" + spec + "' (expected \"ptr\" or \"bu:<automaton.json>\")");
    }

    CoincidenceOptions opts;
    opts.height_bound = height;
    opts.cap = cap;
    for (const auto& s : samples) opts.prob_samples.push_back(Rational::parse(s));

    const CoincidenceReport rep = coincidence_check(sigma, sig, opts);
    if (ctx.json) {
        *ctx.out << io::dump(io::coincidence_report_to_json(rep, rep.term_count <= 10000));
    } else if (rep.passed) {
        *ctx.out << "PASS (theorem-backed): ascending and descending chains meet fold on " << rep.term_count
                 << " terms up to height " << height << " (lfp " << rep.lfp_iterations << ", gfp "
                 << rep.gfp_iterations << " iterations)\n";
    } else {
        *ctx.out << "FAIL: chain/fold disagreement, see --json for the stage table\n";
    }
    return rep.passed ? 0 : 1;
}

int cmd_lattice_laws(const Ctx& ctx, const std::string& lattice_path, std::size_t extra_samples) {
    const Lattice l = io::lattice_from_json(io::load_json_file(lattice_path));
    std::vector<OmegaValue> samples;
    Rng rng(ctx.seed);
    if (l.kind == Lattice::Kind::Powerset) {
        if (l.carrier.size() <= 5) {
            samples = all_subsets(l.carrier);
        } else {
            for (std::size_t i = 0; i < std::max<std::size_t>(extra_samples, 64); ++i) {
                StateSet s;
                for (const auto& q : l.carrier)
                    if (rng.coin()) s.push_back(q);
                samples.push_back(OmegaValue::states(std::move(s)));
            }
        }
    } else {
        samples = rational_grid(9);
        for (std::size_t i = 0; i < extra_samples; ++i)
            samples.push_back(OmegaValue::rational(Rational(static_cast<long long>(rng.below(33)), 32)));
    }
    const LawReport rep = check_lattice_laws(l, samples);
    if (ctx.json) {
        *ctx.out << io::dump(io::law_report_to_json(rep));
        return rep.all_passed() ? 0 : 1;
    }
    if (rep.all_passed()) {
        *ctx.out << "PASS (theorem-backed): all " << rep.laws.size() << " lattice laws hold on "
                 << rep.samples << " samples\n";
        return 0;
    }
    const LawResult* f = rep.first_failure();
    *ctx.out << "FAIL at " << f->law << ": " << f->detail << "\n";
    return 1;
}

} // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    Ctx ctx;
    ctx.out = &out;
    ctx.err = &err;

    CLI::App app{"cofix: chain-based verification for inductive datatypes", "cofix"};
    app.set_help_all_flag("--help-all");
    app.add_flag("--json", ctx.json, "emit machine-readable JSON on stdout");
    app.add_option("--seed", ctx.seed, "seed for randomized routines")->default_val(0);
    app.require_subcommand(1);

    std::string tree_path, witness_path, out_path, a_path, c_path, sig_path, sigma_spec, lattice_path;
    bool synth = false;
    std::int64_t bounded = -1;
    std::size_t height = 3, extra_samples = 0;
    std::uint64_t cap = 1000000;
    std::vector<std::string> samples{"1/2"};

    CLI::App* liveness = app.add_subcommand("liveness", "probabilistic liveness on finite trees");
    liveness->require_subcommand(1);
    CLI::App* l_prob = liveness->add_subcommand("prob", "print the exact reach probability");
    l_prob->add_option("tree", tree_path, "probabilistic tree (JSON)")->required();
    CLI::App* l_check = liveness->add_subcommand("check", "check a submartingale witness");
    l_check->add_option("tree", tree_path, "probabilistic tree (JSON)")->required();
    l_check->add_option("witness", witness_path, "submartingale witness (JSON)")->required();
    CLI::App* l_synth = liveness->add_subcommand("synth", "synthesize the greatest submartingale");
    l_synth->add_option("tree", tree_path, "probabilistic tree (JSON)")->required();
    l_synth->add_option("--out", out_path, "write the witness to a file");

    CLI::App* ta = app.add_subcommand("ta", "bottom-up tree automata");
    ta->require_subcommand(1);
    CLI::App* t_accept = ta->add_subcommand("accept", "acceptance of a single tree");
    t_accept->add_option("automaton", a_path, "bottom-up automaton (JSON)")->required();
    t_accept->add_option("tree", tree_path, "input tree (JSON)")->required();
    auto* aw = t_accept->add_option("--witness", witness_path, "check this acceptance invariant");
    auto* as = t_accept->add_flag("--synth", synth, "emit the greatest acceptance invariant");
    as->excludes(aw);
    t_accept->add_option("--out", out_path, "write the witness to a file");

    CLI::App* t_mc = ta->add_subcommand("modelcheck", "does the automaton accept every generated tree");
    t_mc->add_option("automaton", a_path, "bottom-up automaton (JSON)")->required();
    t_mc->add_option("generator", c_path, "generative automaton (JSON)")->required();
    auto* mw = t_mc->add_option("--witness", witness_path, "check this model invariant");
    auto* ms = t_mc->add_flag("--synth", synth, "emit the greatest model invariant");
    auto* mb = t_mc->add_option("--bounded", bounded, "check all generated trees up to this height");
    ms->excludes(mw);
    mb->excludes(mw);
    mb->excludes(ms);
    t_mc->add_option("--out", out_path, "write the witness to a file");

    CLI::App* demo = app.add_subcommand("demo", "demonstrations");
    demo->require_subcommand(1);
    CLI::App* d_coin = demo->add_subcommand("coincidence",
                                            "ascending and descending chains meet fold on finite trees");
    d_coin->add_option("signature", sig_path, "signature (JSON)")->required();
    d_coin->add_option("sigma", sigma_spec, "\"ptr\" or \"bu:<automaton.json>\"")->required();
    d_coin->add_option("--height", height, "height bound for the term domain")->default_val(3);
    d_coin->add_option("--sample", samples, "probability samples for attribute enumeration");
    d_coin->add_option("--cap", cap, "enumeration size cap")->default_val(1000000);

    CLI::App* lattice = app.add_subcommand("lattice", "truth-value lattices");
    lattice->require_subcommand(1);
    CLI::App* laws = lattice->add_subcommand("laws", "check the bounded-lattice equations");
    laws->add_option("lattice", lattice_path, "lattice declaration (JSON)")->required();
    laws->add_option("--samples", extra_samples, "extra random samples beyond the built-in grid");

    std::reverse(args.begin(), args.end()); // CLI11 consumes args back to front
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (l_prob->parsed()) return cmd_liveness_prob(ctx, tree_path);
        if (l_check->parsed()) return cmd_liveness_check(ctx, tree_path, witness_path);
        if (l_synth->parsed()) return cmd_liveness_synth(ctx, tree_path, out_path);
        if (t_accept->parsed()) return cmd_ta_accept(ctx, a_path, tree_path, witness_path, synth, out_path);
        if (t_mc->parsed())
            return cmd_ta_modelcheck(ctx, a_path, c_path, witness_path, synth, bounded, out_path);
        if (d_coin->parsed()) return cmd_demo_coincidence(ctx, sig_path, sigma_spec, height, samples, cap);
        if (laws->parsed()) return cmd_lattice_laws(ctx, lattice_path, extra_samples);
        err << "error: no subcommand\n";
        return 2;
    } catch (const Error& e) {
        if (ctx.json) out << io::dump(io::verdict_to_json(Verdict::error(e.what())));
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 2;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(std::move(args), out, err);
}

} // namespace cofix::cli
