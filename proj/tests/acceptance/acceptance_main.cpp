// Acceptance gate: one line per criterion, exit 0 only when all pass.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cofix/automata.hpp"
#include "cofix/cli.hpp"
#include "cofix/generators.hpp"
#include "cofix/json_io.hpp"
#include "cofix/lattice.hpp"
#include "cofix/liveness.hpp"
#include "cofix/rng.hpp"

using namespace cofix;

namespace {

struct CriterionFailure {
    std::string message;
};

void require(bool ok, const std::string& message) {
    if (!ok) throw CriterionFailure{message};
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1fs", s);
    return buf;
}

// ---------------------------------------------------------------------------
// 1. Coincidence: lfp = fold = gfp with stage agreement, sigma_ptr and
//    sigma_bu over random automata, heights 1 through 5, exact equality.

std::string criterion_coincidence() {
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t peak_terms = 0;

    const Signature prob_sig = liveness::prob_signature();
    const MonotoneAlgebra ptr = liveness::sigma_ptr();
    for (std::size_t h = 1; h <= 5; ++h) {
        CoincidenceOptions opts;
        opts.height_bound = h;
        opts.prob_samples = {Rational(1, 2)};
        opts.cap = 1100000;
        const CoincidenceReport rep = coincidence_check(ptr, prob_sig, opts);
        require(rep.lfp_converged && rep.gfp_converged,
                "sigma_ptr h" + std::to_string(h) + ": a chain failed to converge");
        require(rep.coincided, "sigma_ptr h" + std::to_string(h) + ": lfp, fold, gfp differ");
        require(rep.passed, "sigma_ptr h" + std::to_string(h) + ": a stage disagreed on its prefix");
        require(rep.stages.size() == h + 1,
                "sigma_ptr h" + std::to_string(h) + ": missing stage rows");
        peak_terms = std::max(peak_terms, rep.term_count);
    }
    require(peak_terms == 1045459, "sigma_ptr h5 domain should hold 1045459 terms, got " +
                                       std::to_string(peak_terms));

    Rng rng(407);
    gen::BtaOptions bopts; // |Q| <= 3 over {a/0, g/2}
    for (int i = 0; i < 10; ++i) {
        const automata::BottomUpTA a = gen::random_bta(rng, bopts);
        for (std::size_t h = 1; h <= 5; ++h) {
            CoincidenceOptions opts;
            opts.height_bound = h;
            const CoincidenceReport rep = coincidence_check(automata::sigma_bu(a), a.sig, opts);
            require(rep.passed && rep.coincided && rep.lfp_converged && rep.gfp_converged,
                    "sigma_bu automaton " + std::to_string(i) + " h" + std::to_string(h) +
                        ": chains and fold disagree");
        }
    }

    const double elapsed = seconds_since(t0);
    require(elapsed < 30.0, "suite took " + fmt_seconds(elapsed) + ", budget is 30s");
    return "sigma_ptr and 10 random sigma_bu automata, heights 1-5, peak domain " +
           std::to_string(peak_terms) + " terms, " + fmt_seconds(elapsed);
}

// ---------------------------------------------------------------------------
// 2. reach_probability equals the root-path enumeration oracle exactly on a
//    1000-tree corpus of height <= 8.

std::vector<TermPtr> prob_corpus() {
    Rng rng(2026);
    std::vector<TermPtr> trees;
    for (int i = 0; i < 1000; ++i) {
        gen::TreeOptions opts;
        opts.max_height = 2 + static_cast<std::size_t>(i % 7); // heights 2..8
        trees.push_back(gen::random_prob_tree(rng, opts));
    }
    return trees;
}

std::string criterion_probability_oracle() {
    const std::vector<TermPtr> trees = prob_corpus();
    std::size_t max_height = 0, max_nodes = 0;
    for (const TermPtr& t : trees) {
        const Rational fold_p = liveness::reach_probability(*t);
        const Rational oracle_p = liveness::oracle_reach_probability(*t);
        require(fold_p == oracle_p, "tree " + shape(*t) + ": fold " + fold_p.str() +
                                        " != oracle " + oracle_p.str());
        max_height = std::max(max_height, t->height());
        max_nodes = std::max(max_nodes, t->size());
    }
    return std::to_string(trees.size()) + " trees, height <= " + std::to_string(max_height) +
           ", largest " + std::to_string(max_nodes) + " nodes, exact equality";
}

// ---------------------------------------------------------------------------
// 3. Submartingale soundness: every passing perturbed witness bounds the
//    reach probability from below; the greatest witness attains it.

std::string criterion_submartingale_soundness() {
    const std::vector<TermPtr> trees = prob_corpus();
    Rng rng(555);
    std::size_t perturbed = 0, scaled = 0;
    for (const TermPtr& t : trees) {
        const Rational reach = liveness::reach_probability(*t);
        const PredicateMap g = liveness::greatest_submartingale(*t);
        require(liveness::check_submartingale(*t, g).passed(),
                "greatest witness rejected on " + shape(*t));
        require(g.at(t->node_id()).rat() == reach,
                "greatest witness root differs from reach probability on " + shape(*t));

        std::size_t passing = 0;
        for (int attempt = 0; attempt < 40 && passing < 10; ++attempt) {
            const PredicateMap f = gen::perturb_submartingale(rng, g);
            if (!liveness::check_submartingale(*t, f).passed()) continue;
            require(f.at(t->node_id()).rat() <= reach,
                    "passing perturbed witness exceeds reach probability on " + shape(*t));
            ++passing;
            ++perturbed;
        }
        // deep trees rarely survive independent scaling; top up with uniform
        // scalings, which are still perturbations and still go through check
        for (long long k = 0; passing < 10; ++k) {
            require(k <= 16, "internal: top-up loop overran");
            PredicateMap f = g;
            for (std::size_t i = 0; i < f.size(); ++i)
                f.set_index(i, OmegaValue::rational(Rational(k, 16) * g.at_index(i).rat()));
            require(liveness::check_submartingale(*t, f).passed(),
                    "uniformly scaled witness rejected on " + shape(*t));
            require(f.at(t->node_id()).rat() <= reach,
                    "passing scaled witness exceeds reach probability on " + shape(*t));
            ++passing;
            ++scaled;
        }
    }
    return std::to_string(trees.size() * 10) + " passing witnesses over " +
           std::to_string(trees.size()) + " trees (" + std::to_string(perturbed) +
           " independently perturbed, " + std::to_string(scaled) + " uniformly scaled)";
}

// ---------------------------------------------------------------------------
// 4. reachable_states equals the root projection of brute-force run
//    enumeration on >= 200 (automaton, tree) pairs, |Q| <= 3, height <= 4.

struct AutomatonTreePair {
    automata::BottomUpTA a;
    TermPtr t;
};

std::vector<AutomatonTreePair> automaton_tree_corpus() {
    Rng rng(88);
    gen::BtaOptions bopts;
    std::vector<AutomatonTreePair> pairs;
    while (pairs.size() < 220) {
        automata::BottomUpTA a = gen::random_bta(rng, bopts);
        TermPtr t = gen::random_signature_tree(rng, a.sig, 4);
        // keep |Q|^nodes within comfortable enumeration range
        double labelings = 1.0;
        for (std::size_t i = 0; i < t->size(); ++i) labelings *= static_cast<double>(a.states.size());
        if (labelings > 2000000.0) continue;
        pairs.push_back({std::move(a), std::move(t)});
    }
    return pairs;
}

std::string criterion_run_enumeration() {
    const std::vector<AutomatonTreePair> pairs = automaton_tree_corpus();
    std::size_t total_runs = 0;
    for (const auto& [a, t] : pairs) {
        const auto runs = automata::oracle_runs(a, *t);
        StateSet roots;
        for (const auto& run : runs) roots.push_back(run.at(t->node_id()));
        require(canon_states(roots) == automata::reachable_states(a, *t),
                "fold and run enumeration disagree on " + shape(*t));
        total_runs += runs.size();
    }
    return std::to_string(pairs.size()) + " pairs, " + std::to_string(total_runs) +
           " runs enumerated, root projections identical";
}

// ---------------------------------------------------------------------------
// 5. synth_acceptance_invariant returns a witness iff the tree is accepted,
//    and every returned witness passes the checker.

std::string criterion_acceptance_biconditional() {
    const std::vector<AutomatonTreePair> pairs = automaton_tree_corpus();
    std::size_t with_witness = 0, without = 0;
    for (const auto& [a, t] : pairs) {
        const bool acc = automata::accepts(a, *t);
        const auto inv = automata::synth_acceptance_invariant(a, *t);
        require(inv.has_value() == acc, "witness existence disagrees with acceptance on " + shape(*t));
        if (inv) {
            require(automata::check_acceptance_invariant(a, *t, *inv).passed(),
                    "synthesized invariant rejected on " + shape(*t));
            ++with_witness;
        } else {
            ++without;
        }
    }
    require(with_witness > 0 && without > 0, "corpus failed to exercise both outcomes");
    return std::to_string(with_witness + without) + " pairs (" + std::to_string(with_witness) +
           " accepted with checked witness, " + std::to_string(without) + " rejected with none)";
}

// ---------------------------------------------------------------------------
// 6. Model-checking soundness: an invariant certificate implies bounded
//    acceptance at heights 1-5; a bounded counterexample implies no
//    certificate exists.

std::string criterion_model_soundness() {
    Rng rng(3001);
    gen::BtaOptions bopts;
    gen::GtaOptions gopts;
    std::size_t certified = 0, refuted = 0;
    for (int i = 0; i < 60; ++i) {
        const automata::BottomUpTA a = gen::random_bta(rng, bopts);
        const automata::GenerativeTA c = gen::random_gta(rng, gopts);
        const auto inv = automata::synth_model_invariant(a, c);
        if (inv)
            require(automata::check_model_invariant(a, c, *inv).passed(),
                    "synthesized model invariant rejected (pair " + std::to_string(i) + ")");
        bool any_counterexample = false;
        for (std::size_t h = 1; h <= 5; ++h) {
            const automata::BoundedResult r = automata::model_check_bounded(a, c, h);
            if (inv)
                require(r.holds && !r.counterexample,
                        "certificate exists but height " + std::to_string(h) +
                            " found a rejected tree (pair " + std::to_string(i) + ")");
            if (!r.holds) any_counterexample = true;
        }
        if (any_counterexample) {
            require(!inv, "counterexample found despite a certificate (pair " + std::to_string(i) + ")");
            ++refuted;
        }
        if (inv) ++certified;
    }
    require(certified > 0 && refuted > 0, "corpus failed to exercise both outcomes");
    return "60 automaton/generator pairs (" + std::to_string(certified) + " certified, " +
           std::to_string(refuted) + " refuted by bounded search, 0 contradictions)";
}

// ---------------------------------------------------------------------------
// 7. Lattice laws hold exhaustively (powerset, carriers up to 4) and on the
//    9-point grid (unit interval); monotonicity checking passes the built-in
//    algebras and catches a planted antitone rule.

MonotoneAlgebra antitone_fixture() {
    MonotoneAlgebra sigma;
    sigma.sig = Signature({Constructor{"n", 0, AttrSchema::None, {}},
                           Constructor{"c", 1, AttrSchema::None, {}}});
    sigma.lattice = Lattice::powerset({"q0", "q1"});
    sigma.provenance = "user";
    sigma.evaluate = [](const Constructor& c, const Attribute&,
                        const std::vector<OmegaValue>& kids) -> OmegaValue {
        if (c.name == "n") return OmegaValue::states({});
        StateSet out;
        for (const std::string& q : {"q0", "q1"})
            if (!set_member(kids[0].set(), q)) out.push_back(q);
        return OmegaValue::states(out);
    };
    return sigma;
}

std::string criterion_lattice_monotone() {
    for (std::size_t n = 1; n <= 4; ++n) { // empty carriers are not constructible
        StateSet carrier;
        for (std::size_t i = 0; i < n; ++i) carrier.push_back("q" + std::to_string(i));
        const Lattice l = Lattice::powerset(carrier);
        const LawReport rep = check_lattice_laws(l, all_subsets(carrier));
        require(rep.laws.size() == 12, "expected 12 laws");
        require(rep.samples == (std::size_t{1} << n), "powerset sampling is not exhaustive");
        if (!rep.all_passed())
            throw CriterionFailure{"a lattice law failed on the " + std::to_string(n) +
                                   "-state powerset: " + rep.first_failure()->law};
    }
    const LawReport unit = check_lattice_laws(Lattice::unit_interval(), rational_grid(9));
    require(unit.laws.size() == 12 && unit.samples == 9 && unit.all_passed(),
            "a lattice law failed on the unit-interval grid");

    require(check_monotone(liveness::sigma_ptr(), 400, 1).passed(), "sigma_ptr flagged as non-monotone");
    automata::BottomUpTA a;
    a.states = {"q", "qF"};
    a.accept = "qF";
    a.sig = Signature({Constructor{"a", 0, AttrSchema::None, {}},
                       Constructor{"g", 2, AttrSchema::None, {}}});
    a.delta[{"a", {}}] = {"q"};
    a.delta[{"g", {"q", "q"}}] = {"q", "qF"};
    require(check_monotone(automata::sigma_bu(a), 400, 1).passed(), "sigma_bu flagged as non-monotone");

    const Verdict anti = check_monotone(antitone_fixture(), 400, 1);
    require(anti.failed(), "planted antitone rule slipped through");
    require(anti.location == "c" && anti.condition == "monotone",
            "antitone report names the wrong location or condition");
    return "12 laws on 4 powerset carriers (exhaustive) and the 9-point grid; "
           "monotonicity passes sigma_ptr/sigma_bu and catches the antitone plant";
}

// ---------------------------------------------------------------------------
// 8. CLI determinism and witness round-trips through the real binary.

struct CliRun {
    int code = -1;
    std::string out;
};

CliRun run_binary(const std::string& args) {
    const auto dir = std::filesystem::temp_directory_path();
    const auto out_p = dir / "cofix_acceptance_out.tmp";
    const std::string cmd = std::string(COFIX_BIN_PATH) + " " + args + " >" + out_p.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    CliRun r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ostringstream ss;
    ss << std::ifstream(out_p).rdbuf();
    r.out = ss.str();
    std::filesystem::remove(out_p);
    return r;
}

std::string data(const std::string& name) {
    return std::string(COFIX_DATA_DIR) + "/" + name;
}

std::string criterion_cli() {
    const std::string w = (std::filesystem::temp_directory_path() / "cofix_acceptance_witness.json").string();

    CliRun r = run_binary("liveness synth " + data("tree_nested.json") + " --out " + w);
    require(r.code == 0, "liveness synth exited " + std::to_string(r.code));
    r = run_binary("liveness check " + data("tree_nested.json") + " " + w);
    require(r.code == 0, "synthesized submartingale failed its own check");

    r = run_binary("ta accept " + data("automaton.json") + " " + data("tree_gaa.json") +
                   " --synth --out " + w);
    require(r.code == 0, "ta accept --synth exited " + std::to_string(r.code));
    r = run_binary("ta accept " + data("automaton.json") + " " + data("tree_gaa.json") +
                   " --witness " + w);
    require(r.code == 0, "synthesized acceptance invariant failed its own check");

    r = run_binary("ta modelcheck " + data("automaton.json") + " " + data("generator.json") +
                   " --synth --out " + w);
    require(r.code == 0, "ta modelcheck --synth exited " + std::to_string(r.code));
    r = run_binary("ta modelcheck " + data("automaton.json") + " " + data("generator.json") +
                   " --witness " + w);
    require(r.code == 0, "synthesized model invariant failed its own check");
    std::filesystem::remove(w);

    const std::vector<std::string> fixed = {
        "--json demo coincidence " + data("signature_ag.json") + " bu:" + data("automaton.json") +
            " --height 4",
        "--json demo coincidence " + data("signature_prob.json") + " ptr --height 3",
        "--seed 7 --json lattice laws " + data("lattice_unit.json") + " --samples 16",
        "--json ta modelcheck " + data("automaton.json") + " " + data("generator_all.json") +
            " --bounded 4",
        "--json liveness prob " + data("tree_simple.json"),
    };
    for (const std::string& args : fixed) {
        const CliRun first = run_binary(args);
        const CliRun second = run_binary(args);
        require(first.code == second.code && first.out == second.out,
                "two runs of 'cofix " + args + "' differ");
        require(!first.out.empty() && first.out.back() == '\n', "report is not newline-terminated");
    }
    return "3 witness round-trips re-check to pass; " + std::to_string(fixed.size()) +
           " fixed-seed reports byte-identical across runs";
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<std::string()> body;
    };
    const std::vector<Criterion> criteria = {
        {"coincidence suite", criterion_coincidence},
        {"probability oracle equivalence", criterion_probability_oracle},
        {"submartingale soundness", criterion_submartingale_soundness},
        {"run-enumeration equivalence", criterion_run_enumeration},
        {"acceptance-invariant biconditional", criterion_acceptance_biconditional},
        {"model-checking soundness", criterion_model_soundness},
        {"lattice and monotonicity suite", criterion_lattice_monotone},
        {"CLI determinism and round-trip", criterion_cli},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const std::string tag = "[" + std::to_string(i + 1) + "/" + std::to_string(criteria.size()) + "]";
        try {
            const std::string detail = criteria[i].body();
            std::cout << tag << " PASS " << criteria[i].name << ": " << detail << "\n";
        } catch (const CriterionFailure& f) {
            std::cout << tag << " FAIL " << criteria[i].name << ": " << f.message << "\n";
            ++failures;
        } catch (const std::exception& e) {
            std::cout << tag << " FAIL " << criteria[i].name << ": unexpected error: " << e.what()
                      << "\n";
            ++failures;
        }
        std::cout.flush();
    }
    if (failures != 0) {
        std::cout << failures << " of " << criteria.size() << " acceptance criteria failed\n";
        return 1;
    }
    std::cout << "all " << criteria.size() << " acceptance criteria passed\n";
    return 0;
}
