#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cofix/cli.hpp"

using json = nlohmann::json;

namespace {

const std::string kData = COFIX_DATA_DIR;

std::string data(const std::string& name) { return kData + "/" + name; }

struct CliRun {
    int code = -1;
    std::string out;
    std::string err;
};

/// Drives the command dispatcher in process.
CliRun run(std::vector<std::string> args) {
    std::ostringstream out, err;
    CliRun r;
    r.code = cofix::cli::run(std::move(args), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

/// Runs the installed binary, for the handful of end-to-end checks.
CliRun run_binary(const std::string& args) {
    const auto dir = std::filesystem::temp_directory_path();
    const auto out_p = dir / "cofix_cli_out.tmp";
    const auto err_p = dir / "cofix_cli_err.tmp";
    const std::string cmd = std::string(COFIX_BIN_PATH) + " " + args + " >" + out_p.string() +
                            " 2>" + err_p.string();
    const int status = std::system(cmd.c_str());
    CliRun r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ostringstream o, e;
    o << std::ifstream(out_p).rdbuf();
    e << std::ifstream(err_p).rdbuf();
    r.out = o.str();
    r.err = e.str();
    std::filesystem::remove(out_p);
    std::filesystem::remove(err_p);
    return r;
}

std::string temp_file(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("liveness prob prints the exact reach probability") {
    CliRun r = run({"liveness", "prob", data("tree_simple.json")});
    CHECK(r.code == 0);
    CHECK(r.out == "1/2\n");
    r = run({"liveness", "prob", data("tree_nested.json")});
    CHECK(r.code == 0);
    CHECK(r.out == "3/4\n");

    r = run({"--json", "liveness", "prob", data("tree_simple.json")});
    CHECK(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("reach_probability") == "1/2");
    CHECK(j.at("format") == "cofix/1");
}

TEST_CASE("liveness check verdicts map to exit codes") {
    CliRun r = run({"liveness", "check", data("tree_simple.json"), data("witness_simple.json")});
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS (theorem-backed)") == 0);
    CHECK(r.out.find("1/3") != std::string::npos);

    const std::string bad = temp_file("cofix_bad_witness.json");
    {
        std::ofstream f(bad);
        f << R"({"kind":"submartingale","values":{"n1":"1","n2":"1","n3":"0","n4":"0","n5":"0"}})";
    }
    r = run({"liveness", "check", data("tree_simple.json"), bad});
    CHECK(r.code == 1);
    CHECK(r.out.find("FAIL") == 0);

    r = run({"--json", "liveness", "check", data("tree_simple.json"), bad});
    CHECK(r.code == 1);
    const json v = json::parse(r.out).at("verdict");
    CHECK(v.at("status") == "fail");
    CHECK(v.at("location").get<std::string>().size() > 0);
    CHECK(v.at("condition").get<std::string>().size() > 0);
    std::filesystem::remove(bad);
}

TEST_CASE("liveness synth emits a witness its own checker accepts") {
    const std::string w = temp_file("cofix_synth_witness.json");
    CliRun r = run({"liveness", "synth", data("tree_nested.json"), "--out", w});
    CHECK(r.code == 0);
    CHECK(r.out.find("wrote") == 0);
    CHECK(r.out.find("f(root) = 3/4") != std::string::npos);

    r = run({"liveness", "check", data("tree_nested.json"), w});
    CHECK(r.code == 0);
    std::filesystem::remove(w);

    // without --out the document goes to stdout
    r = run({"liveness", "synth", data("tree_simple.json")});
    CHECK(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc.at("kind") == "submartingale");
    CHECK(doc.at("values").at("n1") == "1/2");
}

TEST_CASE("ta accept checks, synthesizes, and rejects") {
    CliRun r = run({"ta", "accept", data("automaton.json"), data("tree_gaa.json")});
    CHECK(r.code == 0);
    CHECK(r.out.find("accepted") != std::string::npos);

    const std::string w = temp_file("cofix_acc_witness.json");
    r = run({"ta", "accept", data("automaton.json"), data("tree_gaa.json"), "--synth", "--out", w});
    CHECK(r.code == 0);
    r = run({"ta", "accept", data("automaton.json"), data("tree_gaa.json"), "--witness", w});
    CHECK(r.code == 0);
    std::filesystem::remove(w);

    const std::string leaf = temp_file("cofix_leaf.json");
    {
        std::ofstream f(leaf);
        f << R"({"node":"n1","ctor":"a"})";
    }
    r = run({"--json", "ta", "accept", data("automaton.json"), leaf});
    CHECK(r.code == 1);
    const json v = json::parse(r.out).at("verdict");
    CHECK(v.at("condition") == "root_accepting");
    CHECK(v.at("location") == "n1");
    std::filesystem::remove(leaf);

    // --witness and --synth are mutually exclusive
    r = run({"ta", "accept", data("automaton.json"), data("tree_gaa.json"), "--witness", "x",
             "--synth"});
    CHECK(r.code == 2);
}

TEST_CASE("ta modelcheck: invariant synthesis, witness checking, bounded fallback") {
    CliRun r = run({"ta", "modelcheck", data("automaton.json"), data("generator.json")});
    CHECK(r.code == 0);
    CHECK(r.out.find("invariant certificate found") != std::string::npos);

    const std::string w = temp_file("cofix_model_witness.json");
    r = run({"ta", "modelcheck", data("automaton.json"), data("generator.json"), "--synth",
             "--out", w});
    CHECK(r.code == 0);
    {
        std::ifstream f(w);
        std::ostringstream ss;
        ss << f.rdbuf();
        const json doc = json::parse(ss.str());
        CHECK(doc.at("values").at("x0") == json::array({"q", "qF"}));
        CHECK(doc.at("values").at("x1") == json::array({"q"}));
    }
    r = run({"ta", "modelcheck", data("automaton.json"), data("generator.json"), "--witness", w});
    CHECK(r.code == 0);
    std::filesystem::remove(w);

    r = run({"ta", "modelcheck", data("automaton.json"), data("generator_all.json")});
    CHECK(r.code == 1);
    CHECK(r.out.find("--bounded") != std::string::npos);

    r = run({"--json", "ta", "modelcheck", data("automaton.json"), data("generator_all.json"),
             "--bounded", "4"});
    CHECK(r.code == 1);
    json j = json::parse(r.out);
    CHECK(j.at("holds") == false);
    CHECK(j.at("trees_checked") == 1);
    CHECK(j.at("counterexample").at("ctor") == "a");

    r = run({"--json", "ta", "modelcheck", data("automaton.json"), data("generator.json"),
             "--bounded", "4"});
    CHECK(r.code == 0);
    j = json::parse(r.out);
    CHECK(j.at("holds") == true);
    CHECK(j.at("trees_checked") == 25);
    CHECK(j.at("counterexample").is_null());
}

TEST_CASE("demo coincidence reports chain agreement") {
    CliRun r = run({"--json", "demo", "coincidence", data("signature_ag.json"),
                    "bu:" + data("automaton.json"), "--height", "3"});
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j.at("passed") == true);
    CHECK(j.at("term_count") == 5);
    CHECK(j.at("coincided") == true);

    r = run({"--json", "demo", "coincidence", data("signature_prob.json"), "ptr", "--height", "2"});
    CHECK(r.code == 0);
    j = json::parse(r.out);
    CHECK(j.at("term_count") == 3);
    CHECK(j.at("fixed_point").at("check[1/2](leaf,leaf)") == "1/1");
    CHECK(j.at("fixed_point").at("query[1/2](leaf,leaf)") == "0/1");

    r = run({"demo", "coincidence", data("signature_ag.json"), "nonsense"});
    CHECK(r.code == 2);
    CHECK(r.err.find("unknown algebra") != std::string::npos);

    // the cap turns oversized enumerations into input errors
    r = run({"demo", "coincidence", data("signature_ag.json"), "ptr", "--height", "4", "--cap",
             "10"});
    CHECK(r.code == 2);
    CHECK(r.err.find("cap") != std::string::npos);
}

TEST_CASE("lattice laws pass on the shipped lattices") {
    CliRun r = run({"lattice", "laws", data("lattice_unit.json")});
    CHECK(r.code == 0);
    CHECK(r.out.find("all 12 lattice laws hold") != std::string::npos);

    r = run({"--json", "lattice", "laws", data("lattice_powerset.json")});
    CHECK(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("all_passed") == true);
    CHECK(j.at("laws").size() == 12);
    CHECK(j.at("samples") == 8); // exhaustive over the 3-state powerset
}

TEST_CASE("errors are exit code 2 with a message on stderr") {
    CliRun r = run({"liveness", "prob", "/no/such/tree.json"});
    CHECK(r.code == 2);
    CHECK(r.err.find("error:") == 0);

    r = run({"frobnicate"});
    CHECK(r.code == 2);

    r = run({});
    CHECK(r.code == 2);

    // global flags come before the subcommand
    r = run({"liveness", "prob", data("tree_simple.json"), "--json"});
    CHECK(r.code == 2);

    r = run({"--json", "liveness", "prob", "/no/such/tree.json"});
    CHECK(r.code == 2);
    CHECK(json::parse(r.out).at("verdict").at("status") == "error");

    // a witness against the wrong tree is an input error, not a failed check
    r = run({"liveness", "check", data("tree_nested.json"), data("witness_simple.json")});
    CHECK(r.code == 2);
}

TEST_CASE("help is printed on request") {
    CliRun r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("cofix") != std::string::npos);
    r = run({"--help-all"});
    CHECK(r.code == 0);
    CHECK(r.out.find("modelcheck") != std::string::npos);
}

TEST_CASE("the installed binary matches the in-process dispatcher byte for byte") {
    const std::string args = "--json ta modelcheck " + data("automaton.json") + " " +
                             data("generator_all.json") + " --bounded 3";
    const CliRun a = run_binary(args);
    const CliRun b = run_binary(args);
    CHECK(a.code == 1);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);

    const CliRun in_proc = run({"--json", "ta", "modelcheck", data("automaton.json"),
                                data("generator_all.json"), "--bounded", "3"});
    CHECK(in_proc.code == a.code);
    CHECK(in_proc.out == a.out);

    const CliRun p = run_binary("liveness prob " + data("tree_nested.json"));
    CHECK(p.code == 0);
    CHECK(p.out == "3/4\n");
}
