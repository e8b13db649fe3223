import json
import os
import subprocess
from fractions import Fraction
from pathlib import Path

import pytest

import cofix

DATA = Path(__file__).resolve().parents[2] / "data"


def load(name):
    return json.loads((DATA / name).read_text())


def test_reach_probability():
    tree = load("tree_simple.json")
    assert cofix.reach_probability(tree) == Fraction(1, 2)
    assert cofix.oracle_reach_probability(tree) == Fraction(1, 2)
    nested = load("tree_nested.json")
    assert cofix.reach_probability(nested) == Fraction(3, 4)


def test_submartingale_roundtrip():
    tree = load("tree_simple.json")
    witness = cofix.synth_submartingale(tree)
    assert witness["n1"] == Fraction(1, 2)
    doc = {"kind": "submartingale", "values": {k: f"{v.numerator}/{v.denominator}" for k, v in witness.items()}}
    verdict = cofix.check_submartingale(tree, doc)
    assert verdict["status"] == "pass"


def test_submartingale_rejects_bad_witness():
    tree = load("tree_simple.json")
    bad = {"kind": "submartingale",
           "values": {"n1": "1/1", "n2": "1/1", "n3": "0/1", "n4": "0/1", "n5": "0/1"}}
    verdict = cofix.check_submartingale(tree, bad)
    assert verdict["status"] == "fail"
    assert verdict["location"] == "n1"
    assert verdict["condition"] == "expectation"


def test_automata():
    a = load("automaton.json")
    tree = load("tree_gaa.json")
    assert cofix.accepts(a, tree)
    assert cofix.reachable_states(a, tree) == ["q", "qF"]
    inv = cofix.synth_acceptance_invariant(a, tree)
    assert inv is not None and inv["n1"] == ["q", "qF"]
    assert cofix.check_acceptance_invariant(a, tree, {"kind": "acceptance_invariant", "values": inv})["status"] == "pass"
    assert cofix.synth_acceptance_invariant(a, {"ctor": "a", "node": "n1"}) is None


def test_model_checking():
    a = load("automaton.json")
    good = load("generator.json")
    bad = load("generator_all.json")
    inv = cofix.synth_model_invariant(a, good)
    assert inv is not None and inv["x0"] == ["q", "qF"]
    assert cofix.synth_model_invariant(a, bad) is None
    r = cofix.model_check_bounded(a, bad, 3)
    assert not r["holds"] and r["counterexample"]["ctor"] == "a"
    assert cofix.model_check_bounded(a, good, 4)["holds"]


def test_generate_trees():
    trees = cofix.generate_trees(load("generator_all.json"), 2)
    shapes = {json.dumps(t, sort_keys=True) for t in trees}
    assert len(trees) == len(shapes) == 2


def test_coincidence_and_laws():
    rep = cofix.coincidence(load("signature_prob.json"), "ptr", height_bound=2)
    assert rep["passed"] and rep["term_count"] == 3
    rep = cofix.coincidence(load("signature_ag.json"), load("automaton.json"), height_bound=3)
    assert rep["passed"] and rep["term_count"] == 5
    laws = cofix.lattice_laws(load("lattice_unit.json"))
    assert laws["all_passed"] and len(laws["laws"]) == 12


def test_errors_are_value_errors():
    with pytest.raises(ValueError):
        cofix.reach_probability({"ctor": "nope"})


def test_cli_binary_if_available():
    exe = os.environ.get("COFIX_BIN")
    if not exe:
        pytest.skip("COFIX_BIN not set")
    out = subprocess.run([exe, "liveness", "prob", str(DATA / "tree_nested.json")],
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "3/4"
