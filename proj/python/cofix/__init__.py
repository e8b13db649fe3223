"""Pythonic front for the _cofix core.

The core speaks JSON documents (the same ones the CLI reads and writes);
this layer converts to and from plain Python values, with probabilities as
fractions.Fraction.
"""

import json
from fractions import Fraction

from . import _cofix

__version__ = _cofix.__version__
FORMAT = _cofix.FORMAT

CofixError = _cofix.CofixError


def _dumps(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def _fraction(s):
    num, _, den = s.partition("/")
    return Fraction(int(num), int(den)) if den else Fraction(int(num))


def reach_probability(tree):
    """Exact probability that the tree eventually hits a success node."""
    return _fraction(_cofix.reach_probability(_dumps(tree)))


def oracle_reach_probability(tree):
    """The same probability by brute-force path enumeration (reference)."""
    return _fraction(_cofix.oracle_reach_probability(_dumps(tree)))


def check_submartingale(tree, witness):
    """Verdict dict for a submartingale witness against a tree."""
    return json.loads(_cofix.check_submartingale(_dumps(tree), _dumps(witness)))["verdict"]


def synth_submartingale(tree):
    """The greatest submartingale, as {node_id: Fraction}."""
    doc = json.loads(_cofix.synth_submartingale(_dumps(tree)))
    return {k: _fraction(v) for k, v in doc["values"].items()}


def reachable_states(automaton, tree):
    """Automaton states reachable at the root of the tree."""
    return json.loads(_cofix.reachable_states(_dumps(automaton), _dumps(tree)))


def accepts(automaton, tree):
    return _cofix.accepts(_dumps(automaton), _dumps(tree))


def check_acceptance_invariant(automaton, tree, witness):
    return json.loads(
        _cofix.check_acceptance_invariant(_dumps(automaton), _dumps(tree), _dumps(witness))
    )["verdict"]


def synth_acceptance_invariant(automaton, tree):
    """{node_id: [states]} for accepted trees, None otherwise."""
    doc = json.loads(_cofix.synth_acceptance_invariant(_dumps(automaton), _dumps(tree)))
    return None if doc is None else doc["values"]


def check_model_invariant(automaton, generator, witness):
    return json.loads(
        _cofix.check_model_invariant(_dumps(automaton), _dumps(generator), _dumps(witness))
    )["verdict"]


def synth_model_invariant(automaton, generator):
    """{generator_state: [states]} when a certificate exists, None otherwise."""
    doc = json.loads(_cofix.synth_model_invariant(_dumps(automaton), _dumps(generator)))
    return None if doc is None else doc["values"]


def model_check_bounded(automaton, generator, max_height):
    return json.loads(_cofix.model_check_bounded(_dumps(automaton), _dumps(generator), max_height))


def generate_trees(generator, max_height, cap=1000000):
    return json.loads(_cofix.generate_trees(_dumps(generator), max_height, cap))


def coincidence(signature, sigma="ptr", height_bound=3, prob_samples=("1/2",), cap=1000000):
    """Coincidence report; sigma is "ptr" or an automaton document."""
    if sigma != "ptr":
        sigma = _dumps(sigma)
    return json.loads(
        _cofix.coincidence(_dumps(signature), sigma, height_bound, list(prob_samples), cap)
    )


def lattice_laws(lattice):
    return json.loads(_cofix.lattice_laws(_dumps(lattice)))
