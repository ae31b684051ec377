import itertools
import json
import random
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from latlang import (
    build_ordered_monoid,
    load_chain,
    make_automaton,
    simulating_automaton,
    standard_lattice,
)
from latlang.serialize import decomposition_from_doc

settings.register_profile(
    "ci",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.function_scoped_fixture],
)
settings.load_profile("ci")

DATA = Path(__file__).parent / "data"


def all_words(alphabet, max_len):
    """Every word up to max_len in length-lexicographic order."""
    for n in range(max_len + 1):
        for combo in itertools.product(alphabet, repeat=n):
            yield combo


def u1(order="z<1"):
    """The two-element monoid with an absorbing element z, in a chosen order."""
    pairs = {"z<1": [("z", "1")], "1<z": [("1", "z")], "=": []}[order]
    return build_ordered_monoid(("1", "z"), "1", [["1", "z"], ["z", "z"]], pairs)


def z2():
    return build_ordered_monoid(("1", "g"), "1", [["1", "g"], ["g", "1"]])


@pytest.fixture(scope="session")
def boolean():
    return standard_lattice("boolean")


@pytest.fixture(scope="session")
def two_sink_chain():
    return load_chain((DATA / "two_sink_chain.json").read_text())


@pytest.fixture(scope="session")
def two_sink_decomposition(two_sink_chain):
    doc = json.loads((DATA / "two_sink_decomposition.json").read_text())
    return decomposition_from_doc(doc, two_sink_chain)


@pytest.fixture(scope="session")
def two_sink_automaton(two_sink_chain, two_sink_decomposition):
    return simulating_automaton(two_sink_chain, "basic", two_sink_decomposition)


@pytest.fixture(scope="session")
def contains_a(boolean):
    """Bottom-valued exactly on words containing the letter a."""
    return make_automaton(
        boolean,
        ("a", "b"),
        ("q0", "q1"),
        "q0",
        {"q0": {"a": "q1", "b": "q0"}, "q1": {"a": "q1", "b": "q1"}},
        {"q0": "1", "q1": "0"},
    )


@pytest.fixture(scope="session")
def empty_word_only(boolean):
    """Bottom-valued exactly on the empty word (complete machine with a sink)."""
    return make_automaton(
        boolean,
        ("a", "b"),
        ("q0", "sink"),
        "q0",
        {"q0": {"a": "sink", "b": "sink"}, "sink": {"a": "sink", "b": "sink"}},
        {"q0": "0", "sink": "1"},
    )


@pytest.fixture
def rng():
    return random.Random(20240811)
