"""Finite Markov chains with exact rational arithmetic.

A chain is decomposed into communicating classes; the closed ones are the
ergodic classes.  A convex decomposition of the transition matrix into
deterministic maps yields a simulating automaton whose letters carry the
decomposition weights, so random words reproduce the chain.  Absorption
probabilities come from an exact linear solve; floating point never enters
any computation, only report rendering.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .automaton import LatticeAutomaton, evaluate, make_automaton, word_name
from .errors import (
    BadFraction,
    MalformedDocument,
    MismatchedAlphabet,
    NegativeEntry,
    NoErgodicClass,
    NoInitial,
    RowSumNotOne,
    SingularSystem,
    UnknownElement,
)
from .lattice import Lattice, standard_lattice, subset_name
from .monoid import identity_is_greatest, is_aperiodic
from .syntactic import shuffle_ideal_falsify, syntactic

_FRACTION_RE = re.compile(r"^(-?\d+)(?:\s*/\s*(\d+))?$")

LETTER_PREFIX = "ℓ"  # generated decomposition letters


def parse_fraction(text: str | int) -> Fraction:
    """Parse an exact fraction from "p/q" or integer form."""
    if isinstance(text, bool):
        raise BadFraction(f"not a fraction: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    match = _FRACTION_RE.match(text.strip()) if isinstance(text, str) else None
    if not match:
        raise BadFraction(f"not a fraction: {text!r}")
    num = int(match.group(1))
    den = int(match.group(2)) if match.group(2) else 1
    if den == 0:
        raise BadFraction(f"zero denominator in {text!r}")
    return Fraction(num, den)


def fraction_str(value: Fraction) -> str:
    return str(value)


@dataclass(frozen=True, repr=False)
class MarkovChain:
    """A stochastic matrix over named states, entries as exact fractions."""

    states: tuple[str, ...]
    matrix: tuple[tuple[Fraction, ...], ...]

    def __repr__(self) -> str:
        return f"<MarkovChain {list(self.states)!r}>"

    @property
    def size(self) -> int:
        return len(self.states)

    def state(self, s: int | str) -> int:
        if isinstance(s, int) and not isinstance(s, bool):
            if 0 <= s < len(self.states):
                return s
            raise UnknownElement(f"state index {s} out of range")
        try:
            return self.states.index(s)
        except ValueError:
            raise UnknownElement(f"unknown state {s!r}") from None


def make_chain(states: Sequence[str], rows: Mapping[str, Mapping[str, str | int]]) -> MarkovChain:
    names = tuple(states)
    if not names or len(set(names)) != len(names):
        raise MalformedDocument("states must be a nonempty list of distinct names")
    index = {s: i for i, s in enumerate(names)}
    matrix = [[Fraction(0)] * len(names) for _ in names]
    for s, row in rows.items():
        if s not in index:
            raise UnknownElement(f"unknown state {s!r} in rows")
        for t, p in row.items():
            if t not in index:
                raise UnknownElement(f"unknown state {t!r} in row {s!r}")
            value = parse_fraction(p)
            if value < 0:
                raise NegativeEntry(
                    f"negative probability {p!r} at ({s!r}, {t!r})",
                    witness=[s, t, str(p)],
                )
            matrix[index[s]][index[t]] = value
    for i, s in enumerate(names):
        total = sum(matrix[i], Fraction(0))
        if total != 1:
            raise RowSumNotOne(
                f"row {s!r} sums to {total}", witness=[s, fraction_str(total)]
            )
    return MarkovChain(states=names, matrix=tuple(tuple(r) for r in matrix))


def load_chain(text: str) -> MarkovChain:
    """Parse a chain from JSON: {"states": [...], "rows": {s: {t: "p/q"}}}.

    Omitted entries are zero; every row must sum exactly to one.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "states" not in doc or "rows" not in doc:
        raise MalformedDocument('chain document needs "states" and "rows"')
    return make_chain(doc["states"], doc["rows"])


@dataclass(frozen=True)
class ErgodicStructure:
    """Communicating classes, their closedness, and the condensation order."""

    classes: tuple[tuple[int, ...], ...]
    ergodic: tuple[bool, ...]
    transient_states: tuple[int, ...]
    class_dag: tuple[tuple[int, int], ...]

    def ergodic_classes(self) -> list[tuple[int, ...]]:
        return [c for c, flag in zip(self.classes, self.ergodic) if flag]


def _strongly_connected_components(n: int, edges: list[list[int]]) -> list[list[int]]:
    """Iterative Tarjan; deterministic for a fixed adjacency order."""
    index_counter = 0
    stack: list[int] = []
    lowlink = [-1] * n
    order = [-1] * n
    on_stack = [False] * n
    components: list[list[int]] = []
    for root in range(n):
        if order[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                order[v] = lowlink[v] = index_counter
                index_counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            for i in range(pi, len(edges[v])):
                w = edges[v][i]
                if order[w] == -1:
                    work[-1] = (v, i + 1)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    lowlink[v] = min(lowlink[v], order[w])
            if advanced:
                continue
            if lowlink[v] == order[v]:
                component = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    component.append(w)
                    if w == v:
                        break
                components.append(sorted(component))
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
    return components


def ergodic_structure(chain: MarkovChain) -> ErgodicStructure:
    """Classes of the positive-probability digraph; ergodic = closed class."""
    n = chain.size
    edges = [
        [t for t in range(n) if chain.matrix[s][t] > 0] for s in range(n)
    ]
    components = _strongly_connected_components(n, edges)
    components.sort(key=min)
    class_of = [0] * n
    for c, members in enumerate(components):
        for s in members:
            class_of[s] = c
    dag = sorted(
        {
            (class_of[s], class_of[t])
            for s in range(n)
            for t in edges[s]
            if class_of[s] != class_of[t]
        }
    )
    outgoing = {c for c, _ in dag}
    ergodic = tuple(c not in outgoing for c in range(len(components)))
    transient = tuple(
        s for s in range(n) if not ergodic[class_of[s]]
    )
    return ErgodicStructure(
        classes=tuple(tuple(c) for c in components),
        ergodic=ergodic,
        transient_states=transient,
        class_dag=tuple(dag),
    )


@dataclass(frozen=True, repr=False)
class Decomposition:
    """Deterministic maps with positive weights summing to one.

    Summing weight * [map(s) = t] over the letters reproduces the transition
    matrix exactly.
    """

    letters: tuple[str, ...]
    maps: tuple[tuple[int, ...], ...]
    weights: tuple[Fraction, ...]

    def __repr__(self) -> str:
        return f"<Decomposition {list(self.letters)!r}>"


def validate_decomposition(chain: MarkovChain, decomposition: Decomposition) -> None:
    """Check the convex-reconstruction invariant exactly."""
    if len(set(decomposition.letters)) != len(decomposition.letters):
        raise MalformedDocument("decomposition letters must be distinct")
    if not decomposition.letters:
        raise MalformedDocument("decomposition needs at least one letter")
    if any(w <= 0 for w in decomposition.weights):
        raise NegativeEntry("decomposition weights must be positive")
    if sum(decomposition.weights, Fraction(0)) != 1:
        raise RowSumNotOne("decomposition weights must sum to one")
    n = chain.size
    for s in range(n):
        for t in range(n):
            total = sum(
                (
                    w
                    for mapping, w in zip(decomposition.maps, decomposition.weights)
                    if mapping[s] == t
                ),
                Fraction(0),
            )
            if total != chain.matrix[s][t]:
                raise MalformedDocument(
                    "decomposition does not reconstruct the chain",
                    witness=[
                        chain.states[s],
                        chain.states[t],
                        fraction_str(chain.matrix[s][t]),
                        fraction_str(total),
                    ],
                )


def decompose(chain: MarkovChain) -> Decomposition:
    """Greedy convex decomposition into deterministic maps.

    Each round picks, per state, the column with the largest residual (ties
    to the lowest index), uses the minimum of those residuals as the letter
    weight, and subtracts.  Rows keep equal residual mass, so the loop ends
    with an exact reconstruction in at most one step per nonzero entry.
    """
    n = chain.size
    residual = [list(row) for row in chain.matrix]
    letters: list[str] = []
    maps: list[tuple[int, ...]] = []
    weights: list[Fraction] = []
    while True:
        if all(v == 0 for row in residual for v in row):
            break
        picks = []
        for s in range(n):
            best = max(range(n), key=lambda t: (residual[s][t], -t))
            picks.append(best)
        weight = min(residual[s][picks[s]] for s in range(n))
        for s in range(n):
            residual[s][picks[s]] -= weight
        letters.append(f"{LETTER_PREFIX}{len(letters) + 1}")
        maps.append(tuple(picks))
        weights.append(weight)
    decomposition = Decomposition(
        letters=tuple(letters), maps=tuple(maps), weights=tuple(weights)
    )
    validate_decomposition(chain, decomposition)
    return decomposition


def ergodic_lattice(structure: ErgodicStructure) -> Lattice:
    """The powerset lattice of ergodic class indices {1..k}."""
    k = len(structure.ergodic_classes())
    if k == 0:
        raise NoErgodicClass("chain has no ergodic class")
    return standard_lattice("powerset", k)


def _reachable_sets(chain: MarkovChain, structure: ErgodicStructure) -> list[frozenset[int]]:
    """Per state, the 1-based indices of the ergodic classes it can reach."""
    n = chain.size
    edges = [
        [t for t in range(n) if chain.matrix[s][t] > 0] for s in range(n)
    ]
    ergodic_members: dict[int, int] = {}
    for i, members in enumerate(structure.ergodic_classes()):
        for s in members:
            ergodic_members[s] = i + 1
    result = []
    for s in range(n):
        seen = {s}
        queue = [s]
        while queue:
            q = queue.pop()
            for t in edges[q]:
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
        result.append(frozenset(ergodic_members[q] for q in seen if q in ergodic_members))
    return result


def simulating_automaton(
    chain: MarkovChain,
    mode: str = "basic",
    decomposition: Decomposition | None = None,
    initial: int | str | None = None,
) -> LatticeAutomaton:
    """The deterministic machine of a decomposition, colored by ergodic classes.

    Basic mode colors each ergodic class with its singleton and everything
    else with the full set; reachable mode colors every state with the set
    of ergodic classes it can reach, refining the transient states.
    """
    if mode not in ("basic", "reachable"):
        raise MalformedDocument(f"unknown coloring mode {mode!r}")
    structure = ergodic_structure(chain)
    lattice = ergodic_lattice(structure)
    if decomposition is None:
        decomposition = decompose(chain)
    else:
        validate_decomposition(chain, decomposition)
    if initial is None:
        if not chain.states:
            raise NoInitial("chain has no states")
        start = 0
    else:
        try:
            start = chain.state(initial)
        except UnknownElement as exc:
            raise NoInitial(f"unknown initial state {initial!r}") from exc
    if mode == "basic":
        class_index: dict[int, int] = {}
        for i, members in enumerate(structure.ergodic_classes()):
            for s in members:
                class_index[s] = i + 1
        colors = [
            subset_name([class_index[s]]) if s in class_index
            else lattice.elements[lattice.top]
            for s in range(chain.size)
        ]
    else:
        colors = [subset_name(r) for r in _reachable_sets(chain, structure)]
    delta = [
        [decomposition.maps[l][s] for l in range(len(decomposition.letters))]
        for s in range(chain.size)
    ]
    return make_automaton(
        lattice,
        decomposition.letters,
        chain.states,
        start,
        delta,
        colors,
    )


def _solve_exact(matrix: list[list[Fraction]], rhs: list[list[Fraction]]) -> list[list[Fraction]]:
    """Gaussian elimination over the rationals with multiple right-hand sides."""
    n = len(matrix)
    a = [row[:] for row in matrix]
    b = [row[:] for row in rhs]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise SingularSystem("absorption system is singular")
        a[col], a[pivot] = a[pivot], a[col]
        b[col], b[pivot] = b[pivot], b[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        b[col] = [v * inv for v in b[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [v - factor * w for v, w in zip(a[r], a[col])]
                b[r] = [v - factor * w for v, w in zip(b[r], b[col])]
    return b


def absorption_probabilities(chain: MarkovChain) -> dict[int, dict[str, Fraction]]:
    """Per ergodic class, the exact absorption probability from every state.

    States inside the class get 1, states of other ergodic classes 0, and
    transient states solve x = Pi x with boundary values, by exact rational
    elimination.
    """
    structure = ergodic_structure(chain)
    ergodic = structure.ergodic_classes()
    transient = list(structure.transient_states)
    t_index = {s: i for i, s in enumerate(transient)}
    k = len(transient)
    matrix = [
        [
            (Fraction(1) if i == j else Fraction(0)) - chain.matrix[s][transient[j]]
            for j in range(k)
        ]
        for i, s in enumerate(transient)
    ]
    rhs = [
        [
            sum((chain.matrix[s][t] for t in members), Fraction(0))
            for members in ergodic
        ]
        for s in transient
    ]
    solved = _solve_exact(matrix, rhs) if transient else []
    result: dict[int, dict[str, Fraction]] = {}
    for c, members in enumerate(ergodic):
        member_set = set(members)
        per_state: dict[str, Fraction] = {}
        for s in range(chain.size):
            if s in member_set:
                per_state[chain.states[s]] = Fraction(1)
            elif s in t_index:
                per_state[chain.states[s]] = solved[t_index[s]][c]
            else:
                per_state[chain.states[s]] = Fraction(0)
        result[c] = per_state
    return result


def word_measure(
    a: LatticeAutomaton, decomposition: Decomposition, n: int
) -> dict[int, Fraction]:
    """Exact distribution of the language value over random words of length n.

    Letters are drawn independently with the decomposition weights; the
    state distribution is propagated n steps, never enumerating words.
    """
    if a.alphabet != decomposition.letters:
        raise MismatchedAlphabet(
            "automaton letters differ from the decomposition letters"
        )
    dist = [Fraction(0)] * len(a.states)
    dist[a.initial] = Fraction(1)
    for _ in range(n):
        nxt = [Fraction(0)] * len(a.states)
        for s, mass in enumerate(dist):
            if mass == 0:
                continue
            for l, weight in enumerate(decomposition.weights):
                nxt[a.delta[s][l]] += mass * weight
        dist = nxt
    masses: dict[int, Fraction] = {}
    for s, mass in enumerate(dist):
        if mass != 0:
            masses[a.output[s]] = masses.get(a.output[s], Fraction(0)) + mass
    return masses


def analyze(
    chain: MarkovChain,
    *,
    decomposition: Decomposition | None = None,
    initial: int | str | None = None,
    horizon: int = 8,
    falsify_bound: int = 6,
    mode: str = "basic",
) -> dict:
    """Full ergodic-class report: structure, decomposition, simulating machines,
    syntactic analysis with shuffle verdict and witness, absorption, measures.

    Both coloring modes appear in the report; ``mode`` picks the language
    that drives the syntactic, shuffle, and word-measure sections.  The
    report is a plain JSON-ready dict with deterministic content.
    """
    from .serialize import automaton_to_doc, decomposition_to_doc, monoid_to_doc

    structure = ergodic_structure(chain)
    if decomposition is None:
        decomposition = decompose(chain)
    else:
        validate_decomposition(chain, decomposition)
    basic = simulating_automaton(chain, "basic", decomposition, initial)
    reachable = simulating_automaton(chain, "reachable", decomposition, initial)
    if mode not in ("basic", "reachable"):
        raise MalformedDocument(f"unknown coloring mode {mode!r}")
    analyzed = basic if mode == "basic" else reachable
    synt = syntactic(analyzed)
    falsifier = shuffle_ideal_falsify(analyzed, falsify_bound)
    absorption = absorption_probabilities(chain)
    ergodic = structure.ergodic_classes()
    masses = word_measure(analyzed, decomposition, horizon)
    return {
        "states": list(chain.states),
        "initial": basic.states[basic.initial],
        "mode": mode,
        "classes": [
            {
                "states": [chain.states[s] for s in members],
                "ergodic": bool(flag),
            }
            for members, flag in zip(structure.classes, structure.ergodic)
        ],
        "transient_states": [chain.states[s] for s in structure.transient_states],
        "class_dag": [list(edge) for edge in structure.class_dag],
        "decomposition": decomposition_to_doc(decomposition, chain),
        "automaton_basic": automaton_to_doc(basic),
        "automaton_reachable": automaton_to_doc(reachable),
        "syntactic": {
            "size": synt.monoid.size,
            "order": [list(p) for p in synt.monoid.order_pairs()],
            "monoid": monoid_to_doc(synt.monoid),
            "aperiodic": is_aperiodic(synt.monoid),
            "identity_is_greatest": identity_is_greatest(synt.monoid),
        },
        "shuffle": {
            "algebraic": identity_is_greatest(synt.monoid),
            "bound": falsify_bound,
            "falsifier": None
            if falsifier is None
            else {
                "subword": word_name(falsifier[0]),
                "superword": word_name(falsifier[1]),
                "value_subword": analyzed.lattice.elements[evaluate(analyzed, falsifier[0])],
                "value_superword": analyzed.lattice.elements[evaluate(analyzed, falsifier[1])],
            },
        },
        "absorption": {
            f"C{c + 1}": {
                state: fraction_str(p) for state, p in sorted(per_state.items())
            }
            for c, per_state in absorption.items()
        },
        "word_measure": {
            "horizon": horizon,
            "masses": {
                analyzed.lattice.elements[e]: fraction_str(m)
                for e, m in sorted(masses.items())
            },
        },
    }
