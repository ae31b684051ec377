"""Lattice-valued regular languages as complete deterministic Moore machines.

A language maps words to lattice elements; it is represented by a complete
DFA whose states carry lattice outputs.  Partial automata are rejected at
construction rather than completed silently.  All machines are immutable
and all operations are pure.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from .errors import (
    MalformedDocument,
    MismatchedAlphabet,
    MismatchedLattice,
    SizeCapExceeded,
    UnknownElement,
    UnknownLetter,
)
from .lattice import Lattice, LatticeMorphism

COMBINE_STATE_CAP = 200_000

Word = tuple[str, ...]


def parse_word(word: str | Sequence[str], alphabet: Sequence[str]) -> Word:
    """Normalize a word to a tuple of letters.

    Strings are split per character, which requires every alphabet letter to
    be a single character; multi-character alphabets must use list form.
    """
    letters = set(alphabet)
    if isinstance(word, str):
        if word and not all(len(a) == 1 for a in alphabet):
            raise UnknownLetter(
                "string words need a single-character alphabet; use list form"
            )
        parts = tuple(word)
    else:
        parts = tuple(word)
    for a in parts:
        if a not in letters:
            raise UnknownLetter(f"unknown letter {a!r}", witness=a)
    return parts


def word_name(word: Word) -> str:
    """Presentation of a word: letters joined, or the empty-word symbol."""
    if not word:
        return "ε"
    if all(len(a) == 1 for a in word):
        return "".join(word)
    return "·".join(word)


@dataclass(frozen=True, repr=False)
class FreeMorphism:
    """A word homomorphism determined by letter images."""

    source_alphabet: tuple[str, ...]
    target_alphabet: tuple[str, ...]
    images: tuple[Word, ...]

    def __repr__(self) -> str:
        pairs = [f"{a}->{word_name(w)}" for a, w in zip(self.source_alphabet, self.images)]
        return f"<FreeMorphism {pairs!r}>"

    def apply(self, word: str | Sequence[str]) -> Word:
        parts = parse_word(word, self.source_alphabet)
        out: list[str] = []
        lookup = {a: img for a, img in zip(self.source_alphabet, self.images)}
        for a in parts:
            out.extend(lookup[a])
        return tuple(out)


def make_free_morphism(
    source_alphabet: Sequence[str],
    target_alphabet: Sequence[str],
    images: Mapping[str, str | Sequence[str]],
) -> FreeMorphism:
    source = tuple(source_alphabet)
    target = tuple(target_alphabet)
    missing = [a for a in source if a not in images]
    if missing:
        raise MalformedDocument(f"morphism misses letters {missing!r}")
    img = tuple(parse_word(images[a], target) for a in source)
    return FreeMorphism(source_alphabet=source, target_alphabet=target, images=img)


@dataclass(frozen=True, repr=False)
class LatticeAutomaton:
    """A complete deterministic Moore machine with lattice-valued outputs."""

    lattice: Lattice
    alphabet: tuple[str, ...]
    states: tuple[str, ...]
    initial: int
    delta: tuple[tuple[int, ...], ...]  # delta[state][letter] -> state
    output: tuple[int, ...]  # state -> lattice element

    def __repr__(self) -> str:
        return (
            f"<LatticeAutomaton {len(self.states)} states over "
            f"{list(self.alphabet)!r}>"
        )

    @cached_property
    def _letter_index(self) -> dict[str, int]:
        return {a: i for i, a in enumerate(self.alphabet)}

    @cached_property
    def _state_index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.states)}

    def letter(self, a: str) -> int:
        idx = self._letter_index.get(a)
        if idx is None:
            raise UnknownLetter(f"unknown letter {a!r}", witness=a)
        return idx

    def state(self, s: int | str) -> int:
        if isinstance(s, int) and not isinstance(s, bool):
            if 0 <= s < len(self.states):
                return s
            raise UnknownElement(f"state index {s} out of range")
        idx = self._state_index.get(s)
        if idx is None:
            raise UnknownElement(f"unknown state {s!r}")
        return idx

    def run(self, word: str | Sequence[str], start: int | None = None) -> int:
        """The state reached from ``start`` (default: initial) on ``word``."""
        q = self.initial if start is None else start
        for a in parse_word(word, self.alphabet):
            q = self.delta[q][self._letter_index[a]]
        return q


def make_automaton(
    lattice: Lattice,
    alphabet: Sequence[str],
    states: Sequence[str],
    initial: int | str,
    delta: Mapping[str, Mapping[str, str]] | Sequence[Sequence[int | str]],
    output: Mapping[str, int | str] | Sequence[int | str],
) -> LatticeAutomaton:
    """Validate a complete deterministic lattice automaton."""
    letters = tuple(alphabet)
    if len(set(letters)) != len(letters) or not letters:
        raise MalformedDocument("alphabet must be a nonempty list of distinct letters")
    names = tuple(states)
    if len(set(names)) != len(names) or not names:
        raise MalformedDocument("states must be a nonempty list of distinct names")
    state_index = {s: i for i, s in enumerate(names)}

    def resolve_state(s: int | str) -> int:
        if isinstance(s, int) and not isinstance(s, bool):
            if 0 <= s < len(names):
                return s
            raise UnknownElement(f"state index {s} out of range")
        if s in state_index:
            return state_index[s]
        raise UnknownElement(f"unknown state {s!r}")

    table: list[list[int]] = []
    if isinstance(delta, Mapping):
        for s in names:
            row_map = delta.get(s)
            if row_map is None:
                raise MalformedDocument(
                    f"partial automaton: no transitions for state {s!r}", witness=s
                )
            row = []
            for a in letters:
                if a not in row_map:
                    raise MalformedDocument(
                        f"partial automaton: no transition for ({s!r}, {a!r})",
                        witness=[s, a],
                    )
                row.append(resolve_state(row_map[a]))
            for a in row_map:
                if a not in set(letters):
                    raise UnknownLetter(f"unknown letter {a!r} in delta", witness=a)
            table.append(row)
    else:
        if len(delta) != len(names) or any(len(r) != len(letters) for r in delta):
            raise MalformedDocument("delta table must be states x alphabet")
        table = [[resolve_state(t) for t in row] for row in delta]

    if isinstance(output, Mapping):
        missing = [s for s in names if s not in output]
        if missing:
            raise MalformedDocument(f"output misses states {missing!r}")
        values = [lattice.index(output[s]) for s in names]
    else:
        if len(output) != len(names):
            raise MalformedDocument("output has the wrong length")
        values = [lattice.index(v) for v in output]

    return LatticeAutomaton(
        lattice=lattice,
        alphabet=letters,
        states=names,
        initial=resolve_state(initial),
        delta=tuple(tuple(row) for row in table),
        output=tuple(values),
    )


def constant_automaton(lattice: Lattice, alphabet: Sequence[str], value: int | str) -> LatticeAutomaton:
    """The one-state machine of the constant language."""
    letters = tuple(alphabet)
    return make_automaton(
        lattice, letters, ("q0",), "q0",
        [[0] * len(letters)], [lattice.index(value)],
    )


def evaluate(a: LatticeAutomaton, word: str | Sequence[str]) -> int:
    """The language value of a word: output of the state reached from the start."""
    return a.output[a.run(word)]


def product_combine(kind: str, a1: LatticeAutomaton, a2: LatticeAutomaton) -> LatticeAutomaton:
    """Join or meet of two languages via the product machine."""
    if a1.alphabet != a2.alphabet:
        raise MismatchedAlphabet("automata use different alphabets")
    if a1.lattice != a2.lattice:
        raise MismatchedLattice("automata use different lattices")
    if kind == "join":
        table = a1.lattice.join_table
    elif kind == "meet":
        table = a1.lattice.meet_table
    else:
        raise MalformedDocument(f"unknown combination kind {kind!r}")
    pairs = list(itertools.product(range(len(a1.states)), range(len(a2.states))))
    index = {p: i for i, p in enumerate(pairs)}
    names = tuple(f"({a1.states[p]},{a2.states[q]})" for p, q in pairs)
    n_letters = len(a1.alphabet)
    delta = tuple(
        tuple(index[(a1.delta[p][l], a2.delta[q][l])] for l in range(n_letters))
        for p, q in pairs
    )
    output = tuple(table[a1.output[p]][a2.output[q]] for p, q in pairs)
    return LatticeAutomaton(
        lattice=a1.lattice,
        alphabet=a1.alphabet,
        states=names,
        initial=index[(a1.initial, a2.initial)],
        delta=delta,
        output=output,
    )


def combine_many(kind: str, automata: Sequence[LatticeAutomaton]) -> LatticeAutomaton:
    """Join or meet of several languages over the reachable synchronized product.

    Only states reachable from the joint start are materialized, which keeps
    wide combinations (e.g. one piece per monoid element) tractable.
    """
    if not automata:
        raise MalformedDocument("combine_many needs at least one automaton")
    first = automata[0]
    if any(a.alphabet != first.alphabet for a in automata):
        raise MismatchedAlphabet("automata use different alphabets")
    if any(a.lattice != first.lattice for a in automata):
        raise MismatchedLattice("automata use different lattices")
    if kind == "join":
        fold = first.lattice.join_all
    elif kind == "meet":
        fold = first.lattice.meet_all
    else:
        raise MalformedDocument(f"unknown combination kind {kind!r}")
    start = tuple(a.initial for a in automata)
    order: list[tuple[int, ...]] = [start]
    index = {start: 0}
    queue = deque([start])
    n_letters = len(first.alphabet)
    delta_rows = []
    while queue:
        combo = queue.popleft()
        row = []
        for l in range(n_letters):
            nxt = tuple(a.delta[q][l] for a, q in zip(automata, combo))
            if nxt not in index:
                if len(order) >= COMBINE_STATE_CAP:
                    raise SizeCapExceeded("combined automaton exceeds the state cap")
                index[nxt] = len(order)
                order.append(nxt)
                queue.append(nxt)
            row.append(index[nxt])
        delta_rows.append(row)
    names = tuple(
        "(" + ",".join(a.states[q] for a, q in zip(automata, combo)) + ")"
        for combo in order
    )
    output = tuple(
        fold(a.output[q] for a, q in zip(automata, combo)) for combo in order
    )
    return LatticeAutomaton(
        lattice=first.lattice,
        alphabet=first.alphabet,
        states=names,
        initial=0,
        delta=tuple(tuple(row) for row in delta_rows),
        output=output,
    )


def quotient(side: str, a: LatticeAutomaton, u: str | Sequence[str]) -> LatticeAutomaton:
    """Word quotient: left moves the start by u, right recolors by the u-successor."""
    word = parse_word(u, a.alphabet)
    if side == "left":
        return LatticeAutomaton(
            lattice=a.lattice,
            alphabet=a.alphabet,
            states=a.states,
            initial=a.run(word),
            delta=a.delta,
            output=a.output,
        )
    if side == "right":
        output = tuple(a.output[a.run(word, start=q)] for q in range(len(a.states)))
        return LatticeAutomaton(
            lattice=a.lattice,
            alphabet=a.alphabet,
            states=a.states,
            initial=a.initial,
            delta=a.delta,
            output=output,
        )
    raise MalformedDocument(f"unknown quotient side {side!r}")


def inverse_hom(a: LatticeAutomaton, h: FreeMorphism) -> LatticeAutomaton:
    """The language L∘h: transitions follow the letter images of h."""
    if h.target_alphabet != a.alphabet:
        raise MismatchedAlphabet("morphism target alphabet differs from the automaton's")
    delta = tuple(
        tuple(a.run(img, start=q) for img in h.images) for q in range(len(a.states))
    )
    return LatticeAutomaton(
        lattice=a.lattice,
        alphabet=h.source_alphabet,
        states=a.states,
        initial=a.initial,
        delta=delta,
        output=a.output,
    )


def recolor(a: LatticeAutomaton, alpha: LatticeMorphism) -> LatticeAutomaton:
    """Post-compose the output with a monotone self-map of the lattice."""
    if alpha.lattice != a.lattice:
        raise MismatchedLattice("morphism lattice differs from the automaton's")
    return LatticeAutomaton(
        lattice=a.lattice,
        alphabet=a.alphabet,
        states=a.states,
        initial=a.initial,
        delta=a.delta,
        output=tuple(alpha.mapping[v] for v in a.output),
    )


def trim(a: LatticeAutomaton) -> LatticeAutomaton:
    """Restrict to the states reachable from the start, keeping their order."""
    reachable = {a.initial}
    queue = deque([a.initial])
    while queue:
        q = queue.popleft()
        for t in a.delta[q]:
            if t not in reachable:
                reachable.add(t)
                queue.append(t)
    keep = sorted(reachable)
    if len(keep) == len(a.states):
        return a
    remap = {old: new for new, old in enumerate(keep)}
    return LatticeAutomaton(
        lattice=a.lattice,
        alphabet=a.alphabet,
        states=tuple(a.states[q] for q in keep),
        initial=remap[a.initial],
        delta=tuple(tuple(remap[t] for t in a.delta[q]) for q in keep),
        output=tuple(a.output[q] for q in keep),
    )


def minimize(a: LatticeAutomaton) -> LatticeAutomaton:
    """Reachable-trim, then coarsest partition refinement on output values.

    The result is the minimal complete machine for the language; each block
    is named after its least member state.
    """
    a = trim(a)
    n = len(a.states)
    block: list[int] = []
    seen: dict[int, int] = {}
    for q in range(n):
        v = a.output[q]
        if v not in seen:
            seen[v] = len(seen)
        block.append(seen[v])
    n_letters = len(a.alphabet)
    while True:
        sigs: dict[tuple, int] = {}
        new_block = []
        for q in range(n):
            sig = (block[q],) + tuple(block[a.delta[q][l]] for l in range(n_letters))
            if sig not in sigs:
                sigs[sig] = len(sigs)
            new_block.append(sigs[sig])
        if len(sigs) == len(set(block)):
            block = new_block
            break
        block = new_block
    members: dict[int, list[int]] = {}
    for q in range(n):
        members.setdefault(block[q], []).append(q)
    reps = sorted(min(qs) for qs in members.values())
    block_id = {block[rep]: i for i, rep in enumerate(reps)}
    names = tuple(a.states[rep] for rep in reps)
    delta = tuple(
        tuple(block_id[block[a.delta[rep][l]]] for l in range(n_letters))
        for rep in reps
    )
    output = tuple(a.output[rep] for rep in reps)
    return LatticeAutomaton(
        lattice=a.lattice,
        alphabet=a.alphabet,
        states=names,
        initial=block_id[block[a.initial]],
        delta=delta,
        output=output,
    )


def find_difference(a1: LatticeAutomaton, a2: LatticeAutomaton) -> Word | None:
    """The shortest word on which the two languages differ, or None.

    Decided exactly by breadth-first search over the reachable synchronous
    product, letters in alphabet order.
    """
    if a1.alphabet != a2.alphabet:
        raise MismatchedAlphabet("automata use different alphabets")
    if a1.lattice != a2.lattice:
        raise MismatchedLattice("automata use different lattices")
    start = (a1.initial, a2.initial)
    parents: dict[tuple[int, int], tuple[tuple[int, int], int] | None] = {start: None}
    queue = deque([start])
    n_letters = len(a1.alphabet)

    def word_of(pair: tuple[int, int]) -> Word:
        letters: list[str] = []
        cursor = parents[pair]
        while cursor is not None:
            prev, l = cursor
            letters.append(a1.alphabet[l])
            cursor = parents[prev]
        return tuple(reversed(letters))

    while queue:
        p, q = queue.popleft()
        if a1.output[p] != a2.output[q]:
            return word_of((p, q))
        for l in range(n_letters):
            nxt = (a1.delta[p][l], a2.delta[q][l])
            if nxt not in parents:
                parents[nxt] = ((p, q), l)
                queue.append(nxt)
    return None


def equivalent(a1: LatticeAutomaton, a2: LatticeAutomaton) -> bool:
    """True iff the two machines define the same language."""
    return find_difference(a1, a2) is None
