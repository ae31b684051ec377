"""Finite lattices: validated order structure, join/meet tables, monotone self-maps.

A lattice is built from Hasse covers (or a full relation) and validated:
the reflexive-transitive closure must be a partial order and every pair of
elements must have a unique least upper bound and greatest lower bound.
Element identity is the positional index; names are presentation only.
All values are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import (
    MalformedDocument,
    MismatchedLattice,
    NotALattice,
    NotAntisymmetric,
    NotOrderPreserving,
    SizeCapExceeded,
    SizeOutOfRange,
    TrivialLattice,
    UnknownElement,
)

DEFAULT_MAX_SIZE = 64


def _transitive_reflexive_closure(matrix: list[list[bool]]) -> None:
    """Close a relation matrix reflexively and transitively, in place."""
    n = len(matrix)
    for i in range(n):
        matrix[i][i] = True
    for k in range(n):
        row_k = matrix[k]
        for i in range(n):
            if matrix[i][k]:
                row_i = matrix[i]
                for j in range(n):
                    if row_k[j]:
                        row_i[j] = True


def _check_names(element_names: Sequence[str]) -> tuple[str, ...]:
    names = tuple(element_names)
    if not all(isinstance(name, str) for name in names):
        raise MalformedDocument("element names must be strings")
    if len(set(names)) != len(names):
        raise MalformedDocument("element names must be distinct")
    return names


@dataclass(frozen=True, repr=False)
class Lattice:
    """A finite lattice with its order matrix and join/meet tables."""

    elements: tuple[str, ...]
    leq: tuple[tuple[bool, ...], ...]
    join_table: tuple[tuple[int, ...], ...]
    meet_table: tuple[tuple[int, ...], ...]
    top: int
    bottom: int

    def __repr__(self) -> str:
        return f"<Lattice {list(self.elements)!r}>"

    @cached_property
    def _name_index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.elements)}

    @property
    def size(self) -> int:
        return len(self.elements)

    def index(self, element: int | str) -> int:
        """Resolve an element given by index or name."""
        if isinstance(element, bool):
            raise UnknownElement(f"not a lattice element: {element!r}")
        if isinstance(element, int):
            if 0 <= element < len(self.elements):
                return element
            raise UnknownElement(f"lattice element index {element} out of range")
        idx = self._name_index.get(element)
        if idx is None:
            raise UnknownElement(f"unknown lattice element {element!r}")
        return idx

    def name(self, index: int) -> str:
        return self.elements[index]

    def le(self, a: int | str, b: int | str) -> bool:
        return self.leq[self.index(a)][self.index(b)]

    def join(self, a: int | str, b: int | str) -> int:
        return self.join_table[self.index(a)][self.index(b)]

    def meet(self, a: int | str, b: int | str) -> int:
        return self.meet_table[self.index(a)][self.index(b)]

    def join_all(self, elements: Iterable[int | str]) -> int:
        """Join of a (possibly empty) subset; the empty join is bottom."""
        acc = self.bottom
        for e in elements:
            acc = self.join_table[acc][self.index(e)]
        return acc

    def meet_all(self, elements: Iterable[int | str]) -> int:
        """Meet of a (possibly empty) subset; the empty meet is top."""
        acc = self.top
        for e in elements:
            acc = self.meet_table[acc][self.index(e)]
        return acc


def build_lattice(
    element_names: Sequence[str],
    pairs: Iterable[Sequence[int | str]],
    *,
    relation: str = "cover",
    max_size: int = DEFAULT_MAX_SIZE,
) -> Lattice:
    """Build and validate a lattice from Hasse covers or a full order relation.

    ``pairs`` lists [lo, hi] entries; with ``relation="cover"`` they are Hasse
    covers, with ``relation="full"`` an arbitrary set of order pairs.  Either
    way the reflexive-transitive closure is taken, then antisymmetry and the
    existence of unique binary lubs/glbs are checked.
    """
    if relation not in ("cover", "full"):
        raise MalformedDocument(f"unknown relation kind {relation!r}")
    names = _check_names(element_names)
    n = len(names)
    if n == 0:
        raise TrivialLattice("a lattice needs at least two elements")
    if n > max_size:
        raise SizeCapExceeded(f"lattice size {n} exceeds cap {max_size}")

    index = {name: i for i, name in enumerate(names)}

    def resolve(e: int | str) -> int:
        if isinstance(e, int) and not isinstance(e, bool):
            if 0 <= e < n:
                return e
            raise UnknownElement(f"lattice element index {e} out of range")
        if e in index:
            return index[e]
        raise UnknownElement(f"unknown lattice element {e!r}")

    leq = [[False] * n for _ in range(n)]
    for pair in pairs:
        lo, hi = pair
        leq[resolve(lo)][resolve(hi)] = True
    _transitive_reflexive_closure(leq)

    for i in range(n):
        for j in range(i + 1, n):
            if leq[i][j] and leq[j][i]:
                raise NotAntisymmetric(
                    f"{names[i]!r} and {names[j]!r} are mutually comparable",
                    witness=[names[i], names[j]],
                )

    if n == 1:
        raise TrivialLattice("bottom equals top in a one-element lattice")

    uppers = [frozenset(c for c in range(n) if leq[a][c]) for a in range(n)]
    lowers = [frozenset(c for c in range(n) if leq[c][a]) for a in range(n)]

    join_table = [[0] * n for _ in range(n)]
    meet_table = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            common_up = sorted(uppers[a] & uppers[b])
            minimal = [c for c in common_up
                       if not any(d != c and leq[d][c] for d in common_up)]
            if len(minimal) != 1:
                raise NotALattice(
                    f"{names[a]!r} and {names[b]!r} have no unique least upper bound",
                    witness={"pair": [names[a], names[b]], "bound": "join",
                             "candidates": [names[c] for c in minimal]},
                )
            join_table[a][b] = join_table[b][a] = minimal[0]
            common_down = sorted(lowers[a] & lowers[b])
            maximal = [c for c in common_down
                       if not any(d != c and leq[c][d] for d in common_down)]
            if len(maximal) != 1:
                raise NotALattice(
                    f"{names[a]!r} and {names[b]!r} have no unique greatest lower bound",
                    witness={"pair": [names[a], names[b]], "bound": "meet",
                             "candidates": [names[c] for c in maximal]},
                )
            meet_table[a][b] = meet_table[b][a] = maximal[0]

    top = 0
    bottom = 0
    for e in range(1, n):
        top = join_table[top][e]
        bottom = meet_table[bottom][e]

    return Lattice(
        elements=names,
        leq=tuple(tuple(row) for row in leq),
        join_table=tuple(tuple(row) for row in join_table),
        meet_table=tuple(tuple(row) for row in meet_table),
        top=top,
        bottom=bottom,
    )


def subset_name(members: Iterable[int]) -> str:
    """Canonical name of a powerset-lattice element, e.g. ``{1,3}``."""
    return "{" + ",".join(str(m) for m in sorted(members)) + "}"


def standard_lattice(kind: str, n: int = 2, *, max_size: int = DEFAULT_MAX_SIZE) -> Lattice:
    """Build a canonical lattice: ``powerset``, ``chain``, or ``boolean``.

    Powerset elements are named as sorted subsets of {1..n}; chain elements
    are named "0".."n-1".  ``boolean`` ignores ``n`` and is the 2-chain.
    """
    if kind == "powerset":
        if n < 1:
            raise SizeOutOfRange(f"powerset lattice needs n >= 1, got {n}")
        if 2 ** n > max_size:
            raise SizeOutOfRange(f"powerset of {n} exceeds the size cap {max_size}")
        subsets = []
        for mask in range(2 ** n):
            members = tuple(i + 1 for i in range(n) if mask >> i & 1)
            subsets.append(members)
        subsets.sort(key=lambda s: (len(s), s))
        names = [subset_name(s) for s in subsets]
        pairs = []
        for i, small in enumerate(subsets):
            for j, big in enumerate(subsets):
                if set(small) <= set(big):
                    pairs.append((i, j))
        return build_lattice(names, pairs, relation="full", max_size=max_size)
    if kind == "chain":
        if n < 2:
            raise SizeOutOfRange(f"chain lattice needs n >= 2, got {n}")
        if n > max_size:
            raise SizeOutOfRange(f"chain of {n} exceeds the size cap {max_size}")
        names = [str(i) for i in range(n)]
        covers = [(i, i + 1) for i in range(n - 1)]
        return build_lattice(names, covers, max_size=max_size)
    if kind == "boolean":
        return standard_lattice("chain", 2, max_size=max_size)
    raise MalformedDocument(f"unknown standard lattice kind {kind!r}")


def bound(lattice: Lattice, kind: str, subset: Iterable[int | str]) -> int:
    """Join or meet of an arbitrary subset (empty join = bottom, empty meet = top)."""
    if kind == "join":
        return lattice.join_all(subset)
    if kind == "meet":
        return lattice.meet_all(subset)
    raise MalformedDocument(f"unknown bound kind {kind!r}")


def dual(lattice: Lattice) -> Lattice:
    """The dual lattice: order reversed, join and meet swapped."""
    n = lattice.size
    leq = tuple(tuple(lattice.leq[j][i] for j in range(n)) for i in range(n))
    return Lattice(
        elements=lattice.elements,
        leq=leq,
        join_table=lattice.meet_table,
        meet_table=lattice.join_table,
        top=lattice.bottom,
        bottom=lattice.top,
    )


@dataclass(frozen=True, repr=False)
class LatticeMorphism:
    """An order-preserving self-map of a lattice."""

    lattice: Lattice
    mapping: tuple[int, ...]

    def __repr__(self) -> str:
        images = [self.lattice.elements[i] for i in self.mapping]
        return f"<LatticeMorphism {images!r}>"

    def __call__(self, element: int | str) -> int:
        return self.mapping[self.lattice.index(element)]

    def then(self, other: "LatticeMorphism") -> "LatticeMorphism":
        """Composition: apply this map first, then ``other``."""
        if other.lattice != self.lattice:
            raise MismatchedLattice("morphisms live on different lattices")
        return make_lattice_morphism(
            self.lattice, [other.mapping[v] for v in self.mapping]
        )


def make_lattice_morphism(
    lattice: Lattice, mapping: Mapping[str, int | str] | Sequence[int | str]
) -> LatticeMorphism:
    """Validate an order-preserving self-map given as a dict or a sequence."""
    if isinstance(mapping, Mapping):
        missing = [e for e in lattice.elements if e not in mapping]
        if missing:
            raise MalformedDocument(f"morphism mapping misses elements {missing!r}")
        images = tuple(lattice.index(mapping[e]) for e in lattice.elements)
    else:
        if len(mapping) != lattice.size:
            raise MalformedDocument("morphism mapping has the wrong length")
        images = tuple(lattice.index(v) for v in mapping)
    for a in range(lattice.size):
        for b in range(lattice.size):
            if lattice.leq[a][b] and not lattice.leq[images[a]][images[b]]:
                raise NotOrderPreserving(
                    f"{lattice.elements[a]!r} <= {lattice.elements[b]!r} but images are not ordered",
                    witness={
                        "pair": [lattice.elements[a], lattice.elements[b]],
                        "images": [lattice.elements[images[a]], lattice.elements[images[b]]],
                    },
                )
    return LatticeMorphism(lattice=lattice, mapping=images)


def cons(lattice: Lattice, value: int | str) -> LatticeMorphism:
    """The constant morphism sending every element to ``value``."""
    v = lattice.index(value)
    return LatticeMorphism(lattice=lattice, mapping=tuple(v for _ in lattice.elements))


def identity_morphism(lattice: Lattice) -> LatticeMorphism:
    return LatticeMorphism(lattice=lattice, mapping=tuple(range(lattice.size)))


def threshold(lattice: Lattice, pivot: int | str) -> LatticeMorphism:
    """The two-valued morphism: bottom on the downward closure of ``pivot``, top above.

    Always order-preserving: anything below an element below the pivot is
    itself below the pivot.
    """
    p = lattice.index(pivot)
    mapping = tuple(
        lattice.bottom if lattice.leq[x][p] else lattice.top
        for x in range(lattice.size)
    )
    return LatticeMorphism(lattice=lattice, mapping=mapping)
