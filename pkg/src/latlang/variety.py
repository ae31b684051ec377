"""Enumeration of small ordered monoids and the instance-level verification harness.

The variety correspondence is verified through its finite ingredients: the
ideal-representation identity on products of syntactic monoids, minimality
of the syntactic monoid under division, and the subdirect embedding of a
monoid into the product of the syntactic monoids of its element languages.
Each check produces a replayable report rather than raising.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .automaton import (
    LatticeAutomaton,
    constant_automaton,
    equivalent,
    find_difference,
    make_automaton,
    recolor,
    word_name,
)
from .coloring import (
    OpColoring,
    ideal_coloring,
    make_op_coloring,
    product_coloring,
)
from .errors import LatlangError, MismatchedCarrier, NotARecognizer, SizeCapExceeded
from .lattice import Lattice, build_lattice, cons as cons_morphism, standard_lattice
from .monoid import (
    DivisionBudget,
    OrderedMonoid,
    _make_unchecked,
    canonical_key,
    direct_product,
    divides,
    identity_monoid_morphism,
    product_index,
)
from .syntactic import (
    RecognitionTriple,
    SyntacticResult,
    recognizes,
    syntactic,
    triple_to_automaton,
)

ENUMERATION_MAX_N = 4


# -- enumeration -----------------------------------------------------------

@lru_cache(maxsize=None)
def _partial_orders(n: int) -> tuple[tuple[tuple[bool, ...], ...], ...]:
    """All partial orders on n labeled points, as boolean matrices."""
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    orders = []
    for mask in range(2 ** len(pairs)):
        leq = [[i == j for j in range(n)] for i in range(n)]
        for k, (i, j) in enumerate(pairs):
            if mask >> k & 1:
                leq[i][j] = True
        ok = True
        for i in range(n):
            for j in range(n):
                if i != j and leq[i][j] and leq[j][i]:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        for i in range(n):
            for j in range(n):
                if not leq[i][j]:
                    continue
                for k in range(n):
                    if leq[j][k] and not leq[i][k]:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            orders.append(tuple(tuple(row) for row in leq))
    return tuple(orders)


def _unital_associative_tables(n: int):
    """All associative multiplication tables with the identity at index 0."""
    free = [(i, j) for i in range(1, n) for j in range(1, n)]
    for values in itertools.product(range(n), repeat=len(free)):
        mul = [[0] * n for _ in range(n)]
        for j in range(n):
            mul[0][j] = j
        for i in range(n):
            mul[i][0] = i
        for (i, j), v in zip(free, values):
            mul[i][j] = v
        ok = True
        for x in range(1, n):
            row_x = mul[x]
            for y in range(1, n):
                xy = row_x[y]
                row_xy = mul[xy]
                row_y = mul[y]
                for z in range(1, n):
                    if row_xy[z] != row_x[row_y[z]]:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            yield mul


def _compatible(n: int, mul, leq) -> bool:
    for x in range(n):
        for y in range(n):
            if x == y or not leq[x][y]:
                continue
            for z in range(n):
                if not leq[mul[z][x]][mul[z][y]]:
                    return False
                if not leq[mul[x][z]][mul[y][z]]:
                    return False
    return True


def enumerate_ordered_monoids(n: int, *, max_n: int = ENUMERATION_MAX_N) -> list[OrderedMonoid]:
    """All ordered monoids on n elements up to isomorphism.

    Tables are enumerated with the identity fixed at index 0 (every monoid
    is isomorphic to one of that form), paired with every compatible partial
    order, and deduplicated by the minimal relabeled serialization.
    """
    if n < 1 or n > max_n:
        raise SizeCapExceeded(f"enumeration supports 1 <= n <= {max_n}, got {n}")
    names = tuple(f"m{i}" for i in range(n))
    found: dict[tuple, OrderedMonoid] = {}
    for mul in _unital_associative_tables(n):
        for leq in _partial_orders(n):
            if not _compatible(n, mul, leq):
                continue
            monoid = _make_unchecked(names, 0, mul, leq)
            key = canonical_key(monoid)
            if key not in found:
                found[key] = monoid
    return [found[key] for key in sorted(found)]


# -- seeded random instances -------------------------------------------------

def random_lattice(rng: random.Random, max_size: int = 8) -> Lattice:
    """A random lattice: graded poset with forced bottom/top, covers drawn
    between consecutive grades, rejection-sampled until the lub/glb test passes.
    """
    for _ in range(2000):
        n = rng.randint(2, max_size)
        names = [f"v{i}" for i in range(n)]
        if n == 2:
            return build_lattice(names, [(0, 1)])
        middles = list(range(1, n - 1))
        grade_count = rng.randint(1, len(middles))
        levels: list[list[int]] = [[0]] + [[] for _ in range(grade_count)] + [[n - 1]]
        for v in middles:
            levels[rng.randint(1, grade_count)].append(v)
        levels = [level for level in levels if level]
        covers: list[tuple[int, int]] = []
        for upper_i in range(1, len(levels)):
            prev, here = levels[upper_i - 1], levels[upper_i]
            covered = set()
            for v in here:
                lower = [u for u in prev if rng.random() < 0.5]
                if not lower:
                    lower = [prev[rng.randrange(len(prev))]]
                for u in lower:
                    covers.append((u, v))
                    covered.add(u)
            for u in prev:
                if u not in covered:
                    covers.append((u, here[rng.randrange(len(here))]))
        try:
            return build_lattice(names, covers)
        except LatlangError:
            continue
    return standard_lattice("chain", max(2, min(max_size, 3)))


def random_automaton(
    rng: random.Random,
    lattice: Lattice,
    max_states: int = 4,
    alphabet: Sequence[str] = ("a", "b"),
    min_states: int = 1,
) -> LatticeAutomaton:
    """Uniform over total transition tables and output assignments."""
    n = rng.randint(min_states, max_states)
    states = [f"q{i}" for i in range(n)]
    delta = [[rng.randrange(n) for _ in alphabet] for _ in range(n)]
    output = [rng.randrange(lattice.size) for _ in range(n)]
    return make_automaton(lattice, tuple(alphabet), states, 0, delta, output)


def random_coloring(rng: random.Random, monoid: OrderedMonoid, lattice: Lattice) -> OpColoring:
    """Uniform colors repaired upward until order-preserving."""
    colors = [rng.randrange(lattice.size) for _ in range(monoid.size)]
    changed = True
    while changed:
        changed = False
        for a in range(monoid.size):
            for b in range(monoid.size):
                if a != b and monoid.leq[a][b]:
                    joined = lattice.join_table[colors[b]][colors[a]]
                    if joined != colors[b]:
                        colors[b] = joined
                        changed = True
    return make_op_coloring(monoid, lattice, colors)


# -- reports ------------------------------------------------------------------

@dataclass(frozen=True)
class VerificationReport:
    check: str
    instance: dict
    verdict: str  # "pass" | "fail" | "budget_exhausted"
    witness: dict | None = None

    def to_doc(self) -> dict:
        return {
            "check": self.check,
            "instance": self.instance,
            "verdict": self.verdict,
            "witness": self.witness,
        }


def _components_of(product: OrderedMonoid, factors: Sequence[OrderedMonoid]) -> list[tuple[int, ...]]:
    """Component tuples of the product's elements, in element order."""
    combos = list(itertools.product(*(range(m.size) for m in factors)))
    if len(combos) != product.size:
        raise MismatchedCarrier("monoid is not the expected direct product")
    return combos


def verify_recog_by_synt(
    automata: Sequence[LatticeAutomaton], triple: RecognitionTriple
) -> VerificationReport:
    """Check the product-of-syntactic-monoids recognition identities.

    (a) The ideal language of each product element equals the join of the
    per-factor ideal languages pulled back through the projections;
    (b) the triple's language equals the meet over elements of its ideal
    language joined with the constant color.  Both checked by automaton
    equivalence.
    """
    from .serialize import automaton_to_doc, triple_to_doc

    synts = [syntactic(a) for a in automata]
    factors = [s.monoid for s in synts]
    product, _ = direct_product(factors)
    if product != triple.monoid:
        raise MismatchedCarrier(
            "triple's monoid is not the product of the syntactic monoids"
        )
    lat = triple.coloring.lattice
    combos = _components_of(product, factors)
    instance = {
        "factor_sizes": [m.size for m in factors],
        "lattice": list(lat.elements),
    }

    def fail(which: str, m_index: int, word) -> VerificationReport:
        return VerificationReport(
            check="recog_by_synt",
            instance=instance,
            verdict="fail",
            witness={
                "identity": which,
                "element": product.elements[m_index],
                "word": word_name(word),
                "triple": triple_to_doc(triple),
                "automata": [automaton_to_doc(a) for a in automata],
            },
        )

    for m in range(product.size):
        lhs = triple_to_automaton(
            RecognitionTriple(
                triple.alphabet, triple.generator_images, product,
                ideal_coloring(product, m, lat),
            )
        )
        rhs_colors = [
            lat.join_all(
                lat.bottom
                if factors[i].leq[combos[x][i]][combos[m][i]]
                else lat.top
                for i in range(len(factors))
            )
            for x in range(product.size)
        ]
        rhs = triple_to_automaton(
            RecognitionTriple(
                triple.alphabet, triple.generator_images, product,
                make_op_coloring(product, lat, rhs_colors),
            )
        )
        diff = find_difference(lhs, rhs)
        if diff is not None:
            return fail("join_of_projections", m, diff)

    combo_colors = [
        lat.meet_all(
            lat.join_table[
                lat.bottom if product.leq[x][m] else lat.top
            ][triple.coloring.colors[m]]
            for m in range(product.size)
        )
        for x in range(product.size)
    ]
    rebuilt = triple_to_automaton(
        RecognitionTriple(
            triple.alphabet, triple.generator_images, product,
            make_op_coloring(product, lat, combo_colors),
        )
    )
    diff = find_difference(triple_to_automaton(triple), rebuilt)
    if diff is not None:
        return fail("ideal_representation", -1, diff)
    return VerificationReport("recog_by_synt", instance, "pass")


def verify_syntactic_minimality(
    a: LatticeAutomaton,
    triple: RecognitionTriple,
    budget: DivisionBudget | None = None,
) -> VerificationReport:
    """The syntactic monoid must divide the monoid of any recognizer."""
    from .serialize import automaton_to_doc, triple_to_doc

    if not recognizes(triple, a):
        raise NotARecognizer("triple does not recognize the automaton's language")
    synt = syntactic(a)
    verdict = divides(synt.monoid, triple.monoid, budget)
    instance = {
        "syntactic_size": synt.monoid.size,
        "recognizer_size": triple.monoid.size,
    }
    if verdict.kind == "yes":
        return VerificationReport(
            "syntactic_minimality", instance, "pass",
            witness={"generators": list(verdict.generators or ())},
        )
    if verdict.kind == "budget_exhausted":
        return VerificationReport("syntactic_minimality", instance, "budget_exhausted")
    return VerificationReport(
        "syntactic_minimality", instance, "fail",
        witness={
            "automaton": automaton_to_doc(a),
            "triple": triple_to_doc(triple),
        },
    )


def subdirect_embedding(monoid: OrderedMonoid, *, max_size: int = 64) -> VerificationReport:
    """Embed a monoid into the product of the syntactic monoids of its
    element languages (one ideal language per element, over the monoid's
    own elements as the alphabet).

    Passes iff the induced map is multiplicative, injective, and an order
    embedding in both directions.
    """
    from .serialize import monoid_to_doc

    if monoid.size > max_size:
        raise SizeCapExceeded(f"subdirect embedding capped at {max_size} elements")
    lat = standard_lattice("chain", 2)
    identity = identity_monoid_morphism(monoid)
    synts: list[SyntacticResult] = []
    for m in range(monoid.size):
        machine = triple_to_automaton(
            RecognitionTriple(
                alphabet=monoid.elements,
                generator_images=identity.mapping,
                monoid=monoid,
                coloring=ideal_coloring(monoid, m, lat),
            )
        )
        synts.append(syntactic(machine))
    phi = [tuple(s.generator_images[x] for s in synts) for x in range(monoid.size)]
    instance = {
        "monoid": monoid_to_doc(monoid),
        "factor_sizes": [s.monoid.size for s in synts],
    }

    def fail(reason: str, witness: dict) -> VerificationReport:
        witness = dict(witness)
        witness["reason"] = reason
        return VerificationReport("subdirect_embedding", instance, "fail", witness)

    identity_image = tuple(s.monoid.identity for s in synts)
    if phi[monoid.identity] != identity_image:
        return fail("identity", {"element": monoid.elements[monoid.identity]})
    for x in range(monoid.size):
        for y in range(monoid.size):
            expected = tuple(
                s.monoid.mul[phi[x][i]][phi[y][i]] for i, s in enumerate(synts)
            )
            if phi[monoid.mul[x][y]] != expected:
                return fail(
                    "multiplicative",
                    {"pair": [monoid.elements[x], monoid.elements[y]]},
                )
            embedded_le = all(
                s.monoid.leq[phi[x][i]][phi[y][i]] for i, s in enumerate(synts)
            )
            if embedded_le != monoid.leq[x][y]:
                return fail(
                    "order_embedding",
                    {"pair": [monoid.elements[x], monoid.elements[y]]},
                )
    if len(set(phi)) != monoid.size:
        return fail("injective", {})
    return VerificationReport("subdirect_embedding", instance, "pass")


# -- the suite -----------------------------------------------------------------

@dataclass(frozen=True)
class SuiteSizes:
    lattice_max: int = 5
    states_max: int = 3
    recog_instances: int = 3
    minimality_instances: int = 4
    subdirect_max_n: int = 2
    product_cap: int = 200


def _cons_b_report(lattice: Lattice) -> VerificationReport:
    """The two constant languages at bottom and top are not closed under
    lattice self-maps once a third value exists: recoloring with a middle
    constant leaves the class."""
    alphabet = ("a",)
    members = [
        constant_automaton(lattice, alphabet, lattice.bottom),
        constant_automaton(lattice, alphabet, lattice.top),
    ]
    middle = next(
        v for v in range(lattice.size) if v not in (lattice.bottom, lattice.top)
    )
    produced = recolor(members[1], cons_morphism(lattice, middle))
    escaped = all(not equivalent(produced, m) for m in members)
    instance = {"lattice": list(lattice.elements), "middle": lattice.elements[middle]}
    if escaped:
        return VerificationReport("cons_b_not_closed", instance, "pass")
    return VerificationReport(
        "cons_b_not_closed", instance, "fail",
        witness={"middle": lattice.elements[middle]},
    )


def _join_recognizer(
    s1: SyntacticResult, s2: SyntacticResult
) -> RecognitionTriple:
    """The product recognizer of the join of two languages."""
    product, _ = direct_product([s1.monoid, s2.monoid])
    sizes = [s1.monoid.size, s2.monoid.size]
    images = tuple(
        product_index(sizes, (g1, g2))
        for g1, g2 in zip(s1.generator_images, s2.generator_images)
    )
    coloring = product_coloring("pjoin", [s1.coloring, s2.coloring])
    return RecognitionTriple(
        alphabet=s1.alphabet,
        generator_images=images,
        monoid=product,
        coloring=coloring,
    )


def run_suite(seed: int = 0, sizes: SuiteSizes | None = None) -> list[VerificationReport]:
    """Deterministic verification sweep; failures are reports, not exceptions."""
    sizes = sizes or SuiteSizes()
    rng = random.Random(seed)
    reports: list[VerificationReport] = []

    reports.append(_cons_b_report(standard_lattice("chain", 3)))

    for i in range(sizes.recog_instances):
        for _ in range(50):
            lattice = random_lattice(rng, sizes.lattice_max)
            a1 = random_automaton(rng, lattice, sizes.states_max)
            a2 = random_automaton(rng, lattice, sizes.states_max)
            s1, s2 = syntactic(a1), syntactic(a2)
            if s1.monoid.size * s2.monoid.size <= sizes.product_cap:
                break
        triple = _join_recognizer(s1, s2)
        report = verify_recog_by_synt([a1, a2], triple)
        report = VerificationReport(
            report.check,
            {**report.instance, "seed": seed, "index": i},
            report.verdict,
            report.witness,
        )
        reports.append(report)

    pool = enumerate_ordered_monoids(2) + enumerate_ordered_monoids(3)
    for i in range(sizes.minimality_instances):
        monoid = pool[rng.randrange(len(pool))]
        lattice = random_lattice(rng, sizes.lattice_max)
        coloring = random_coloring(rng, monoid, lattice)
        images = tuple(rng.randrange(monoid.size) for _ in ("a", "b"))
        triple = RecognitionTriple(("a", "b"), images, monoid, coloring)
        machine = triple_to_automaton(triple)
        report = verify_syntactic_minimality(machine, triple)
        report = VerificationReport(
            report.check,
            {**report.instance, "seed": seed, "index": i},
            report.verdict,
            report.witness,
        )
        reports.append(report)

    for n in range(1, sizes.subdirect_max_n + 1):
        for monoid in enumerate_ordered_monoids(n):
            reports.append(subdirect_embedding(monoid))

    return reports
