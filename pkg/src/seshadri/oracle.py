"""Independent finite-field brute-force checks.

Everything here avoids the Groebner machinery on purpose: lines through
the base point are found by enumerating all directions over F_q and
restricting generators to the parametrized line directly; conics come from
a randomized search; plane-curve multiplicities read off the lowest form
after translating the point to the affine origin.

Direction enumeration is partitioned across workers and merged in sorted
order, so the result is independent of the worker count.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from . import linalg
from .polynomials import (
    BadReductionError,
    Polynomial,
    PolynomialRing,
    PrimeField,
    compose,
    substitute_linear,
)

DEFAULT_PRIMES = (7, 11, 13)


@dataclass(frozen=True)
class ModularInstance:
    """Generators and base point of a pointed variety reduced mod q."""

    prime: int
    ring: PolynomialRing
    generators: tuple
    point: tuple

    def __post_init__(self):
        field = self.ring.field
        if not isinstance(field, PrimeField) or field.q != self.prime:
            raise ValueError("ring field must be the prime field of the instance")
        if all(field.is_zero(x) for x in self.point):
            raise BadReductionError("base point reduces to zero")
        for g in self.generators:
            if not field.is_zero(g.evaluate(self.point)):
                raise BadReductionError("a generator misses the reduced point")


def modular_instance(X, q):
    """Reduce a pointed variety mod q; raises BadReductionError on bad primes."""
    field = PrimeField(q)
    ring = X.ring.with_field(field)
    gens = tuple(
        ring.from_terms(((m.exponents, c) for m, c in g.terms))
        for g in X.ideal.generators
    )
    point = tuple(field.coerce(x) for x in X.point)
    return ModularInstance(prime=q, ring=ring, generators=gens, point=point)


def _directions(point, nvars, q):
    """Representatives of lines through the point: pivot coordinate zero,
    first nonzero coordinate one, in lexicographic order."""
    pivot = next(i for i, x in enumerate(point) if x % q != 0)
    free = [i for i in range(nvars) if i != pivot]
    total = len(free)
    for lead in range(total):
        tail = total - lead - 1
        for packed in range(q ** tail):
            coords = [0] * nvars
            coords[free[lead]] = 1
            rest = packed
            for k in range(tail - 1, -1, -1):
                coords[free[lead + 1 + k]] = rest % q
                rest //= q
            yield tuple(coords)


def _binomials(n):
    row = [1]
    for _ in range(n):
        row = [1] + [row[i] + row[i + 1] for i in range(len(row) - 1)] + [1]
    return row


def _line_vanishes(g, point, direction, q):
    """Whether g(s*point + t*direction) is the zero polynomial in (s, t)."""
    degree = g.total_degree()
    coeffs = [0] * (degree + 1)
    for mono, c in g.terms:
        term = [c]
        for i, e in enumerate(mono.exponents):
            if not e:
                continue
            p_i = point[i] % q
            v_i = direction[i] % q
            binom = _binomials(e)
            factor = [
                binom[j] * pow(p_i, e - j, q) * pow(v_i, j, q) % q for j in range(e + 1)
            ]
            term = _convolve(term, factor, q)
        for k, value in enumerate(term):
            coeffs[k] = (coeffs[k] + value) % q
    return all(v == 0 for v in coeffs)


def _convolve(a, b, q):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % q
    return out


@dataclass(frozen=True)
class LineCount:
    count: int
    directions: tuple
    exhaustive: bool = True


# full enumeration is O(q^(N-1)); beyond this many directions the caller
# must lower q or opt into heuristic sampling
ENUMERATION_LIMIT = 2_000_000


def count_lines_mod_q(instance, workers=1, sample=None, seed=0):
    """Count of lines on X through the point over F_q.

    Enumerates every direction of the projective space of lines through
    the point and keeps those on which all generators restrict to the zero
    polynomial; returns the count and the sorted direction list.  When
    `sample` is given, only that many random directions are tried and the
    result is marked non-exhaustive (a heuristic, never a proof of
    absence).
    """
    q = instance.prime
    gens = instance.generators
    point = instance.point
    nvars = instance.ring.nvars
    total = sum(q ** k for k in range(nvars - 1))
    if sample is None and total > ENUMERATION_LIMIT:
        raise ValueError(
            f"{total} directions exceed the enumeration limit; lower q or "
            "pass sample= to accept a heuristic search"
        )
    if sample is not None and sample < total:
        exhaustive = False
        pivot = next(i for i, x in enumerate(point) if x % q != 0)
        rng = random.Random(seed)
        seen = set()
        while len(seen) < sample:
            coords = [rng.randrange(q) for _ in range(nvars)]
            coords[pivot] = 0
            lead = next((i for i, x in enumerate(coords) if x), None)
            if lead is None:
                continue
            inv = pow(coords[lead], -1, q)
            seen.add(tuple(x * inv % q for x in coords))
        candidates = sorted(seen)
    else:
        exhaustive = True
        candidates = list(_directions(point, nvars, q))

    def scan(chunk):
        found = []
        for v in chunk:
            if all(_line_vanishes(g, point, v, q) for g in gens):
                found.append(v)
        return found

    if workers <= 1:
        hits = scan(candidates)
    else:
        size = (len(candidates) + workers - 1) // workers
        chunks = [candidates[i : i + size] for i in range(0, len(candidates), size)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(scan, chunks))
        hits = [v for part in parts for v in part]
    hits.sort()
    return LineCount(count=len(hits), directions=tuple(hits), exhaustive=exhaustive)


@dataclass(frozen=True)
class ConicSearchResult:
    """Witness (point, tangent, curvature) for p + t*v + t^2*w, or NOT_FOUND.

    NOT_FOUND is inconclusive and never downgrades a classification; it
    only annotates reports.
    """

    found: bool
    witness: tuple | None
    attempts: int

    @property
    def inconclusive(self):
        return not self.found


def _rank(vectors, field):
    rows, _ = linalg.rref([list(v) for v in vectors], field)
    return len(rows)


def find_conic_mod_q(instance, budget=200, seed=0):
    """Randomized search for a conic on X through the point over F_q.

    Draws tangent directions from the Jacobian kernel at the point, solves
    the linear part of the curvature constraints, fills the free choices at
    random, and keeps a draw only if every restriction coefficient
    vanishes and the three defining vectors are independent.
    """
    q = instance.prime
    field = instance.ring.field
    nvars = instance.ring.nvars
    point = list(instance.point)
    gens = instance.generators
    gradient = [
        [g.derivative(i).evaluate(point) for i in range(nvars)] for g in gens
    ]
    if gradient:
        solved = linalg.solve_affine(gradient, [0] * len(gens), field)
        if solved is None:
            return ConicSearchResult(False, None, 0)
        _, tangent_basis = solved
    else:
        tangent_basis = [list(row) for row in linalg.identity(nvars, field)]
    if not tangent_basis:
        return ConicSearchResult(False, None, 0)

    w_ring = PolynomialRing(
        tuple(f"w{i}" for i in range(nvars)) + ("t",), field
    )
    t = w_ring.variable(nvars)
    rng = random.Random(seed)

    for attempt in range(1, budget + 1):
        v = [0] * nvars
        for vec in tangent_basis:
            c = rng.randrange(q)
            v = [(a + c * b) % q for a, b in zip(v, vec)]
        if all(x == 0 for x in v) or _rank([point, v], field) < 2:
            continue
        images = [
            w_ring.constant(point[i]) + t.scale(v[i]) + (t * t) * w_ring.variable(i)
            for i in range(nvars)
        ]
        linear_rows = []
        linear_rhs = []
        higher = []
        for g in gens:
            restricted = compose(g, images)
            buckets = {}
            for mono, c in restricted.terms:
                k = mono.exponents[nvars]
                buckets.setdefault(k, []).append(
                    (mono.exponents[:nvars] + (0,), c)
                )
            for k, terms in buckets.items():
                piece = w_ring.from_terms(terms)
                if piece.total_degree() <= 1:
                    row = [piece.coefficient(tuple(1 if j == i else 0 for j in range(nvars)) + (0,)) for i in range(nvars)]
                    const = piece.coefficient((0,) * (nvars + 1))
                    linear_rows.append(row)
                    linear_rhs.append(field.neg(const))
                else:
                    higher.append(piece)
        if linear_rows:
            solved = linalg.solve_affine(linear_rows, linear_rhs, field)
            if solved is None:
                continue
            particular, free_basis = solved
        else:
            particular = [0] * nvars
            free_basis = [list(row) for row in linalg.identity(nvars, field)]
        w = list(particular)
        for vec in free_basis:
            c = rng.randrange(q)
            w = [(a + c * b) % q for a, b in zip(w, vec)]
        if _rank([point, v, w], field) < 3:
            continue
        w_point = [field.coerce(x) for x in w] + [0]
        if all(field.is_zero(h.evaluate(w_point)) for h in higher):
            witness = (tuple(point), tuple(v), tuple(w))
            return ConicSearchResult(True, witness, attempt)
    return ConicSearchResult(False, None, budget)


def lowest_form_mult(plane_curve, point):
    """Multiplicity of a plane curve at a point via the lowest form.

    Translates the point to the affine origin and returns the minimal total
    degree among the surviving terms.  Independent of the Groebner-based
    multiplicity machinery.
    """
    ring = plane_curve.ring
    if ring.nvars != 3:
        raise ValueError("plane curves live in three homogeneous variables")
    field = ring.field
    point = [field.coerce(x) for x in point]
    if not field.is_zero(plane_curve.evaluate(point)):
        raise ValueError("point does not lie on the curve")
    pivot = next(i for i, x in enumerate(point) if not field.is_zero(x))
    basis = [[field.zero] * 3 for _ in range(3)]
    for i in range(3):
        basis[i][pivot] = point[i]
    col = 0
    for j in range(3):
        if j == pivot:
            continue
        while col == pivot:
            col += 1
        basis[j][col] = field.one
        col += 1
    shifted = substitute_linear(plane_curve, basis)
    lowest = None
    for mono, _ in shifted.terms:
        affine_degree = mono.degree - mono.exponents[pivot]
        if lowest is None or affine_degree < lowest:
            lowest = affine_degree
    return lowest
