"""Pointed-variety constructions: normalization of the base point, slice
decompositions, the scheme of lines through the point, the local cut-out
degree, and the local invariants mult_p and ord_p.

A pointed variety carries a saturated homogeneous ideal together with an
invertible coordinate change sending the base point to [1:0:...:0].  All
local computations happen in the normalized chart x_0 = 1, where the
quotient by (ideal + m^m) is supported at the origin alone, so truncated
quotients compute local-ring data exactly, with no localization correction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import gcd

from . import linalg
from .groebner import (
    HilbertData,
    Ideal,
    graded_piece,
    hilbert_data,
    ideal_quotient,
    saturate,
    saturate_variable,
    monomials_of_degree,
    _choose,
)
from .polynomials import Monomial, Polynomial, PolynomialRing, QQ, substitute_linear

INFINITE = math.inf


class PointError(ValueError):
    """The base point is invalid for the requested construction."""


class StabilizationError(RuntimeError):
    """A truncation cap was exhausted before the invariant stabilized."""


def slice_ring(ring):
    """The ring in x_1..x_N: directions of lines through the base point."""
    return PolynomialRing(ring.names[1:], ring.field)


@dataclass(frozen=True)
class SliceDecomposition:
    """f = sum of x_0^(d-i) * f^i with f^i of degree i in the last variables."""

    source: Polynomial
    slices: tuple  # entry i-1 is f^i, living in the slice ring

    def reassemble(self):
        return self._weighted_sum(len(self.slices))

    def truncated(self, upto):
        """The degree-`upto` combination x0^(upto-1) f^1 + ... + f^upto."""
        return self._weighted_sum(upto)

    def _weighted_sum(self, upto):
        ring = self.source.ring
        total = ring.zero()
        shift = {k: k + 1 for k in range(ring.nvars - 1)}
        for i, piece in enumerate(self.slices[:upto], start=1):
            if piece.is_zero():
                continue
            lifted = piece.map_ring(ring, shift)
            x0_power = Monomial((upto - i,) + (0,) * (ring.nvars - 1))
            total = total + lifted.mul_term(ring.field.one, x0_power)
        return total


def slice_decomposition(f):
    """Decompose a homogeneous f vanishing at [1:0:...:0] by x_0 powers."""
    if f.is_zero():
        raise ValueError("zero polynomial has no slice decomposition")
    if not f.is_homogeneous():
        raise ValueError("slice decomposition needs a homogeneous polynomial")
    ring = f.ring
    d = f.total_degree()
    target = slice_ring(ring)
    buckets = [[] for _ in range(d + 1)]
    for mono, coeff in f.terms:
        rest_degree = mono.degree - mono.exponents[0]
        if rest_degree == 0:
            raise ValueError("polynomial does not vanish at the base point")
        buckets[rest_degree].append((mono.exponents[1:], coeff))
    slices = tuple(target.from_terms(buckets[i]) for i in range(1, d + 1))
    return SliceDecomposition(f, slices)


@dataclass(frozen=True)
class LineScheme:
    """Scheme of lines through the base point, inside P^(N-1) of directions."""

    ideal: Ideal
    hilbert: HilbertData

    @property
    def dimension(self):
        return self.hilbert.dimension

    @property
    def is_empty(self):
        return self.hilbert.is_empty


class PointedVariety:
    """A projective scheme with a chosen point, normalized to [1:0:...:0]."""

    __slots__ = (
        "ring",
        "ideal",
        "point",
        "basis_matrix",
        "transform",
        "normalized_ideal",
        "_hilbert",
        "_line_scheme",
        "_affine",
        "_affine_ideal",
        "_truncations",
    )

    def __init__(self, ring, ideal, point, basis_matrix, transform, normalized_ideal):
        self.ring = ring
        self.ideal = ideal
        self.point = tuple(point)
        self.basis_matrix = basis_matrix
        self.transform = transform
        self.normalized_ideal = normalized_ideal
        self._hilbert = None
        self._line_scheme = None
        self._affine = None
        self._affine_ideal = None
        self._truncations = {}

    @property
    def ambient_dimension(self):
        return self.ring.nvars - 1

    @property
    def hilbert(self):
        if self._hilbert is None:
            self._hilbert = hilbert_data(self.normalized_ideal)
        return self._hilbert

    @property
    def dimension(self):
        return self.hilbert.dimension

    @property
    def degree(self):
        return self.hilbert.degree

    def normalized_point(self):
        field = self.ring.field
        return (field.one,) + (field.zero,) * (self.ring.nvars - 1)

    def affine_generators(self):
        """Normalized generators with x_0 = 1, in the chart ring x_1..x_N."""
        if self._affine is None:
            target = slice_ring(self.ring)
            out = []
            for g in self.normalized_ideal.generators:
                terms = [(m.exponents[1:], c) for m, c in g.terms]
                out.append(target.from_terms(terms))
            self._affine = tuple(out)
        return self._affine

    def affine_ideal(self):
        if self._affine_ideal is None:
            gens = [g for g in self.affine_generators() if g]
            ring = gens[0].ring if gens else slice_ring(self.ring)
            self._affine_ideal = Ideal(ring, gens)
        return self._affine_ideal

    def _truncation(self, cap):
        if cap not in self._truncations:
            self._truncations[cap] = _Truncation(
                self.affine_generators(), slice_ring(self.ring), cap
            )
        return self._truncations[cap]

    def __repr__(self):
        return f"PointedVariety(point={self.point}, ideal={self.ideal})"


def normalize_point(ideal, point):
    """Attach a base point, moving it to [1:0:...:0] by a coordinate change.

    The change of basis pivots on the first nonzero coordinate of the point
    and appends the complementary standard basis vectors.
    """
    ring = ideal.ring
    field = ring.field
    point = tuple(field.coerce(x) for x in point)
    if len(point) != ring.nvars:
        raise PointError("point length does not match the ambient dimension")
    if all(field.is_zero(x) for x in point):
        raise PointError("the zero vector is not a projective point")
    for g in ideal.generators:
        if not field.is_zero(g.evaluate(point)):
            raise PointError("point does not lie on the variety")
    n = ring.nvars
    pivot = next(i for i in range(n) if not field.is_zero(point[i]))
    is_e0 = pivot == 0 and all(field.is_zero(point[i]) for i in range(1, n))
    if is_e0:
        identity = linalg.identity(n, field)
        return PointedVariety(ring, ideal, point, identity, identity, ideal)
    basis = [[field.zero] * n for _ in range(n)]
    for i in range(n):
        basis[i][0] = point[i]
    col = 1
    for j in range(n):
        if j == pivot:
            continue
        basis[j][col] = field.one
        col += 1
    transform = linalg.invert(basis, field)
    normalized = Ideal(
        ring, [substitute_linear(g, basis).primitive() for g in ideal.generators]
    )
    return PointedVariety(ring, ideal, point, basis, transform, normalized)


def line_scheme(X, local_gens=None):
    """The scheme of lines on X through the base point, defined by all slices.

    `local_gens`, when given, must define X near the point in normalized
    coordinates; the default uses the full saturated generator set, which
    always qualifies.
    """
    default = local_gens is None
    if default and X._line_scheme is not None:
        return X._line_scheme
    gens = X.normalized_ideal.generators if default else local_gens
    target = slice_ring(X.ring)
    slices = []
    for g in gens:
        slices.extend(s for s in slice_decomposition(g).slices if s)
    scheme_ideal = Ideal(target, slices)
    scheme = LineScheme(scheme_ideal, hilbert_data(scheme_ideal))
    if default:
        X._line_scheme = scheme
    return scheme


def cone_ideal(Z, ambient_ring=None):
    """Generators of Z reinterpreted in the full ring: the cone with vertex
    [1:0:...:0] over the direction scheme Z."""
    if not Z.is_homogeneous:
        raise ValueError("cone needs a homogeneous ideal of directions")
    source = Z.ring
    if ambient_ring is None:
        vertex_name = "x0"
        while vertex_name in source.names:
            vertex_name += "_"
        ambient_ring = PolynomialRing((vertex_name,) + source.names, source.field)
    if ambient_ring.names[1:] != source.names:
        raise ValueError("ambient ring does not extend the direction ring")
    shift = {i: i + 1 for i in range(source.nvars)}
    return Ideal(ambient_ring, [g.map_ring(ambient_ring, shift) for g in Z.generators])


def cut_out_degree(X, validate=False):
    """The least d at which degree-d members of the ideal cut X out at p.

    Degree d qualifies when the quotient of the degree-d subideal by the
    full ideal has a generator not vanishing at the point; the loop is
    bounded by the degree of X.
    """
    I = X.normalized_ideal
    ring = X.ring
    if validate:
        irrelevant = Ideal(ring, ring.variables())
        if not saturate(I, irrelevant).equals(I):
            raise ValueError("ideal is not saturated")
    if X.hilbert.is_empty:
        raise ValueError("variety is empty")
    bound = X.degree
    e0 = X.normalized_point()
    field = ring.field
    for d in range(1, bound + 1):
        piece = graded_piece(I, d) if I.generators else []
        J = Ideal(ring, piece)
        if all(J.contains(g) for g in I.generators):
            # J contains the whole ideal, so the quotient is the unit ideal
            return d
        quotient = ideal_quotient(J, I)
        if any(not field.is_zero(g.evaluate(e0)) for g in quotient.generators):
            return d
    raise RuntimeError("cut-out degree exceeded the degree bound")


def supported_only_at_basepoint(K):
    """Whether V(K) = {[1:0:...:0]} as sets, for homogeneous K containing it.

    Saturating by each coordinate x_i (i >= 1) removes whatever sits inside
    V(x_i); the residue is empty for every i exactly when no point other
    than the base point survives.
    """
    hd = hilbert_data(K)
    if hd.dimension > 0:
        return False
    if hd.is_empty:
        return False
    for var in range(1, K.ring.nvars):
        residue = saturate_variable(K, var)
        if not hilbert_data(residue).is_empty:
            return False
    return True


def _det(matrix):
    if len(matrix) == 1:
        return matrix[0][0]
    ring = matrix[0][0].ring
    total = ring.zero()
    for col in range(len(matrix)):
        entry = matrix[0][col]
        if entry.is_zero():
            continue
        minor = [row[:col] + row[col + 1 :] for row in matrix[1:]]
        piece = entry * _det(minor)
        total = total + piece if col % 2 == 0 else total - piece
    return total


def singular_locus_is_empty(X):
    """Jacobian criterion: no point of X drops the expected Jacobian rank.

    Optional validation helper; the singular locus is cut out by the ideal
    together with the codimension-sized minors of the Jacobian matrix.
    """
    from itertools import combinations

    gens = X.normalized_ideal.generators
    if not gens:
        return True
    ring = X.ring
    codim = X.ambient_dimension - X.dimension
    if codim <= 0:
        return True
    jacobian = [[g.derivative(i) for i in range(ring.nvars)] for g in gens]
    minors = []
    for rows in combinations(range(len(gens)), min(codim, len(gens))):
        for cols in combinations(range(ring.nvars), min(codim, len(gens))):
            minors.append(_det([[jacobian[r][c] for c in cols] for r in rows]))
    K = Ideal(ring, list(gens) + [m for m in minors if m])
    return hilbert_data(K).is_empty


# -- truncated local quotients ----------------------------------------------------


def _integer_rows(poly):
    """Clear denominators: (exponents -> int) dict, content removed."""
    den = 1
    for _, c in poly.terms:
        den = den * c.denominator // gcd(den, c.denominator)
    entries = {m: int(c * den) for m, c in poly.terms}
    content = 0
    for v in entries.values():
        content = gcd(content, abs(v))
    if content > 1:
        entries = {m: v // content for m, v in entries.items()}
    return entries


class _Truncation:
    """Row-echelon model of (ideal + m^cap) inside Q[x]/m^cap.

    Columns are monomials of degree < cap sorted by increasing degree, so a
    row's pivot is its lowest-order form; truncating the model at any level
    m <= cap stays exact.
    """

    def __init__(self, gens, ring, cap):
        if ring.field != QQ:
            raise ValueError("truncated quotients are computed over Q")
        self.ring = ring
        self.cap = cap
        monos = []
        for d in range(cap):
            monos.extend(Monomial(e) for e in monomials_of_degree(ring.nvars, d))
        self.monos = monos
        self.index = {m: i for i, m in enumerate(monos)}
        self.degrees = [m.degree for m in monos]
        self.pivots = {}
        rows = []
        for g in gens:
            if not g:
                continue
            base = _integer_rows(g)
            low = min(m.degree for m in base)
            for t_degree in range(cap - low):
                for exps in monomials_of_degree(ring.nvars, t_degree):
                    t = Monomial(exps)
                    row = {}
                    for m, v in base.items():
                        prod = t * m
                        if prod.degree < cap:
                            row[self.index[prod]] = v
                    if row:
                        rows.append(row)
        rows.sort(key=lambda r: min(r))
        for row in rows:
            self._insert(row)

    def _insert(self, row):
        while row:
            lead = min(row)
            pivot = self.pivots.get(lead)
            if pivot is None:
                content = 0
                for v in row.values():
                    content = gcd(content, abs(v))
                if content > 1:
                    row = {k: v // content for k, v in row.items()}
                self.pivots[lead] = row
                return
            row = _eliminate(row, pivot, lead)

    def hilbert_samuel(self, m):
        """dim of R/(ideal + m^m) for 1 <= m <= cap."""
        total = _choose(m - 1 + self.ring.nvars, self.ring.nvars)
        hit = sum(1 for lead in self.pivots if self.degrees[lead] < m)
        return total - hit

    def contains(self, poly, m):
        """Membership of poly in (ideal + m^m), m <= cap."""
        row = _integer_rows(poly) if poly else {}
        row = {self.index[mo]: v for mo, v in row.items() if mo.degree < m}
        while row:
            lead = min(row)
            if self.degrees[lead] >= m:
                return True
            pivot = self.pivots.get(lead)
            if pivot is None:
                return False
            row = _eliminate(row, pivot, lead)
        return True


def _eliminate(row, pivot, lead):
    a = pivot[lead]
    b = row[lead]
    out = {}
    for k, v in row.items():
        out[k] = a * v
    for k, v in pivot.items():
        value = out.get(k, 0) - b * v
        if value:
            out[k] = value
        elif k in out:
            del out[k]
    content = 0
    for v in out.values():
        content = gcd(content, abs(v))
    if content > 1:
        out = {k: v // content for k, v in out.items()}
    return out


def _finite_difference(values, k):
    seq = list(values)
    for _ in range(k):
        seq = [b - a for a, b in zip(seq, seq[1:])]
    return seq


def multiplicity_at(X, max_m=24):
    """Hilbert-Samuel multiplicity of X at its base point.

    Computes H(m) = dim of the ambient chart ring modulo (ideal + m^m) and
    returns the stabilized (dim X)-th finite difference; stabilization
    requires three consecutive equal values before the cap.
    """
    dim = X.dimension
    if dim < 0:
        raise ValueError("variety is empty")
    cap = min(max_m, max(dim + 6, 8))
    while True:
        truncation = X._truncation(cap)
        values = [truncation.hilbert_samuel(m) for m in range(1, cap + 1)]
        diffs = _finite_difference(values, dim)
        if len(diffs) >= 3 and diffs[-1] == diffs[-2] == diffs[-3]:
            return diffs[-1]
        if cap >= max_m:
            raise StabilizationError(
                f"multiplicity did not stabilize below the cap m <= {max_m}"
            )
        cap = min(max_m, cap + 4)


def ord_at(f, X, max_m=24, normalized=False):
    """Largest m with f lying in (ideal + m^m) in the chart at the point.

    0 means f does not vanish at the point; INFINITE means f restricts to
    zero near the point (membership in the affine ideal).  Raises when the
    cap is exhausted without deciding.
    """
    if not f.is_homogeneous():
        raise ValueError("ord_at needs a homogeneous polynomial")
    if f.is_zero():
        return INFINITE
    if not normalized:
        f = substitute_linear(f, X.basis_matrix)
    chart = slice_ring(X.ring)
    f_aff = chart.from_terms(((m.exponents[1:], c) for m, c in f.terms))
    if f_aff.is_zero():
        return INFINITE
    constant = f_aff.coefficient((0,) * chart.nvars)
    if not chart.field.is_zero(constant):
        return 0
    cap = min(max_m, 8)
    order = 1
    while True:
        truncation = X._truncation(cap)
        while order + 1 <= cap:
            if truncation.contains(f_aff, order + 1):
                order += 1
            else:
                return order
        if cap >= max_m:
            if X.affine_ideal().contains(f_aff):
                return INFINITE
            raise StabilizationError(
                f"vanishing order did not resolve below the cap m <= {max_m}"
            )
        cap = min(max_m, cap + 4)
