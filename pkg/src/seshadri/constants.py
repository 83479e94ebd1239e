"""Seshadri-constant procedures on embedded projective varieties.

Exact rationals end to end: a report either certifies the exact value of
the Seshadri constant of O_X(1) at the base point (a line through the
point forces 1; complete intersections in line-covered ambients get the
closed-form value), or a certified lower bound d_p/(d_p - 1) from the
local cut-out degree.  Curve certificates recompute their degree and
multiplicity from scratch; nothing is trusted from the construction trace.

"General" choices become seeded random draws whose required consequences
(empty line scheme, expected dimension, the target degree/multiplicity
ratio) are verified after the fact; failed draws retry up to a budget.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .groebner import Ideal, graded_piece, hilbert_data, monomials_of_degree
from .geometry import (
    PointedVariety,
    cone_ideal,
    cut_out_degree,
    line_scheme,
    multiplicity_at,
    normalize_point,
    ord_at,
    slice_decomposition,
    slice_ring,
    supported_only_at_basepoint,
    singular_locus_is_empty,
)
from .polynomials import Monomial, PolynomialRing, substitute_linear

LINE_FOUND = "LINE_FOUND"
EXACT = "EXACT"
LOWER_BOUND_ONLY = "LOWER_BOUND_ONLY"


class HypothesisError(ValueError):
    """A named hypothesis of the classification failed on this input."""

    def __init__(self, condition, message):
        super().__init__(f"condition {condition}: {message}")
        self.condition = condition


class InconsistencyError(RuntimeError):
    """Certificate and classification disagree: a counterexample candidate.

    Never swallowed; carries the full certificate payload for inspection.
    """

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


@dataclass(frozen=True)
class SeshadriReport:
    """Outcome of a Seshadri-constant computation, all values exact."""

    status: str
    epsilon: Fraction | None
    lower_bound: Fraction
    cut_out_degree: int | None
    line_scheme_dimension: int
    assumptions: tuple = ()

    def __post_init__(self):
        if self.status == LINE_FOUND and self.epsilon != 1:
            raise ValueError("a line through the point forces epsilon = 1")
        if self.lower_bound < 1:
            raise ValueError("Seshadri constants of O(1) are at least 1")


@dataclass(frozen=True)
class AuxDivisor:
    """Divisor x0^(i-1) f_j^1 + ... + f_j^i attached to basis element j."""

    i: int
    j: int
    polynomial: object
    order: object  # vanishing order along X at the point; may be INFINITE

    def __post_init__(self):
        if self.i < 1:
            raise ValueError("divisor index starts at 1")


@dataclass
class CurveCertificate:
    """A 1-dimensional scheme through the point with recomputed invariants."""

    ideal: Ideal
    degree: int
    multiplicity: int
    ratio: Fraction
    trace: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.ratio != Fraction(self.degree, self.multiplicity):
            raise ValueError("ratio must equal degree/multiplicity")
        if self.ratio < 1:
            raise ValueError("degree below multiplicity is impossible for a curve")


@dataclass
class CompleteIntersectionInput:
    """X = Y intersected with hypersurfaces f_1 .. f_r of ascending degrees.

    The cutting polynomials live in the original ambient coordinates and
    must vanish at the base point of Y.  Homogeneity of the ambient is a
    user assertion consumed only by the hyperplane-section branch.
    """

    ambient: PointedVariety
    cutting: tuple
    ambient_homogeneous: bool = False
    validate_smoothness: bool = False

    def __post_init__(self):
        cuts = list(self.cutting)
        if not cuts:
            raise ValueError("at least one cutting polynomial is required")
        for f in cuts:
            if f.ring != self.ambient.ring:
                raise ValueError("cutting polynomial from a different ring")
            if f.is_zero() or not f.is_homogeneous():
                raise ValueError("cutting polynomials must be nonzero homogeneous")
            if not self.ambient.ring.field.is_zero(f.evaluate(self.ambient.point)):
                raise ValueError("cutting polynomial does not vanish at the point")
        cuts.sort(key=lambda f: f.total_degree())
        self.cutting = tuple(cuts)

    @property
    def degrees(self):
        return tuple(f.total_degree() for f in self.cutting)

    def normalized_cutting(self):
        Y = self.ambient
        return tuple(
            substitute_linear(f, Y.basis_matrix).primitive() for f in self.cutting
        )

    def variety(self):
        """X itself as a pointed variety (generators: ambient plus cuts)."""
        Y = self.ambient
        gens = list(Y.ideal.generators) + list(self.cutting)
        return normalize_point(Ideal(Y.ring, gens), Y.point)


def lower_bound(X):
    """Certified lower bound for the Seshadri constant of O_X(1) at the point.

    A line through the point pins the constant to exactly 1; otherwise the
    bound is d_p/(d_p - 1) from the local cut-out degree.
    """
    if X.dimension < 1:
        raise ValueError("the variety must contain a curve through the point")
    scheme = line_scheme(X)
    if not scheme.is_empty:
        return SeshadriReport(
            status=LINE_FOUND,
            epsilon=Fraction(1),
            lower_bound=Fraction(1),
            cut_out_degree=None,
            line_scheme_dimension=scheme.dimension,
            assumptions=("line through the point (verified)",),
        )
    d = cut_out_degree(X)
    if d == 1:
        raise InconsistencyError(
            "cut-out degree 1 with an empty line scheme: a linear space "
            "contains lines through every point"
        )
    return SeshadriReport(
        status=LOWER_BOUND_ONLY,
        epsilon=None,
        lower_bound=Fraction(d, d - 1),
        cut_out_degree=d,
        line_scheme_dimension=-1,
        assumptions=("empty line scheme (verified)",),
    )


def aux_divisors(X):
    """Auxiliary divisors for every basis element of the d_p-graded piece.

    Returns (divisors, common_zero_flag); the flag says whether X meets the
    intersection of all the divisors in the base point alone.
    """
    d = cut_out_degree(X)
    basis = graded_piece(X.normalized_ideal, d) if X.normalized_ideal.generators else []
    divisors = []
    common = list(X.normalized_ideal.generators)
    for j, f in enumerate(basis, start=1):
        decomposition = slice_decomposition(f)
        for i in range(1, d):
            poly = decomposition.truncated(i)
            order = ord_at(poly, X, normalized=True)
            divisors.append(AuxDivisor(i=i, j=j, polynomial=poly, order=order))
            if poly:
                common.append(poly)
    flag = supported_only_at_basepoint(Ideal(X.ring, common))
    return divisors, flag


def classify_ci(ci):
    """Exact Seshadri constant for a complete intersection in a line-covered
    ambient, after machine-checking every hypothesis that can be checked.

    The hyperplane-section branch (largest degree 1) additionally needs the
    user-asserted homogeneity flag; without it the result downgrades to the
    lower bound 2 with a pointer at the conic oracle.
    """
    Y = ci.ambient
    degrees = ci.degrees
    r = len(degrees)
    d_r = degrees[-1]
    assumptions = []
    cuts = ci.normalized_cutting()

    X_ideal = Ideal(Y.ring, list(Y.normalized_ideal.generators) + list(cuts))
    dim_x = hilbert_data(X_ideal).dimension
    if Y.dimension - dim_x != r:
        raise HypothesisError(
            "i", f"codim(X, Y) = {Y.dimension - dim_x} does not match r = {r}"
        )
    assumptions.append("i: complete intersection of codimension r (verified)")

    scheme_y = line_scheme(Y)
    if scheme_y.is_empty:
        raise HypothesisError("ii", "no line on the ambient passes through the point")
    if sum(degrees) > scheme_y.dimension + 1:
        raise HypothesisError(
            "ii",
            f"sum of degrees {sum(degrees)} exceeds dim F_p(Y) + 1 = {scheme_y.dimension + 1}",
        )
    assumptions.append("ii: ambient line scheme large enough (verified)")

    d_p_y = cut_out_degree(Y)
    if d_r >= 2:
        if d_p_y > d_r:
            raise HypothesisError(
                "iii", f"d_p(Y) = {d_p_y} exceeds the largest cutting degree {d_r}"
            )
        assumptions.append("iii: d_p(Y) <= d_r (verified)")
    else:
        if d_p_y > 2:
            raise HypothesisError(
                "iii", f"hyperplane branch needs d_p(Y) <= 2, found {d_p_y}"
            )
        assumptions.append("iii': d_p(Y) <= 2 (verified)")

    if ci.validate_smoothness:
        X = ci.variety()
        if not singular_locus_is_empty(X):
            raise HypothesisError("smoothness", "the intersection is singular")
        assumptions.append("smoothness (verified)")

    slices = list(scheme_y.ideal.generators)
    for f in cuts:
        slices.extend(s for s in slice_decomposition(f).slices if s)
    fx = Ideal(slice_ring(Y.ring), slices)
    fx_hilbert = hilbert_data(fx)

    if not fx_hilbert.is_empty:
        assumptions.append("line through the point on X (verified)")
        return SeshadriReport(
            status=LINE_FOUND,
            epsilon=Fraction(1),
            lower_bound=Fraction(1),
            cut_out_degree=None,
            line_scheme_dimension=fx_hilbert.dimension,
            assumptions=tuple(assumptions),
        )

    assumptions.append("line scheme of X empty (verified)")
    if d_r >= 2:
        value = Fraction(d_r, d_r - 1)
        return SeshadriReport(
            status=EXACT,
            epsilon=value,
            lower_bound=value,
            cut_out_degree=d_r,
            line_scheme_dimension=-1,
            assumptions=tuple(assumptions),
        )
    if ci.ambient_homogeneous:
        assumptions.append("ambient homogeneity (user-asserted)")
        return SeshadriReport(
            status=EXACT,
            epsilon=Fraction(2),
            lower_bound=Fraction(2),
            cut_out_degree=2,
            line_scheme_dimension=-1,
            assumptions=tuple(assumptions),
        )
    assumptions.append(
        "ambient homogeneity not asserted: lower bound only; "
        "a conic through the point (see the oracle search) would close the gap"
    )
    return SeshadriReport(
        status=LOWER_BOUND_ONLY,
        epsilon=None,
        lower_bound=Fraction(2),
        cut_out_degree=2,
        line_scheme_dimension=-1,
        assumptions=tuple(assumptions),
    )


def _random_form(ring, degree, rng, spread=3):
    while True:
        terms = [
            (exps, rng.randint(-spread, spread))
            for exps in monomials_of_degree(ring.nvars, degree)
        ]
        poly = ring.from_terms(terms)
        if poly:
            return poly


def _rerandomized_cutting(cuts, rng):
    """Replace each f_j by f_j + sum of random multiples of earlier cuts.

    Unit-triangular over the graded pieces, so the generated ideal, the
    degrees, and the cut-out variety are all unchanged.
    """
    ring = cuts[0].ring
    out = list(cuts)
    for j in range(len(out)):
        f = out[j]
        for k in range(j):
            gap = f.total_degree() - out[k].total_degree()
            if gap == 0:
                mixer = ring.constant(rng.randint(-2, 2))
            else:
                mixer = _random_form(ring, gap, rng, spread=2)
            f = f + mixer * out[k]
        out[j] = f.primitive()
    return tuple(out)


def _lift_slice(piece, ring):
    return piece.map_ring(ring, {k: k + 1 for k in range(ring.nvars - 1)})


def seshadri_curve(ci, component=None, seed=0, retries=4, max_m=24):
    """Cut a curve certificate out of the cone over a component of F_p(Y).

    `component` must be an irreducible component of maximal dimension of
    the ambient line scheme (the caller vouches for irreducibility; the
    default takes the whole line-scheme ideal).  A degenerate random draw
    retries with fresh randomness; a dimension-1 result whose ratio misses
    d_r/(d_r - 1) is reported as a counterexample candidate, never accepted.
    """
    Y = ci.ambient
    degrees = ci.degrees
    r = len(degrees)
    d_r = degrees[-1]
    if d_r < 2:
        raise HypothesisError("d_r", "the cone-cut construction needs d_r >= 2")
    scheme_y = line_scheme(Y)
    if scheme_y.is_empty:
        raise HypothesisError("ii", "no line on the ambient passes through the point")
    if sum(degrees) != scheme_y.dimension + 1:
        raise HypothesisError(
            "ii",
            f"cone cutting needs sum of degrees = dim F_p(Y) + 1 = {scheme_y.dimension + 1}, "
            f"got {sum(degrees)}",
        )
    Z = component if component is not None else scheme_y.ideal
    if Z.ring != slice_ring(Y.ring):
        raise ValueError("component ideal must live in the direction ring of Y")
    rng = random.Random(seed)
    target = Fraction(d_r, d_r - 1)
    base_cuts = ci.normalized_cutting()
    x0 = Y.ring.variable(0)
    last_failure = None
    for attempt in range(retries + 1):
        cuts = base_cuts if attempt == 0 else _rerandomized_cutting(base_cuts, rng)
        gens = list(cone_ideal(Z, ambient_ring=Y.ring).generators)
        for j, f in enumerate(cuts):
            pieces = slice_decomposition(f).slices
            if j < r - 1:
                gens.extend(_lift_slice(s, Y.ring) for s in pieces if s)
            else:
                gens.extend(_lift_slice(s, Y.ring) for s in pieces[: d_r - 2] if s)
                tail = x0 * _lift_slice(pieces[d_r - 2], Y.ring) + _lift_slice(
                    pieces[d_r - 1], Y.ring
                )
                if tail:
                    gens.append(tail)
        curve = Ideal(Y.ring, gens)
        data = hilbert_data(curve)
        if data.dimension != 1:
            last_failure = f"attempt {attempt}: curve dimension {data.dimension}"
            continue
        pointed = normalize_point(curve, _origin_point(Y.ring))
        mult = multiplicity_at(pointed, max_m=max_m)
        ratio = Fraction(data.degree, mult)
        certificate = CurveCertificate(
            ideal=curve,
            degree=data.degree,
            multiplicity=mult,
            ratio=ratio,
            trace={
                "seed": seed,
                "attempt": attempt,
                "component": [str(g) for g in Z.generators],
                "cuts": [str(f) for f in cuts],
            },
        )
        if ratio != target:
            raise InconsistencyError(
                f"certificate ratio {ratio} differs from the classified value {target}",
                certificate,
            )
        return certificate
    raise RuntimeError(
        f"no non-degenerate curve within {retries + 1} attempts ({last_failure})"
    )


def _origin_point(ring):
    return (ring.field.one,) + (ring.field.zero,) * (ring.nvars - 1)


def sharpness_example(n, d, seed=0, retries=8, max_m=24):
    """A degree-d hypersurface of dimension n with an empty line scheme at
    the point, together with a curve certificate of ratio d/(d-1).

    Needs d >= n + 1; smaller degrees are covered by the complete
    intersection classification instead.
    """
    if n < 1:
        raise ValueError("dimension must be at least 1")
    if d < n + 1:
        raise HypothesisError(
            "d", "the direct family needs d >= n + 1; use classify_ci below that"
        )
    ring = PolynomialRing(tuple(f"x{i}" for i in range(n + 2)))
    chart = slice_ring(ring)
    rng = random.Random(seed)
    exponents = sorted(set(range(1, n)) | {d - 1, d})
    x0 = ring.variable(0)
    last_failure = None
    for attempt in range(retries + 1):
        pieces = {i: _random_form(chart, i, rng) for i in exponents}
        f = ring.zero()
        for i, piece in pieces.items():
            lifted = _lift_slice(piece, ring)
            f = f + lifted.mul_term(ring.field.one, _x0_power(ring, d - i))
        X = normalize_point(Ideal(ring, [f]), _origin_point(ring))
        if not line_scheme(X).is_empty:
            last_failure = f"attempt {attempt}: line scheme nonempty"
            continue
        gens = [_lift_slice(pieces[i], ring) for i in range(1, n)]
        gens.append(x0 * _lift_slice(pieces[d - 1], ring) + _lift_slice(pieces[d], ring))
        curve = Ideal(ring, gens)
        data = hilbert_data(curve)
        if data.dimension != 1:
            last_failure = f"attempt {attempt}: curve dimension {data.dimension}"
            continue
        pointed = normalize_point(curve, _origin_point(ring))
        mult = multiplicity_at(pointed, max_m=max_m)
        ratio = Fraction(data.degree, mult)
        if ratio != Fraction(d, d - 1):
            last_failure = f"attempt {attempt}: ratio {ratio}"
            continue
        certificate = CurveCertificate(
            ideal=curve,
            degree=data.degree,
            multiplicity=mult,
            ratio=ratio,
            trace={
                "seed": seed,
                "attempt": attempt,
                "cuts": [str(g) for g in gens],
            },
        )
        return X, certificate
    raise RuntimeError(
        f"no verified sharpness instance within {retries + 1} attempts ({last_failure})"
    )


def _x0_power(ring, e):
    return Monomial((e,) + (0,) * (ring.nvars - 1))
