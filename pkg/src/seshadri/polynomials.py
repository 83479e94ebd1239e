"""Sparse exact multivariate polynomials over Q or a prime field.

Coefficients are `fractions.Fraction` (always in lowest terms with positive
denominator) or integers in ``[0, q)`` for a prime field.  Variables are
indexed; display names are metadata only, so coordinate changes permute
indices rather than names.  Term lists are kept sorted, strictly decreasing
in the ring's active monomial order; changing the order is explicit via
``with_order`` and never happens implicitly.

All values are immutable after construction and safe to share across
threads; every operation is a pure function.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from . import linalg


class ParseError(ValueError):
    """Raised for malformed polynomial expressions; carries the position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class BadReductionError(ValueError):
    """A rational could not be reduced mod q (denominator divisible by q)."""


class RationalField:
    """The field of exact rationals."""

    characteristic = 0

    def coerce(self, value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, (int, str)):
            return Fraction(value)
        raise TypeError(f"cannot coerce {value!r} into QQ")

    zero = Fraction(0)
    one = Fraction(1)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def invert(a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    @staticmethod
    def is_zero(a):
        return a == 0

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


QQ = RationalField()


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class PrimeField:
    """The field F_q for a prime q; elements are ints in [0, q)."""

    def __init__(self, q):
        if not _is_prime(q):
            raise ValueError(f"{q} is not prime")
        self.q = q
        self.characteristic = q
        self.zero = 0
        self.one = 1 % q

    def coerce(self, value):
        if isinstance(value, int):
            return value % self.q
        if isinstance(value, Fraction):
            if value.denominator % self.q == 0:
                raise BadReductionError(f"denominator {value.denominator} divisible by {self.q}")
            return value.numerator * pow(value.denominator, -1, self.q) % self.q
        raise TypeError(f"cannot coerce {value!r} into GF({self.q})")

    def add(self, a, b):
        return (a + b) % self.q

    def sub(self, a, b):
        return (a - b) % self.q

    def mul(self, a, b):
        return (a * b) % self.q

    def neg(self, a):
        return (-a) % self.q

    def invert(self, a):
        if a % self.q == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.q)

    @staticmethod
    def is_zero(a):
        return a == 0

    def __repr__(self):
        return f"GF({self.q})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.q == self.q

    def __hash__(self):
        return hash(("GF", self.q))


class Monomial:
    """An exponent vector with cached total degree."""

    __slots__ = ("exponents", "degree")

    def __init__(self, exponents):
        exponents = tuple(exponents)
        if any(e < 0 for e in exponents):
            raise ValueError("negative exponent")
        object.__setattr__(self, "exponents", exponents)
        object.__setattr__(self, "degree", sum(exponents))

    def __setattr__(self, name, value):
        raise AttributeError("Monomial is immutable")

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.exponents == other.exponents

    def __hash__(self):
        return hash(self.exponents)

    def __len__(self):
        return len(self.exponents)

    def __mul__(self, other):
        return Monomial(a + b for a, b in zip(self.exponents, other.exponents))

    def divides(self, other):
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    def __truediv__(self, other):
        return Monomial(a - b for a, b in zip(self.exponents, other.exponents))

    def lcm(self, other):
        return Monomial(max(a, b) for a, b in zip(self.exponents, other.exponents))

    def is_coprime(self, other):
        return all(a == 0 or b == 0 for a, b in zip(self.exponents, other.exponents))

    def __repr__(self):
        return f"Monomial{self.exponents}"


def _grevlex_key(exponents):
    return (sum(exponents), tuple(-e for e in reversed(exponents)))


class MonomialOrder:
    """A multiplicative total well-order on monomials.

    ``key`` maps a monomial to a tuple that sorts ascending with the order,
    so "larger" monomials have larger keys.  The optional permutation maps
    key slots to variable indices, letting any variable play the role of
    the grevlex-smallest one.
    """

    __slots__ = ("kind", "nvars", "split", "permutation")

    def __init__(self, kind, nvars, split=0, permutation=None):
        if kind not in ("grevlex", "lex", "elimination"):
            raise ValueError(f"unknown order kind {kind!r}")
        if permutation is not None:
            permutation = tuple(permutation)
            if sorted(permutation) != list(range(nvars)):
                raise ValueError("permutation must be a permutation of the variables")
        self.kind = kind
        self.nvars = nvars
        self.split = split
        self.permutation = permutation

    @classmethod
    def grevlex(cls, nvars, permutation=None):
        return cls("grevlex", nvars, permutation=permutation)

    @classmethod
    def lex(cls, nvars, permutation=None):
        return cls("lex", nvars, permutation=permutation)

    @classmethod
    def elimination(cls, nvars, split, permutation=None):
        """Block order: grevlex on the first `split` variables dominates."""
        if not 0 < split < nvars:
            raise ValueError("split must cut the variables into two nonempty blocks")
        return cls("elimination", nvars, split=split, permutation=permutation)

    def key(self, monomial):
        exps = monomial.exponents
        if self.permutation is not None:
            exps = tuple(exps[i] for i in self.permutation)
        if self.kind == "grevlex":
            return _grevlex_key(exps)
        if self.kind == "lex":
            return exps
        return (_grevlex_key(exps[: self.split]), _grevlex_key(exps[self.split :]))

    def greater(self, a, b):
        return self.key(a) > self.key(b)

    def __eq__(self, other):
        return (
            isinstance(other, MonomialOrder)
            and (self.kind, self.nvars, self.split, self.permutation)
            == (other.kind, other.nvars, other.split, other.permutation)
        )

    def __hash__(self):
        return hash((self.kind, self.nvars, self.split, self.permutation))

    def __repr__(self):
        extra = f", split={self.split}" if self.kind == "elimination" else ""
        perm = f", permutation={self.permutation}" if self.permutation else ""
        return f"MonomialOrder({self.kind!r}, {self.nvars}{extra}{perm})"


class PolynomialRing:
    """Variable names, coefficient field and active monomial order."""

    __slots__ = ("names", "field", "order", "nvars")

    def __init__(self, names, field=QQ, order=None):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        self.nvars = len(self.names)
        self.field = field
        self.order = order if order is not None else MonomialOrder.grevlex(self.nvars)
        if self.order.nvars != self.nvars:
            raise ValueError("order does not match variable count")

    def zero(self):
        return Polynomial(self, ())

    def one(self):
        return self.constant(self.field.one)

    def constant(self, value):
        value = self.field.coerce(value)
        if self.field.is_zero(value):
            return self.zero()
        return Polynomial(self, ((Monomial((0,) * self.nvars), value),))

    def variable(self, index):
        exps = [0] * self.nvars
        exps[index] = 1
        return Polynomial(self, ((Monomial(exps), self.field.one),))

    def variables(self):
        return [self.variable(i) for i in range(self.nvars)]

    def from_terms(self, terms):
        """Build a polynomial from (exponents-or-Monomial, coefficient) pairs."""
        merged = {}
        for mono, coeff in terms:
            if not isinstance(mono, Monomial):
                mono = Monomial(mono)
            if len(mono) != self.nvars:
                raise ValueError("exponent vector length does not match ring")
            coeff = self.field.coerce(coeff)
            if mono in merged:
                merged[mono] = self.field.add(merged[mono], coeff)
            else:
                merged[mono] = coeff
        key = self.order.key
        cleaned = [(m, c) for m, c in merged.items() if not self.field.is_zero(c)]
        cleaned.sort(key=lambda tc: key(tc[0]), reverse=True)
        return Polynomial(self, tuple(cleaned))

    def parse(self, text):
        return parse_polynomial(text, self)

    def with_order(self, order):
        """Same ring, new active order; re-sorting is explicit via this call."""
        return PolynomialRing(self.names, self.field, order)

    def with_field(self, field):
        return PolynomialRing(self.names, field, self.order)

    def __eq__(self, other):
        return (
            isinstance(other, PolynomialRing)
            and self.names == other.names
            and self.field == other.field
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.names, self.field, self.order))

    def __repr__(self):
        return f"PolynomialRing({self.names}, {self.field!r}, {self.order!r})"


class Polynomial:
    """Immutable sparse polynomial; terms strictly decreasing in the order."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", tuple(terms))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- structure ---------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def leading_monomial(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return self.terms[0][0]

    def leading_coefficient(self):
        if not self.terms:
            return self.ring.field.zero
        return self.terms[0][1]

    def coefficient(self, mono):
        if not isinstance(mono, Monomial):
            mono = Monomial(mono)
        for m, c in self.terms:
            if m == mono:
                return c
        return self.ring.field.zero

    def total_degree(self):
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(m.degree for m, _ in self.terms)

    def is_homogeneous(self):
        if not self.terms:
            return True
        d = self.terms[0][0].degree
        return all(m.degree == d for m, _ in self.terms)

    def homogeneous_components(self):
        """Map total degree -> homogeneous part."""
        buckets = {}
        for m, c in self.terms:
            buckets.setdefault(m.degree, []).append((m, c))
        return {d: self.ring.from_terms(parts) for d, parts in sorted(buckets.items())}

    # -- arithmetic --------------------------------------------------------

    def _check_ring(self, other):
        if self.ring != other.ring:
            raise ValueError("polynomials come from different rings")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = self.ring.constant(other)
        self._check_ring(other)
        return _merge(self, self.ring.field.one, _UNIT_CACHE.setdefault(self.ring.nvars, Monomial((0,) * self.ring.nvars)), other, negate=False)

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = self.ring.constant(other)
        self._check_ring(other)
        return _merge(self, self.ring.field.one, _UNIT_CACHE.setdefault(self.ring.nvars, Monomial((0,) * self.ring.nvars)), other, negate=True)

    def __neg__(self):
        neg = self.ring.field.neg
        return Polynomial(self.ring, tuple((m, neg(c)) for m, c in self.terms))

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check_ring(other)
        field = self.ring.field
        acc = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = m1 * m2
                c = field.mul(c1, c2)
                if m in acc:
                    acc[m] = field.add(acc[m], c)
                else:
                    acc[m] = c
        key = self.ring.order.key
        cleaned = [(m, c) for m, c in acc.items() if not field.is_zero(c)]
        cleaned.sort(key=lambda tc: key(tc[0]), reverse=True)
        return Polynomial(self.ring, tuple(cleaned))

    __rmul__ = __mul__

    def scale(self, scalar):
        field = self.ring.field
        scalar = field.coerce(scalar)
        if field.is_zero(scalar):
            return self.ring.zero()
        return Polynomial(self.ring, tuple((m, field.mul(c, scalar)) for m, c in self.terms))

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def mul_term(self, coeff, mono):
        field = self.ring.field
        coeff = field.coerce(coeff)
        if field.is_zero(coeff):
            return self.ring.zero()
        return Polynomial(self.ring, tuple((m * mono, field.mul(c, coeff)) for m, c in self.terms))

    def derivative(self, index):
        """Formal partial derivative with respect to variable `index`."""
        field = self.ring.field
        terms = []
        for m, c in self.terms:
            e = m.exponents[index]
            if e:
                exps = tuple(v - 1 if k == index else v for k, v in enumerate(m.exponents))
                terms.append((exps, field.mul(c, field.coerce(e))))
        return self.ring.from_terms(terms)

    def sub_scaled(self, coeff, mono, other):
        """Return self - coeff * x^mono * other, merging sorted term lists."""
        self._check_ring(other)
        return _merge(self, coeff, mono, other, negate=True)

    def monic(self):
        if not self.terms:
            return self
        inv = self.ring.field.invert(self.leading_coefficient())
        return self.scale(inv)

    def primitive(self):
        """Over Q: integer coefficients with content 1 and positive lead."""
        if self.ring.field != QQ or not self.terms:
            return self
        num_gcd = 0
        den_lcm = 1
        for _, c in self.terms:
            num_gcd = gcd(num_gcd, abs(c.numerator))
            den_lcm = den_lcm * c.denominator // gcd(den_lcm, c.denominator)
        factor = Fraction(den_lcm, num_gcd)
        if self.leading_coefficient() < 0:
            factor = -factor
        return self.scale(factor)

    # -- evaluation / substitution ------------------------------------------

    def evaluate(self, point):
        """Exact value at a point (sequence of field scalars)."""
        field = self.ring.field
        point = [field.coerce(x) for x in point]
        if len(point) != self.ring.nvars:
            raise ValueError("point length does not match variable count")
        total = field.zero
        for mono, coeff in self.terms:
            value = coeff
            for x, e in zip(point, mono.exponents):
                for _ in range(e):
                    value = field.mul(value, x)
            total = field.add(total, value)
        return total

    def with_order(self, order):
        return self.ring.with_order(order).from_terms(self.terms)

    def map_ring(self, target, variable_map=None):
        """Reinterpret in `target`; variable_map sends our index to target index."""
        if variable_map is None:
            variable_map = {i: i for i in range(self.ring.nvars)}
        terms = []
        for mono, coeff in self.terms:
            exps = [0] * target.nvars
            for i, e in enumerate(mono.exponents):
                if e:
                    if i not in variable_map:
                        raise ValueError(f"variable {self.ring.names[i]} has no image")
                    exps[variable_map[i]] = e
            terms.append((tuple(exps), coeff))
        return target.from_terms(terms)

    # -- comparison / display ------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ring, self.terms))

    def __str__(self):
        if not self.terms:
            return "0"
        chunks = []
        for idx, (mono, coeff) in enumerate(self.terms):
            factors = []
            for name, e in zip(self.ring.names, mono.exponents):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            sign = ""
            if isinstance(coeff, Fraction) and coeff < 0:
                sign = "-"
                coeff = -coeff
            body = "*".join(factors)
            if not body:
                body = str(coeff)
            elif coeff != self.ring.field.one:
                body = f"{coeff}*{body}"
            if idx == 0:
                chunks.append(sign + body)
            else:
                chunks.append(("- " if sign else "+ ") + body)
        return " ".join(chunks)

    def __repr__(self):
        return f"<{self}>"


_UNIT_CACHE: dict = {}


def _merge(f, coeff, mono, g, negate):
    """f + (-1)^negate * coeff * x^mono * g with a sorted merge."""
    ring = f.ring
    field = ring.field
    coeff = field.coerce(coeff)
    if negate:
        coeff = field.neg(coeff)
    if field.is_zero(coeff) or not g.terms:
        return f
    key = ring.order.key
    fterms = f.terms
    gterms = [(m * mono, field.mul(c, coeff)) for m, c in g.terms]
    fkeys = [key(m) for m, _ in fterms]
    gkeys = [key(m) for m, _ in gterms]
    out = []
    i = j = 0
    while i < len(fterms) and j < len(gterms):
        if fkeys[i] > gkeys[j]:
            out.append(fterms[i])
            i += 1
        elif fkeys[i] < gkeys[j]:
            out.append(gterms[j])
            j += 1
        else:
            c = field.add(fterms[i][1], gterms[j][1])
            if not field.is_zero(c):
                out.append((fterms[i][0], c))
            i += 1
            j += 1
    out.extend(fterms[i:])
    out.extend(gterms[j:])
    return Polynomial(ring, tuple(out))


# -- parsing ------------------------------------------------------------------


def _tokenize(text):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("ident", text[i:j], i))
            i = j
            continue
        if ch in "+-*^()/":
            tokens.append((ch, ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive descent for:  expr := term (("+"|"-") term)* ; term := factor
    ("*" factor)* ; factor := base ("^" nat)? ; base := ident | int | "(" expr ")".

    Rational literals are allowed as int "/" nat in coefficient position; a
    leading sign on the first term is accepted.  No other division exists.
    """

    def __init__(self, text, ring):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.ring = ring
        self.var_index = {name: i for i, name in enumerate(ring.names)}

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect(self, kind):
        token = self.advance()
        if token[0] != kind:
            raise ParseError(f"expected {kind!r}, found {token[1]!r}", token[2])
        return token

    def parse(self):
        poly = self.expr()
        token = self.peek()
        if token[0] != "end":
            raise ParseError(f"unexpected {token[1]!r}", token[2])
        return poly

    def expr(self):
        sign = 1
        if self.peek()[0] in ("+", "-"):
            sign = -1 if self.advance()[0] == "-" else 1
        poly = self.term()
        if sign < 0:
            poly = -poly
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            rhs = self.term()
            poly = poly - rhs if op == "-" else poly + rhs
        return poly

    def term(self):
        poly = self.factor()
        while self.peek()[0] == "*":
            self.advance()
            poly = poly * self.factor()
        return poly

    def factor(self):
        poly = self.base()
        if self.peek()[0] == "^":
            self.advance()
            token = self.expect("int")
            poly = poly ** int(token[1])
        return poly

    def base(self):
        token = self.advance()
        kind, value, pos = token
        if kind == "ident":
            if value not in self.var_index:
                raise ParseError(f"unknown variable {value!r}", pos)
            return self.ring.variable(self.var_index[value])
        if kind == "int":
            numerator = int(value)
            if self.peek()[0] == "/":
                self.advance()
                den = self.expect("int")
                if int(den[1]) == 0:
                    raise ParseError("zero denominator", den[2])
                return self.ring.constant(Fraction(numerator, int(den[1])))
            return self.ring.constant(numerator)
        if kind == "(":
            poly = self.expr()
            self.expect(")")
            return poly
        if kind == "/":
            raise ParseError("division is only allowed in rational literals", pos)
        raise ParseError(f"unexpected {value!r}", pos)


def parse_polynomial(text, ring):
    """Parse an expression into the expanded normal form in `ring`."""
    return _Parser(text, ring).parse()


# -- substitution ---------------------------------------------------------------


def compose(f, images):
    """Substitute images[i] (polynomials over one target ring) for variable i."""
    if len(images) != f.ring.nvars:
        raise ValueError("one image per variable is required")
    target = images[0].ring if images else f.ring
    powers = [{0: target.one()} for _ in images]

    def power(i, e):
        cache = powers[i]
        if e not in cache:
            cache[e] = power(i, e - 1) * images[i]
        return cache[e]

    total = target.zero()
    for mono, coeff in f.terms:
        piece = target.constant(coeff)
        for i, e in enumerate(mono.exponents):
            if e:
                piece = piece * power(i, e)
        total = total + piece
    return total


def substitute_linear(f, matrix):
    """Return f(M x) for an invertible square matrix M over the coefficient field.

    Degree and homogeneity are preserved; raises SingularMatrixError for a
    singular M and ValueError on a size mismatch.
    """
    ring = f.ring
    n = ring.nvars
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise ValueError("matrix size does not match variable count")
    rows = [[ring.field.coerce(a) for a in row] for row in matrix]
    linalg.invert(rows, ring.field)  # invertibility check
    images = [
        ring.from_terms(
            ((tuple(1 if k == j else 0 for k in range(n)), rows[i][j]) for j in range(n))
        )
        for i in range(n)
    ]
    return compose(f, images)


def restrict_to_line(f, point, direction, parameter_ring=None):
    """Restrict f to the parametrized line s*point + t*direction.

    Returns a polynomial in a two-variable ring (s, t) over the same field;
    the restriction is identically zero exactly when f vanishes on the whole
    projective line spanned by the two vectors.
    """
    ring = f.ring
    if parameter_ring is None:
        parameter_ring = PolynomialRing(("s", "t"), ring.field)
    field = ring.field
    point = [field.coerce(x) for x in point]
    direction = [field.coerce(x) for x in direction]
    images = [
        parameter_ring.from_terms((((1, 0), p), ((0, 1), v)))
        for p, v in zip(point, direction)
    ]
    return compose(f, images)


def evaluate(f, point):
    return f.evaluate(point)
