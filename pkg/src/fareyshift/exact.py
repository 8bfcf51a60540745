"""Exact arithmetic on the compactified half-line [0, infinity].

The dynamics iterate phi(x) = |1 - 1/x|, extended by phi(0) = infinity
and phi(infinity) = 1.  Everything here is integer arithmetic: points
are nonnegative rationals stored projectively (infinity is 1/0), real
quadratic surds (p + q*sqrt(d))/r for the periodic-itinerary points,
and unimodular integer Mobius maps.  All values are immutable and all
operations are pure.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering


class NoFixedPointError(ValueError):
    """A Mobius map has no fixed point on [0, infinity]."""


class AmbiguousFixedPointError(ValueError):
    """More than one fixed point survives the membership filter."""


class InfiniteDistance:
    """Marker for a distance involving the point at infinity.

    Distances reported by the verification layer are exact rationals,
    except when one point is at infinity; then the distance is this
    marker, which compares greater than every rational.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    def __eq__(self, other):
        return isinstance(other, InfiniteDistance)

    def __hash__(self):
        return hash("InfiniteDistance")

    def __gt__(self, other):
        return not isinstance(other, InfiniteDistance)

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, InfiniteDistance)


INFINITE_DISTANCE = InfiniteDistance()


@total_ordering
class ExtendedRational:
    """num/den in lowest terms, a point of [0, infinity]; infinity is 1/0."""

    __slots__ = ("num", "den")

    def __init__(self, num: int, den: int = 1):
        num, den = int(num), int(den)
        if num < 0 or den < 0:
            raise ValueError("value outside [0, infinity]: %d/%d" % (num, den))
        if num == 0 and den == 0:
            raise ValueError("0/0 is not a point")
        g = math.gcd(num, den)
        self.num = num // g
        self.den = den // g

    @classmethod
    def from_projective(cls, num: int, den: int) -> "ExtendedRational":
        """Build from a projective integer pair, normalising the common sign."""
        if den < 0 or (den == 0 and num < 0):
            num, den = -num, -den
        return cls(num, den)

    @classmethod
    def from_fraction(cls, f: Fraction) -> "ExtendedRational":
        return cls(f.numerator, f.denominator)

    @classmethod
    def parse(cls, text: str) -> "ExtendedRational":
        text = text.strip()
        if "/" in text:
            n, d = text.split("/", 1)
            return cls(int(n), int(d))
        return cls.from_fraction(Fraction(text))

    @property
    def is_infinite(self) -> bool:
        return self.den == 0

    @property
    def is_zero(self) -> bool:
        return self.num == 0

    def as_fraction(self) -> Fraction:
        if self.is_infinite:
            raise ValueError("infinity has no Fraction value")
        return Fraction(self.num, self.den)

    def reciprocal(self) -> "ExtendedRational":
        return ExtendedRational(self.den, self.num)

    def mediant(self, other: "ExtendedRational") -> "ExtendedRational":
        return ExtendedRational(self.num + other.num, self.den + other.den)

    def __float__(self):
        return math.inf if self.den == 0 else self.num / self.den

    def __eq__(self, other):
        if isinstance(other, int):
            other = ExtendedRational(other)
        if not isinstance(other, ExtendedRational):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __lt__(self, other):
        if isinstance(other, int):
            other = ExtendedRational(other)
        if not isinstance(other, ExtendedRational):
            return NotImplemented
        # a/b < c/d iff a*d < c*b; valid with infinity = 1/0 as maximum
        return self.num * other.den < other.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __str__(self):
        return "%d/%d" % (self.num, self.den)

    def __repr__(self):
        return "ExtendedRational(%d, %d)" % (self.num, self.den)


ZERO = ExtendedRational(0, 1)
ONE = ExtendedRational(1, 1)
INF = ExtendedRational(1, 0)


def phi_rat(x: ExtendedRational) -> ExtendedRational:
    """Apply phi(x) = |1 - 1/x| exactly; phi(0) = infinity, phi(infinity) = 1.

    For canonical p/q the image is |p - q|/p, which is already in lowest
    terms, so no extra reduction happens off the special points.
    """
    if x.is_zero:
        return INF
    if x.is_infinite:
        return ONE
    return ExtendedRational(abs(x.num - x.den), x.num)


def escape_time(x: ExtendedRational) -> int:
    """Smallest n >= 0 with phi^n(x) = 0.

    Total on finite rationals: from p/q < 1 the numerator+denominator sum
    drops by p in one step, and from p/q > 1 it drops to p in two steps,
    so the orbit reaches 0 after finitely many exact iterations.
    """
    if x.is_infinite:
        raise ValueError("escape_time is defined for finite rationals only")
    n = 0
    while not x.is_zero:
        x = phi_rat(x)
        n += 1
    return n


def _squarefree_split(d: int) -> tuple[int, int]:
    """Write d = s*s*d0 with d0 squarefree; returns (s, d0)."""
    s, d0, f = 1, 1, 2
    while f * f <= d:
        e = 0
        while d % f == 0:
            d //= f
            e += 1
        s *= f ** (e // 2)
        if e % 2:
            d0 *= f
        f += 1
    return s, d0 * d


def _comb_sign(a: int, b: int, d: int) -> int:
    """Sign of a + b*sqrt(d), d >= 0, decided by integer comparisons."""
    if b == 0 or d == 0:
        return (a > 0) - (a < 0)
    if a >= 0 and b > 0:
        return 1
    if a <= 0 and b < 0:
        return -1
    lhs, rhs = a * a, b * b * d
    if a > 0:  # b < 0
        return (lhs > rhs) - (lhs < rhs)
    return (rhs > lhs) - (rhs < lhs)


class QuadraticSurd:
    """(p + q*sqrt(d))/r in canonical form, a point of [0, infinity).

    Canonical means: r > 0, gcd(p, q, r) = 1, d squarefree, and q = 0
    exactly when d = 0 (the rational case).  Values are validated to be
    nonnegative; equality is structural equality of canonical forms.
    """

    __slots__ = ("p", "q", "r", "d")

    def __init__(self, p: int, q: int, r: int, d: int):
        p, q, r, d = int(p), int(q), int(r), int(d)
        if r == 0:
            raise ValueError("zero denominator")
        if d < 0:
            raise ValueError("negative radicand")
        if q == 0:
            d = 0
        else:
            s, d = _squarefree_split(d)
            q *= s
            if d == 1:
                p, q, d = p + q, 0, 0
            elif d == 0:
                q = 0
        if r < 0:
            p, q, r = -p, -q, -r
        g = math.gcd(math.gcd(abs(p), abs(q)), r)
        self.p, self.q, self.r, self.d = p // g, q // g, r // g, d
        if _comb_sign(self.p, self.q, self.d) < 0:
            raise ValueError("value outside [0, infinity)")

    @classmethod
    def from_fraction(cls, f: Fraction) -> "QuadraticSurd":
        return cls(f.numerator, 0, f.denominator, 0)

    @property
    def is_rational(self) -> bool:
        return self.q == 0

    def as_extended_rational(self) -> ExtendedRational:
        if not self.is_rational:
            raise ValueError("irrational surd")
        return ExtendedRational(self.p, self.r)

    def _cmp(self, other) -> int:
        """Certified sign of self - other."""
        if isinstance(other, int):
            other = Fraction(other)
        if isinstance(other, ExtendedRational):
            if other.is_infinite:
                return -1
            other = other.as_fraction()
        if isinstance(other, Fraction):
            u, v = other.numerator, other.denominator
            return _comb_sign(self.p * v - u * self.r, self.q * v, self.d)
        if isinstance(other, QuadraticSurd):
            if other.is_rational:
                return self._cmp(Fraction(other.p, other.r))
            if self.is_rational:
                return -other._cmp(Fraction(self.p, self.r))
            if self.d != other.d:
                raise TypeError("cannot compare surds over different radicands")
            return _comb_sign(
                self.p * other.r - other.p * self.r,
                self.q * other.r - other.q * self.r,
                self.d,
            )
        raise TypeError("unsupported comparison")

    def __eq__(self, other):
        if isinstance(other, QuadraticSurd):
            return (self.p, self.q, self.r, self.d) == (other.p, other.q, other.r, other.d)
        if isinstance(other, (int, Fraction, ExtendedRational)):
            try:
                return self._cmp(other) == 0
            except TypeError:
                return NotImplemented
        return NotImplemented

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __hash__(self):
        return hash((self.p, self.q, self.r, self.d))

    def __float__(self):
        return (self.p + self.q * math.sqrt(self.d)) / self.r

    def __str__(self):
        if self.is_rational:
            return "%d/%d" % (self.p, self.r)
        return "(%d%+d*sqrt(%d))/%d" % (self.p, self.q, self.d, self.r)

    def __repr__(self):
        return "QuadraticSurd(%d, %d, %d, %d)" % (self.p, self.q, self.r, self.d)


GOLDEN_FIXED_POINT = QuadraticSurd(-1, 1, 2, 5)  # (sqrt(5) - 1)/2, the fixed point of phi


def phi_surd(x: QuadraticSurd) -> QuadraticSurd:
    """Apply phi to an exact surd; the radicand is preserved while the
    value stays irrational.

    The rational case is delegated to phi_rat; x = 0 is rejected because
    its image (infinity) is not a surd.
    """
    if x.is_rational:
        img = phi_rat(ExtendedRational(x.p, x.r))
        if img.is_infinite:
            raise ValueError("phi(0) = infinity is not representable as a surd")
        return QuadraticSurd(img.num, 0, img.den, 0)
    p, q, r, d = x.p, x.q, x.r, x.d
    n = p * p - q * q * d  # nonzero: x is irrational
    # 1 - 1/x = (n - r*p + r*q*sqrt(d)) / n, then take the absolute value
    pp, qq, rr = n - r * p, r * q, n
    if _comb_sign(pp, qq, d) * ((rr > 0) - (rr < 0)) < 0:
        pp, qq = -pp, -qq
    return QuadraticSurd(pp, qq, rr, d)


class MobiusMap:
    """x -> (a*x + b)/(c*x + d) with integer entries and determinant +-1."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: int, b: int, c: int, d: int):
        if a * d - b * c not in (1, -1):
            raise ValueError("map must be unimodular")
        self.a, self.b, self.c, self.d = int(a), int(b), int(c), int(d)

    def apply(self, x: ExtendedRational) -> ExtendedRational:
        """Exact projective action; infinity maps to a/c.

        Raises ValueError when the image leaves [0, infinity] (the branch
        maps used by the dynamics never do).
        """
        n = self.a * x.num + self.b * x.den
        m = self.c * x.num + self.d * x.den
        return ExtendedRational.from_projective(n, m)

    def apply_surd(self, x: QuadraticSurd) -> QuadraticSurd:
        if x.is_rational:
            img = self.apply(x.as_extended_rational())
            return QuadraticSurd(img.num, 0, img.den, 0)
        p, q, r, d = x.p, x.q, x.r, x.d
        na, nb = self.a * p + self.b * r, self.a * q
        dc, dd = self.c * p + self.d * r, self.c * q
        denom = dc * dc - dd * dd * d
        if denom == 0:
            raise ZeroDivisionError("pole of the map")
        return QuadraticSurd(na * dc - nb * dd * d, nb * dc - na * dd, denom, d)

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        return MobiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    @property
    def is_identity(self) -> bool:
        return self.b == self.c == 0 and self.a == self.d

    def __eq__(self, other):
        if not isinstance(other, MobiusMap):
            return NotImplemented
        mine = (self.a, self.b, self.c, self.d)
        theirs = (other.a, other.b, other.c, other.d)
        return mine == theirs or mine == tuple(-t for t in theirs)

    def __hash__(self):
        sign = 1
        for t in (self.a, self.b, self.c, self.d):
            if t:
                sign = 1 if t > 0 else -1
                break
        return hash(tuple(sign * t for t in (self.a, self.b, self.c, self.d)))

    def __repr__(self):
        return "MobiusMap(%d, %d, %d, %d)" % (self.a, self.b, self.c, self.d)


IDENTITY_MAP = MobiusMap(1, 0, 0, 1)


def mobius_apply(m: MobiusMap, x):
    """Apply m to an ExtendedRational or QuadraticSurd, whichever x is."""
    if isinstance(x, QuadraticSurd):
        return m.apply_surd(x)
    return m.apply(x)


def _fixed_point_candidates(m: MobiusMap) -> list:
    a, b, c, d = m.a, m.b, m.c, m.d
    out = []
    if c == 0:
        out.append(INF)
        if d != a:
            num, den = b, d - a
            if den < 0:
                num, den = -num, -den
            if num >= 0:
                out.append(ExtendedRational(num, den))
        return out
    disc = (d - a) ** 2 + 4 * b * c
    if disc < 0:
        return out
    s = math.isqrt(disc)
    if s * s == disc:
        for root in {Fraction((a - d) + s, 2 * c), Fraction((a - d) - s, 2 * c)}:
            if root >= 0:
                out.append(ExtendedRational.from_fraction(root))
    else:
        for qsign in (1, -1):
            try:
                out.append(QuadraticSurd(a - d, qsign, 2 * c, disc))
            except ValueError:
                pass  # negative root, outside [0, infinity)
    return out


def mobius_fixed_point(m: MobiusMap, within=None):
    """The fixed point of m on [0, infinity], solving c*x^2 + (d-a)*x - b = 0.

    Rational when the discriminant is a perfect square, a QuadraticSurd
    otherwise.  When both roots land in [0, infinity] the caller must
    disambiguate by passing `within` (anything with a contains() method,
    e.g. a cylinder interval).
    """
    if m.is_identity:
        raise ValueError("identity map fixes everything")
    candidates = _fixed_point_candidates(m)
    if within is not None:
        candidates = [x for x in candidates if within.contains(x)]
    if not candidates:
        raise NoFixedPointError("no fixed point in the requested region")
    if len(candidates) > 1:
        raise AmbiguousFixedPointError("fixed point not unique; filter with `within`")
    return candidates[0]
