"""Mediant-refined Farey levels on [0, infinity], the piecewise-linear
model f, and the order homeomorphism h that conjugates the two maps.

h sends the level-n node with index i to the dyadic i/2^n; at rationals
it is computed exactly from the continued fraction (a batched form of
the mediant walk down the Stern-Brocot tree of [0, infinity]).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import INF, ONE, ZERO, ExtendedRational, QuadraticSurd, phi_rat


class DyadicRational:
    """mantissa / 2**exponent in [0, 1]; mantissa odd unless it is zero."""

    __slots__ = ("mantissa", "exponent")

    def __init__(self, mantissa: int, exponent: int = 0):
        m, e = int(mantissa), int(exponent)
        if m < 0 or e < 0:
            raise ValueError("negative dyadic data")
        while e > 0 and m and m % 2 == 0:
            m //= 2
            e -= 1
        if m == 0:
            e = 0
        if m > 2 ** e:
            raise ValueError("dyadic value above 1")
        self.mantissa, self.exponent = m, e

    @classmethod
    def from_fraction(cls, f: Fraction) -> "DyadicRational":
        den = f.denominator
        if den & (den - 1):
            raise ValueError("denominator is not a power of two")
        return cls(f.numerator, den.bit_length() - 1)

    def as_fraction(self) -> Fraction:
        return Fraction(self.mantissa, 2 ** self.exponent)

    def __eq__(self, other):
        if isinstance(other, DyadicRational):
            return (self.mantissa, self.exponent) == (other.mantissa, other.exponent)
        if isinstance(other, (int, Fraction)):
            return self.as_fraction() == other
        return NotImplemented

    def __lt__(self, other):
        other = other.as_fraction() if isinstance(other, DyadicRational) else other
        return self.as_fraction() < other

    def __le__(self, other):
        other = other.as_fraction() if isinstance(other, DyadicRational) else other
        return self.as_fraction() <= other

    def __hash__(self):
        return hash(self.as_fraction())

    def __float__(self):
        return self.mantissa / 2 ** self.exponent

    def __str__(self):
        return "%d/2^%d" % (self.mantissa, self.exponent)

    def __repr__(self):
        return "DyadicRational(%d, %d)" % (self.mantissa, self.exponent)


@dataclass(frozen=True)
class FareyLevel:
    """Level n of the mediant refinement of {0/1, 1/0}: 2^n + 1 entries."""

    n: int
    entries: tuple


def farey_level(n: int, max_level: int = 24) -> FareyLevel:
    """Exact level-n sequence; level n+1 interleaves level n with mediants."""
    if n < 0:
        raise ValueError("negative level")
    if n > max_level:
        raise ValueError("level %d above the memory guard %d" % (n, max_level))
    entries = [ZERO, INF]
    for _ in range(n):
        nxt = []
        for left, right in zip(entries, entries[1:]):
            nxt.append(left)
            nxt.append(left.mediant(right))
        nxt.append(entries[-1])
        entries = nxt
    return FareyLevel(n, tuple(entries))


def f_map(x: Fraction) -> Fraction:
    """The piecewise-linear model on [0, 1]: 1 - 2x then x - 1/2."""
    x = Fraction(x)
    if x < 0 or x > 1:
        raise ValueError("f is defined on [0, 1]")
    if x <= Fraction(1, 2):
        return 1 - 2 * x
    return x - Fraction(1, 2)


def _cf_digits(num: int, den: int) -> list[int]:
    out = []
    while den:
        q, r = divmod(num, den)
        out.append(q)
        num, den = den, r
    return out


def h_rational(x: ExtendedRational) -> DyadicRational:
    """Exact dyadic value of the conjugating homeomorphism at a rational.

    The binary digits are the continued-fraction quotients of x read as
    alternating runs of 1s and 0s (last run shortened by one, then a
    closing 1) - exactly the left/right record of the mediant walk from
    [0/1, 1/0] down to x.  h(0) = 0 and h(infinity) = 1.
    """
    if x.is_zero:
        return DyadicRational(0, 0)
    if x.is_infinite:
        return DyadicRational(1, 0)
    digits = _cf_digits(x.num, x.den)
    bits = []
    last = len(digits) - 1
    for idx, a in enumerate(digits):
        run = a - 1 if idx == last else a
        bits.append(("1" if idx % 2 == 0 else "0") * run)
    bits.append("1")
    s = "".join(bits)
    return DyadicRational(int(s, 2), len(s))


def h_inverse(d) -> ExtendedRational:
    """The unique rational with h_rational(result) = d; exact round trip."""
    if isinstance(d, DyadicRational):
        f = d.as_fraction()
    else:
        f = Fraction(d)
        if f.denominator & (f.denominator - 1):
            raise ValueError("h_inverse needs a dyadic rational")
    if f < 0 or f > 1:
        raise ValueError("value outside [0, 1]")
    if f == 0:
        return ZERO
    if f == 1:
        return INF
    e = f.denominator.bit_length() - 1
    bits = bin(f.numerator)[2:].zfill(e)[:-1]  # mantissa is odd: drop the closing 1
    digits = []
    want = "1"
    pos = 0
    while pos < len(bits):
        run = 0
        while pos < len(bits) and bits[pos] == want:
            run += 1
            pos += 1
        digits.append(run)
        want = "0" if want == "1" else "1"
    if not digits:
        digits = [0]
    digits[-1] += 1
    num, den = digits[-1], 1
    for a in reversed(digits[:-1]):
        num, den = a * num + den, num
    return ExtendedRational(num, den)


def h_level(n: int, x: ExtendedRational) -> Fraction:
    """Piecewise-linear level-n approximation of h.

    Interpolates the level-n nodes (node i maps to i/2^n); everything at
    or beyond the last finite node takes the flat value (2^n - 1)/2^n,
    which is also the level value assigned to infinity.
    """
    if n < 1:
        raise ValueError("level must be positive")
    entries = farey_level(n).entries
    last_finite = entries[-2]
    if x >= last_finite:
        return Fraction(2 ** n - 1, 2 ** n)
    lo_i, hi_i = 0, len(entries) - 2
    while lo_i < hi_i:  # invariant: entries[lo_i] <= x < entries[hi_i + 1]
        mid = (lo_i + hi_i + 1) // 2
        if entries[mid] <= x:
            lo_i = mid
        else:
            hi_i = mid - 1
    node = entries[lo_i]
    if node == x:
        return Fraction(lo_i, 2 ** n)
    nxt = entries[lo_i + 1]
    t = (x.as_fraction() - node.as_fraction()) / (nxt.as_fraction() - node.as_fraction())
    return Fraction(lo_i, 2 ** n) + t * Fraction(1, 2 ** n)


def h_enclosure(x: QuadraticSurd, n: int) -> tuple[Fraction, Fraction]:
    """Dyadic bracket of h at an irrational point from the level-n nodes."""
    entries = farey_level(n).entries
    lo_i = 0
    for i, node in enumerate(entries):
        if node.is_infinite:
            break
        if x >= node.as_fraction():
            lo_i = i
        else:
            break
    return Fraction(lo_i, 2 ** n), Fraction(lo_i + 1, 2 ** n)


def conjugacy_check(x: ExtendedRational) -> bool:
    """Exact test of h(phi(x)) = f(h(x)) as dyadic rationals."""
    lhs = h_rational(phi_rat(x)).as_fraction()
    rhs = f_map(h_rational(x).as_fraction())
    return lhs == rhs


@dataclass(frozen=True)
class IdentityResult:
    holds: bool
    checked: int
    counterexample: str | None


@dataclass(frozen=True)
class FareyPropertyReport:
    """Pass/fail record of the four level-n symmetry identities."""

    n: int
    reciprocal: IdentityResult      # entry i is the reciprocal of entry 2^n - i
    unit_sum: IdentityResult        # entries i and 2^(n-1) - i sum to 1
    phi_fold: IdentityResult        # phi maps entry 2^(n-1) + i to entry i
    phi_refine: IdentityResult      # phi maps level-(n+1) entry i to entry 2^n - i
    index_note: str

    @property
    def all_pass(self) -> bool:
        return all(r.holds for r in
                   (self.reciprocal, self.unit_sum, self.phi_fold, self.phi_refine))


def farey_properties_report(n: int) -> FareyPropertyReport:
    """Verify the four symmetry identities of level n, exactly.

    The fold identity is checked on the index window 2^(n-1) + i,
    0 <= i <= 2^(n-1): the largest window in which every referenced
    entry exists, and the one forced by combining the reciprocal and
    unit-sum identities (a window starting at 2^n would leave the
    sequence for every i > 0).
    """
    if n < 1:
        raise ValueError("n must be positive")
    entries = farey_level(n).entries
    half = 2 ** (n - 1)
    full = 2 ** n

    def run(indices, check, name):
        checked = 0
        for i in indices:
            checked += 1
            if not check(i):
                return IdentityResult(False, checked, "%s fails at i=%d" % (name, i))
        return IdentityResult(True, checked, None)

    rec = run(range(half + 1),
              lambda i: entries[i] == entries[full - i].reciprocal(),
              "reciprocal")
    uni = run(range(half + 1),
              lambda i: entries[i].as_fraction() + entries[half - i].as_fraction() == 1,
              "unit_sum")
    fold = run(range(half + 1),
               lambda i: phi_rat(entries[half + i]) == entries[i],
               "phi_fold")
    nxt = farey_level(n + 1).entries
    ref = run(range(full + 1),
              lambda i: phi_rat(nxt[i]) == entries[full - i],
              "phi_refine")
    note = ("fold identity checked on indices 2^(n-1)+i, 0 <= i <= 2^(n-1); "
            "the nominal window 2^n+i exceeds the level's index range")
    return FareyPropertyReport(n, rec, uni, fold, ref, note)
