"""Symbolic coding for the map x -> |1 - 1/x|.

Words are plain 0/1 strings; a word is admissible when it has no "11"
factor (after a 1 the orbit sits in [0, 1], so the next symbol is 0).
Cylinders are the exact Farey intervals obtained by composing the two
inverse branches

    psi0: y -> 1/(1 + y)   (into I0 = [0, 1]),
    psi1: y -> 1/(1 - y)   (into I1 = [1, infinity], defined on [0, 1]),

right to left over the word.  Infinite codes are CodeStream objects:
eventually periodic data or a pure index -> symbol procedure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .exact import (
    INF,
    ONE,
    ZERO,
    ExtendedRational,
    MobiusMap,
    QuadraticSurd,
    escape_time,
    mobius_fixed_point,
    phi_rat,
    phi_surd,
)

PSI0 = MobiusMap(0, 1, 1, 1)   # y -> 1/(1+y)
PSI1 = MobiusMap(0, 1, -1, 1)  # y -> 1/(1-y)

BRANCH_DOWN = MobiusMap(-1, 1, 1, 0)  # phi on [0, 1]:        x -> (1-x)/x
BRANCH_UP = MobiusMap(1, -1, 1, 0)    # phi on [1, infinity]: x -> (x-1)/x


class InadmissibleWordError(ValueError):
    """Word contains the forbidden factor "11" (or a bad character)."""


def is_admissible(word: str) -> bool:
    return all(ch in "01" for ch in word) and "11" not in word


def _require_admissible(word: str) -> None:
    if not is_admissible(word):
        raise InadmissibleWordError("not an admissible 0/1 word: %r" % word)


def admissible_words(n: int) -> list[str]:
    """All admissible words of length n, in lexicographic order."""
    if n < 0:
        raise ValueError("negative length")
    out = [""]
    for _ in range(n):
        out = [w + ch for w in out for ch in ("0", "1") if not (w.endswith("1") and ch == "1")]
    return sorted(out)


def iter_admissible_words(min_len: int = 1):
    """Admissible words in length-lexicographic order, smallest length first."""
    n = min_len
    while True:
        yield from admissible_words(n)
        n += 1


class FareyInterval:
    """Closed subinterval of [0, infinity] with exact rational endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: ExtendedRational, hi: ExtendedRational):
        if hi < lo:
            raise ValueError("reversed interval %s..%s" % (lo, hi))
        self.lo = lo
        self.hi = hi

    @property
    def is_bounded(self) -> bool:
        return not self.hi.is_infinite

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def width(self) -> Fraction | None:
        """Exact width, or None when the interval reaches infinity."""
        if not self.is_bounded:
            return None
        return self.hi.as_fraction() - self.lo.as_fraction()

    def contains(self, x) -> bool:
        if isinstance(x, QuadraticSurd):
            if x.is_rational:
                x = x.as_extended_rational()
            else:
                below = x >= self.lo.as_fraction() if not self.lo.is_infinite else False
                above = True if self.hi.is_infinite else x <= self.hi.as_fraction()
                return below and above
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "FareyInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersect(self, other: "FareyInterval"):
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        return FareyInterval(lo, hi) if lo <= hi else None

    def is_unimodular(self) -> bool:
        """|b*c - a*d| = 1 for endpoints b/a, d/c."""
        return abs(self.lo.num * self.hi.den - self.lo.den * self.hi.num) == 1

    def mediant(self) -> ExtendedRational:
        return self.lo.mediant(self.hi)

    def __eq__(self, other):
        if not isinstance(other, FareyInterval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __str__(self):
        return "%s..%s" % (self.lo, self.hi)

    def __repr__(self):
        return "FareyInterval(%s, %s)" % (self.lo, self.hi)


FULL_LINE = FareyInterval(ZERO, INF)


class CodeStream:
    """An infinite 0/1 sequence addressed by nonnegative index.

    Two kinds: eventually periodic (preperiod + repeating period) and
    procedural (a pure index -> symbol function).  Evaluation is pure
    given the index; the prefix cache is an idempotent memo only.
    Streams are general points of the full 2-shift; admissibility (no
    "11") is a property checked where an operation requires it.
    """

    __slots__ = ("kind", "pre", "per", "_fn", "_offset", "label", "_prefix_cache")

    def __init__(self, kind, pre=None, per=None, fn=None, offset=0, label=""):
        self.kind = kind
        self.pre = pre
        self.per = per
        self._fn = fn
        self._offset = offset
        self.label = label
        self._prefix_cache = ""

    @classmethod
    def periodic(cls, pre: str, per: str, label: str = "") -> "CodeStream":
        if not per:
            raise ValueError("period must be nonempty")
        for ch in pre + per:
            if ch not in "01":
                raise ValueError("symbols must be 0/1")
        return cls("periodic", pre=pre, per=per,
                   label=label or "%s(%s)" % (pre, per))

    @classmethod
    def procedural(cls, fn: Callable[[int], int], label: str = "procedural") -> "CodeStream":
        return cls("procedural", fn=fn, label=label)

    @classmethod
    def zeros(cls) -> "CodeStream":
        return cls.periodic("", "0")

    @classmethod
    def from_word_recycled(cls, word: str) -> "CodeStream":
        """Finite word repeated forever (a general 2-shift point)."""
        return cls.periodic("", word)

    def symbol_at(self, n: int) -> int:
        if n < 0:
            raise IndexError("negative index")
        if self.kind == "periodic":
            if n < len(self.pre):
                return int(self.pre[n])
            return int(self.per[(n - len(self.pre)) % len(self.per)])
        return self._fn(n + self._offset)

    __getitem__ = symbol_at

    def prefix(self, n: int) -> str:
        if self.kind == "periodic":
            if n <= len(self.pre):
                return self.pre[:n]
            reps = (n - len(self.pre)) // len(self.per) + 1
            return (self.pre + self.per * reps)[:n]
        if len(self._prefix_cache) < n:
            fn, off = self._fn, self._offset
            start = len(self._prefix_cache)
            self._prefix_cache += "".join(
                "1" if fn(i + off) else "0" for i in range(start, n)
            )
        return self._prefix_cache[:n]

    def shifted(self, k: int) -> "CodeStream":
        if k < 0:
            raise ValueError("shift must be nonnegative")
        if k == 0:
            return self
        if self.kind == "periodic":
            if k <= len(self.pre):
                return CodeStream.periodic(self.pre[k:], self.per,
                                           label="shift(%s,%d)" % (self.label, k))
            j = (k - len(self.pre)) % len(self.per)
            return CodeStream.periodic("", self.per[j:] + self.per[:j],
                                       label="shift(%s,%d)" % (self.label, k))
        return CodeStream("procedural", fn=self._fn, offset=self._offset + k,
                          label="shift(%s,%d)" % (self.label, k))

    def admissible_prefix(self, n: int) -> bool:
        return "11" not in self.prefix(n)

    def check_admissible(self) -> bool:
        """Exhaustive admissibility for periodic streams (seams included)."""
        if self.kind != "periodic":
            raise ValueError("exhaustive check needs a periodic stream")
        return "11" not in self.pre + self.per + self.per

    def __repr__(self):
        return "CodeStream(%s)" % (self.label or self.kind)


def shift(s: CodeStream, k: int) -> CodeStream:
    """Drop the first k symbols; periodic streams are renormalised."""
    return s.shifted(k)


def sigma_metric(s: CodeStream, t: CodeStream, tol: float) -> float:
    """Sum of |s_i - t_i| / 2^(i+1), truncated so the tail is below tol."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = max(1, math.ceil(math.log2(1.0 / tol)) + 1)
    total = Fraction(0)
    for i in range(n):
        if s[i] != t[i]:
            total += Fraction(1, 2 ** (i + 1))
    return float(total)


# Right-multiplication by the inverse-branch matrices.  The running
# product M satisfies enclosure = M(base), base = [0, infinity] after a
# trailing 0 and [0, 1] after a trailing 1 (the next symbol after a 1 is
# forced to 0, so psi1 is only ever applied inside [0, 1]).

def _advance(m: tuple[int, int, int, int], sym: int) -> tuple[int, int, int, int]:
    a, b, c, d = m
    if sym == 0:
        return (b, a + b, d, c + d)
    return (-b, a + b, -d, c + d)


def _interval_of(m: tuple[int, int, int, int], last_sym: int) -> FareyInterval:
    a, b, c, d = m
    p1 = ExtendedRational.from_projective(b, d)  # image of 0
    if last_sym == 0:
        p2 = ExtendedRational.from_projective(a, c)  # image of infinity
    else:
        p2 = ExtendedRational.from_projective(a + b, c + d)  # image of 1
    return FareyInterval(p1, p2) if p1 <= p2 else FareyInterval(p2, p1)


def cylinder(word: str) -> FareyInterval:
    """Exact cylinder interval of an admissible word.

    This is the set of x whose first |word| itinerary symbols equal the
    word; its endpoints are always a unimodular Farey pair.
    """
    _require_admissible(word)
    if not word:
        raise InadmissibleWordError("empty word has no cylinder")
    m = (1, 0, 0, 1)
    for ch in word:
        m = _advance(m, int(ch))
    return _interval_of(m, int(word[-1]))


@dataclass(frozen=True)
class PointEnclosure:
    """Certified enclosure of the point coded by a stream prefix."""

    interval: FareyInterval
    prefix_len: int
    width_ok: bool


def point_of_code(s: CodeStream, max_prefix: int, width_goal) -> PointEnclosure:
    """Nested cylinder enclosure of x_s from the shortest sufficient prefix.

    Grows the consumed prefix one symbol at a time until the cylinder is
    narrower than width_goal, or max_prefix symbols are consumed; in the
    second case the returned enclosure has width_ok = False ("width goal
    not reached").  The prefix read must be admissible.
    """
    if max_prefix < 1:
        raise ValueError("max_prefix must be positive")
    goal = Fraction(width_goal)
    if goal <= 0:
        raise ValueError("width_goal must be positive")
    m = (1, 0, 0, 1)
    prev = 0
    iv = FULL_LINE
    for i in range(max_prefix):
        sym = s[i]
        if prev == 1 and sym == 1:
            raise InadmissibleWordError("stream prefix contains '11' at index %d" % i)
        m = _advance(m, sym)
        iv = _interval_of(m, sym)
        w = iv.width()
        if w is not None and w < goal:
            return PointEnclosure(iv, i + 1, True)
        prev = sym
    return PointEnclosure(iv, max_prefix, False)


def itinerary(x, n: int, tie_high: bool = False) -> str:
    """First n itinerary symbols of x: 1 on (1, infinity], else 0.

    At the boundary point 1 the symbol 0 is emitted; with tie_high the
    first visit to 1 emits 1 instead, which selects the other of the two
    codes a positive rational has.
    """
    if n < 1:
        raise ValueError("need at least one symbol")
    if isinstance(x, QuadraticSurd) and x.is_rational:
        x = x.as_extended_rational()
    out = []
    tie_pending = tie_high
    for _ in range(n):
        if isinstance(x, QuadraticSurd):
            out.append("1" if x > 1 else "0")
            x = phi_surd(x)
        else:
            if x == ONE and tie_pending:
                out.append("1")
                tie_pending = False
            else:
                out.append("1" if x > ONE else "0")
            x = phi_rat(x)
    return "".join(out)


def _apply_branch_inverse(sym: str, x):
    psi = PSI0 if sym == "0" else PSI1
    if isinstance(x, QuadraticSurd):
        return psi.apply_surd(x)
    return psi.apply(x)


def periodic_point(preperiod: str, period: str):
    """Exact point whose code is preperiod followed by the repeating period.

    Solves the fixed point of the period's inverse-branch composition,
    picks the root inside cylinder(period), then pushes it through the
    preperiod's inverse branches.  Returns an ExtendedRational for the
    orbit of {0, 1, infinity} and a QuadraticSurd otherwise.
    """
    if not period:
        raise InadmissibleWordError("period must be nonempty")
    _require_admissible(preperiod + period + period)
    m = (1, 0, 0, 1)
    for ch in period:
        m = _advance(m, int(ch))
    x = mobius_fixed_point(MobiusMap(*m), within=cylinder(period))
    for ch in reversed(preperiod):
        x = _apply_branch_inverse(ch, x)
    return x


def phi_interval_image(iv: FareyInterval) -> list[FareyInterval]:
    """Exact forward image of an interval, split at 1 when it straddles it."""
    lo, hi = iv.lo, iv.hi
    if hi <= ONE:
        return [FareyInterval(phi_rat(hi), phi_rat(lo))]
    if lo >= ONE:
        return [FareyInterval(phi_rat(lo), phi_rat(hi))]
    return [
        FareyInterval(ZERO, phi_rat(lo)),
        FareyInterval(ZERO, phi_rat(hi)),
    ]


def code_of_rational(x: ExtendedRational, tie_high: bool = False) -> CodeStream:
    """Eventually periodic code of a rational point of [0, infinity].

    After the finite escape to 0 the code is the period-3 cycle code
    010 010 ...; tie_high picks the 1-leading variant of the two codes a
    positive rational has.
    """
    if x.is_infinite:
        return CodeStream.periodic("", "100", label="code(1/0)")
    e = escape_time(x)
    if e == 0:
        return CodeStream.periodic("", "010", label="code(0/1)")
    pre = itinerary(x, e, tie_high=tie_high)
    return CodeStream.periodic(pre, "010", label="code(%s)" % x)
