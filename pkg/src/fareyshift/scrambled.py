"""Factorial-block code families and finite-horizon scrambling checks.

Two lazy stream families are built here.  The bounded family packs a
free 0/1 parameter stream beta into isolated cells of factorial-sized
blocks, so every shifted point stays inside a fixed union of four
cylinders while scheduled shifts bring pairs together (long 0 runs,
both points near the fixed point) or apart (a 1-cell against a 0 run).
The unbounded family interleaves, block by block: a prefix of a
transitive stream, a separation string 0^(k!/4) (100)^... (001)^...
(010)^..., a (beta_j 0 0) encoding of beta, and copy-windows that track
a supplied list of target codes.

Verification is finite and certified: scheduled events are checked with
exact cylinder enclosures, and every event resolves to pass, fail, or
an explicit "inconclusive" (never a silent pass).
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction

from .coding import (
    CodeStream,
    FareyInterval,
    iter_admissible_words,
    point_of_code,
    shift,
)
from .exact import (
    INF,
    INFINITE_DISTANCE,
    ONE,
    ZERO,
    ExtendedRational,
    InfiniteDistance,
    escape_time,
    phi_rat,
)

_RUNS = ((1, 0, 0), (0, 0, 1), (0, 1, 0))
_100 = (1, 0, 0)


def _as_stream(bits) -> CodeStream:
    if isinstance(bits, CodeStream):
        return bits
    return CodeStream.from_word_recycled(str(bits))


def _factorial_block(n: int) -> tuple[int, int]:
    """k and k! with k! <= n < (k+1)!, for n >= 5!."""
    k, fk = 5, 120
    while fk * (k + 1) <= n:
        k += 1
        fk *= k
    return k, fk


@dataclass(frozen=True)
class BlockLayout:
    """Exact index arithmetic of the factorial block spanning [k!, (k+1)!).

    Both stream families tile this block with k strings of length k!;
    the derived offsets below are the ones the event schedules address.
    All sub-lengths divide evenly for k >= 5.
    """

    k: int
    start: int       # k!
    length: int      # k * k!, the whole block
    string_len: int  # k!, one constituent string
    quarter: int     # k!/4, zero-run prefix of the separation string
    encode_sub: int  # (k-1)!, one parameter cell of the encoding string
    window: int      # (k-1)!/2, one tracking window

    @classmethod
    def for_k(cls, k: int) -> "BlockLayout":
        if k < 5:
            raise ValueError("blocks start at k = 5")
        fk = math.factorial(k)
        return cls(k, fk, k * fk, fk, fk // 4, fk // k, fk // k // 2)

    def part_start(self, part: int) -> int:
        """Absolute index of string `part` (0-based) within this block."""
        if not 0 <= part < self.k:
            raise ValueError("block has %d strings" % self.k)
        return self.start + part * self.string_len

    def run_start(self, which: int) -> int:
        """Absolute start of the (100)/(001)/(010) run, which = 0, 1, 2."""
        return self.part_start(1) + (1 + which) * self.quarter

    def encode_cell(self, j: int) -> int:
        """Absolute index holding the j-th encoded parameter symbol."""
        return self.part_start(2) + j * self.encode_sub

    def tracking_start(self, i: int) -> int:
        """Absolute start of the tracking strings for target i (1-based)."""
        if not 1 <= i <= self.k - 3:
            raise ValueError("block tracks %d targets" % (self.k - 3))
        return self.part_start(2 + i)

    def copy_source(self, i: int, j: int) -> int:
        """Source index copied by tracking window j (1-based) of target i."""
        return self.tracking_start(i) + (j - 1) * (self.window - 1)

    def separation_source(self, i: int, j: int) -> int:
        """Source index keyed by separation window j (1-based) of target i."""
        return self.tracking_start(i) + self.string_len // 2 + (j - 1) * (self.window - 1)


def mu_code(beta) -> CodeStream:
    """Bounded-family stream for the parameter beta (stream or recycled word).

    Index layout: 0^(5!) then blocks spanning [k!, (k+1)!) for k = 5, 6, ...
    Each block is k strings of length k!: the head string 01 0^(k!-2),
    then 0 b 0^(k!-2) with b running through beta.  No block is ever
    materialised; a symbol lookup is plain index arithmetic.
    """
    beta = _as_stream(beta)

    def sym(n: int) -> int:
        if n < 120:
            return 0
        k, fk = _factorial_block(n)
        j, off = divmod(n - fk, fk)
        if off != 1:
            return 0
        return 1 if j == 0 else beta[j - 1]

    return CodeStream.procedural(sym, label="mu(%s)" % beta.label)


def _build_alpha_blocks(m_schedule=None, limit: int = 10 ** 18):
    """Resolved (start, word) table for the transitive stream.

    Words come in length-lexicographic order from length 5 up; block i
    sits at (m_i)!.  The default schedule is the minimal increasing one
    satisfying (m_i)! > (m_{i-1})! + |B_{i-1}| + 1; explicit schedules
    are validated against the same separation constraint.
    """
    words = iter_admissible_words(5)
    sched = iter(m_schedule) if m_schedule is not None else None
    blocks = []
    m_prev = start_prev = len_prev = None
    while True:
        word = next(words)
        if sched is not None:
            m = next(sched, None)
            if m is None:
                break
            m = int(m)
            if m_prev is not None and m <= m_prev:
                raise ValueError("schedule must be strictly increasing")
        else:
            m = 1 if m_prev is None else m_prev + 1
            while m_prev is not None and math.factorial(m) <= start_prev + len_prev + 1:
                m += 1
        start = math.factorial(m)
        if m_prev is not None and start <= start_prev + len_prev + 1:
            raise ValueError("schedule violates the separation constraint at m=%d" % m)
        if start > limit:
            break
        blocks.append((start, word))
        m_prev, start_prev, len_prev = m, start, len(word)
    return tuple(blocks)


def alpha_transitive(m_schedule=None) -> CodeStream:
    """Stream with the i-th admissible word written at (m_i)!, zeros elsewhere.

    Admissible as a whole because consecutive blocks are separated by at
    least two zeros (the schedule constraint).
    """
    blocks = _build_alpha_blocks(m_schedule)
    starts = [s for s, _ in blocks]

    def sym(n: int) -> int:
        i = bisect.bisect_right(starts, n) - 1
        if i >= 0:
            start, word = blocks[i]
            if n < start + len(word):
                return int(word[n - start])
        return 0

    return CodeStream.procedural(sym, label="alpha")


def enumerate_admissible(count: int) -> list[str]:
    """First `count` admissible words, length-lexicographic from length 5."""
    if count < 0:
        raise ValueError("negative count")
    gen = iter_admissible_words(5)
    return [next(gen) for _ in range(count)]


def c_block(code: CodeStream, i: int, j: int) -> str:
    """Copy symbols i..j-1 of the code and append a 0 (concatenation-safe)."""
    if not (j > i >= 5):
        raise ValueError("need j > i >= 5")
    if (j - i + 1) % 3:
        raise ValueError("window length must be a multiple of 3")
    return "".join(str(code[t]) for t in range(i, j)) + "0"


def c_star_block(code: CodeStream, i: int, j: int) -> str:
    """Separation window: 0 (100)^m 10 when the code reads 1 at i, else (100)^m.

    Same length as the matching copy window and 0-terminated, so the two
    kinds concatenate without ever producing "11".
    """
    if not (j > i >= 5):
        raise ValueError("need j > i >= 5")
    length = j - i + 1
    if length % 3:
        raise ValueError("window length must be a multiple of 3")
    if code[i] == 1:
        return "0" + "100" * ((length - 3) // 3) + "10"
    return "100" * (length // 3)


def tau_code(beta, alpha: CodeStream | None = None, x_codes=None,
             max_k: int = 16) -> CodeStream:
    """Unbounded-family stream: transitive, beta-separated, target-tracking.

    Block k spans [k!, (k+1)!) and is k strings of length k!:

      1. the first k! symbols of alpha;
      2. 0^(k!/4) (100)^(k!/12) (001)^(k!/12) (010)^(k!/12);
      3. (b_0 0 0)^((k-1)!/3) ... (b_{k-1} 0 0)^((k-1)!/3);
      4. for each tracked code i = 1..k-3, 2k windows of length
         (k-1)!/2: k copy windows whose content is the tracked code read
         at the same stream indices, then k separation windows.

    Before the first block: alpha's first 5!-1 symbols and a forced 0.
    Tracked codes are recycled cyclically when fewer than k-3 are given.
    """
    beta = _as_stream(beta)
    if alpha is None:
        alpha = alpha_transitive()
    if not x_codes:
        raise ValueError("need at least one tracked code")
    x_codes = list(x_codes)

    def sym(n: int) -> int:
        if n < 119:
            return alpha[n]
        if n == 119:
            return 0
        k, fk = _factorial_block(n)
        if k > max_k:
            raise ValueError("index beyond the configured max block size k=%d" % max_k)
        part, off = divmod(n - fk, fk)
        if part == 0:
            return alpha[off]
        if part == 1:
            quarter = fk // 4
            if off < quarter:
                return 0
            seg, po = divmod(off - quarter, quarter)
            return _RUNS[seg][po % 3]
        if part == 2:
            j, po = divmod(off, fk // k)
            return beta[j] if po % 3 == 0 else 0
        i = part - 2  # tracked code index, 1-based
        code = x_codes[(i - 1) % len(x_codes)]
        half = fk // k // 2  # (k-1)!/2, the window length
        j2, so = divmod(off, half)
        src = (3 + i) * fk
        if j2 < k:  # copy window j2+1
            a = src + j2 * (half - 1)
            return code[a + so] if so < half - 1 else 0
        a = src + fk // 2 + (j2 - k) * (half - 1)
        if code[a] == 1:
            return 0 if so == 0 else _100[(so - 1) % 3]
        return _100[so % 3]

    return CodeStream.procedural(sym, label="tau(%s)" % beta.label)


@dataclass(frozen=True)
class ScheduleEvent:
    """One scheduled closeness or separation check.

    index is the shift applied to the first stream; t_offset is the
    extra shift of the second stream (used by the tracking windows,
    where the copy drifts by one symbol per window).  prefix_cap, when
    set, keeps the enclosure inside a separation run so that it reaches
    infinity on purpose.
    """

    kind: str                 # "close" | "far"
    index: int
    source: str
    threshold: Fraction | None = None
    prefix_cap: int | None = None
    t_offset: int = 0


def schedule_events(kind: str, k_range, **params) -> list[ScheduleEvent]:
    """Exact event indices predicted by the block constructions.

    kinds:
      "theorem1"         params: shift (int >= 0), diff_indices (iterable)
      "theorem2"         params: shift (int >= 0), diff_index (int | None)
      "theorem2_tracked" params: track_index (int >= 1), x_code (CodeStream)
      "rational_vs_tau"  params: escape (int), eps (Fraction)

    k_range must stay within the configured guard (max_k param, default 9).
    """
    lo, hi = (k_range[0], k_range[-1]) if not isinstance(k_range, int) else (k_range, k_range)
    max_k = int(params.pop("max_k", 9))
    if lo < 5 or hi > max_k:
        raise ValueError("k_range must lie within 5..%d" % max_k)
    layouts = [BlockLayout.for_k(k) for k in range(lo, hi + 1)]
    events: list[ScheduleEvent] = []
    if kind == "theorem1":
        sh = int(params.get("shift", 0))
        diffs = tuple(params.get("diff_indices", ()))
        for lay in layouts:
            events.append(ScheduleEvent("close", lay.start + 2, "zero-run k=%d" % lay.k))
            if sh >= 1:
                events.append(ScheduleEvent("far", lay.start + 1, "head-cell k=%d" % lay.k))
            else:
                for m in diffs:
                    if m <= lay.k - 2:
                        events.append(ScheduleEvent(
                            "far", lay.part_start(m + 1) + 1,
                            "beta-cell m=%d k=%d" % (m, lay.k)))
    elif kind == "theorem2":
        sh = int(params.get("shift", 0))
        diff = params.get("diff_index")
        for lay in layouts:
            events.append(ScheduleEvent("close", lay.part_start(1), "zero-run k=%d" % lay.k))
            if sh >= 1:
                if lay.quarter - sh - 3 < 3:
                    continue  # shift crosses the whole run at this block size
                events.append(ScheduleEvent(
                    "far", lay.run_start(0) - sh, "inf-run k=%d shift=%d" % (lay.k, sh),
                    prefix_cap=lay.quarter - sh - 3))
            elif diff is not None and diff <= lay.k - 1:
                events.append(ScheduleEvent(
                    "far", lay.encode_cell(diff), "beta-sub j=%d k=%d" % (diff, lay.k),
                    prefix_cap=3 * (lay.encode_sub // 3) - 3))
    elif kind == "theorem2_tracked":
        i = int(params["track_index"])
        code = params["x_code"]
        for lay in layouts:
            if i > lay.k - 3:
                continue
            for j in range(1, lay.k + 1):
                events.append(ScheduleEvent(
                    "close", lay.copy_source(i, j),
                    "copy-window i=%d j=%d k=%d" % (i, j, lay.k),
                    prefix_cap=lay.window - 1, t_offset=j - 1))
                a_star = lay.separation_source(i, j)
                delta = 1 if code[a_star] == 1 else 0
                events.append(ScheduleEvent(
                    "far", a_star + delta,
                    "sep-window i=%d j=%d k=%d" % (i, j, lay.k),
                    prefix_cap=lay.window - delta - 2, t_offset=j - 1))
    elif kind == "rational_vs_tau":
        e = int(params["escape"])
        eps = Fraction(params.get("eps", Fraction(1, 100)))
        cycle = ("zero", "inf", "one")
        rotations = (("inf", "one", "zero"), ("one", "zero", "inf"), ("zero", "inf", "one"))
        for lay in layouts:
            reps = lay.quarter // 3
            for which, limits in enumerate(rotations):
                run = lay.run_start(which)
                for t in range(3):
                    n = run + t
                    if n < e:
                        continue  # orbit still escaping; phase undefined
                    r_ph = cycle[(n - e) % 3]
                    lim = limits[t]
                    tag = "phase k=%d run@%d t=%d (%s vs %s)" % (lay.k, run, t, r_ph, lim)
                    if r_ph == lim and r_ph in ("zero", "one"):
                        # parabolic approach: the true gap scales like 1/(2*reps)
                        if Fraction(1, 2 * reps) < eps * Fraction(7, 8):
                            events.append(ScheduleEvent("close", n, tag))
                    elif r_ph == "inf":
                        events.append(ScheduleEvent("far", n, tag))
                    elif lim == "inf":
                        events.append(ScheduleEvent(
                            "far", n, tag, prefix_cap=lay.quarter - t - 3))
    else:
        raise ValueError("unknown schedule kind %r" % kind)
    return events


def _contains_inf(iv: FareyInterval) -> bool:
    return iv.hi.is_infinite


def _distance_bounds(e1: FareyInterval, e2: FareyInterval):
    """Certified (lower, upper) bounds of |x - y| over the two enclosures."""
    if e1.hi < e2.lo:
        lower = INFINITE_DISTANCE if e2.lo.is_infinite else \
            e2.lo.as_fraction() - e1.hi.as_fraction()
    elif e2.hi < e1.lo:
        lower = INFINITE_DISTANCE if e1.lo.is_infinite else \
            e1.lo.as_fraction() - e2.hi.as_fraction()
    else:
        lower = Fraction(0)
    if _contains_inf(e1) or _contains_inf(e2):
        upper = INFINITE_DISTANCE
    else:
        upper = max(e2.hi.as_fraction() - e1.lo.as_fraction(),
                    e1.hi.as_fraction() - e2.lo.as_fraction())
    return lower, upper


@dataclass(frozen=True)
class EventOutcome:
    event: ScheduleEvent
    status: str  # "pass" | "fail" | "inconclusive"
    lower: object
    upper: object

    def to_dict(self) -> dict:
        return {
            "kind": self.event.kind,
            "index": str(self.event.index),
            "source": self.event.source,
            "status": self.status,
            "lower": _dist_str(self.lower),
            "upper": _dist_str(self.upper),
        }


def _dist_str(v) -> str:
    if isinstance(v, InfiniteDistance):
        return "inf"
    return "%d/%d" % (v.numerator, v.denominator)


def _classify(ev: ScheduleEvent, e1: FareyInterval, e2: FareyInterval,
              eps: Fraction, m_big: Fraction) -> EventOutcome:
    lower, upper = _distance_bounds(e1, e2)
    if ev.kind == "close":
        thr = ev.threshold if ev.threshold is not None else eps
        if isinstance(upper, Fraction) and upper < thr:
            status = "pass"
        elif isinstance(lower, InfiniteDistance) or lower >= thr:
            status = "fail"
        else:
            status = "inconclusive"
    else:
        thr = ev.threshold if ev.threshold is not None else m_big
        one_unbounded = _contains_inf(e1) != _contains_inf(e2)
        if isinstance(lower, InfiniteDistance):
            status = "pass"
        elif lower > thr:
            status = "pass"
        elif lower > 0 and one_unbounded:
            status = "pass"  # certified unbounded-side excursion past a positive gap
        elif isinstance(upper, Fraction) and upper <= thr:
            status = "fail"
        else:
            status = "inconclusive"
    return EventOutcome(ev, status, lower, upper)


@dataclass
class ScrambleReport:
    """Per-event certificates plus finite limsup/liminf proxies."""

    pair: str
    outcomes: list

    @property
    def n_pass(self) -> int:
        return sum(1 for o in self.outcomes if o.status == "pass")

    @property
    def n_fail(self) -> int:
        return sum(1 for o in self.outcomes if o.status == "fail")

    @property
    def n_inconclusive(self) -> int:
        return sum(1 for o in self.outcomes if o.status == "inconclusive")

    @property
    def decided_fraction(self) -> float:
        if not self.outcomes:
            return 1.0
        return 1.0 - self.n_inconclusive / len(self.outcomes)

    @property
    def passed(self) -> bool:
        return self.n_fail == 0 and self.n_inconclusive == 0

    @property
    def max_certified_distance(self):
        """Largest distance proved to occur (limsup proxy)."""
        best = Fraction(0)
        for o in self.outcomes:
            if isinstance(o.lower, InfiniteDistance):
                return INFINITE_DISTANCE
            best = max(best, o.lower)
        return best

    @property
    def min_certified_distance(self):
        """Smallest distance proved to occur (liminf proxy)."""
        best = None
        for o in self.outcomes:
            if isinstance(o.upper, Fraction) and (best is None or o.upper < best):
                best = o.upper
        return best if best is not None else INFINITE_DISTANCE

    def to_dict(self) -> dict:
        return {
            "pair": self.pair,
            "events": [o.to_dict() for o in self.outcomes],
            "summary": {
                "pass": self.n_pass,
                "fail": self.n_fail,
                "inconclusive": self.n_inconclusive,
                "decided_fraction": self.decided_fraction,
                "max_certified_distance": _dist_str(self.max_certified_distance),
                "min_certified_distance": _dist_str(self.min_certified_distance),
            },
        }


def verify_scrambling(s: CodeStream, t: CodeStream, events,
                      eps=Fraction(1, 100), m_big=Fraction(3, 2),
                      prefix_len: int = 10 ** 5,
                      pair: str = "") -> ScrambleReport:
    """Check each scheduled event with certified cylinder enclosures.

    Close events pass when the enclosures force |x - y| < eps, far
    events when they force a gap above m_big or a positive gap with
    exactly one enclosure reaching infinity.  An enclosure too wide to
    decide yields "inconclusive", never a silent pass.
    """
    eps, m_big = Fraction(eps), Fraction(m_big)
    outcomes = []
    for ev in events:
        budget = min(prefix_len, ev.prefix_cap) if ev.prefix_cap else prefix_len
        thr = ev.threshold if (ev.kind == "close" and ev.threshold) else eps
        goal = Fraction(thr) / 8
        e1 = point_of_code(shift(s, ev.index), budget, goal).interval
        e2 = point_of_code(shift(t, ev.index + ev.t_offset), budget, goal).interval
        outcomes.append(_classify(ev, e1, e2, eps, m_big))
    return ScrambleReport(pair or "%s vs %s" % (s.label, t.label), outcomes)


def _orbit_point(r: ExtendedRational, e: int, n: int) -> ExtendedRational:
    if n >= e:
        return (ZERO, INF, ONE)[(n - e) % 3]
    y = r
    for _ in range(n):
        y = phi_rat(y)
    return y


def rational_vs_tau(r: ExtendedRational, t: CodeStream, k_range,
                    eps=Fraction(1, 100), m_big=Fraction(1000),
                    prefix_budget: int = 10 ** 6) -> ScrambleReport:
    """Period-3 phase alignment of a rational orbit against a tau-point.

    After its finite escape the rational cycles 0 -> infinity -> 1; the
    tau stream's separation runs park its point near infinity, 1 and 0
    in rotation at indices divisible by 3.  Matching finite phases give
    certified close events; the infinity phases give certified far
    events (an exactly-infinite orbit point against a bounded enclosure,
    or an enclosure pushed past every bound while the orbit sits at a
    finite cycle point).
    """
    if r.is_infinite:
        raise ValueError("r must be a finite rational")
    eps, m_big = Fraction(eps), Fraction(m_big)
    e = escape_time(r)
    events = schedule_events("rational_vs_tau", k_range, escape=e, eps=eps)
    outcomes = []
    for ev in events:
        rp = _orbit_point(r, e, ev.index)
        e1 = FareyInterval(rp, rp)
        budget = min(prefix_budget, ev.prefix_cap) if ev.prefix_cap else prefix_budget
        e2 = point_of_code(shift(t, ev.index), budget, eps / 8).interval
        outcomes.append(_classify(ev, e1, e2, eps, m_big))
    return ScrambleReport("rational %s vs %s" % (r, t.label), outcomes)


_G_NODES = (
    (Fraction(0), Fraction(1)),
    (Fraction(1, 6), Fraction(1, 3)),
    (Fraction(1, 3), Fraction(1, 6)),
    (Fraction(1, 2), Fraction(0)),
    (Fraction(1), Fraction(1, 2)),
)


def g_map(x) -> Fraction:
    """Piecewise-linear map on [0, 1] with a period-3 orbit {0, 1/2, 1}
    but no invariant scrambled set: 1/4 is its unique fixed point and
    everything in (1/6, 1/4) and (1/4, 1/3) has period 2."""
    x = Fraction(x)
    if x < 0 or x > 1:
        raise ValueError("g is defined on [0, 1]")
    for (x0, y0), (x1, y1) in zip(_G_NODES, _G_NODES[1:]):
        if x <= x1:
            return y0 + (x - x0) * (y1 - y0) / (x1 - x0)
    raise AssertionError("unreachable")
