import math
import random
from fractions import Fraction

import pytest

from fareyshift import (
    INF,
    INFINITE_DISTANCE,
    ONE,
    ZERO,
    CodeStream,
    ExtendedRational,
    FareyInterval,
    alpha_transitive,
    c_block,
    c_star_block,
    code_of_rational,
    cylinder,
    enumerate_admissible,
    g_map,
    mu_code,
    phi_interval_image,
    point_of_code,
    rational_vs_tau,
    schedule_events,
    shift,
    tau_code,
    verify_scrambling,
)
from fareyshift.scrambled import _build_alpha_blocks


def xr(n, d=1):
    return ExtendedRational(n, d)


BOUND_UNION = (
    FareyInterval(ZERO, xr(1, 3)),
    FareyInterval(xr(1, 2), ONE),
    FareyInterval(xr(2), xr(3)),
)


class TestMuCode:
    def test_zero_prefix(self):
        mu = mu_code("1")
        assert mu.prefix(120) == "0" * 120

    def test_head_and_parameter_cells(self):
        beta = CodeStream.periodic("", "01")
        mu = mu_code(beta)
        assert mu[120] == 0 and mu[121] == 1        # block head "01"
        assert mu[120 + 120 + 1] == beta[0]
        assert mu[120 + 2 * 120 + 1] == beta[1]
        assert mu[720 + 720 + 1] == beta[0]

    def test_block_against_literal_layout(self):
        beta = CodeStream.periodic("", "0110")
        mu = mu_code(beta)
        literal = "01" + "0" * 118
        for j in range(4):
            literal += "0" + str(beta[j]) + "0" * 118
        assert mu.prefix(240 + 4 * 120)[120:] == literal

    def test_admissible_windows(self):
        rng = random.Random(41)
        mu = mu_code("10")
        for _ in range(20):
            start = rng.randrange(0, math.factorial(10))
            window = "".join(str(mu[start + i]) for i in range(2000))
            assert "11" not in window

    def test_every_shift_lands_in_the_bounded_union(self):
        rng = random.Random(43)
        mu = mu_code("011010")
        for _ in range(100):
            n = rng.randrange(0, math.factorial(8))
            enc = point_of_code(shift(mu, n), 24, Fraction(1, 10 ** 6)).interval
            assert any(piece.contains_interval(enc) for piece in BOUND_UNION)

    def test_shift_by_one_commutes_with_phi(self):
        rng = random.Random(47)
        mu = mu_code("0101")
        for _ in range(100):
            n = rng.randrange(0, math.factorial(7))
            e0 = point_of_code(shift(mu, n), 14, Fraction(1, 10 ** 40)).interval
            e1 = point_of_code(shift(mu, n + 1), 13, Fraction(1, 10 ** 40)).interval
            pieces = phi_interval_image(e0)
            lo = min(p.lo for p in pieces)
            hi = max(p.hi for p in pieces)
            assert FareyInterval(lo, hi) == e1


class TestAlpha:
    def test_default_schedule_blocks(self):
        blocks = _build_alpha_blocks()
        assert blocks[0] == (1, "00000")
        assert blocks[1] == (24, "00001")
        assert blocks[2] == (120, "00010")
        starts = [s for s, _ in blocks]
        assert starts[:7] == [1, 24, 120, 720, 5040, 40320, 362880]

    def test_prefix_matches_literal(self):
        al = alpha_transitive()
        text = al.prefix(130)
        expect = list("0" * 130)
        expect[1:6] = "00000"
        expect[24:29] = "00001"
        expect[120:125] = "00010"
        assert text == "".join(expect)

    def test_custom_schedule_validation(self):
        with pytest.raises(ValueError):
            alpha_transitive(m_schedule=[1, 2])   # 2! = 2 <= 1! + 5 + 1
        with pytest.raises(ValueError):
            alpha_transitive(m_schedule=[4, 4])   # not strictly increasing
        al = alpha_transitive(m_schedule=[1, 4, 5])
        assert al.prefix(29)[24:29] == "00001"

    def test_admissible(self):
        al = alpha_transitive()
        assert "11" not in al.prefix(10 ** 5)


class TestEnumerateAdmissible:
    def test_first_entry_and_counts(self):
        words = enumerate_admissible(40)
        assert words[0] == "00000"
        assert sum(1 for w in words if len(w) == 5) == 13
        assert all("11" not in w for w in words)
        assert words == sorted(words, key=lambda w: (len(w), w))


class TestBlocks:
    def test_c_block_copies_and_terminates(self):
        zeros = CodeStream.zeros()
        assert c_block(zeros, 6, 11) == "000000"
        code = CodeStream.periodic("", "010")
        window = c_block(code, 6, 11)
        assert window == code.prefix(11)[6:11] + "0"
        assert len(window) == 6 and window.endswith("0")

    def test_c_star_block_two_shapes(self):
        zeros = CodeStream.zeros()
        assert c_star_block(zeros, 6, 14) == "100100100"
        ones_at_6 = CodeStream.procedural(lambda n: 1 if n == 6 else 0)
        assert c_star_block(ones_at_6, 6, 14) == "010010010"
        for code in (zeros, ones_at_6):
            assert c_star_block(code, 6, 14).endswith("0")

    def test_preconditions(self):
        zeros = CodeStream.zeros()
        with pytest.raises(ValueError):
            c_block(zeros, 4, 9)      # i < 5
        with pytest.raises(ValueError):
            c_block(zeros, 6, 12)     # length 7 not a multiple of 3
        with pytest.raises(ValueError):
            c_star_block(zeros, 6, 12)


def tau_block_literal(k, beta, alpha, x_codes):
    """Independent assembly of block k as explicit strings."""
    fk = math.factorial(k)
    quarter = fk // 4
    sub = fk // k            # (k-1)!
    half = sub // 2          # window length
    parts = [alpha.prefix(fk)]
    parts.append("0" * quarter + "100" * (quarter // 3)
                 + "001" * (quarter // 3) + "010" * (quarter // 3))
    parts.append("".join((str(beta[j]) + "00") * (sub // 3) for j in range(k)))
    for i in range(1, k - 2):
        code = x_codes[(i - 1) % len(x_codes)]
        src = (3 + i) * fk
        windows = []
        for j in range(1, k + 1):
            windows.append(c_block(code, src + (j - 1) * (half - 1),
                                   src + j * (half - 1)))
        for j in range(1, k + 1):
            windows.append(c_star_block(code, src + fk // 2 + (j - 1) * (half - 1),
                                        src + fk // 2 + j * (half - 1)))
        parts.append("".join(windows))
    return "".join(parts)


class TestTauCode:
    def setup_method(self):
        self.alpha = alpha_transitive()
        self.tracked = [code_of_rational(ONE), code_of_rational(xr(3, 5))]
        self.beta = CodeStream.periodic("", "0110")
        self.tau = tau_code(self.beta, self.alpha, self.tracked)

    def test_preamble(self):
        text = self.tau.prefix(120)
        assert text[:119] == self.alpha.prefix(119)
        assert text[119] == "0"

    def test_block_5_matches_literal_assembly(self):
        got = self.tau.prefix(720)[120:720]
        expect = tau_block_literal(5, self.beta, self.alpha, self.tracked)
        assert got == expect

    def test_block_6_matches_literal_assembly(self):
        got = self.tau.prefix(math.factorial(7))[720:]
        expect = tau_block_literal(6, self.beta, self.alpha, self.tracked)
        assert got == expect

    def test_block_7_matches_literal_assembly(self):
        # four tracking targets here, so the two supplied codes recycle
        got = self.tau.prefix(math.factorial(8))[5040:]
        expect = tau_block_literal(7, self.beta, self.alpha, self.tracked)
        assert got == expect

    def test_separation_run_position(self):
        k, fk = 5, 120
        start = fk + fk + fk // 4
        assert self.tau.prefix(start + 9)[start:] == "100100100"

    def test_beta_cells(self):
        for k in (5, 6):
            fk = math.factorial(k)
            sub = fk // k
            for j in range(k):
                assert self.tau[3 * fk + j * sub] == self.beta[j]

    def test_admissible_windows(self):
        rng = random.Random(53)
        for _ in range(10):
            start = rng.randrange(0, math.factorial(10))
            window = "".join(str(self.tau[start + i]) for i in range(2000))
            assert "11" not in window

    def test_admissible_full_size_window(self):
        # one window at the stated sampling scale for each stream family
        rng = random.Random(61)
        for stream in (self.tau, mu_code("0110"), alpha_transitive()):
            start = rng.randrange(0, math.factorial(10))
            assert "11" not in shift(stream, start).prefix(10 ** 5)

    def test_needs_tracked_codes(self):
        with pytest.raises(ValueError):
            tau_code("01", self.alpha, [])


class TestBlockBookkeeping:
    def test_part_lengths_tile_each_block(self):
        for k in range(5, 10):
            fk = math.factorial(k)
            assert fk + fk + fk + (k - 3) * fk == k * fk

    def test_sub_block_lengths_are_integers(self):
        for k in range(5, 10):
            fk = math.factorial(k)
            assert fk % 4 == 0 and fk % 12 == 0
            sub = math.factorial(k - 1)
            assert sub % 3 == 0 and sub % 2 == 0 and (sub // 2) % 3 == 0

    def test_layout_offsets(self):
        from fareyshift import BlockLayout
        for k in range(5, 10):
            lay = BlockLayout.for_k(k)
            fk = math.factorial(k)
            assert (lay.start, lay.length) == (fk, k * fk)
            assert lay.part_start(0) == fk
            assert lay.part_start(k - 1) + lay.string_len == math.factorial(k + 1)
            assert lay.run_start(0) == 2 * fk + fk // 4
            assert lay.encode_cell(0) == 3 * fk
            assert lay.tracking_start(1) == 4 * fk
            # 2k windows tile each tracking string exactly
            assert 2 * k * lay.window == lay.string_len
            with pytest.raises(ValueError):
                lay.tracking_start(k - 2)


class TestScheduleEvents:
    def test_theorem1_indices(self):
        ev = schedule_events("theorem1", (6, 6), shift=1)
        assert [(e.kind, e.index) for e in ev] == [("close", 722), ("far", 721)]
        ev = schedule_events("theorem1", (6, 6), diff_indices=[0])
        assert ("far", 1441) in [(e.kind, e.index) for e in ev]

    def test_theorem1_skips_cells_beyond_block(self):
        ev = schedule_events("theorem1", (5, 5), diff_indices=[0, 7])
        far = [e for e in ev if e.kind == "far"]
        assert [e.index for e in far] == [241]  # m = 7 needs k >= 9

    def test_theorem2_run_event(self):
        ev = schedule_events("theorem2", (6, 6), shift=1)
        far = [e for e in ev if e.kind == "far"]
        assert far[0].index == 2 * 720 + 180 - 1
        assert far[0].prefix_cap == 180 - 1 - 3

    def test_rational_events_alignment(self):
        ev = schedule_events("rational_vs_tau", (6, 6), escape=1)
        assert all(e.kind in ("close", "far") for e in ev)
        closes = [e for e in ev if e.kind == "close"]
        assert len(closes) == 2  # one finite match per finite cycle point

    def test_rational_close_needs_enough_run_length(self):
        # at k = 5 the separation runs only pin the point to within ~1/20,
        # so no close event at the default 1/100 tolerance is scheduled
        ev = schedule_events("rational_vs_tau", (5, 5), escape=1)
        assert not [e for e in ev if e.kind == "close"]
        loose = schedule_events("rational_vs_tau", (5, 5), escape=1,
                                eps=Fraction(1, 10))
        assert [e for e in loose if e.kind == "close"]

    def test_k_range_guard(self):
        with pytest.raises(ValueError):
            schedule_events("theorem1", (5, 12))
        with pytest.raises(ValueError):
            schedule_events("theorem1", (4, 6))
        assert schedule_events("theorem1", (5, 12), max_k=12, shift=1)


class TestVerifyScrambling:
    def test_identical_streams_trivially_close(self):
        mu = mu_code("0")
        ev = [e for e in schedule_events("theorem1", (5, 6)) if e.kind == "close"]
        rep = verify_scrambling(mu, mu, ev)
        assert rep.n_pass == len(ev) and rep.n_fail == 0

    def test_theorem1_pair_margins(self):
        s, t = mu_code("01"), mu_code("10")
        ev = schedule_events("theorem1", (5, 7), diff_indices=[0, 1])
        rep = verify_scrambling(s, t, ev, eps=Fraction(1, 100), m_big=Fraction(3, 2))
        assert rep.passed
        far_lowers = [o.lower for o in rep.outcomes if o.event.kind == "far"]
        assert all(lo > Fraction(3, 2) for lo in far_lowers)
        assert max(far_lowers) > Fraction(199, 100)  # margins approach 2
        assert rep.min_certified_distance < Fraction(1, 100)

    def test_theorem1_shifted_pair(self):
        s, t = mu_code("0011"), mu_code("0011")
        for i in (1, 2, 3):
            ev = schedule_events("theorem1", (5, 6), shift=i)
            rep = verify_scrambling(s, shift(t, i), ev)
            assert rep.passed, i

    def test_theorem2_shifted_pair_unbounded(self):
        tracked = [code_of_rational(ONE)]
        s = tau_code("0110", alpha_transitive(), tracked)
        t = tau_code("1001", alpha_transitive(), tracked)
        ev = schedule_events("theorem2", (5, 7), shift=2)
        rep = verify_scrambling(s, shift(t, 2), ev, m_big=Fraction(1000))
        assert rep.passed
        for o in rep.outcomes:
            if o.event.kind == "far":
                assert o.upper == INFINITE_DISTANCE  # enclosure reaches infinity

    def test_theorem2_beta_separation(self):
        tracked = [code_of_rational(ONE)]
        s = tau_code("0110", alpha_transitive(), tracked)
        t = tau_code("1001", alpha_transitive(), tracked)
        ev = schedule_events("theorem2", (5, 7), diff_index=0)
        rep = verify_scrambling(s, t, ev, m_big=Fraction(1000))
        assert rep.passed

    def test_tracked_windows(self):
        tracked_code = CodeStream.periodic("", "00100")
        s = tau_code("01", alpha_transitive(), [tracked_code])
        ev = schedule_events("theorem2_tracked", (6, 6), track_index=1,
                             x_code=tracked_code)
        rep = verify_scrambling(tracked_code, s, ev, eps=Fraction(1, 100),
                                m_big=Fraction(1000))
        assert rep.n_fail == 0
        statuses = {o.event.kind: set() for o in rep.outcomes}
        for o in rep.outcomes:
            statuses[o.event.kind].add(o.status)
        assert "pass" in statuses["far"]
        assert "pass" in statuses["close"]

    def test_report_json_round_trip(self):
        import json
        s, t = mu_code("01"), mu_code("10")
        ev = schedule_events("theorem1", (5, 5), diff_indices=[0])
        rep = verify_scrambling(s, t, ev)
        payload = json.dumps(rep.to_dict(), sort_keys=True)
        assert '"pass"' in payload and '"index"' in payload


class TestRationalVsTau:
    def setup_method(self):
        tracked = [code_of_rational(ONE)]
        self.tau = tau_code("011010", alpha_transitive(), tracked)

    @pytest.mark.parametrize("r", ["1/1", "0/1", "3/5", "7/3"])
    def test_alignment_certified(self, r):
        rep = rational_vs_tau(ExtendedRational.parse(r), self.tau, (5, 7))
        assert rep.n_fail == 0
        assert rep.decided_fraction >= 0.9
        kinds = {o.event.kind for o in rep.outcomes}
        assert kinds == {"close", "far"}
        assert rep.max_certified_distance == INFINITE_DISTANCE
        assert rep.min_certified_distance < Fraction(1, 100)

    def test_rejects_infinite_input(self):
        with pytest.raises(ValueError):
            rational_vs_tau(INF, self.tau, (5, 6))


class TestGMap:
    def test_node_values(self):
        assert g_map(Fraction(0)) == 1
        assert g_map(Fraction(1)) == Fraction(1, 2)
        assert g_map(Fraction(1, 2)) == 0
        assert g_map(Fraction(1, 6)) == Fraction(1, 3)
        assert g_map(Fraction(1, 3)) == Fraction(1, 6)

    def test_unique_fixed_point(self):
        assert g_map(Fraction(1, 4)) == Fraction(1, 4)

    def test_period_two_band(self):
        rng = random.Random(59)
        count = 0
        while count < 50:
            den = rng.randrange(13, 600)
            num = rng.randrange(1, den)
            x = Fraction(num, den)
            if not (Fraction(1, 6) < x < Fraction(1, 3)) or x == Fraction(1, 4):
                continue
            assert g_map(g_map(x)) == x
            assert g_map(x) != x
            count += 1

    def test_period_three_orbit(self):
        for start in (Fraction(0), Fraction(1, 2), Fraction(1)):
            x = start
            for _ in range(3):
                x = g_map(x)
            assert x == start

    def test_domain_guard(self):
        with pytest.raises(ValueError):
            g_map(Fraction(-1, 2))
