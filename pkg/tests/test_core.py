"""Allocation core: shares, latencies, feasibility, and costs."""

import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xhaulfair import (
    Assignment,
    check_feasible,
    cost_vector,
    objective,
)
from xhaulfair.core import (
    allocation_report,
    downlink_latency,
    gops_shares,
    processing_latency_ok,
    ru_cost,
    throughput_shares,
    uplink_latency,
)

from conftest import make_edge, make_ocloud, make_ru, make_scenario


class TestShares:
    def test_single_ru_gets_full_capacity(self):
        s = make_scenario([make_ru(0)], [make_edge(0, b_ul=6e9, b_dl=4e9)], [])
        a = Assignment.from_vector([("e", 0)], 1, 0)
        b_re, _ = throughput_shares(a, s.rus, s.edges, s.oclouds)
        assert b_re[0, 0] == pytest.approx(10e9, rel=1e-6)

    def test_equal_demands_split_evenly(self):
        rus = [make_ru(0), make_ru(1)]
        s = make_scenario(rus, [make_edge(0, b_ul=20e9, b_dl=20e9)], [])
        a = Assignment.from_vector([("e", 0), ("e", 0)], 1, 0)
        b_re, _ = throughput_shares(a, s.rus, s.edges, s.oclouds)
        assert b_re[0, 0] == pytest.approx(20e9, rel=1e-6)
        assert b_re[0, 0] == pytest.approx(b_re[1, 0])

    def test_proportional_split_1_2_3(self):
        # UL demands 1:2:3 Gbps on a 25 Gbps UL link, no DL demand
        rus = [make_ru(i, w_ul=(i + 1) * 1e9, w_dl=0.0) for i in range(3)]
        s = make_scenario(rus, [make_edge(0, b_ul=25e9, b_dl=25e9)], [])
        a = Assignment.from_vector([("e", 0)] * 3, 1, 0)
        b_re, _ = throughput_shares(a, s.rus, s.edges, s.oclouds)
        for i, frac in enumerate((1 / 6, 2 / 6, 3 / 6)):
            assert b_re[i, 0] == pytest.approx(25e9 * frac, rel=1e-6)

    def test_gops_proportional_split(self):
        # 100:300 GOPS demand on a 1e4 GOPS cloud -> 2500 and 7500
        rus = [make_ru(0, g_ul=100.0, g_dl=0.0), make_ru(1, g_ul=300.0, g_dl=0.0)]
        s = make_scenario(rus, [make_edge(0, g_ul=1.0e4, g_dl=1.0e4)], [])
        a = Assignment.from_vector([("e", 0), ("e", 0)], 1, 0)
        g_re, _ = gops_shares(a, s.rus, s.edges, s.oclouds)
        assert g_re[0, 0] == pytest.approx(2500.0, rel=1e-6)
        assert g_re[1, 0] == pytest.approx(7500.0, rel=1e-6)

    def test_conservation_on_random_pools(self):
        rng = random.Random(3)
        for _ in range(200):
            n = rng.randint(1, 6)
            rus = [make_ru(i, w_ul=rng.uniform(1e8, 5e9), w_dl=rng.uniform(1e8, 5e9))
                   for i in range(n)]
            s = make_scenario(rus, [make_edge(0)], [])
            a = Assignment.from_vector([("e", 0)] * n, 1, 0)
            b_re, _ = throughput_shares(a, s.rus, s.edges, s.oclouds)
            total_cap = s.edges[0].b_ul_bps + s.edges[0].b_dl_bps
            assert b_re[:, 0].sum() == pytest.approx(total_cap, rel=1e-9)

    @given(st.floats(min_value=0.1, max_value=10.0))
    @settings(max_examples=50, deadline=None)
    def test_scale_invariance(self, c):
        rus = [make_ru(0, w_ul=1e9, w_dl=2e9), make_ru(1, w_ul=3e9, w_dl=1e9)]
        scaled = [make_ru(0, w_ul=c * 1e9, w_dl=2e9), make_ru(1, w_ul=c * 3e9, w_dl=1e9)]
        a = Assignment.from_vector([("e", 0), ("e", 0)], 1, 0)
        base = make_scenario(rus, [make_edge(0)], [])
        scl = make_scenario(scaled, [make_edge(0)], [])
        w_b = [r.w_ul_bps for r in rus]
        w_s = [r.w_ul_bps for r in scaled]
        # the UL share proportions survive a common UL rescale
        b_b, _ = throughput_shares(a, base.rus, base.edges, base.oclouds)
        b_s, _ = throughput_shares(a, scl.rus, scl.edges, scl.oclouds)
        ul_b = w_b[0] * 25e9 / sum(w_b)
        ul_s = w_s[0] * 25e9 / sum(w_s)
        assert ul_b == pytest.approx(ul_s, rel=1e-9)

    def test_incumbent_share_never_grows(self):
        rus = [make_ru(0), make_ru(1)]
        s = make_scenario(rus, [make_edge(0)], [])
        alone = Assignment.from_vector([("e", 0), None], 1, 0)
        both = Assignment.from_vector([("e", 0), ("e", 0)], 1, 0)
        b1, _ = throughput_shares(alone, s.rus, s.edges, s.oclouds)
        b2, _ = throughput_shares(both, s.rus, s.edges, s.oclouds)
        assert b2[0, 0] <= b1[0, 0]


class TestLatency:
    def test_propagation_only(self):
        s = make_scenario([make_ru(0, w_ul=0.0, w_dl=0.0)], [make_edge(0)], [],
                          d_km=5.0)
        a = Assignment.from_vector([("e", 0)], 1, 0)
        assert uplink_latency(0, a, s) == pytest.approx(25e-6)
        assert downlink_latency(0, a, s) == pytest.approx(25e-6)

    def test_term_by_term_sum(self):
        # 15 us Co-DBA + 0 propagation + 30 us transmission = 45 us
        edge = make_edge(0, b_ul=1e9, b_dl=1e9, codba_s=15e-6)
        s = make_scenario([make_ru(0, w_ul=6e7, w_dl=0.0)], [edge], [])
        a = Assignment.from_vector([("e", 0)], 1, 0)
        assert uplink_latency(0, a, s) == pytest.approx(45e-6)
        # downlink has no Co-DBA term and no DL demand here
        assert downlink_latency(0, a, s) == pytest.approx(0.0, abs=1e-15)

    def test_unassigned_ru_raises(self):
        s = make_scenario([make_ru(0)], [make_edge(0)], [])
        a = Assignment.from_vector([None], 1, 0)
        with pytest.raises(ValueError):
            uplink_latency(0, a, s)

    def test_adding_tenant_never_reduces_transmission(self):
        rus = [make_ru(0), make_ru(1)]
        s = make_scenario(rus, [make_edge(0)], [])
        alone = Assignment.from_vector([("e", 0), None], 1, 0)
        both = Assignment.from_vector([("e", 0), ("e", 0)], 1, 0)
        assert uplink_latency(0, both, s) >= uplink_latency(0, alone, s)


class TestProcessingBudget:
    def test_direct_comparison(self):
        # eta/H = 0.05, cloud load = 0.10, bound 0.18 -> ok
        ru = make_ru(0, g_ul=100.0, g_dl=100.0)
        ru.eta_ul_gops = ru.eta_dl_gops = 5.0
        ru.h_ul_gops = ru.h_dl_gops = 100.0
        ru.delta_rdc_s = 0.18 * 0.5e-3
        s = make_scenario([ru], [make_edge(0, g_ul=1000.0, g_dl=1000.0)], [])
        a = Assignment.from_vector([("e", 0)], 1, 0)
        assert processing_latency_ok(0, a, s) == (True, True)

    def test_boundary_is_inclusive(self):
        ru = make_ru(0, g_ul=100.0, g_dl=100.0)
        ru.eta_ul_gops = ru.eta_dl_gops = 0.0
        ru.delta_rdc_s = (100.0 / 1000.0) * 0.5e-3
        s = make_scenario([ru], [make_edge(0, g_ul=1000.0, g_dl=1000.0)], [])
        a = Assignment.from_vector([("e", 0)], 1, 0)
        assert processing_latency_ok(0, a, s) == (True, True)

    def test_overload_fails(self):
        ru = make_ru(0, g_ul=1100.0, g_dl=1100.0)
        s = make_scenario([ru], [make_edge(0, g_ul=1000.0, g_dl=1000.0)], [])
        a = Assignment.from_vector([("e", 0)], 1, 0)
        ok_ul, ok_dl = processing_latency_ok(0, a, s)
        assert not ok_ul and not ok_dl


class TestFeasibility:
    def test_empty_assignment_is_feasible(self):
        s = make_scenario([make_ru(0)], [make_edge(0)], [])
        rep = check_feasible(Assignment.empty(1, 1, 0), s)
        assert rep.feasible
        assert rep.unassigned == [0]

    def test_double_assignment_flagged(self):
        s = make_scenario([make_ru(0)], [make_edge(0), make_edge(1)], [])
        a = Assignment.empty(1, 2, 0)
        a.x_re[0, 0] = a.x_re[0, 1] = 1
        rep = check_feasible(a, s)
        assert not rep.feasible
        assert rep.first_violation[0] == "single_assignment"

    def test_reachability_violation_flagged(self):
        s = make_scenario([make_ru(0)], [make_edge(0)], [])
        s.reach.z_re[0, 0] = 0
        a = Assignment.from_vector([("e", 0)], 1, 0)
        rep = check_feasible(a, s)
        assert not rep.feasible
        assert rep.first_violation[0] == "reachability"


class TestCost:
    def test_unassigned_ru_pays_fee_only(self):
        s = make_scenario([make_ru(0)], [make_edge(0)], [])
        a = Assignment.empty(1, 1, 0)
        b_re, b_rq = throughput_shares(a, s.rus, s.edges, s.oclouds)
        g_re, g_rq = gops_shares(a, s.rus, s.edges, s.oclouds)
        assert ru_cost(0, a, b_re, b_rq, g_re, g_rq, s) == pytest.approx(100.0)

    def test_same_mno_edge_hand_value(self):
        # alone on a same-MNO edge: 10 Gbps share, 1000 GOPS share
        # 100 + 0.5*10 + 1.5*0.5*1000 = 855
        edge = make_edge(0, mno="MNO-1", b_ul=6e9, b_dl=4e9, g_ul=600.0, g_dl=400.0)
        s = make_scenario([make_ru(0, mno="MNO-1")], [edge], [])
        a = Assignment.from_vector([("e", 0)], 1, 0)
        assert cost_vector(a, s)[0] == pytest.approx(855.0, rel=1e-6)

    def test_other_mno_edge_hand_value(self):
        # same shares without the discount: 100 + 5 + 1500 = 1605
        edge = make_edge(0, mno="MNO-2", b_ul=6e9, b_dl=4e9, g_ul=600.0, g_dl=400.0)
        s = make_scenario([make_ru(0, mno="MNO-1")], [edge], [])
        a = Assignment.from_vector([("e", 0)], 1, 0)
        assert cost_vector(a, s)[0] == pytest.approx(1605.0, rel=1e-6)

    def test_objective_is_max_assigned_cost(self):
        rus = [make_ru(0, w_ul=4e9, w_dl=0.0), make_ru(1, w_ul=1e9, w_dl=0.0)]
        s = make_scenario(rus, [make_edge(0), make_edge(1)], [])
        a = Assignment.from_vector([("e", 0), ("e", 1)], 2, 0)
        costs = cost_vector(a, s)
        assert objective(a, s) == max(costs)

    def test_objective_requires_assignment(self):
        s = make_scenario([make_ru(0)], [make_edge(0)], [])
        with pytest.raises(ValueError):
            objective(Assignment.empty(1, 1, 0), s)

    def test_report_per_mno_sums_to_per_ru(self):
        rus = [make_ru(0, mno="MNO-1"), make_ru(1, mno="MNO-2")]
        s = make_scenario(rus, [make_edge(0)], [make_ocloud(0)])
        a = Assignment.from_vector([("e", 0), ("q", 0)], 1, 1)
        rep = allocation_report(a, s)
        assert sum(rep.per_mno_cost.values()) == pytest.approx(sum(rep.per_ru_cost))
