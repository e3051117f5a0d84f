"""Shared factories for hand-built miniature problem instances."""

from __future__ import annotations

import numpy as np
import pytest

from xhaulfair import (
    CloudKind,
    CloudNode,
    CostModel,
    Point2D,
    Reachability,
    RuNode,
    Scenario,
    SplitOption,
    SplitterTree,
    TrafficClass,
    build_paper_scenario,
)

TTI_S = 0.5e-3


def make_ru(i, mno="MNO-1", w_ul=1.0e9, w_dl=1.0e9, g_ul=10.0, g_dl=10.0,
            low_latency=False):
    return RuNode(
        id=f"R{i:02d}", mno_id=mno, position=Point2D(0.0, 0.0),
        traffic_class=(TrafficClass.LOW_LATENCY if low_latency
                       else TrafficClass.BROADBAND),
        w_ul_bps=w_ul, w_dl_bps=w_dl,
        gamma_ul_gops=g_ul, gamma_dl_gops=g_dl,
        eta_ul_gops=1.0, eta_dl_gops=1.0,
        h_ul_gops=100.0, h_dl_gops=100.0,
        delta_h_s=100.0e-6 if low_latency else 1.0e-3,
        delta_rdc_s=90.0e-6 if low_latency else 0.5e-3,
        split=SplitOption.split_7_2(),
    )


def make_edge(j, mno="MNO-1", g_ul=1.0e4, g_dl=1.0e4, b_ul=25.0e9, b_dl=25.0e9,
              codba_s=0.0, burst_s=TTI_S):
    return CloudNode(
        id=f"E{j}", kind=CloudKind.EDGE, attachment=Point2D(0.0, 0.0),
        g_ul_gops=g_ul, g_dl_gops=g_dl, b_ul_bps=b_ul, b_dl_bps=b_dl,
        burst_interval_s=burst_s, codba_queue_delay_s=codba_s, mno_id=mno,
    )


def make_ocloud(j, g_ul=1.0e4, g_dl=1.0e4, b_ul=100.0e9, b_dl=100.0e9,
                codba_s=0.0, burst_s=TTI_S):
    return CloudNode(
        id=f"Q{j}", kind=CloudKind.OCLOUD, attachment=Point2D(0.0, 0.0),
        g_ul_gops=g_ul, g_dl_gops=g_dl, b_ul_bps=b_ul, b_dl_bps=b_dl,
        burst_interval_s=burst_s, codba_queue_delay_s=codba_s,
    )


def make_scenario(rus, edges, oclouds, d_km=0.0, cost_model=None):
    """Tiny fully reachable scenario with uniform fiber distance d_km."""
    n_r, n_e, n_q = len(rus), len(edges), len(oclouds)
    tree = SplitterTree(
        level1_splitters=[Point2D(0.0, 0.0)],
        members=[list(range(n_r))],
        level2_splitter=Point2D(0.0, 0.0),
        co_positions=[c.attachment for c in oclouds],
        ru_positions=[r.position for r in rus],
    )
    reach = Reachability(
        z_re=np.ones((n_r, n_e), dtype=int),
        z_rq=np.ones((n_r, n_q), dtype=int),
        d_re=np.full((n_r, n_e), float(d_km)),
        d_rq=np.full((n_r, n_q), float(d_km)),
    )
    return Scenario(
        name="tiny", area_km=(5.0, 5.0), rus=rus, edges=edges, oclouds=oclouds,
        tree=tree, reach=reach, cost_model=cost_model or CostModel(),
    )


@pytest.fixture(scope="session")
def paper_scenario():
    return build_paper_scenario(seed=0, edge_ratio=0.5, load_fraction=0.8)
