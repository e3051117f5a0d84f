"""Independent double-entry feasibility audit.

Re-implements every constraint family with plain scalar loops, directly
from the inequality definitions, sharing no evaluation code with the
allocation core. Used to cross-check both check_feasible and every
solver's output.
"""

from __future__ import annotations

import math

FIBER_SPEED_KM_S = 2.0e5


def audit_feasible(a, scenario) -> tuple[bool, dict[int, list[str]]]:
    """Return (feasible, violations-per-RU) for an assignment.

    The violations dict maps RU index to every violated constraint family,
    not just the first one.
    """
    n_ru = len(scenario.rus)
    n_e = len(scenario.edges)
    n_q = len(scenario.oclouds)
    violations: dict[int, list[str]] = {}

    def note(r, tag):
        violations.setdefault(r, []).append(tag)

    # x <= z, elementwise
    for r in range(n_ru):
        for e in range(n_e):
            if a.x_re[r][e] > scenario.reach.z_re[r][e]:
                note(r, "reachability")
        for q in range(n_q):
            if a.x_rq[r][q] > scenario.reach.z_rq[r][q]:
                note(r, "reachability")

    # at most one cloud per RU
    for r in range(n_ru):
        total = 0
        for e in range(n_e):
            total += int(a.x_re[r][e])
        for q in range(n_q):
            total += int(a.x_rq[r][q])
        if total > 1:
            note(r, "single_assignment")

    # aggregate demand per cloud, computed by direct summation
    edge_wul = [sum(scenario.rus[r].w_ul_bps for r in range(n_ru) if a.x_re[r][e]) for e in range(n_e)]
    edge_wdl = [sum(scenario.rus[r].w_dl_bps for r in range(n_ru) if a.x_re[r][e]) for e in range(n_e)]
    edge_gul = [sum(scenario.rus[r].gamma_ul_gops for r in range(n_ru) if a.x_re[r][e]) for e in range(n_e)]
    edge_gdl = [sum(scenario.rus[r].gamma_dl_gops for r in range(n_ru) if a.x_re[r][e]) for e in range(n_e)]
    oc_wul = [sum(scenario.rus[r].w_ul_bps for r in range(n_ru) if a.x_rq[r][q]) for q in range(n_q)]
    oc_wdl = [sum(scenario.rus[r].w_dl_bps for r in range(n_ru) if a.x_rq[r][q]) for q in range(n_q)]
    oc_gul = [sum(scenario.rus[r].gamma_ul_gops for r in range(n_ru) if a.x_rq[r][q]) for q in range(n_q)]
    oc_gdl = [sum(scenario.rus[r].gamma_dl_gops for r in range(n_ru) if a.x_rq[r][q]) for q in range(n_q)]

    tti = scenario.tti_s
    for r in range(n_ru):
        ru = scenario.rus[r]
        ul_lat = 0.0
        dl_lat = 0.0
        proc_ul = None
        proc_dl = None
        hosted = False
        for e in range(n_e):
            if not a.x_re[r][e]:
                continue
            hosted = True
            c = scenario.edges[e]
            bursts = math.ceil(tti / c.burst_interval_s)
            ul_lat += c.codba_queue_delay_s + scenario.reach.d_re[r][e] / FIBER_SPEED_KM_S
            ul_lat += bursts * edge_wul[e] * c.burst_interval_s / c.b_ul_bps
            dl_lat += scenario.reach.d_re[r][e] / FIBER_SPEED_KM_S
            dl_lat += bursts * edge_wdl[e] * c.burst_interval_s / c.b_dl_bps
            proc_ul = ru.eta_ul_gops / ru.h_ul_gops + edge_gul[e] / c.g_ul_gops
            proc_dl = ru.eta_dl_gops / ru.h_dl_gops + edge_gdl[e] / c.g_dl_gops
        for q in range(n_q):
            if not a.x_rq[r][q]:
                continue
            hosted = True
            c = scenario.oclouds[q]
            bursts = math.ceil(tti / c.burst_interval_s)
            ul_lat += c.codba_queue_delay_s + scenario.reach.d_rq[r][q] / FIBER_SPEED_KM_S
            ul_lat += bursts * oc_wul[q] * c.burst_interval_s / c.b_ul_bps
            dl_lat += scenario.reach.d_rq[r][q] / FIBER_SPEED_KM_S
            dl_lat += bursts * oc_wdl[q] * c.burst_interval_s / c.b_dl_bps
            proc_ul = ru.eta_ul_gops / ru.h_ul_gops + oc_gul[q] / c.g_ul_gops
            proc_dl = ru.eta_dl_gops / ru.h_dl_gops + oc_gdl[q] / c.g_dl_gops
        if not hosted:
            continue
        if ul_lat > ru.delta_h_s + 1e-15:
            note(r, "uplink_latency")
        if dl_lat > ru.delta_h_s + 1e-15:
            note(r, "downlink_latency")
        bound = ru.delta_rdc_s / tti + 1e-12
        if proc_ul is not None and proc_ul > bound:
            note(r, "processing_ul")
        if proc_dl is not None and proc_dl > bound:
            note(r, "processing_dl")

    return (len(violations) == 0), violations
