"""Allocation core: decision variables, shares, constraints, and costs.

Single source of truth for both solvers and the feasibility checker.
Throughput shares are in bits/s, compute shares in GOPS/TTI, latencies in
seconds, costs in currency units per day. Throughput shares are converted
to Gbps exactly once, inside ru_cost, where the per-Gbps price applies.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .radio import SplitOption
from .topology import Point2D, Reachability

#: Speed of light in fiber, km/s.
FIBER_SPEED_KM_S = 2.0e5

#: Small positive constant guarding empty-cloud denominators in the
#: proportional-share formulas.
EPSILON = 1e-9

#: Costs are compared after rounding to this many decimal places.
COST_DECIMALS = 6


class TrafficClass(enum.Enum):
    LOW_LATENCY = "low_latency"
    BROADBAND = "broadband"


class CloudKind(enum.Enum):
    EDGE = "edge"
    OCLOUD = "ocloud"


@dataclass
class RuNode:
    """A radio unit with its demands, budgets, and ownership."""

    id: str
    mno_id: str
    position: Point2D
    traffic_class: TrafficClass
    w_ul_bps: float
    w_dl_bps: float
    gamma_ul_gops: float    # DU/CU demand, GOPS/TTI
    gamma_dl_gops: float
    eta_ul_gops: float      # RU-side demand, GOPS/TTI
    eta_dl_gops: float
    h_ul_gops: float        # RU-side capacity, GOPS/TTI
    h_dl_gops: float
    delta_h_s: float        # one-way x-haul latency bound
    delta_rdc_s: float      # RU/DU/CU processing latency bound
    split: SplitOption

    def __post_init__(self):
        for name in ("w_ul_bps", "w_dl_bps", "gamma_ul_gops", "gamma_dl_gops",
                     "eta_ul_gops", "eta_dl_gops", "h_ul_gops", "h_dl_gops"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{self.id}: {name} must be >= 0")
        if self.delta_h_s <= 0.0 or self.delta_rdc_s <= 0.0:
            raise ValueError(f"{self.id}: latency bounds must be > 0")
        if self.eta_ul_gops > self.h_ul_gops or self.eta_dl_gops > self.h_dl_gops:
            raise ValueError(f"{self.id}: RU-side demand exceeds RU capacity")


@dataclass
class CloudNode:
    """An Edge-Cloud or O-Cloud with link and compute capacities."""

    id: str
    kind: CloudKind
    attachment: Point2D
    g_ul_gops: float        # GOPS/TTI
    g_dl_gops: float
    b_ul_bps: float         # serving-PON link capacity
    b_dl_bps: float
    burst_interval_s: float
    codba_queue_delay_s: float = 0.0   # uplink only
    mno_id: str | None = None          # edges only; O-Clouds are neutral

    def __post_init__(self):
        if min(self.g_ul_gops, self.g_dl_gops, self.b_ul_bps, self.b_dl_bps) <= 0.0:
            raise ValueError(f"{self.id}: capacities must be > 0")
        if self.burst_interval_s <= 0.0:
            raise ValueError(f"{self.id}: burst interval must be > 0")
        if self.kind is CloudKind.OCLOUD and self.mno_id is not None:
            raise ValueError(f"{self.id}: O-Clouds carry no MNO ownership")


@dataclass
class CostModel:
    """Leasing prices and the same-operator discount."""

    default_fee: float = 100.0        # currency/day per RU
    per_gbps: float = 0.5             # currency per Gbps of throughput share
    per_gops: float = 1.5             # currency per GOPS/TTI of compute share
    gamma_same_mno: float = 0.5
    gamma_other: float = 1.0

    def __post_init__(self):
        if min(self.default_fee, self.per_gbps, self.per_gops,
               self.gamma_same_mno, self.gamma_other) < 0.0:
            raise ValueError("cost parameters must be >= 0")
        if self.gamma_same_mno > self.gamma_other:
            raise ValueError("gamma_same_mno must not exceed gamma_other")

    def discount(self, ru: RuNode, cloud: CloudNode) -> float:
        if cloud.kind is CloudKind.EDGE and cloud.mno_id == ru.mno_id:
            return self.gamma_same_mno
        return self.gamma_other


@dataclass
class Assignment:
    """Binary RU-to-cloud decision matrices."""

    x_re: np.ndarray    # (n_ru, n_edge) in {0,1}
    x_rq: np.ndarray    # (n_ru, n_ocloud) in {0,1}

    @property
    def n_ru(self) -> int:
        return self.x_re.shape[0]

    @property
    def unassigned(self) -> list[int]:
        rows = self.x_re.sum(axis=1) + self.x_rq.sum(axis=1)
        return [int(r) for r in np.flatnonzero(rows == 0)]

    def cloud_of(self, r: int) -> tuple[str, int] | None:
        """('e', j) or ('q', j) for the cloud hosting RU r, None if unassigned."""
        es = np.flatnonzero(self.x_re[r])
        if len(es):
            return ("e", int(es[0]))
        qs = np.flatnonzero(self.x_rq[r])
        if len(qs):
            return ("q", int(qs[0]))
        return None

    @classmethod
    def empty(cls, n_ru: int, n_edge: int, n_ocloud: int) -> "Assignment":
        return cls(np.zeros((n_ru, n_edge), dtype=int),
                   np.zeros((n_ru, n_ocloud), dtype=int))

    @classmethod
    def from_vector(cls, choices, n_edge: int, n_ocloud: int) -> "Assignment":
        """Build from per-RU choices: None, ('e', j) or ('q', j)."""
        a = cls.empty(len(choices), n_edge, n_ocloud)
        for r, c in enumerate(choices):
            if c is None:
                continue
            side, j = c
            if side == "e":
                a.x_re[r, j] = 1
            else:
                a.x_rq[r, j] = 1
        return a

    def to_vector(self) -> list[tuple[str, int] | None]:
        return [self.cloud_of(r) for r in range(self.n_ru)]


@dataclass
class FeasibilityReport:
    feasible: bool
    first_violation: dict[int, str]     # RU index -> constraint family tag
    family_ok: dict[str, bool]
    unassigned: list[int]


@dataclass
class AllocationReport:
    """Derived shares, costs, and latencies for a feasible assignment."""

    b_re: np.ndarray
    b_rq: np.ndarray
    g_re: np.ndarray
    g_rq: np.ndarray
    per_ru_cost: list[float]            # 0-cost entries for unassigned RUs
    max_cost: float
    per_mno_cost: dict[str, float]
    feasibility: FeasibilityReport
    epsilon: float = EPSILON
    ul_latency_s: list[float] = field(default_factory=list)
    dl_latency_s: list[float] = field(default_factory=list)


def _share_matrix(x: np.ndarray, demand_ul, demand_dl, cap_ul, cap_dl, eps: float) -> np.ndarray:
    """Proportional shares: demand * capacity / (eps + sum of co-assigned demand)."""
    demand_ul = np.asarray(demand_ul, dtype=float)
    demand_dl = np.asarray(demand_dl, dtype=float)
    cap_ul = np.asarray(cap_ul, dtype=float)
    cap_dl = np.asarray(cap_dl, dtype=float)
    sum_ul = x.T @ demand_ul          # per-cloud assigned demand
    sum_dl = x.T @ demand_dl
    share_ul = demand_ul[:, None] * cap_ul[None, :] / (eps + sum_ul)[None, :]
    share_dl = demand_dl[:, None] * cap_dl[None, :] / (eps + sum_dl)[None, :]
    return x * (share_ul + share_dl)


def throughput_shares(a: Assignment, rus: list[RuNode], edges: list[CloudNode],
                      oclouds: list[CloudNode], eps: float = EPSILON) -> tuple[np.ndarray, np.ndarray]:
    """Allocated x-haul throughput per (RU, cloud) pair, bits/s."""
    w_ul = [r.w_ul_bps for r in rus]
    w_dl = [r.w_dl_bps for r in rus]
    b_re = _share_matrix(a.x_re, w_ul, w_dl,
                         [c.b_ul_bps for c in edges], [c.b_dl_bps for c in edges], eps)
    b_rq = _share_matrix(a.x_rq, w_ul, w_dl,
                         [c.b_ul_bps for c in oclouds], [c.b_dl_bps for c in oclouds], eps)
    return b_re, b_rq


def gops_shares(a: Assignment, rus: list[RuNode], edges: list[CloudNode],
                oclouds: list[CloudNode], eps: float = EPSILON) -> tuple[np.ndarray, np.ndarray]:
    """Allocated DU/CU compute per (RU, cloud) pair, GOPS/TTI."""
    g_ul = [r.gamma_ul_gops for r in rus]
    g_dl = [r.gamma_dl_gops for r in rus]
    g_re = _share_matrix(a.x_re, g_ul, g_dl,
                         [c.g_ul_gops for c in edges], [c.g_dl_gops for c in edges], eps)
    g_rq = _share_matrix(a.x_rq, g_ul, g_dl,
                         [c.g_ul_gops for c in oclouds], [c.g_dl_gops for c in oclouds], eps)
    return g_re, g_rq


def _transmission_term(x_col: np.ndarray, w, theta: float, cap: float, tti_s: float) -> float:
    total = float(np.dot(x_col, w))
    return math.ceil(tti_s / theta) * total * theta / cap


def uplink_latency(r: int, a: Assignment, scenario) -> float:
    """One-way uplink x-haul latency (queuing + propagation + transmission)."""
    where = a.cloud_of(r)
    if where is None:
        raise ValueError(f"RU index {r} is unassigned")
    side, j = where
    if side == "e":
        cloud = scenario.edges[j]
        dist = float(scenario.reach.d_re[r, j])
        x_col = a.x_re[:, j]
    else:
        cloud = scenario.oclouds[j]
        dist = float(scenario.reach.d_rq[r, j])
        x_col = a.x_rq[:, j]
    w_ul = [ru.w_ul_bps for ru in scenario.rus]
    return (
        cloud.codba_queue_delay_s
        + dist / FIBER_SPEED_KM_S
        + _transmission_term(x_col, w_ul, cloud.burst_interval_s, cloud.b_ul_bps,
                             scenario.tti_s)
    )


def downlink_latency(r: int, a: Assignment, scenario) -> float:
    """One-way downlink x-haul latency (propagation + transmission, no Co-DBA term)."""
    where = a.cloud_of(r)
    if where is None:
        raise ValueError(f"RU index {r} is unassigned")
    side, j = where
    if side == "e":
        cloud = scenario.edges[j]
        dist = float(scenario.reach.d_re[r, j])
        x_col = a.x_re[:, j]
    else:
        cloud = scenario.oclouds[j]
        dist = float(scenario.reach.d_rq[r, j])
        x_col = a.x_rq[:, j]
    w_dl = [ru.w_dl_bps for ru in scenario.rus]
    return (
        dist / FIBER_SPEED_KM_S
        + _transmission_term(x_col, w_dl, cloud.burst_interval_s, cloud.b_dl_bps,
                             scenario.tti_s)
    )


def processing_latency_ok(r: int, a: Assignment, scenario) -> tuple[bool, bool]:
    """(uplink_ok, downlink_ok) for the RU/DU/CU processing budget of RU r.

    RU-side load fraction plus the host cloud's aggregate DU/CU load
    fraction must not exceed delta_rdc / TTI; the inequality is inclusive.
    """
    where = a.cloud_of(r)
    if where is None:
        raise ValueError(f"RU index {r} is unassigned")
    side, j = where
    ru = scenario.rus[r]
    if side == "e":
        cloud = scenario.edges[j]
        x_col = a.x_re[:, j]
    else:
        cloud = scenario.oclouds[j]
        x_col = a.x_rq[:, j]
    sum_ul = float(np.dot(x_col, [s.gamma_ul_gops for s in scenario.rus]))
    sum_dl = float(np.dot(x_col, [s.gamma_dl_gops for s in scenario.rus]))
    bound = ru.delta_rdc_s / scenario.tti_s
    tol = 1e-12
    ul_ok = ru.eta_ul_gops / ru.h_ul_gops + sum_ul / cloud.g_ul_gops <= bound + tol
    dl_ok = ru.eta_dl_gops / ru.h_dl_gops + sum_dl / cloud.g_dl_gops <= bound + tol
    return ul_ok, dl_ok


def check_feasible(a: Assignment, scenario) -> FeasibilityReport:
    """Evaluate every constraint family; infeasibility is data, not an error.

    Families: reachability (x <= z), single-assignment, uplink latency,
    downlink latency, processing latency (UL and DL). Records the first
    violated family per RU.
    """
    first: dict[int, str] = {}
    family_ok = {"reachability": True, "single_assignment": True,
                 "uplink_latency": True, "downlink_latency": True,
                 "processing_ul": True, "processing_dl": True}

    def flag(r: int, fam: str):
        family_ok[fam] = False
        first.setdefault(r, fam)

    for r in range(a.n_ru):
        row = int(a.x_re[r].sum() + a.x_rq[r].sum())
        if row > 1:
            flag(r, "single_assignment")
            continue
        bad_reach = (np.any(a.x_re[r] > scenario.reach.z_re[r])
                     or np.any(a.x_rq[r] > scenario.reach.z_rq[r]))
        if bad_reach:
            flag(r, "reachability")
            continue
        if row == 0:
            continue
        ru = scenario.rus[r]
        if uplink_latency(r, a, scenario) > ru.delta_h_s + 1e-15:
            flag(r, "uplink_latency")
            continue
        if downlink_latency(r, a, scenario) > ru.delta_h_s + 1e-15:
            flag(r, "downlink_latency")
            continue
        ul_ok, dl_ok = processing_latency_ok(r, a, scenario)
        if not ul_ok:
            flag(r, "processing_ul")
            continue
        if not dl_ok:
            flag(r, "processing_dl")

    return FeasibilityReport(
        feasible=all(family_ok.values()),
        first_violation=first,
        family_ok=family_ok,
        unassigned=a.unassigned,
    )


def ru_cost(r: int, a: Assignment, b_re: np.ndarray, b_rq: np.ndarray,
            g_re: np.ndarray, g_rq: np.ndarray, scenario) -> float:
    """Daily leasing cost of RU r: default fee + throughput + discounted compute."""
    cm = scenario.cost_model
    ru = scenario.rus[r]
    thpt_gbps = (float(np.dot(a.x_re[r], b_re[r])) + float(np.dot(a.x_rq[r], b_rq[r]))) / 1e9
    compute = float(np.dot(a.x_rq[r], g_rq[r]))
    for e, edge in enumerate(scenario.edges):
        if a.x_re[r, e]:
            compute += cm.discount(ru, edge) * g_re[r, e]
    return cm.default_fee + cm.per_gbps * thpt_gbps + cm.per_gops * compute


def cost_vector(a: Assignment, scenario) -> list[float]:
    """Per-RU cost (0.0 for unassigned RUs), rounded for stable comparisons."""
    b_re, b_rq = throughput_shares(a, scenario.rus, scenario.edges, scenario.oclouds,
                                   scenario.epsilon)
    g_re, g_rq = gops_shares(a, scenario.rus, scenario.edges, scenario.oclouds,
                             scenario.epsilon)
    out = []
    for r in range(a.n_ru):
        if a.cloud_of(r) is None:
            out.append(0.0)
        else:
            out.append(round(ru_cost(r, a, b_re, b_rq, g_re, g_rq, scenario), COST_DECIMALS))
    return out


def objective(a: Assignment, scenario) -> float:
    """Min-max objective value: the maximum cost over assigned RUs."""
    costs = cost_vector(a, scenario)
    assigned = [c for r, c in enumerate(costs) if a.cloud_of(r) is not None]
    if not assigned:
        raise ValueError("objective undefined: no assigned RU")
    return max(assigned)


def sorted_cost_key(a: Assignment, scenario) -> tuple:
    """Descending-sorted assigned-RU costs, the lexicographic min-max tiebreak."""
    costs = cost_vector(a, scenario)
    assigned = sorted((c for r, c in enumerate(costs) if a.cloud_of(r) is not None),
                      reverse=True)
    return tuple(assigned)


def allocation_report(a: Assignment, scenario, per_ru_cost: list[float] | None = None) -> AllocationReport:
    """Full derived view of an assignment (shares, costs, latencies, slacks)."""
    b_re, b_rq = throughput_shares(a, scenario.rus, scenario.edges, scenario.oclouds,
                                   scenario.epsilon)
    g_re, g_rq = gops_shares(a, scenario.rus, scenario.edges, scenario.oclouds,
                             scenario.epsilon)
    feas = check_feasible(a, scenario)
    if per_ru_cost is None:
        per_ru_cost = cost_vector(a, scenario)

    ul_lat, dl_lat = [], []
    for r in range(a.n_ru):
        if a.cloud_of(r) is None:
            ul_lat.append(float("nan"))
            dl_lat.append(float("nan"))
        else:
            ul_lat.append(uplink_latency(r, a, scenario))
            dl_lat.append(downlink_latency(r, a, scenario))

    assigned_costs = [per_ru_cost[r] for r in range(a.n_ru) if a.cloud_of(r) is not None]
    per_mno: dict[str, float] = {}
    for r, ru in enumerate(scenario.rus):
        if a.cloud_of(r) is not None:
            per_mno[ru.mno_id] = per_mno.get(ru.mno_id, 0.0) + per_ru_cost[r]

    return AllocationReport(
        b_re=b_re, b_rq=b_rq, g_re=g_re, g_rq=g_rq,
        per_ru_cost=per_ru_cost,
        max_cost=max(assigned_costs) if assigned_costs else float("nan"),
        per_mno_cost=per_mno,
        feasibility=feas,
        epsilon=scenario.epsilon,
        ul_latency_s=ul_lat,
        dl_latency_s=dl_lat,
    )


def report_to_csv(report: AllocationReport, a: Assignment, scenario) -> str:
    """One CSV row per RU: identity, host cloud, shares, cost, latencies, slacks."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(["ru_id", "mno_id", "cloud_id", "thpt_share_bps", "gops_share",
                "cost", "ul_latency_s", "dl_latency_s",
                "ul_latency_slack_s", "dl_latency_slack_s", "violation"])
    for r, ru in enumerate(scenario.rus):
        where = a.cloud_of(r)
        if where is None:
            w.writerow([ru.id, ru.mno_id, "", 0.0, 0.0, report.per_ru_cost[r],
                        "", "", "", "", report.feasibility.first_violation.get(r, "unassigned")])
            continue
        side, j = where
        cloud = scenario.edges[j] if side == "e" else scenario.oclouds[j]
        b = report.b_re[r, j] if side == "e" else report.b_rq[r, j]
        g = report.g_re[r, j] if side == "e" else report.g_rq[r, j]
        ul, dl = report.ul_latency_s[r], report.dl_latency_s[r]
        w.writerow([ru.id, ru.mno_id, cloud.id, f"{b:.6f}", f"{g:.6f}",
                    f"{report.per_ru_cost[r]:.6f}", f"{ul:.9f}", f"{dl:.9f}",
                    f"{ru.delta_h_s - ul:.9f}", f"{ru.delta_h_s - dl:.9f}",
                    report.feasibility.first_violation.get(r, "")])
    return buf.getvalue()
