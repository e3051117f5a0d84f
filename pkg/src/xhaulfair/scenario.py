"""Problem-instance construction and serialization.

A Scenario bundles the RU population, Edge/O-Cloud inventory, PON
topology with reachability, cost model, and timing constants. The
reference deployment is a 5x5 km2 area with 8 macro-cell RUs (each
co-hosting an Edge-Cloud and Edge-OLT), 30 small-cell RUs, three MNOs
with 25/35/40% ownership, and two O-Clouds at diagonally opposite
corners. Demands are normalized so that the full-load aggregate equals
4 Gbps/km2 over the area.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace

from .core import (
    CloudKind,
    CloudNode,
    CostModel,
    RuNode,
    TrafficClass,
    EPSILON,
)
from .radio import SplitOption, profile_2x2_50mhz
from .topology import (
    ConfigurationError,
    Point2D,
    Reachability,
    SplitterTree,
    compute_reachability,
    place_splitters,
)

import yaml

#: Maximum areal demand density at 100% load, bits/s per km2.
MAX_LOAD_BPS_PER_KM2 = 4.0e9

#: Per-cloud, per-direction compute ceiling; an edge:ocloud ratio of
#: a:(1-a) gives every Edge-Cloud a*ceiling and every O-Cloud
#: (1-a)*ceiling GOPS/TTI. Sized so the network runs near full compute
#: utilization at the 80% operating point and outages appear only as the
#: load approaches 100%.
CLOUD_COMPUTE_GOPS = 3.0e3

WAVELENGTH_BPS = 25.0e9
NS_WAVELENGTHS = 4

TTI_S = 0.5e-3
BURST_INTERVAL_S = 31.25e-6
CODBA_DELAY_S = 15.0e-6

LOW_LATENCY_DELTA_H_S = 100.0e-6
LOW_LATENCY_DELTA_RDC_S = 90.0e-6
BROADBAND_DELTA_H_S = 1.0e-3
BROADBAND_DELTA_RDC_S = 0.5e-3

OWNERSHIP = {"MNO-1": 0.25, "MNO-2": 0.35, "MNO-3": 0.40}

#: RU-side compute headroom: capacity is this multiple of the RU-side
#: demand at 100% load.
RU_HEADROOM = 50.0

#: Demand weight of a low-latency RU relative to a broadband RU of the
#: same cell size: latency-critical traffic is low-volume.
LOW_LATENCY_DEMAND_FACTOR = 0.2

#: Relative half-width of the per-RU demand jitter.
DEMAND_JITTER = 0.05


@dataclass
class Scenario:
    """A complete, immutable-after-construction problem instance."""

    name: str
    area_km: tuple[float, float]
    rus: list[RuNode]
    edges: list[CloudNode]
    oclouds: list[CloudNode]
    tree: SplitterTree
    reach: Reachability
    cost_model: CostModel
    tti_s: float = TTI_S
    epsilon: float = EPSILON
    seed: int = 0
    multi_branch: bool = True
    metadata: dict = field(default_factory=dict)

    @property
    def n_ru(self) -> int:
        return len(self.rus)

    def clouds(self) -> list[tuple[str, int, CloudNode]]:
        """Flattened cloud list as (side, index, node) with side 'e' or 'q'."""
        out = [("e", j, c) for j, c in enumerate(self.edges)]
        out += [("q", j, c) for j, c in enumerate(self.oclouds)]
        return out

    def reachable(self, r: int, side: str, j: int) -> bool:
        z = self.reach.z_re if side == "e" else self.reach.z_rq
        return bool(z[r][j])

    def distance(self, r: int, side: str, j: int) -> float:
        d = self.reach.d_re if side == "e" else self.reach.d_rq
        return float(d[r][j])

    def aggregate_demand_bps(self) -> float:
        return sum(r.w_ul_bps + r.w_dl_bps for r in self.rus)

    def mno_fractions(self) -> dict[str, float]:
        counts: dict[str, int] = {}
        for r in self.rus:
            counts[r.mno_id] = counts.get(r.mno_id, 0) + 1
        return {m: c / len(self.rus) for m, c in sorted(counts.items())}


def largest_remainder(total: int, fractions: dict[str, float]) -> dict[str, int]:
    """Apportion an integer total by fractions, largest remainder first."""
    quotas = {m: total * f for m, f in fractions.items()}
    counts = {m: math.floor(q) for m, q in quotas.items()}
    short = total - sum(counts.values())
    by_remainder = sorted(fractions, key=lambda m: (counts[m] - quotas[m], m))
    for m in by_remainder[:short]:
        counts[m] += 1
    return counts


def _place_positions(rng: random.Random, n: int, area: tuple[float, float],
                     min_sep_km: float, existing: list[Point2D],
                     max_tries: int = 2000) -> list[Point2D]:
    placed: list[Point2D] = []
    for _ in range(n):
        for _attempt in range(max_tries):
            p = Point2D(rng.uniform(0.0, area[0]), rng.uniform(0.0, area[1]))
            if all(p.distance_to(q) >= min_sep_km for q in existing + placed):
                placed.append(p)
                break
        else:
            raise ConfigurationError(
                f"could not place {n} points with separation {min_sep_km} km"
            )
    return placed


def build_paper_scenario(
    seed: int = 0,
    edge_ratio: float = 0.5,
    load_fraction: float = 1.0,
    n_macro: int = 8,
    n_small: int = 30,
    area_km: tuple[float, float] = (5.0, 5.0),
    low_latency_fraction: float = 0.25,
    multi_branch: bool = True,
    k_splitters: int = 4,
    cost_model: CostModel | None = None,
) -> Scenario:
    """Reference deployment: 38 RUs, 8 Edge-Clouds, 2 corner O-Clouds.

    edge_ratio splits the per-cloud compute ceiling between the edge tier
    and the O-Cloud tier. Demands are seeded per RU (macro cells weigh
    twice a small cell, low-latency cells carry a fifth of the broadband
    volume, +/-5% jitter) and normalized so the aggregate x-haul demand at
    load 1.0 is exactly the areal maximum.
    """
    if not 0.0 < edge_ratio < 1.0:
        raise ConfigurationError(f"edge_ratio must be in (0,1), got {edge_ratio}")
    rng = random.Random(seed)

    macro_pos = _place_positions(rng, n_macro, area_km, 0.25 * 1.0, [])
    small_pos = _place_positions(rng, n_small, area_km, 0.25 * 0.5, macro_pos)
    positions = macro_pos + small_pos
    n_ru = n_macro + n_small

    # ownership: macros and the overall population each follow the
    # 25/35/40 split by largest remainder; remaining quota goes to smalls
    mnos = sorted(OWNERSHIP)
    total_counts = largest_remainder(n_ru, OWNERSHIP)
    macro_counts = largest_remainder(n_macro, OWNERSHIP)
    owner: list[str] = []
    for m in mnos:
        owner += [m] * macro_counts[m]
    macro_owner = owner[:]
    rng.shuffle(macro_owner)
    small_owner = []
    for m in mnos:
        small_owner += [m] * (total_counts[m] - macro_counts[m])
    rng.shuffle(small_owner)
    owners = macro_owner + small_owner

    # traffic classes: ~25% low-latency, apportioned per MNO; low-latency
    # service is hosted at small cells (macro cells carry bulk broadband)
    per_mno_rus: dict[str, list[int]] = {m: [] for m in mnos}
    for i, m in enumerate(owners):
        if i >= n_macro or n_small == 0:
            per_mno_rus[m].append(i)
    ll_count = round(low_latency_fraction * n_ru)
    ll_quota = largest_remainder(ll_count, {m: total_counts[m] / n_ru for m in mnos})
    low_latency: set[int] = set()
    for m in mnos:
        pool = per_mno_rus[m]
        low_latency.update(rng.sample(pool, min(ll_quota[m], len(pool))))

    co_positions = [Point2D(0.0, 0.0), Point2D(area_km[0], area_km[1])]
    tree = place_splitters(positions, k_splitters, seed, co_positions=co_positions,
                           area_km=area_km)
    reach = compute_reachability(tree, macro_pos, co_positions, multi_branch=multi_branch)

    profile = profile_2x2_50mhz()
    ul_rate = profile.ul_rate_bps
    dl_rate = profile.dl_rate_bps
    total_gops = profile.total_gops_per_tti
    split = SplitOption.split_7_2()
    ru_frac = split.ru_processing_fraction

    weights = [2.0 if i < n_macro else 1.0 for i in range(n_ru)]
    weights = [w * (LOW_LATENCY_DEMAND_FACTOR if i in low_latency else 1.0)
               for i, w in enumerate(weights)]
    jitter = [rng.uniform(1.0 - DEMAND_JITTER, 1.0 + DEMAND_JITTER)
              for _ in range(n_ru)]
    raw_w = [(weights[i] * jitter[i] * ul_rate, weights[i] * jitter[i] * dl_rate)
             for i in range(n_ru)]
    target = load_fraction * MAX_LOAD_BPS_PER_KM2 * area_km[0] * area_km[1]
    scale = target / sum(u + d for u, d in raw_w)
    base_scale = scale / load_fraction   # demand scale at 100% load, for RU headroom

    rus: list[RuNode] = []
    for i in range(n_ru):
        w_ul = raw_w[i][0] * scale
        w_dl = raw_w[i][1] * scale
        frac_ul = w_ul / (w_ul + w_dl)
        gops = weights[i] * jitter[i] * total_gops
        ducu = (1.0 - ru_frac) * gops
        ru_side = ru_frac * gops
        ll = i in low_latency
        rus.append(RuNode(
            id=f"R{i:02d}",
            mno_id=owners[i],
            position=positions[i],
            traffic_class=TrafficClass.LOW_LATENCY if ll else TrafficClass.BROADBAND,
            w_ul_bps=w_ul,
            w_dl_bps=w_dl,
            gamma_ul_gops=ducu * frac_ul * scale,
            gamma_dl_gops=ducu * (1.0 - frac_ul) * scale,
            eta_ul_gops=ru_side * frac_ul * scale,
            eta_dl_gops=ru_side * (1.0 - frac_ul) * scale,
            h_ul_gops=RU_HEADROOM * ru_side * frac_ul * base_scale,
            h_dl_gops=RU_HEADROOM * ru_side * (1.0 - frac_ul) * base_scale,
            delta_h_s=LOW_LATENCY_DELTA_H_S if ll else BROADBAND_DELTA_H_S,
            delta_rdc_s=LOW_LATENCY_DELTA_RDC_S if ll else BROADBAND_DELTA_RDC_S,
            split=split,
        ))

    edge_gops = edge_ratio * CLOUD_COMPUTE_GOPS
    ocloud_gops = (1.0 - edge_ratio) * CLOUD_COMPUTE_GOPS

    edges = [CloudNode(
        id=f"E{j}", kind=CloudKind.EDGE, attachment=macro_pos[j],
        g_ul_gops=edge_gops, g_dl_gops=edge_gops,
        b_ul_bps=WAVELENGTH_BPS, b_dl_bps=WAVELENGTH_BPS,
        burst_interval_s=BURST_INTERVAL_S, codba_queue_delay_s=CODBA_DELAY_S,
        mno_id=macro_owner[j],
    ) for j in range(n_macro)]

    oclouds = [CloudNode(
        id=f"Q{j}", kind=CloudKind.OCLOUD, attachment=co_positions[j],
        g_ul_gops=ocloud_gops, g_dl_gops=ocloud_gops,
        b_ul_bps=NS_WAVELENGTHS * WAVELENGTH_BPS, b_dl_bps=NS_WAVELENGTHS * WAVELENGTH_BPS,
        burst_interval_s=BURST_INTERVAL_S, codba_queue_delay_s=CODBA_DELAY_S,
    ) for j in range(len(co_positions))]

    return Scenario(
        name=f"paper-{seed}",
        area_km=area_km,
        rus=rus, edges=edges, oclouds=oclouds,
        tree=tree, reach=reach,
        cost_model=cost_model or CostModel(),
        seed=seed,
        multi_branch=multi_branch,
        metadata={"edge_ratio": edge_ratio, "load_fraction": load_fraction,
                  "n_macro": n_macro, "n_small": n_small},
    )


def apply_load(scenario: Scenario, load_fraction: float) -> Scenario:
    """Rescale all demands so aggregate x-haul demand hits the load target.

    Linear scaling of W, Gamma, and the RU-side demand; RU capacities and
    latency bounds are untouched.
    """
    if not 0.0 < load_fraction <= 1.0:
        raise ValueError(f"load_fraction must be in (0,1], got {load_fraction}")
    target = load_fraction * MAX_LOAD_BPS_PER_KM2 * scenario.area_km[0] * scenario.area_km[1]
    current = scenario.aggregate_demand_bps()
    s = target / current
    rus = [replace(
        ru,
        w_ul_bps=ru.w_ul_bps * s, w_dl_bps=ru.w_dl_bps * s,
        gamma_ul_gops=ru.gamma_ul_gops * s, gamma_dl_gops=ru.gamma_dl_gops * s,
        eta_ul_gops=ru.eta_ul_gops * s, eta_dl_gops=ru.eta_dl_gops * s,
    ) for ru in scenario.rus]
    meta = dict(scenario.metadata)
    meta["load_fraction"] = load_fraction
    return replace(scenario, rus=rus, metadata=meta)


def random_scenario(
    n_ru: int,
    n_edge: int,
    n_ocloud: int,
    seed: int = 0,
    area_km: tuple[float, float] = (5.0, 5.0),
    load_fraction: float = 0.6,
    edge_ratio: float = 0.5,
    low_latency_fraction: float = 0.25,
) -> Scenario:
    """Small randomized instance for testing and oracle comparison."""
    if not 1 <= n_ocloud <= 2:
        raise ConfigurationError("random_scenario supports 1 or 2 O-Clouds")
    if n_edge < 1 or n_edge > n_ru:
        raise ConfigurationError("need 1 <= n_edge <= n_ru")
    base = build_paper_scenario(
        seed=seed, edge_ratio=edge_ratio, load_fraction=load_fraction,
        n_macro=n_edge, n_small=n_ru - n_edge, area_km=area_km,
        low_latency_fraction=low_latency_fraction,
        k_splitters=min(max(2, n_ru // 10), n_ru),
    )
    if n_ocloud == 2:
        return base
    reach = Reachability(
        z_re=base.reach.z_re,
        z_rq=base.reach.z_rq[:, :n_ocloud],
        d_re=base.reach.d_re,
        d_rq=base.reach.d_rq[:, :n_ocloud],
    )
    tree = base.tree
    tree.co_positions = tree.co_positions[:n_ocloud]
    return replace(base, oclouds=base.oclouds[:n_ocloud], reach=reach, tree=tree)


# ---------------------------------------------------------------------------
# serialization (human-readable YAML; quantities carry unit suffixes)
# ---------------------------------------------------------------------------

def _point_to_list(p: Point2D) -> list[float]:
    return [p.x, p.y]


def scenario_to_dict(s: Scenario) -> dict:
    return {
        "schema": "xhaulfair-scenario-v1",
        "name": s.name,
        "seed": s.seed,
        "area_km": list(s.area_km),
        "multi_branch": s.multi_branch,
        "tti_s": s.tti_s,
        "epsilon": s.epsilon,
        "metadata": dict(s.metadata),
        "cost_model": {
            "default_fee": s.cost_model.default_fee,
            "per_gbps": s.cost_model.per_gbps,
            "per_gops": s.cost_model.per_gops,
            "gamma_same_mno": s.cost_model.gamma_same_mno,
            "gamma_other": s.cost_model.gamma_other,
        },
        "splitter_tree": {
            "level1_km": [_point_to_list(p) for p in s.tree.level1_splitters],
            "members": [list(m) for m in s.tree.members],
            "level2_km": _point_to_list(s.tree.level2_splitter),
            "co_positions_km": [_point_to_list(p) for p in s.tree.co_positions],
        },
        "rus": [{
            "id": r.id, "mno_id": r.mno_id,
            "position_km": _point_to_list(r.position),
            "traffic_class": r.traffic_class.value,
            "w_ul_bps": r.w_ul_bps, "w_dl_bps": r.w_dl_bps,
            "gamma_ul_gops_tti": r.gamma_ul_gops, "gamma_dl_gops_tti": r.gamma_dl_gops,
            "eta_ul_gops_tti": r.eta_ul_gops, "eta_dl_gops_tti": r.eta_dl_gops,
            "h_ul_gops_tti": r.h_ul_gops, "h_dl_gops_tti": r.h_dl_gops,
            "delta_h_s": r.delta_h_s, "delta_rdc_s": r.delta_rdc_s,
            "split": r.split.variant.value,
            "ru_processing_fraction": r.split.ru_processing_fraction,
        } for r in s.rus],
        "clouds": [{
            "id": c.id, "kind": c.kind.value, "mno_id": c.mno_id,
            "attachment_km": _point_to_list(c.attachment),
            "g_ul_gops_tti": c.g_ul_gops, "g_dl_gops_tti": c.g_dl_gops,
            "b_ul_bps": c.b_ul_bps, "b_dl_bps": c.b_dl_bps,
            "burst_interval_s": c.burst_interval_s,
            "codba_queue_delay_s": c.codba_queue_delay_s,
        } for c in s.edges + s.oclouds],
    }


def scenario_from_dict(d: dict) -> Scenario:
    if d.get("schema") != "xhaulfair-scenario-v1":
        raise ConfigurationError(f"unsupported scenario schema: {d.get('schema')!r}")
    tree_d = d["splitter_tree"]
    rus = []
    for rd in d["rus"]:
        variant = (SplitOption.split_7_2 if rd["split"] == "7.2" else SplitOption.split_7_3)
        rus.append(RuNode(
            id=rd["id"], mno_id=rd["mno_id"],
            position=Point2D(*rd["position_km"]),
            traffic_class=TrafficClass(rd["traffic_class"]),
            w_ul_bps=rd["w_ul_bps"], w_dl_bps=rd["w_dl_bps"],
            gamma_ul_gops=rd["gamma_ul_gops_tti"], gamma_dl_gops=rd["gamma_dl_gops_tti"],
            eta_ul_gops=rd["eta_ul_gops_tti"], eta_dl_gops=rd["eta_dl_gops_tti"],
            h_ul_gops=rd["h_ul_gops_tti"], h_dl_gops=rd["h_dl_gops_tti"],
            delta_h_s=rd["delta_h_s"], delta_rdc_s=rd["delta_rdc_s"],
            split=variant(rd["ru_processing_fraction"]),
        ))
    edges, oclouds = [], []
    for cd in d["clouds"]:
        node = CloudNode(
            id=cd["id"], kind=CloudKind(cd["kind"]),
            attachment=Point2D(*cd["attachment_km"]),
            g_ul_gops=cd["g_ul_gops_tti"], g_dl_gops=cd["g_dl_gops_tti"],
            b_ul_bps=cd["b_ul_bps"], b_dl_bps=cd["b_dl_bps"],
            burst_interval_s=cd["burst_interval_s"],
            codba_queue_delay_s=cd["codba_queue_delay_s"],
            mno_id=cd["mno_id"],
        )
        (edges if node.kind is CloudKind.EDGE else oclouds).append(node)
    tree = SplitterTree(
        level1_splitters=[Point2D(*p) for p in tree_d["level1_km"]],
        members=[list(m) for m in tree_d["members"]],
        level2_splitter=Point2D(*tree_d["level2_km"]),
        co_positions=[Point2D(*p) for p in tree_d["co_positions_km"]],
        ru_positions=[r.position for r in rus],
    )
    reach = compute_reachability(tree, [e.attachment for e in edges],
                                 tree.co_positions, multi_branch=d["multi_branch"])
    cm = CostModel(**d["cost_model"])
    return Scenario(
        name=d["name"], area_km=tuple(d["area_km"]),
        rus=rus, edges=edges, oclouds=oclouds,
        tree=tree, reach=reach, cost_model=cm,
        tti_s=d["tti_s"], epsilon=d["epsilon"], seed=d["seed"],
        multi_branch=d["multi_branch"], metadata=d.get("metadata", {}),
    )


def save_scenario(s: Scenario, path: str) -> None:
    with open(path, "w") as f:
        yaml.safe_dump(scenario_to_dict(s), f, sort_keys=True)


def load_scenario(path: str) -> Scenario:
    with open(path) as f:
        return scenario_from_dict(yaml.safe_load(f))
