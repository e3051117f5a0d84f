"""Solvers over the allocation core.

Three interchangeable strategies:

* a two-phase greedy heuristic (nearest feasible attach, then iterated
  reassignment of the costliest RU),
* an exhaustive exact oracle for small instances,
* a nearest-feasible baseline with uniform cost sharing.

Each solver validates its output against check_feasible before returning.
Solver classes follow the estimator convention: hyperparameters in
__init__, fit(scenario) computes and stores trailing-underscore results.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
import random

from sklearn.base import BaseEstimator

from . import core
from .core import (
    Assignment,
    AllocationReport,
    CloudKind,
    COST_DECIMALS,
    FIBER_SPEED_KM_S,
    allocation_report,
    check_feasible,
)
from .topology import ConfigurationError

_TIE = 10.0 ** (-COST_DECIMALS)


@dataclass
class SolverResult:
    assignment: Assignment
    report: AllocationReport
    outage_rus: list[str]
    iterations: int
    wall_time_s: float

    def objective(self) -> float:
        return self.report.max_cost


def mix_by_ownership(rus, mno_fractions: dict[str, float], seed: int = 0) -> list[int]:
    """Interleave RU indices so every prefix tracks the ownership split.

    Greedy largest-deficit pick: position n+1 goes to the operator whose
    running count falls furthest below (n+1) * fraction. Within an
    operator, RU order is seed-shuffled.
    """
    total = sum(mno_fractions.values())
    if abs(total - 1.0) > 1e-9:
        raise ConfigurationError(f"ownership fractions sum to {total}, expected 1")
    rng = random.Random(seed)
    queues: dict[str, list[int]] = {m: [] for m in mno_fractions}
    for i, ru in enumerate(rus):
        if ru.mno_id not in queues:
            raise ConfigurationError(f"RU {ru.id} has unknown MNO {ru.mno_id!r}")
        queues[ru.mno_id].append(i)
    for m in queues:
        rng.shuffle(queues[m])

    counts = {m: 0 for m in mno_fractions}
    order: list[int] = []
    n = len(rus)
    for pos in range(1, n + 1):
        live = [m for m in sorted(mno_fractions) if queues[m]]
        m = max(live, key=lambda m: (pos * mno_fractions[m] - counts[m], m))
        order.append(queues[m].pop(0))
        counts[m] += 1
    return order


class _State:
    """Incremental per-cloud load bookkeeping for fast solver inner loops."""

    def __init__(self, scenario):
        self.sc = scenario
        self.clouds = scenario.clouds()
        self.n_c = len(self.clouds)
        n_ru = scenario.n_ru
        self.n_ru = n_ru
        rus = scenario.rus
        cm = scenario.cost_model

        self.w_ul = [r.w_ul_bps for r in rus]
        self.w_dl = [r.w_dl_bps for r in rus]
        self.g_ul = [r.gamma_ul_gops for r in rus]
        self.g_dl = [r.gamma_dl_gops for r in rus]
        self.demand = [r.w_ul_bps + r.w_dl_bps for r in rus]

        self.z = [[scenario.reachable(r, side, j) for (side, j, _) in self.clouds]
                  for r in range(n_ru)]
        self.dist = [[scenario.distance(r, side, j) for (side, j, _) in self.clouds]
                     for r in range(n_ru)]
        # fixed per-(ru, cloud) latency pieces and per-ru processing slack
        self.fixed_ul = [[0.0] * self.n_c for _ in range(n_ru)]
        self.fixed_dl = [[0.0] * self.n_c for _ in range(n_ru)]
        self.disc = [[1.0] * self.n_c for _ in range(n_ru)]
        self.proc_slack_ul = [0.0] * n_ru
        self.proc_slack_dl = [0.0] * n_ru
        for r, ru in enumerate(rus):
            bound = ru.delta_rdc_s / scenario.tti_s
            self.proc_slack_ul[r] = bound - ru.eta_ul_gops / ru.h_ul_gops
            self.proc_slack_dl[r] = bound - ru.eta_dl_gops / ru.h_dl_gops
            for c, (side, j, node) in enumerate(self.clouds):
                prop = self.dist[r][c] / FIBER_SPEED_KM_S
                self.fixed_ul[r][c] = node.codba_queue_delay_s + prop
                self.fixed_dl[r][c] = prop
                self.disc[r][c] = cm.discount(ru, node)
        self.bursts = [math.ceil(scenario.tti_s / node.burst_interval_s)
                       for (_, _, node) in self.clouds]

        self.assign: list[int | None] = [None] * n_ru
        self.members: list[set[int]] = [set() for _ in range(self.n_c)]
        self.sum_wul = [0.0] * self.n_c
        self.sum_wdl = [0.0] * self.n_c
        self.sum_gul = [0.0] * self.n_c
        self.sum_gdl = [0.0] * self.n_c

    def can_add(self, r: int, c: int) -> bool:
        """Would placing RU r on cloud c keep r and every incumbent feasible?"""
        if not self.z[r][c]:
            return False
        _, _, node = self.clouds[c]
        wul = self.sum_wul[c] + self.w_ul[r]
        wdl = self.sum_wdl[c] + self.w_dl[r]
        gul = self.sum_gul[c] + self.g_ul[r]
        gdl = self.sum_gdl[c] + self.g_dl[r]
        tx_ul = self.bursts[c] * wul * node.burst_interval_s / node.b_ul_bps
        tx_dl = self.bursts[c] * wdl * node.burst_interval_s / node.b_dl_bps
        load_ul = gul / node.g_ul_gops
        load_dl = gdl / node.g_dl_gops
        tol = 1e-12
        rus = self.sc.rus
        for s in self.members[c] | {r}:
            bound = rus[s].delta_h_s + tol
            if self.fixed_ul[s][c] + tx_ul > bound:
                return False
            if self.fixed_dl[s][c] + tx_dl > bound:
                return False
            if load_ul > self.proc_slack_ul[s] + tol:
                return False
            if load_dl > self.proc_slack_dl[s] + tol:
                return False
        return True

    def add(self, r: int, c: int) -> None:
        self.assign[r] = c
        self.members[c].add(r)
        self.sum_wul[c] += self.w_ul[r]
        self.sum_wdl[c] += self.w_dl[r]
        self.sum_gul[c] += self.g_ul[r]
        self.sum_gdl[c] += self.g_dl[r]

    def remove(self, r: int) -> None:
        c = self.assign[r]
        self.assign[r] = None
        self.members[c].discard(r)
        self.sum_wul[c] -= self.w_ul[r]
        self.sum_wdl[c] -= self.w_dl[r]
        self.sum_gul[c] -= self.g_ul[r]
        self.sum_gdl[c] -= self.g_dl[r]

    def cost(self, r: int) -> float:
        c = self.assign[r]
        if c is None:
            return 0.0
        _, _, node = self.clouds[c]
        eps = self.sc.epsilon
        cm = self.sc.cost_model
        b_share = (self.w_ul[r] * node.b_ul_bps / (eps + self.sum_wul[c])
                   + self.w_dl[r] * node.b_dl_bps / (eps + self.sum_wdl[c]))
        g_share = (self.g_ul[r] * node.g_ul_gops / (eps + self.sum_gul[c])
                   + self.g_dl[r] * node.g_dl_gops / (eps + self.sum_gdl[c]))
        return round(cm.default_fee + cm.per_gbps * b_share / 1e9
                     + cm.per_gops * self.disc[r][c] * g_share, COST_DECIMALS)

    def costs(self) -> list[float]:
        return [self.cost(r) for r in range(self.n_ru)]

    def sorted_cost_key(self) -> tuple:
        return tuple(sorted((self.cost(r) for r in range(self.n_ru)
                             if self.assign[r] is not None), reverse=True))

    def to_assignment(self) -> Assignment:
        n_e = len(self.sc.edges)
        n_q = len(self.sc.oclouds)
        choices = []
        for r in range(self.n_ru):
            c = self.assign[r]
            if c is None:
                choices.append(None)
            else:
                side, j, _ = self.clouds[c]
                choices.append((side, j))
        return Assignment.from_vector(choices, n_e, n_q)


def _phase1(st: _State, order: list[int], prefer_same_mno: bool) -> None:
    """Attach each RU to its nearest feasible cloud, in ownership-mix order."""
    for r in order:
        ru = st.sc.rus[r]

        def key(c):
            _, _, node = st.clouds[c]
            same = (node.kind is CloudKind.EDGE and node.mno_id == ru.mno_id)
            pref = 0 if (prefer_same_mno and same) else 1
            return (round(st.dist[r][c], 9), pref, c)

        for c in sorted(range(st.n_c), key=key):
            if st.can_add(r, c):
                st.add(r, c)
                break


def _similar(st: _State, r: int, s: int, tau: float) -> bool:
    a, b = st.demand[r], st.demand[s]
    return abs(a - b) <= tau * max(a, b)


def solve_heuristic(scenario, tau: float = 0.2, seed: int = 0) -> SolverResult:
    """Two-phase min-max heuristic.

    Phase 1 attaches RUs (interleaved by MNO ownership) to the nearest
    feasible cloud, preferring a same-operator edge among distance ties.
    Phase 2 repeatedly takes the costliest RU in the working set and
    applies the admissible change that cuts its cost the most, where a
    change is either a relocation to another cloud that already hosts an
    RU of similar demand (within tau, or is empty), or a place-swap with
    a similar-demand RU on another cloud. A change is admissible when it
    keeps everyone feasible, strictly reduces the mover's cost, and
    raises nobody above the mover's previous cost. RUs with no admissible
    change leave the working set; the loop ends when the set is empty.
    """
    if tau < 0.0:
        raise ConfigurationError(f"tau must be >= 0, got {tau}")
    t0 = time.perf_counter()
    order = mix_by_ownership(scenario.rus, scenario.mno_fractions(), seed)
    rank = {r: i for i, r in enumerate(order)}

    st = _State(scenario)
    _phase1(st, order, prefer_same_mno=True)

    working = {r for r in range(st.n_ru) if st.assign[r] is not None}
    iterations = 0
    max_iterations = max(1, st.n_ru * st.n_c * 50)
    seen: set[tuple] = {tuple(st.assign)}
    while working and iterations < max_iterations:
        iterations += 1
        costs = st.costs()
        r = max(working, key=lambda s: (costs[s], -rank[s]))
        r_old = costs[r]
        cur = st.assign[r]
        cap = r_old - _TIE / 2

        def raised(s: int) -> bool:
            # nobody may be *raised* above the mover's original cost;
            # RUs already above it are fine as long as they do not rise
            return st.cost(s) > max(costs[s], r_old) + _TIE / 2

        best = None   # (new cost of r, kind, index)
        st.remove(r)
        # a change only touches co-tenants of the two clouds involved, so
        # admissibility is checked on those pools alone; for relocations
        # the vacated pool looks the same for every target
        src_ok = not any(raised(s) for s in st.members[cur])
        if src_ok:
            for c in range(st.n_c):
                if c == cur or not st.can_add(r, c):
                    continue
                if st.members[c] and not any(_similar(st, r, s, tau)
                                             for s in st.members[c]):
                    continue
                st.add(r, c)
                new_r = st.cost(r)
                cand = (new_r, 0, c)
                if (new_r < cap and (best is None or cand < best)
                        and not any(raised(s) for s in st.members[c] if s != r)
                        and tuple(st.assign) not in seen):
                    best = cand
                st.remove(r)
        # place-swaps with a similar-demand RU on another cloud
        for s in range(st.n_ru):
            c_s = st.assign[s]
            if s == r or c_s is None or c_s == cur or not _similar(st, r, s, tau):
                continue
            st.remove(s)
            if st.can_add(r, c_s) and st.can_add(s, cur):
                st.add(r, c_s)
                st.add(s, cur)
                new_r = st.cost(r)
                cand = (new_r, 1, s)
                if (new_r < cap and (best is None or cand < best)
                        and not any(raised(t) for t in st.members[c_s] if t != r)
                        and not any(raised(t) for t in st.members[cur])
                        and tuple(st.assign) not in seen):
                    best = cand
                st.remove(r)
                st.remove(s)
            st.add(s, c_s)
        if best is None:
            st.add(r, cur)
            working.discard(r)
        elif best[1] == 0:
            st.add(r, best[2])
            seen.add(tuple(st.assign))
        else:
            s = best[2]
            c_s = st.assign[s]
            st.remove(s)
            st.add(r, c_s)
            st.add(s, cur)
            seen.add(tuple(st.assign))

    # wall_time_s covers the algorithm; validation and report derivation
    # are shared post-processing
    wall = time.perf_counter() - t0
    a = st.to_assignment()
    feas = check_feasible(a, scenario)
    assert feas.feasible, f"heuristic produced infeasible assignment: {feas.first_violation}"
    report = allocation_report(a, scenario)
    outage = [scenario.rus[r].id for r in a.unassigned]
    return SolverResult(a, report, outage, iterations, wall)


def solve_exact(scenario, limit: int = 10_000_000) -> SolverResult:
    """Exhaustive oracle: every RU tries every reachable cloud or stays out.

    Optimal by full enumeration, preferring maximum coverage first, then
    the lexicographically smallest descending-sorted cost vector. Refuses
    instances whose search space exceeds `limit`.
    """
    t0 = time.perf_counter()
    st = _State(scenario)
    n_ru, n_c = st.n_ru, st.n_c
    space = (n_c + 1) ** n_ru
    if space > limit:
        raise ConfigurationError(
            f"search space {(n_c + 1)}^{n_ru} = {space} exceeds limit {limit}"
        )

    best_key: tuple | None = None
    best_vec: list[int | None] | None = None
    leaves = 0

    def dfs(r: int, unassigned: int):
        nonlocal best_key, best_vec, leaves
        if r == n_ru:
            leaves += 1
            key = (unassigned, st.sorted_cost_key())
            if best_key is None or key < best_key:
                best_key = key
                best_vec = list(st.assign)
            return
        for c in range(n_c):
            if st.can_add(r, c):
                st.add(r, c)
                dfs(r + 1, unassigned)
                st.remove(r)
        dfs(r + 1, unassigned + 1)

    dfs(0, 0)
    wall = time.perf_counter() - t0

    if best_vec is None:
        best_vec = [None] * n_ru
    choices = []
    for c in best_vec:
        if c is None:
            choices.append(None)
        else:
            side, j, _ = st.clouds[c]
            choices.append((side, j))
    a = Assignment.from_vector(choices, len(scenario.edges), len(scenario.oclouds))
    feas = check_feasible(a, scenario)
    assert feas.feasible, f"exact produced infeasible assignment: {feas.first_violation}"
    report = allocation_report(a, scenario)
    outage = [scenario.rus[r].id for r in a.unassigned]
    return SolverResult(a, report, outage, leaves, wall)


def solve_baseline_uniform(scenario, seed: int = 0) -> SolverResult:
    """Nearest-feasible greedy with total OPEX split uniformly.

    Phase 1 only, without the same-operator preference; the summed cost of
    all leased resources (default fees plus capacity shares) is divided
    equally among the assigned RUs, and the operator-level bill is the
    total divided equally among the operators that have RUs served.
    """
    t0 = time.perf_counter()
    order = mix_by_ownership(scenario.rus, scenario.mno_fractions(), seed)
    st = _State(scenario)
    _phase1(st, order, prefer_same_mno=False)
    wall = time.perf_counter() - t0

    a = st.to_assignment()
    feas = check_feasible(a, scenario)
    assert feas.feasible, f"baseline produced infeasible assignment: {feas.first_violation}"

    raw = core.cost_vector(a, scenario)
    assigned = [r for r in range(st.n_ru) if st.assign[r] is not None]
    if assigned:
        uniform = round(sum(raw[r] for r in assigned) / len(assigned), COST_DECIMALS)
    else:
        uniform = 0.0
    per_ru = [uniform if st.assign[r] is not None else 0.0 for r in range(st.n_ru)]
    report = allocation_report(a, scenario, per_ru_cost=per_ru)
    served = sorted({scenario.rus[r].mno_id for r in assigned})
    total = sum(raw[r] for r in assigned)
    report.per_mno_cost = {m: round(total / len(served), COST_DECIMALS)
                           for m in served}
    outage = [scenario.rus[r].id for r in a.unassigned]
    return SolverResult(a, report, outage, 0, wall)


class _BaseAllocator(BaseEstimator):
    """Estimator-style wrapper: fit(scenario) stores result_ attributes."""

    def _solve(self, scenario) -> SolverResult:
        raise NotImplementedError

    def fit(self, scenario, y=None):
        self.result_ = self._solve(scenario)
        self.assignment_ = self.result_.assignment
        self.report_ = self.result_.report
        self.scenario_ = scenario
        return self

    def predict(self, scenario=None):
        """Mapping of RU id to hosting cloud id (None for outage RUs)."""
        if scenario is not None and scenario is not getattr(self, "scenario_", None):
            self.fit(scenario)
        out = {}
        for r, ru in enumerate(self.scenario_.rus):
            where = self.assignment_.cloud_of(r)
            if where is None:
                out[ru.id] = None
            else:
                side, j = where
                cloud = (self.scenario_.edges[j] if side == "e"
                         else self.scenario_.oclouds[j])
                out[ru.id] = cloud.id
        return out


class MinMaxHeuristicAllocator(_BaseAllocator):
    def __init__(self, tau: float = 0.2, seed: int = 0):
        self.tau = tau
        self.seed = seed

    def _solve(self, scenario):
        return solve_heuristic(scenario, tau=self.tau, seed=self.seed)


class ExactAllocator(_BaseAllocator):
    def __init__(self, limit: int = 10_000_000):
        self.limit = limit

    def _solve(self, scenario):
        return solve_exact(scenario, limit=self.limit)


class UniformBaselineAllocator(_BaseAllocator):
    def __init__(self, seed: int = 0):
        self.seed = seed

    def _solve(self, scenario):
        return solve_baseline_uniform(scenario, seed=self.seed)


SOLVERS = {
    "heuristic": MinMaxHeuristicAllocator,
    "exact": ExactAllocator,
    "baseline": UniformBaselineAllocator,
}
