"""Physical PON layout: splitter placement, fiber routes, reachability.

Radio units hang off level-1 reflective splitters; all level-1 splitters
connect to a single level-2 splitter; central offices sit behind the
level-2 splitter. East-West (peer-to-peer) virtual PONs run through the
level-1 splitter alone when both endpoints share it, or through
level-1 -> level-2 -> level-1 across branches. North-South traffic always
goes RU -> level-1 -> level-2 -> central office.

Distances are in kilometers and are polyline lengths along the fiber, not
straight-line endpoint distances.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field

import numpy as np


class ConfigurationError(ValueError):
    """Invalid topology or scenario configuration."""


@dataclass(frozen=True)
class Point2D:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ConfigurationError(f"non-finite coordinate ({self.x}, {self.y})")

    def distance_to(self, other: "Point2D") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


class Route(enum.Enum):
    EAST_WEST_L1 = "east_west_l1"
    EAST_WEST_L1L2 = "east_west_l1l2"
    NORTH_SOUTH = "north_south"


@dataclass
class SplitterTree:
    """Level-1 splitters with their member RUs, plus the level-2 splitter."""

    level1_splitters: list[Point2D]
    members: list[list[int]]            # RU indices per level-1 splitter
    level2_splitter: Point2D
    co_positions: list[Point2D] = field(default_factory=list)
    ru_positions: list[Point2D] = field(default_factory=list)

    def group_of_ru(self, ru_index: int) -> int:
        for g, mem in enumerate(self.members):
            if ru_index in mem:
                return g
        raise ConfigurationError(f"RU index {ru_index} not in any splitter group")

    def group_of_point(self, p: Point2D) -> int:
        """Group of an exact RU position, else the nearest level-1 splitter."""
        for g, mem in enumerate(self.members):
            for i in mem:
                if self.ru_positions[i] == p:
                    return g
        if not self.level1_splitters:
            raise ConfigurationError("tree has no level-1 splitters")
        dists = [p.distance_to(s) for s in self.level1_splitters]
        return min(range(len(dists)), key=lambda g: (dists[g], g))


def place_splitters(
    ru_positions: list[Point2D],
    k: int,
    seed: int,
    co_positions: list[Point2D] | None = None,
    area_km: tuple[float, float] | None = None,
    max_iter: int = 100,
) -> SplitterTree:
    """Cluster RU positions into k level-1 splitter groups (seeded k-means).

    Initial centroids are k distinct RU positions drawn with the seed;
    assignment ties break toward the lowest centroid index; iteration is
    capped at max_iter. The level-2 splitter sits at the area center when
    area_km is given, otherwise at the RU bounding-box center.
    """
    n = len(ru_positions)
    if k < 1:
        raise ConfigurationError(f"k must be >= 1, got {k}")
    if k > n:
        raise ConfigurationError(f"k={k} exceeds number of RUs ({n})")

    pts = np.array([[p.x, p.y] for p in ru_positions], dtype=float)
    rng = random.Random(seed)
    centroids = pts[rng.sample(range(n), k)].copy()

    assign = np.full(n, -1, dtype=int)
    for _ in range(max_iter):
        d2 = ((pts[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_assign = d2.argmin(axis=1)  # argmin takes the lowest index on ties
        if np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for g in range(k):
            sel = pts[assign == g]
            if len(sel):
                centroids[g] = sel.mean(axis=0)

    level1 = [Point2D(float(c[0]), float(c[1])) for c in centroids]
    members = [[int(i) for i in np.flatnonzero(assign == g)] for g in range(k)]

    if area_km is not None:
        center = Point2D(area_km[0] / 2.0, area_km[1] / 2.0)
    else:
        center = Point2D(float((pts[:, 0].min() + pts[:, 0].max()) / 2.0),
                         float((pts[:, 1].min() + pts[:, 1].max()) / 2.0))

    return SplitterTree(
        level1_splitters=level1,
        members=members,
        level2_splitter=center,
        co_positions=list(co_positions or []),
        ru_positions=list(ru_positions),
    )


def within_cluster_ss(tree: SplitterTree) -> float:
    """Sum of squared RU-to-splitter distances, for placement quality checks."""
    total = 0.0
    for g, mem in enumerate(tree.members):
        s = tree.level1_splitters[g]
        for i in mem:
            total += tree.ru_positions[i].distance_to(s) ** 2
    return total


def fiber_distance(a: Point2D, b: Point2D, tree: SplitterTree, route: Route) -> float:
    """Fiber path length in km between two endpoints along a declared route."""
    sa = tree.level1_splitters[tree.group_of_point(a)]
    if route is Route.EAST_WEST_L1:
        return a.distance_to(sa) + sa.distance_to(b)
    if route is Route.EAST_WEST_L1L2:
        sb = tree.level1_splitters[tree.group_of_point(b)]
        l2 = tree.level2_splitter
        return a.distance_to(sa) + sa.distance_to(l2) + l2.distance_to(sb) + sb.distance_to(b)
    if route is Route.NORTH_SOUTH:
        if b not in tree.co_positions:
            raise ConfigurationError(f"north-south endpoint {b} is not a CO position")
        return a.distance_to(sa) + sa.distance_to(tree.level2_splitter) + tree.level2_splitter.distance_to(b)
    raise ConfigurationError(f"unknown route {route!r}")


@dataclass
class Reachability:
    """Virtual-PON admissibility flags and fiber distances.

    z_re[r][e] = 1 when RU r can join an East-West virtual PON toward
    Edge-Cloud e; z_rq is always 1 (North-South links always exist).
    d_re/d_rq hold the fiber distance of the shortest admissible route.
    """

    z_re: np.ndarray
    z_rq: np.ndarray
    d_re: np.ndarray
    d_rq: np.ndarray


def compute_reachability(
    tree: SplitterTree,
    edge_positions: list[Point2D],
    co_positions: list[Point2D],
    multi_branch: bool = True,
) -> Reachability:
    """Derive reachability flags and distances for every RU/cloud pair.

    An RU reaches an Edge-Cloud through its level-1 splitter when both sit
    on the same branch; with multi_branch enabled, cross-branch virtual
    PONs through the level-2 splitter are also admitted.
    """
    n_ru = len(tree.ru_positions)
    n_e = len(edge_positions)
    n_q = len(co_positions)

    z_re = np.zeros((n_ru, n_e), dtype=int)
    d_re = np.zeros((n_ru, n_e), dtype=float)
    z_rq = np.ones((n_ru, n_q), dtype=int)
    d_rq = np.zeros((n_ru, n_q), dtype=float)

    edge_groups = [tree.group_of_point(p) for p in edge_positions]
    for r in range(n_ru):
        rp = tree.ru_positions[r]
        g = tree.group_of_ru(r)
        for e in range(n_e):
            if edge_groups[e] == g:
                z_re[r, e] = 1
                d_re[r, e] = fiber_distance(rp, edge_positions[e], tree, Route.EAST_WEST_L1)
            else:
                z_re[r, e] = 1 if multi_branch else 0
                d_re[r, e] = fiber_distance(rp, edge_positions[e], tree, Route.EAST_WEST_L1L2)
        for q in range(n_q):
            d_rq[r, q] = fiber_distance(rp, co_positions[q], tree, Route.NORTH_SOUTH)

    return Reachability(z_re=z_re, z_rq=z_rq, d_re=d_re, d_rq=d_rq)
