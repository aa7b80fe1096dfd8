"""Deterministic synthetic scenes and brute-force reference implementations.

The oracles here evaluate every pair with scalar ``math`` code and share no
code with :mod:`crowdtraits.features` or :mod:`crowdtraits.groups`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .analysis import ROI
from .trajectory_io import SceneDataset, Trajectory

SCENARIO_KINDS = ("lone_walker", "lockstep_pair", "cluster", "corridor_loop")
LOOP_LENGTH = 17.3
LOOP_STRAIGHT = 4.0
LOOP_RADIUS = (LOOP_LENGTH - 2 * LOOP_STRAIGHT) / (2 * math.pi)
MIN_BODY_SPACING = 0.3  # meters between consecutive walkers on the loop
CORRIDOR_WIDTH = 0.8


class InfeasibleScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioSpec:
    kind: str = "corridor_loop"
    n: int = 15
    spacing: float = 1.0  # ignored by corridor_loop, which spaces walkers evenly
    speed: float = 0.04  # m/frame
    frames: int = 100
    seed: int = 0
    wanderers: int = 0  # extra isolated random walkers (cluster kind)
    frame_rate: float = 25.0

    def __post_init__(self):
        if self.kind not in SCENARIO_KINDS:
            raise ValueError(f"unknown scenario kind {self.kind!r}; expected one of {SCENARIO_KINDS}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not self.spacing > 0:
            raise ValueError("spacing must be > 0")
        if self.frames < 2:
            raise ValueError("frames must be >= 2")
        if self.wanderers < 0:
            raise ValueError("wanderers must be >= 0")


def generate(spec: ScenarioSpec) -> SceneDataset:
    rng = np.random.default_rng(spec.seed)
    t = np.arange(spec.frames)
    if spec.kind == "lone_walker":
        trajs = [_straight(pid, (0.0, pid * max(spec.spacing, 10.0)), 0.0, spec.speed, t) for pid in range(spec.n)]
    elif spec.kind == "lockstep_pair":
        trajs = [_straight(0, (0.0, 0.0), 0.0, spec.speed, t), _straight(1, (0.0, spec.spacing), 0.0, spec.speed, t)]
    elif spec.kind == "cluster":
        trajs = _cluster(spec, t)
        trajs += [_wanderer(spec.n + w, w, spec.speed, t, rng) for w in range(spec.wanderers)]
    else:
        trajs = _corridor(spec, t)
    label = f"{spec.kind}-n{spec.n}-seed{spec.seed}"
    return SceneDataset(trajs, frame_rate=spec.frame_rate, units="world_meters", label=label)


def _straight(pid, start, heading_deg, speed, t) -> Trajectory:
    h = math.radians(heading_deg)
    pos = np.column_stack([start[0] + speed * math.cos(h) * t, start[1] + speed * math.sin(h) * t])
    return Trajectory(pid, t.copy(), pos)


def _cluster(spec: ScenarioSpec, t) -> list[Trajectory]:
    # members in rows of two, walking +x in lockstep
    trajs = []
    for k in range(spec.n):
        row, col = divmod(k, 2)
        trajs.append(_straight(k, (-row * spec.spacing, col * spec.spacing), 0.0, spec.speed, t))
    return trajs


def _wanderer(pid, slot, speed, t, rng) -> Trajectory:
    # far from the cluster and from each other so that nobody enters their social space
    origin = np.array([40.0 * (slot + 1), 40.0 * (slot + 1)])
    headings = rng.uniform(-180, 180) + np.cumsum(rng.normal(0.0, 35.0, len(t)))
    own_speed = speed * rng.uniform(0.5, 1.5)
    steps = own_speed * np.column_stack([np.cos(np.radians(headings)), np.sin(np.radians(headings))])
    pos = origin + np.vstack([[0.0, 0.0], np.cumsum(steps[:-1], axis=0)])
    return Trajectory(pid, t.copy(), pos)


def loop_point(u: float) -> tuple[float, float]:
    """Position at arc length ``u`` along the stadium-shaped corridor centerline.

    The lower straight runs from (0, 0) to (LOOP_STRAIGHT, 0) in +x; walking is
    counterclockwise.
    """
    ell, r = LOOP_STRAIGHT, LOOP_RADIUS
    u = u % LOOP_LENGTH
    if u < ell:
        return u, 0.0
    u -= ell
    if u < math.pi * r:
        th = u / r
        return ell + r * math.sin(th), r - r * math.cos(th)
    u -= math.pi * r
    if u < ell:
        return ell - u, 2 * r
    th = (u - ell) / r
    return -r * math.sin(th), r + r * math.cos(th)


def corridor_roi() -> ROI:
    """The 2 x 0.8 m measurement rectangle centered on the lower straight."""
    return ROI((LOOP_STRAIGHT - 2.0) / 2, -CORRIDOR_WIDTH / 2, 2.0, CORRIDOR_WIDTH)


def _corridor(spec: ScenarioSpec, t) -> list[Trajectory]:
    spacing = LOOP_LENGTH / spec.n
    if spacing < MIN_BODY_SPACING:
        raise InfeasibleScenarioError(
            f"{spec.n} walkers need {spec.n * MIN_BODY_SPACING:.2f} m of loop; only {LOOP_LENGTH} m available")
    trajs = []
    for k in range(spec.n):
        pos = np.array([loop_point(k * spacing + spec.speed * f) for f in t.tolist()])
        trajs.append(Trajectory(k, t.copy(), pos))
    return trajs


def random_scene(seed: int, max_n: int = 20, frames: int = 50) -> SceneDataset:
    """Flocks of walkers with per-frame speed/heading jitter near the group thresholds.

    Some agents stand still for the whole scene so the stationary convention is exercised.
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, max_n + 1))
    n_flocks = int(rng.integers(1, 5))
    flock_of = rng.integers(0, n_flocks, n)
    centers = rng.uniform(0.0, 8.0, (n_flocks, 2))
    base_heading = rng.uniform(-180.0, 180.0, n_flocks)
    base_speed = rng.uniform(0.02, 0.08, n_flocks)
    still = rng.random(n) < 0.1
    trajs = []
    for pid in range(n):
        f = flock_of[pid]
        start = centers[f] + rng.uniform(-0.9, 0.9, 2)
        if still[pid]:
            pos = np.repeat(start[None, :], frames, axis=0)
        else:
            heading = base_heading[f] + rng.normal(0.0, 7.0, frames)
            speed = base_speed[f] * (1.0 + rng.normal(0.0, 0.03, frames))
            steps = speed[:, None] * np.column_stack([np.cos(np.radians(heading)), np.sin(np.radians(heading))])
            pos = start + np.vstack([[0.0, 0.0], np.cumsum(steps[:-1], axis=0)])
        trajs.append(Trajectory(pid, np.arange(frames), pos))
    return SceneDataset(trajs, frame_rate=25.0, units="world_meters", label=f"random-{seed}")


# -- oracles ----------------------------------------------------------------


def _dist(state, i, j) -> float:
    dx = float(state.positions[i][0]) - float(state.positions[j][0])
    dy = float(state.positions[i][1]) - float(state.positions[j][1])
    return math.sqrt(dx * dx + dy * dy)


def _heading_diff(a: float, b: float) -> float:
    return abs(((a - b) + 180.0) % 360.0 - 180.0)


def oracle_features(state, d_hall=3.6, gamma=1.0, beta=0.3, w1=1.0, w2=1.0) -> list[dict]:
    """Isolation, socialization and collectivity for every person by direct evaluation."""
    n = len(state.ids)
    out = []
    for i in range(n):
        dists = []
        coll = 0.0
        for j in range(n):
            if j == i:
                continue
            d = _dist(state, i, j)
            if d <= d_hall:
                dists.append(d)
                ds = abs(float(state.speed[i]) - float(state.speed[j]))
                do = math.radians(_heading_diff(float(state.heading[i]), float(state.heading[j])))
                w = ds * w1 + do * w2
                coll += gamma * math.exp(-beta * w * w)
        n_social = len(dists)
        out.append({
            "person_id": int(state.ids[i]),
            "n_social": n_social,
            "isolation": 1.0 if n_social == 0 else (sum(dists) / n_social) / d_hall,
            "socialization": 0.0 if n_social == 0 else n_social / n,
            "collectivity": coll,
        })
    return out


def oracle_pair(state, i, j, max_distance=1.2, max_orientation_diff=15.0, speed_fraction=0.05) -> bool:
    si, sj = float(state.speed[i]), float(state.speed[j])
    if si == 0.0 and sj == 0.0:
        speed_ok = True
    else:
        speed_ok = abs(si - sj) < speed_fraction * max(si, sj)
    return (_dist(state, i, j) <= max_distance
            and _heading_diff(float(state.heading[i]), float(state.heading[j])) <= max_orientation_diff
            and speed_ok)


def oracle_groups(state, **rules) -> set[frozenset[int]]:
    """Pairs passing every rule, merged while any two share a member."""
    sets = [{int(state.ids[i]), int(state.ids[j])}
            for i, j in itertools.combinations(range(len(state.ids)), 2) if oracle_pair(state, i, j, **rules)]
    merged = True
    while merged:
        merged = False
        for a, b in itertools.combinations(range(len(sets)), 2):
            if sets[a] & sets[b]:
                sets[a] |= sets.pop(b)
                merged = True
                break
    return {frozenset(s) for s in sets}
