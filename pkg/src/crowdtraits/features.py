"""Per-frame individual features: speed, alpha, isolation, socialization, collectivity."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .trajectory_io import Kinematics, wrap_degrees


class EmptyFrameError(ValueError):
    pass


@dataclass(frozen=True)
class ProxemicsConfig:
    d_hall: float = 3.6  # social space radius, meters
    gamma: float = 1.0  # maximum per-neighbor collectivity
    beta: float = 0.3  # decay constant
    w1: float = 1.0  # speed-difference weight
    w2: float = 1.0  # orientation-difference weight (radians)

    def __post_init__(self):
        for name in ("d_hall", "gamma", "beta", "w1", "w2"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")


@dataclass
class FrameState:
    """Everyone present at one frame, in a fixed order."""

    frame: int
    ids: np.ndarray
    positions: np.ndarray  # (n, 2)
    speed: np.ndarray
    heading: np.ndarray  # signed degrees
    alpha: np.ndarray  # unsigned degrees

    def __len__(self):
        return len(self.ids)


@dataclass
class FrameFeatures:
    person_id: int
    frame: int
    speed: float
    alpha: float
    isolation: float
    socialization: float
    collectivity: float
    collectivity_mean: float
    n_social: int


@dataclass
class AveragedFeatures:
    person_id: int
    n_frames: int
    speed: float
    alpha: float
    isolation: float
    socialization: float
    collectivity: float
    collectivity_mean: float
    std_alpha_change: float


def frame_states(kinematics: dict[int, Kinematics], keep=None) -> list[FrameState]:
    """Regroup per-person kinematics into per-frame states.

    ``keep(x, y)`` optionally restricts which samples enter the states (e.g. a ROI).
    """
    rows: dict[int, list] = {}
    for pid in sorted(kinematics):
        k = kinematics[pid]
        for idx in range(len(k)):
            x, y = k.positions[idx]
            if keep is not None and not keep(x, y):
                continue
            rows.setdefault(int(k.frames[idx]), []).append(
                (pid, x, y, k.speed[idx], k.heading[idx], k.alpha[idx]))
    states = []
    for frame in sorted(rows):
        r = rows[frame]
        states.append(FrameState(
            frame=frame,
            ids=np.array([e[0] for e in r], dtype=np.int64),
            positions=np.array([(e[1], e[2]) for e in r], dtype=float).reshape(-1, 2),
            speed=np.array([e[3] for e in r], dtype=float),
            heading=np.array([e[4] for e in r], dtype=float),
            alpha=np.array([e[5] for e in r], dtype=float),
        ))
    return states


def pairwise_distances(positions: np.ndarray) -> np.ndarray:
    diff = positions[:, None, :] - positions[None, :, :]
    return np.sqrt(diff[..., 0] * diff[..., 0] + diff[..., 1] * diff[..., 1])


def orientation_difference(h1, h2):
    """Absolute heading difference in degrees, wrapped into [0, 180]."""
    return np.abs(wrap_degrees(np.asarray(h1, dtype=float) - np.asarray(h2, dtype=float)))


def social_neighbors(i: int, state: FrameState, config: ProxemicsConfig = ProxemicsConfig()) -> set[int]:
    """Indices j != i within ``d_hall`` of person index ``i`` (boundary inclusive)."""
    d = pairwise_distances(state.positions)[i]
    mask = d <= config.d_hall
    mask[i] = False
    return set(np.flatnonzero(mask).tolist())


def isolation(distances, d_hall: float = 3.6) -> float:
    """1 when alone, else the mean neighbor distance over ``d_hall``."""
    distances = np.asarray(distances, dtype=float)
    if distances.size == 0:
        return 1.0
    return float(distances.mean() / d_hall)


def socialization(n_social: int, rho: int) -> float:
    if rho < 1:
        raise EmptyFrameError("no individuals in frame")
    if n_social == 0:
        return 0.0
    return n_social / rho


def collectivity_terms(speed_i: float, heading_i: float, speeds, headings,
                       config: ProxemicsConfig = ProxemicsConfig()) -> np.ndarray:
    """gamma * exp(-beta * w^2) per neighbor, w = |ds| * w1 + |do| (radians) * w2."""
    ds = np.abs(np.asarray(speeds, dtype=float) - speed_i)
    do = np.radians(orientation_difference(heading_i, headings))
    w = ds * config.w1 + do * config.w2
    return config.gamma * np.exp(-config.beta * w * w)


def collectivity(speed_i: float, heading_i: float, speeds, headings,
                 config: ProxemicsConfig = ProxemicsConfig()) -> float:
    terms = collectivity_terms(speed_i, heading_i, speeds, headings, config)
    return float(terms.sum()) if terms.size else 0.0


def compute_frame(state: FrameState, config: ProxemicsConfig = ProxemicsConfig()) -> list[FrameFeatures]:
    n = len(state)
    if n == 0:
        return []
    dist = pairwise_distances(state.positions)
    social = dist <= config.d_hall
    np.fill_diagonal(social, False)
    ds = np.abs(state.speed[:, None] - state.speed[None, :])
    do = np.radians(orientation_difference(state.heading[:, None], state.heading[None, :]))
    w = ds * config.w1 + do * config.w2
    terms = config.gamma * np.exp(-config.beta * w * w)

    out = []
    for i in range(n):
        nb = social[i]
        n_social = int(nb.sum())
        coll = float(terms[i, nb].sum()) if n_social else 0.0
        out.append(FrameFeatures(
            person_id=int(state.ids[i]),
            frame=state.frame,
            speed=float(state.speed[i]),
            alpha=float(state.alpha[i]),
            isolation=isolation(dist[i, nb], config.d_hall),
            socialization=socialization(n_social, n),
            collectivity=coll,
            collectivity_mean=coll / n_social if n_social else 0.0,
            n_social=n_social,
        ))
    return out


def feature_vector(states: list[FrameState], kinematics: dict[int, Kinematics],
                   config: ProxemicsConfig = ProxemicsConfig()
                   ) -> tuple[list[FrameFeatures], dict[int, AveragedFeatures]]:
    """Per-frame features for every person-frame plus per-person averages."""
    per_frame: list[FrameFeatures] = []
    for state in states:
        per_frame.extend(compute_frame(state, config))
    return per_frame, average_features(per_frame, kinematics)


def average_features(per_frame: list[FrameFeatures], kinematics: dict[int, Kinematics]) -> dict[int, AveragedFeatures]:
    by_person: dict[int, list[FrameFeatures]] = {}
    for ff in per_frame:
        by_person.setdefault(ff.person_id, []).append(ff)
    out = {}
    for pid in sorted(by_person):
        rows = by_person[pid]
        frames = {r.frame for r in rows}
        k = kinematics[pid]
        changes = [c for f, c in zip(k.frames.tolist(), k.heading_change.tolist()) if f in frames]
        out[pid] = AveragedFeatures(
            person_id=pid,
            n_frames=len(rows),
            speed=_mean(r.speed for r in rows),
            alpha=_mean(r.alpha for r in rows),
            isolation=_mean(r.isolation for r in rows),
            socialization=_mean(r.socialization for r in rows),
            collectivity=_mean(r.collectivity for r in rows),
            collectivity_mean=_mean(r.collectivity_mean for r in rows),
            std_alpha_change=float(np.std(changes)) if changes else 0.0,
        )
    return out


def _mean(values) -> float:
    values = list(values)
    return math.fsum(values) / len(values)
