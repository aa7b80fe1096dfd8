"""Proxemics-based social group detection and group statistics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .features import FrameState, orientation_difference, pairwise_distances


@dataclass(frozen=True)
class GroupRuleConfig:
    max_distance: float = 1.2  # meters
    max_orientation_diff: float = 15.0  # degrees
    speed_fraction: float = 0.05  # of the higher speed

    def __post_init__(self):
        for name in ("max_distance", "max_orientation_diff", "speed_fraction"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")


@dataclass
class Group:
    group_id: int
    members: tuple[int, ...]
    mean_speed: float = float("nan")
    mean_alpha: float = float("nan")
    mean_distance: float = float("nan")
    n_frames: int = 0

    @property
    def n_g(self) -> int:
        return len(self.members)

    def to_dict(self) -> dict:
        return {
            "group_id": self.group_id,
            "n_g": self.n_g,
            "members": list(self.members),
            "mean_speed": self.mean_speed,
            "mean_alpha": self.mean_alpha,
            "mean_distance": self.mean_distance,
            "n_frames": self.n_frames,
        }


def pair_test(i: int, j: int, state: FrameState, config: GroupRuleConfig = GroupRuleConfig()) -> bool:
    """The three-rule pair check between person indices ``i`` and ``j``.

    Two stationary agents pass the speed rule (a zero difference is maximal similarity).
    """
    dx = state.positions[i, 0] - state.positions[j, 0]
    dy = state.positions[i, 1] - state.positions[j, 1]
    d = np.sqrt(dx * dx + dy * dy)
    do = orientation_difference(state.heading[i], state.heading[j])
    si, sj = state.speed[i], state.speed[j]
    top = max(si, sj)
    speed_ok = abs(si - sj) < config.speed_fraction * top or (si == 0 and sj == 0)
    return bool(d <= config.max_distance and do <= config.max_orientation_diff and speed_ok)


def pair_matrix(state: FrameState, config: GroupRuleConfig = GroupRuleConfig()) -> np.ndarray:
    dist = pairwise_distances(state.positions)
    do = orientation_difference(state.heading[:, None], state.heading[None, :])
    si, sj = state.speed[:, None], state.speed[None, :]
    speed_ok = (np.abs(si - sj) < config.speed_fraction * np.maximum(si, sj)) | ((si == 0) & (sj == 0))
    adj = (dist <= config.max_distance) & (do <= config.max_orientation_diff) & speed_ok
    np.fill_diagonal(adj, False)
    return adj


def detect_groups(state: FrameState, config: GroupRuleConfig = GroupRuleConfig()) -> list[Group]:
    """Connected components (size >= 2) of the passing-pair graph at one frame."""
    n = len(state)
    if n < 2:
        return []
    adj = pair_matrix(state, config)
    n_comp, labels = connected_components(csr_matrix(adj), directed=False)
    groups = []
    for c in range(n_comp):
        idx = np.flatnonzero(labels == c)
        if len(idx) < 2:
            continue
        groups.append(_frame_group(state, idx))
    groups.sort(key=lambda g: g.members)
    for gid, g in enumerate(groups):
        g.group_id = gid
    return groups


def _frame_group(state: FrameState, idx: np.ndarray) -> Group:
    pos = state.positions[idx]
    dist = pairwise_distances(pos)
    iu = np.triu_indices(len(idx), k=1)
    return Group(
        group_id=-1,
        members=tuple(sorted(int(p) for p in state.ids[idx])),
        mean_speed=float(state.speed[idx].mean()),
        mean_alpha=float(state.alpha[idx].mean()),
        mean_distance=float(dist[iu].mean()),
        n_frames=1,
    )


def partition(groups: list[Group]) -> set[frozenset[int]]:
    return {frozenset(g.members) for g in groups}


def group_stats(members, states: list[FrameState]) -> Group:
    """Video-level means over frames in which every member is present.

    Speed and alpha average over all member-frames; distance is the mean over
    frames of the mean pairwise member distance.
    """
    members = tuple(sorted(members))
    speeds, alphas, dists = [], [], []
    for state in states:
        lookup = {int(p): k for k, p in enumerate(state.ids)}
        if not all(m in lookup for m in members):
            continue
        idx = np.array([lookup[m] for m in members])
        speeds.extend(state.speed[idx].tolist())
        alphas.extend(state.alpha[idx].tolist())
        pd = pairwise_distances(state.positions[idx])
        dists.append(float(pd[np.triu_indices(len(idx), k=1)].mean()))
    nan = float("nan")
    return Group(
        group_id=-1,
        members=members,
        mean_speed=float(np.mean(speeds)) if speeds else nan,
        mean_alpha=float(np.mean(alphas)) if alphas else nan,
        mean_distance=float(np.mean(dists)) if dists else nan,
        n_frames=len(dists),
    )


def video_groups(states: list[FrameState], config: GroupRuleConfig = GroupRuleConfig(),
                 min_fraction: float = 0.5, per_frame: dict[int, list[Group]] | None = None) -> list[Group]:
    """Member sets grouped together in >= ``min_fraction`` of their co-present frames.

    Candidates are every member set observed as a per-frame group. Overlapping
    candidates are resolved greedily by (fraction desc, size desc, members asc)
    so the result is disjoint.
    """
    if per_frame is None:
        per_frame = {s.frame: detect_groups(s, config) for s in states}
    present = [set(int(p) for p in s.ids) for s in states]
    together = [[frozenset(g.members) for g in per_frame.get(s.frame, [])] for s in states]

    candidates = sorted({m for frame_groups in together for m in frame_groups}, key=lambda m: sorted(m))
    scored = []
    for cand in candidates:
        copresent = grouped = 0
        for ids, frame_groups in zip(present, together):
            if cand <= ids:
                copresent += 1
                if any(cand <= g for g in frame_groups):
                    grouped += 1
        frac = grouped / copresent
        if frac >= min_fraction:
            scored.append((frac, cand))
    scored.sort(key=lambda e: (-e[0], -len(e[1]), sorted(e[1])))

    taken: set[int] = set()
    chosen = []
    for _, cand in scored:
        if cand & taken:
            continue
        taken |= cand
        chosen.append(cand)

    result = [group_stats(c, states) for c in sorted(chosen, key=lambda m: sorted(m))]
    for gid, g in enumerate(result):
        g.group_id = gid
    return result

