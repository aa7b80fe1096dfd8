"""Item answers for 25 NEO PI-R proxies and their OCEAN aggregation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .features import FrameFeatures

N_ITEMS = 25
ITEM_MAX = 4.0
RECIPROCAL_EPS = 1e-3
FLAT_RTOL = 1e-9  # spans below this fraction of the magnitude count as constant

# 1-based item numbers whose score is reversed (Q* = 4 - Q').
INVERTED_ITEMS = frozenset({2, 4, 5, 6, 7, 8, 11, 15, 24, 25})

DIMENSION_ITEMS = {
    "O": (2,),
    "C": (1,),
    "E": (3, 12, 14, 16, 17, 18, 19, 20, 21, 22, 23, 4, 5, 6, 7, 8, 11, 15),
    "A": (9, 10),
    "N": (13, 24, 25),
}
DIMENSIONS = ("O", "C", "E", "A", "N")
OCEAN_MODES = ("normalized", "literal")


class MissingPersonError(KeyError):
    pass


@dataclass(frozen=True)
class PersonalityVector:
    O: float
    C: float
    E: float
    A: float
    N: float

    def as_array(self) -> np.ndarray:
        return np.array([self.O, self.C, self.E, self.A, self.N])

    def to_dict(self) -> dict:
        return {d: getattr(self, d) for d in DIMENSIONS}

    @classmethod
    def from_array(cls, values) -> "PersonalityVector":
        return cls(*(float(v) for v in values))


def _recip(x):
    return 1.0 / (np.asarray(x, dtype=float) + RECIPROCAL_EPS)


def answer_items(speed, alpha, isolation, socialization, collectivity, std_alpha) -> np.ndarray:
    """Raw answers Q1..Q25 (columns) for arrays of person-frame features.

    Reciprocals use 1/(x + 1e-3) since alpha = 0 and collectivity = 0 are common.
    """
    s = np.atleast_1d(np.asarray(speed, dtype=float))
    a = np.atleast_1d(np.asarray(alpha, dtype=float))
    phi = np.atleast_1d(np.asarray(isolation, dtype=float))
    soc = np.atleast_1d(np.asarray(socialization, dtype=float))
    col = np.atleast_1d(np.asarray(collectivity, dtype=float))
    sd = np.atleast_1d(np.asarray(std_alpha, dtype=float))

    q = np.empty((len(s), N_ITEMS))
    q[:, 0] = s + _recip(a)
    q[:, 1] = a
    q[:, 2:8] = phi[:, None]
    q[:, 8:10] = col[:, None]
    q[:, 10] = phi + sd
    q[:, 11] = s + a
    q[:, 12] = phi + _recip(col)
    q[:, 13] = col + soc + _recip(a)
    q[:, 14] = _recip(q[:, 13])
    q[:, 15:21] = soc[:, None]
    q[:, 21:25] = (soc + col)[:, None]
    return q


def cumulative_std(values) -> np.ndarray:
    """Population std of values[:k+1] for every k."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return v
    n = np.arange(1, len(v) + 1)
    mean = np.cumsum(v) / n
    var = np.cumsum(v * v) / n - mean * mean
    return np.sqrt(np.maximum(var, 0.0))


def normalize_items(raw: np.ndarray) -> np.ndarray:
    """Per-item min-max onto [0, 4] over every row; constant items become 2.0."""
    raw = np.asarray(raw, dtype=float)
    if raw.ndim == 1:
        raw = raw[:, None]
    lo = raw.min(axis=0)
    span = raw.max(axis=0) - lo
    out = np.full_like(raw, ITEM_MAX / 2)
    ok = varying(lo, span)
    out[:, ok] = ITEM_MAX * (raw[:, ok] - lo[ok]) / span[ok]
    return np.clip(out, 0.0, ITEM_MAX)


def varying(lo: np.ndarray, span: np.ndarray) -> np.ndarray:
    """Columns whose spread exceeds rounding noise."""
    scale = np.maximum(np.abs(lo), np.abs(lo + span))
    return span > FLAT_RTOL * scale


def invert_items(answers: np.ndarray) -> np.ndarray:
    """Apply Q* = 4 - Q' to the reverse-scored items (last axis holds the 25 items)."""
    out = np.array(answers, dtype=float, copy=True)
    cols = [k - 1 for k in sorted(INVERTED_ITEMS)]
    out[..., cols] = ITEM_MAX - out[..., cols]
    return out


def dimension_sums(adjusted: np.ndarray) -> np.ndarray:
    adjusted = np.atleast_2d(adjusted)
    return np.column_stack([adjusted[:, [k - 1 for k in DIMENSION_ITEMS[d]]].sum(axis=1) for d in DIMENSIONS])


def aggregate_dimensions(adjusted: np.ndarray, mode: str = "normalized") -> np.ndarray:
    """Rows of adjusted answers -> rows of (O, C, E, A, N) in [0, 1].

    ``normalized`` divides each dimension's item sum by 4 x item count.
    ``literal`` divides by the item fraction (4%, 4%, 72%, 8%, 12%) and then
    min-max rescales every dimension over the rows given (constant -> 0.5).
    """
    sums = dimension_sums(adjusted)
    counts = np.array([len(DIMENSION_ITEMS[d]) for d in DIMENSIONS], dtype=float)
    if mode == "normalized":
        return sums / (counts * ITEM_MAX)
    if mode == "literal":
        scaled = sums / (counts / N_ITEMS)
        return minmax_columns(scaled, constant=0.5)
    raise ValueError(f"unknown ocean mode {mode!r}")


def minmax_columns(values: np.ndarray, constant: float = 0.5) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    lo = values.min(axis=0)
    span = values.max(axis=0) - lo
    out = np.full_like(values, constant)
    ok = varying(lo, span)
    out[:, ok] = (values[:, ok] - lo[ok]) / span[ok]
    return out


@dataclass
class OceanResult:
    rows: list[tuple[int, int]]  # (person_id, frame) per row
    raw_items: np.ndarray
    items: np.ndarray  # normalized to [0, 4], before inversion
    per_frame: np.ndarray  # (rows, 5)
    per_person: dict[int, PersonalityVector]

    def person_frames(self, pid: int) -> list[tuple[int, PersonalityVector]]:
        out = [(f, PersonalityVector.from_array(self.per_frame[k]))
               for k, (p, f) in enumerate(self.rows) if p == pid]
        if not out:
            raise MissingPersonError(pid)
        return out


def person_ocean(per_frame_features: list[FrameFeatures], heading_change: dict[int, dict[int, float]],
                 mode: str = "normalized") -> OceanResult:
    """OCEAN per person-frame and per person (mean over that person's frames).

    ``heading_change[pid][frame]`` feeds the cumulative std used by Q11.
    """
    ordered = sorted(per_frame_features, key=lambda r: (r.person_id, r.frame))
    if not ordered:
        empty = np.empty((0, N_ITEMS))
        return OceanResult([], empty, empty, np.empty((0, 5)), {})
    std_alpha = np.empty(len(ordered))
    start = 0
    while start < len(ordered):
        pid = ordered[start].person_id
        stop = start
        while stop < len(ordered) and ordered[stop].person_id == pid:
            stop += 1
        changes = [heading_change.get(pid, {}).get(r.frame, 0.0) for r in ordered[start:stop]]
        std_alpha[start:stop] = cumulative_std(changes)
        start = stop

    raw = answer_items(
        [r.speed for r in ordered], [r.alpha for r in ordered], [r.isolation for r in ordered],
        [r.socialization for r in ordered], [r.collectivity for r in ordered], std_alpha,
    )
    items = normalize_items(raw)
    per_frame = aggregate_dimensions(invert_items(items), mode)
    rows = [(r.person_id, r.frame) for r in ordered]

    per_person = {}
    pids = np.array([p for p, _ in rows])
    for pid in sorted(set(pids.tolist())):
        per_person[pid] = PersonalityVector.from_array(per_frame[pids == pid].mean(axis=0))
    return OceanResult(rows, raw, items, per_frame, per_person)


def group_ocean(member_vectors: list[PersonalityVector]) -> PersonalityVector:
    if not member_vectors:
        raise ValueError("group has no members")
    return PersonalityVector.from_array(np.mean([v.as_array() for v in member_vectors], axis=0))
