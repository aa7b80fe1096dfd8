"""Dataset-level analytics: summaries, country means, correlation, ROI, preferred distance."""

from __future__ import annotations

import csv
import io
import json
import math
from importlib.resources import files
from dataclasses import dataclass, field

import numpy as np

from .emotion import EMOTIONS
from .features import FrameState
from .ocean import DIMENSIONS
from .trajectory_io import EPS_STILL, SceneDataset, Trajectory, wrap_degrees

FRONT_CONE_HALF_ANGLE = 30.0  # degrees


class UndefinedCorrelationError(ValueError):
    pass


@dataclass
class VideoSummary:
    label: str
    ocean: dict[str, float]
    emotion: dict[str, float]
    person_count: int
    frame_count: int
    population: int | None = None  # trajectories in the source dataset

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "ocean": {d: self.ocean[d] for d in DIMENSIONS},
            "emotion": {e: self.emotion[e] for e in EMOTIONS},
            "person_count": self.person_count,
            "frame_count": self.frame_count,
            "population": self.population,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "VideoSummary":
        return cls(
            label=d["label"],
            ocean={k: float(d["ocean"][k]) for k in DIMENSIONS},
            emotion={k: float(d["emotion"][k]) for k in EMOTIONS},
            person_count=int(d["person_count"]),
            frame_count=int(d["frame_count"]),
            population=d.get("population"),
        )


def country_mean(summaries: list[VideoSummary], label: str | None = None) -> VideoSummary:
    """Unweighted mean over videos of every OCEAN dimension and emotion."""
    if not summaries:
        raise ValueError("country_mean needs at least one video summary")
    n = len(summaries)
    return VideoSummary(
        label=label if label is not None else summaries[0].label,
        ocean={d: math.fsum(s.ocean[d] for s in summaries) / n for d in DIMENSIONS},
        emotion={e: math.fsum(s.emotion[e] for s in summaries) / n for e in EMOTIONS},
        person_count=sum(s.person_count for s in summaries),
        frame_count=sum(s.frame_count for s in summaries),
        population=None,
    )


def pearson(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("pearson needs two 1-D series of equal length")
    if len(x) < 2:
        raise ValueError("pearson needs at least 2 points")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelationError("zero variance")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def correlate_summaries(a: VideoSummary, b: VideoSummary) -> dict:
    """OCEAN (5-vector) and emotion (4-vector) correlations; None when undefined."""
    out = {}
    for key, names, attr in (("ocean", DIMENSIONS, "ocean"), ("emotion", EMOTIONS, "emotion")):
        xa = [getattr(a, attr)[k] for k in names]
        xb = [getattr(b, attr)[k] for k in names]
        try:
            out[key] = {"r": pearson(xa, xb), "defined": True}
        except UndefinedCorrelationError:
            out[key] = {"r": None, "defined": False}
    return out


@dataclass(frozen=True)
class ROI:
    x0: float
    y0: float
    width: float
    height: float

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise ValueError("ROI extents must be positive")

    def contains(self, x: float, y: float) -> bool:
        return self.x0 <= x <= self.x0 + self.width and self.y0 <= y <= self.y0 + self.height

    def to_dict(self) -> dict:
        return {"x0": self.x0, "y0": self.y0, "width": self.width, "height": self.height}


def roi_filter(dataset: SceneDataset, roi: ROI) -> SceneDataset:
    """Keep only samples inside ``roi`` (boundary inclusive); drop emptied trajectories."""
    trajs = []
    for t in dataset.trajectories:
        mask = np.array([roi.contains(x, y) for x, y in t.positions], dtype=bool)
        if mask.any():
            trajs.append(Trajectory(t.person_id, t.frames[mask], t.positions[mask]))
    return SceneDataset(trajs, frame_rate=dataset.frame_rate, units=dataset.units, label=dataset.label)


@dataclass
class PreferredDistance:
    per_person: dict[int, float] = field(default_factory=dict)
    video_mean: float | None = None


def front_neighbor(i: int, state: FrameState, half_angle: float = FRONT_CONE_HALF_ANGLE):
    """(index, distance) of the nearest person inside i's heading cone, or None."""
    if state.speed[i] < EPS_STILL:
        return None
    rel = state.positions - state.positions[i]
    dist = np.sqrt(rel[:, 0] * rel[:, 0] + rel[:, 1] * rel[:, 1])
    bearing = np.degrees(np.arctan2(rel[:, 1], rel[:, 0]))
    off = np.abs(wrap_degrees(bearing - state.heading[i]))
    ok = (off <= half_angle) & (dist > 0)
    ok[i] = False
    if not ok.any():
        return None
    cand = np.flatnonzero(ok)
    j = cand[np.argmin(dist[cand])]
    return int(j), float(dist[j])


def preferred_distance(states: list[FrameState], half_angle: float = FRONT_CONE_HALF_ANGLE) -> PreferredDistance:
    """Mean distance to the person right in front, averaged over frames then persons.

    Persons who never have a frontal neighbor are left out of the video mean.
    """
    samples: dict[int, list[float]] = {}
    for state in states:
        for i in range(len(state)):
            hit = front_neighbor(i, state, half_angle)
            if hit is not None:
                samples.setdefault(int(state.ids[i]), []).append(hit[1])
    per_person = {pid: math.fsum(v) / len(v) for pid, v in sorted(samples.items())}
    video = math.fsum(per_person.values()) / len(per_person) if per_person else None
    return PreferredDistance(per_person, video)


def density_series(summaries: list[VideoSummary]) -> list[dict]:
    """One row per dataset, sorted ascending by population (the dimension N is neuroticism)."""
    rows = []
    for s in summaries:
        n = s.population if s.population is not None else s.person_count
        row = {"population": n, "label": s.label}
        row.update({d: s.ocean[d] for d in DIMENSIONS})
        row.update({e: s.emotion[e] for e in EMOTIONS})
        rows.append(row)
    rows.sort(key=lambda r: (r["population"], r["label"]))
    return rows


def long_format_csv(rows: list[tuple[str, str, float, float]]) -> str:
    """Plot-ready ``series,label,x,y`` CSV."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(("series", "label", "x", "y"))
    for series, label, x, y in rows:
        writer.writerow((series, label, repr(float(x)), repr(float(y))))
    return out.getvalue()


def density_long_rows(series_rows: list[dict]) -> list[tuple[str, str, float, float]]:
    rows = []
    for r in series_rows:
        for key in DIMENSIONS + EMOTIONS:
            rows.append((key, r["label"], float(r["population"]), r[key]))
    return rows


def load_reference(name: str) -> dict:
    """Bundled external reference tables: ``"ocean"`` or ``"personal_space"``."""
    text = files("crowdtraits").joinpath("data", f"reference_{name}.json").read_text(encoding="utf-8")
    return json.loads(text)
