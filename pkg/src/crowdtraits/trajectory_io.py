"""Trajectory datasets, ground-plane homography and per-frame kinematics."""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

EPS_STILL = 1e-6  # m/frame; below this the heading is undefined and alpha is 0

TRAJECTORY_HEADER = ("person_id", "frame", "x", "y")
CORRESPONDENCE_HEADER = ("img_x", "img_y", "world_x", "world_y")
UNITS = ("image_pixels", "world_meters")


class TrajectoryError(ValueError):
    pass


class TrajectoryParseError(TrajectoryError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DuplicateSampleError(TrajectoryError):
    pass


class InsufficientDataError(TrajectoryError):
    pass


class SingularSystemError(TrajectoryError):
    pass


class PointAtInfinityError(TrajectoryError):
    pass


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __iter__(self):
        yield self.x
        yield self.y


@dataclass
class Trajectory:
    person_id: int
    frames: np.ndarray  # (n,) int, strictly increasing
    positions: np.ndarray  # (n, 2) float

    def __post_init__(self):
        self.frames = np.asarray(self.frames, dtype=np.int64)
        self.positions = np.asarray(self.positions, dtype=float).reshape(-1, 2)
        if len(self.frames) != len(self.positions):
            raise TrajectoryError("frames and positions differ in length")
        if len(self.frames) > 1 and np.any(np.diff(self.frames) <= 0):
            raise TrajectoryError(f"person {self.person_id}: frames not strictly increasing")
        if not np.all(np.isfinite(self.positions)):
            raise TrajectoryError(f"person {self.person_id}: non-finite position")

    def __len__(self):
        return len(self.frames)


@dataclass
class SceneDataset:
    trajectories: list[Trajectory] = field(default_factory=list)
    frame_rate: float = 25.0
    units: str = "world_meters"
    label: str = ""

    def __post_init__(self):
        if self.frame_rate <= 0:
            raise TrajectoryError("frame_rate must be positive")
        if self.units not in UNITS:
            raise TrajectoryError(f"unknown units {self.units!r}")
        ids = [t.person_id for t in self.trajectories]
        if len(set(ids)) != len(ids):
            raise TrajectoryError("person ids are not unique")

    def __len__(self):
        return len(self.trajectories)

    def samples(self) -> list[tuple[int, int, float, float]]:
        """All (person_id, frame, x, y) rows, ordered by person then frame."""
        rows = []
        for t in sorted(self.trajectories, key=lambda t: t.person_id):
            for f, (x, y) in zip(t.frames.tolist(), t.positions.tolist()):
                rows.append((t.person_id, f, x, y))
        return rows

    def metadata(self) -> dict:
        return {"frame_rate": self.frame_rate, "units": self.units, "label": self.label}


def parse_trajectories(source, format: str = "csv", *, frame_rate: float = 25.0,
                       units: str = "world_meters", label: str = "") -> SceneDataset:
    """Read a ``person_id,frame,x,y`` CSV into a :class:`SceneDataset`.

    ``source`` may be bytes, str, or a binary/text stream.
    """
    if format != "csv":
        raise ValueError(f"unsupported format {format!r}")
    text = _read_text(source)
    reader = csv.reader(io.StringIO(text))
    buckets: dict[int, dict[int, tuple[float, float]]] = {}
    header_seen = False
    for lineno, row in enumerate(reader, start=1):
        if not row or all(not c.strip() for c in row):
            continue
        if not header_seen:
            if tuple(c.strip() for c in row) != TRAJECTORY_HEADER:
                raise TrajectoryParseError(lineno, f"expected header {','.join(TRAJECTORY_HEADER)}")
            header_seen = True
            continue
        if len(row) != 4:
            raise TrajectoryParseError(lineno, f"expected 4 fields, got {len(row)}")
        try:
            pid, frame = int(row[0]), int(row[1])
            x, y = float(row[2]), float(row[3])
        except ValueError as exc:
            raise TrajectoryParseError(lineno, str(exc)) from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise TrajectoryParseError(lineno, "non-finite coordinate")
        per_id = buckets.setdefault(pid, {})
        if frame in per_id:
            raise DuplicateSampleError(f"line {lineno}: duplicate sample for person {pid} frame {frame}")
        per_id[frame] = (x, y)

    trajectories = []
    for pid in sorted(buckets):
        frames = sorted(buckets[pid])
        trajectories.append(Trajectory(pid, np.array(frames), np.array([buckets[pid][f] for f in frames])))
    return SceneDataset(trajectories, frame_rate=frame_rate, units=units, label=label)


def _read_text(source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8-sig")
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode("utf-8-sig") if isinstance(data, bytes) else data


def format_trajectories(dataset: SceneDataset) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(TRAJECTORY_HEADER)
    for pid, frame, x, y in dataset.samples():
        writer.writerow((pid, frame, repr(x), repr(y)))
    return out.getvalue()


def load_dataset(csv_path: str | Path, meta_path: str | Path | None = None) -> SceneDataset:
    """Load a trajectory CSV plus its JSON sidecar (``<csv>.json`` if present)."""
    csv_path = Path(csv_path)
    meta = {}
    if meta_path is None:
        candidate = csv_path.with_suffix(csv_path.suffix + ".json")
        meta_path = candidate if candidate.exists() else None
    if meta_path is not None:
        meta = json.loads(Path(meta_path).read_text(encoding="utf-8"))
    with open(csv_path, "rb") as fh:
        return parse_trajectories(
            fh,
            frame_rate=float(meta.get("frame_rate", 25.0)),
            units=meta.get("units", "world_meters"),
            label=meta.get("label", csv_path.stem),
        )


def save_dataset(dataset: SceneDataset, csv_path: str | Path) -> None:
    csv_path = Path(csv_path)
    csv_path.write_text(format_trajectories(dataset), encoding="utf-8")
    meta_path = csv_path.with_suffix(csv_path.suffix + ".json")
    meta_path.write_text(json.dumps(dataset.metadata(), indent=2, sort_keys=True) + "\n", encoding="utf-8")


# -- homography -------------------------------------------------------------


@dataclass(frozen=True)
class Homography:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float).reshape(3, 3)
        if abs(np.linalg.det(m)) < 1e-300 or not np.all(np.isfinite(m)):
            raise SingularSystemError("homography matrix is singular")
        if m[2, 2] != 0:
            m = m / m[2, 2]
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls) -> "Homography":
        return cls(np.eye(3))

    def apply(self, p) -> Point2:
        return apply_homography(self, p)

    def apply_many(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        hom = np.column_stack([pts, np.ones(len(pts))]) @ self.matrix.T
        if np.any(hom[:, 2] == 0):
            raise PointAtInfinityError("point maps to infinity")
        return hom[:, :2] / hom[:, 2:3]


def apply_homography(h: Homography, p) -> Point2:
    x, y = p
    m = h.matrix
    w = m[2, 0] * x + m[2, 1] * y + m[2, 2]
    if w == 0:
        raise PointAtInfinityError(f"({x}, {y}) maps to infinity")
    return Point2((m[0, 0] * x + m[0, 1] * y + m[0, 2]) / w,
                  (m[1, 0] * x + m[1, 1] * y + m[1, 2]) / w)


def _normalizing_transform(pts: np.ndarray) -> np.ndarray:
    centroid = pts.mean(axis=0)
    mean_dist = np.mean(np.linalg.norm(pts - centroid, axis=1))
    if mean_dist == 0:
        raise SingularSystemError("all points coincide")
    s = math.sqrt(2.0) / mean_dist
    return np.array([[s, 0.0, -s * centroid[0]], [0.0, s, -s * centroid[1]], [0.0, 0.0, 1.0]])


def _collinear(a, b, c, tol: float) -> bool:
    cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    scale = max(np.linalg.norm(b - a) * np.linalg.norm(c - a), 1e-300)
    return abs(cross) / scale < tol


def estimate_homography(correspondences: Sequence[tuple]) -> Homography:
    """Normalized direct linear transform from >= 4 (image, world) point pairs."""
    if len(correspondences) < 4:
        raise InsufficientDataError(f"need at least 4 correspondences, got {len(correspondences)}")
    img = np.array([tuple(c[0]) for c in correspondences], dtype=float)
    world = np.array([tuple(c[1]) for c in correspondences], dtype=float)
    if len(img) == 4:
        for a, b, c in itertools.combinations(range(4), 3):
            if _collinear(img[a], img[b], img[c], 1e-12) or _collinear(world[a], world[b], world[c], 1e-12):
                raise SingularSystemError("three of the four points are collinear")

    t_img = _normalizing_transform(img)
    t_world = _normalizing_transform(world)
    src = np.column_stack([img, np.ones(len(img))]) @ t_img.T
    dst = np.column_stack([world, np.ones(len(world))]) @ t_world.T

    rows = []
    for (x, y, _), (u, v, _) in zip(src, dst):
        rows.append([-x, -y, -1.0, 0.0, 0.0, 0.0, u * x, u * y, u])
        rows.append([0.0, 0.0, 0.0, -x, -y, -1.0, v * x, v * y, v])
    a = np.array(rows)
    _, sv, vt = np.linalg.svd(a)
    # A 1-D null space is required; a second near-zero singular value means degeneracy.
    if len(sv) >= 8 and sv[7] < 1e-10 * sv[0]:
        raise SingularSystemError("correspondences do not determine a unique homography")
    h_norm = vt[-1].reshape(3, 3)
    h = np.linalg.inv(t_world) @ h_norm @ t_img
    return Homography(h)


def parse_correspondences(source) -> list[tuple[Point2, Point2]]:
    text = _read_text(source)
    reader = csv.reader(io.StringIO(text))
    pairs = []
    header_seen = False
    for lineno, row in enumerate(reader, start=1):
        if not row or all(not c.strip() for c in row):
            continue
        if not header_seen:
            if tuple(c.strip() for c in row) != CORRESPONDENCE_HEADER:
                raise TrajectoryParseError(lineno, f"expected header {','.join(CORRESPONDENCE_HEADER)}")
            header_seen = True
            continue
        try:
            ix, iy, wx, wy = (float(c) for c in row)
        except ValueError as exc:
            raise TrajectoryParseError(lineno, str(exc)) from None
        pairs.append((Point2(ix, iy), Point2(wx, wy)))
    return pairs


def rectify(dataset: SceneDataset, h: Homography) -> SceneDataset:
    """Map an image-pixel dataset onto the ground plane (heads assumed at z=0)."""
    trajs = [Trajectory(t.person_id, t.frames.copy(), h.apply_many(t.positions)) for t in dataset.trajectories]
    return SceneDataset(trajs, frame_rate=dataset.frame_rate, units="world_meters", label=dataset.label)


# -- kinematics -------------------------------------------------------------


@dataclass
class Kinematics:
    person_id: int
    frames: np.ndarray
    positions: np.ndarray
    velocity: np.ndarray  # (n, 2) m/frame
    speed: np.ndarray  # m/frame
    alpha: np.ndarray  # unsigned degrees vs (1, 0), in [0, 180]
    heading: np.ndarray  # signed degrees in (-180, 180], 0 when still
    heading_change: np.ndarray  # signed wrapped degrees; 0 at the first sample or when still

    def __len__(self):
        return len(self.frames)


def wrap_degrees(d):
    """Wrap an angle difference into [-180, 180)."""
    return (np.asarray(d, dtype=float) + 180.0) % 360.0 - 180.0


def derive_kinematics(t: Trajectory) -> Kinematics:
    """Forward-difference velocity, speed, heading and alpha for every sample.

    Velocities are displacement per frame (frame rate plays no part); a gap of
    k frames divides by k.
    The last sample repeats the previous velocity.
    """
    n = len(t)
    if n < 2:
        raise InsufficientDataError(f"person {t.person_id}: need >= 2 samples, got {n}")
    dp = np.diff(t.positions, axis=0)
    df = np.diff(t.frames).astype(float)[:, None]
    vel = np.vstack([dp / df, dp[-1:] / df[-1:]])
    speed = np.sqrt(vel[:, 0] * vel[:, 0] + vel[:, 1] * vel[:, 1])
    moving = speed >= EPS_STILL
    heading = np.where(moving, np.degrees(np.arctan2(vel[:, 1], vel[:, 0])), 0.0)
    heading = np.where(heading == -180.0, 180.0, heading)
    alpha = np.abs(heading)
    change = np.zeros(n)
    both = moving[1:] & moving[:-1]
    change[1:] = np.where(both, wrap_degrees(heading[1:] - heading[:-1]), 0.0)
    return Kinematics(t.person_id, t.frames.copy(), t.positions.copy(), vel, speed, alpha, heading, change)


def dataset_kinematics(dataset: SceneDataset) -> dict[int, Kinematics]:
    """Kinematics for every trajectory with at least two samples."""
    return {t.person_id: derive_kinematics(t) for t in dataset.trajectories if len(t) >= 2}

