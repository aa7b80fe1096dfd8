"""OCEAN -> OCC emotion mapping (fear, happiness, sadness, anger)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ocean import DIMENSIONS, PersonalityVector

EMOTIONS = ("fear", "happiness", "sadness", "anger")
EMOTION_MODES = ("discrete", "weighted")
SIGN_THRESHOLD = 0.5

# (factor, sign) -> contribution to (fear, happiness, sadness, anger)
EMOTION_TABLE: dict[tuple[str, str], tuple[int, int, int, int]] = {
    ("O", "+"): (0, 0, 0, -1),
    ("O", "-"): (0, 0, 0, 1),
    ("C", "+"): (-1, 0, 0, 0),
    ("C", "-"): (1, 0, 0, 0),
    ("E", "+"): (-1, 1, -1, -1),
    ("E", "-"): (1, 0, 0, 0),
    ("A", "+"): (0, 0, 0, -1),
    ("A", "-"): (0, 0, 0, 1),
    ("N", "+"): (1, -1, 1, 1),
    ("N", "-"): (-1, 1, -1, -1),
}


@dataclass(frozen=True)
class EmotionVector:
    fear: float
    happiness: float
    sadness: float
    anger: float

    def as_array(self) -> np.ndarray:
        return np.array([self.fear, self.happiness, self.sadness, self.anger], dtype=float)

    def to_dict(self) -> dict:
        return {e: getattr(self, e) for e in EMOTIONS}

    @classmethod
    def from_array(cls, values) -> "EmotionVector":
        vals = [float(v) for v in values]
        return cls(*(int(v) if v.is_integer() else v for v in vals))


def factor_sign(value: float) -> str:
    return "+" if value >= SIGN_THRESHOLD else "-"


def map_emotions(p: PersonalityVector, mode: str = "discrete") -> EmotionVector:
    """Sum each factor's signed contribution.

    In ``weighted`` mode each contribution is scaled by 2|factor - 0.5|, so a
    trait sitting on the threshold contributes nothing.
    """
    if mode not in EMOTION_MODES:
        raise ValueError(f"unknown emotion mode {mode!r}")
    total = np.zeros(4)
    for dim in DIMENSIONS:
        value = getattr(p, dim)
        contrib = np.array(EMOTION_TABLE[(dim, factor_sign(value))], dtype=float)
        if mode == "weighted":
            contrib = contrib * 2.0 * abs(value - SIGN_THRESHOLD)
        total += contrib
    if mode == "discrete":
        return EmotionVector(*(int(v) for v in total))
    return EmotionVector.from_array(total)


def map_emotions_array(ocean: np.ndarray, mode: str = "discrete") -> np.ndarray:
    ocean = np.atleast_2d(ocean)
    return np.array([map_emotions(PersonalityVector.from_array(row), mode).as_array() for row in ocean]).reshape(-1, 4)


def normalize_emotions(raw: np.ndarray, reference: np.ndarray | None = None) -> np.ndarray:
    """Per-emotion min-max over the video; a constant emotion maps to 0.5.

    ``reference`` supplies the rows defining the min/max (defaults to ``raw``),
    so group means can be scaled alongside individuals.
    """
    raw = np.atleast_2d(np.asarray(raw, dtype=float))
    ref = raw if reference is None else np.atleast_2d(np.asarray(reference, dtype=float))
    lo = ref.min(axis=0)
    span = ref.max(axis=0) - lo
    out = np.full_like(raw, 0.5)
    ok = span > 0
    out[:, ok] = (raw[:, ok] - lo[ok]) / span[ok]
    return np.clip(out, 0.0, 1.0)


def group_emotion(member_vectors: list[EmotionVector]) -> EmotionVector:
    if not member_vectors:
        raise ValueError("group has no members")
    return EmotionVector.from_array(np.mean([v.as_array() for v in member_vectors], axis=0))
