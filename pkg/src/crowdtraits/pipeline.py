"""End-to-end scene analysis: trajectories -> features -> groups -> OCEAN -> emotions."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from . import emotion as emo
from .analysis import ROI, PreferredDistance, VideoSummary, preferred_distance
from .emotion import EMOTIONS, EmotionVector
from .features import AveragedFeatures, FrameFeatures, FrameState, ProxemicsConfig, feature_vector, frame_states
from .groups import Group, GroupRuleConfig, detect_groups, video_groups
from .ocean import DIMENSIONS, OceanResult, PersonalityVector, group_ocean, person_ocean
from .trajectory_io import Homography, Kinematics, SceneDataset, TrajectoryError, dataset_kinematics, rectify


@dataclass(frozen=True)
class AnalysisConfig:
    proxemics: ProxemicsConfig = field(default_factory=ProxemicsConfig)
    group_rules: GroupRuleConfig = field(default_factory=GroupRuleConfig)
    ocean_mode: str = "normalized"
    emotion_mode: str = "discrete"
    roi: ROI | None = None
    group_min_fraction: float = 0.5
    front_cone_half_angle: float = 30.0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["roi"] = self.roi.to_dict() if self.roi is not None else None
        return d


@dataclass
class SceneAnalysis:
    dataset: SceneDataset
    config: AnalysisConfig
    kinematics: dict[int, Kinematics]
    states: list[FrameState]
    frame_features: list[FrameFeatures]
    averaged: dict[int, AveragedFeatures]
    frame_groups: dict[int, list[Group]]
    groups: list[Group]
    ocean: OceanResult
    group_personality: dict[int, PersonalityVector]
    person_emotion_raw: dict[int, EmotionVector]
    person_emotion: dict[int, EmotionVector]
    frame_emotion_raw: np.ndarray
    frame_emotion: np.ndarray
    group_emotion_raw: dict[int, EmotionVector]
    group_emotion: dict[int, EmotionVector]
    distance: PreferredDistance
    summary: VideoSummary
    skipped: list[int]


def analyze_scene(dataset: SceneDataset, config: AnalysisConfig = AnalysisConfig(),
                  homography: Homography | None = None) -> SceneAnalysis:
    if dataset.units == "image_pixels":
        if homography is None:
            raise TrajectoryError("image-pixel trajectories need a homography")
        dataset = rectify(dataset, homography)

    kin = dataset_kinematics(dataset)
    skipped = sorted(t.person_id for t in dataset.trajectories if t.person_id not in kin)
    keep = config.roi.contains if config.roi is not None else None
    states = frame_states(kin, keep)
    per_frame, averaged = feature_vector(states, kin, config.proxemics)

    frame_groups = {s.frame: detect_groups(s, config.group_rules) for s in states}
    groups = video_groups(states, config.group_rules, config.group_min_fraction, frame_groups)

    heading_change = {pid: dict(zip(k.frames.tolist(), k.heading_change.tolist())) for pid, k in kin.items()}
    ocean = person_ocean(per_frame, heading_change, config.ocean_mode)
    group_p = {g.group_id: group_ocean([ocean.per_person[m] for m in g.members]) for g in groups}

    pids = sorted(ocean.per_person)
    person_raw = {p: emo.map_emotions(ocean.per_person[p], config.emotion_mode) for p in pids}
    raw_matrix = np.array([person_raw[p].as_array() for p in pids]).reshape(-1, 4)
    person_norm = {}
    if pids:
        normed = emo.normalize_emotions(raw_matrix)
        person_norm = {p: EmotionVector.from_array(normed[k]) for k, p in enumerate(pids)}

    frame_raw = emo.map_emotions_array(ocean.per_frame, config.emotion_mode) if len(ocean.rows) else np.empty((0, 4))
    frame_norm = emo.normalize_emotions(frame_raw) if len(frame_raw) else np.empty((0, 4))

    group_raw = {g.group_id: emo.group_emotion([person_raw[m] for m in g.members]) for g in groups}
    group_norm = {}
    for gid, ev in group_raw.items():
        group_norm[gid] = EmotionVector.from_array(emo.normalize_emotions(ev.as_array(), raw_matrix)[0])

    distance = preferred_distance(states, config.front_cone_half_angle)
    summary = VideoSummary(
        label=dataset.label,
        ocean={d: float(np.mean([getattr(ocean.per_person[p], d) for p in pids])) if pids else float("nan")
               for d in DIMENSIONS},
        emotion={e: float(np.mean([getattr(person_norm[p], e) for p in pids])) if pids else float("nan")
                 for e in EMOTIONS},
        person_count=len(pids),
        frame_count=len(states),
        population=len(dataset),
    )
    return SceneAnalysis(
        dataset=dataset, config=config, kinematics=kin, states=states, frame_features=per_frame,
        averaged=averaged, frame_groups=frame_groups, groups=groups, ocean=ocean, group_personality=group_p,
        person_emotion_raw=person_raw, person_emotion=person_norm, frame_emotion_raw=frame_raw,
        frame_emotion=frame_norm, group_emotion_raw=group_raw, group_emotion=group_norm,
        distance=distance, summary=summary, skipped=skipped,
    )
