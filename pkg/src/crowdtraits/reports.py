"""JSON/CSV report builders and their schemas."""

from __future__ import annotations

import csv
import io
import json

import jsonschema

from .emotion import EMOTIONS
from .ocean import DIMENSIONS
from .pipeline import SceneAnalysis

SCHEMA_VERSION = "1.0"

FEATURE_COLUMNS = ("person_id", "frame", "speed", "alpha", "isolation", "socialization",
                   "collectivity", "collectivity_mean", "n_social")

_num = {"type": "number"}
_ocean = {"type": "object", "properties": {d: {"type": "number", "minimum": 0, "maximum": 1} for d in DIMENSIONS},
          "required": list(DIMENSIONS), "additionalProperties": False}
_emo_raw = {"type": "object", "properties": {e: _num for e in EMOTIONS}, "required": list(EMOTIONS),
            "additionalProperties": False}
_emo_norm = {"type": "object", "properties": {e: {"type": "number", "minimum": 0, "maximum": 1} for e in EMOTIONS},
             "required": list(EMOTIONS), "additionalProperties": False}
_members = {"type": "array", "items": {"type": "integer"}, "minItems": 2}
_group = {
    "type": "object",
    "properties": {"group_id": {"type": "integer"}, "n_g": {"type": "integer", "minimum": 2}, "members": _members,
                   "mean_speed": _num, "mean_alpha": _num, "mean_distance": _num, "n_frames": {"type": "integer"}},
    "required": ["group_id", "n_g", "members", "mean_speed", "mean_alpha", "mean_distance", "n_frames"],
}
_header = {"schema_version": {"const": SCHEMA_VERSION}, "label": {"type": "string"}, "config": {"type": "object"}}


def _schema(props: dict, required: list[str]) -> dict:
    return {"type": "object", "properties": {**_header, **props},
            "required": ["schema_version", "label", "config", *required]}


GROUPS_SCHEMA = _schema({
    "video_groups": {"type": "array", "items": _group},
    "frames": {"type": "array", "items": {"type": "object", "properties": {
        "frame": {"type": "integer"}, "groups": {"type": "array", "items": _members}},
        "required": ["frame", "groups"]}},
}, ["video_groups", "frames"])

OCEAN_SCHEMA = _schema({
    "mode": {"enum": ["normalized", "literal"]},
    "persons": {"type": "array", "items": {"type": "object", "properties": {
        "person_id": {"type": "integer"}, "ocean": _ocean,
        "frames": {"type": "array", "items": {"type": "object", "properties": {
            "frame": {"type": "integer"}, "ocean": _ocean}, "required": ["frame", "ocean"]}}},
        "required": ["person_id", "ocean", "frames"]}},
    "groups": {"type": "array", "items": {"type": "object", "properties": {
        "group_id": {"type": "integer"}, "members": _members, "ocean": _ocean},
        "required": ["group_id", "members", "ocean"]}},
}, ["mode", "persons", "groups"])

EMOTIONS_SCHEMA = _schema({
    "mode": {"enum": ["discrete", "weighted"]},
    "persons": {"type": "array", "items": {"type": "object", "properties": {
        "person_id": {"type": "integer"}, "raw": _emo_raw, "normalized": _emo_norm},
        "required": ["person_id", "raw", "normalized"]}},
    "groups": {"type": "array", "items": {"type": "object", "properties": {
        "group_id": {"type": "integer"}, "members": _members, "raw": _emo_raw, "normalized": _emo_norm},
        "required": ["group_id", "members", "raw", "normalized"]}},
    "frames": {"type": "array", "items": {"type": "object", "properties": {
        "person_id": {"type": "integer"}, "frame": {"type": "integer"}, "raw": _emo_raw, "normalized": _emo_norm},
        "required": ["person_id", "frame", "raw", "normalized"]}},
}, ["mode", "persons", "groups", "frames"])

SUMMARY_BODY = {
    "type": "object",
    "properties": {"label": {"type": "string"}, "ocean": _ocean, "emotion": _emo_norm,
                   "person_count": {"type": "integer", "minimum": 0}, "frame_count": {"type": "integer", "minimum": 0},
                   "population": {"type": ["integer", "null"]}},
    "required": ["label", "ocean", "emotion", "person_count", "frame_count"],
}

DISTANCE_SCHEMA = _schema({
    "cone_half_angle": _num,
    "video_mean": {"type": ["number", "null"]},
    "per_person": {"type": "array", "items": {"type": "object", "properties": {
        "person_id": {"type": "integer"}, "distance": _num}, "required": ["person_id", "distance"]}},
}, ["video_mean", "per_person"])

SUMMARY_SCHEMA = _schema({
    "summary": SUMMARY_BODY,
    "preferred_distance": {"type": ["number", "null"]},
    "skipped_persons": {"type": "array", "items": {"type": "integer"}},
}, ["summary", "preferred_distance", "skipped_persons"])

CORRELATION_SCHEMA = {
    "type": "object",
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "a": {"type": "string"}, "b": {"type": "string"},
        **{k: {"type": "object", "properties": {"r": {"type": ["number", "null"], "minimum": -1, "maximum": 1},
                                                "defined": {"type": "boolean"}}, "required": ["r", "defined"]}
           for k in ("ocean", "emotion")},
    },
    "required": ["schema_version", "a", "b", "ocean", "emotion"],
}


def _base(result: SceneAnalysis) -> dict:
    return {"schema_version": SCHEMA_VERSION, "label": result.dataset.label, "config": result.config.to_dict()}


def features_csv(result: SceneAnalysis) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(FEATURE_COLUMNS)
    for ff in sorted(result.frame_features, key=lambda r: (r.person_id, r.frame)):
        writer.writerow([ff.person_id, ff.frame] + [repr(float(getattr(ff, c))) for c in FEATURE_COLUMNS[2:-1]]
                        + [ff.n_social])
    return out.getvalue()


def groups_report(result: SceneAnalysis) -> dict:
    return {
        **_base(result),
        "video_groups": [g.to_dict() for g in result.groups],
        "frames": [{"frame": f, "groups": [list(g.members) for g in gs]}
                   for f, gs in sorted(result.frame_groups.items())],
    }


def ocean_report(result: SceneAnalysis) -> dict:
    oc = result.ocean
    frames_by_person: dict[int, list] = {}
    for k, (pid, frame) in enumerate(oc.rows):
        frames_by_person.setdefault(pid, []).append(
            {"frame": frame, "ocean": dict(zip(DIMENSIONS, (float(v) for v in oc.per_frame[k])))})
    return {
        **_base(result),
        "mode": result.config.ocean_mode,
        "persons": [{"person_id": pid, "ocean": p.to_dict(), "frames": frames_by_person[pid]}
                    for pid, p in sorted(oc.per_person.items())],
        "groups": [{"group_id": g.group_id, "members": list(g.members),
                    "ocean": result.group_personality[g.group_id].to_dict()} for g in result.groups],
    }


def emotions_report(result: SceneAnalysis) -> dict:
    frames = []
    for k, (pid, frame) in enumerate(result.ocean.rows):
        frames.append({
            "person_id": pid, "frame": frame,
            "raw": _emotion_dict(result.frame_emotion_raw[k]),
            "normalized": _emotion_dict(result.frame_emotion[k]),
        })
    return {
        **_base(result),
        "mode": result.config.emotion_mode,
        "persons": [{"person_id": pid, "raw": result.person_emotion_raw[pid].to_dict(),
                     "normalized": result.person_emotion[pid].to_dict()}
                    for pid in sorted(result.person_emotion_raw)],
        "groups": [{"group_id": g.group_id, "members": list(g.members),
                    "raw": result.group_emotion_raw[g.group_id].to_dict(),
                    "normalized": result.group_emotion[g.group_id].to_dict()} for g in result.groups],
        "frames": frames,
    }


def _emotion_dict(row) -> dict:
    return {e: (int(v) if float(v).is_integer() else float(v)) for e, v in zip(EMOTIONS, row)}


def distance_report(result: SceneAnalysis) -> dict:
    return {
        **_base(result),
        "cone_half_angle": result.config.front_cone_half_angle,
        "video_mean": result.distance.video_mean,
        "per_person": [{"person_id": p, "distance": d} for p, d in result.distance.per_person.items()],
    }


def summary_report(result: SceneAnalysis) -> dict:
    return {
        **_base(result),
        "summary": result.summary.to_dict(),
        "preferred_distance": result.distance.video_mean,
        "skipped_persons": result.skipped,
    }


def validate(report: dict, schema: dict) -> None:
    jsonschema.validate(report, schema)


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=False) + "\n"
