import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from crowdtraits.analysis import (ROI, UndefinedCorrelationError, VideoSummary, correlate_summaries, country_mean,
                                  density_long_rows, density_series, front_neighbor, load_reference, long_format_csv,
                                  pearson, preferred_distance, roi_filter)
from crowdtraits.emotion import EMOTIONS
from crowdtraits.ocean import DIMENSIONS
from crowdtraits.trajectory_io import SceneDataset, Trajectory

from .helpers import make_state


def summary(label, ocean, emotion, n=None):
    return VideoSummary(label, dict(zip(DIMENSIONS, ocean)), dict(zip(EMOTIONS, emotion)), 3, 10, n)


def test_country_mean_is_unweighted():
    a = summary("a", [0.2, 0.4, 0.6, 0.8, 1.0], [0.0, 0.5, 1.0, 0.25])
    b = summary("b", [0.4, 0.4, 0.2, 0.0, 0.0], [1.0, 0.5, 0.0, 0.75])
    m = country_mean([a, b], "BR")
    assert m.label == "BR"
    assert [m.ocean[d] for d in DIMENSIONS] == pytest.approx([0.3, 0.4, 0.4, 0.4, 0.5], abs=1e-15)
    assert [m.emotion[e] for e in EMOTIONS] == [0.5, 0.5, 0.5, 0.5]
    assert m.person_count == 6


def test_country_mean_single_and_empty():
    a = summary("a", [0.1, 0.2, 0.3, 0.4, 0.5], [0.1, 0.2, 0.3, 0.4])
    assert country_mean([a]).ocean == a.ocean
    with pytest.raises(ValueError):
        country_mean([])


def test_pearson_known_value():
    # exact: 5 / sqrt(76/3)
    assert pearson([1, 2, 3], [2, 4, 7]) == pytest.approx(0.9933992677987828, abs=1e-12)


def test_pearson_extremes_and_undefined():
    x = [0.3, 1.7, 2.2, 5.0]
    assert pearson(x, x) == pytest.approx(1.0, abs=1e-12)
    assert pearson(x, [-v for v in x]) == pytest.approx(-1.0, abs=1e-12)
    with pytest.raises(UndefinedCorrelationError):
        pearson(x, [2.0] * 4)
    with pytest.raises(ValueError):
        pearson([1.0], [2.0])
    with pytest.raises(ValueError):
        pearson([1.0, 2.0], [1.0, 2.0, 3.0])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_pearson_matches_scipy_and_is_symmetric(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 30))
    x, y = rng.normal(size=n), rng.normal(size=n)
    r = pearson(x, y)
    assert r == pytest.approx(stats.pearsonr(x, y)[0], abs=1e-12)
    assert r == pytest.approx(pearson(y, x), abs=1e-15)
    assert -1.0 <= r <= 1.0
    a, b = rng.uniform(0.5, 3.0), rng.normal()
    assert pearson(a * x + b, y) == pytest.approx(r, abs=1e-9)
    assert pearson(-a * x + b, y) == pytest.approx(-r, abs=1e-9)


def test_correlate_summaries_flags_undefined_emotions():
    a = summary("a", [0.2, 0.4, 0.6, 0.8, 1.0], [0.5, 0.5, 0.5, 0.5])
    b = summary("b", [0.1, 0.3, 0.5, 0.9, 0.7], [0.0, 1.0, 0.2, 0.4])
    out = correlate_summaries(a, b)
    assert out["ocean"]["defined"] and -1 <= out["ocean"]["r"] <= 1
    assert out["emotion"] == {"r": None, "defined": False}
    assert correlate_summaries(b, b)["emotion"]["r"] == pytest.approx(1.0, abs=1e-12)


def test_summary_dict_roundtrip():
    a = summary("a", [0.2, 0.4, 0.6, 0.8, 1.0], [0.0, 0.5, 1.0, 0.25], n=15)
    assert VideoSummary.from_dict(a.to_dict()) == a


def scene():
    t0 = Trajectory(0, np.arange(4), np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]]))
    t1 = Trajectory(1, np.arange(3), np.array([[10.0, 10.0], [11.0, 10.0], [12.0, 10.0]]))
    return SceneDataset([t0, t1], frame_rate=25.0, label="s")


def test_roi_filter_keeps_boundary_and_drops_empty():
    roi = ROI(1.0, -0.5, 1.0, 1.0)
    out = roi_filter(scene(), roi)
    assert [t.person_id for t in out.trajectories] == [0]
    assert out.trajectories[0].frames.tolist() == [1, 2]


def test_roi_filter_identity_and_idempotent():
    ds = scene()
    everything = ROI(-100.0, -100.0, 200.0, 200.0)
    same = roi_filter(ds, everything)
    assert [t.frames.tolist() for t in same.trajectories] == [t.frames.tolist() for t in ds.trajectories]
    roi = ROI(0.5, -1.0, 2.0, 2.0)
    once = roi_filter(ds, roi)
    twice = roi_filter(once, roi)
    assert [t.frames.tolist() for t in once.trajectories] == [t.frames.tolist() for t in twice.trajectories]
    assert len(roi_filter(ds, ROI(50.0, 50.0, 1.0, 1.0))) == 0


def test_roi_rejects_degenerate():
    with pytest.raises(ValueError):
        ROI(0, 0, 0, 1)


def test_single_file_queue_distance():
    state = make_state([[0.0, 0.0], [1.15, 0.0], [2.3, 0.0]], speeds=[0.04] * 3)
    pd = preferred_distance([state])
    # last walker has nobody ahead and is left out
    assert pd.per_person == {0: pytest.approx(1.15, abs=1e-15), 1: pytest.approx(1.15, abs=1e-15)}
    assert pd.video_mean == pytest.approx(1.15, abs=1e-15)


def test_side_by_side_has_no_front_neighbor():
    state = make_state([[0.0, 0.0], [0.0, 0.8]], speeds=[0.04] * 2)
    assert preferred_distance([state]).video_mean is None


def test_cone_edge_and_still_agent():
    # neighbor at exactly 30 degrees off heading is inside, 31 is outside
    for ang, inside in ((30.0, True), (31.0, False)):
        p = [math.cos(math.radians(ang)), math.sin(math.radians(ang))]
        state = make_state([[0.0, 0.0], p], speeds=[0.04, 0.04])
        assert (front_neighbor(0, state) is not None) is inside
    still = make_state([[0.0, 0.0], [1.0, 0.0]], speeds=[0.0, 0.04])
    assert front_neighbor(0, still) is None


def test_ring_of_walkers():
    # regular 12-gon with side 2, everyone walking counterclockwise along the ring
    n, side = 12, 2.0
    radius = side / (2 * math.sin(math.pi / n))
    ang = 2 * math.pi * np.arange(n) / n
    pos = radius * np.column_stack([np.cos(ang), np.sin(ang)])
    heading = np.degrees(ang) + 90.0
    state = make_state(pos, speeds=[0.04] * n, headings=heading)
    assert preferred_distance([state]).video_mean == pytest.approx(side, abs=1e-12)


def test_density_series_sorted_by_population():
    rows = density_series([
        summary("c", [0.5] * 5, [0.5] * 4, n=34),
        summary("a", [0.1] * 5, [0.2] * 4, n=15),
        summary("b", [0.3] * 5, [0.4] * 4, n=25),
    ])
    assert [r["population"] for r in rows] == [15, 25, 34]
    assert [r["N"] for r in rows] == [0.1, 0.3, 0.5]
    assert [r["label"] for r in rows] == ["a", "b", "c"]
    assert rows[0]["E"] == 0.1 and rows[0]["anger"] == 0.2
    assert len(density_series([summary("x", [0.5] * 5, [0.5] * 4, n=3)])) == 1


def test_long_format_csv():
    rows = density_long_rows(density_series([summary("a", [0.1] * 5, [0.2] * 4, n=15)]))
    assert len(rows) == 9
    text = long_format_csv(rows)
    lines = text.splitlines()
    assert lines[0] == "series,label,x,y"
    assert lines[1] == "O,a,15.0,0.1"
    assert lines[-1] == "anger,a,15.0,0.2"


def test_reference_tables_are_bundled():
    ref = load_reference("ocean")
    assert isinstance(ref, dict) and ref
    assert load_reference("personal_space")
    assert set(ref["countries"]) == {"Brazil", "Germany"}
