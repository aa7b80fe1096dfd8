import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from crowdtraits.features import feature_vector, frame_states
from crowdtraits.ocean import (
    DIMENSION_ITEMS,
    DIMENSIONS,
    INVERTED_ITEMS,
    RECIPROCAL_EPS,
    MissingPersonError,
    PersonalityVector,
    aggregate_dimensions,
    answer_items,
    cumulative_std,
    group_ocean,
    invert_items,
    normalize_items,
    person_ocean,
)
from crowdtraits.synth import ScenarioSpec, generate
from crowdtraits.trajectory_io import SceneDataset, Trajectory, dataset_kinematics


def _ocean_for(ds, mode="normalized"):
    kin = dataset_kinematics(ds)
    rows, _ = feature_vector(frame_states(kin), kin)
    hc = {p: dict(zip(k.frames.tolist(), k.heading_change.tolist())) for p, k in kin.items()}
    return person_ocean(rows, hc, mode)


def test_items_partition_all_25():
    used = sorted(k for d in DIMENSIONS for k in DIMENSION_ITEMS[d])
    assert used == list(range(1, 26))
    assert [len(DIMENSION_ITEMS[d]) for d in DIMENSIONS] == [1, 1, 18, 2, 3]
    assert INVERTED_ITEMS == {2, 4, 5, 6, 7, 8, 11, 15, 24, 25}


def test_lone_walker_items():
    q = answer_items(speed=0.04, alpha=0.0, isolation=1.0, socialization=0.0, collectivity=0.0, std_alpha=0.0)[0]
    assert np.all(q[15:21] == 0.0)
    assert np.all(q[2:8] == 1.0)
    assert q[0] == pytest.approx(0.04 + 1 / RECIPROCAL_EPS)


def test_q15_is_reciprocal_of_q14():
    q = answer_items([0.1, 0.5], [12.0, 90.0], [0.3, 1.0], [0.2, 0.0], [1.4, 0.0], [3.0, 0.0])
    assert np.allclose(q[:, 14] * (q[:, 13] + RECIPROCAL_EPS), 1.0, rtol=1e-14)


def test_lockstep_partner_items():
    q = answer_items(speed=0.04, alpha=0.0, isolation=1 / 3.6, socialization=0.5, collectivity=1.0, std_alpha=0.0)[0]
    assert np.all(q[21:25] == 1.5)
    assert np.all(q[15:21] == 0.5)
    assert np.all(q[8:10] == 1.0)


def test_normalize_items_examples():
    assert normalize_items(np.array([0.0, 1.0, 2.0]))[:, 0].tolist() == [0.0, 2.0, 4.0]
    assert normalize_items(np.array([7.0, 7.0, 7.0]))[:, 0].tolist() == [2.0, 2.0, 2.0]
    assert normalize_items(np.array([1.0, 3.0]))[:, 0].tolist() == [0.0, 4.0]


def test_invert_examples():
    q = np.full(25, 4.0)
    inv = invert_items(q)
    assert inv[1] == 0.0 and inv[0] == 4.0
    assert invert_items(np.full(25, 2.0))[1] == 2.0
    assert invert_items(np.zeros(25))[1] == 4.0


@given(arrays(float, (3, 25), elements=st.floats(0, 4)))
def test_invert_is_involution(q):
    assert np.allclose(invert_items(invert_items(q)), q, atol=1e-12, rtol=0)


def test_aggregate_extremes():
    assert np.all(aggregate_dimensions(np.full((1, 25), 4.0)) == 1.0)
    assert np.all(aggregate_dimensions(np.zeros((1, 25))) == 0.0)


def test_e_items_at_midpoint():
    q = np.zeros((1, 25))
    q[0, [k - 1 for k in DIMENSION_ITEMS["E"]]] = 2.0
    assert aggregate_dimensions(q)[0, 2] == 0.5


@settings(max_examples=50, deadline=None)
@given(arrays(float, (6, 25), elements=st.floats(0, 4)), st.sampled_from(["normalized", "literal"]))
def test_dimensions_in_unit_interval(q, mode):
    out = aggregate_dimensions(q, mode)
    assert np.all((out >= 0) & (out <= 1))


def test_literal_mode_constant_rows():
    out = aggregate_dimensions(np.full((3, 25), 1.0), "literal")
    assert np.all(out == 0.5)


def test_unknown_mode():
    with pytest.raises(ValueError):
        aggregate_dimensions(np.zeros((1, 25)), "bogus")


def test_cumulative_std():
    assert cumulative_std([]).size == 0
    got = cumulative_std([1.0, 3.0, 5.0, 5.0])
    want = [np.std([1.0][:k]) if k else 0 for k in range(1)] + [np.std([1, 3, 5, 5][:k]) for k in range(2, 5)]
    assert np.allclose(got, want, atol=1e-12)


def test_constant_scene_frame_vectors_equal_average():
    ds = generate(ScenarioSpec(kind="lockstep_pair", spacing=1.0, frames=8))
    res = _ocean_for(ds)
    for pid, p in res.per_person.items():
        for _, pf in res.person_frames(pid):
            assert np.allclose(pf.as_array(), p.as_array(), atol=1e-12)


def test_identical_walkers_identical_vectors():
    ds = generate(ScenarioSpec(kind="lockstep_pair", spacing=1.0, frames=8))
    res = _ocean_for(ds)
    assert res.per_person[0] == res.per_person[1]


def test_permutation_invariance():
    ds = generate(ScenarioSpec(kind="cluster", n=4, spacing=0.8, wanderers=3, frames=30, seed=5))
    relabel = {t.person_id: 100 - t.person_id for t in ds.trajectories}
    ds2 = SceneDataset([Trajectory(relabel[t.person_id], t.frames, t.positions) for t in reversed(ds.trajectories)])
    a, b = _ocean_for(ds), _ocean_for(ds2)
    for pid, p in a.per_person.items():
        assert np.allclose(p.as_array(), b.per_person[relabel[pid]].as_array(), atol=1e-12)


def test_missing_person():
    res = _ocean_for(generate(ScenarioSpec(kind="lone_walker", n=1, frames=4)))
    with pytest.raises(MissingPersonError):
        res.person_frames(99)


def test_group_ocean_mean():
    a = PersonalityVector(0.2, 0.5, 0.5, 0.5, 0.5)
    b = PersonalityVector(0.6, 0.5, 0.5, 0.5, 0.5)
    assert group_ocean([a, b]).O == pytest.approx(0.4)
    assert group_ocean([a, a]) == a
    with pytest.raises(ValueError):
        group_ocean([])


def test_cluster_members_more_extraverted_than_wanderers():
    ds = generate(ScenarioSpec(kind="cluster", n=4, spacing=0.8, wanderers=4, frames=60, seed=1))
    res = _ocean_for(ds)
    cluster = [res.per_person[p].E for p in range(4)]
    lone = [res.per_person[p].E for p in range(4, 8)]
    assert min(cluster) > max(lone)


def test_rounding_noise_is_treated_as_constant():
    raw = np.array([[0.04], [0.04 + 1e-17], [0.04 - 2e-17]])
    assert normalize_items(raw)[:, 0].tolist() == [2.0, 2.0, 2.0]
