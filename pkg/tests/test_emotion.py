import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from crowdtraits.emotion import (
    EMOTION_TABLE,
    EmotionVector,
    factor_sign,
    group_emotion,
    map_emotions,
    normalize_emotions,
)
from crowdtraits.ocean import PersonalityVector

unit = st.floats(0, 1)


def test_table_has_forty_entries():
    assert len(EMOTION_TABLE) * 4 == 40
    assert all(v in (-1, 0, 1) for row in EMOTION_TABLE.values() for v in row)


def test_factor_sign():
    assert factor_sign(0.5) == "+"
    assert factor_sign(0.49) == "-"
    assert factor_sign(1.0) == "+"


def test_high_extraversion_contributions():
    lo = map_emotions(PersonalityVector(0.1, 0.1, 0.1, 0.1, 0.1))
    hi = map_emotions(PersonalityVector(0.1, 0.1, 0.9, 0.1, 0.1))
    assert hi.happiness - lo.happiness == 1
    assert hi.anger - lo.anger == -1


def test_mapping_examples():
    assert map_emotions(PersonalityVector(0.9, 0.9, 0.9, 0.9, 0.1)) == EmotionVector(-3, 2, -2, -4)
    assert map_emotions(PersonalityVector(0.5, 0.5, 0.5, 0.5, 0.5)) == EmotionVector(-1, 0, 0, -2)


def test_raw_sums_are_integers_within_ranges():
    seen = np.array([map_emotions(PersonalityVector(*[0.9 if b else 0.1 for b in bits])).as_array()
                     for bits in itertools.product([0, 1], repeat=5)])
    assert np.all(seen == np.round(seen))
    # tight ranges: happiness cannot reach -2 and sadness cannot reach +2
    assert seen.min(axis=0).tolist() == [-3, -1, -2, -4]
    assert seen.max(axis=0).tolist() == [3, 2, 1, 3]


@given(unit, unit, unit, unit)
def test_raising_neuroticism_across_threshold(o, c, e, a):
    lo = map_emotions(PersonalityVector(o, c, e, a, 0.2))
    hi = map_emotions(PersonalityVector(o, c, e, a, 0.8))
    assert hi.fear >= lo.fear and hi.sadness >= lo.sadness and hi.anger >= lo.anger
    assert hi.happiness <= lo.happiness


def test_weighted_mode():
    mid = map_emotions(PersonalityVector(0.5, 0.5, 0.5, 0.5, 0.5), "weighted")
    assert mid.as_array().tolist() == [0, 0, 0, 0]
    ext = map_emotions(PersonalityVector(1, 1, 1, 1, 0), "weighted")
    assert ext == map_emotions(PersonalityVector(1, 1, 1, 1, 0))
    with pytest.raises(ValueError):
        map_emotions(PersonalityVector(1, 1, 1, 1, 0), "fuzzy")


def test_normalize_examples():
    out = normalize_emotions(np.array([[-3, 0, 0, 0], [0, 0, 0, 0], [3, 0, 0, 0]]))
    assert out[:, 0].tolist() == [0.0, 0.5, 1.0]
    assert np.all(out[:, 1:] == 0.5)
    assert normalize_emotions(np.array([[-1, 0, 0, 0], [1, 0, 0, 0]]))[:, 0].tolist() == [0.0, 1.0]


def test_normalize_against_reference():
    ref = np.array([[-2, 0, 0, 0], [2, 0, 0, 0]])
    assert normalize_emotions(np.array([0, 0, 0, 0]), ref)[0, 0] == 0.5


def test_group_emotion():
    a = EmotionVector(0, 0, 0, -1)
    b = EmotionVector(0, 0, 0, -3)
    assert group_emotion([a, b]).anger == -2
    assert group_emotion([a, a]) == a
    assert group_emotion([EmotionVector(0, 0, 0, -1), EmotionVector(0, 0, 0, 1)]).anger == 0


def test_sociable_calm_anger_is_never_positive():
    # E+ and N- give -2; O- and A- can each add +1, so anger reaches exactly 0
    for o, c, a in itertools.product((0.2, 0.8), repeat=3):
        anger = map_emotions(PersonalityVector(o, c, 0.7, a, 0.3)).anger
        assert anger == (0 if (o < 0.5 and a < 0.5) else (-2 if (o < 0.5) != (a < 0.5) else -4))
