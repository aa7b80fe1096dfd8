import numpy as np

from crowdtraits.features import FrameState


def make_state(positions, speeds=None, headings=None, ids=None, frame=0):
    positions = np.asarray(positions, dtype=float).reshape(-1, 2)
    n = len(positions)
    speeds = np.zeros(n) if speeds is None else np.asarray(speeds, dtype=float)
    headings = np.zeros(n) if headings is None else np.asarray(headings, dtype=float)
    ids = np.arange(n) if ids is None else np.asarray(ids)
    return FrameState(frame, ids, positions, speeds, headings, np.abs(headings))
