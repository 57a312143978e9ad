"""In-process bindings for ML training pipelines.

Exposes on-the-fly pseudo-fake generation on plain numpy arrays, with
output numerically identical to the command-line path for the same
inputs and seed. Arrays are handed over without copies where layout
allows; one contiguous copy is made otherwise.
"""

import numpy as np

from pfakegen import Clip, generate_pfake, serialize_trace
from pfakegen.pipeline import PFAKE_LABEL, REAL_LABEL

__version__ = "0.1.0"

__all__ = ["bound_generate", "bound_label", "__version__"]


def _check_frames(frames):
    frames = np.ascontiguousarray(frames)
    if frames.ndim != 4 or frames.shape[3] != 3 or frames.dtype != np.uint8:
        raise ValueError(
            f"frames must be an (L, H, W, 3) uint8 array, got shape "
            f"{frames.shape} dtype {frames.dtype}")
    return frames


def _check_landmarks(landmarks, length):
    landmarks = np.ascontiguousarray(landmarks, dtype=np.float64)
    if landmarks.shape != (length, 68, 2):
        raise ValueError(
            f"landmarks must be an ({length}, 68, 2) float array, got shape "
            f"{landmarks.shape}")
    return landmarks


def bound_generate(frames, landmarks, seed, config=None):
    """Generate a pseudo-fake clip from in-memory arrays.

    Returns (pfake_frames, trace_document); pfake_frames is an
    (L, H, W, 3) uint8 array and trace_document the serialized
    parameter trace enabling exact replay.
    """
    frames = _check_frames(frames)
    landmarks = _check_landmarks(landmarks, len(frames))
    clip = Clip(frames=frames, landmarks=landmarks, source_id="bound")
    pfake, params = generate_pfake(clip, seed, config=config)
    return pfake.frames, serialize_trace(params, seed=int(seed))


def bound_label():
    """The (real, pseudo-fake) class label convention: real=0, p-fake=1.

    Stable across versions; training code may rely on it.
    """
    return (REAL_LABEL, PFAKE_LABEL)
