"""Core clip/landmark data model and lossless frame I/O.

Frames are HxWx3 uint8 RGB arrays. Landmarks are 68x2 float arrays in
(x, y) pixel coordinates, origin at the top-left corner. A clip bundles
L frames with L landmark sets.
"""

import json
import os
from dataclasses import dataclass, field

import cv2
import numpy as np

from .errors import CountMismatch, DecodeError, DimensionMismatch, MissingFrames

# ITU-R BT.601 luma weights
GRAY_WEIGHTS = (0.299, 0.587, 0.114)

FRAME_EXTENSIONS = (".png", ".bmp", ".jpg", ".jpeg")


def validate_frame(frame):
    frame = np.asarray(frame)
    if frame.ndim != 3 or frame.shape[2] != 3 or frame.dtype != np.uint8:
        raise DimensionMismatch(f"expected HxWx3 uint8 frame, got {frame.shape} {frame.dtype}")
    return frame


def validate_landmarks(points, height=None, width=None):
    points = np.asarray(points, dtype=np.float64)
    if points.shape != (68, 2):
        raise DimensionMismatch(f"expected 68x2 landmarks, got {points.shape}")
    if not np.all(np.isfinite(points)):
        raise DimensionMismatch("landmarks contain non-finite coordinates")
    if height is not None and width is not None:
        inside = (
            (points[:, 0] > 0) & (points[:, 0] < width - 1)
            & (points[:, 1] > 0) & (points[:, 1] < height - 1)
        )
        if not inside.any():
            raise DimensionMismatch("no landmark lies strictly inside the frame")
    return points


@dataclass
class Clip:
    """An ordered stack of frames plus per-frame landmarks."""

    frames: np.ndarray  # (L, H, W, 3) uint8
    landmarks: np.ndarray  # (L, 68, 2) float64
    source_id: str = field(default="")

    def __post_init__(self):
        self.frames = np.asarray(self.frames)
        if self.frames.ndim != 4 or self.frames.shape[3] != 3 or self.frames.dtype != np.uint8:
            raise DimensionMismatch(
                f"expected (L,H,W,3) uint8 frames, got {self.frames.shape} {self.frames.dtype}"
            )
        if len(self.frames) < 1:
            raise DimensionMismatch("clip must contain at least one frame")
        self.landmarks = np.asarray(self.landmarks, dtype=np.float64)
        if self.landmarks.shape != (len(self.frames), 68, 2):
            raise CountMismatch(
                f"expected {(len(self.frames), 68, 2)} landmarks, got {self.landmarks.shape}"
            )
        h, w = self.height, self.width
        for lm in self.landmarks:
            validate_landmarks(lm, h, w)

    def __len__(self):
        return len(self.frames)

    @property
    def height(self):
        return self.frames.shape[1]

    @property
    def width(self):
        return self.frames.shape[2]


def rgb_to_gray(frame):
    """BT.601 weighted average, rounded half-up, as uint8 HxW."""
    frame = validate_frame(frame)
    r, g, b = GRAY_WEIGHTS
    gray = frame[..., 0] * r + frame[..., 1] * g + frame[..., 2] * b
    return np.floor(gray + 0.5).clip(0, 255).astype(np.uint8)


def _frame_files(frame_dir):
    names = sorted(
        n for n in os.listdir(frame_dir)
        if os.path.splitext(n)[1].lower() in FRAME_EXTENSIONS
    )
    return [os.path.join(frame_dir, n) for n in names]


def load_frames(frame_dir):
    """Decode all frames in a directory (lexicographic order) as one uint8 stack."""
    paths = _frame_files(frame_dir)
    if not paths:
        raise MissingFrames(f"no image files in {frame_dir}")
    frames = []
    for path in paths:
        img = cv2.imread(path, cv2.IMREAD_COLOR)
        if img is None:
            raise DecodeError(f"cannot decode {path}")
        frames.append(cv2.cvtColor(img, cv2.COLOR_BGR2RGB))
    h, w = frames[0].shape[:2]
    for path, f in zip(paths, frames):
        if f.shape[:2] != (h, w):
            raise DimensionMismatch(f"{path} has size {f.shape[:2]}, expected {(h, w)}")
    return np.stack(frames)


def load_landmark_file(landmark_file):
    """Read an Lx68x2 array-of-arrays JSON document."""
    with open(landmark_file) as fh:
        raw = json.load(fh)
    arr = np.asarray(raw, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[1:] != (68, 2):
        raise CountMismatch(f"expected Lx68x2 landmark array, got {arr.shape}")
    return arr


def load_clip(frame_dir, landmark_file, source_id=None):
    frames = load_frames(frame_dir)
    landmarks = load_landmark_file(landmark_file)
    if len(landmarks) != len(frames):
        raise CountMismatch(
            f"{len(frames)} frames but {len(landmarks)} landmark rows"
        )
    if source_id is None:
        source_id = os.path.basename(os.path.normpath(frame_dir))
    return Clip(frames=frames, landmarks=landmarks, source_id=source_id)


def save_landmark_file(landmarks, path):
    with open(path, "w") as fh:
        json.dump(np.asarray(landmarks, dtype=float).tolist(), fh)


def save_clip(clip, out_dir, trace_doc=None, trace_name="trace.json"):
    """Write frames as zero-padded PNGs; optionally a trace sidecar alongside."""
    os.makedirs(out_dir, exist_ok=True)
    for i, frame in enumerate(clip.frames):
        path = os.path.join(out_dir, f"{i:06d}.png")
        ok = cv2.imwrite(path, cv2.cvtColor(frame, cv2.COLOR_RGB2BGR))
        if not ok:
            raise OSError(f"failed to write {path}")
    if trace_doc is not None:
        with open(os.path.join(out_dir, trace_name), "w") as fh:
            fh.write(trace_doc)
