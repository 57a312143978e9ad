"""Spatial/temporal regularity diagnostics for real vs. generated clips."""

import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import ColumnOutOfRange, DimensionMismatch
from .filters import gaussian_blur
from .media import rgb_to_gray

REPORT_SCHEMA = "pfake-report/1"


def noise_residual(frame):
    """High-pass residual: gray minus its 5-tap Gaussian blur (float HxW)."""
    gray = rgb_to_gray(frame).astype(np.float64)
    return gray - gaussian_blur(gray, ksize=5)


def temporal_slice(clip, column):
    """HxL image whose t-th column is frame t's pixel column (RGB)."""
    if not 0 <= column < clip.width:
        raise ColumnOutOfRange(f"column {column} outside [0, {clip.width})")
    return np.stack([f[:, column] for f in clip.frames], axis=1)


def _slice_gray(clip, column):
    return np.stack(
        [rgb_to_gray(f)[:, column].astype(np.float64) for f in clip.frames], axis=1
    )


def sample_columns(width, count):
    return np.unique(np.linspace(0, width - 1, count).round().astype(int))


def temporal_slice_energy(clip, columns=8):
    """Mean absolute column-to-column gradient over evenly spaced slices."""
    if len(clip) < 2:
        return 0.0
    energies = []
    for col in sample_columns(clip.width, columns):
        s = _slice_gray(clip, col)
        energies.append(np.abs(np.diff(s, axis=1)).mean())
    return float(np.mean(energies))


def per_frame_delta(clip, mask=None):
    """L-1 mean absolute differences between successive frames."""
    frames = clip.frames.astype(np.float64)
    deltas = []
    for t in range(len(clip) - 1):
        diff = np.abs(frames[t + 1] - frames[t])
        if mask is not None:
            sel = np.asarray(mask) > 0
            diff = diff[sel]
        deltas.append(float(diff.mean()))
    return deltas


@dataclass
class RegularityReport:
    noise_residual_stats: dict
    temporal_slice_energy: float
    per_frame_delta: list

    def to_dict(self):
        d = dataclasses.asdict(self)
        d["schema"] = REPORT_SCHEMA
        return d


def _residual_stats(clip, mask=None):
    residuals = np.stack([noise_residual(f) for f in clip.frames])
    if mask is not None:
        residuals = residuals[:, np.asarray(mask) > 0]
    highfreq = float((residuals ** 2).mean())
    return {
        "mean": float(residuals.mean()),
        "std": float(residuals.std()),
        "highfreq_energy": highfreq,
    }


def report_for(clip, mask_hint=None, columns=8):
    stats = {"overall": _residual_stats(clip)}
    if mask_hint is not None:
        stats["masked"] = _residual_stats(clip, mask_hint)
    return RegularityReport(
        noise_residual_stats=stats,
        temporal_slice_energy=temporal_slice_energy(clip, columns),
        per_frame_delta=per_frame_delta(clip, mask_hint),
    )


def compare(real, candidate, mask_hint=None, columns=8):
    """Reports for both clips plus signed candidate-minus-real deltas."""
    if real.frames.shape != candidate.frames.shape:
        raise DimensionMismatch(
            f"{real.frames.shape} vs {candidate.frames.shape}")
    rep_real = report_for(real, mask_hint, columns)
    rep_cand = report_for(candidate, mask_hint, columns)
    deltas = {
        "temporal_slice_energy": rep_cand.temporal_slice_energy - rep_real.temporal_slice_energy,
        "residual_std": (rep_cand.noise_residual_stats["overall"]["std"]
                         - rep_real.noise_residual_stats["overall"]["std"]),
        "mean_per_frame_delta": (float(np.mean(rep_cand.per_frame_delta))
                                 - float(np.mean(rep_real.per_frame_delta))
                                 if rep_real.per_frame_delta else 0.0),
    }
    return rep_real, rep_cand, deltas
