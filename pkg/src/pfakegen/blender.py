"""Compositing of real and edited frames under a soft matte."""

import numpy as np

from .errors import DimensionMismatch
from .filters import blur_uint8
from .media import validate_frame
from .rpg import BlendMethod, SoftenSide


def soften_side(real, edited, side):
    """Optionally blur one side of the pair before compositing (k=3)."""
    real = validate_frame(real)
    edited = validate_frame(edited)
    if real.shape != edited.shape:
        raise DimensionMismatch(f"{real.shape} vs {edited.shape}")
    if side == SoftenSide.BACKGROUND:
        return blur_uint8(real, ksize=3), edited
    if side == SoftenSide.FOREGROUND:
        return real, blur_uint8(edited, ksize=3)
    return real, edited


def effective_matte(mask, params):
    mask = np.asarray(mask, dtype=np.float64)
    if params.method == BlendMethod.ALPHA:
        return mask
    if params.method == BlendMethod.SCALED_ALPHA:
        return mask * params.alpha_scale
    if params.method == BlendMethod.HARD:
        return (mask >= 0.5).astype(np.float64)
    raise ValueError(f"unknown blend method: {params.method}")


def blend(real, edited, mask, params):
    """out = real*(1-m) + edited*m, rounded half-up.

    Computed as real + (edited-real)*m so identical inputs reproduce
    themselves bit-exactly for any matte.
    """
    real = validate_frame(real)
    edited = validate_frame(edited)
    mask = np.asarray(mask, dtype=np.float64)
    if real.shape != edited.shape or mask.shape != real.shape[:2]:
        raise DimensionMismatch(
            f"real {real.shape}, edited {edited.shape}, mask {mask.shape}"
        )
    m = effective_matte(mask, params)[..., None]
    out = real + (edited.astype(np.float64) - real) * m
    return np.floor(out + 0.5).clip(0, 255).astype(np.uint8)
