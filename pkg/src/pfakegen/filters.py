"""Shared separable Gaussian blur with edge replication."""

import math

import numpy as np
from scipy.ndimage import convolve1d


def gaussian_kernel1d(sigma=None, ksize=None):
    """Normalized 1-D Gaussian taps.

    Either sigma (radius = ceil(3*sigma)) or an odd ksize may be given.
    When only ksize is given, sigma follows the usual imaging heuristic
    0.3*((ksize-1)*0.5 - 1) + 0.8.
    """
    if ksize is None:
        if sigma is None or sigma <= 0:
            raise ValueError("need sigma > 0 or an odd ksize")
        radius = int(math.ceil(3.0 * sigma))
    else:
        if ksize < 1 or ksize % 2 == 0:
            raise ValueError(f"ksize must be odd and positive, got {ksize}")
        radius = ksize // 2
        if sigma is None:
            sigma = 0.3 * ((ksize - 1) * 0.5 - 1) + 0.8
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return k / k.sum()


def gaussian_blur(image, sigma=None, ksize=None):
    """Separable Gaussian blur, replicated borders, float64 output.

    Works on 2-D arrays and on HxWxC stacks (each channel independently).
    """
    k = gaussian_kernel1d(sigma=sigma, ksize=ksize)
    out = np.asarray(image, dtype=np.float64)
    out = convolve1d(out, k, axis=0, mode="nearest")
    out = convolve1d(out, k, axis=1, mode="nearest")
    return out


def blur_uint8(frame, sigma=None, ksize=None):
    """Gaussian blur of an 8-bit image, rounded back to uint8."""
    out = gaussian_blur(frame, sigma=sigma, ksize=ksize)
    return np.floor(out + 0.5).clip(0, 255).astype(np.uint8)
