"""Frame editing operators: photometric, geometric, and frequency-domain.

All operators preserve frame dimensions and the 8-bit range, and every
randomized operator is a pure function of its seed.
"""

import cv2
import numpy as np
from scipy import fft as sfft
from scipy.spatial import Delaunay
from scipy.spatial import QhullError

from .errors import DegenerateTriangulation
from .filters import gaussian_blur
from .media import rgb_to_gray, validate_frame, validate_landmarks


def _to_uint8(values):
    return np.floor(values + 0.5).clip(0, 255).astype(np.uint8)


# ---------------------------------------------------------------------------
# photometric


def brightness_lut(theta_b):
    table = np.floor(np.arange(256, dtype=np.float64) * theta_b)
    return table.clip(0, 255).astype(np.uint8)


def contrast_lut(theta_t, mean_gray):
    table = np.floor(np.arange(256, dtype=np.float64) * theta_t
                     + mean_gray * (1.0 - theta_t))
    return table.clip(0, 255).astype(np.uint8)


def adjust_brightness(frame, theta_b):
    frame = validate_frame(frame)
    return brightness_lut(theta_b)[frame]


def adjust_contrast(frame, theta_t):
    frame = validate_frame(frame)
    mu = float(rgb_to_gray(frame).mean())
    return contrast_lut(theta_t, mu)[frame]


def adjust_saturation(frame, theta_a):
    frame = validate_frame(frame)
    gray = rgb_to_gray(frame).astype(np.float64)[..., None]
    out = np.floor(frame * theta_a + gray * (1.0 - theta_a))
    return out.clip(0, 255).astype(np.uint8)


def color_jitter(frame, theta_b, theta_t, theta_a):
    """Brightness, then contrast, then saturation (fixed order)."""
    out = adjust_brightness(frame, theta_b)
    out = adjust_contrast(out, theta_t)
    return adjust_saturation(out, theta_a)


def iso_noise(frame, sigma, seed):
    """Additive Gaussian noise whose std scales with local luminance."""
    frame = validate_frame(frame)
    if sigma <= 0:
        return frame.copy()
    rng = np.random.default_rng(seed)
    lum = 0.5 + rgb_to_gray(frame).astype(np.float64) / 255.0 * 0.5
    noise = rng.standard_normal(frame.shape) * (sigma * lum)[..., None]
    return _to_uint8(frame.astype(np.float64) + noise)


def sharpen(frame, amount):
    """Unsharp mask against a 5-tap Gaussian blur."""
    frame = validate_frame(frame)
    if amount <= 0:
        return frame.copy()
    blurred = gaussian_blur(frame, ksize=5)
    return _to_uint8(frame + amount * (frame - blurred))


def downsample_cycle(frame, scale):
    """Bilinear shrink then bilinear restore to the original size."""
    frame = validate_frame(frame)
    if not 0.0 < scale <= 1.0:
        raise ValueError(f"scale must be in (0, 1], got {scale}")
    h, w = frame.shape[:2]
    h2 = max(1, int(round(h * scale)))
    w2 = max(1, int(round(w * scale)))
    small = cv2.resize(frame, (w2, h2), interpolation=cv2.INTER_LINEAR)
    return cv2.resize(small, (w, h), interpolation=cv2.INTER_LINEAR)


# ---------------------------------------------------------------------------
# geometric


def elastic_displacement(shape, theta_sigma, theta_alpha, seed):
    """Clamped integer source-index grids (rows, cols) for the elastic warp.

    The per-axis perturbation is uniform noise on (-1, 1), Gaussian-blurred
    with theta_sigma and scaled by theta_alpha; source indices are
    floor(grid + perturbation), clamped into bounds.
    """
    h, w = shape
    rng = np.random.default_rng(seed)
    delta_x = rng.uniform(-1.0, 1.0, (h, w))
    delta_y = rng.uniform(-1.0, 1.0, (h, w))
    rows = np.arange(h, dtype=np.float64)[:, None] * np.ones((1, w))
    cols = np.ones((h, 1)) * np.arange(w, dtype=np.float64)[None, :]
    if theta_alpha > 0:
        rows = rows + gaussian_blur(delta_x, sigma=theta_sigma) * theta_alpha
        cols = cols + gaussian_blur(delta_y, sigma=theta_sigma) * theta_alpha
    gx = np.clip(np.floor(rows), 0, h - 1).astype(np.intp)
    gy = np.clip(np.floor(cols), 0, w - 1).astype(np.intp)
    return gx, gy


def elastic_transform(image, theta_sigma, theta_alpha, seed):
    """Per-pixel random displacement; nearest-lower-integer resampling.

    Accepts an RGB frame or a 2-D scalar image; the output has the same
    dtype and shape and contains only values present in the input.
    """
    image = np.asarray(image)
    gx, gy = elastic_displacement(image.shape[:2], theta_sigma, theta_alpha, seed)
    return image[gx, gy]


def dense_warp(frame, amp, seed):
    """Coarse 4x4 random displacement grid, bilinearly upsampled and applied."""
    frame = validate_frame(frame)
    if amp <= 0:
        return frame.copy()
    h, w = frame.shape[:2]
    rng = np.random.default_rng(seed)
    ctrl = rng.uniform(-amp, amp, (4, 4, 2))
    dx = cv2.resize(ctrl[..., 0], (w, h), interpolation=cv2.INTER_LINEAR)
    dy = cv2.resize(ctrl[..., 1], (w, h), interpolation=cv2.INTER_LINEAR)
    rows, cols = np.mgrid[0:h, 0:w].astype(np.float64)
    map_x = np.clip(cols + dy, 0, w - 1).astype(np.float32)
    map_y = np.clip(rows + dx, 0, h - 1).astype(np.float32)
    return cv2.remap(frame, map_x, map_y, interpolation=cv2.INTER_LINEAR)


def _border_anchors(height, width):
    h, w = height - 1, width - 1
    return np.array([
        [0, 0], [w, 0], [w, h], [0, h],
        [w / 2.0, 0], [w, h / 2.0], [w / 2.0, h], [0, h / 2.0],
    ], dtype=np.float64)


def piecewise_affine(frame, src_points, dst_points):
    """Warp each Delaunay source triangle onto its destination triangle.

    Pixels not covered by any destination triangle pass through unchanged;
    sampling is bilinear with clamped coordinates.
    """
    frame = validate_frame(frame)
    src = np.asarray(src_points, dtype=np.float64)
    dst = np.asarray(dst_points, dtype=np.float64)
    h, w = frame.shape[:2]
    try:
        tri = Delaunay(src)
    except QhullError as exc:
        raise DegenerateTriangulation(str(exc)) from exc

    # index map of the covering (destination) triangle per pixel
    tri_idx = np.full((h, w), -1, dtype=np.int32)
    affines = np.zeros((len(tri.simplices), 2, 3), dtype=np.float64)
    for i, simplex in enumerate(tri.simplices):
        d = dst[simplex].astype(np.float32)
        s = src[simplex].astype(np.float32)
        affines[i] = cv2.getAffineTransform(d, s)
        cv2.fillConvexPoly(tri_idx, np.round(d).astype(np.int32), int(i))

    rows, cols = np.mgrid[0:h, 0:w].astype(np.float64)
    covered = tri_idx >= 0
    a = affines[tri_idx.clip(min=0)]
    src_x = a[..., 0, 0] * cols + a[..., 0, 1] * rows + a[..., 0, 2]
    src_y = a[..., 1, 0] * cols + a[..., 1, 1] * rows + a[..., 1, 2]
    map_x = np.where(covered, src_x, cols).clip(0, w - 1).astype(np.float32)
    map_y = np.where(covered, src_y, rows).clip(0, h - 1).astype(np.float32)
    return cv2.remap(frame, map_x, map_y, interpolation=cv2.INTER_LINEAR)


def triangular_stretch(frame, landmarks, jitter, seed):
    """Delaunay piecewise-affine warp with per-landmark jitter.

    The 8 border anchors are never jittered.
    """
    frame = validate_frame(frame)
    points = validate_landmarks(landmarks)
    h, w = frame.shape[:2]
    src = np.vstack([points, _border_anchors(h, w)])
    rng = np.random.default_rng(seed)
    dst = src.copy()
    dst[:68] += rng.uniform(-jitter, jitter, (68, 2))
    dst[:, 0] = dst[:, 0].clip(0, w - 1)
    dst[:, 1] = dst[:, 1].clip(0, h - 1)
    return piecewise_affine(frame, src, dst)


# ---------------------------------------------------------------------------
# frequency


def dct2(channel):
    """Orthonormal 2-D type-II DCT."""
    return sfft.dctn(np.asarray(channel, dtype=np.float64), type=2, norm="ortho")


def idct2(coeffs):
    """Exact inverse of dct2."""
    return sfft.idctn(np.asarray(coeffs, dtype=np.float64), type=2, norm="ortho")


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def freq_perturb(frame, theta_f, seed, noise=None):
    """Additive bounded perturbation of the full-frame DCT coefficients.

    Each channel is transformed independently; noise ~ N(0, 1+theta_f) is
    drawn per coefficient and squashed through 2*sigmoid(n)-1, so the
    perturbation of any coefficient stays inside (-1, 1). `noise` may be
    supplied explicitly to pin the perturbation (e.g. all-zero noise turns
    the op into a DCT round-trip).
    """
    frame = validate_frame(frame)
    rng = np.random.default_rng(seed)
    out = np.empty_like(frame)
    for c in range(3):
        coeffs = dct2(frame[..., c].astype(np.float64) / 255.0)
        n = rng.normal(0.0, 1.0 + theta_f, coeffs.shape) if noise is None else noise
        coeffs = coeffs + 2.0 * _sigmoid(n) - 1.0
        out[..., c] = _to_uint8(idct2(coeffs) * 255.0)
    return out


# ---------------------------------------------------------------------------
# composition

EDIT_ORDER = (
    "downsample", "color_jitter", "iso_noise", "sharpen",
    "elastic", "dense_warp", "tri_stretch", "freq_perturb",
)


def edit_frame(frame, landmarks, params):
    """Apply the enabled edits in the fixed pipeline order."""
    out = validate_frame(frame)
    if params.use_downsample:
        out = downsample_cycle(out, params.down_scale)
    out = color_jitter(out, params.theta_b, params.theta_t, params.theta_a)
    if params.use_iso_noise:
        out = iso_noise(out, params.iso_sigma, params.iso_seed)
    if params.use_sharpen:
        out = sharpen(out, params.sharpen_amount)
    if params.use_elastic:
        out = elastic_transform(out, params.elastic.theta_sigma,
                                params.elastic.theta_alpha,
                                params.elastic.noise_seed)
    if params.use_dense_warp:
        out = dense_warp(out, params.dense_warp_amp, params.dense_warp_seed)
    if params.use_tri_stretch:
        out = triangular_stretch(out, landmarks, params.tri_jitter, params.tri_seed)
    if params.use_freq_perturb:
        out = freq_perturb(out, params.theta_f, params.freq_seed)
    return out
