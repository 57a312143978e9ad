"""Landmark-driven mask construction, deformation, and softening.

Masks are HxW float arrays in [0, 1]. Construction is deterministic;
all randomness enters through MaskParams at finalize time.

68-point landmark layout (iBUG): jaw 0-16, brows 17-26, nose 27-35,
eyes 36-47, mouth 48-67.
"""

import cv2
import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .editor import elastic_transform
from .errors import DegenerateHull, EmptyMask, TooFewPoints
from .filters import gaussian_blur
from .media import validate_landmarks
from .rpg import MaskKind

JAW = slice(0, 17)
BROWS = slice(17, 27)
NOSE = slice(27, 36)
LEFT_EYE = slice(36, 42)
RIGHT_EYE = slice(42, 48)
EYES = slice(36, 48)
MOUTH = slice(48, 68)

FOREHEAD_FACTOR = 1.5
NARROW_FACTOR = 0.9
ORGAN_DILATION_PX = 4

_EDGE_EPS = 1e-9


def rasterize_polygon(points, height, width):
    """Binary mask of pixel centers covered by the closed polygon.

    Interior is decided by the even-odd rule; pixel centers lying exactly
    on an edge count as inside (so an axis-aligned square with integer
    corners (2,2)-(6,6) covers a 5x5 block). Points are (x, y).
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 3 or pts.shape[1] != 2:
        raise TooFewPoints(f"need >= 3 (x,y) points, got shape {pts.shape}")
    px = np.arange(width, dtype=np.float64)[None, :] * np.ones((height, 1))
    py = np.arange(height, dtype=np.float64)[:, None] * np.ones((1, width))
    inside = np.zeros((height, width), dtype=bool)
    on_edge = np.zeros((height, width), dtype=bool)
    n = len(pts)
    for k in range(n):
        x1, y1 = pts[k]
        x2, y2 = pts[(k + 1) % n]
        # even-odd ray crossing (ray toward +x)
        crosses = (y1 > py) != (y2 > py)
        if y1 != y2:
            x_at = (x2 - x1) * (py - y1) / (y2 - y1) + x1
            inside ^= crosses & (px < x_at)
        # boundary inclusion: distance from pixel center to the segment
        ex, ey = x2 - x1, y2 - y1
        seg_len2 = ex * ex + ey * ey
        if seg_len2 == 0:
            continue
        t = ((px - x1) * ex + (py - y1) * ey) / seg_len2
        t = np.clip(t, 0.0, 1.0)
        d2 = (px - (x1 + t * ex)) ** 2 + (py - (y1 + t * ey)) ** 2
        on_edge |= d2 <= _EDGE_EPS
    return (inside | on_edge).astype(np.float64)


def _hull_polygon(points):
    points = np.asarray(points, dtype=np.float64)
    try:
        hull = ConvexHull(points)
    except QhullError as exc:
        raise DegenerateHull(str(exc)) from exc
    return points[hull.vertices]


def _dilate(mask, radius):
    k = 2 * radius + 1
    kernel = cv2.getStructuringElement(cv2.MORPH_ELLIPSE, (k, k))
    return cv2.dilate(mask.astype(np.uint8), kernel).astype(np.float64)


def _whole_face(points, height, width):
    return rasterize_polygon(_hull_polygon(points), height, width)


def _narrowed_face(points, height, width):
    poly = _hull_polygon(points)
    center = poly.mean(axis=0)
    return rasterize_polygon(center + (poly - center) * NARROW_FACTOR, height, width)


def _forehead_points(points):
    brows = points[BROWS]
    brow_y = brows[:, 1].mean()
    eye_y = points[EYES][:, 1].mean()
    rise = FOREHEAD_FACTOR * abs(eye_y - brow_y)
    return brows - np.array([0.0, rise])


def build_mask(landmarks, kind, height, width):
    """Construct the binary mask for one of the six mask families."""
    points = validate_landmarks(landmarks)
    if kind == MaskKind.WHOLE_FACE:
        mask = _whole_face(points, height, width)
    elif kind == MaskKind.NARROWED_FACE:
        mask = _narrowed_face(points, height, width)
    elif kind == MaskKind.FACE_WITH_FOREHEAD:
        extended = np.vstack([points, _forehead_points(points)])
        mask = rasterize_polygon(_hull_polygon(extended), height, width)
    elif kind == MaskKind.FACE_BOUNDARY:
        mask = np.clip(_whole_face(points, height, width)
                       - _narrowed_face(points, height, width), 0.0, 1.0)
    elif kind == MaskKind.MOUTH_REGION:
        mouth = rasterize_polygon(_hull_polygon(points[MOUTH]), height, width)
        mask = _dilate(mouth, ORGAN_DILATION_PX)
    elif kind == MaskKind.FACIAL_ORGANS:
        mask = np.zeros((height, width), dtype=np.float64)
        for part in (LEFT_EYE, RIGHT_EYE, NOSE, MOUTH):
            region = rasterize_polygon(_hull_polygon(points[part]), height, width)
            mask = np.maximum(mask, _dilate(region, ORGAN_DILATION_PX))
    else:
        raise ValueError(f"unknown mask kind: {kind}")
    if not mask.any():
        raise EmptyMask(f"{kind.value} mask is empty for the given landmarks")
    return mask


def finalize_mask(mask, params):
    """Elastic-deform then Gaussian-soften a binary mask into a soft matte."""
    mask = np.asarray(mask, dtype=np.float64)
    deform = params.deform
    if deform.theta_alpha > 0:
        mask = elastic_transform(mask, deform.theta_sigma, deform.theta_alpha,
                                 deform.noise_seed)
    return np.clip(gaussian_blur(mask, ksize=params.theta_k), 0.0, 1.0)
