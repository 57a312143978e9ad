"""Reference forward pass of the spatio-temporal enhancement block.

Dense numpy math on small (C, L, H, W) tensors: a per-channel 3-tap
temporal convolution, then per timestep a 7x7 patch squeeze (channel
reduction r=8), multi-head self-attention over the patch tokens, a
pointwise channel-restoring convolution, and a sigmoid gate interpolated
back to full resolution. Forward only; no training.
"""

from dataclasses import dataclass

import cv2
import numpy as np

from .errors import ShapeMismatch, TooSmall

PATCH = 7
REDUCTION = 8
BCE_EPS = 1e-7


@dataclass
class SteWeights:
    temporal_kernels: np.ndarray  # (C, 3)
    patch_weight: np.ndarray      # (C/r, C, 7, 7)
    patch_bias: np.ndarray        # (C/r,)
    wq: np.ndarray                # (d, d) with d = C/r
    wk: np.ndarray
    wv: np.ndarray
    wo: np.ndarray
    point_weight: np.ndarray      # (C, C/r)
    point_bias: np.ndarray        # (C,)
    heads: int


def _pick_heads(dim, wanted):
    heads = wanted
    while heads > 1 and dim % heads != 0:
        heads -= 1
    return heads


def make_ste_weights(channels, reduction=REDUCTION, heads=4, seed=0):
    """Deterministic pseudo-random weights for testing the forward pass."""
    if channels % reduction != 0:
        raise ShapeMismatch(f"reduction {reduction} must divide channels {channels}")
    d = channels // reduction
    rng = np.random.default_rng(seed)
    scale = 1.0 / np.sqrt(d)
    return SteWeights(
        temporal_kernels=rng.normal(0, 0.5, (channels, 3)),
        patch_weight=rng.normal(0, 1.0 / (PATCH * np.sqrt(channels)),
                                (d, channels, PATCH, PATCH)),
        patch_bias=rng.normal(0, 0.1, d),
        wq=rng.normal(0, scale, (d, d)),
        wk=rng.normal(0, scale, (d, d)),
        wv=rng.normal(0, scale, (d, d)),
        wo=rng.normal(0, scale, (d, d)),
        point_weight=rng.normal(0, scale, (channels, d)),
        point_bias=rng.normal(0, 0.1, channels),
        heads=_pick_heads(d, heads),
    )


def identity_temporal_kernels(channels):
    k = np.zeros((channels, 3))
    k[:, 1] = 1.0
    return k


def temporal_conv(f, kernels):
    """F_hat[c,t] = sum_i K[c,i] * F[c,t+i-1], zero-padded in time."""
    f = np.asarray(f, dtype=np.float64)
    if f.ndim != 4:
        raise ShapeMismatch(f"expected (C,L,H,W), got {f.shape}")
    kernels = np.asarray(kernels, dtype=np.float64)
    if kernels.shape != (f.shape[0], 3):
        raise ShapeMismatch(f"expected {(f.shape[0], 3)} kernels, got {kernels.shape}")
    padded = np.pad(f, ((0, 0), (1, 1), (0, 0), (0, 0)))
    out = np.zeros_like(f)
    for i in range(3):
        out += kernels[:, i, None, None, None] * padded[:, i:i + f.shape[1]]
    return out


def patch_squeeze(ft, weights):
    """Non-overlapping 7x7 patch convolution, C -> C/r; returns (p, C/r)."""
    ft = np.asarray(ft, dtype=np.float64)
    c, h, w = ft.shape
    if h < PATCH or w < PATCH:
        raise TooSmall(f"spatial dims {h}x{w} smaller than {PATCH}")
    gh, gw = h // PATCH, w // PATCH
    trimmed = ft[:, :gh * PATCH, :gw * PATCH]
    patches = trimmed.reshape(c, gh, PATCH, gw, PATCH)
    # (gh, gw, c, 7, 7) -> tokens (p, C/r)
    patches = patches.transpose(1, 3, 0, 2, 4).reshape(gh * gw, c, PATCH, PATCH)
    tokens = np.einsum("pcij,dcij->pd", patches, weights.patch_weight)
    return tokens + weights.patch_bias


def _softmax(x, axis=-1):
    x = x - x.max(axis=axis, keepdims=True)
    e = np.exp(x)
    return e / e.sum(axis=axis, keepdims=True)


def attention_rows(tokens, weights):
    """The (heads, p, p) softmax attention matrices for a token set."""
    p, d = tokens.shape
    h = weights.heads
    dh = d // h
    q = (tokens @ weights.wq).reshape(p, h, dh).transpose(1, 0, 2)
    k = (tokens @ weights.wk).reshape(p, h, dh).transpose(1, 0, 2)
    return _softmax(q @ k.transpose(0, 2, 1) / np.sqrt(dh), axis=-1)


def self_att(tokens, weights):
    """Multi-head scaled-dot-product self-attention over patch tokens."""
    tokens = np.asarray(tokens, dtype=np.float64)
    if tokens.ndim != 2 or tokens.shape[1] != weights.wq.shape[0]:
        raise ShapeMismatch(f"expected (p, {weights.wq.shape[0]}) tokens, got {tokens.shape}")
    p, d = tokens.shape
    h = weights.heads
    dh = d // h
    att = attention_rows(tokens, weights)
    v = (tokens @ weights.wv).reshape(p, h, dh).transpose(1, 0, 2)
    mixed = (att @ v).transpose(1, 0, 2).reshape(p, d)
    return mixed @ weights.wo


def point_conv(tokens, weights):
    """1x1 convolution restoring the full channel dimension: (p, C/r) -> (p, C)."""
    return tokens @ weights.point_weight.T + weights.point_bias


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def spatial_gate(ft, weights):
    """Per-timestep sigmoid gate at full resolution (C, H, W)."""
    c, h, w = ft.shape
    gh, gw = h // PATCH, w // PATCH
    tokens = patch_squeeze(ft, weights)
    tokens = self_att(tokens, weights)
    logits = point_conv(tokens, weights)  # (p, C)
    grid = logits.T.reshape(c, gh, gw)
    full = np.empty((c, h, w))
    for ch in range(c):
        full[ch] = cv2.resize(grid[ch], (w, h), interpolation=cv2.INTER_LINEAR)
    return _sigmoid(full)


def ste_forward(f, weights):
    """Temporal convolution followed by attention-derived spatial gating."""
    fhat = temporal_conv(f, weights.temporal_kernels)
    out = np.empty_like(fhat)
    for t in range(fhat.shape[1]):
        out[:, t] = fhat[:, t] * spatial_gate(fhat[:, t], weights)
    return out


def bce_loss(y_pred, y_gt):
    """Binary cross-entropy with endpoint clamping."""
    p = min(max(float(y_pred), BCE_EPS), 1.0 - BCE_EPS)
    y = float(y_gt)
    return -y * np.log(p) - (1.0 - y) * np.log(1.0 - p)
