import numpy as np
import pytest

from pfakegen.media import Clip


def make_landmarks(height, width):
    """A plausible 68-point face layout centered in the frame.

    Groups follow the iBUG convention: jaw 0-16, brows 17-26, nose 27-35,
    eyes 36-47, mouth 48-67.
    """
    cx, cy = width * 0.5, height * 0.52
    rx, ry = width * 0.30, height * 0.33
    pts = np.zeros((68, 2))
    # jaw: left ear -> chin -> right ear
    phi = np.linspace(0, np.pi, 17)
    pts[0:17, 0] = cx - rx * np.cos(phi)
    pts[0:17, 1] = cy + ry * np.sin(phi)
    # brows
    pts[17:22, 0] = np.linspace(cx - rx * 0.7, cx - rx * 0.15, 5)
    pts[17:22, 1] = cy - ry * 0.45
    pts[22:27, 0] = np.linspace(cx + rx * 0.15, cx + rx * 0.7, 5)
    pts[22:27, 1] = cy - ry * 0.45
    # nose bridge + base
    pts[27:31, 0] = cx
    pts[27:31, 1] = np.linspace(cy - ry * 0.3, cy + ry * 0.05, 4)
    pts[31:36, 0] = np.linspace(cx - rx * 0.18, cx + rx * 0.18, 5)
    pts[31:36, 1] = cy + ry * 0.15
    # eyes: hexagons
    ang = np.linspace(0, 2 * np.pi, 6, endpoint=False)
    for base, ex in ((36, cx - rx * 0.42), (42, cx + rx * 0.42)):
        pts[base:base + 6, 0] = ex + rx * 0.12 * np.cos(ang)
        pts[base:base + 6, 1] = cy - ry * 0.22 + ry * 0.06 * np.sin(ang)
    # mouth: outer 12 + inner 8
    my = cy + ry * 0.45
    ang12 = np.linspace(0, 2 * np.pi, 12, endpoint=False)
    pts[48:60, 0] = cx + rx * 0.32 * np.cos(ang12)
    pts[48:60, 1] = my + ry * 0.12 * np.sin(ang12)
    ang8 = np.linspace(0, 2 * np.pi, 8, endpoint=False)
    pts[60:68, 0] = cx + rx * 0.2 * np.cos(ang8)
    pts[60:68, 1] = my + ry * 0.07 * np.sin(ang8)
    return pts


def make_clip(length=32, height=96, width=96, seed=0, motion=0.7):
    """Smooth moving gradient plus a static blurred texture, mid-range values."""
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    texture = rng.normal(0, 12, (height, width, 3))
    # cheap blur of the texture so it is band-limited
    for _ in range(2):
        texture = (texture
                   + np.roll(texture, 1, axis=0) + np.roll(texture, -1, axis=0)
                   + np.roll(texture, 1, axis=1) + np.roll(texture, -1, axis=1)) / 5.0
    frames = np.empty((length, height, width, 3), dtype=np.uint8)
    for t in range(length):
        phase = 2 * np.pi * (xx + motion * t) / width
        base = 128 + 45 * np.sin(phase) * np.cos(2 * np.pi * yy / height)
        rgb = np.stack([base + 8, base, base - 8], axis=-1) + texture
        frames[t] = np.clip(rgb, 20, 235).astype(np.uint8)
    landmarks = np.tile(make_landmarks(height, width), (length, 1, 1))
    return Clip(frames=frames, landmarks=landmarks, source_id="fixture")


@pytest.fixture(scope="session")
def fixture_landmarks():
    return make_landmarks(96, 96)


@pytest.fixture(scope="session")
def fixture_clip():
    return make_clip()


@pytest.fixture(scope="session")
def small_clip():
    return make_clip(length=8, height=64, width=64, seed=3)


@pytest.fixture
def random_frame():
    rng = np.random.default_rng(42)
    return rng.integers(0, 256, (48, 48, 3), dtype=np.uint8)
