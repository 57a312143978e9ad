import numpy as np
import pytest

from pfakegen import editor, rpg
from pfakegen.filters import gaussian_kernel1d
from pfakegen.media import rgb_to_gray


def const_frame(value, shape=(8, 8)):
    return np.full(shape + (3,), value, dtype=np.uint8)


# ---------------------------------------------------------------------------
# photometric LUT ops


class TestBrightness:
    def test_identity(self, random_frame):
        assert (editor.adjust_brightness(random_frame, 1.0) == random_frame).all()

    def test_clamps_high(self):
        assert (editor.adjust_brightness(const_frame(200), 2.0) == 255).all()

    def test_half(self):
        # floor(101 * 0.5) = 50
        assert (editor.adjust_brightness(const_frame(101), 0.5) == 50).all()

    def test_lut_monotone(self):
        for theta in (0.3, 0.7, 1.0, 1.5, 2.5):
            lut = editor.brightness_lut(theta)
            assert (np.diff(lut.astype(int)) >= 0).all()


class TestContrast:
    def test_identity(self, random_frame):
        assert (editor.adjust_contrast(random_frame, 1.0) == random_frame).all()

    def test_constant_frame_fixed_point(self):
        frame = const_frame(113)
        for theta in (0.5, 1.7):
            assert (editor.adjust_contrast(frame, theta) == frame).all()

    def test_hand_value(self):
        # two-value frame: gray mean is exactly 100, T[110] = floor(220-100) = 120
        frame = np.zeros((1, 2, 3), dtype=np.uint8)
        frame[0, 0] = 90
        frame[0, 1] = 110
        out = editor.adjust_contrast(frame, 2.0)
        assert (out[0, 1] == 120).all()


class TestSaturation:
    def test_identity(self, random_frame):
        assert (editor.adjust_saturation(random_frame, 1.0) == random_frame).all()

    def test_gray_frame_fixed_point(self):
        frame = const_frame(90)
        out = editor.adjust_saturation(frame, 1.8)
        assert np.abs(out.astype(int) - 90).max() <= 1

    def test_full_desaturation(self, random_frame):
        out = editor.adjust_saturation(random_frame, 0.0)
        gray = rgb_to_gray(random_frame)
        for c in range(3):
            assert np.abs(out[..., c].astype(int) - gray.astype(int)).max() <= 1


def jitter_oracle(frame, theta_b, theta_t, theta_a):
    """Brute-force per-pixel evaluation of the three photometric formulas."""
    out = np.zeros_like(frame)
    h, w = frame.shape[:2]
    # brightness
    stage1 = np.zeros_like(frame)
    for i in range(h):
        for j in range(w):
            for c in range(3):
                stage1[i, j, c] = min(max(int(np.floor(frame[i, j, c] * theta_b)), 0), 255)
    # contrast
    gray = np.zeros((h, w))
    for i in range(h):
        for j in range(w):
            gray[i, j] = np.floor(0.299 * stage1[i, j, 0] + 0.587 * stage1[i, j, 1]
                                  + 0.114 * stage1[i, j, 2] + 0.5)
    mu = gray.mean()
    stage2 = np.zeros_like(frame)
    for i in range(h):
        for j in range(w):
            for c in range(3):
                v = int(np.floor(stage1[i, j, c] * theta_t + mu * (1 - theta_t)))
                stage2[i, j, c] = min(max(v, 0), 255)
    # saturation
    for i in range(h):
        for j in range(w):
            g = np.floor(0.299 * stage2[i, j, 0] + 0.587 * stage2[i, j, 1]
                         + 0.114 * stage2[i, j, 2] + 0.5)
            for c in range(3):
                v = int(np.floor(stage2[i, j, c] * theta_a + g * (1 - theta_a)))
                out[i, j, c] = min(max(v, 0), 255)
    return out


class TestColorJitter:
    def test_identity(self, random_frame):
        assert (editor.color_jitter(random_frame, 1.0, 1.0, 1.0) == random_frame).all()

    def test_brightness_only(self, random_frame):
        out = editor.color_jitter(random_frame, 0.8, 1.0, 1.0)
        assert (out == editor.adjust_brightness(random_frame, 0.8)).all()

    def test_matches_sequential_ops(self, random_frame):
        out = editor.color_jitter(random_frame, 1.2, 0.9, 1.1)
        chained = editor.adjust_saturation(
            editor.adjust_contrast(editor.adjust_brightness(random_frame, 1.2), 0.9), 1.1)
        assert (out == chained).all()

    def test_matches_brute_force(self):
        rng = np.random.default_rng(0)
        frame = rng.integers(0, 256, (4, 4, 3), dtype=np.uint8)
        for _ in range(10):
            tb, tt, ta = rng.uniform(0.7, 1.3, 3)
            got = editor.color_jitter(frame, tb, tt, ta)
            assert (got == jitter_oracle(frame, tb, tt, ta)).all()

    def test_pointwise_commutes_with_permutation(self, random_frame):
        rng = np.random.default_rng(1)
        flat = random_frame.reshape(-1, 3)
        perm = rng.permutation(len(flat))
        shuffled = flat[perm].reshape(random_frame.shape)
        a = editor.adjust_brightness(shuffled, 1.2).reshape(-1, 3)
        b = editor.adjust_brightness(random_frame, 1.2).reshape(-1, 3)[perm]
        assert (a == b).all()


# ---------------------------------------------------------------------------
# noise / sharpen / downsample


class TestIsoNoise:
    def test_zero_sigma_identity(self, random_frame):
        assert (editor.iso_noise(random_frame, 0.0, 1) == random_frame).all()

    def test_deterministic(self, random_frame):
        a = editor.iso_noise(random_frame, 5.0, 99)
        b = editor.iso_noise(random_frame, 5.0, 99)
        assert (a == b).all()

    def test_mid_gray_std(self):
        frame = const_frame(128, shape=(128, 128))
        out = editor.iso_noise(frame, 8.0, 7)
        std = (out.astype(float) - frame).std()
        assert 4.0 <= std <= 10.0


def checkerboard(size=64):
    yy, xx = np.mgrid[0:size, 0:size]
    board = ((yy + xx) % 2 * 255).astype(np.uint8)
    return np.repeat(board[..., None], 3, axis=2)


def laplacian_energy(frame):
    gray = rgb_to_gray(frame).astype(float)
    lap = (np.abs(np.diff(gray, axis=0, n=2)).mean()
           + np.abs(np.diff(gray, axis=1, n=2)).mean())
    return lap


class TestSharpenDownsample:
    def test_sharpen_zero_identity(self, random_frame):
        assert (editor.sharpen(random_frame, 0.0) == random_frame).all()

    def test_downsample_full_scale_identity(self, random_frame):
        out = editor.downsample_cycle(random_frame, 1.0)
        assert np.abs(out.astype(int) - random_frame).max() <= 1

    def test_downsample_removes_high_freq(self):
        board = checkerboard()
        out = editor.downsample_cycle(board, 0.5)
        assert laplacian_energy(out) < laplacian_energy(board)

    def test_shape_preserved(self, random_frame):
        for scale in (0.25, 0.4, 0.75):
            assert editor.downsample_cycle(random_frame, scale).shape == random_frame.shape


# ---------------------------------------------------------------------------
# geometric


class TestElastic:
    def test_zero_alpha_identity(self, random_frame):
        out = editor.elastic_transform(random_frame, 5.0, 0.0, 3)
        assert (out == random_frame).all()

    def test_pure_resampling(self, random_frame):
        out = editor.elastic_transform(random_frame, 4.0, 20.0, 5)
        assert set(np.unique(out)) <= set(np.unique(random_frame))

    @pytest.mark.parametrize("size,seed", [(4, 0), (8, 1)])
    def test_matches_brute_force(self, size, seed):
        ramp = (np.arange(size * size).reshape(size, size) % 256).astype(np.uint8)
        frame = np.repeat(ramp[..., None], 3, axis=2)
        gx, gy = editor.elastic_displacement((size, size), 3.0, 6.0, seed)
        got = editor.elastic_transform(frame, 3.0, 6.0, seed)
        for i in range(size):
            for j in range(size):
                for c in range(3):
                    assert got[i, j, c] == frame[gx[i, j], gy[i, j], c]

    def test_indices_in_bounds(self):
        gx, gy = editor.elastic_displacement((16, 24), 4.0, 50.0, 9)
        assert gx.min() >= 0 and gx.max() <= 15
        assert gy.min() >= 0 and gy.max() <= 23

    def test_works_on_gray(self):
        img = np.arange(64, dtype=np.float64).reshape(8, 8)
        out = editor.elastic_transform(img, 3.0, 5.0, 2)
        assert out.shape == img.shape and out.dtype == img.dtype


class TestDenseWarp:
    def test_zero_amp_identity(self, random_frame):
        assert (editor.dense_warp(random_frame, 0.0, 4) == random_frame).all()

    def test_deterministic(self, random_frame):
        a = editor.dense_warp(random_frame, 6.0, 11)
        b = editor.dense_warp(random_frame, 6.0, 11)
        assert (a == b).all()

    def test_max_displacement_bounded(self):
        # horizontal ramp: the pixel value reveals its source column
        w = 128
        ramp = np.tile(np.arange(w, dtype=np.uint8), (64, 1))
        frame = np.repeat(ramp[..., None], 3, axis=2)
        out = editor.dense_warp(frame, 8.0, 21)
        cols = np.tile(np.arange(w), (64, 1))
        displacement = np.abs(out[..., 0].astype(int) - cols)
        # ignore clamp effects at the borders
        assert displacement[:, 9:-9].max() <= 8


class TestTriangularStretch:
    def test_zero_jitter_identity(self, random_frame, fixture_landmarks):
        frame = np.asarray(random_frame)
        lm = fixture_landmarks * (frame.shape[0] / 96.0)
        out = editor.triangular_stretch(frame, lm, 0.0, 1)
        assert np.abs(out.astype(int) - frame).max() <= 1

    def test_corners_unchanged(self, fixture_clip):
        frame = fixture_clip.frames[0]
        out = editor.triangular_stretch(frame, fixture_clip.landmarks[0], 3.0, 5)
        h, w = frame.shape[:2]
        for i, j in ((0, 0), (0, w - 1), (h - 1, 0), (h - 1, w - 1)):
            assert (out[i, j] == frame[i, j]).all()

    def test_degenerate_landmarks_rejected(self, random_frame):
        collinear = np.stack([np.linspace(1, 40, 68), np.linspace(1, 40, 68)], axis=1)
        from pfakegen.errors import DegenerateTriangulation
        with pytest.raises(DegenerateTriangulation):
            editor.piecewise_affine(random_frame, collinear, collinear)

    def test_two_triangle_affine_oracle(self):
        # unit square split into two triangles; one vertex moved +2 px in x
        rng = np.random.default_rng(8)
        frame = rng.integers(0, 256, (32, 32, 3), dtype=np.uint8)
        src = np.array([[0, 0], [31, 0], [31, 31], [0, 31]], dtype=float)
        dst = src.copy()
        dst[2, 0] -= 2.0  # pull the bottom-right corner inward
        got = editor.piecewise_affine(frame, src, dst)

        from scipy.spatial import Delaunay
        tri = Delaunay(src)
        for i in range(2, 30):
            for j in range(2, 30):
                p = np.array([j, i], dtype=float)
                for simplex in tri.simplices:
                    d = dst[simplex]
                    # barycentric coords w.r.t. destination triangle
                    m = np.array([d[1] - d[0], d[2] - d[0]]).T
                    try:
                        uv = np.linalg.solve(m, p - d[0])
                    except np.linalg.LinAlgError:
                        continue
                    lam = np.array([1 - uv.sum(), uv[0], uv[1]])
                    if (lam > 0.08).all():  # strictly interior, away from edges
                        s = src[simplex]
                        q = s[0] + uv[0] * (s[1] - s[0]) + uv[1] * (s[2] - s[0])
                        x0, y0 = int(np.floor(q[0])), int(np.floor(q[1]))
                        fx, fy = q[0] - x0, q[1] - y0
                        x1, y1 = min(x0 + 1, 31), min(y0 + 1, 31)
                        expect = ((1 - fy) * ((1 - fx) * frame[y0, x0].astype(float)
                                              + fx * frame[y0, x1])
                                  + fy * ((1 - fx) * frame[y1, x0]
                                          + fx * frame[y1, x1]))
                        assert np.abs(got[i, j].astype(float) - expect).max() <= 1.0
                        break


# ---------------------------------------------------------------------------
# frequency


class TestFreqPerturb:
    def test_zero_noise_round_trip(self, random_frame):
        out = editor.freq_perturb(random_frame, 0.5, 1,
                                  noise=np.zeros(random_frame.shape[:2]))
        assert np.abs(out.astype(int) - random_frame).max() <= 1

    def test_deterministic(self, random_frame):
        a = editor.freq_perturb(random_frame, 1.0, 77)
        b = editor.freq_perturb(random_frame, 1.0, 77)
        assert (a == b).all()

    def test_dct_round_trip(self):
        rng = np.random.default_rng(0)
        x = rng.random((8, 8))
        assert np.abs(editor.idct2(editor.dct2(x)) - x).max() < 1e-9

    def test_dct_matches_direct_sum(self):
        rng = np.random.default_rng(1)
        x = rng.random((8, 8))
        got = editor.dct2(x)
        n, m = x.shape
        direct = np.zeros_like(got)
        for u in range(n):
            for v in range(m):
                au = np.sqrt(1.0 / n) if u == 0 else np.sqrt(2.0 / n)
                av = np.sqrt(1.0 / m) if v == 0 else np.sqrt(2.0 / m)
                acc = 0.0
                for i in range(n):
                    for j in range(m):
                        acc += (x[i, j]
                                * np.cos(np.pi * (2 * i + 1) * u / (2 * n))
                                * np.cos(np.pi * (2 * j + 1) * v / (2 * m)))
                direct[u, v] = au * av * acc
        assert np.abs(got - direct).max() < 1e-9


# ---------------------------------------------------------------------------
# composed editor


class TestEditFrame:
    def test_all_off_identity(self, random_frame, fixture_landmarks):
        p = rpg.identity_params().editor
        lm = fixture_landmarks * (random_frame.shape[0] / 96.0)
        assert (editor.edit_frame(random_frame, lm, p) == random_frame).all()

    def test_jitter_only(self, random_frame, fixture_landmarks):
        import dataclasses
        p = dataclasses.replace(rpg.identity_params().editor, theta_b=1.2)
        lm = fixture_landmarks * (random_frame.shape[0] / 96.0)
        out = editor.edit_frame(random_frame, lm, p)
        assert (out == editor.adjust_brightness(random_frame, 1.2)).all()

    def test_full_params_match_chained_ops(self, fixture_clip):
        frame = fixture_clip.frames[0]
        lm = fixture_clip.landmarks[0]
        p = rpg.Rpg(17)._draw_paramset(0).editor
        import dataclasses
        p = dataclasses.replace(
            p, use_iso_noise=True, use_sharpen=True, use_downsample=True,
            use_elastic=True, use_dense_warp=True, use_tri_stretch=True,
            use_freq_perturb=True)
        got = editor.edit_frame(frame, lm, p)
        step = editor.downsample_cycle(frame, p.down_scale)
        step = editor.color_jitter(step, p.theta_b, p.theta_t, p.theta_a)
        step = editor.iso_noise(step, p.iso_sigma, p.iso_seed)
        step = editor.sharpen(step, p.sharpen_amount)
        step = editor.elastic_transform(step, p.elastic.theta_sigma,
                                        p.elastic.theta_alpha, p.elastic.noise_seed)
        step = editor.dense_warp(step, p.dense_warp_amp, p.dense_warp_seed)
        step = editor.triangular_stretch(step, lm, p.tri_jitter, p.tri_seed)
        step = editor.freq_perturb(step, p.theta_f, p.freq_seed)
        assert (got == step).all()
        assert got.shape == frame.shape


def test_gaussian_kernel_normalized():
    for sigma in (0.8, 2.0, 6.5):
        assert abs(gaussian_kernel1d(sigma=sigma).sum() - 1.0) < 1e-12
    for k in (3, 5, 11):
        assert abs(gaussian_kernel1d(ksize=k).sum() - 1.0) < 1e-12


def test_gaussian_blur_preserves_constant():
    from pfakegen.filters import gaussian_blur
    img = np.full((20, 20), 7.0)
    out = gaussian_blur(img, sigma=3.0)
    assert np.abs(out - 7.0).max() < 1e-9
