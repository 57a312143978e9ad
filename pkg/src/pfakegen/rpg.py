"""Random parameter generation for the pseudo-fake pipeline.

Every clip gets its own seeded generator. Frames are partitioned into
contiguous segments (length uniform on {1..8} by default); all frames in
a segment share one identical parameter set, so temporal changes happen
only at segment boundaries. Parameter draws for a segment come from a
counter-based stream keyed by (seed, segment index), so the draw order
of other segments can never perturb a segment's values.
"""

import dataclasses
import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ParseError

TRACE_SCHEMA = "pfake-trace/1"

MAX_SEED = 2**63


class MaskKind(Enum):
    WHOLE_FACE = "whole_face"
    NARROWED_FACE = "narrowed_face"
    FACE_WITH_FOREHEAD = "face_with_forehead"
    FACE_BOUNDARY = "face_boundary"
    MOUTH_REGION = "mouth_region"
    FACIAL_ORGANS = "facial_organs"


FACE_GROUP = (MaskKind.WHOLE_FACE, MaskKind.NARROWED_FACE, MaskKind.FACE_WITH_FOREHEAD)
PART_GROUP = (MaskKind.FACE_BOUNDARY, MaskKind.MOUTH_REGION, MaskKind.FACIAL_ORGANS)


class SoftenSide(Enum):
    NONE = "none"
    FOREGROUND = "foreground"
    BACKGROUND = "background"


class BlendMethod(Enum):
    ALPHA = "alpha"
    SCALED_ALPHA = "scaled_alpha"
    HARD = "hard"


@dataclass(frozen=True)
class ElasticParams:
    theta_sigma: float
    theta_alpha: float
    noise_seed: int


@dataclass(frozen=True)
class EditorParams:
    theta_b: float
    theta_t: float
    theta_a: float
    use_iso_noise: bool
    use_sharpen: bool
    use_downsample: bool
    use_elastic: bool
    use_dense_warp: bool
    use_tri_stretch: bool
    use_freq_perturb: bool
    iso_sigma: float
    iso_seed: int
    sharpen_amount: float
    down_scale: float
    elastic: ElasticParams
    dense_warp_amp: float
    dense_warp_seed: int
    tri_jitter: float
    tri_seed: int
    theta_f: float
    freq_seed: int


@dataclass(frozen=True)
class MaskParams:
    mask_kind: MaskKind
    deform: ElasticParams
    theta_k: int
    soften_side: SoftenSide


@dataclass(frozen=True)
class BlendParams:
    method: BlendMethod
    alpha_scale: float


@dataclass(frozen=True)
class ParamSet:
    editor: EditorParams
    mask: MaskParams
    blend: BlendParams
    segment_id: int


@dataclass(frozen=True)
class RpgConfig:
    """Sampling ranges; every range is overridable from a config document."""

    theta_b: tuple = (0.7, 1.3)
    theta_t: tuple = (0.7, 1.3)
    theta_a: tuple = (0.7, 1.3)
    edit_prob: float = 0.3
    iso_sigma: tuple = (2.0, 10.0)
    sharpen_amount: tuple = (0.3, 1.0)
    down_scale: tuple = (0.25, 0.75)
    elastic_sigma: tuple = (4.0, 8.0)
    elastic_alpha: tuple = (10.0, 40.0)
    dense_warp_amp: tuple = (2.0, 8.0)
    tri_jitter: tuple = (1.0, 4.0)
    theta_f: tuple = (0.0, 2.0)
    mask_deform_sigma: tuple = (4.0, 8.0)
    mask_deform_alpha: tuple = (10.0, 40.0)
    theta_k_choices: tuple = (3, 5, 7, 9, 11)
    face_group_prob: float = 0.75
    alpha_scale: tuple = (0.5, 1.0)
    segment_len: tuple = (1, 8)

    @classmethod
    def from_dict(cls, overrides):
        known = {f.name for f in dataclasses.fields(cls)}
        bad = set(overrides) - known
        if bad:
            raise ParseError(f"unknown config keys: {sorted(bad)}")
        clean = {
            k: tuple(v) if isinstance(v, (list, tuple)) else v
            for k, v in overrides.items()
        }
        return cls(**clean)

    def to_dict(self):
        return {k: list(v) if isinstance(v, tuple) else v
                for k, v in dataclasses.asdict(self).items()}


def _seed_stream(seed, *key):
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(key))
    return np.random.Generator(np.random.Philox(ss))


class Rpg:
    """Seeded parameter stream for one clip."""

    def __init__(self, seed, config=None):
        if not (0 <= int(seed) < 2**64):
            raise ValueError("seed must be an unsigned 64-bit integer")
        self.seed = int(seed)
        self.config = config or RpgConfig()

    def _uniform(self, rng, bounds):
        lo, hi = bounds
        return float(rng.uniform(lo, hi))

    def _draw_paramset(self, segment_id):
        rng = _seed_stream(self.seed, 1, segment_id)
        cfg = self.config
        editor = EditorParams(
            theta_b=self._uniform(rng, cfg.theta_b),
            theta_t=self._uniform(rng, cfg.theta_t),
            theta_a=self._uniform(rng, cfg.theta_a),
            use_iso_noise=bool(rng.random() < cfg.edit_prob),
            use_sharpen=bool(rng.random() < cfg.edit_prob),
            use_downsample=bool(rng.random() < cfg.edit_prob),
            use_elastic=bool(rng.random() < cfg.edit_prob),
            use_dense_warp=bool(rng.random() < cfg.edit_prob),
            use_tri_stretch=bool(rng.random() < cfg.edit_prob),
            use_freq_perturb=bool(rng.random() < cfg.edit_prob),
            iso_sigma=self._uniform(rng, cfg.iso_sigma),
            iso_seed=int(rng.integers(MAX_SEED)),
            sharpen_amount=self._uniform(rng, cfg.sharpen_amount),
            down_scale=self._uniform(rng, cfg.down_scale),
            elastic=ElasticParams(
                theta_sigma=self._uniform(rng, cfg.elastic_sigma),
                theta_alpha=self._uniform(rng, cfg.elastic_alpha),
                noise_seed=int(rng.integers(MAX_SEED)),
            ),
            dense_warp_amp=self._uniform(rng, cfg.dense_warp_amp),
            dense_warp_seed=int(rng.integers(MAX_SEED)),
            tri_jitter=self._uniform(rng, cfg.tri_jitter),
            tri_seed=int(rng.integers(MAX_SEED)),
            theta_f=self._uniform(rng, cfg.theta_f),
            freq_seed=int(rng.integers(MAX_SEED)),
        )
        group = FACE_GROUP if rng.random() < cfg.face_group_prob else PART_GROUP
        mask = MaskParams(
            mask_kind=group[int(rng.integers(len(group)))],
            deform=ElasticParams(
                theta_sigma=self._uniform(rng, cfg.mask_deform_sigma),
                theta_alpha=self._uniform(rng, cfg.mask_deform_alpha),
                noise_seed=int(rng.integers(MAX_SEED)),
            ),
            theta_k=int(cfg.theta_k_choices[int(rng.integers(len(cfg.theta_k_choices)))]),
            soften_side=list(SoftenSide)[int(rng.integers(3))],
        )
        blend = BlendParams(
            method=list(BlendMethod)[int(rng.integers(3))],
            alpha_scale=self._uniform(rng, cfg.alpha_scale),
        )
        return ParamSet(editor=editor, mask=mask, blend=blend, segment_id=segment_id)

    def sample_clip_params(self, num_frames):
        if num_frames < 1:
            raise ValueError("num_frames must be >= 1")
        lo, hi = self.config.segment_len
        layout_rng = _seed_stream(self.seed, 0)
        out = []
        segment_id = 0
        while len(out) < num_frames:
            seg_len = int(layout_rng.integers(lo, hi + 1))
            pset = self._draw_paramset(segment_id)
            out.extend([pset] * seg_len)
            segment_id += 1
        return out[:num_frames]


def make_rpg(seed, config=None):
    return Rpg(seed, config=config)


def identity_params(segment_id=0):
    """A parameter set that leaves the frame untouched end-to-end."""
    off = ElasticParams(theta_sigma=4.0, theta_alpha=0.0, noise_seed=0)
    editor = EditorParams(
        theta_b=1.0, theta_t=1.0, theta_a=1.0,
        use_iso_noise=False, use_sharpen=False, use_downsample=False,
        use_elastic=False, use_dense_warp=False, use_tri_stretch=False,
        use_freq_perturb=False,
        iso_sigma=0.0, iso_seed=0, sharpen_amount=0.0, down_scale=0.5,
        elastic=off, dense_warp_amp=0.0, dense_warp_seed=0,
        tri_jitter=0.0, tri_seed=0, theta_f=0.0, freq_seed=0,
    )
    mask = MaskParams(
        mask_kind=MaskKind.WHOLE_FACE, deform=off, theta_k=3,
        soften_side=SoftenSide.NONE,
    )
    blend = BlendParams(method=BlendMethod.ALPHA, alpha_scale=1.0)
    return ParamSet(editor=editor, mask=mask, blend=blend, segment_id=segment_id)


def _paramset_to_dict(pset):
    d = dataclasses.asdict(pset)
    d["mask"]["mask_kind"] = pset.mask.mask_kind.value
    d["mask"]["soften_side"] = pset.mask.soften_side.value
    d["blend"]["method"] = pset.blend.method.value
    return d


def _elastic_from_dict(d):
    return ElasticParams(
        theta_sigma=float(d["theta_sigma"]),
        theta_alpha=float(d["theta_alpha"]),
        noise_seed=int(d["noise_seed"]),
    )


def _paramset_from_dict(d):
    try:
        e = d["editor"]
        editor = EditorParams(
            theta_b=float(e["theta_b"]), theta_t=float(e["theta_t"]),
            theta_a=float(e["theta_a"]),
            use_iso_noise=bool(e["use_iso_noise"]),
            use_sharpen=bool(e["use_sharpen"]),
            use_downsample=bool(e["use_downsample"]),
            use_elastic=bool(e["use_elastic"]),
            use_dense_warp=bool(e["use_dense_warp"]),
            use_tri_stretch=bool(e["use_tri_stretch"]),
            use_freq_perturb=bool(e["use_freq_perturb"]),
            iso_sigma=float(e["iso_sigma"]), iso_seed=int(e["iso_seed"]),
            sharpen_amount=float(e["sharpen_amount"]),
            down_scale=float(e["down_scale"]),
            elastic=_elastic_from_dict(e["elastic"]),
            dense_warp_amp=float(e["dense_warp_amp"]),
            dense_warp_seed=int(e["dense_warp_seed"]),
            tri_jitter=float(e["tri_jitter"]), tri_seed=int(e["tri_seed"]),
            theta_f=float(e["theta_f"]), freq_seed=int(e["freq_seed"]),
        )
        m = d["mask"]
        mask = MaskParams(
            mask_kind=MaskKind(m["mask_kind"]),
            deform=_elastic_from_dict(m["deform"]),
            theta_k=int(m["theta_k"]),
            soften_side=SoftenSide(m["soften_side"]),
        )
        b = d["blend"]
        blend = BlendParams(method=BlendMethod(b["method"]),
                            alpha_scale=float(b["alpha_scale"]))
        return ParamSet(editor=editor, mask=mask, blend=blend,
                        segment_id=int(d["segment_id"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed parameter record: {exc}") from exc


def serialize_trace(params, seed=None):
    doc = {
        "schema": TRACE_SCHEMA,
        "seed": seed,
        "frames": [_paramset_to_dict(p) for p in params],
    }
    return json.dumps(doc, indent=1)


def parse_trace(document):
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("schema") != TRACE_SCHEMA:
        raise ParseError(f"expected schema tag {TRACE_SCHEMA!r}")
    frames = doc.get("frames")
    if not isinstance(frames, list):
        raise ParseError("missing 'frames' array")
    return [_paramset_from_dict(d) for d in frames]
