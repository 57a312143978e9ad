"""End-to-end pseudo-fake generation: draw parameters, edit, mask, blend.

Labels: real clips are class 0, generated pseudo-fake clips are class 1.
"""

import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import blender, masks, rpg
from .editor import edit_frame
from .errors import FrameFailure, PfakeError
from .media import Clip, load_clip, save_clip

REAL_LABEL = 0
PFAKE_LABEL = 1


def frame_matte(landmarks, pset, height, width):
    """The finalized soft matte a frame is composited with."""
    mask = masks.build_mask(landmarks, pset.mask.mask_kind, height, width)
    return masks.finalize_mask(mask, pset.mask)


def _process_frame(frame, landmarks, pset):
    edited = edit_frame(frame, landmarks, pset.editor)
    matte = frame_matte(landmarks, pset, frame.shape[0], frame.shape[1])
    real_side, edited_side = blender.soften_side(frame, edited, pset.mask.soften_side)
    out = blender.blend(real_side, edited_side, matte, pset.blend)
    # disruption stays inside the matte support even when the background
    # side was softened for the composite
    untouched = matte == 0.0
    out[untouched] = frame[untouched]
    return out


def generate_pfake(clip, seed, config=None):
    """Run the full generator over one clip; returns (pfake clip, trace)."""
    generator = rpg.Rpg(seed, config=config)
    params = generator.sample_clip_params(len(clip))
    out_frames = np.empty_like(clip.frames)
    for t in range(len(clip)):
        try:
            out_frames[t] = _process_frame(clip.frames[t], clip.landmarks[t], params[t])
        except PfakeError as exc:
            raise FrameFailure(t, exc) from exc
    pfake = Clip(frames=out_frames, landmarks=clip.landmarks.copy(),
                 source_id=clip.source_id)
    return pfake, params


def clip_seed(master_seed, source_id):
    """Stable 64-bit per-clip seed derived from (master seed, source id)."""
    digest = hashlib.blake2b(
        f"{master_seed}:{source_id}".encode(), digest_size=8
    ).digest()
    return int.from_bytes(digest, "little")


def _run_one(entry, master_seed, out_root, config_dict):
    config = rpg.RpgConfig.from_dict(config_dict) if config_dict else None
    source_id = entry["source_id"]
    clip = load_clip(entry["frame_dir"], entry["landmark_file"], source_id=source_id)
    seed = clip_seed(master_seed, source_id)
    pfake, params = generate_pfake(clip, seed, config=config)
    clip_dir = os.path.join(out_root, source_id)
    save_clip(pfake, os.path.join(clip_dir, "frames"))
    with open(os.path.join(clip_dir, "trace.json"), "w") as fh:
        fh.write(rpg.serialize_trace(params, seed=seed))
    return source_id


def generate_batch(manifest, master_seed, out_root, config=None, jobs=None):
    """Process every manifest entry; per-clip failures do not stop the batch.

    Manifest entries are dicts {frame_dir, landmark_file, source_id}.
    Returns a report dict with succeeded/failed lists.
    """
    config_dict = config.to_dict() if config else None
    report = {"succeeded": [], "failed": []}
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs <= 1 or len(manifest) <= 1:
        for entry in manifest:
            try:
                report["succeeded"].append(
                    _run_one(entry, master_seed, out_root, config_dict))
            except Exception as exc:  # noqa: BLE001 - batch isolation
                report["failed"].append(
                    {"source_id": entry.get("source_id", "?"), "error": str(exc)})
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {
                pool.submit(_run_one, entry, master_seed, out_root, config_dict): entry
                for entry in manifest
            }
            for future, entry in futures.items():
                try:
                    report["succeeded"].append(future.result())
                except Exception as exc:  # noqa: BLE001
                    report["failed"].append(
                        {"source_id": entry.get("source_id", "?"), "error": str(exc)})
    return report


def load_manifest(path):
    with open(path) as fh:
        manifest = json.load(fh)
    if not isinstance(manifest, list):
        raise ValueError("manifest must be a JSON array of clip entries")
    return manifest
