"""Command-line interface: generate, analyze, mask."""

import argparse
import json
import os
import sys

import cv2
import numpy as np

from . import analysis, masks, pipeline, rpg
from .errors import PfakeError
from .media import Clip, load_clip, load_frames, load_landmark_file, save_clip

CONFIG_ENV = "PFAKE_CONFIG"

MASK_KIND_NAMES = {
    "whole-face": rpg.MaskKind.WHOLE_FACE,
    "narrowed-face": rpg.MaskKind.NARROWED_FACE,
    "face-with-forehead": rpg.MaskKind.FACE_WITH_FOREHEAD,
    "face-boundary": rpg.MaskKind.FACE_BOUNDARY,
    "mouth-region": rpg.MaskKind.MOUTH_REGION,
    "facial-organs": rpg.MaskKind.FACIAL_ORGANS,
}


def _load_config(path):
    if path is None:
        path = os.environ.get(CONFIG_ENV)
    if not path:
        return rpg.RpgConfig()
    with open(path) as fh:
        return rpg.RpgConfig.from_dict(json.load(fh))


def _print_config(config, seed=None):
    print("effective configuration:")
    for key, value in config.to_dict().items():
        print(f"  {key}: {value}")
    if seed is not None:
        print(f"  seed: {seed}")


def cmd_generate(args):
    config = _load_config(args.config)
    _print_config(config, args.seed)
    if args.manifest:
        manifest = pipeline.load_manifest(args.manifest)
        report = pipeline.generate_batch(manifest, args.seed, args.out,
                                         config=config, jobs=args.jobs)
        print(json.dumps(report, indent=1))
        return 1 if report["failed"] else 0
    clip = load_clip(args.input, args.landmarks)
    if args.frames is not None:
        clip = Clip(frames=clip.frames[:args.frames],
                    landmarks=clip.landmarks[:args.frames],
                    source_id=clip.source_id)
    pfake, params = pipeline.generate_pfake(clip, args.seed, config=config)
    save_clip(pfake, args.out, trace_doc=rpg.serialize_trace(params, seed=args.seed))
    print(f"trace: {os.path.join(args.out, 'trace.json')}")
    return 0


def cmd_analyze(args):
    real = Clip(frames=load_frames(args.real),
                landmarks=_dummy_landmarks(args.real), source_id="real")
    cand = Clip(frames=load_frames(args.candidate),
                landmarks=real.landmarks, source_id="candidate")
    rep_real, rep_cand, deltas = analysis.compare(real, cand, columns=args.columns)
    out_dir = os.path.dirname(os.path.abspath(args.out))
    os.makedirs(out_dir, exist_ok=True)
    with open(args.out, "w") as fh:
        json.dump({
            "schema": analysis.REPORT_SCHEMA,
            "real": rep_real.to_dict(),
            "candidate": rep_cand.to_dict(),
            "deltas": deltas,
        }, fh, indent=1)
    mid = real.width // 2
    for name, clip in (("real", real), ("candidate", cand)):
        slice_img = analysis.temporal_slice(clip, mid)
        cv2.imwrite(os.path.join(out_dir, f"slice_{name}.png"),
                    cv2.cvtColor(slice_img, cv2.COLOR_RGB2BGR))
        residual = analysis.noise_residual(clip.frames[0])
        vis = np.clip(residual * 4 + 128, 0, 255).astype(np.uint8)
        cv2.imwrite(os.path.join(out_dir, f"residual_{name}.png"), vis)
    print(f"report: {args.out}")
    return 0


def _dummy_landmarks(frame_dir):
    # analysis does not use landmarks; synthesize an in-frame placeholder set
    frames = load_frames(frame_dir)
    h, w = frames.shape[1:3]
    pts = np.stack([np.full(68, w / 2.0), np.full(68, h / 2.0)], axis=1)
    pts += np.linspace(-1, 1, 68)[:, None]
    return np.tile(pts, (len(frames), 1, 1))


def cmd_mask(args):
    landmarks = load_landmark_file(args.landmarks)[0]
    frame = cv2.imread(args.frame, cv2.IMREAD_COLOR)
    if frame is None:
        raise PfakeError(f"cannot decode {args.frame}")
    kind = MASK_KIND_NAMES[args.kind]
    mask = masks.build_mask(landmarks, kind, frame.shape[0], frame.shape[1])
    cv2.imwrite(args.out, np.floor(mask * 255 + 0.5).astype(np.uint8))
    print(f"mask: {args.out}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="pfakegen",
                                     description="pseudo-fake clip generator")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="create a pseudo-fake clip or batch")
    gen.add_argument("--input", help="directory of real frames")
    gen.add_argument("--landmarks", help="Lx68x2 landmark JSON file")
    gen.add_argument("--manifest", help="JSON manifest for batch mode")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", required=True)
    gen.add_argument("--frames", type=int, default=None)
    gen.add_argument("--config", default=None)
    gen.add_argument("--jobs", type=int, default=None)
    gen.set_defaults(func=cmd_generate)

    ana = sub.add_parser("analyze", help="compare regularity of two clips")
    ana.add_argument("--real", required=True)
    ana.add_argument("--candidate", required=True)
    ana.add_argument("--out", required=True)
    ana.add_argument("--columns", type=int, default=8)
    ana.set_defaults(func=cmd_analyze)

    msk = sub.add_parser("mask", help="write a mask preview image")
    msk.add_argument("--landmarks", required=True)
    msk.add_argument("--frame", required=True)
    msk.add_argument("--kind", required=True, choices=sorted(MASK_KIND_NAMES))
    msk.add_argument("--out", required=True)
    msk.set_defaults(func=cmd_mask)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "generate" and not args.manifest:
        if not args.input or not args.landmarks:
            parser.error("generate needs --input and --landmarks (or --manifest)")
    try:
        return args.func(args)
    except (PfakeError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
