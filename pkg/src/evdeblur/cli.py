"""Command-line interface.

Subcommands: ``synth`` (build a dataset from sharp sequences), ``train``,
``eval``, ``infer`` (single sample), and ``gradcheck``.
"""

import argparse
import sys
from pathlib import Path

from .config import NetConfig, load_config
from .evaluate import evaluate, format_report, write_report
from .gradcheck import BLOCKS, gradient_check
from .imgio import load_image, save_image
from .synth.dataset import build_dataset
from .train import CROP, train


def _cmd_synth(args):
    manifest = build_dataset(
        args.sharp_dir, args.out, P=args.P, blur_window_len=args.window,
        stride=args.stride, fps=args.fps, seed=args.seed,
        threshold_mu=args.mu, threshold_sigma=args.sigma)
    n = len(manifest["samples"])
    print(f"wrote {n} samples over {len(manifest['sequences'])} sequence(s) "
          f"to {args.out}")


def _cmd_train(args):
    cfg = load_config(args.config) if args.config else NetConfig()
    log_path = args.log or str(Path(args.out).with_suffix(".log"))
    state = train(cfg, args.data, args.steps, args.out, seed=args.seed,
                  crop=args.crop, log_path=log_path,
                  checkpoint_every=args.checkpoint_every)
    print(f"finished step {state.step}: loss {state.loss:.6f}, "
          f"checkpoint {state.checkpoint}, log {log_path}")


def _cmd_eval(args):
    report = evaluate(args.ckpt, args.data)
    write_report(report, args.report)
    sys.stdout.write(format_report(report))


def _cmd_infer(args):
    from .events.io import read_events
    from .nets.model import load_checkpoint, run_on_sample

    sample_dir = Path(args.sample)
    blur_paths = sorted((sample_dir / "blur").glob("*.png"))
    event_paths = sorted((sample_dir / "events").glob("*.evt"))
    if not blur_paths or len(blur_paths) != len(event_paths):
        raise SystemExit(f"{sample_dir} must hold matching blur/*.png and "
                         f"events/*.evt files")
    model = load_checkpoint(args.ckpt)
    frames = [load_image(p) for p in blur_paths]
    streams = [read_events(p) for p in event_paths]
    out = run_on_sample(model, frames, streams)
    save_image(out, args.out)
    print(f"wrote {args.out}")


def _cmd_gradcheck(args):
    err = gradient_check(args.block, size=args.size, epsilon=args.eps,
                         seed=args.seed)
    print(f"{args.block}: max relative gradient error {err:.3e}")
    if err >= 1e-3:
        raise SystemExit(1)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="evdeblur",
        description="Event-guided video deblurring pipeline")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize blur frames and events from sharp sequences")
    p.add_argument("--sharp-dir", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--window", type=int, default=7, help="sharp frames per blur window")
    p.add_argument("--P", type=int, default=2, help="neighbor windows on each side")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stride", type=int, default=None)
    p.add_argument("--fps", type=float, default=240.0)
    p.add_argument("--mu", type=float, default=0.2, help="contrast threshold mean")
    p.add_argument("--sigma", type=float, default=0.03, help="contrast threshold std")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("train", help="train a model on a synthesized dataset")
    p.add_argument("--config", default=None, help="key=value config file")
    p.add_argument("--data", required=True, help="dataset root with index.json")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out", required=True, help="checkpoint output path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--crop", type=int, default=CROP)
    p.add_argument("--log", default=None)
    p.add_argument("--checkpoint-every", type=int, default=0)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="evaluate a checkpoint on a dataset")
    p.add_argument("--ckpt", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--report", required=True)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("infer", help="deblur one sample directory")
    p.add_argument("--ckpt", required=True)
    p.add_argument("--sample", required=True,
                   help="directory with blur/*.png and events/*.evt")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_infer)

    p = sub.add_parser("gradcheck", help="finite-difference gradient check")
    p.add_argument("--block", required=True, choices=sorted(BLOCKS))
    p.add_argument("--eps", type=float, default=1e-5)
    p.add_argument("--size", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_gradcheck)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    args.func(args)


if __name__ == "__main__":
    main()
