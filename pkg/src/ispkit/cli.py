"""Command-line entry point: render, fit, search, curves, metrics, serve.

Exit codes: 0 ok, 2 usage error, 3 I/O error, 4 numeric/domain error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import decoder, fitter, imgio, metrics, search
from .errors import ImageFormatError, IspKitError, WeightsFormatError
from .params import IspParams, default_params
from .pipeline import FLOPS_PER_PIXEL, apply_pipeline, sample_curves

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_DOMAIN = 4


class UsageError(Exception):
    pass


def _parse_vector(text: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError as exc:
        raise UsageError(f"invalid vector literal {text!r}: {exc}") from exc


def _load_params_arg(value: str) -> IspParams:
    if value == "init":
        return default_params()
    return IspParams.from_json(Path(value).read_text())


def _load_weights_arg(path: str) -> decoder.DecoderWeights:
    return decoder.load_weights(Path(path).read_text())


def _resolve_style(args) -> IspParams:
    """Turn --params / --task [+ --weights] flags into a parameter set."""
    has_params = getattr(args, "params", None) is not None
    has_task = getattr(args, "task", None) is not None
    if has_params == has_task:
        raise UsageError("give exactly one of --params or --task")
    if has_params:
        return _load_params_arg(args.params)
    if args.weights is None:
        raise UsageError("--task requires --weights")
    return decoder.decode(_parse_vector(args.task), _load_weights_arg(args.weights))


def _cmd_render(args) -> int:
    params = _resolve_style(args)
    img = imgio.load_image(args.input)
    start = time.perf_counter()
    out = apply_pipeline(img, params)
    elapsed = time.perf_counter() - start
    imgio.save_image(out, args.output)
    print(f"flops_per_pixel: {FLOPS_PER_PIXEL}")
    print(f"render_seconds: {elapsed:.6f}")
    return EXIT_OK


def _cmd_fit(args) -> int:
    img = imgio.load_image(args.input)
    ref = imgio.load_image(args.reference)
    cfg = fitter.FitConfig(
        max_iters=args.max_iters,
        fd_step=args.h,
        loss_delta_tol=args.tol,
        grad_stride=args.grad_stride,
    )
    params, trace = fitter.fit_params(img, ref, cfg)
    Path(args.out_params).write_text(params.to_json())
    out = apply_pipeline(img, params)
    print(f"psnr: {metrics.psnr(out, ref)}")
    print(f"ssim: {metrics.ssim(out, ref)}")
    print(f"iterations: {trace.iterations}")
    print(f"termination: {trace.termination}")
    return EXIT_OK


def _cmd_search(args) -> int:
    img = imgio.load_image(args.input)
    ref = imgio.load_image(args.reference)
    weights = _load_weights_arg(args.weights)
    cfg = search.SearchConfig(t_init=_parse_vector(args.t_init), step=args.s, max_fails=args.K)
    best_t, best_err, trace = search.greedy_search(img, ref, weights, cfg)
    if args.trace is not None:
        Path(args.trace).write_text("\n".join(trace.to_lines()) + "\n")
    out = apply_pipeline(img, decoder.decode(best_t, weights))
    print(f"best_t: {','.join(repr(v) for v in best_t)}")
    print(f"best_mse: {best_err!r}")
    print(f"psnr: {metrics.psnr(out, ref)}")
    print(f"inferences: {len(trace)}")
    return EXIT_OK


def _cmd_curves(args) -> int:
    params = _resolve_style(args)
    samples = sample_curves(params, args.n)
    doc = {
        "x": samples.x.tolist(),
        "gamma": samples.gamma_curve.tolist(),
        "tone": samples.tone_curve.tolist(),
        "ccm_r": samples.ccm_r.tolist(),
        "ccm_g": samples.ccm_g.tolist(),
        "ccm_b": samples.ccm_b.tolist(),
    }
    text = json.dumps(doc, indent=2)
    if args.out is not None:
        Path(args.out).write_text(text)
    else:
        print(text)
    return EXIT_OK


def _cmd_metrics(args) -> int:
    a = imgio.load_image(args.a)
    b = imgio.load_image(args.b)
    report = metrics.quality_report(a, b)
    print(f"mse: {report.mse}")
    print(f"psnr: {report.psnr}")
    print(f"ssim: {report.ssim}")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import socket

    import uvicorn

    from .service import create_app

    weights = _load_weights_arg(args.weights) if args.weights else decoder.synth_weights(42, 1.0)
    app = create_app(weights)
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    sock.bind((args.host, args.port))
    sock.listen(128)
    print(f"listening on {sock.getsockname()[0]}:{sock.getsockname()[1]}", flush=True)
    config = uvicorn.Config(app, log_level="warning")
    uvicorn.Server(config).run(sockets=[sock])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ispkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("render", help="render an image with a style")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--params", help="parameter JSON file, or the literal 'init'")
    p.add_argument("--task", help="comma-separated task vector")
    p.add_argument("--weights", help="decoder weights JSON file")
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("fit", help="fit parameters to a reference image")
    p.add_argument("input")
    p.add_argument("reference")
    p.add_argument("out_params")
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--h", type=float, default=1e-4)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--grad-stride", type=int, default=4)
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("search", help="greedy task-vector search against a reference")
    p.add_argument("input")
    p.add_argument("reference")
    p.add_argument("--weights", required=True)
    p.add_argument("--t-init", default="0.0,0.0,0.0")
    p.add_argument("--s", type=float, default=0.1)
    p.add_argument("--K", type=int, default=100)
    p.add_argument("--trace", help="write the evaluation trace to this file")
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("curves", help="sample transfer curves as JSON")
    p.add_argument("--params")
    p.add_argument("--task")
    p.add_argument("--weights")
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_curves)

    p = sub.add_parser("metrics", help="compare two images")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--weights")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FileNotFoundError, ImageFormatError, WeightsFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except IspKitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
