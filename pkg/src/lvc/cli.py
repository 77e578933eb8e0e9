"""Command-line front end.

Thin client over the FastAPI service: by default requests are dispatched
to the app in-process (no sockets); set LVC_SERVER to a base URL to talk
to a running server instead. Standard output carries only JSON;
diagnostics go to standard error.

Exit codes: 0 success, 1 usage error, 2 data/validation error, 3 I/O.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import httpx

from . import __version__
from .core import THREADS_ENV
from .errors import exit_code_for
from .reports import dumps

SERVER_ENV = "LVC_SERVER"


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the CLI contract wants 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def _env_threads():
    raw = os.environ.get(THREADS_ENV, "")
    try:
        n = int(raw)
        return n if n >= 1 else None
    except ValueError:
        return None


def _post(route: str, payload: dict):
    base = os.environ.get(SERVER_ENV)
    if base:
        with httpx.Client(base_url=base, timeout=None) as client:
            return client.post(route, json=payload)
    # in-process dispatch, no sockets
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient  # deferred: keeps --help fast

    from .service import app
    with TestClient(app, raise_server_exceptions=False) as client:
        return client.post(route, json=payload)


def _dispatch(route: str, payload: dict):
    """POST to the service; on error print the message and exit per class."""
    resp = _post(route, payload)
    body = resp.json()
    if resp.status_code == 200:
        return body
    if isinstance(body, dict) and "error" in body:
        print(f"{body['error']}: {body['message']}", file=sys.stderr)
        sys.exit(exit_code_for(body["error"]))
    print(f"request failed ({resp.status_code}): {body}", file=sys.stderr)
    sys.exit(1 if resp.status_code == 422 else 2)


def build_parser() -> _Parser:
    parser = _Parser(prog="lvc",
                     description="Query-attention video feature compression")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("compress", help="compress frame features into "
                                        "pseudo-image frames")
    p.add_argument("--features", required=True, metavar="PATH",
                   help="input features NPY, (frames*tokens) x dim")
    p.add_argument("--query", metavar="PATH",
                   help="query embedding NPY (required unless --mode avg-pool)")
    p.add_argument("--tokens-per-frame", required=True, type=int, metavar="INT")
    p.add_argument("--pseudo-frames", required=True, type=int, metavar="INT",
                   help="output frame count; must divide the input frame count")
    p.add_argument("--heads", type=int, default=1, metavar="INT",
                   help="attention heads (query-attn-mh only)")
    p.add_argument("--mode", default="query-attn",
                   choices=["query-attn", "query-attn-mh", "avg-pool"])
    p.add_argument("--out", required=True, metavar="PATH",
                   help="output NPY path")
    p.add_argument("--sidecar", metavar="PATH",
                   help="sidecar JSON path (default: OUT.json)")

    p = sub.add_parser("sample-indices",
                       help="uniform center frame sampling plan")
    p.add_argument("--total", required=True, type=int, metavar="INT")
    p.add_argument("--frames", required=True, type=int, metavar="INT")

    p = sub.add_parser("synth-eval", help="synthetic planted-signal retrieval "
                                          "eval: query-attn vs average pooling")
    p.add_argument("--trials", type=int, default=1000, metavar="INT")
    p.add_argument("--frames", type=int, default=64, metavar="INT")
    p.add_argument("--tokens-per-frame", type=int, default=1, metavar="INT")
    p.add_argument("--dim", type=int, default=64, metavar="INT")
    p.add_argument("--pseudo-frames", type=int, default=4, metavar="INT")
    p.add_argument("--noise-sigma", type=float, default=0.0, metavar="FLOAT")
    p.add_argument("--seed", type=int, default=0, metavar="INT")
    p.add_argument("--report", metavar="PATH", help="write the report JSON here")

    p = sub.add_parser("bench", help="kernel throughput benchmark")
    p.add_argument("--sizes", required=True, action="append", metavar="MxTxD",
                   help="instance size, e.g. 64x256x4096 (repeat or "
                        "comma-separate)")
    p.add_argument("--reps", type=int, default=5, metavar="INT")
    p.add_argument("--pseudo-frames", type=int, default=16, metavar="INT")
    p.add_argument("--seed", type=int, default=0, metavar="INT")
    p.add_argument("--report", metavar="PATH", help="write the report JSON here")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "compress":
        summary = _dispatch("/compress", {
            "features_path": args.features,
            "query_path": args.query,
            "tokens_per_frame": args.tokens_per_frame,
            "pseudo_frames": args.pseudo_frames,
            "heads": args.heads,
            "mode": args.mode,
            "out_path": args.out,
            "sidecar_path": args.sidecar,
            "threads": _env_threads(),
        })
        print(dumps(summary))
    elif args.command == "sample-indices":
        body = _dispatch("/sample-indices", {
            "total_frames": args.total,
            "frames": args.frames,
        })
        print(json.dumps(body["indices"], separators=(",", ":")))
    elif args.command == "synth-eval":
        report = _dispatch("/synth-eval", {
            "trials": args.trials,
            "frames": args.frames,
            "tokens_per_frame": args.tokens_per_frame,
            "dim": args.dim,
            "pseudo_frames": args.pseudo_frames,
            "noise_sigma": args.noise_sigma,
            "seed": args.seed,
            "report_path": args.report,
        })
        print(dumps(report))
    elif args.command == "bench":
        sizes = [s for chunk in args.sizes for s in chunk.split(",") if s]
        report = _dispatch("/bench", {
            "sizes": sizes,
            "repetitions": args.reps,
            "seed": args.seed,
            "pseudo_frames": args.pseudo_frames,
            "report_path": args.report,
            "threads": _env_threads(),
        })
        print(dumps(report))
    elif args.command == "serve":
        import uvicorn

        from .service import app
        uvicorn.run(app, host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    sys.exit(main())
