"""Thin command-line client for the report service.

By default the service runs in-process (no network, same byte-for-byte
responses); ``--server URL`` points the same commands at a running instance
instead.  Exit codes: 0 all checks pass, 2 a published-value discrepancy was
detected and reported, 1 internal verification failure.
"""

from __future__ import annotations

import argparse
import sys
import warnings

import httpx

from .reports import EXIT_CODES, render_json, render_text


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=300.0)
    # embedded mode: drive the ASGI app directly; the starlette/httpx
    # version-pairing deprecation is irrelevant to this usage
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient

    from .service import app
    return TestClient(app)


def _parse_params(text: str) -> dict:
    out = {}
    if not text:
        return out
    for piece in text.split(","):
        if "=" not in piece:
            raise SystemExit(f"bad parameter assignment {piece!r}; "
                             "expected name=value")
        name, value = piece.split("=", 1)
        out[name.strip()] = value.strip()
    return out


def _parse_range(text: str) -> tuple[str, str]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise SystemExit(f"bad range {text!r}; expected min,max")
    return (parts[0], parts[1])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="approxsym",
        description="Exact approximate-symmetry engine for the perturbed "
                    "Gardner equation")
    parser.add_argument("--server", default=None,
                        help="base URL of a running service; default runs "
                             "the service in-process")
    parser.add_argument("--format", choices=("text", "json", "csv"),
                        default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("symmetries", help="derive and verify the symmetry "
                                          "algebra of an equation")
    p.add_argument("equation", choices=("kdv", "gardner"))
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--order", type=int, default=1,
                   help="series truncation order (first-order theory)")

    p = sub.add_parser("tables", help="reproduce the commutator or adjoint "
                                      "table and compare with the reference")
    p.add_argument("which", choices=("commutator", "adjoint"))
    p.add_argument("--selftest-corrupt", default=None, metavar="I,J",
                   help="corrupt one reference cell (1-based) to exercise "
                        "mismatch reporting")

    sub.add_parser("optimal", help="replay the optimal-system normalizations")
    sub.add_parser("structure", help="derived series, solvability, ideal chain")

    p = sub.add_parser("invariants", help="audit the invariant table")
    p.add_argument("--selftest-corrupt", default=None, metavar="ROW,CASE",
                   help="corrupt one row (0-based) to exercise the erratum "
                        "path")

    sub.add_parser("galilean", help="derive the approximately "
                                    "Galilean-invariant solution")

    def add_grid_args(p):
        p.add_argument("--x-range", default="-3,3")
        p.add_argument("--t-range", default="0.1,3")
        p.add_argument("--nx", type=int, default=61)
        p.add_argument("--nt", type=int, default=30)
        p.add_argument("--eps", default="0.1")
        p.add_argument("--params", default="c=1,C=1,k1=1,k2=1,k4=1",
                       metavar="k1=..,k2=..,k4=..,c=..,C=..")

    p = sub.add_parser("grid", help="evaluate a closed-form solution on a "
                                    "grid (CSV)")
    add_grid_args(p)
    p.add_argument("--solution", default="galilean_approximate",
                   choices=("galilean_unperturbed", "galilean_approximate",
                            "linear_drift"))

    p = sub.add_parser("residual-scaling",
                       help="sup-norm residual ratios as the parameter halves")
    add_grid_args(p)
    p.add_argument("--solution", default="galilean_approximate",
                   choices=("galilean_unperturbed", "galilean_approximate",
                            "linear_drift"))
    p.add_argument("--eps-list", default="0.1,0.05,0.025")
    return parser


def _grid_body(args) -> dict:
    return {
        "x_range": _parse_range(args.x_range),
        "t_range": _parse_range(args.t_range),
        "nx": args.nx,
        "nt": args.nt,
        "eps": args.eps,
        "params": _parse_params(args.params),
        "solution": args.solution,
    }


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "order", 1) != 1:
        sys.stderr.write("only first-order precision is supported\n")
        return 1
    with _client(args.server) as client:
        if args.command == "symmetries":
            resp = client.post("/symmetries", json={
                "equation": args.equation, "degree": args.degree})
        elif args.command == "tables":
            body = {"which": args.which}
            if args.selftest_corrupt:
                i, j = (int(v) for v in args.selftest_corrupt.split(","))
                body["corrupt_cell"] = [i - 1, j - 1]
            resp = client.post("/tables", json=body)
        elif args.command == "optimal":
            resp = client.post("/optimal", json={})
        elif args.command == "structure":
            resp = client.post("/structure", json={})
        elif args.command == "invariants":
            body = {}
            if args.selftest_corrupt:
                r, c = (int(v) for v in args.selftest_corrupt.split(","))
                body["corrupt_case"] = [r, c]
            resp = client.post("/invariants", json=body)
        elif args.command == "galilean":
            resp = client.post("/galilean", json={})
        elif args.command == "grid":
            resp = client.post("/grid", json=_grid_body(args))
            if resp.status_code != 200:
                sys.stderr.write(resp.text + "\n")
                return 1
            sys.stdout.write(resp.text)
            return 0
        elif args.command == "residual-scaling":
            body = _grid_body(args)
            body["eps_list"] = [e.strip() for e in args.eps_list.split(",")]
            resp = client.post("/residual-scaling", json=body)
        else:  # pragma: no cover
            return 1

    if resp.status_code != 200:
        sys.stderr.write(f"error {resp.status_code}: {resp.text}\n")
        return 1
    payload = resp.json()
    if args.format == "json":
        sys.stdout.write(render_json(payload))
    else:
        sys.stdout.write(render_text(payload))
    return EXIT_CODES.get(payload.get("verdict", "fail"), 1)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
