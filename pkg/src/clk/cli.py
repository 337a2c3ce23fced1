"""Command-line client for the invariant service.

Every subcommand issues one HTTP request.  By default the FastAPI app is
served in-process (no socket, fully deterministic); ``--server URL`` points
the same client at a running instance instead.  Exit codes: 0 on success,
1 on domain or internal errors, 2 on usage and parse errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import httpx

from . import __version__
from .errors import ClkError, ParseError
from .exact import GaussianRational

JSON_FORMATS = ("json", "csv", "text")


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clk",
        description="SL(2,C) Casson-Lin invariants of two-bridge knots "
        "and their connected sums.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=JSON_FORMATS, default="text", help="output format"
    )
    common.add_argument("--out", metavar="PATH", help="write output to a file")
    common.add_argument(
        "--server", metavar="URL", help="talk to a running service instead of in-process"
    )

    sampling = argparse.ArgumentParser(add_help=False)
    sampling.add_argument("--samples", type=int, default=50, help="trace samples")
    sampling.add_argument("--seed", type=int, default=0, help="RNG seed")

    p = sub.add_parser(
        "invariant",
        parents=[common, sampling],
        help="χ_CL of a knot or connected sum",
    )
    p.add_argument("knot", help="descriptor, e.g. '4_1' or '3_1 # 2b(7,3)'")
    p.add_argument(
        "--pairs", type=int, default=100, help="glued pairs for freeness checks"
    )
    p.add_argument("--zn", type=int, default=5, help="order of the cyclic action")

    p = sub.add_parser(
        "sweep",
        parents=[common, sampling],
        help="trace-slice sweep of a single atom",
    )
    p.add_argument("knot")

    for name, help_text in (
        ("bad-set", "exceptional meridian traces with provenance"),
        ("charpoly", "exact character polynomial of one atom"),
        ("alexander", "Alexander polynomial and its bad traces"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("knot")

    p = sub.add_parser(
        "monodromy",
        parents=[common],
        help="track slice roots around loops in the τ-plane",
    )
    p.add_argument("knot")
    p.add_argument(
        "--center", help="loop center as 'a+bi' (rational or float parts)"
    )
    p.add_argument("--radius", type=float, help="loop radius")
    p.add_argument("--steps", type=int, default=256, help="steps per loop")
    p.add_argument(
        "--cw", action="store_true", help="traverse clockwise instead of ccw"
    )
    p.add_argument(
        "--no-paths", action="store_true", help="omit tracked paths from output"
    )

    p = sub.add_parser(
        "verify-cstar",
        parents=[common],
        help="certify the ℂ* gluing torus and ℤ/n freeness on sampled pairs",
    )
    p.add_argument("knot", help="connected sum of exactly two atoms")
    p.add_argument("--tau", help="exact meridian trace 'a+bi' (rational a, b)")
    p.add_argument("--n", type=int, default=5, help="order of the cyclic action")
    p.add_argument("--pairs", type=int, default=20, help="sampled glued pairs")
    p.add_argument("--seed", type=int, default=0, help="RNG seed")

    p = sub.add_parser(
        "corpus",
        parents=[common, sampling],
        help="run the atom corpus and all pairwise sums, checking additivity",
    )
    p.add_argument(
        "--entries", help="comma-separated descriptors (default: built-in corpus)"
    )
    p.add_argument(
        "--pairs", type=int, default=100, help="glued pairs for freeness checks"
    )

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _parse_complex_flag(text: str) -> tuple[float, float]:
    """'a+bi' with rational or float parts, for loop geometry flags."""
    try:
        g = GaussianRational.parse(text)
        z = g.to_complex()
        return (z.real, z.imag)
    except ParseError:
        pass
    try:
        z = complex(text.replace(" ", "").replace("i", "j").replace("I", "j"))
        return (z.real, z.imag)
    except ValueError:
        raise ParseError(f"bad complex literal {text!r}", 0) from None


# ---------------------------------------------------------------------------
# Request assembly
# ---------------------------------------------------------------------------


def _request_for(args: argparse.Namespace) -> tuple[str, dict]:
    cmd = args.command
    if cmd == "invariant":
        return "/invariant", {
            "knot": args.knot,
            "samples": args.samples,
            "seed": args.seed,
            "pairs": args.pairs,
            "zn": args.zn,
        }
    if cmd == "sweep":
        return "/sweep", {
            "knot": args.knot,
            "samples": args.samples,
            "seed": args.seed,
        }
    if cmd in ("bad-set", "charpoly", "alexander"):
        return f"/{cmd}", {"knot": args.knot}
    if cmd == "monodromy":
        payload: dict = {
            "knot": args.knot,
            "steps": args.steps,
            "orientation": "cw" if args.cw else "ccw",
            "include_paths": not args.no_paths,
        }
        if args.center is not None:
            payload["center"] = _parse_complex_flag(args.center)
        if args.radius is not None:
            payload["radius"] = args.radius
        return "/monodromy", payload
    if cmd == "verify-cstar":
        payload = {
            "knot": args.knot,
            "n": args.n,
            "pairs": args.pairs,
            "seed": args.seed,
        }
        if args.tau is not None:
            payload["tau"] = args.tau
        return "/verify-cstar", payload
    if cmd == "corpus":
        payload = {
            "samples": args.samples,
            "seed": args.seed,
            "pairs": args.pairs,
        }
        if args.entries is not None:
            payload["entries"] = [e.strip() for e in args.entries.split(",")]
        return "/corpus", payload
    raise ParseError(f"unknown command {cmd!r}", 0)


def _make_client(server: str | None):
    if server:
        return httpx.Client(base_url=server, timeout=300.0)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import create_app

    return TestClient(create_app())


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def _fmt_complex(re: float, im: float) -> str:
    if im == 0:
        return f"{re:.10g}"
    sign = "+" if im >= 0 else "-"
    return f"{re:.10g}{sign}{abs(im):.10g}i"


def _fmt_quad(quad) -> str:
    re_n, re_d, im_n, im_d = quad
    re = str(re_n) if re_d == 1 else f"{re_n}/{re_d}"
    if im_n == 0:
        return re
    im = str(abs(im_n)) if im_d == 1 else f"{abs(im_n)}/{im_d}"
    sign = "+" if im_n >= 0 else "-"
    return f"{re}{sign}{im}i"


def _table(rows: list[tuple[str, str]]) -> str:
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows) + "\n"


def _grid(header: list[str], body: list[list[str]]) -> str:
    rows = [header] + body
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    lines = [
        "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
        for row in rows
    ]
    return "\n".join(lines) + "\n"


def _invariant_rows(data: dict) -> list[tuple[str, str]]:
    distinct: list[tuple[float, float]] = []
    for e in data["bad_set"]:
        for re, im in e["roots"]:
            if all(abs(re - a) + abs(im - b) > 1e-8 for a, b in distinct):
                distinct.append((re, im))
    witnesses = ", ".join(dict.fromkeys(e["provenance"] for e in data["bad_set"]))
    generic = sum(1 for s in data["slices"] if s["generic"])
    rows = [
        ("knot", data["knot"]),
        ("chi_cl", str(data["chi_cl"])),
        ("bad set", f"{len(distinct)} exceptional traces"),
        ("witnesses", witnesses),
        ("slices", f"{len(data['slices'])} sampled, {generic} generic"),
    ]
    d = data.get("decomposition")
    if d:
        atoms = " + ".join(str(a) for a in d["atoms"])
        rows.append(("decomposition", f"{atoms}, type II {d['type_ii_chi']}"))
    return rows


def _text_invariant(data: dict) -> str:
    return _table(_invariant_rows(data))


def _text_bad_set(data: dict) -> str:
    body = [
        [
            e["provenance"],
            ", ".join(_fmt_complex(re, im) for re, im in e["roots"]),
        ]
        for e in data["bad_set"]
    ]
    return f"knot  {data['knot']}\n" + _grid(["provenance", "roots"], body)


def _text_charpoly(data: dict) -> str:
    return _table(
        [
            ("knot", data["knot"]),
            ("presentation", f"2b({data['p']},{data['q']})"),
            ("polynomial", data["pretty"]),
            ("y degree", str(data["y_degree"])),
            ("x degree", str(data["x_degree"])),
            ("abelian factors removed", str(data["abelian_factors_removed"])),
        ]
    )


def _text_alexander(data: dict) -> str:
    roots = ", ".join(
        _fmt_complex(re, im) for re, im in data["bad_traces"]["roots"]
    )
    return _table(
        [
            ("knot", data["knot"]),
            ("alexander", data["pretty"]),
            ("bad traces", roots),
        ]
    )


def _text_monodromy(data: dict) -> str:
    lines = [f"knot  {data['knot']}", f"rank  {data['rank']}"]
    body = []
    for k, loop in enumerate(data["loops"]):
        body.append(
            [
                str(k),
                _fmt_complex(*loop["center"]),
                f"{loop['radius']:.10g}",
                loop["orientation"],
                " ".join(str(i) for i in loop["sigma"]),
                ", ".join(_fmt_complex(re, im) for re, im in loop["eigenvalues"]),
            ]
        )
    grid = _grid(
        ["loop", "center", "radius", "dir", "sigma", "eigenvalues"], body
    )
    return "\n".join(lines) + "\n" + grid


def _text_verify_cstar(data: dict) -> str:
    return _table(
        [
            ("knot", data["knot"]),
            ("tau", _fmt_quad(data["tau"])),
            ("zeta", _fmt_complex(*data["zeta"])),
            ("lattice step", _fmt_complex(*data["lattice_step"])),
            ("n", str(data["n"])),
            ("pairs", str(data["pairs"])),
            ("free", "yes" if data["free"] else "NO"),
            ("min separation", f"{data['min_separation']:.10g}"),
            ("max closure error", f"{data['max_closure_error']:.10g}"),
        ]
    )


def _text_corpus(data: dict) -> str:
    ok_by_knot = {row["knot"]: row for row in data["additivity"]}
    body = []
    for entry in data["entries"]:
        row = ok_by_knot.get(entry["knot"])
        body.append(
            [
                entry["knot"],
                str(entry["chi_cl"]),
                str(row["type_ii_chi"]) if row else "-",
                ("yes" if row["ok"] else "NO") if row else "-",
            ]
        )
    return _grid(["knot", "chi_cl", "type_ii", "additive"], body)


TEXT_RENDERERS = {
    "invariant": _text_invariant,
    "sweep": _text_invariant,
    "bad-set": _text_bad_set,
    "charpoly": _text_charpoly,
    "alexander": _text_alexander,
    "monodromy": _text_monodromy,
    "verify-cstar": _text_verify_cstar,
    "corpus": _text_corpus,
}


def _csv_lines(header: str, rows: list[str]) -> str:
    return "\n".join([header] + rows) + "\n"


def _csv_invariant(data: dict) -> str:
    rows = [
        ",".join(
            [*(str(v) for v in s["tau"]), str(s["chi_b"]),
             "true" if s["generic"] else "false"]
        )
        for s in data["slices"]
    ]
    return _csv_lines(
        "tau_re_num,tau_re_den,tau_im_num,tau_im_den,chi_b,generic", rows
    )


def _csv_bad_set(data: dict) -> str:
    rows = [
        f"{e['provenance']},{re!r},{im!r}"
        for e in data["bad_set"]
        for re, im in e["roots"]
    ]
    return _csv_lines("provenance,re,im", rows)


def _csv_charpoly(data: dict) -> str:
    rows = [",".join(str(v) for v in term) for term in data["terms"]]
    return _csv_lines("x_exp,y_exp,num,den", rows)


def _csv_alexander(data: dict) -> str:
    rows = [f"{k},{c}" for k, c in enumerate(data["delta"])]
    return _csv_lines("degree,coeff", rows)


def _csv_monodromy(data: dict) -> str:
    if data["loops"] and "paths" in data["loops"][0]:
        rows = [
            f"{li},{ri},{theta!r},{re!r},{im!r}"
            for li, loop in enumerate(data["loops"])
            for ri, path in enumerate(loop["paths"])
            for theta, (re, im) in zip(loop["thetas"], path)
        ]
        return _csv_lines("loop,root,theta,re,im", rows)
    rows = [
        f"{li},{i},{j}"
        for li, loop in enumerate(data["loops"])
        for i, j in enumerate(loop["sigma"])
    ]
    return _csv_lines("loop,root,sigma", rows)


def _csv_verify_cstar(data: dict) -> str:
    rows = [f"{k},{json.dumps(v)}" for k, v in data.items()]
    return _csv_lines("key,value", rows)


def _csv_corpus(data: dict) -> str:
    ok_by_knot = {row["knot"]: row for row in data["additivity"]}
    rows = []
    for entry in data["entries"]:
        row = ok_by_knot.get(entry["knot"])
        type_ii = str(row["type_ii_chi"]) if row else ""
        ok = ("true" if row["ok"] else "false") if row else ""
        rows.append(f"\"{entry['knot']}\",{entry['chi_cl']},{type_ii},{ok}")
    return _csv_lines("knot,chi_cl,type_ii_chi,additive", rows)


CSV_RENDERERS = {
    "invariant": _csv_invariant,
    "sweep": _csv_invariant,
    "bad-set": _csv_bad_set,
    "charpoly": _csv_charpoly,
    "alexander": _csv_alexander,
    "monodromy": _csv_monodromy,
    "verify-cstar": _csv_verify_cstar,
    "corpus": _csv_corpus,
}


def render(command: str, data: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    if fmt == "csv":
        return CSV_RENDERERS[command](data)
    return TEXT_RENDERERS[command](data)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


def _run(args: argparse.Namespace) -> int:
    if args.command == "serve":
        return _serve(args)
    path, payload = _request_for(args)
    client = _make_client(args.server)
    try:
        resp = client.post(path, json=payload)
    finally:
        client.close()
    if resp.status_code == 200:
        _emit(render(args.command, resp.json(), args.format), args.out)
        return 0
    if resp.status_code == 422:
        print(f"usage error: {resp.text}", file=sys.stderr)
        return 2
    try:
        detail = resp.json().get("detail")
    except json.JSONDecodeError:
        detail = None
    if isinstance(detail, dict) and "kind" in detail:
        print(f"error: {detail['message']}", file=sys.stderr)
        return 2 if detail["kind"] == "parse" else 1
    print(f"error: HTTP {resp.status_code}: {resp.text}", file=sys.stderr)
    return 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except ParseError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return 2
    except ClkError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return 1
    except httpx.HTTPError as exc:
        print(f"error: transport failure: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        # the consumer closed the pipe; suppress the shutdown complaint
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0


if __name__ == "__main__":
    raise SystemExit(main())
