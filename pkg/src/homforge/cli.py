"""Command-line front end.

Every invocation prints one JSON document (listings print JSON lines) on
stdout and diagnostics on stderr.  Exit codes: 0 success, 2 search budget
exhausted, 3 bit prefix exhausted, 4 invalid input.  Output is byte-stable
across reruns for the same arguments unless --stamp is given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import ages, bits, limits, monochrome, ranked, render
from .errors import ForgeError, InvalidInput
from .natbits import nat_from_json, nat_to_json
from .structures import (
    complete_graph,
    induced,
    load_structure,
    structure_to_json,
)

DEFAULT_BUDGET = 100_000
DEFAULT_DEPTH = 8


def _budget_default() -> int:
    env = os.environ.get("FORGE_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InvalidInput(f"FORGE_BUDGET must be an integer, got {env!r}") from None
    return DEFAULT_BUDGET


def _parse_pres(spec: str, levels: int | None, bit_spec: str | None):
    if spec == "rado":
        return limits.RadoPresentation()
    if spec == "complete":
        return limits.CompletePresentation()
    if spec in ("primes", "ldiag_primes"):
        if levels is None:
            raise InvalidInput("--levels is required for diagram presentations")
        return limits.LdiagPrimesPresentation(levels)
    if spec in ("bits", "ldiag_bits"):
        if levels is None:
            raise InvalidInput("--levels is required for diagram presentations")
        if bit_spec is None:
            raise InvalidInput("--alpha BITSPEC is required for bit-driven diagrams")
        return limits.LdiagBitsPresentation(levels, bits.parse_spec(bit_spec))
    if spec.startswith("{"):
        return limits.presentation_from_descriptor(json.loads(spec))
    raise InvalidInput(f"unknown presentation {spec!r}")


def _parse_beta(spec: str):
    low = spec.lower()
    if low.startswith("k") and low[1:].isdigit():
        return complete_graph(int(low[1:]))
    return load_structure(spec)


def _emit(doc, out, stamp: bool):
    if stamp:
        doc = dict(doc)
        doc["stamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    out.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def _emit_lines(rows, out):
    for row in rows:
        out.write(json.dumps(row, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# subcommands


def _cmd_limit_show(args, out):
    pres = _parse_pres(args.pres, args.levels, args.alpha)
    n = args.count
    prefix = induced(pres, tuple(range(n)))
    if args.format == "dot":
        if pres.levels is not None:
            out.write(render.ldiag_dot(pres, (n - 1) // pres.levels))
        else:
            out.write(render.graph_dot(pres, tuple(range(n))))
        return 0
    doc = {
        "presentation": pres.descriptor(),
        "prefix_size": n,
        "induced_prefix": structure_to_json(prefix),
    }
    _emit(doc, out, args.stamp)
    if args.figure:
        if pres.levels is not None:
            render.ldiag_figure(pres, (n - 1) // pres.levels, args.figure,
                                title=f"{pres.kind} prefix")
        else:
            render.graph_figure(pres, tuple(range(n)), args.figure,
                                title=f"{pres.kind} prefix")
    return 0


def _cmd_copies_list(args, out):
    pres = _parse_pres(args.pres, args.levels, args.alpha)
    beta = _parse_beta(args.beta)
    listing = ages.enumerate_copies(pres, beta, args.count)
    _emit_lines(({"j": j, "set": [nat_to_json(v) for v in vs]} for j, vs in listing), out)
    if args.figure:
        render.copies_figure(listing, args.figure, title=f"copies of |beta|={beta.size}")
    return 0


def _cmd_color_show(args, out):
    pres = _parse_pres(args.pres, args.levels, args.alpha)
    beta = _parse_beta(args.beta)
    eps = bits.parse_spec(args.bits)
    listing = ages.enumerate_copies(pres, beta, args.count)
    rows = []
    for j, vs in listing:
        rows.append({"j": j, "set": [nat_to_json(v) for v in vs], "color": eps(j)})
    _emit_lines(rows, out)
    return 0


def _cmd_mono_embed(args, out):
    pres = _parse_pres(args.pres, args.levels, args.alpha)
    beta = _parse_beta(args.beta)
    eps = bits.parse_spec(args.bits)
    cert = monochrome.monochromatic_embedding(pres, beta, eps, args.depth, args.budget)
    doc = cert.to_json()
    if args.format == "dot":
        image = [nat_from_json(v) for _, v in cert.nu_table]
        copies = ages.copies_in(pres, beta, image)
        out.write(render.graph_dot(pres, image, highlight=copies))
    else:
        _emit(doc, out, args.stamp)
    if args.cert_out:
        with open(args.cert_out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, sort_keys=True, indent=2)
            fh.write("\n")
    if args.figure:
        image = [nat_from_json(v) for _, v in cert.nu_table]
        copies = ages.copies_in(pres, beta, image)
        render.graph_figure(pres, image, args.figure, highlight=copies,
                            title=f"monochromatic image, {len(copies)} copies")
    return 0


def _cmd_mono_verify(args, out):
    if args.cert == "-":
        obj = json.load(sys.stdin)
    else:
        with open(args.cert, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    cert = monochrome.EmbeddingCertificate.from_json(obj)
    ok = monochrome.verify_certificate(cert)
    _emit({"valid": ok, "audited_copy_count": cert.audited_copy_count}, out, args.stamp)
    return 0 if ok else 4


def _cmd_ldiag_probe(args, out):
    pres = _parse_pres(args.pres, args.levels, args.alpha)
    if pres.levels is None:
        raise InvalidInput("ldiag probe needs a diagram presentation")
    report = ranked.genericity_probe(pres, args.caps, args.index_max, args.zbound,
                                     pair_cap=args.pair_cap)
    if not args.witnesses:
        report = dict(report)
        report.pop("witnesses")
    _emit(report, out, args.stamp)
    if args.figure:
        render.ldiag_figure(pres, args.index_max, args.figure,
                            title=f"{pres.kind} probe prefix")
    return 0


def _cmd_ldiag_witness(args, out):
    pt = ranked.PrimeTable(args.levels)
    inst = ranked.ExtensionInstance(
        levels=args.levels, i=args.i,
        X=tuple(args.x), Y=tuple(args.y), Z=tuple(args.z),
        Xp=tuple(args.xp), Yp=tuple(args.yp))
    z = ranked.prime_witness(pt, inst)
    _emit({
        "levels": args.levels,
        "i": args.i,
        "witness_index": z,
        "witness_vertex": args.i + args.levels * z,
        "audited": True,
    }, out, args.stamp)
    return 0


def _cmd_homog_check(args, out):
    pres = _parse_pres(args.pres, args.levels, args.alpha)
    A = load_structure(args.sub)
    B = load_structure(args.sup)
    h = {}
    if args.map:
        for part in args.map.split(","):
            d, _, v = part.partition(":")
            h[int(d)] = int(v)
    extended = limits.check_homogeneity_sample(pres, A, B, h, args.bound)
    if extended is None:
        _emit({"extended": None, "note": "no witness within bound"}, out, args.stamp)
        return 2
    _emit({"extended": {str(d): nat_to_json(v) for d, v in sorted(extended.items())}},
          out, args.stamp)
    return 0


# ---------------------------------------------------------------------------


def _add_common(p, *, pres=True, beta=False, bits_flag=False):
    if pres:
        p.add_argument("--pres", required=True,
                       help="rado | complete | primes | bits (diagram kinds need --levels)")
        p.add_argument("--levels", type=int, default=None)
        p.add_argument("--alpha", default=None,
                       help="bit spec for bit-driven diagrams (e.g. prng:7)")
    if beta:
        p.add_argument("--beta", required=True, help="structure JSON file or kN shorthand")
    if bits_flag:
        p.add_argument("--bits", required=True,
                       help="prng:SEED | literal:ones|zeros|01... | file:PATH | complement:SPEC")
    p.add_argument("--stamp", action="store_true", help="include a timestamp in the output")
    p.add_argument("--figure", default=None, help="render a figure to this file")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="homforge")
    groups = top.add_subparsers(dest="group", required=True)

    limit = groups.add_parser("limit").add_subparsers(dest="action", required=True)
    p = limit.add_parser("show", help="presentation descriptor and induced prefix")
    _add_common(p)
    p.add_argument("--count", type=int, default=8)
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.set_defaults(fn=_cmd_limit_show)

    copies = groups.add_parser("copies").add_subparsers(dest="action", required=True)
    p = copies.add_parser("list", help="canonical copy listing (JSON lines)")
    _add_common(p, beta=True)
    p.add_argument("--count", type=int, default=10)
    p.set_defaults(fn=_cmd_copies_list)

    color = groups.add_parser("color").add_subparsers(dest="action", required=True)
    p = color.add_parser("show", help="copy listing with oracle colours")
    _add_common(p, beta=True, bits_flag=True)
    p.add_argument("--count", type=int, default=10)
    p.set_defaults(fn=_cmd_color_show)

    mono = groups.add_parser("mono").add_subparsers(dest="action", required=True)
    p = mono.add_parser("embed", help="greedy monochromatic embedding -> certificate")
    _add_common(p, beta=True, bits_flag=True)
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.add_argument("--cert-out", default=None, help="also write the certificate here")
    p.set_defaults(fn=_cmd_mono_embed)
    p = mono.add_parser("verify", help="independently audit a certificate")
    p.add_argument("--cert", required=True, help="certificate file, or - for stdin")
    p.add_argument("--stamp", action="store_true")
    p.set_defaults(fn=_cmd_mono_verify)

    ldiag = groups.add_parser("ldiag").add_subparsers(dest="action", required=True)
    p = ldiag.add_parser("probe", help="bounded genericity probe")
    _add_common(p)
    p.add_argument("--caps", type=int, default=1, help="max size of each of X,Y,Z,X',Y'")
    p.add_argument("--index-max", type=int, default=2)
    p.add_argument("--zbound", type=int, default=10_000)
    p.add_argument("--pair-cap", type=int, default=None,
                   help="optional cap on |X|+|Y| and |X'|+|Y'|")
    p.add_argument("--witnesses", action="store_true", help="include the witness map")
    p.set_defaults(fn=_cmd_ldiag_probe)
    p = ldiag.add_parser("witness", help="explicit prime-table extension witness")
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--x", type=int, nargs="*", default=[])
    p.add_argument("--y", type=int, nargs="*", default=[])
    p.add_argument("--z", type=int, nargs="*", default=[])
    p.add_argument("--xp", type=int, nargs="*", default=[])
    p.add_argument("--yp", type=int, nargs="*", default=[])
    p.add_argument("--stamp", action="store_true")
    p.set_defaults(fn=_cmd_ldiag_witness)

    homog = groups.add_parser("homog").add_subparsers(dest="action", required=True)
    p = homog.add_parser("check", help="one-point homogeneity extension")
    _add_common(p)
    p.add_argument("--sub", required=True, help="structure A (JSON file)")
    p.add_argument("--sup", required=True, help="structure B = A plus one element")
    p.add_argument("--map", default="", help="embedding of A, e.g. 0:0,1:1")
    p.add_argument("--bound", type=int, default=None)
    p.set_defaults(fn=_cmd_homog_check)

    return top


def run(argv, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 4 if exc.code not in (0, None) else 0
    try:
        if getattr(args, "budget", "absent") is None:
            args.budget = _budget_default()
        return args.fn(args, out)
    except ForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


def main() -> None:
    sys.exit(run(sys.argv[1:]))
