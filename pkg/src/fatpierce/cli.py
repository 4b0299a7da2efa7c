"""Command-line entry point.

Exit codes: 0 success / Confirmed / property holds, 1 Refuted / violated /
construction failure, 2 usage or input error, 3 Inconclusive.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import certifier as C
from . import fatsets as FS
from . import generator as G
from . import oracle as O
from . import pq
from . import solver as S
from . import svg

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


def _emit(doc: dict, out: str | None) -> None:
    text = FS.dumps(doc)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_pierce(a) -> int:
    fam = FS.read_family(a.input)
    try:
        res = S.pierce(fam)
    except S.SolverError as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, a.out)
        return EXIT_FAIL
    _emit(res.to_doc(), a.out)
    if a.svg:
        Path(a.svg).write_text(svg.family_svg(fam, res.points, f"pierce: {res.case_id}"))
    return EXIT_OK


def _claim_ids(target: str) -> list[str]:
    if target.lower() == "all":
        return sorted(C.CORE_CLAIMS)
    C.get_claim(target)             # validates the id
    return [target.upper()]


def _cmd_certify(a) -> int:
    ids = _claim_ids(a.claim)
    certs = []
    for cid in ids:
        claim = C.get_claim(cid)
        cert = C.certify_cover(claim, a.depth, None if a.delta is None else 2.0 ** -a.delta, a.workers)
        certs.append(cert)
        doc = cert.to_doc()
        if a.out and len(ids) > 1:
            Path(a.out).mkdir(parents=True, exist_ok=True)
            _emit(doc, str(Path(a.out) / f"{cid}.json"))
        elif a.out:
            _emit(doc, a.out)
        print(f"{cid}: {cert.status} ({cert.cell_count} cells, depth {cert.max_depth})", file=sys.stderr)
        if cid == "F3" or cert.tangency_cells:
            print(f"{cid}: {len(cert.tangency_cells)} cells discharged at exact tangencies "
                  f"{[t.exact for t in cert.tangencies]}", file=sys.stderr)
        if a.svg:
            Path(a.svg).mkdir(parents=True, exist_ok=True)
            (Path(a.svg) / f"{cid}.svg").write_text(svg.claim_svg(claim, cert))
    if not a.out:
        _emit({"certificates": [c.to_doc() for c in certs]}, None)
    statuses = {c.status for c in certs}
    if C.REFUTED in statuses:
        return EXIT_FAIL
    if C.INCONCLUSIVE in statuses:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _cmd_oracle(a) -> int:
    fam = FS.read_family(a.input)
    cands = O.candidate_points(fam)
    tau, pts = O.exact_piercing_number(fam)
    _emit({"tau": tau, "points": [[p.x, p.y] for p in pts], "candidate_count": len(cands)}, a.out)
    return EXIT_OK


def _cmd_generate(a) -> int:
    spec = G.GenSpec(a.n, a.r, a.mode, a.shape_mix, a.seed, a.style, a.anchor_distance)
    try:
        fam = G.generate(spec)
    except G.GenerationFailed as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_FAIL
    _emit(FS.save_family(fam), a.out)
    return EXIT_OK


def _cmd_check(a) -> int:
    fam = FS.read_family(a.input)
    rep = pq.has_pq_property(fam, a.p, a.q)
    _emit({"p": a.p, "q": a.q, "holds": rep.holds,
           "witness": None if rep.witness is None else list(rep.witness)}, a.out)
    return EXIT_OK if rep.holds else EXIT_FAIL


def _cmd_render(a) -> int:
    doc = json.loads(Path(a.input).read_text())
    if "claim" in doc and "status" in doc:
        claim = C.get_claim(doc["claim"])
        cert = C.Certificate(doc["claim"], doc["status"], counterexample=doc.get("counterexample"),
                             tangencies=[C.Tangency(t["point"][0], t["point"][1], *t["d_range"], t["exact"],
                                                    t["cover_index"]) for t in doc.get("tangencies", [])])
        text = svg.claim_svg(claim, cert)
    elif doc.get("claim_id"):
        text = svg.claim_svg(C.get_claim(doc["claim_id"]))
    else:
        fam = FS.load_family(doc)
        text = svg.family_svg(fam, title=f"family ({len(fam)} sets, r={fam.r})")
    Path(a.svg).write_text(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fatpierce", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("pierce", help="pierce a family document")
    s.add_argument("input")
    s.add_argument("--out")
    s.add_argument("--svg")
    s.set_defaults(func=_cmd_pierce)

    s = sub.add_parser("certify", help="certify a cover claim (F1..F5, F2R, F4E) or 'all'")
    s.add_argument("claim")
    s.add_argument("--depth", type=int, default=None, help="max quadtree depth (claim default: 14)")
    s.add_argument("--delta", type=int, default=None, metavar="K", help="delta_min = 2**-K (claim default: 12)")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--svg", help="directory for one SVG per claim")
    s.add_argument("--out", help="certificate file, or directory when certifying several claims")
    s.set_defaults(func=_cmd_certify)

    s = sub.add_parser("oracle", help="exact piercing number of a small family")
    s.add_argument("input")
    s.add_argument("--out")
    s.set_defaults(func=_cmd_oracle)

    s = sub.add_parser("generate", help="random family with the (2,2) or (4,3) property")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--r", type=float, required=True)
    s.add_argument("--mode", choices=["22", "43"], default="22")
    s.add_argument("--shape-mix", type=float, default=0.5)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--style", choices=G.STYLES, default="auto")
    s.add_argument("--anchor-distance", type=float, default=None)
    s.add_argument("--out")
    s.set_defaults(func=_cmd_generate)

    s = sub.add_parser("check", help="test the (p, q) property")
    s.add_argument("input")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=_cmd_check)

    s = sub.add_parser("render", help="SVG of a family or certificate document")
    s.add_argument("input")
    s.add_argument("--svg", required=True)
    s.set_defaults(func=_cmd_render)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    try:
        return a.func(a)
    except (FS.FamilyFormatError, pq.ConvexityRequired, O.OracleLimit, KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
