"""Command line entry point: analyze, construct, verify, generate, experiment-psi.

Exit statuses: 0 success, 2 parse error, 3 hypotheses refused,
4 stage failure, 5 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import os
import sys
import time
from pathlib import Path

from .analysis import edge_connectivity, improving_cut_switch, verify_claim1, theorem_applies
from .core import switch
from .errors import (
    CertificateMismatch,
    HypothesisError,
    InvariantViolation,
    ParseError,
    ScaleBoundError,
    SignflowError,
    StageError,
)
from .generators import FAMILIES, family
from .io import graph_digest, parse_certificate, parse_graph, render_certificate, render_dot, render_graph
from .oracle import MAX_ORACLE_EDGES, circular_flow_number, verify_pq_flow
from .pipeline import construct_flow, replay

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_REFUSED = 3
EXIT_STAGE = 4
EXIT_VERIFY = 5

CSV_COLUMNS = ("instance", "n", "m", "lambda", "minneg", "essential", "phi_c_num", "phi_c_den", "within_bound")


def default_seed() -> int:
    raw = os.environ.get("SIGNFLOW_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"SIGNFLOW_SEED must be an integer, got {raw!r}")


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def _load_graph(path: str):
    try:
        return parse_graph(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


def cmd_analyze(args) -> int:
    g = _load_graph(args.graph)
    k = args.k
    ok, lam, rep = theorem_applies(g, k, seed=args.seed)
    print(f"vertices: {g.vertex_count}")
    print(f"edges: {g.m} ({len(g.negative_edges())} negative)")
    print(f"edge connectivity: {lam}")
    how = "exact" if rep.certified else "heuristic upper bound"
    print(f"least negative edges in switching class: {rep.min_negative_edges} ({how})")
    print(f"switch set achieving it: {' '.join(map(str, sorted(rep.achieving_switch))) or '(none)'}")
    odd = rep.min_odd_negative_edges
    print(f"least odd negative count: {'none (all members even)' if odd is None else odd}")
    print(f"{2 * k + 1}-unbalanced: {_yes(rep.is_unbalanced_2k1)}")
    print(f"essentially {2 * k + 1}-unbalanced: {_yes(rep.is_essentially_unbalanced_2k1)}")
    h = switch(g, rep.achieving_switch)
    claim = verify_claim1(h, k)
    note = ""
    if not claim and g.vertex_count <= 20:
        x = improving_cut_switch(h, k)
        if x is not None:
            note = f" (switching at {sorted(x)} removes negative edges)"
    print(f"positive part {6 * k}-edge connected after switching: {_yes(claim)}{note}")
    cmp = "≥" if lam >= 12 * k - 1 else "<"
    print(f"Theorem applies: {_yes(ok)} (λ={lam} {cmp} {12 * k - 1}, "
          f"essentially {2 * k + 1}-unbalanced: {_yes(rep.is_essentially_unbalanced_2k1)})")
    return EXIT_OK


def cmd_construct(args) -> int:
    g = _load_graph(args.graph)
    digest = graph_digest(g)
    out = Path(args.out) if args.out else Path(args.graph).with_suffix(".cert")
    manifest = {"subcommand": "construct", "input": str(args.graph), "input_digest": digest,
                "k": args.k, "seed": args.seed, "force": args.force}
    start = time.perf_counter()
    status = EXIT_OK
    try:
        cert = construct_flow(g, args.k, force=args.force, seed=args.seed)
    except HypothesisError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        manifest["outcome"] = {"stage": exc.stage, "error": str(exc)}
        status = EXIT_REFUSED
    except StageError as exc:
        print(f"stage failure: {exc}", file=sys.stderr)
        if exc.witness is not None:
            print(f"witness: {exc.witness}", file=sys.stderr)
        manifest["outcome"] = {"stage": exc.stage, "error": str(exc)}
        status = EXIT_STAGE
    manifest["timings"] = {"construct_seconds": round(time.perf_counter() - start, 6)}
    if status == EXIT_OK:
        out.write_text(render_certificate(cert, digest))
        manifest["certificate"] = str(out)
        manifest["outcome"] = {"stages": [s.name for s in cert.stages], "repairs": cert.repair_count,
                               "guaranteed": cert.guaranteed}
        print(f"wrote {out}: ({cert.p},{cert.q})-flow, {cert.repair_count} repair step(s)"
              + ("" if cert.guaranteed else ", hypotheses not met (forced)"))
        if args.emit_dot:
            Path(args.emit_dot).write_text(render_dot(cert.flow))
            manifest["dot"] = str(args.emit_dot)
    if args.manifest:
        Path(args.manifest).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return status


def cmd_verify(args) -> int:
    g = _load_graph(args.graph)
    try:
        text = Path(args.certificate).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {args.certificate}: {exc.strerror}") from exc
    data = parse_certificate(text)
    try:
        cert = data.bind(g)
    except CertificateMismatch as exc:
        print(f"FAIL: {exc}")
        return EXIT_VERIFY
    except SignflowError as exc:
        print(f"FAIL: {exc}")
        return EXIT_VERIFY
    if (data.p, data.q) != (2 * data.k + 1, data.k):
        print(f"FAIL: header p={data.p} q={data.q} does not match k={data.k}")
        return EXIT_VERIFY
    check = verify_pq_flow(g, cert.flow, data.p, data.q)
    if not check:
        print(f"FAIL: {check.violation}")
        return EXIT_VERIFY
    if not args.skip_replay:
        try:
            rebuilt = replay(g, data.k, data.stages)
        except (InvariantViolation, SignflowError, KeyError) as exc:
            print(f"FAIL: stage replay: {exc}")
            return EXIT_VERIFY
        if rebuilt != cert.flow:
            diff = next(i for i in range(g.m)
                        if (rebuilt.orientation.eta[i], rebuilt.values[i]) != (cert.flow.orientation.eta[i], cert.flow.values[i]))
            print(f"FAIL: stage replay gives a different flow on edge {diff}")
            return EXIT_VERIFY
        if len(data.stages) and data.repair_count != len(cert.stage("repair")["paths"]):
            print("FAIL: repair count differs from the recorded paths")
            return EXIT_VERIFY
    print(f"OK: valid ({data.p},{data.q})-flow" + ("" if args.skip_replay else ", stage replay matches"))
    return EXIT_OK


def cmd_generate(args) -> int:
    g = family(args.family, args.n, args.mult, args.signs, args.seed)
    lam = edge_connectivity(g) if g.vertex_count >= 2 else 0
    text = render_graph(g, [f"{args.family} n={args.n} mult={args.mult} signs={args.signs} seed={args.seed}",
                            f"edge connectivity {lam}"])
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"edge connectivity: {lam}", file=sys.stderr)
    return EXIT_OK


def _int_list(text: str) -> list[int]:
    """``"1-4"`` or ``"1,3,5"``; an empty range like ``"3-2"`` gives no values."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            a, b = part.split("-", 1) if not part.startswith("-") else part[1:].split("-", 1)
            out += list(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def psi_rows(k: int, families: list[str], ns: list[int], mults: list[int], signs: list[str], seeds: list[int],
             lam_min: int | None = None, lam_max: int | None = None, max_edges: int = MAX_ORACLE_EDGES):
    """Rows of the experiment CSV, in sweep order (family, n, mult, signs, seed)."""
    for fam in families:
        for n in (ns if fam != "triangle-multi" else [3]):
            for mult in mults:
                for pat in signs:
                    for seed in seeds:
                        name = f"{fam}:n={n}:mult={mult}:signs={pat}:seed={seed}"
                        try:
                            g = family(fam, n, mult, pat, seed)
                        except ValueError:
                            continue
                        lam = edge_connectivity(g) if g.vertex_count >= 2 else 0
                        if (lam_min is not None and lam < lam_min) or (lam_max is not None and lam > lam_max):
                            continue
                        _, _, rep = theorem_applies(g, k, seed=seed)
                        row = {"instance": name, "n": g.vertex_count, "m": g.m, "lambda": lam,
                               "minneg": rep.min_negative_edges,
                               "essential": _yes(rep.is_essentially_unbalanced_2k1)}
                        try:
                            res = circular_flow_number(g, max_edges=max_edges)
                        except ScaleBoundError:
                            row.update(phi_c_num="", phi_c_den="", within_bound="skipped: oracle bound")
                        else:
                            if res.phi_c is None:
                                row.update(phi_c_num="inf", phi_c_den="", within_bound="no")
                            else:
                                within = res.phi_c * k <= 2 * k + 1
                                row.update(phi_c_num=res.phi_c.numerator, phi_c_den=res.phi_c.denominator,
                                           within_bound=_yes(within))
                        yield row


def render_csv(rows) -> str:
    buf = _io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def cmd_experiment_psi(args) -> int:
    seeds = list(range(args.seed, args.seed + args.repeats))
    text = render_csv(psi_rows(args.k, args.family or ["triangle-multi"], _int_list(args.n), _int_list(args.mult),
                               args.signs or ["none"], seeds, args.lambda_min, args.lambda_max))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    seed = default_seed()
    p = argparse.ArgumentParser(prog="signflow", description="Build and check (2k+1,k)-flows on signed multigraphs.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="connectivity and unbalance report")
    a.add_argument("graph")
    a.add_argument("--k", type=int, default=1)
    a.add_argument("--seed", type=int, default=seed)
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("construct", help="run the construction and write a certificate")
    c.add_argument("graph")
    c.add_argument("--k", type=int, default=1)
    c.add_argument("--out", help="certificate path (default: graph path with .cert)")
    c.add_argument("--force", action="store_true", help="run even if the hypotheses fail")
    c.add_argument("--emit-dot", metavar="PATH", help="also write an annotated DOT file")
    c.add_argument("--manifest", metavar="PATH", help="write a JSON run manifest")
    c.add_argument("--seed", type=int, default=seed)
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="re-check a certificate against a graph")
    v.add_argument("graph")
    v.add_argument("certificate")
    v.add_argument("--skip-replay", action="store_true", help="only check the flow, not the stage records")
    v.set_defaults(func=cmd_verify)

    gen = sub.add_parser("generate", help="write a graph from a family")
    gen.add_argument("family", choices=FAMILIES)
    gen.add_argument("--n", type=int, default=4)
    gen.add_argument("--mult", type=int, default=1, help="edge multiplicity (degree for random-regular-multi)")
    gen.add_argument("--signs", default="none")
    gen.add_argument("--seed", type=int, default=seed)
    gen.add_argument("--out")
    gen.set_defaults(func=cmd_generate)

    e = sub.add_parser("experiment-psi", help="CSV sweep of oracle flow numbers against connectivity")
    e.add_argument("--k", type=int, default=1)
    e.add_argument("--family", action="append", choices=FAMILIES)
    e.add_argument("--n", default="3", help="vertex counts, e.g. 3-5 or 3,4")
    e.add_argument("--mult", default="1-4", help="multiplicities, e.g. 1-4")
    e.add_argument("--signs", action="append", help="sign patterns (repeatable)")
    e.add_argument("--seed", type=int, default=seed)
    e.add_argument("--repeats", type=int, default=1, help="seeds per instance: seed, seed+1, ...")
    e.add_argument("--lambda-min", type=int)
    e.add_argument("--lambda-max", type=int)
    e.add_argument("--out")
    e.set_defaults(func=cmd_experiment_psi)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "k", 1) < 1:
        print("error: k must be a positive integer", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ScaleBoundError as exc:
        print(f"scale bound: {exc}", file=sys.stderr)
        return EXIT_STAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
