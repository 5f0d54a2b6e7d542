"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 a theorem verdict disagreed with the
brute-force oracle.  Set ARTIFACT_WORKERS to run verify-sweep on several
processes; output order does not depend on it.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache

from . import factorize as fz
from . import gammal1 as gl
from .gf import make_field, parse_field_spec, subfield_degrees
from .linpoly import SpaceParams, index_sets, parse_index_set, parse_kind
from .polarspace import orbit_report, singer_elements, unipotent_generators

WORKERS_ENV = "ARTIFACT_WORKERS"
EXIT_OK, EXIT_USAGE, EXIT_MISMATCH = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- output ------------------------------------------------------------------

def _flat(v):
    if isinstance(v, (list, tuple, dict)):
        return json.dumps(v, sort_keys=True)
    return v


def emit(records, fmt: str, out=None) -> None:
    """Write a record or a list of records as json, csv or an aligned table."""
    out = sys.stdout if out is None else out
    if fmt == "json":
        json.dump(records, out, indent=2, sort_keys=True)
        out.write("\n")
        return
    rows = records if isinstance(records, list) else [records]
    if not rows:
        return
    keys = list(rows[0])
    if fmt == "csv":
        w = csv.DictWriter(out, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _flat(r.get(k)) for k in keys})
        return
    cells = [[str(_flat(r.get(k))) for k in keys] for r in rows]
    widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
    out.write("  ".join(k.ljust(w) for k, w in zip(keys, widths)).rstrip() + "\n")
    for c in cells:
        out.write("  ".join(x.ljust(w) for x, w in zip(c, widths)).rstrip() + "\n")


# -- argument helpers ----------------------------------------------------------

def _space_args(p):
    p.add_argument("--kind", required=True, help="unitary | oplus | sp")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--q", type=int, required=True)


def _params(args) -> SpaceParams:
    return SpaceParams(parse_kind(args.kind), args.m, args.q)


def _triple(text: str, params: SpaceParams) -> gl.FoulserTriple:
    return gl.parse_triple(text, params.p, params.degree)


def _overgroup(args, params: SpaceParams) -> fz.OvergroupSpec:
    if params.kind == "unitary":
        if args.ell is None:
            return fz.full_overgroup(params)
        return fz.unitary_overgroup(params.m, params.q, args.ell, args.d, args.e)
    if params.kind == "sp":
        return fz.full_overgroup(params) if args.e is None else fz.sp_overgroup(params.m, params.q, args.e)
    if args.outer is None:
        return fz.full_overgroup(params)
    gens = [tuple(int(x) for x in g.split(":")) for g in args.outer.split(",") if g]
    return fz.oplus_overgroup(params.m, params.q, gens)


def _overgroup_args(p):
    p.add_argument("--ell", type=int, help="unitary: O meets <delta> in <delta^ell>")
    p.add_argument("--d", type=int, help="unitary: O contains delta^d phi^e")
    p.add_argument("--e", type=int, help="unitary: phi-exponent; symplectic: G = Sp.<phi^e>")
    p.add_argument("--outer", help="orthogonal: generators x':x'':y separated by commas")


# -- commands ------------------------------------------------------------------

def cmd_field_info(args) -> int:
    p, f = parse_field_spec(args.field)
    F = make_field(p, f)
    rec = {
        "field": F.spec,
        "order": p**f,
        "modulus": list(F.modulus),
        "generator": F.format(F.generator),
        "subfields": list(subfield_degrees(F)),
    }
    emit(rec, args.format)
    return EXIT_OK


def _triple_record(t: gl.FoulserTriple) -> dict:
    return {
        "triple": t.serialize(),
        "order": gl.group_order(t),
        "transitive": gl.is_transitive(t),
        "minimal": gl.is_minimally_transitive(t),
        "regular": gl.is_regular(t),
    }


def cmd_enumerate(args) -> int:
    p, f = parse_field_spec(args.field)
    subs = gl.enumerate_subgroups(p, f, args.filter, args.class_modulus)
    emit([_triple_record(t) for t in subs], args.format)
    return EXIT_OK


def cmd_decide_transitive(args) -> int:
    p, f = parse_field_spec(args.field)
    t = gl.parse_triple(args.S, p, f)
    i = args.class_modulus
    verdict = gl.is_transitive(t) if i is None else gl.is_transitive_on_classes(t, i)
    rec = {"triple": t.serialize(), "class_modulus": i, "verdict": verdict}
    code = EXIT_OK
    if args.verify:
        rec["oracle_verdict"] = len(gl.orbit_oracle(t, i)) == 1
        rec["agree"] = rec["oracle_verdict"] == verdict
        code = EXIT_OK if rec["agree"] else EXIT_MISMATCH
    emit(rec, args.format)
    return code


def cmd_orbits(args) -> int:
    params = _params(args)
    I = parse_index_set(args.I, params)
    space = fz._space(params)
    gens = unipotent_generators(space, I)
    if args.S:
        gens += singer_elements(_triple(args.S, params))
    rep = orbit_report(space, gens)
    rep.update({"kind": params.kind, "m": params.m, "q": params.q, "I": I.serialize()})
    emit(rep, args.format)
    return EXIT_OK


def _hb_record(params, I, S, G, verify: bool) -> dict:
    dec = fz.decide_HB(params, I, S, G)
    rec = {
        "kind": params.kind, "m": params.m, "q": params.q, "I": I.serialize(),
        "S_triple": f"{S.ell}:{S.j}:{S.k}", "G": G.label(),
        "verdict": dec.verdict, "branch": dec.branch,
    }
    if verify:
        rec["oracle_verdict"] = fz.verify_by_orbits(params, I, S)
        rec["agree"] = dec.verdict is None or dec.verdict == rec["oracle_verdict"]
    return rec


def cmd_decide_hb(args) -> int:
    params = _params(args)
    I = parse_index_set(args.I, params)
    S = _triple(args.S, params)
    G = _overgroup(args, params)
    rec = _hb_record(params, I, S, G, args.verify)
    emit(rec, args.format)
    return EXIT_MISMATCH if args.verify and not rec["agree"] else EXIT_OK


def cmd_existence(args) -> int:
    params = _params(args)
    G = _overgroup(args, params)
    rec = {"kind": params.kind, "m": params.m, "q": params.q, "G": G.label(), "exists": fz.decide_existence_for_G(G)}
    code = EXIT_OK
    if args.verify:
        rec["oracle_exists"] = fz.existence_by_orbits(G)
        rec["agree"] = rec["oracle_exists"] == rec["exists"]
        code = EXIT_OK if rec["agree"] else EXIT_MISMATCH
    emit(rec, args.format)
    return code


def cmd_exactness(args) -> int:
    params = SpaceParams("sp", args.m, args.q)
    I = parse_index_set(args.I, params)
    S = _triple(args.S, params)
    rep = fz.exactness_check(params, I, S).to_dict()
    rep.update({"m": args.m, "q": args.q, "I": I.serialize(), "S_triple": f"{S.ell}:{S.j}:{S.k}"})
    emit(rep, args.format)
    return EXIT_OK


@lru_cache(maxsize=None)
def _specs(params: SpaceParams) -> list:
    return fz.overgroup_specs(params)


def _sweep_one(job):
    label, I_idx, S_text, G_index = job
    kind, m, q = label.split(",")
    params = SpaceParams(kind, int(m), int(q))
    G = _specs(params)[G_index]
    I = parse_index_set(I_idx, params)
    return _hb_record(params, I, gl.parse_triple(S_text, params.p, params.degree), G, True)


def cmd_verify_sweep(args) -> int:
    params = _params(args)
    specs = _specs(params)
    if args.all_overgroups:
        indices = list(range(len(specs)))
    else:
        # specs are compared by the outer group they generate, not by their generator lists
        full = fz.full_overgroup(params).outer
        indices = [next(i for i, G in enumerate(specs) if G.outer == full)]
    jobs = []
    for gi in indices:
        G = specs[gi]
        for I in index_sets(params):
            for S in fz.subgroups_in(G):
                jobs.append((params.label(), I.serialize(), f"{S.ell}:{S.j}:{S.k}", gi))
    if args.sample is not None and args.sample < len(jobs):
        rng = random.Random(args.seed)
        jobs = sorted(rng.sample(jobs, args.sample), key=jobs.index)
    workers = max(1, int(os.environ.get(WORKERS_ENV, "1")))
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            records = list(pool.map(_sweep_one, jobs, chunksize=8))
    else:
        records = [_sweep_one(j) for j in jobs]
    bad = [r for r in records if not r["agree"]]
    if args.summary:
        emit({"kind": params.kind, "m": params.m, "q": params.q, "pairs": len(records),
              "true": sum(1 for r in records if r["verdict"]), "disagreements": len(bad)}, args.format)
    else:
        emit(records, args.format)
    return EXIT_MISMATCH if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="artifact", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("json", "csv", "table"), default="table")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized sampling only")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("field-info", help="modulus, generator and subfields of F_(p^f)")
    p.add_argument("--field", required=True, help="p^f")
    p.set_defaults(func=cmd_field_info)

    p = sub.add_parser("enumerate", help="subgroups of GammaL_1(p^f) as Foulser triples")
    p.add_argument("--field", required=True)
    p.add_argument("--filter", choices=gl.FILTERS, default="all")
    p.add_argument("--class-modulus", type=int)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("decide-transitive", help="transitivity of a subgroup, arithmetically")
    p.add_argument("--field", required=True)
    p.add_argument("--S", required=True, help="l:j:k")
    p.add_argument("--class-modulus", type=int)
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_decide_transitive)

    p = sub.add_parser("orbits", help="orbits of U(I) (and S) on the point set")
    _space_args(p)
    p.add_argument("--I", required=True, help="comma-separated indices")
    p.add_argument("--S", help="l:j:k")
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("decide-hb", help="decide G = HB for H = U(I):S")
    _space_args(p)
    p.add_argument("--I", required=True)
    p.add_argument("--S", required=True)
    _overgroup_args(p)
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_decide_hb)

    p = sub.add_parser("existence", help="whether G admits some H with G = HB")
    _space_args(p)
    _overgroup_args(p)
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_existence)

    p = sub.add_parser("exactness", help="exact factorization check in the symplectic family")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--I", required=True)
    p.add_argument("--S", required=True)
    p.set_defaults(func=cmd_exactness)

    p = sub.add_parser("verify-sweep", help="theorem vs orbit oracle over every I and S")
    _space_args(p)
    p.add_argument("--all-overgroups", action="store_true")
    p.add_argument("--sample", type=int, help="check a seeded random sample of pairs")
    p.add_argument("--summary", action="store_true")
    p.set_defaults(func=cmd_verify_sweep)
    return parser


def run(argv=None, out=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if out is not None:
        old, sys.stdout = sys.stdout, out
    try:
        return args.func(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        if out is not None:
            sys.stdout = old


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
