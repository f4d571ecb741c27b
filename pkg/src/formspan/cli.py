"""Command-line driver: polynomials, tables, series, and identity checks.

Reports are JSON-serializable dicts with deterministically sorted keys, so
identical inputs and flags produce byte-identical --out files.  Wall time
goes to stderr only, never into the report.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time

from . import matroid, prodspan, reciprocal, spanning, tutte
from .configs import ConfigError, VectorConfig, make_config, parse_config
from .exact import GF, QQ, FieldSpec


def parse_field_string(s: str) -> FieldSpec:
    t = s.strip().upper()
    if t in ("Q", "QQ"):
        return QQ
    if t.startswith("GF"):
        digits = t[2:].strip("()")
        if digits.isdigit():
            return GF(int(digits))
    raise ConfigError(f"cannot parse field {s!r} (use Q, GF2, GF(7), ...)")


def field_name(field: FieldSpec) -> str:
    return f"GF({field.p})" if field.kind == "GF" else "Q"


def random_config(field: FieldSpec, n: int, ell: int, rng: random.Random) -> VectorConfig:
    """Seed-deterministic random configuration, never of rank zero.

    GF(p) entries are uniform in the field; over Q they are uniform small
    integers in [-2, 2].
    """
    while True:
        if field.kind == "GF":
            rows = [[rng.randrange(field.p) for _ in range(ell)] for _ in range(n)]
        else:
            rows = [[rng.randint(-2, 2) for _ in range(ell)] for _ in range(n)]
        if any(any(r) for r in rows):
            return make_config(field, rows)


# -- serialization helpers ---------------------------------------------------


def poly_json(p: tutte.BivariatePoly) -> dict:
    return {
        "coefficients": {f"x^{a} y^{b}": c for (a, b), c in p.sorted_terms()},
        "pretty": p.pretty(),
    }


def table_json(dt: prodspan.DimTable) -> list:
    by_flat = {}
    for (X, k), d in dt.entries.items():
        by_flat.setdefault(X, {})[k] = d
    out = []
    for X in sorted(dt.ranks, key=lambda f: (dt.ranks[f], len(f), sorted(f))):
        out.append(
            {
                "flat": sorted(X),
                "rank": dt.ranks[X],
                "dims": {str(k): d for k, d in sorted(by_flat.get(X, {}).items())},
            }
        )
    return out


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _base_report(command: str, cfg: VectorConfig, digest: str) -> dict:
    return {
        "command": command,
        "input": {"sha256": digest},
        "field": field_name(cfg.field),
        "n": cfg.n,
        "ell": cfg.ell,
    }


def _load(path: str) -> tuple[VectorConfig, str]:
    with open(path, "rb") as f:
        data = f.read()
    return parse_config(data.decode()), _digest(data)


# -- subcommands ---------------------------------------------------------------


def cmd_tutte(args) -> tuple[dict, bool]:
    cfg, digest = _load(args.config)
    report = _base_report("tutte", cfg, digest)
    methods = {
        "dc": tutte.tutte_dc,
        "state-sum": tutte.tutte_corank_nullity,
        "activities": tutte.tutte_activities,
    }
    wanted = list(methods) if args.method == "all" else [args.method]
    results = {name: methods[name](cfg) for name in wanted}
    report["results"] = {name: poly_json(p) for name, p in results.items()}
    ok = True
    if args.method == "all":
        polys = list(results.values())
        agree = all(p == polys[0] for p in polys)
        report["holds"] = {"methods_agree": agree}
        ok = agree
    return report, ok


def cmd_decompose(args) -> tuple[dict, bool]:
    cfg, digest = _load(args.config)
    report = _base_report("decompose", cfg, digest)
    dt = prodspan.dim_table(cfg)
    t = tutte.tutte_dc(cfg)
    main = prodspan.verify_main(cfg, dt=dt, t=t)
    report["results"] = {
        "dim_table": table_json(dt),
        "H": poly_json(main["lhs"]),
        "tutte_shifted": poly_json(main["rhs"]),
        "total_dimension": dt.total_dimension(),
    }
    report["holds"] = {"main_identity": main["holds"]}
    return report, main["holds"]


def cmd_hilbert(args) -> tuple[dict, bool]:
    cfg, digest = _load(args.config)
    report = _base_report("hilbert", cfg, digest)
    dt = prodspan.dim_table(cfg)
    series = prodspan.hilbert_P(cfg, dt=dt)  # raises on internal mismatch
    nindep = len(matroid.independent_sets(cfg))
    report["results"] = {
        "coefficients": list(series),
        "total_dimension": sum(series),
        "independent_sets": nindep,
    }
    ok = sum(series) == nindep
    report["holds"] = {"dimension_counts_independents": ok}
    return report, ok


def cmd_recip(args) -> tuple[dict, bool]:
    cfg, digest = _load(args.config)
    report = _base_report("recip", cfg, digest)
    check = reciprocal.verify_terao(cfg, args.trunc)
    series = reciprocal.terao_series(cfg, args.trunc)
    report["results"] = {
        "coefficients": list(series.total),
        "level_sums": check["sums"],
        "per_flat": {
            ",".join(map(str, sorted(X))) or "{}": list(s)
            for X, s in series.per_flat.items()
        },
    }
    report["holds"] = {"terao": check["holds"]}
    return report, check["holds"]


def cmd_spanning(args) -> tuple[dict, bool]:
    cfg, digest = _load(args.config)
    report = _base_report("spanning", cfg, digest)
    dt = prodspan.dim_table(cfg)
    ver = spanning.verify_spanning(cfg, dt=dt)
    hcheck = spanning.h_polynomial_check(cfg, dt=dt)
    report["results"] = {
        "max_spanned_degree": ver["max_spanned_degree"],
        "min_cocircuit_size": ver["min_cocircuit_size"],
        "h_coefficients": list(hcheck["h"]),
        "leading": hcheck["leading"],
    }
    ok = ver["holds"] and hcheck["identity_holds"]
    report["holds"] = {
        "spanning": ver["holds"],
        "h_identity": hcheck["identity_holds"],
    }
    return report, ok


def run_identity_suite(cfg: VectorConfig) -> dict:
    """The per-configuration checks behind `verify`: all must hold."""
    dt = prodspan.dim_table(cfg)
    t = tutte.tutte_dc(cfg)
    out = {
        "main_identity": prodspan.verify_main(cfg, dt=dt, t=t)["holds"],
        "spanning": spanning.verify_spanning(cfg, dt=dt)["holds"],
        "nbc_dims": prodspan.nbc_dim_check(cfg, dt=dt, t=t)["holds"],
        "activity_basis": prodspan.verify_activity_basis(cfg)["holds"],
    }
    prodspan.hilbert_P(cfg, dt=dt, t=t)  # raises on mismatch
    out["hilbert_consistent"] = True
    return out


def cmd_verify(args) -> tuple[dict, bool]:
    n, ell, field_s, trials = args.random
    n, ell, trials = int(n), int(ell), int(trials)
    field = parse_field_string(field_s)
    rng = random.Random(args.seed)
    params = f"random n={n} ell={ell} field={field_name(field)} trials={trials} seed={args.seed}"
    cases = []
    ok = True
    for idx in range(trials):
        cfg = random_config(field, n, ell, rng)
        flags = run_identity_suite(cfg)
        good = all(flags.values())
        ok = ok and good
        cases.append(
            {
                "case": idx,
                "vectors": [[str(v) for v in f] for f in cfg.forms],
                "holds": flags,
            }
        )
    report = {
        "command": "verify",
        "input": {"sha256": _digest(params.encode()), "params": params},
        "field": field_name(field),
        "n": n,
        "ell": ell,
        "results": {"cases": cases},
        "holds": {"all": ok},
    }
    return report, ok


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="formspan",
        description="Exact Tutte polynomials and graded spans of products of linear forms",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p, with_config=True):
        if with_config:
            p.add_argument("config", help="JSON configuration file")
        p.add_argument("--out", help="write the JSON report here")

    p = sub.add_parser("tutte", help="Tutte polynomial by one or all methods")
    add_common(p)
    p.add_argument(
        "--method",
        choices=["dc", "state-sum", "activities", "all"],
        default="all",
    )
    p.set_defaults(func=cmd_tutte)

    p = sub.add_parser("decompose", help="cell dimension table and main identity")
    add_common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("hilbert", help="Hilbert series of the span of products")
    add_common(p)
    p.set_defaults(func=cmd_hilbert)

    p = sub.add_parser("recip", help="reciprocal algebra dimensions and series")
    add_common(p)
    p.add_argument("--trunc", type=int, default=3)
    p.set_defaults(func=cmd_recip)

    p = sub.add_parser("spanning", help="symmetric power containment check")
    add_common(p)
    p.set_defaults(func=cmd_spanning)

    p = sub.add_parser("verify", help="identity suite on seeded random inputs")
    p.add_argument(
        "--random",
        nargs=4,
        metavar=("N", "ELL", "FIELD", "TRIALS"),
        required=True,
    )
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", help="write the JSON report here")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        report, ok = args.func(args)
    except (ConfigError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    payload = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as f:
            f.write(payload)
    else:
        sys.stdout.write(payload)
    elapsed = time.perf_counter() - started
    print(f"[formspan {report['command']}] ok={ok} ({elapsed:.3f}s)", file=sys.stderr)
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
