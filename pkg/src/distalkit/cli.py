"""Batch experiment runner.

Every subcommand writes one JSON report (or a CSV of its per-trial rows) that
depends only on the configuration, so reruns are byte-identical.  Exit codes:
0 success, 1 a verified invariant failed, 2 invalid configuration.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable

from . import distal_cells as dc
from . import indiscernibles as ind
from . import type_chains as tc
from .errors import DistalKitError
from .generators import (
    perturbed,
    random_chain,
    random_diagonal_chain,
    random_hierarchical,
    random_map,
    random_padic_points,
    random_subset,
    random_tuple,
    trial_rng,
)
from .pl_core import format_rational, map_from_json, map_to_json, parse_rational, sup_distance
from .seh import (
    UltrametricCutter,
    extension_valuation,
    make_space,
    padic_space,
    refine_to_eps,
    rounds_needed,
    space_to_json,
    ultrametric_partition,
)

SCHEMA_VERSION = 1


class ConfigInvalid(Exception):
    pass


def _rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str) and value.lstrip("-").isdigit():
        return Fraction(int(value))
    try:
        return parse_rational(str(value))
    except (DistalKitError, ValueError) as exc:
        raise ConfigInvalid(f"not a canonical rational 'p/q': {value!r}") from exc


def _int_list(value) -> list[int]:
    if isinstance(value, list):
        return [int(v) for v in value]
    try:
        return [int(v) for v in str(value).split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigInvalid(f"expected comma-separated integers: {value!r}") from exc


def _load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigInvalid(f"cannot read JSON from {path}: {exc}") from exc


L_CHAIN = tc.make_chain([(0, 0), (1, 0), (1, 1)])


def _chain_arg(value) -> tc.Chain | None:
    if value is None:
        return None
    if value == "L":
        return L_CHAIN
    if value == "diagonal":
        return tc.diagonal(2)
    obj = value if isinstance(value, dict) else _load_json(value)
    return tc.chain_from_json(obj)


# subcommands; each returns (rows, summary, failed_invariant or None)


def cmd_seh_partition(cfg):
    r = _rational(cfg.r)
    rows, bad = [], 0
    if cfg.points is not None:
        space = padic_space(_int_list(cfg.points), cfg.p)
        instances = [(space, list(range(space.size)), list(range(space.size)), r, "padic")]
    else:
        instances = []
        for trial in range(cfg.trials):
            rng = trial_rng(cfg.seed, trial)
            if trial % 2 == 0:
                space = padic_space(random_padic_points(rng, cfg.size, cfg.p), cfg.p)
                kind = "padic"
            else:
                space = make_space(random_hierarchical(rng, cfg.size))
                kind = "hierarchical"
            A = random_subset(rng, range(cfg.size))
            B = random_subset(rng, range(cfg.size))
            rr = r if cfg.r_fixed else Fraction(rng.randint(0, 32), 32)
            instances.append((space, A, B, rr, kind))
    for trial, (space, A, B, rr, kind) in enumerate(instances):
        cert = ultrametric_partition(space, A, B, rr)
        ok = all(3 * q >= 1 for q in cert.fractions)
        bad += not ok
        row = {
            "trial": trial,
            "instance": kind,
            "size": space.size,
            "r": format_rational(rr),
            "side": cert.claim.side,
            "fractions": [format_rational(q) for q in cert.fractions],
            "fraction_bound_ok": ok,
        }
        if cfg.points is not None:
            row["subsets"] = [list(s) for s in cert.subsets]
            row["space"] = space_to_json(space)
        rows.append(row)
    return rows, {"instances": len(rows), "bound_failures": bad}, "fraction >= 1/3" if bad else None


def cmd_seh_refine(cfg):
    eps = _rational(cfg.eps)
    bound = Fraction(1, 3) ** rounds_needed(eps)
    rows, bad = [], 0
    for trial in range(cfg.trials):
        rng = trial_rng(cfg.seed, trial)
        space = padic_space(random_padic_points(rng, cfg.size, cfg.p), cfg.p)
        A = random_subset(rng, range(cfg.size))
        B = random_subset(rng, range(cfg.size))
        cert = refine_to_eps(UltrametricCutter(space), space.table(), eps, [A, B])
        ok = all(q >= bound for q in cert.fractions)
        bad += not ok
        rows.append({
            "trial": trial,
            "eps": format_rational(eps),
            "fractions": [format_rational(q) for q in cert.fractions],
            "fraction_bound": format_rational(bound),
            "fraction_bound_ok": ok,
        })
    return rows, {"instances": len(rows), "bound_failures": bad}, "refine fraction bound" if bad else None


def _cell_probes(rng, anchor, count, n):
    scales = (Fraction(1, 4 * n), Fraction(1, n), Fraction(1, 2))
    out = []
    for k in range(count):
        if k % 2 == 0:
            out.append(perturbed(rng, anchor, rng.choice(scales)))
        else:
            out.append(random_map(rng))
    return out


def _run_cell(cert, anchor, B, probes):
    report = dc.verify_cell(cert, anchor, B, probes + dc.critical_probes(cert, anchor, B))
    return report.to_json()


def cmd_cell_build(cfg):
    alpha = _rational(cfg.alpha)
    rows, failures = [], 0
    for trial in range(cfg.trials):
        rng = trial_rng(cfg.seed, trial)
        anchor = random_map(rng)
        B = random_tuple(rng, cfg.size)
        cert = dc.build_cell(alpha, cfg.grid_n, anchor, B)
        rep = _run_cell(cert, anchor, B, _cell_probes(rng, anchor, cfg.probes, cfg.grid_n))
        failures += not rep["passed"]
        rows.append({
            "trial": trial,
            "alpha": format_rational(alpha),
            "n": cfg.grid_n,
            "B_size": cfg.size,
            **rep,
            "cell": {
                "certificate": dc.certificate_to_json(cert),
                "anchor": map_to_json(anchor),
                "B": [map_to_json(b) for b in B],
            },
        })
    violations = sum(r["violations"] for r in rows)
    summary = {"trials": len(rows), "violations": violations, "failed_trials": failures}
    return rows, summary, "cell homogeneity bound 2/n" if failures else None


def cmd_cell_verify(cfg):
    if cfg.input is None:
        raise ConfigInvalid("cell-verify needs --input (a 'cell' object from a cell-build report)")
    obj = _load_json(cfg.input)
    if "results" in obj:
        obj = obj["results"][0]
    cell = obj.get("cell", obj)
    try:
        cert = dc.certificate_from_json(cell["certificate"])
        anchor = map_from_json(cell["anchor"])
        B = [map_from_json(b) for b in cell["B"]]
    except (KeyError, TypeError) as exc:
        raise ConfigInvalid(f"malformed cell input: {exc}") from exc
    rng = trial_rng(cfg.seed, 0)
    rep = _run_cell(cert, anchor, B, _cell_probes(rng, anchor, cfg.probes, cert.n))
    return [rep], {"violations": rep["violations"]}, None if rep["passed"] else "cell homogeneity bound 2/n"


def _chain_pairs(cfg):
    if cfg.input is not None:
        obj = _load_json(cfg.input)
        return [(tc.chain_from_json(obj["c1"]), tc.chain_from_json(obj["c2"]))]
    pairs = []
    for trial in range(cfg.trials):
        rng = trial_rng(cfg.seed, trial)
        pairs.append((random_chain(rng, cfg.grid_n), random_chain(rng, cfg.grid_n)))
    return pairs


def cmd_type_distance(cfg):
    rows = []
    for trial, (c1, c2) in enumerate(_chain_pairs(cfg)):
        rows.append({
            "trial": trial,
            "dim": c1.dim,
            "distance": format_rational(tc.hausdorff_distance(c1, c2)),
        })
    return rows, {"pairs": len(rows)}, None


def cmd_coupling(cfg):
    rows, bad = [], 0
    for trial, (c1, c2) in enumerate(_chain_pairs(cfg)):
        h = tc.hausdorff_distance(c1, c2)
        fs, gs = tc.optimal_coupling(c1, c2)
        attained = max(sup_distance(f, g) for f, g in zip(fs, gs))
        ok = attained == h and tc.image_chain(fs) == c1 and tc.image_chain(gs) == c2
        bad += not ok
        rows.append({
            "trial": trial,
            "distance": format_rational(h),
            "attained": format_rational(attained),
            "exact": ok,
            "f": [map_to_json(f) for f in fs],
            "g": [map_to_json(g) for g in gs],
        })
    return rows, {"pairs": len(rows), "failures": bad}, "coupling attains the distance" if bad else None


def cmd_indiscernible_build(cfg):
    given = _chain_arg(cfg.chain)
    rows, bad = [], 0
    for trial in range(1 if given is not None else cfg.trials):
        p = given if given is not None else random_diagonal_chain(trial_rng(cfg.seed, trial))
        seq = ind.build_indiscernible(p, cfg.size)
        indisc = ind.is_indiscernible(seq)
        distal = ind.base_change_check(*seq.elements[:5]) if cfg.size >= 5 else None
        ok = indisc and distal is not False
        if cfg.size >= 2:
            ok = ok and ind.pair_type(seq, 0, 1) == p
        bad += not ok
        rows.append({
            "trial": trial,
            "pair_type": tc.chain_to_json(p),
            "n": cfg.size,
            "is_indiscernible": indisc,
            "distal_check": distal,
            "sequence": ind.sequence_to_json(seq),
        })
    return rows, {"sequences": len(rows), "failures": bad}, "indiscernible construction" if bad else None


def cmd_indiscernible_check(cfg):
    if cfg.input is None:
        raise ConfigInvalid("indiscernible-check needs --input (a sequence JSON)")
    obj = _load_json(cfg.input)
    if "results" in obj:
        obj = obj["results"][0]
    try:
        seq = ind.sequence_from_json(obj.get("sequence", obj))
    except (KeyError, TypeError) as exc:
        raise ConfigInvalid(f"malformed sequence input: {exc}") from exc
    row = {"length": len(seq.elements), "is_indiscernible": ind.is_indiscernible(seq)}
    if len(seq.elements) >= 2 and seq.arity == 1:
        p = ind.pair_type(seq, 0, 1)
        row["pair_type"] = tc.chain_to_json(p)
        row["diagonal_condition"] = ind.diagonal_condition(p)
    return [row], {"is_indiscernible": row["is_indiscernible"]}, None


def cmd_axioms_check(cfg):
    rows, bad = [], 0
    for trial in range(cfg.trials):
        rng = trial_rng(cfg.seed, trial)
        f, g = random_map(rng), random_map(rng)
        a, b = sorted(Fraction(rng.randint(0, 32), 32) for _ in range(2))
        pa, pb = tc.phi_alpha(f, g, a), tc.phi_alpha(f, g, b)
        symmetric = pa + tc.phi_alpha(g, f, a) == a
        monotone = pa <= pb and pb - pa <= b - a
        f2 = perturbed(rng, f, Fraction(1, 8))
        g2 = perturbed(rng, g, Fraction(1, 8))
        lip = abs(tc.phi_alpha(f2, g2, a) - pa) <= max(sup_distance(f, f2), sup_distance(g, g2))
        ok = symmetric and monotone and lip
        bad += not ok
        rows.append({
            "trial": trial,
            "alpha": format_rational(a),
            "beta": format_rational(b),
            "sum_rule": symmetric,
            "monotone": monotone,
            "lipschitz": lip,
        })
    return rows, {"audits": len(rows), "violations": bad}, "phi_alpha axiom schema" if bad else None


def cmd_valuation(cfg):
    if cfg.min_poly is not None:
        if cfg.coords is None:
            raise ConfigInvalid("--coords is required with --min-poly")
        coords = [_rational(c) for c in str(cfg.coords).split(",")]
        v = extension_valuation(_int_list(cfg.min_poly), coords, cfg.p)
        return [{"min_poly": _int_list(cfg.min_poly), "coords": [format_rational(c) for c in coords],
                 **v.to_json()}], {}, None
    if cfg.points is None:
        raise ConfigInvalid("valuation needs --points or --min-poly")
    space = padic_space(_int_list(cfg.points), cfg.p)
    return [{"points": _int_list(cfg.points), "p": cfg.p, "space": space_to_json(space)}], {}, None


COMMANDS: dict[str, Callable] = {
    "seh-partition": cmd_seh_partition,
    "seh-refine": cmd_seh_refine,
    "cell-build": cmd_cell_build,
    "cell-verify": cmd_cell_verify,
    "type-distance": cmd_type_distance,
    "coupling": cmd_coupling,
    "indiscernible-build": cmd_indiscernible_build,
    "indiscernible-check": cmd_indiscernible_check,
    "axioms-check": cmd_axioms_check,
    "valuation": cmd_valuation,
}

DEFAULTS = {
    "seed": 0,
    "trials": 10,
    "grid_n": 8,
    "alpha": "1/2",
    "size": 20,
    "probes": 1000,
    "out": None,
    "format": "json",
    "r": None,
    "eps": "1/4",
    "p": 2,
    "points": None,
    "min_poly": None,
    "coords": None,
    "chain": None,
    "input": None,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="distalkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="JSON file whose keys override the flags")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--trials", type=int)
        sp.add_argument("--grid-n", type=int, help="grid size n for cells, dimension for chains")
        sp.add_argument("--alpha")
        sp.add_argument("--size", type=int, help="instance size, |B|, or sequence length")
        sp.add_argument("--probes", type=int)
        sp.add_argument("--out")
        sp.add_argument("--format", choices=["json", "csv"])
        sp.add_argument("--r", help="threshold radius; random per trial when omitted")
        sp.add_argument("--eps")
        sp.add_argument("--p", type=int)
        sp.add_argument("--points", help="comma-separated integers")
        sp.add_argument("--min-poly", help="monic polynomial, ascending integer coefficients")
        sp.add_argument("--coords", help="comma-separated rationals in the power basis")
        sp.add_argument("--chain", help="'L', 'diagonal' or a chain JSON file")
        sp.add_argument("--input", help="JSON input file")
    return parser


def resolve_config(args: argparse.Namespace) -> argparse.Namespace:
    values = dict(DEFAULTS)
    values.update({k: v for k, v in vars(args).items() if k in DEFAULTS and v is not None})
    if args.config:
        overrides = _load_json(args.config)
        if not isinstance(overrides, dict):
            raise ConfigInvalid("config file must hold a JSON object")
        unknown = set(overrides) - set(DEFAULTS)
        if unknown:
            raise ConfigInvalid(f"unknown config keys: {sorted(unknown)}")
        values.update(overrides)
    if values["format"] not in ("json", "csv"):
        raise ConfigInvalid(f"unknown format {values['format']!r}")
    for key in ("seed", "trials", "grid_n", "size", "probes", "p"):
        if not isinstance(values[key], int) or isinstance(values[key], bool):
            raise ConfigInvalid(f"{key} must be an integer")
    for key in ("trials", "grid_n", "size", "p"):
        if values[key] < 1:
            raise ConfigInvalid(f"{key} must be positive")
    if values["probes"] < 0:
        raise ConfigInvalid("probes must be nonnegative")
    values["r_fixed"] = values["r"] is not None
    if values["r"] is None:
        values["r"] = "1/2"
    return argparse.Namespace(command=args.command, **values)


def _csv_text(rows: list[dict]) -> str:
    scalar = lambda v: v is None or isinstance(v, (bool, int, str))
    cols = []
    for row in rows:
        for k, v in row.items():
            if k not in cols and (scalar(v) or (isinstance(v, list) and all(map(scalar, v)))):
                cols.append(k)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: ";".join(map(str, v)) if isinstance(v, list) else v for k, v in row.items()})
    return buf.getvalue()


def run_command(cfg: argparse.Namespace) -> tuple[int, dict]:
    config = {k: v for k, v in vars(cfg).items() if k not in ("out", "format", "r_fixed")}
    try:
        rows, summary, failed = COMMANDS[cfg.command](cfg)
    except ConfigInvalid:
        raise
    except DistalKitError as exc:
        raise ConfigInvalid(f"{type(exc).__name__}: {exc}") from exc
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": cfg.command,
        "config": config,
        "summary": summary,
        "results": rows,
        "status": "fail" if failed else "ok",
        "violated_invariant": failed,
    }
    return (1 if failed else 0), report


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        code, report = run_command(cfg)
    except ConfigInvalid as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if cfg.format == "csv":
        _emit(_csv_text(report["results"]), cfg.out)
    else:
        _emit(json.dumps(report, sort_keys=True, indent=2) + "\n", cfg.out)
    if code:
        print(f"verification failed: {report['violated_invariant']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
