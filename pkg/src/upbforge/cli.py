"""Command-line front end.

Each subcommand writes a JSON report (and CSV artifacts where applicable)
into the output directory and prints a short human-readable summary
rendered from the same payload.  Reports are deterministic under a pinned
seed: the only varying key is the top-level ``timestamp``.

Exit codes: 0 all checks passed, 1 a scientific check failed, 2 usage
error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .linalg import DEFAULT_TOL, Tolerances
from .uom import (
    Partition,
    builtin_a,
    builtin_a_tilde,
    enumerate_merge_pairs,
    instantiate,
    merge,
    parse_uom,
    random_assignment,
    verify_symbolic_orthogonality,
)
from .merge_analysis import (
    classify_zero_quadruples,
    closed_form_det_roots,
    closed_form_quadruple_det,
    find_witness,
    min_overlap_product,
    pair_submatrix,
    zero_quintuples,
    SearchBudgetExceeded,
)
from .ppt import (
    builtin_upb,
    build_state,
    ppt_report,
    projector_from_set,
    state_diagnostics,
    write_state_csv,
)
from .geom import merged_measure, random_sampling, steepest_descent, to_ebits


@dataclass(frozen=True)
class RunConfig:
    """Knobs shared by all subcommands."""

    seed: int = 0
    samples: int = 100_000
    starts: int = 200
    output_dir: str = "."
    tolerances: Tolerances = field(default_factory=lambda: DEFAULT_TOL)

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def as_record(self) -> dict:
        # output_dir is deliberately not echoed: reports must be
        # byte-identical across runs that differ only in destination
        return {
            "seed": self.seed,
            "samples": self.samples,
            "starts": self.starts,
            "tolerances": {
                "orthogonality": self.tolerances.orthogonality,
                "psd": self.tolerances.psd,
                "witness": self.tolerances.witness,
                "gradient": self.tolerances.gradient,
            },
        }


def write_report(cfg: RunConfig, command: str, results: dict, passed: bool) -> dict:
    report = {
        "command": command,
        "version": __version__,
        "config": cfg.as_record(),
        "results": results,
        "pass": passed,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    path = os.path.join(cfg.output_dir, command.replace("-", "_") + ".json")
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return report


def _write_csv(cfg: RunConfig, name: str, header: list, rows) -> str:
    path = os.path.join(cfg.output_dir, name)
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(repr(c) if isinstance(c, float) else str(c) for c in row) + "\n")
    return path


# ---------------------------------------------------------------- verify-upb


def _load_uom(choice: str):
    if choice == "A":
        return builtin_a()
    if choice == "A-tilde":
        return builtin_a_tilde()
    with open(choice) as fh:
        return parse_uom(fh.read(), provenance=choice)


def cmd_verify_upb(cfg: RunConfig, uom_choice: str) -> int:
    checks = []
    if uom_choice in ("A", "A-tilde"):
        grids = [("A", builtin_a()), ("A-tilde", builtin_a_tilde())]
    else:
        grids = [(uom_choice, _load_uom(uom_choice))]
    for name, grid in grids:
        violations = verify_symbolic_orthogonality(grid)
        checks.append({"name": name, "violations": [list(p) for p in violations]})

    # A-tilde must be a row/column permutation of A, entry for entry
    permutation_ok = None
    if uom_choice == "A-tilde":
        a = builtin_a()
        at = builtin_a_tilde()
        from .uom import A_TILDE_COLUMN_ORDER, A_TILDE_ROW_ORDER

        permutation_ok = all(
            at.entry(r + 1, c + 1).symbol_id == a.entry(A_TILDE_ROW_ORDER[r], A_TILDE_COLUMN_ORDER[c]).symbol_id
            and at.entry(r + 1, c + 1).primed == a.entry(A_TILDE_ROW_ORDER[r], A_TILDE_COLUMN_ORDER[c]).primed
            for r in range(11)
            for c in range(7)
        )

    pset = builtin_upb()
    gram = pset.gram()
    off = gram - np.eye(len(gram))
    concrete = {
        "n_vectors": pset.n_vectors,
        "max_pairwise_overlap": float(np.abs(off).max()),
        "worst_norm_deviation": float(np.abs(np.diag(gram) - 1).max()),
    }
    passed = (
        all(not c["violations"] for c in checks)
        and concrete["max_pairwise_overlap"] <= cfg.tolerances.orthogonality
        and concrete["worst_norm_deviation"] <= cfg.tolerances.unit_norm
        and permutation_ok is not False
    )
    results = {"uom_checks": checks, "concrete": concrete}
    if permutation_ok is not None:
        results["permutation_of_A"] = permutation_ok
    report = write_report(cfg, "verify-upb", results, passed)
    for c in checks:
        status = "ok" if not c["violations"] else "violating pairs %s" % c["violations"]
        print("symbolic %-10s %s" % (c["name"], status))
    print("concrete set: max overlap %.3e, worst norm dev %.3e" % (
        concrete["max_pairwise_overlap"], concrete["worst_norm_deviation"]))
    print("PASS" if report["pass"] else "FAIL")
    return 0 if report["pass"] else 1


# ------------------------------------------------------------------ classify


def cmd_classify(cfg: RunConfig, pair: tuple) -> int:
    u = builtin_a()
    sub = pair_submatrix(u, pair)
    cls = classify_zero_quadruples(sub, samples=20, tol=cfg.tolerances.zero_det, rng=cfg.rng())
    quint = zero_quintuples(cls)
    results = {
        "pair": list(pair),
        "zero_quadruples": [list(qd) for qd in cls.sorted_quadruples()],
        "n_zero_quadruples": len(cls.zero_quadruples),
        "zero_quintuples": [list(qt) for qt in quint],
        "samples": cls.samples,
        "tol": cls.tolerance,
    }
    write_report(cfg, "classify", results, True)
    print("pair (%d,%d): %d zero quadruples, %d zero quintuples" % (
        pair[0], pair[1], results["n_zero_quadruples"], len(quint)))
    return 0


# ---------------------------------------------------------------- partitions


def _set_partitions(n_blocks: int):
    """All partitions of systems 1..7 into exactly n_blocks blocks."""
    systems = list(range(1, 8))

    def rec(i, blocks):
        if i == len(systems):
            if len(blocks) == n_blocks:
                yield Partition(tuple(tuple(b) for b in blocks))
            return
        # bound: remaining systems must be able to reach n_blocks
        if len(blocks) + (len(systems) - i) < n_blocks:
            return
        s = systems[i]
        for b in blocks:
            b.append(s)
            yield from rec(i + 1, blocks)
            b.pop()
        if len(blocks) < n_blocks:
            blocks.append([s])
            yield from rec(i + 1, blocks)
            blocks.pop()

    yield from rec(0, [])


def cmd_partitions(cfg: RunConfig, scope: str) -> int:
    u = builtin_a()
    pset = instantiate(u, random_assignment(u, cfg.rng()))
    if scope == "pairs":
        parts = [Partition.merge_pair(i, j) for (i, j) in enumerate_merge_pairs()]
        expected_none = {Partition.merge_pair(1, 2), Partition.merge_pair(2, 3)}
    else:
        n = int(scope)
        parts = list(_set_partitions(n))
        # six blocks leaves exactly the two merged-pair exceptions
        expected_none = (
            {Partition.merge_pair(1, 2), Partition.merge_pair(2, 3)} if n == 6 else set()
        )

    entries = []
    mismatches = 0
    for p in parts:
        try:
            w = find_witness(pset, p, tol=cfg.tolerances)
        except SearchBudgetExceeded:
            entries.append({"partition": str(p), "witness": None, "budget_exhausted": True})
            mismatches += 1
            continue
        entry = {"partition": str(p), "witness": w is not None}
        if w is not None:
            entry["max_residual"] = w.max_residual
        else:
            m = merge(pset, p)
            corro = min_overlap_product(m, p, starts=cfg.starts, rng=cfg.rng())
            entry["min_overlap"] = corro.value
        entries.append(entry)
        expected = frozenset(p.blocks) not in {frozenset(q.blocks) for q in expected_none}
        if entry["witness"] != expected:
            mismatches += 1
    results = {
        "scope": scope,
        "n_partitions": len(parts),
        "n_witnesses": sum(1 for e in entries if e.get("witness")),
        "entries": entries,
        "mismatches": mismatches,
    }
    passed = mismatches == 0
    write_report(cfg, "partitions", results, passed)
    print("scope %s: %d/%d partitions have a witness (expected %d)" % (
        scope, results["n_witnesses"], len(parts), len(parts) - len(expected_none)))
    print("PASS" if passed else "FAIL")
    return 0 if passed else 1


# --------------------------------------------------------------------- state


def cmd_state(cfg: RunConfig) -> int:
    pset = builtin_upb()
    alpha = build_state(pset, tol=cfg.tolerances)
    diag = state_diagnostics(alpha, tol=cfg.tolerances)
    rep = ppt_report(alpha, tol=cfg.tolerances)
    csv_path = os.path.join(cfg.output_dir, "state.csv")
    write_state_csv(alpha, csv_path)
    results = {
        "trace": diag["trace"],
        "rank": diag["rank"],
        "eigenvalue_min": diag["eigenvalue_min"],
        "eigenvalue_max": diag["eigenvalue_max"],
        "ppt_minimum": rep.minimum,
        "ppt_cuts": rep.as_records(),
        "state_csv": os.path.basename(csv_path),
    }
    passed = (
        abs(diag["trace"] - 1) <= 1e-12
        and diag["rank"] == 117
        and rep.is_ppt
    )
    write_report(cfg, "state", results, passed)
    print("trace %.15f, rank %d, PPT minimum over %d cuts %.3e" % (
        diag["trace"], diag["rank"], len(rep.cuts), rep.minimum))
    print("PASS" if passed else "FAIL")
    return 0 if passed else 1


# ------------------------------------------------------------------- measure


def cmd_measure(cfg: RunConfig, method: str, partition: Partition, complex_mode: bool) -> int:
    pset = builtin_upb()
    q = projector_from_set(pset, tol=cfg.tolerances)
    records = []
    failures = []

    descent_res = None
    if method in ("descent", "all"):
        dres = steepest_descent(q, gtol=cfg.tolerances.gradient)
        descent_res = dres.result
        rec = descent_res.as_record()
        rec["seed"] = cfg.seed
        records.append(rec)
        _write_csv(
            cfg,
            "descent_trace.csv",
            ["iter", "f", "G", "grad_norm"],
            [(s.iteration, s.value, to_ebits(s.value), s.grad_norm) for s in dres.trace],
        )
        if not descent_res.converged:
            failures.append("descent did not converge")

    if method in ("sampling", "all"):
        sres = random_sampling(q, cfg.samples, rng=cfg.rng())
        rec = sres.result.as_record()
        rec["seed"] = cfg.seed
        records.append(rec)
        _write_csv(
            cfg,
            "sampling_values.csv",
            ["sample_index", "G_value"],
            [(i, g) for i, g in enumerate(sres.ebit_values)],
        )
        if descent_res is not None:
            if sres.result.ebits < descent_res.ebits - 1e-9:
                failures.append("sampling beat the descent minimum")
            if abs(sres.result.ebits - descent_res.ebits) > 0.02:
                failures.append("sampling and descent differ by more than 0.02 ebits")

    if method in ("alternating", "all"):
        ares = merged_measure(
            partition, starts=cfg.starts, rng=cfg.rng(), pset=pset, complex_field=complex_mode
        )
        rec = ares.as_record()
        rec["seed"] = cfg.seed
        records.append(rec)
        if descent_res is not None and ares.q_star > descent_res.q_star + 1e-9:
            failures.append("alternating stayed above the descent minimum")

    results = {"method": method, "records": records, "failures": failures}
    passed = not failures
    write_report(cfg, "measure", results, passed)
    for rec in records:
        print("%-12s q_star %.6e  G %.6f ebits" % (rec["method"], rec["q_star"], rec["G_ebits"]))
    print("PASS" if passed else "FAIL: " + "; ".join(failures))
    return 0 if passed else 1


# ---------------------------------------------------------------------- fig1


def cmd_fig1(cfg: RunConfig, a1: float, a2: float, a3: float, b1: float) -> int:
    n_grid = 10_000
    b2 = np.linspace(0.0, 2 * np.pi, n_grid, endpoint=False)
    det = closed_form_quadruple_det(a1, a2, a3, b1, b2)
    _write_csv(cfg, "det_scan.csv", ["b2", "det"], zip(b2.tolist(), det.tolist()))
    roots = closed_form_det_roots(a1, a2, a3, b1, n_grid=n_grid)
    results = {
        "params": {"a1": a1, "a2": a2, "a3": a3, "b1": b1},
        "n_grid": n_grid,
        "roots": list(roots),
    }
    write_report(cfg, "fig1", results, True)
    print("determinant scan: %d points, %d roots%s" % (
        n_grid, len(roots),
        (" at " + ", ".join("%.6f" % r for r in roots)) if len(roots) else ""))
    return 0


# --------------------------------------------------------------------- main


def _parse_pair(text: str) -> tuple:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected i,j")
    i, j = (int(p) for p in parts)
    if not (1 <= i <= 7 and 1 <= j <= 7) or i == j:
        raise argparse.ArgumentTypeError("pair must be two distinct systems in 1..7")
    return (i, j)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for all random draws")
    common.add_argument("--samples", type=int, default=100_000, help="sample count for measure sampling")
    common.add_argument("--starts", type=int, default=200, help="multistart count for alternating minimization")
    common.add_argument("--out", default=".", help="output directory (UPBFORGE_OUT overrides)")
    common.add_argument("--tol-orthogonality", type=float, default=DEFAULT_TOL.orthogonality)
    common.add_argument("--tol-psd", type=float, default=DEFAULT_TOL.psd)
    common.add_argument("--tol-witness", type=float, default=DEFAULT_TOL.witness)
    common.add_argument("--tol-gradient", type=float, default=DEFAULT_TOL.gradient)

    parser = argparse.ArgumentParser(
        prog="upbforge",
        description="Verify and explore a 7-qubit unextendible product basis, "
        "its merged-system classification, the derived PPT state, and its "
        "geometric measure of entanglement.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-upb", parents=[common], help="symbolic and concrete orthogonality checks")
    p.add_argument("--uom", default="A", help="A, A-tilde, or a grid file path")

    p = sub.add_parser("classify", parents=[common], help="zero-determinant quadruples for a merged pair")
    p.add_argument("--pair", type=_parse_pair, required=True, help="two systems, e.g. 1,2")

    p = sub.add_parser("partitions", parents=[common], help="witness-or-none verdicts over partitions")
    p.add_argument("--scope", default="pairs", choices=["pairs", "2", "3", "4", "5", "6"])

    sub.add_parser("state", parents=[common], help="build the PPT state and run diagnostics")

    p = sub.add_parser("measure", parents=[common], help="geometric measure of entanglement")
    p.add_argument("--method", default="all", choices=["descent", "sampling", "alternating", "all"])
    p.add_argument("--partition", default="1|2|3|4|5|6|7", help="block spec for alternating, e.g. 12|3|4|5|6|7")
    p.add_argument("--complex", action="store_true", help="complex block vectors in alternating mode")

    p = sub.add_parser("fig1", parents=[common], help="closed-form determinant scan over the second phase angle")
    p.add_argument("--a1", type=float, default=2.4)
    p.add_argument("--a2", type=float, default=1.8)
    p.add_argument("--a3", type=float, default=0.4)
    p.add_argument("--b1", type=float, default=4.7)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    out = os.environ.get("UPBFORGE_OUT", args.out)
    tol = Tolerances(
        orthogonality=args.tol_orthogonality,
        psd=args.tol_psd,
        witness=args.tol_witness,
        gradient=args.tol_gradient,
    )
    cfg = RunConfig(
        seed=args.seed,
        samples=args.samples,
        starts=args.starts,
        output_dir=out,
        tolerances=tol,
    )
    try:
        os.makedirs(cfg.output_dir, exist_ok=True)
    except OSError as exc:
        print("cannot create output directory: %s" % exc, file=sys.stderr)
        return 2

    try:
        if args.command == "verify-upb":
            return cmd_verify_upb(cfg, args.uom)
        if args.command == "classify":
            return cmd_classify(cfg, args.pair)
        if args.command == "partitions":
            return cmd_partitions(cfg, args.scope)
        if args.command == "state":
            return cmd_state(cfg)
        if args.command == "measure":
            return cmd_measure(cfg, args.method, Partition.from_spec(args.partition), args.complex)
        if args.command == "fig1":
            return cmd_fig1(cfg, args.a1, args.a2, args.a3, args.b1)
    except FileNotFoundError as exc:
        print("input not found: %s" % exc, file=sys.stderr)
        return 2
    except ValueError as exc:
        print("invalid input: %s" % exc, file=sys.stderr)
        return 2
    raise AssertionError("unhandled command %r" % args.command)


if __name__ == "__main__":
    sys.exit(main())
