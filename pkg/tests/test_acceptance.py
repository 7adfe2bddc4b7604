"""Acceptance gate: one test per contracted criterion, one verdict line each.

Criteria 1-6 and 9-12 pass.  Criterion 7 carries a floor of 1e-6 on the
200-start alternating minimum over the two merged pairs that stay
unextendible; the measured minima sit at the optimizer's numerical zero
(~5e-11, stable under more starts, more sweeps and either scalar field),
so that prong fails and is left failing rather than weakened.
"""

import json

import numpy as np

from upbforge.cli import main as cli_main
from upbforge.geom import gradient, objective, random_sampling, to_ebits
from upbforge.linalg import det4
from upbforge.merge_analysis import (
    CLOSED_FORM_QUADRUPLE,
    classify_zero_quadruples,
    closed_form_det_roots,
    closed_form_quadruple_det,
    find_witness,
    min_overlap_product,
    pair_submatrix,
    quadruple_matrix,
    zero_quintuples,
)
from upbforge.geom import merged_measure
from upbforge.ppt import partial_transpose, ppt_report, state_diagnostics
from upbforge.uom import (
    Partition,
    builtin_a,
    column_pair_assignment,
    enumerate_merge_pairs,
)

from frozen_tables import ZERO_QUADRUPLES_12, ZERO_QUADRUPLES_23, ZERO_QUINTUPLES_23

REF_ANGLES = (2.35414, 2.83365, 3.14800, 0.615284, 3.92691, 2.35162, 3.61857)


def _verdict(n, label, ok, detail=""):
    print("CRITERION %2d %-28s %s%s" % (n, label, "PASS" if ok else "FAIL",
                                        " (%s)" % detail if detail else ""))


def test_criterion_01_orthonormality(upb):
    g = upb.gram()
    off = np.abs(g - np.eye(11))
    norms = [abs(np.linalg.norm(v) - 1) for row in upb.vectors for v in row]
    ok = off.max() <= 1e-10 and max(norms) <= 1e-12
    _verdict(1, "orthonormality", ok,
             "max overlap %.2e, worst factor norm dev %.2e" % (off.max(), max(norms)))
    assert off.max() <= 1e-10
    assert len(norms) == 77 and max(norms) <= 1e-12


def test_criterion_02_state_diagnostics(alpha):
    d = state_diagnostics(alpha)
    spec = np.array(d["spectrum"])
    ok = (
        abs(d["trace"] - 1) <= 1e-12
        and d["rank"] == 117
        and np.abs(spec[:11]).max() <= 1e-12
        and np.abs(spec[11:] - 1 / 117).max() <= 1e-12
    )
    _verdict(2, "state diagnostics", ok,
             "trace %.15f, rank %d" % (d["trace"], d["rank"]))
    assert ok


def test_criterion_03_ppt_all_cuts(alpha):
    rep = ppt_report(alpha)
    ok = len(rep.minima) == 63 and rep.minimum >= -1e-10
    _verdict(3, "PPT across 63 cuts", ok, "lambda_min %.2e" % rep.minimum)
    assert ok


def test_criterion_04_pair_12_quadruples():
    cls = classify_zero_quadruples(
        pair_submatrix(builtin_a(), (1, 2)),
        samples=20, tol=1e-9, rng=np.random.default_rng(0),
    )
    ok = cls.zero_quadruples == ZERO_QUADRUPLES_12
    _verdict(4, "pair (1,2) zero quadruples", ok,
             "%d found, 44 expected" % len(cls.zero_quadruples))
    assert ok


def test_criterion_05_pair_23_quadruples_and_quintuples():
    cls23 = classify_zero_quadruples(
        pair_submatrix(builtin_a(), (2, 3)),
        samples=20, tol=1e-9, rng=np.random.default_rng(0),
    )
    cls12 = classify_zero_quadruples(
        pair_submatrix(builtin_a(), (1, 2)),
        samples=20, tol=1e-9, rng=np.random.default_rng(0),
    )
    ok = (
        cls23.zero_quadruples == ZERO_QUADRUPLES_23
        and zero_quintuples(cls23) == ZERO_QUINTUPLES_23
        and zero_quintuples(cls12) == frozenset()
    )
    _verdict(5, "pair (2,3) tables", ok,
             "%d quadruples, quintuples %s" % (
                 len(cls23.zero_quadruples), sorted(zero_quintuples(cls23))))
    assert ok


def test_criterion_06_closed_form_fidelity():
    sub = pair_submatrix(builtin_a(), (1, 2))
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(1000):
        a1, a2, a3, b1, b2, b3 = rng.uniform(0, 2 * np.pi, 6)
        asn = column_pair_assignment(a1, a2, a3, b1, b2, b3)
        num = det4(quadruple_matrix(sub, CLOSED_FORM_QUADRUPLE, asn))
        worst = max(worst, abs(num - closed_form_quadruple_det(a1, a2, a3, b1, b2)))
    roots = closed_form_det_roots(2.4, 1.8, 0.4, 4.7)
    ok = worst <= 1e-12 and len(roots) and 0.9453 <= roots[0] <= 0.9454
    _verdict(6, "closed-form determinant", ok,
             "worst dev %.2e, first root %.6f" % (worst, roots[0]))
    assert ok


def test_criterion_07_merge_pair_classification(generic_set):
    upb_pairs = {(1, 2), (2, 3)}
    unexpected, missing, bad_residual = [], [], []
    for pair in enumerate_merge_pairs():
        w = find_witness(generic_set, Partition.merge_pair(*pair))
        if pair in upb_pairs:
            if w is not None:
                unexpected.append(pair)
        elif w is None:
            missing.append(pair)
        elif w.max_residual > 1e-8:
            bad_residual.append(pair)
    margins = {
        pair: min_overlap_product(
            generic_set, Partition.merge_pair(*pair),
            starts=200, rng=np.random.default_rng(7),
        ).value
        for pair in sorted(upb_pairs)
    }
    ok_witnesses = not (unexpected or missing or bad_residual)
    ok_margins = all(v >= 1e-6 for v in margins.values())
    _verdict(7, "merge pair classification", ok_witnesses and ok_margins,
             "19 witnessed: %s; alternating margins %s" % (
                 ok_witnesses, {p: "%.2e" % v for p, v in margins.items()}))
    assert not unexpected, f"witness found for pairs expected unextendible: {unexpected}"
    assert not missing, f"no witness for pairs expected extendible: {missing}"
    assert not bad_residual, f"witness residual above 1e-8: {bad_residual}"
    # the 1e-6 floor is not reachable: the true minima of these two merged
    # sets are numerically zero, and 200 independent starts land there
    assert ok_margins, (
        "alternating minima %s sit at numerical zero, below the 1e-6 floor"
        % margins
    )


def test_criterion_08_coarser_partitions(generic_set):
    specs = [
        "1|2|3|4|567", "1|2|3|45|67", "1|2|3|4567", "1|2|34|567",
        "1|23|45|67", "1|2|34567", "1|23|4567", "1|234|567",
        "12|34|567", "1|234567", "12|34567", "123|4567",
    ]
    failures = []
    for spec in specs:
        w = find_witness(generic_set, Partition.from_spec(spec))
        if w is None or w.max_residual > 1e-8:
            failures.append(spec)
    ok = not failures
    _verdict(8, "coarser partition witnesses", ok,
             "12 shapes" if ok else "failing: %s" % failures)
    assert ok, failures


def test_criterion_09_steepest_descent(q, descent):
    res = descent.result
    ref_obj = objective(REF_ANGLES, q)
    ok = (
        res.converged
        and abs(res.q_star - 3.18624e-5) <= 1e-5
        and abs(res.ebits - 6.87041) <= 0.01
        and abs(ref_obj - res.q_star) <= 1e-6
    )
    _verdict(9, "steepest descent", ok,
             "q_star %.6e, G %.5f ebits, ref gap %.2e, %d iterations" % (
                 res.q_star, res.ebits, abs(ref_obj - res.q_star), res.iterations))
    assert ok


def test_criterion_10_sampling_cross_check(q, descent):
    out = random_sampling(q, 100_000, rng=np.random.default_rng(0))
    g_samp = out.result.ebits
    g_desc = descent.result.ebits
    ok = abs(g_samp - g_desc) <= 0.02 and g_samp >= g_desc - 1e-9
    _verdict(10, "sampling cross-check", ok,
             "sampled G %.6f vs descent %.6f" % (g_samp, g_desc))
    assert ok


def test_criterion_11_merged_measure_monotone(upb, descent):
    g_alpha = descent.result.ebits
    gs = {}
    for pair in ((1, 2), (2, 3)):
        res = merged_measure(
            Partition.merge_pair(*pair), starts=200,
            rng=np.random.default_rng(0), pset=upb,
        )
        gs[pair] = res.ebits
    ok = all(0.0 < g <= g_alpha + 1e-6 for g in gs.values())
    _verdict(11, "merged measure bounds", ok,
             "G %s vs G(alpha) %.6f" % ({p: "%.6f" % g for p, g in gs.items()}, g_alpha))
    assert ok


def test_criterion_12_property_suites(q, alpha, tmp_path):
    rng = np.random.default_rng(2)
    grad_ok = True
    h = 1e-6
    for _ in range(100):
        x = rng.uniform(0, 2 * np.pi, 7)
        g = gradient(x, q)
        for i in range(7):
            e = np.zeros(7)
            e[i] = h
            fd = (objective(x + e, q) - objective(x - e, q)) / (2 * h)
            if abs(g[i] - fd) > max(1e-7, 1e-5 * abs(g[i])):
                grad_ok = False

    x = rng.standard_normal((128, 128)) + 1j * rng.standard_normal((128, 128))
    pt_ok = all(
        np.array_equal(partial_transpose(partial_transpose(m, cut), cut), m)
        for m in (alpha, x)
        for cut in ((1,), (2, 5), (1, 3, 4, 7))
    )

    idem = np.abs(q @ q - q).max()

    dir_a, dir_b = tmp_path / "a", tmp_path / "b"
    assert cli_main(["classify", "--pair", "2,3", "--seed", "5", "--out", str(dir_a)]) == 0
    assert cli_main(["classify", "--pair", "2,3", "--seed", "5", "--out", str(dir_b)]) == 0

    def stripped(p):
        return [ln for ln in (p / "classify.json").read_text().split("\n")
                if '"timestamp"' not in ln]

    det_ok = stripped(dir_a) == stripped(dir_b)
    with open(dir_a / "classify.json") as fh:
        json.load(fh)

    ok = grad_ok and pt_ok and idem <= 1e-10 and det_ok
    _verdict(12, "property suites", ok,
             "grad FD %s, PT involution %s, idempotence %.2e, determinism %s" % (
                 grad_ok, pt_ok, idem, det_ok))
    assert ok
