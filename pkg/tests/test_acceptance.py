"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

The lines are collected and repeated in the pytest terminal summary.  Run
this file alone with ``pytest tests/test_acceptance.py -s``.
"""

import numpy as np
import pytest

from conftest import record
from wframe.extension import (
    ExtensionImpossible,
    MaskFamily,
    extend_algorithm_a,
    extend_theorem2,
    householder_unitary,
    random_unitary_e1,
    verify_uep,
)
from wframe.frames import (
    analyze,
    approx_order_report,
    frame_coefficient,
    indicator,
    level_coefficients,
    parseval_check,
    random_step,
    refinable_hat,
    step_fourier,
)
from wframe.masks import (
    AdmissibilityError,
    WalshPolynomial,
    generate_mask,
    poly_eval,
    poly_eval_digits,
    polyphase_decompose,
    random_boundary,
)
from wframe.vgroup import GroupElement, delta, digit_matrix, oplus, shift
from wframe.walsh import NAIVE_MAX, vc_forward, vc_forward_entries, vc_inverse, walsh_eval, walsh_matrix

pytestmark = pytest.mark.acceptance


# --- 1 -------------------------------------------------------------------------------


def test_criterion_01_haar_end_to_end():
    m0 = generate_mask([1, 0], 2)
    fam = extend_algorithm_a(m0, 1)
    rep = verify_uep(fam)
    a_err = np.max(np.abs(m0.coeffs - [0.5, 0.5]))
    m1_err = np.max(np.abs(fam.masks[1].coeffs - [0.5, -0.5]))
    ok = a_err == 0 and m1_err < 1e-15 and rep.max_dev <= 1e-14
    record(1, ok, f"a err {a_err:.1e}, m1 err {m1_err:.1e}, uep max_dev {rep.max_dev:.2e} (<= 1e-14)")
    assert ok


# --- 2 -------------------------------------------------------------------------------


def test_criterion_02_transform_correctness():
    rng = np.random.default_rng(2002)
    worst_rt, worst_naive = 0.0, 0.0
    for p in (2, 3, 5):
        for n in range(1, 9):
            N = p**n
            # 100 vectors per size, in chunks to bound memory at 5^8
            chunk = 100 if N <= 6561 else 10
            for _ in range(100 // chunk):
                B = rng.normal(size=(chunk, N)) + 1j * rng.normal(size=(chunk, N))
                A = vc_forward(B, p)
                worst_rt = max(worst_rt, float(np.max(np.abs(vc_inverse(A, p) - B))))
                if N <= NAIVE_MAX:
                    worst_naive = max(worst_naive, float(np.max(np.abs(vc_forward(B, p, "naive") - A))))
                    worst_naive = max(
                        worst_naive, float(np.max(np.abs(vc_inverse(B, p, "naive") - vc_inverse(B, p))))
                    )
                else:
                    # full kernel matrix is too large; compare sampled rows by direct summation
                    alphas = np.unique(np.concatenate([[0, 1, N - 1], rng.integers(0, N, 29)]))
                    ref = vc_forward_entries(B, p, alphas)
                    worst_naive = max(worst_naive, float(np.max(np.abs(ref - A[:, alphas]))))
    ok = worst_rt < 1e-12 and worst_naive < 1e-10
    record(2, ok, f"roundtrip {worst_rt:.1e} (< 1e-12), fast vs naive {worst_naive:.1e} (< 1e-10)")
    assert ok


# --- 3 -------------------------------------------------------------------------------


def _random_point(rng, p, lo=-3, hi=6):
    return GroupElement.from_map(p, {j: int(rng.integers(0, p)) for j in range(lo, hi + 1) if rng.random() < 0.7})


def test_criterion_03_structural_identities():
    rng = np.random.default_rng(3003)
    fact_fail, unit_dev = 0, 0.0
    for _ in range(1000):
        p = int(rng.choice([2, 3, 5]))
        alpha, k = int(rng.integers(0, 10**4)), int(rng.integers(0, p))
        w = _random_point(rng, p)
        if walsh_eval(p * alpha + k, w) != walsh_eval(alpha, shift(w, 1)) * walsh_eval(k, w):
            fact_fail += 1
        W = walsh_matrix(w)
        unit_dev = max(unit_dev, float(np.max(np.abs(W @ W.conj().T - np.eye(p)))))
    poly_dev = 0.0
    for _ in range(300):
        p = int(rng.choice([2, 3, 5]))
        n = int(rng.integers(1, 4))
        m, m2 = (WalshPolynomial(p, n, rng.normal(size=p**n) + 1j * rng.normal(size=p**n)) for _ in range(2))
        w = _random_point(rng, p)
        lhs = sum(poly_eval(m, oplus(w, delta(k, p))) * np.conj(poly_eval(m2, oplus(w, delta(k, p)))) for k in range(p))
        mu, mu2 = polyphase_decompose(m), polyphase_decompose(m2)
        rhs = sum(poly_eval(a, shift(w, 1)) * np.conj(poly_eval(b, shift(w, 1))) for a, b in zip(mu, mu2))
        poly_dev = max(poly_dev, abs(lhs - rhs))
    ok = fact_fail == 0 and unit_dev <= 1e-12 and poly_dev <= 1e-10
    record(
        3,
        ok,
        f"factorization failures {fact_fail}/1000 (exact), W unitarity {unit_dev:.1e} (<= 1e-12), "
        f"modulated polyphase identity {poly_dev:.1e} (<= 1e-10)",
    )
    assert ok


# --- 4 -------------------------------------------------------------------------------


def test_criterion_04_extension_sweep():
    rng = np.random.default_rng(4004)
    worst_uep, worst_table, m0_changed, runs = 0.0, 0.0, 0, 0
    for p in (2, 3, 5):
        for n in (1, 2, 3):
            L = p ** (n - 1)
            for r in (p, p + 2):
                for i in range(100):
                    m0 = generate_mask(random_boundary(p, n, rng), p)
                    slack = "deterministic" if i % 2 == 0 else "random"
                    fam = extend_algorithm_a(m0, r, slack, rng)
                    runs += 1
                    worst_uep = max(worst_uep, verify_uep(fam).max_dev)
                    if fam.m0 is not m0 or not np.array_equal(fam.m0.coeffs, m0.coeffs):
                        m0_changed += 1
                    vals = fam.table.values
                    for nu, m in enumerate(fam.masks):
                        comps = np.array([c.coeffs for c in polyphase_decompose(m)])
                        got = vc_inverse(comps, p)
                        worst_table = max(worst_table, float(np.max(np.abs(got - vals[nu, :, :L]))))
    ok = worst_uep < 1e-10 and m0_changed == 0 and worst_table <= 1e-12
    record(
        4,
        ok,
        f"{runs} families: uep max_dev {worst_uep:.1e} (< 1e-10), m0 changed {m0_changed}, "
        f"polyphase roundtrip {worst_table:.1e} (<= 1e-12)",
    )
    assert ok


# --- 5 -------------------------------------------------------------------------------


def test_criterion_05_rotated_extensions():
    rng = np.random.default_rng(5005)
    masks = [generate_mask([1, 0], 2), generate_mask([1, 0, 0], 3), generate_mask([1, 0.5, 0, 0.5], 2)]
    worst_uep, worst_id = 0.0, 0.0
    for m0 in masks:
        p = m0.p
        L = p ** (m0.n - 1)
        rs = [p + 1] if m0.n > 1 else [p - 1, p + 1]
        for r in rs:
            for _ in range(20):
                V = [random_unitary_e1(r, rng) for _ in range(L)]
                worst_uep = max(worst_uep, verify_uep(extend_theorem2(m0, r, V)).max_dev)
            a = extend_algorithm_a(m0, r)
            b = extend_theorem2(m0, r, [np.eye(r + 1)] * L)
            worst_id = max(worst_id, max(float(np.max(np.abs(x.coeffs - y.coeffs))) for x, y in zip(a.masks, b.masks)))
    ok = worst_uep < 1e-10 and worst_id <= 1e-12
    record(5, ok, f"random V uep max_dev {worst_uep:.1e} (< 1e-10), V = I vs Algorithm A {worst_id:.1e} (<= 1e-12)")
    assert ok


# --- 6 -------------------------------------------------------------------------------


def test_criterion_06_refinable_function():
    rng = np.random.default_rng(6006)
    masks = [generate_mask([1, 0], 2), generate_mask([1, 0, 0], 3), generate_mask([1, 0.5, 0, 0.5], 2)]
    for p in (2, 3, 5):
        for n in (1, 2, 3):
            for tight in (False, True):
                masks.append(generate_mask(random_boundary(p, n, rng, tight), p))
    theta_dev, refine_dev, monotone, max_energy = 0.0, 0.0, True, 0.0
    for m0 in masks:
        p, n = m0.p, m0.n
        energies = []
        for M in range(0, 5):
            g = refinable_hat(m0, M)
            theta_dev = max(theta_dev, abs(g.values[0] - 1))
            # cell u at resolution n-1 has digits u_i at index n-1-i; A^{-1} moves them to n-i,
            # so m0(A^{-1} w) sees (u_{n-1}, ..., u_0) as (w_1, ..., w_n) and ghat(A^{-1} w) = g[u // p]
            u = np.arange(g.values.size)
            digits = digit_matrix(u % p**n, p, n)[:, ::-1]
            m_vals = poly_eval_digits(m0, digits)
            refine_dev = max(refine_dev, float(np.max(np.abs(g.values - m_vals * g.values[u // p]))))
            energies.append(g.energy())
        monotone &= all(b >= a for a, b in zip(energies, energies[1:]))
        max_energy = max(max_energy, max(energies))
    ok = theta_dev <= 1e-12 and refine_dev <= 1e-12 and monotone and max_energy <= 1 + 1e-12
    record(
        6,
        ok,
        f"{len(masks)} masks: |ghat(theta)-1| {theta_dev:.1e}, refinement {refine_dev:.1e} (<= 1e-12), "
        f"energy nondecreasing {monotone}, max energy {max_energy:.15f} (<= 1 + 1e-12)",
    )
    assert ok


# --- 7, 8, 9: shared sweep ----------------------------------------------------------


def _families():
    rng = np.random.default_rng(7007)
    fams = [
        extend_algorithm_a(generate_mask([1, 0], 2), 1),
        extend_algorithm_a(generate_mask([1, 0, 0], 3), 2),
        extend_algorithm_a(generate_mask([1, 0.5, 0, 0.5], 2), 2),
        extend_algorithm_a(generate_mask(random_boundary(2, 1, rng), 2), 2),
        extend_algorithm_a(generate_mask(random_boundary(2, 2, rng, tight=True), 2), 1),
        extend_algorithm_a(generate_mask(random_boundary(2, 2, rng), 2), 3, "random", rng),
        extend_algorithm_a(generate_mask(random_boundary(3, 1, rng), 3), 3),
        extend_algorithm_a(generate_mask(random_boundary(3, 2, rng, tight=True), 3), 2),
        extend_algorithm_a(generate_mask(random_boundary(3, 2, rng), 3), 4, "random", rng),
        extend_theorem2(generate_mask(random_boundary(3, 2, rng), 3), 3, [random_unitary_e1(3, rng) for _ in range(3)]),
    ]
    for fam in fams:
        assert verify_uep(fam).passed
    return fams


@pytest.fixture(scope="module")
def sweep():
    rng = np.random.default_rng(7777)
    out = []
    for fam in _families():
        for _ in range(50):
            N = int(rng.integers(-1, 4))
            M = int(rng.integers(max(-N, -1), 4))
            f = random_step(fam.p, M, N, rng)
            j_min = int(rng.integers(-2, 2))
            table = analyze(f, fam, j_min)
            rep = parseval_check(f, fam, j_min, table=table)
            rows = approx_order_report(f, fam, j_min, table=table)
            fh = step_fourier(f)
            beyond = 0.0
            for j in (table.J, table.J + 1):
                for nu in range(1, fam.r + 1):
                    beyond = max(beyond, float(np.max(np.abs(level_coefficients(fh, fam, nu, j)))))
                    for k in (0, 1, fam.p**2 + 1):
                        beyond = max(beyond, abs(frame_coefficient(f, fam, nu, j, k, check=False)))
            out.append((fam, f, table, rep, rows, beyond))
    return out


def test_criterion_07_exact_parseval(sweep):
    worst_rel, worst_res = 0.0, 0.0
    for fam, f, table, rep, rows, _ in sweep:
        worst_rel = max(worst_rel, abs(rep.total_wavelet_energy - f.energy()) / f.energy())
        worst_res = max([worst_res, *rep.telescoping_residuals.values()])
    haar = extend_algorithm_a(generate_mask([1, 0], 2), 1)
    h = parseval_check(indicator(2, 1), haar)
    worked = (
        abs(h.base_energy - 0.25) < 1e-15
        and abs(h.total_wavelet_energy - h.base_energy - 0.25) < 1e-15
        and abs(h.total_wavelet_energy - 0.5) < 1e-15
    )
    ok = worst_rel <= 1e-8 and worst_res < 1e-10 and worked
    record(
        7,
        ok,
        f"{len(sweep)} pairs: relative energy error {worst_rel:.1e} (<= 1e-8), telescoping {worst_res:.1e} (< 1e-10), "
        f"Haar 1_U1 base {h.base_energy:.17g} total {h.total_wavelet_energy:.17g}",
    )
    assert ok


def test_criterion_08_vanishing_beyond_cutoff(sweep):
    worst = max(b for *_, b in sweep)
    ok = worst < 1e-12
    record(8, ok, f"{len(sweep)} pairs: max |coefficient| at j = J, J+1 is {worst:.1e} (< 1e-12)")
    assert ok


def test_criterion_09_approximation_order(sweep):
    monotone, worst_last = True, 0.0
    for fam, f, table, rep, rows, _ in sweep:
        es = [e for _, e, _ in rows]
        monotone &= all(b <= a for a, b in zip(es, es[1:]))
        assert rows[-1][0] == table.J - 1 or table.J <= table.j_min
        if table.J > table.j_min:
            worst_last = max(worst_last, es[-1])
    haar = extend_algorithm_a(generate_mask([1, 0], 2), 1)
    h = approx_order_report(indicator(2, 1), haar)
    worked = [r[0] for r in h] == [-1, 0] and abs(h[0][1] - 0.25) < 1e-15 and h[1][1] < 1e-14
    ok = monotone and worst_last < 1e-14 and worked
    record(
        9,
        ok,
        f"E_j nonincreasing {monotone}, max E_(J-1) {worst_last:.1e} (< 1e-14), "
        f"Haar 1_U1 E_-1 = {h[0][1]:.17g}, E_0 = {h[1][1]:.17g}",
    )
    assert ok


# --- 10 ------------------------------------------------------------------------------


def test_criterion_10_negative_controls():
    try:
        generate_mask([1, 1], 2)
        reject_b = False
    except AdmissibilityError as exc:
        reject_b = "partition" in str(exc) and "2 > 1" in str(exc)
    try:
        extend_algorithm_a(generate_mask([1, 0.5, 0, 0.5], 2), 1)
        reject_r = False
    except ExtensionImpossible as exc:
        reject_r = "row norm" in str(exc) and exc.deficiency > 0.1
    devs = []
    rng = np.random.default_rng(1010)
    for m0 in (generate_mask([1, 0], 2), generate_mask([1, 0.5, 0, 0.5], 2), generate_mask(random_boundary(3, 2, rng), 3)):
        fam = extend_algorithm_a(m0, m0.p)
        masks = list(fam.masks)
        masks[1] = WalshPolynomial(m0.p, m0.n, np.zeros(m0.p**m0.n))
        rep = verify_uep(MaskFamily(m0.p, m0.n, fam.r, masks))
        devs.append(rep.max_dev if not rep.passed else 0.0)
    ok = reject_b and reject_r and min(devs) >= 0.1
    record(
        10,
        ok,
        f"b=(1,1) rejected {reject_b}, r=p-1 deficiency rejected {reject_r}, "
        f"tampered min deviation {min(devs):.3g} (>= 0.1)",
    )
    assert ok


# --- 11 ------------------------------------------------------------------------------


def test_criterion_11_householder_stability():
    rng = np.random.default_rng(1111)
    worst_u, worst_c = 0.0, 0.0
    c0 = 1 - 1e-9
    for r in range(1, 9):
        for _ in range(25):
            rest = rng.normal(size=r) + 1j * rng.normal(size=r)
            rest *= np.sqrt(1 - c0**2) / np.linalg.norm(rest)  # mass 2e-9 - 1e-18
            c = np.concatenate([[c0], rest])
            H = householder_unitary(c)
            worst_u = max(worst_u, float(np.max(np.abs(H @ H.conj().T - np.eye(r + 1)))))
            worst_c = max(worst_c, float(np.max(np.abs(H[:, 0] - c))))
    ok = worst_u <= 1e-10 and worst_c <= 1e-12
    record(11, ok, f"unitarity {worst_u:.1e} (<= 1e-10), first column {worst_c:.1e} (<= 1e-12)")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
