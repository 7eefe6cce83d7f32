"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""

import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, TEST_RADICES
from vilenkin.checks import dn1_deviation, riesz_fejer_constant
from vilenkin.grid import GridFunction, coset_average, lp_norm, weak_lp_norm
from vilenkin.group import RadixSequence, special_index_q, variation
from vilenkin.hardy import (atom_axioms, example22, hardy_sum, hp_norm, make_atom, paley_sum,
                            strong_sum)
from vilenkin.kernels import (dirichlet, dirichlet_closed, dirichlet_lower_bound, fejer,
                              fejer_closed, fejer_gat, fejer_lower_bound, kernel_lower_bound_q,
                              lebesgue_constants, lukomskii_bounds, norlund_kernel,
                              paley_exact_deviation)
from vilenkin.summability import MeanSpec, WeightSequence, fejer_spec, mean, modulus_lp
from vilenkin.transform import character_matrix, convolve_fast, forward, forward_naive, phase_table

RADICES = [TEST_RADICES[k] for k in ("dyadic", "mixed", "triadic")]
B2, N2 = TEST_RADICES["dyadic"]


def report(k, checks: dict):
    """checks: sub-claim -> (ok, detail). Prints one line and asserts all sub-claims."""
    ok = all(v[0] for v in checks.values())
    detail = "; ".join(f"{name}={'ok' if v[0] else 'FAIL'} ({v[1]})" for name, v in checks.items())
    ACCEPTANCE_LINES[k] = (ok, detail)
    print(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def _label(radix):
    return radix.spec_string()


def test_criterion_01_orthonormality_and_transform():
    start = time.perf_counter()
    rng = np.random.default_rng(1)
    gram_dev, fast_dev = 0.0, 0.0
    for radix, N in RADICES:
        M = radix.M[N]
        assert M <= 256
        # independent character table from the integer phase table
        C = np.exp(2j * np.pi * phase_table(radix, N) / M)
        assert np.max(np.abs(C - character_matrix(radix, N))) < 1e-12
        gram_dev = max(gram_dev, float(np.max(np.abs(C @ C.conj().T / M - np.eye(M)))))
        for _ in range(100):
            f = GridFunction.random(radix, N, rng)
            fast_dev = max(fast_dev, forward(f).max_dev(forward_naive(f)))
    elapsed = time.perf_counter() - start
    report(1, {"gram": (gram_dev <= 1e-10, f"{gram_dev:.1e}"),
               "fast_vs_naive": (fast_dev <= 1e-10, f"{fast_dev:.1e}"),
               "runtime": (elapsed < 10, f"{elapsed:.2f}s")})


def test_criterion_02_paley_exact():
    worst = max(paley_exact_deviation(n, radix, N) for radix, N in RADICES for n in range(N + 1))
    report(2, {"paley": (worst == 0, f"max integer deviation {worst}")})


def test_criterion_03_closed_forms():
    dd, fd = 0.0, 0.0
    for radix, N in RADICES:
        assert radix.M[N] <= 1024
        for n in range(1, radix.M[N]):
            dd = max(dd, dirichlet_closed(n, radix, N).max_dev(dirichlet(n, radix, N)))
            fd = max(fd, fejer_closed(n, radix, N).max_dev(fejer(n, radix, N)))
    report(3, {"dirichlet_closed": (dd <= 1e-10, f"{dd:.1e}"),
               "fejer_closed": (fd <= 1e-9, f"{fd:.1e}")})


def test_criterion_04_shift_identities():
    worst = max(dn1_deviation(radix, N) for radix, N in RADICES)
    report(4, {"shift": (worst <= 1e-12, f"{worst:.1e}")})


def test_criterion_05_gat_formula():
    worst = 0.0
    for radix, N in RADICES:
        for n in range(N + 1):
            worst = max(worst, fejer_gat(n, radix, N).max_dev(fejer(radix.M[n], radix, N)))
    # K_4 under m = 2 on the cells (x_0, x_1) = (0,0), (0,1), (1,0), (1,1)
    k4 = fejer_gat(2, B2, 3).values
    cells = [k4[0], k4[2], k4[1], k4[3]]
    spot = max(abs(c - e) for c, e in zip(cells, (2.5, 1.0, 0.5, 0.0)))
    report(5, {"gat": (worst <= 1e-10, f"{worst:.1e}"),
               "K4_spot": (spot <= 1e-15, f"{spot:.1e}")})


def test_criterion_06_yano_bound():
    norms = [lp_norm(fejer(n, B2, N2), 1) for n in range(1, 257)]
    k2 = lp_norm(fejer(2, B2, N2), 1)
    report(6, {"max_norm": (max(norms) <= 2 + 1e-9, f"max ||K_n||_1 = {max(norms):.6f}"),
               "K2": (abs(k2 - 1) <= 1e-12, f"{k2!r}")})


def test_criterion_07_lukomskii():
    bad = 0
    for radix, N in RADICES:
        L = lebesgue_constants(radix, N)
        for n in range(1, radix.M[N]):
            lower, upper = lukomskii_bounds(n, radix)
            bad += not (lower <= L[n - 1] + 1e-12 and L[n - 1] <= upper + 1e-12)
    L2 = lebesgue_constants(B2, N2)
    spot = max(abs(L2[2] - 1.5), abs(L2[4] - 1.75))
    lam = B2.lam
    bracket = all(n / (2 * lam) <= L2[special_index_q(n, B2) - 1] <= lam * n for n in range(1, 4))
    v_q = [variation(special_index_q(n, B2), B2)[0] for n in range(1, 4)]
    v_q1 = [variation(special_index_q(n, B2), B2, start=1)[0] for n in range(1, 4)]
    report(7, {"sandwich": (bad == 0, f"{bad} violations"),
               "spots": (spot <= 1e-12, f"{spot:.1e}"),
               "L_q_bracket": (bracket, "n/(2 lambda) <= L_q <= lambda n, n <= 3"),
               "v_q_equals_2n": (v_q == [2, 4, 6], f"v(q_n) = {v_q} (start=1 gives {v_q1}), claim [2, 4, 6]")})


def test_criterion_08_kernel_lower_bounds():
    q_checks = [(B2, N2, 3), (B2, N2, 4), (RadixSequence.parse("2,3,2,3,2,3"), 6, 3)]
    q_viol = sum(kernel_lower_bound_q(n, r, N).violations for r, N, n in q_checks)
    d_viol, f_viol = {}, 0
    for radix, N in RADICES:
        assert radix.M[N] <= 1024
        d_viol[_label(radix)] = dirichlet_lower_bound(radix, N).violations
        f_viol += fejer_lower_bound(radix, N).violations
    report(8, {"q_coset": (q_viol == 0, f"{q_viol} violations"),
               "dirichlet_lower": (sum(d_viol.values()) == 0, f"violations per radix {d_viol}"),
               "fejer_lower": (f_viol == 0, f"{f_viol} violations")})


def test_criterion_09_norlund_engine():
    rng = np.random.default_rng(9)
    worst = 0.0
    for radix, N in RADICES:
        f = GridFunction.random(radix, N, rng)
        for spec in ("fejer", "cesaro:0.5", "riesz:0.5", "kappa:1:1"):
            w = WeightSequence.parse(spec)
            first = 3 if spec.startswith("kappa") else 1  # Q_1 = Q_2 = 0 for kappa(1,1)
            for n in range(first, min(256, radix.M[N]) + 1):
                dev = mean(f, MeanSpec("norlund", n, w)).max_dev(convolve_fast(f, norlund_kernel(n, w, radix, N)))
                worst = max(worst, dev)
    reg_ok = True
    for spec in ("fejer", "cesaro:0.5", "riesz:0.5"):
        w = WeightSequence.parse(spec)
        assert w.is_nonincreasing(10_000)
        q, Q = w.q(10_000), w.Q(10_001)
        n = np.arange(1, 10_001)
        reg_ok &= bool(np.all(q[n - 1] * n <= Q[n] * (1 + 1e-12)))
    geo = WeightSequence("custom", tuple(2.0 ** k for k in range(60)))
    q, Q = geo.q(60), geo.Q(61)
    geo_min = min(q[n - 1] / Q[n] for n in range(1, 61))
    report(9, {"multiplier_vs_kernel": (worst <= 1e-9, f"{worst:.1e}"),
               "regularity": (reg_ok, "q_{n-1}/Q_n <= 1/n for n <= 1e4"),
               "geometric": (geo_min >= 0.5, f"min ratio {geo_min:.4f}")})


def test_criterion_10_atom_axioms():
    worst_mean, worst_hp, bad = 0.0, 0.0, []
    for radix, N in RADICES:
        for p in (1 / 3, 0.5, 1.0):
            for alpha in range(1, 6):
                if alpha + 1 > N:
                    continue
                chk = atom_axioms(make_atom(alpha, p, radix, N), alpha, p)
                worst_mean = max(worst_mean, chk.mean_zero)
                worst_hp = max(worst_hp, chk.hp_norm)
                if not (chk.support and chk.sup_norm <= chk.sup_bound):
                    bad.append((_label(radix), p, alpha))
    report(10, {"support_sup": (not bad, f"failures {bad}"),
                "mean_zero": (worst_mean <= 1e-12, f"{worst_mean:.1e}"),
                "hp_norm": (worst_hp <= 1 + 1e-9, f"max {worst_hp:.12f}")})


def test_criterion_11_watari_bracket():
    rng = np.random.default_rng(11)
    bad, checked = 0, 0
    for radix, N in RADICES:
        for _ in range(200):
            f = GridFunction.random(radix, N, rng)
            for n in range(N + 1):
                for p in (1, 2):
                    err = lp_norm(f - coset_average(f, n), p)
                    om = modulus_lp(f, n, p)
                    bad += not (0.5 * om <= err + 1e-12 and err <= om + 1e-12)
                    checked += 1
    report(11, {"bracket": (bad == 0, f"{bad} violations of {checked}")})


def _atom_ratios(radix, N):
    a3, a2, a1 = (make_atom(N - 1, p, radix, N) for p in (1 / 3, 0.5, 1.0))
    h3, h2, h1 = hp_norm(a3, 1 / 3), hp_norm(a2, 0.5), hp_norm(a1, 1.0)
    M = radix.M[N]
    return {
        "hardy_p1/3": hardy_sum(a3, 1 / 3) / h3 ** (1 / 3),
        "hardy_p1/2": hardy_sum(a2, 0.5) / h2 ** 0.5,
        "hardy_p1": hardy_sum(a1, 1.0) / h1,
        "paley_p1/3": paley_sum(a3, 1 / 3) / h3,
        "paley_p1/2": paley_sum(a2, 0.5) / h2,
        "strong_partial": strong_sum(a3, "partial", M, 1 / 3) / h3 ** (1 / 3),
        "strong_fejer": strong_sum(a3, "fejer", M, 1 / 3) / h3 ** (1 / 3),
        "log_partial": strong_sum(a1, "log_partial", M) / h1,
        "log_fejer": strong_sum(a2, "log_fejer", M) / h2 ** 0.5,
    }


def test_criterion_12_sum_flatness():
    spread = {}
    for spec, levels in (("2^8", range(4, 9)), ("3^7", range(4, 8))):
        radix = RadixSequence.parse(spec)
        table = [_atom_ratios(radix, N) for N in levels]
        for name in table[0]:
            base = table[0][name]
            worst = max(max(row[name] / base, base / row[name]) for row in table)
            spread[f"{spec}:{name}"] = worst
    name, worst = max(spread.items(), key=lambda kv: kv[1])
    report(12, {"flat": (worst <= 2, f"worst factor {worst:.3f} at {name}")})


def test_criterion_13_fejer_divergence():
    p = 1 / 3
    ratios = []
    for k in (1, 2, 3):
        f = example22(k, B2, N2)
        M = B2.M[2 * k]
        ratios.append(weak_lp_norm(mean(f, fejer_spec(M + 1)), p) / hp_norm(f, p))
    expected = [3.2, 256 / 17, 4096 / 65]
    dev = max(abs(a - b) for a, b in zip(ratios, expected))
    growth = [b / a for a, b in zip(ratios, ratios[1:])]
    report(13, {"oracle": (dev <= 1e-6, f"ratios {[round(r, 6) for r in ratios]}, dev {dev:.1e}"),
                "growth": (all(g > 4 for g in growth), f"factors {[round(g, 3) for g in growth]}")})


def test_criterion_14_riesz_vs_fejer():
    rng = np.random.default_rng(14)
    worst = {}
    for radix, N in RADICES:
        worst[_label(radix)] = max(riesz_fejer_constant(GridFunction.random(radix, N, rng))
                                   for _ in range(50))
    c = max(worst.values())
    report(14, {"domination": (c < 2, f"empirical c per radix {{{', '.join(f'{k}: {v:.4f}' for k, v in worst.items())}}}")})
