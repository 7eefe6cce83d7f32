"""Verification suites: each check reports its worst deviation against a threshold."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import GridFunction, convolve_direct, coset_average, lp_norm, translate, weak_lp_norm
from .group import (GroupPoint, RadixSequence, _check_resolution, compose_index, digit_table,
                    expand_index, special_index_q, subtraction_table)
from .hardy import MartingaleFamilySpec, atom_axioms, build_martingale, example22, hp_norm, make_atom, martingale_maximal
from .kernels import (dirichlet, dirichlet_closed, dirichlet_lower_bound, dirichlet_table, fejer,
                      fejer_block_lower_bound, fejer_closed, fejer_gat, fejer_lower_bound,
                      kernel_lower_bound_q, lebesgue_constants, lukomskii_bounds, norlund_kernel,
                      paley_exact_deviation)
from .summability import (MeanSpec, WeightSequence, fejer_spec, mean, mean_by_partial_sums,
                          means_batch, modulus_lp, regularity_ratio)
from .transform import (character_matrix, convolve_fast, forward, forward_naive,
                        inverse, vilenkin_function)

DEFAULT_TOLERANCES = {"identity": 1e-10, "closed": 1e-9, "integral": 1e-12, "count": 0.0}

# Exhaustive sweeps stop here; larger grids are sampled.
EXHAUSTIVE_LIMIT = 1024
SUITES = ("group", "transform", "kernels", "summability", "hardy")


@dataclass
class CheckResult:
    check: str
    max_dev: float
    threshold: float
    passed: bool

    def as_dict(self) -> dict:
        return {"check": self.check, "max_dev": self.max_dev, "threshold": self.threshold,
                "pass": self.passed}


class _Recorder:
    def __init__(self, tolerances: dict | None):
        self.tol = dict(DEFAULT_TOLERANCES)
        self.tol.update(tolerances or {})
        self.results: list[CheckResult] = []

    def add(self, name: str, dev: float, category: str):
        thr = self.tol.get(name, self.tol[category])
        dev = float(dev)
        self.results.append(CheckResult(name, dev, thr, bool(dev <= thr)))


def _indices(radix: RadixSequence, N: int, rng: np.random.Generator, limit=EXHAUSTIVE_LIMIT):
    M = radix.M[N]
    if M <= limit:
        return list(range(1, M))
    return sorted(set(rng.integers(1, M, size=64).tolist()) | {1, M - 1})


def suite_group(radix, N, rec, rng):
    t = np.arange(radix.M[N])
    digits = digit_table(radix, N)
    back = sum(digits[:, j] * radix.M[j] for j in range(N))
    rec.add("index_roundtrip", np.count_nonzero(back != t), "count")
    bad = 0
    for n in rng.integers(0, radix.M[-1], size=50):
        bad += compose_index(expand_index(int(n), radix), radix) != n
    rec.add("expand_compose", bad, "count")
    if radix.M[N] <= EXHAUSTIVE_LIMIT:
        table = subtraction_table(radix, N)
        # (x - t) - (-t) must give back x
        neg = table[0]
        recovered = table[table, neg[None, :]]
        rec.add("sub_add_inverse", np.count_nonzero(recovered != t[:, None]), "count")
        rec.add("q_index", 0 if all(special_index_q(k, radix) == sum(radix.M[2 * j] for j in range(k + 1))
                                    for k in range((radix.n_max + 1) // 2)) else 1, "count")


def suite_transform(radix, N, rec, rng):
    M = radix.M[N]
    if M <= EXHAUSTIVE_LIMIT:
        C = character_matrix(radix, N)
        gram = C @ C.conj().T / M
        rec.add("gram_identity", np.max(np.abs(gram - np.eye(M))), "identity")
    devs, inv_devs = [], []
    for _ in range(20):
        f = GridFunction.random(radix, N, rng)
        c = forward(f)
        if M <= EXHAUSTIVE_LIMIT:
            devs.append(c.max_dev(forward_naive(f)))
        inv_devs.append(inverse(c).max_dev(f))
    if devs:
        rec.add("fast_vs_naive", max(devs), "identity")
    rec.add("inverse_roundtrip", max(inv_devs), "identity")
    if M <= 256:
        f, g = GridFunction.random(radix, N, rng), GridFunction.random(radix, N, rng)
        rec.add("convolution", convolve_fast(f, g).max_dev(convolve_direct(f, g)), "identity")
        worst = 0.0
        for n in range(M):
            psi = vilenkin_function(n, radix, N)
            for j in range(N):
                h = GroupPoint.from_index(radix.M[j], radix, N)
                shifted = translate(psi, h)
                worst = max(worst, shifted.max_dev(psi * np.conj(psi.at(h))))
        rec.add("character_shift", worst, "identity")


def dn1_deviation(radix: RadixSequence, N: int) -> float:
    """Worst deviation in the two Dirichlet shift identities over all admissible (n, j)."""
    D = dirichlet_table(radix, N)
    worst = 0.0
    for n in range(N):
        Mn, mn = radix.M[n], radix.m[n]
        psi = vilenkin_function(Mn, radix, N).values
        for j in range((mn - 1) * Mn + 1):
            if j + Mn > radix.M[N]:
                break
            worst = max(worst, np.max(np.abs(D[j + Mn] - (D[Mn] + psi * D[j]))))
        for s in range(1, mn):
            sM = s * Mn
            if sM > radix.M[N]:
                break
            psi_s = vilenkin_function(sM - 1, radix, N).values
            for j in range(Mn):
                worst = max(worst, np.max(np.abs(D[sM - j] - (D[sM] - psi_s * np.conj(D[j])))))
    return float(worst)


def suite_kernels(radix, N, rec, rng):
    M = radix.M[N]
    rec.add("paley_exact", max(paley_exact_deviation(n, radix, N) for n in range(N + 1)), "count")
    idx = _indices(radix, N, rng)
    rec.add("dirichlet_closed", max(dirichlet_closed(n, radix, N).max_dev(dirichlet(n, radix, N))
                                    for n in idx), "closed")
    rec.add("fejer_closed", max(fejer_closed(n, radix, N).max_dev(fejer(n, radix, N)) for n in idx),
            "closed")
    rec.add("fejer_gat", max(fejer_gat(n, radix, N).max_dev(fejer(radix.M[n], radix, N))
                             for n in range(N + 1)), "identity")
    if M > EXHAUSTIVE_LIMIT:
        return
    if M <= 256:
        rec.add("dn1_shift", dn1_deviation(radix, N), "integral")
    L = lebesgue_constants(radix, N)
    bad = 0
    for n in range(1, M):
        lower, upper = lukomskii_bounds(n, radix)
        bad += not (lower <= L[n - 1] + 1e-12 and L[n - 1] <= upper + 1e-12)
    rec.add("lukomskii_sandwich", bad, "count")
    for n in range(3, N // 2 + 1):
        rec.add(f"q_index_fejer_n{n}", kernel_lower_bound_q(n, radix, N).violations, "count")
    rec.add("dirichlet_lower", dirichlet_lower_bound(radix, N).violations, "count")
    rec.add("dirichlet_lower_unit_digit",
            dirichlet_lower_bound(radix, N, unit_digit_only=True).violations, "count")
    rec.add("fejer_lower", fejer_lower_bound(radix, N).violations, "count")
    rec.add("fejer_block_lower", fejer_block_lower_bound(radix, N).violations, "count")


def suite_summability(radix, N, rec, rng, families=("fejer", "cesaro:0.5", "riesz:0.5", "kappa:1:1")):
    M = radix.M[N]
    f = GridFunction.random(radix, N, rng)
    ns = [n for n in (3, 5, 8, M // 2 + 1, M) if 3 <= n <= M]
    for spec in families:
        w = WeightSequence.parse(spec)
        if M <= 256:
            dev = max(mean(f, MeanSpec("norlund", n, w)).max_dev(
                convolve_fast(f, norlund_kernel(n, w, radix, N))) for n in ns)
            rec.add(f"norlund_kernel_path[{spec}]", dev, "closed")
        dev = max(mean(f, MeanSpec("norlund", n, w)).max_dev(
            mean_by_partial_sums(f, MeanSpec("norlund", n, w))) for n in ns)
        rec.add(f"norlund_partial_sums[{spec}]", dev, "closed")
    dev = max(mean(f, MeanSpec("riesz_log", n)).max_dev(mean_by_partial_sums(f, MeanSpec("riesz_log", n)))
              for n in ns)
    rec.add("riesz_log_partial_sums", dev, "closed")
    for spec in ("fejer", "cesaro:0.5", "riesz:0.5"):
        w = WeightSequence.parse(spec)
        if not w.is_nonincreasing(min(M, 512)):
            continue
        worst = max(regularity_ratio(w, n) * n for n in range(2, min(M, 512) + 1))
        rec.add(f"regularity_ratio[{spec}]", max(worst - 1.0, 0.0), "integral")
    bad = 0
    for _ in range(10):
        g = GridFunction.random(radix, N, rng)
        for n in range(N + 1):
            for p in (1, 2):
                err = lp_norm(g - coset_average(g, n), p)
                om = modulus_lp(g, n, p)
                bad += not (0.5 * om <= err + 1e-12 and err <= om + 1e-12)
    rec.add("watari_bracket", bad, "count")
    c = riesz_fejer_constant(f)
    rec.add("riesz_vs_fejer", max(c - 2.0, 0.0), "count")


def riesz_fejer_constant(f: GridFunction) -> float:
    """max_x R*f(x) / sigma*f(x), with R* over [2, M_N] and sigma* over [1, M_N]."""
    M = f.size
    R = np.abs(means_batch(f, "riesz_log", list(range(2, M + 1)))).max(axis=0)
    S = np.abs(means_batch(f, "fejer", list(range(1, M + 1)))).max(axis=0)
    mask = S > 1e-14
    if np.any(R[~mask] > 1e-12):
        return math.inf
    return float(np.max(R[mask] / S[mask])) if mask.any() else 0.0


def suite_hardy(radix, N, rec, rng):
    worst_mean, bad = 0.0, 0
    for p in (1 / 3, 0.5, 1.0):
        for alpha in range(0, N):
            chk = atom_axioms(make_atom(alpha, p, radix, N), alpha, p)
            worst_mean = max(worst_mean, chk.mean_zero)
            bad += not (chk.support and chk.sup_norm <= chk.sup_bound and chk.hp_norm <= 1 + 1e-9)
    rec.add("atom_mean_zero", worst_mean, "integral")
    rec.add("atom_axioms", bad, "count")
    if N >= 3:
        alphas = tuple(range(1, (N - 1) // 2 + 1))
        for family in ("single_atom", "inv_sqrt_alpha"):
            spec = MartingaleFamilySpec(radix, N, 0.5, family, alphas)
            c = forward(build_martingale(spec)).coefficients
            expected = np.zeros(radix.M[N])
            for start, stop, value in spec.block_values():
                expected[start:stop] = value
            rec.add(f"martingale_blocks[{family}]", np.max(np.abs(c - expected)), "identity")
        f = example22(1, radix, N)
        Mb = radix.M[2]
        sigma = mean(f, fejer_spec(Mb + 1))
        if all(v == 2 for v in radix.m[:N]):
            ratio = weak_lp_norm(sigma, 1 / 3) / hp_norm(f, 1 / 3)
            rec.add("ex22_ratio", abs(ratio - Mb ** 2 / (Mb + 1)), "closed")
    g = GridFunction.random(radix, N, rng)
    star = martingale_maximal(g).values.real
    gap = max(float(np.max(np.abs(coset_average(g, n).values) - star)) for n in range(N + 1))
    rec.add("maximal_dominates", max(gap, 0.0), "integral")


def run_verify(radix: RadixSequence, N: int, tolerances: dict | None = None,
               suites=SUITES, seed: int = 0) -> list[CheckResult]:
    _check_resolution(radix, N)
    rec = _Recorder(tolerances)
    table = {"group": suite_group, "transform": suite_transform, "kernels": suite_kernels,
             "summability": suite_summability, "hardy": suite_hardy}
    for name in suites:
        table[name](radix, N, rec, np.random.default_rng(seed))
    return sorted(rec.results, key=lambda r: r.check)
