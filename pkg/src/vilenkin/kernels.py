"""Dirichlet, Fejer and Norlund kernels, Lebesgue constants, and pointwise kernel bounds.

Every kernel has a brute-force version (literal sums of characters) and, where a closed
form exists, an independent assembly from the Paley indicator D_{M_n} = M_n 1_{I_n} and
Gat's formula for K_{M_n}. The two routes are compared by the verification suites.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import cyclotomic
from .grid import GridFunction, lp_norm
from .group import (DomainError, RadixSequence, RangeError, _check_resolution, digit_table, expand_index,
                    first_nonzero_digit, lead_trail, special_index_q, variation)
from .summability import DegenerateWeightsError, WeightSequence
from .transform import (CoefficientVector, character_matrix, inverse, phase_table,
                        rademacher, unit_roots, vilenkin_function)

# Above this grid size the cumulative kernel tables are not built.
TABLE_LIMIT = 4096


def _check_n(n: int, radix: RadixSequence, N: int):
    _check_resolution(radix, N)
    if not 1 <= n <= radix.M[N]:
        raise RangeError(f"kernel index {n} outside [1, M_N = {radix.M[N]}]")


@lru_cache(maxsize=8)
def dirichlet_table(radix: RadixSequence, N: int) -> np.ndarray:
    """Row k is D_k on the grid, k = 0..M_N (D_0 = 0)."""
    chars = character_matrix(radix, N)
    table = np.zeros((radix.M[N] + 1, radix.M[N]), dtype=np.complex128)
    np.cumsum(chars, axis=0, out=table[1:])
    table.setflags(write=False)
    return table


@lru_cache(maxsize=8)
def fejer_table(radix: RadixSequence, N: int) -> np.ndarray:
    """Row n is n K_n = D_1 + ... + D_n, n = 0..M_N."""
    d = dirichlet_table(radix, N)
    table = np.zeros_like(d)
    np.cumsum(d[1:], axis=0, out=table[1:])
    table.setflags(write=False)
    return table


def _use_table(radix, N) -> bool:
    return radix.M[N] <= TABLE_LIMIT


def dirichlet(n: int, radix: RadixSequence, N: int) -> GridFunction:
    """D_n = psi_0 + ... + psi_{n-1}."""
    _check_n(n, radix, N)
    if _use_table(radix, N):
        return GridFunction(radix, N, dirichlet_table(radix, N)[n])
    c = np.zeros(radix.M[N], dtype=np.complex128)
    c[:n] = 1.0
    return inverse(CoefficientVector(radix, N, c))


def paley(n: int, radix: RadixSequence, N: int) -> GridFunction:
    """D_{M_n} from the Paley lemma: M_n on I_n, 0 elsewhere."""
    if not 0 <= n <= N:
        raise RangeError(f"Paley index {n} outside [0, {N}]")
    s = first_nonzero_digit(radix, N)
    return GridFunction(radix, N, np.where(s >= n, float(radix.M[n]), 0.0))


def paley_product(n: int, radix: RadixSequence, N: int) -> GridFunction:
    """D_{M_{n+1}} as the product over k <= n of sum_{s < m_k} r_k^s."""
    out = np.ones(radix.M[N], dtype=np.complex128)
    for k in range(n + 1):
        r = rademacher(k, radix, N).values
        out = out * sum(r ** s for s in range(radix.m[k]))
    return GridFunction(radix, N, out)


def _geometric(r: np.ndarray, start: int, stop: int) -> np.ndarray:
    """sum_{k=start}^{stop-1} r^k."""
    out = np.zeros_like(r)
    for k in range(start, stop):
        out = out + r ** k
    return out


def dirichlet_closed(n: int, radix: RadixSequence, N: int) -> GridFunction:
    """D_n = psi_n sum_j D_{M_j} sum_{k=m_j-n_j}^{m_j-1} r_j^k."""
    _check_n(n, radix, N)
    if n == radix.M[N]:
        return paley(N, radix, N)
    digits = expand_index(n, radix)
    acc = np.zeros(radix.M[N], dtype=np.complex128)
    for j in range(N):
        if digits[j] == 0:
            continue
        r = rademacher(j, radix, N).values
        inner = _geometric(r, radix.m[j] - digits[j], radix.m[j])
        acc += paley(j, radix, N).values * inner
    return GridFunction(radix, N, vilenkin_function(n, radix, N).values * acc)


def fejer(n: int, radix: RadixSequence, N: int) -> GridFunction:
    """K_n = (D_1 + ... + D_n) / n."""
    _check_n(n, radix, N)
    if _use_table(radix, N):
        return GridFunction(radix, N, fejer_table(radix, N)[n] / n)
    c = np.zeros(radix.M[N], dtype=np.complex128)
    j = np.arange(n)
    c[:n] = (n - j) / n
    return inverse(CoefficientVector(radix, N, c))


def fejer_alt(n: int, radix: RadixSequence, N: int) -> GridFunction:
    """(D_0 + ... + D_{n-1}) / n, the other indexing that appears for K_n.

    It differs from :func:`fejer` by D_n / n (D_0 = 0); kept only as a diagnostic.
    """
    _check_n(n, radix, N)
    return GridFunction(radix, N, (fejer_table(radix, N)[n] - dirichlet_table(radix, N)[n]) / n)


def fejer_gat(n: int, radix: RadixSequence, N: int) -> GridFunction:
    """K_{M_n} by Gat's formula."""
    if not 0 <= n <= N:
        raise RangeError(f"Gat index {n} outside [0, {N}]")
    digits = digit_table(radix, N)
    s = first_nonzero_digit(radix, N)
    out = np.zeros(radix.M[N], dtype=np.complex128)
    out[s >= n] = (radix.M[n] + 1) / 2
    for t in range(n):
        # x in I_t \ I_{t+1} with x - x_t e_t in I_n: digits t+1..n-1 vanish
        mask = (s == t) & np.all(digits[:, t + 1:n] == 0, axis=1)
        if not mask.any():
            continue
        r = unit_roots(radix.m[t])[digits[mask, t]]
        denom = 1 - r
        if np.min(np.abs(denom)) < 1e-14:
            raise DomainError("1 - r_t vanished on I_t minus I_{t+1}")
        out[mask] = radix.M[t] / denom
    return GridFunction(radix, N, out)


def fejer_block(s: int, n: int, radix: RadixSequence, N: int) -> GridFunction:
    """s M_n K_{s M_n} from the block identity with D_{M_n} and K_{M_n}."""
    if not 1 <= s < radix.m[n]:
        raise DomainError(f"block multiplier {s} outside [1, m_{n})")
    r = rademacher(n, radix, N).values
    Mn = radix.M[n]
    first = np.zeros(radix.M[N], dtype=np.complex128)
    for l in range(s):
        first = first + _geometric(r, 0, l)
    out = first * Mn * paley(n, radix, N).values + _geometric(r, 0, s) * Mn * fejer_gat(n, radix, N).values
    return GridFunction(radix, N, out)


def dirichlet_block(s: int, n: int, radix: RadixSequence, N: int) -> GridFunction:
    """D_{s M_n} = D_{M_n} sum_{k<s} r_n^k."""
    r = rademacher(n, radix, N).values
    return GridFunction(radix, N, paley(n, radix, N).values * _geometric(r, 0, s))


def fejer_closed(n: int, radix: RadixSequence, N: int) -> GridFunction:
    """K_n assembled from its digit blocks, highest digit first."""
    _check_n(n, radix, N)
    if n == radix.M[N]:
        return fejer_gat(N, radix, N)
    digits = expand_index(n, radix)
    blocks = [(j, digits[j]) for j in range(N - 1, -1, -1) if digits[j]]
    size = radix.M[N]
    acc = np.zeros(size, dtype=np.complex128)
    phase = np.ones(size, dtype=np.complex128)
    rest = n
    for j, s in blocks:
        rest -= s * radix.M[j]
        acc += phase * fejer_block(s, j, radix, N).values
        if rest:
            acc += phase * rest * dirichlet_block(s, j, radix, N).values
        phase = phase * rademacher(j, radix, N).values ** s
    return GridFunction(radix, N, acc / n)


def norlund_kernel(n: int, w: WeightSequence, radix: RadixSequence, N: int) -> GridFunction:
    """F_n = (1/Q_n) sum_{k=1}^n q_{n-k} D_k."""
    _check_n(n, radix, N)
    q = w.q(n)
    Qn = float(np.sum(q))
    if Qn <= 0:
        raise DegenerateWeightsError(f"Q_{n} = 0 for {w.label}")
    coeffs = q[n - np.arange(1, n + 1)]
    if _use_table(radix, N):
        vals = coeffs @ dirichlet_table(radix, N)[1:n + 1] / Qn
        return GridFunction(radix, N, vals)
    c = np.zeros(radix.M[N], dtype=np.complex128)
    c[:n] = np.cumsum(coeffs[::-1])[::-1] / Qn
    return inverse(CoefficientVector(radix, N, c))


def lebesgue_constant(n: int, radix: RadixSequence, N: int) -> float:
    """L_n = ||D_n||_1."""
    return lp_norm(dirichlet(n, radix, N), 1)


def lebesgue_constants(radix: RadixSequence, N: int) -> np.ndarray:
    """L_1, ..., L_{M_N} (index n-1)."""
    d = dirichlet_table(radix, N)[1:]
    return np.abs(d).mean(axis=1)


def lukomskii_bounds(n: int, radix: RadixSequence, start: int = 0) -> tuple[float, float]:
    v, v_star = variation(n, radix, start)
    lam = radix.lam
    lower = v / (4 * lam) + v_star / lam + 1 / (2 * lam)
    upper = 1.5 * v + 4 * v_star - 1
    return lower, upper


@dataclass
class KernelReport:
    n: int
    l1_norm: float
    closed_vs_brute_dev: float
    flags: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.flags.values())


@dataclass
class BoundReport:
    """Outcome of a pointwise lower-bound scan: ``min_slack`` < 0 means a violation."""

    name: str
    checked_points: int
    violations: int
    min_slack: float
    cases: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.violations == 0


def kernel_report(n: int, radix: RadixSequence, N: int, tol: float = 1e-9) -> KernelReport:
    brute = dirichlet(n, radix, N)
    dev = brute.max_dev(dirichlet_closed(n, radix, N))
    L = lp_norm(brute, 1)
    lower, upper = lukomskii_bounds(n, radix)
    flags = {"closed_form": dev <= tol, "lukomskii": lower <= L + 1e-12 and L <= upper + 1e-12}
    return KernelReport(n, L, dev, flags)


def kernel_lower_bound_q(n: int, radix: RadixSequence, N: int, rel_tol: float = 1e-12) -> BoundReport:
    """q_{n-1} |K_{q_{n-1}}(x)| >= M_{2k} M_{2s} / 8 on the cosets
    I_{2n}(0,..,x_{2k} != 0, 0,..,0, x_{2s} != 0, x_{2s+1},..,x_{2n-1}),
    k = 0..n-3, s = k+2..n-1."""
    if n <= 2:
        raise DomainError("the q-index bound needs n > 2")
    if 2 * n > N:
        raise RangeError(f"resolution {N} below 2n = {2 * n}")
    q = special_index_q(n - 1, radix)
    values = q * np.abs(fejer(q, radix, N).values)
    digits = digit_table(radix, N)
    report = BoundReport("q_index_fejer", 0, 0, math.inf)
    for k in range(0, n - 2):
        for s in range(k + 2, n):
            mask = digits[:, 2 * k] != 0
            mask &= digits[:, 2 * s] != 0
            zero_cols = [j for j in range(2 * s) if j != 2 * k]
            if zero_cols:
                mask &= np.all(digits[:, zero_cols] == 0, axis=1)
            bound = radix.M[2 * k] * radix.M[2 * s] / 8
            slack = values[mask] - bound
            report.checked_points += int(mask.sum())
            report.violations += int(np.sum(slack < -rel_tol * bound))
            if slack.size:
                report.min_slack = min(report.min_slack, float(slack.min()))
            report.cases.append((k, s, int(mask.sum()), float(slack.min()) if slack.size else math.inf))
    return report


def dirichlet_lower_bound(radix: RadixSequence, N: int, rel_tol: float = 1e-12,
                          unit_digit_only: bool = False) -> BoundReport:
    """|D_n(x)| >= M_<n> on I_<n> minus I_<n>+1, for every n < M_N with |n| != <n>.

    ``unit_digit_only`` restricts x to x_<n> = 1, the case the Rademacher-sum estimate
    behind the bound actually covers.
    """
    table = dirichlet_table(radix, N)
    s = first_nonzero_digit(radix, N)
    digits = digit_table(radix, N)
    report = BoundReport("dirichlet_lower", 0, 0, math.inf)
    for n in range(1, radix.M[N]):
        low, high, _ = lead_trail(n, radix)
        if low == high:
            continue
        mask = s == low
        if unit_digit_only:
            mask &= digits[:, low] == 1
        bound = radix.M[low]
        slack = np.abs(table[n][mask]) - bound
        bad = slack < -rel_tol * bound
        report.checked_points += int(mask.sum())
        report.violations += int(bad.sum())
        report.min_slack = min(report.min_slack, float(slack.min()))
        if bad.any():
            report.cases.append(n)
    return report


def fejer_lower_bound(radix: RadixSequence, N: int, rel_tol: float = 1e-12) -> BoundReport:
    """n |K_n(x)| >= M_<n>^2 / (2 pi lambda) on I_{<n>+1}(e_{<n>-1} + e_<n>),
    for n < M_N with <n> != |n| and <n> >= 1."""
    table = fejer_table(radix, N)
    digits = digit_table(radix, N)
    lam = radix.lam
    report = BoundReport("fejer_lower", 0, 0, math.inf)
    for n in range(1, radix.M[N]):
        low, high, _ = lead_trail(n, radix)
        if low == high or low == 0:
            continue
        mask = np.all(digits[:, :low - 1] == 0, axis=1)
        mask &= (digits[:, low - 1] == 1) & (digits[:, low] == 1)
        bound = radix.M[low] ** 2 / (2 * math.pi * lam)
        slack = np.abs(table[n][mask]) - bound
        bad = slack < -rel_tol * bound
        report.checked_points += int(mask.sum())
        report.violations += int(bad.sum())
        report.min_slack = min(report.min_slack, float(slack.min()))
        if bad.any():
            report.cases.append(n)
    return report


def fejer_block_lower_bound(radix: RadixSequence, N: int, rel_tol: float = 1e-12) -> BoundReport:
    """|K_{s M_n}(x)| >= M_n / (2 pi s) on I_{n+1}(e_{n-1} + e_n), 1 <= n < N."""
    digits = digit_table(radix, N)
    report = BoundReport("fejer_block_lower", 0, 0, math.inf)
    for n in range(1, N):
        mask = np.all(digits[:, :n - 1] == 0, axis=1)
        mask &= (digits[:, n - 1] == 1) & (digits[:, n] == 1)
        for s in range(1, radix.m[n]):
            vals = np.abs(fejer(s * radix.M[n], radix, N).values[mask])
            bound = radix.M[n] / (2 * math.pi * s)
            slack = vals - bound
            report.checked_points += int(mask.sum())
            report.violations += int(np.sum(slack < -rel_tol * bound))
            report.min_slack = min(report.min_slack, float(slack.min()))
    return report


def dirichlet_exact_counts(n: int, radix: RadixSequence, N: int) -> np.ndarray:
    """D_n on the grid as reduced cyclotomic integer vectors (one row per point)."""
    _check_n(n, radix, N)
    phases = phase_table(radix, N)[:n]
    counts = cyclotomic.exponent_counts(phases, radix.M[N])
    return cyclotomic.reduce_counts(counts, radix.M[N])


def paley_exact_deviation(n: int, radix: RadixSequence, N: int) -> int:
    """Largest integer coordinate of D_{M_n} - M_n 1_{I_n} in exact arithmetic."""
    exact = dirichlet_exact_counts(radix.M[n], radix, N)
    target = np.zeros_like(exact)
    target[first_nonzero_digit(radix, N) >= n, 0] = radix.M[n]
    return int(np.max(np.abs(exact - target)))
