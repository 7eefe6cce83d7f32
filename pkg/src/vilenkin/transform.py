"""Rademacher and Vilenkin functions, and the forward/inverse Vilenkin transform.

The fast path is the separable one: psi_n(x) = prod_k exp(2 pi i n_k x_k / m_k), so the
transform factors into one dense m_k x m_k multiply per coordinate axis.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .grid import GridFunction, pairwise_sum
from .group import RadixSequence, RangeError, ShapeError, _check_resolution, digit_table


@lru_cache(maxsize=256)
def unit_roots(order: int) -> np.ndarray:
    """exp(2 pi i j / order) for j < order, exact at the quarter turns."""
    j = np.arange(order)
    roots = np.exp(2j * np.pi * j / order)
    for q, val in enumerate((1, 1j, -1, -1j)):
        hit = (4 * j) == q * order
        roots[hit] = val
    roots.setflags(write=False)
    return roots


@lru_cache(maxsize=256)
def _dft_matrix(m: int, sign: int) -> np.ndarray:
    """W[a, b] = exp(sign * 2 pi i a b / m)."""
    a = np.arange(m)
    mat = unit_roots(m)[(sign * np.outer(a, a)) % m]
    mat.setflags(write=False)
    return mat


@lru_cache(maxsize=32)
def phase_table(radix: RadixSequence, N: int) -> np.ndarray:
    """P[n, x] = sum_k n_k x_k (M_N / m_k) mod M_N, so psi_n(x) = w^P with w = e^{2 pi i/M_N}."""
    _check_resolution(radix, N)
    digits = digit_table(radix, N)
    order = radix.M[N]
    out = np.zeros((order, order), dtype=np.int64)
    for k in range(N):
        scale = order // radix.m[k]
        out += np.outer(digits[:, k], digits[:, k] * scale)
        out %= order
    out.setflags(write=False)
    return out


def character_matrix(radix: RadixSequence, N: int) -> np.ndarray:
    """Row n holds psi_n on the grid."""
    return unit_roots(radix.M[N])[phase_table(radix, N)]


def rademacher(k: int, radix: RadixSequence, N: int) -> GridFunction:
    if not 0 <= k < N:
        raise RangeError(f"r_{k} needs k < N = {N}")
    digits = digit_table(radix, N)
    return GridFunction(radix, N, unit_roots(radix.m[k])[digits[:, k]])


def vilenkin_function(n: int, radix: RadixSequence, N: int) -> GridFunction:
    order = radix.M[N] if 0 <= N <= radix.n_max else None
    if order is None or not 0 <= n < order:
        raise RangeError(f"psi_{n} needs n < M_N")
    digits = digit_table(radix, N)
    n_digits = digits[n]
    phase = np.zeros(order, dtype=np.int64)
    for k in range(N):
        phase += n_digits[k] * digits[:, k] * (order // radix.m[k])
    return GridFunction(radix, N, unit_roots(order)[phase % order])


@dataclass(frozen=True, eq=False)
class CoefficientVector:
    radix: RadixSequence
    N: int
    coefficients: np.ndarray

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=np.complex128)
        if c.shape != (self.radix.M[self.N],):
            raise ShapeError(f"expected {self.radix.M[self.N]} coefficients, got {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    def __getitem__(self, n):
        return self.coefficients[n]

    def __len__(self):
        return self.coefficients.size

    def max_dev(self, other: "CoefficientVector") -> float:
        return float(np.max(np.abs(self.coefficients - other.coefficients)))

    @classmethod
    def unit(cls, radix, N, n) -> "CoefficientVector":
        c = np.zeros(radix.M[N], dtype=np.complex128)
        c[n] = 1.0
        return cls(radix, N, c)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "re", "im"])
        for n, v in enumerate(self.coefficients):
            writer.writerow([n, repr(float(v.real)), repr(float(v.imag))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, radix: RadixSequence, N: int) -> "CoefficientVector":
        c = np.zeros(radix.M[N], dtype=np.complex128)
        count = 0
        for row in csv.DictReader(io.StringIO(text)):
            c[int(row["n"])] = float(row["re"]) + 1j * float(row["im"])
            count += 1
        if count != radix.M[N]:
            raise ShapeError(f"expected {radix.M[N]} rows, got {count}")
        return cls(radix, N, c)


def separable_transform(values: np.ndarray, radix: RadixSequence, N: int, sign: int) -> np.ndarray:
    """Apply exp(sign 2 pi i a b / m_k) along every coordinate axis.

    ``values`` may carry leading batch axes; the last axis has length M_N.
    """
    batch = values.shape[:-1]
    # C order with x_0 fastest means axis -1 is coordinate 0.
    a = values.reshape(batch + tuple(reversed(radix.m[:N])))
    nb = len(batch)
    for k in range(N):
        axis = nb + (N - 1 - k)
        a = np.moveaxis(a, axis, -1) @ _dft_matrix(radix.m[k], sign).T
        a = np.moveaxis(a, -1, axis)
    return np.ascontiguousarray(a).reshape(values.shape)


def forward(f: GridFunction) -> CoefficientVector:
    """f^(n) = integral of f * conj(psi_n), by the separable mixed-radix factorization."""
    c = separable_transform(f.values, f.radix, f.N, -1) / f.size
    return CoefficientVector(f.radix, f.N, c)


def forward_naive(f: GridFunction) -> CoefficientVector:
    """Direct inner products against every conj(psi_n): the O(M_N^2) oracle."""
    chars = character_matrix(f.radix, f.N)
    c = pairwise_sum(np.conj(chars) * f.values[None, :], axis=1) / f.size
    return CoefficientVector(f.radix, f.N, c)


def inverse(c: CoefficientVector) -> GridFunction:
    """Synthesis sum_n c(n) psi_n."""
    return GridFunction(c.radix, c.N, separable_transform(c.coefficients, c.radix, c.N, +1))


def inverse_batch(coefficients: np.ndarray, radix: RadixSequence, N: int) -> np.ndarray:
    """Synthesis for a stack of coefficient rows; returns the value rows."""
    return separable_transform(coefficients, radix, N, +1)


def convolve_fast(f: GridFunction, g: GridFunction) -> GridFunction:
    f._check_same(g)
    fc, gc = forward(f), forward(g)
    return inverse(CoefficientVector(f.radix, f.N, fc.coefficients * gc.coefficients))
