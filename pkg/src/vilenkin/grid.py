"""Functions constant on rank-N cosets, stored as M_N complex samples."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .group import (DomainError, GroupPoint, RadixSequence, ShapeError, _check_resolution,
                    digit_table, shifted_indices, subtraction_table)

# Relative shave applied to the weak-L_p thresholds.
WEAK_EPS = 1e-12


def pairwise_sum(values: np.ndarray, axis: int = -1):
    """Deterministic pairwise (tree) reduction along ``axis``."""
    a = np.moveaxis(np.asarray(values), axis, -1)
    while a.shape[-1] > 1:
        if a.shape[-1] % 2:
            pad = np.zeros(a.shape[:-1] + (1,), dtype=a.dtype)
            a = np.concatenate([a, pad], axis=-1)
        a = a[..., 0::2] + a[..., 1::2]
    if a.shape[-1] == 0:
        return np.zeros(a.shape[:-1], dtype=a.dtype)
    return a[..., 0]


@dataclass(frozen=True, eq=False)
class GridFunction:
    """A step function on the rank-``N`` cosets of G_m.

    ``values[t]`` is the value on I_N(x) where x has the digits of t, so index order is
    little-endian in the coordinates (x_0 varies fastest).
    """

    radix: RadixSequence
    N: int
    values: np.ndarray

    def __post_init__(self):
        _check_resolution(self.radix, self.N)
        values = np.array(self.values, dtype=np.complex128)
        if values.shape != (self.radix.M[self.N],):
            raise ShapeError(f"expected {self.radix.M[self.N]} values, got shape {values.shape}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def size(self) -> int:
        return self.radix.M[self.N]

    @classmethod
    def constant(cls, radix, N, c=1.0) -> "GridFunction":
        return cls(radix, N, np.full(radix.M[N], c, dtype=np.complex128))

    @classmethod
    def zeros(cls, radix, N) -> "GridFunction":
        return cls.constant(radix, N, 0.0)

    @classmethod
    def indicator(cls, radix, N, n: int, point: GroupPoint | None = None) -> "GridFunction":
        """Indicator of the coset I_n(point); I_n when ``point`` is None."""
        digits = digit_table(radix, N)
        target = np.zeros(n, dtype=np.int64) if point is None else np.asarray(point.digits[:n])
        mask = np.all(digits[:, :n] == target, axis=1)
        return cls(radix, N, mask.astype(np.complex128))

    @classmethod
    def random(cls, radix, N, rng: np.random.Generator, complex_values=True) -> "GridFunction":
        re = rng.standard_normal(radix.M[N])
        im = rng.standard_normal(radix.M[N]) if complex_values else 0.0
        return cls(radix, N, re + 1j * im)

    def _check_same(self, other: "GridFunction"):
        if not isinstance(other, GridFunction):
            raise ShapeError("operand is not a GridFunction")
        if other.radix != self.radix or other.N != self.N:
            raise ShapeError("grid functions live on different grids")

    def __add__(self, other):
        return combine(self, other, "add")

    def __sub__(self, other):
        return combine(self, other, "sub")

    def __mul__(self, other):
        if isinstance(other, GridFunction):
            return combine(self, other, "mul")
        return combine(self, None, "scale", other)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return combine(self, None, "scale", 1.0 / c)

    def __neg__(self):
        return combine(self, None, "scale", -1.0)

    def __abs__(self):
        return combine(self, None, "abs")

    def conj(self) -> "GridFunction":
        return GridFunction(self.radix, self.N, np.conj(self.values))

    def at(self, x: GroupPoint) -> complex:
        return complex(self.values[x.index()])

    def max_dev(self, other: "GridFunction") -> float:
        self._check_same(other)
        return float(np.max(np.abs(self.values - other.values)))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "re", "im"])
        for t, v in enumerate(self.values):
            writer.writerow([t, repr(float(v.real)), repr(float(v.imag))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, radix: RadixSequence, N: int) -> "GridFunction":
        rows = list(csv.DictReader(io.StringIO(text)))
        values = np.zeros(radix.M[N], dtype=np.complex128)
        seen = set()
        for row in rows:
            t = int(row["t"])
            if not 0 <= t < radix.M[N] or t in seen:
                raise ShapeError(f"bad or duplicate row index {t}")
            seen.add(t)
            values[t] = float(row["re"]) + 1j * float(row["im"])
        if len(seen) != radix.M[N]:
            raise ShapeError(f"expected {radix.M[N]} rows, got {len(seen)}")
        return cls(radix, N, values)


def combine(f: GridFunction, g: GridFunction | None, op: str, scalar=None) -> GridFunction:
    """Pointwise add/sub/mul of two grid functions, or scale/abs of one."""
    if op in ("add", "sub", "mul"):
        f._check_same(g)
        a, b = f.values, g.values
        out = a + b if op == "add" else a - b if op == "sub" else a * b
    elif op == "scale":
        out = f.values * scalar
    elif op == "abs":
        out = np.abs(f.values)
    else:
        raise DomainError(f"unknown pointwise op {op!r}")
    return GridFunction(f.radix, f.N, out)


def integrate(f: GridFunction) -> complex:
    """Haar integral: the coset average."""
    return complex(pairwise_sum(f.values) / f.size)


def _check_p(p):
    if not p > 0:
        raise DomainError(f"p must be positive, got {p}")


def lp_norm(f: GridFunction, p: float) -> float:
    _check_p(p)
    a = np.abs(f.values)
    if math.isinf(p):
        return float(a.max())
    return float((pairwise_sum(a ** p) / f.size) ** (1.0 / p))


def weak_lp_norm(f: GridFunction, p: float) -> float:
    """sup over lambda of lambda * mu(|f| > lambda)^(1/p).

    The supremum is approached just below each attained level |v|, so only the distinct
    values of |f| need checking.
    """
    _check_p(p)
    a = np.abs(f.values)
    levels = np.unique(a[a > 0])
    if levels.size == 0:
        return 0.0
    sorted_a = np.sort(a)
    thresholds = levels * (1.0 - WEAK_EPS)
    # count of samples strictly above each threshold
    above = a.size - np.searchsorted(sorted_a, thresholds, side="right")
    if math.isinf(p):
        return float(levels.max())
    return float(np.max(thresholds * (above / a.size) ** (1.0 / p)))


def translate(f: GridFunction, h: GroupPoint) -> GridFunction:
    """g(x) = f(x - h)."""
    if h.radix != f.radix or h.resolution != f.N:
        raise ShapeError("translation point resolution mismatch")
    idx = shifted_indices(f.radix, f.N, h.digits, sign=-1)
    return GridFunction(f.radix, f.N, f.values[idx])


def convolve_direct(f: GridFunction, g: GridFunction) -> GridFunction:
    """(f*g)(x) = mean over t of f(t) g(x - t); the quadratic reference."""
    f._check_same(g)
    table = subtraction_table(f.radix, f.N)
    products = g.values[table] * f.values[None, :]
    return GridFunction(f.radix, f.N, pairwise_sum(products, axis=1) / f.size)


def coset_average(f: GridFunction, n: int) -> GridFunction:
    """Average of f over each rank-n coset: the conditional expectation E_n f."""
    if not 0 <= n <= f.N:
        raise DomainError(f"level {n} outside [0, {f.N}]")
    Mn = f.radix.M[n]
    blocks = f.values.reshape(f.size // Mn, Mn)
    mean = pairwise_sum(blocks, axis=0) / blocks.shape[0]
    return GridFunction(f.radix, f.N, np.tile(mean, f.size // Mn))
