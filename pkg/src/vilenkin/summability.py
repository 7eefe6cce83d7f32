"""Weight families, partial sums, summability means, and maximal operators.

Every Norlund mean is applied as a Fourier multiplier: since
t_n f = (1/Q_n) sum_{k=1}^n q_{n-k} S_k f and S_k keeps the coefficients j < k, the
coefficient f^(j) is multiplied by (1/Q_n) sum_{k=j+1}^n q_{n-k} = Q_{n-j} / Q_n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .grid import GridFunction, coset_average, lp_norm, translate
from .group import DomainError, GroupPoint, RangeError, VilenkinError
from .transform import CoefficientVector, forward, inverse, inverse_batch


class DegenerateWeightsError(VilenkinError):
    pass


def cesaro_coefficient(n: int, alpha: float) -> float:
    """A_n^alpha = (alpha+1)...(alpha+n)/n!, with A_0^alpha = 1."""
    if alpha < 0 and float(alpha).is_integer():
        raise DomainError(f"alpha = {alpha} is a negative integer")
    if n < 0:
        raise DomainError("n must be nonnegative")
    return float(cesaro_table(n + 1, alpha)[n])


def cesaro_table(length: int, alpha: float) -> np.ndarray:
    """A_0^alpha, ..., A_{length-1}^alpha by the running product."""
    if alpha < 0 and float(alpha).is_integer():
        raise DomainError(f"alpha = {alpha} is a negative integer")
    j = np.arange(1, length, dtype=np.float64)
    return np.concatenate([[1.0], np.cumprod((alpha + j) / j)])[:length]


def iterated_log(x: np.ndarray, depth: int) -> np.ndarray:
    """log applied ``depth`` times; nan wherever some stage leaves (0, inf)."""
    out = np.asarray(x, dtype=np.float64).copy()
    for _ in range(depth):
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(out > 0, np.log(np.where(out > 0, out, 1.0)), np.nan)
    return out


@dataclass(frozen=True)
class WeightSequence:
    """Norlund generator {q_k}.

    ``family`` is one of fejer, cesaro, riesz, norlund_log, kappa, custom; ``params``
    holds alpha (cesaro, riesz), (alpha, beta) for kappa, or the q list for custom.
    """

    family: str
    params: tuple = ()
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    FAMILIES = ("fejer", "cesaro", "riesz", "norlund_log", "kappa", "custom")

    def __post_init__(self):
        if self.family not in self.FAMILIES:
            raise DomainError(f"unknown weight family {self.family!r}")
        if self.family in ("cesaro", "riesz") and len(self.params) != 1:
            raise DomainError(f"{self.family} needs one parameter alpha")
        if self.family == "kappa":
            if len(self.params) != 2:
                raise DomainError("kappa needs (alpha, beta)")
            alpha, beta = self.params
            if not alpha > 0 or int(beta) != beta or beta < 1:
                raise DomainError("kappa needs alpha > 0 and integer beta >= 1")
        if self.family == "custom":
            q = tuple(float(v) for v in self.params)
            if any(v < 0 or not math.isfinite(v) for v in q):
                raise DomainError("custom weights must be finite and nonnegative")
            object.__setattr__(self, "params", q)
        if self.family == "cesaro":
            cesaro_table(1, self.params[0] - 1)

    @classmethod
    def parse(cls, spec: str) -> "WeightSequence":
        """``fejer``, ``cesaro:0.5``, ``riesz:0.5``, ``nlog``, ``kappa:1:1``."""
        parts = spec.strip().split(":")
        name = parts[0]
        try:
            if name == "fejer":
                return cls("fejer")
            if name in ("cesaro", "riesz"):
                return cls(name, (float(parts[1]),))
            if name in ("nlog", "norlund_log"):
                return cls("norlund_log")
            if name == "kappa":
                return cls("kappa", (float(parts[1]), int(parts[2])))
        except (IndexError, ValueError) as exc:
            raise DomainError(f"bad weight spec {spec!r}") from exc
        raise DomainError(f"bad weight spec {spec!r}")

    @property
    def label(self) -> str:
        if self.family == "custom":
            return "custom"
        return ":".join([self.family] + [f"{v:g}" for v in self.params])

    def q(self, length: int) -> np.ndarray:
        """q_0, ..., q_{length-1}."""
        cached = self._cache.get("q")
        if cached is not None and cached.size >= length:
            return cached[:length]
        k = np.arange(length, dtype=np.float64)
        if self.family == "fejer":
            q = np.ones(length)
        elif self.family == "cesaro":
            q = cesaro_table(length, self.params[0] - 1)
        elif self.family == "riesz":
            with np.errstate(divide="ignore"):
                q = np.where(k == 0, 1.0, k ** (self.params[0] - 1))
        elif self.family == "norlund_log":
            with np.errstate(divide="ignore"):
                q = np.where(k == 0, 0.0, 1.0 / np.where(k == 0, 1, k))
        elif self.family == "kappa":
            alpha, beta = self.params
            with np.errstate(divide="ignore"):
                vals = iterated_log(k ** alpha, int(beta))
            q = np.where(np.isfinite(vals) & (vals > 0) & (k > 0), vals, 0.0)
        else:
            if length > len(self.params):
                raise RangeError(f"custom weights only define {len(self.params)} terms")
            q = np.array(self.params[:length])
        self._cache["q"] = q
        return q

    def Q(self, length: int) -> np.ndarray:
        """Q_0, ..., Q_{length-1} with Q_n = q_0 + ... + q_{n-1}."""
        return np.concatenate([[0.0], np.cumsum(self.q(max(length - 1, 0)))])[:length]

    def Q_n(self, n: int) -> float:
        return float(self.Q(n + 1)[n])

    def is_nonincreasing(self, length: int) -> bool:
        return bool(np.all(np.diff(self.q(length)) <= 0))

    def is_nondecreasing(self, length: int) -> bool:
        return bool(np.all(np.diff(self.q(length)) >= 0))


def log_sum(n: int) -> float:
    """l_n = 1 + 1/2 + ... + 1/(n-1)."""
    return float(np.sum(1.0 / np.arange(1, n))) if n > 1 else 0.0


def regularity_ratio(w: WeightSequence, n: int) -> float:
    """q_{n-1} / Q_n; tends to 0 exactly for regular methods."""
    if n < 1:
        raise DomainError("n must be >= 1")
    Qn = w.Q_n(n)
    if Qn <= 0:
        raise DegenerateWeightsError(f"Q_{n} = 0 for {w.label}")
    return float(w.q(n)[n - 1] / Qn)


@dataclass(frozen=True)
class MeanSpec:
    """One summability mean at index n.

    kind: ``norlund`` (``weights`` required), ``riesz_log``, ``cesaro`` (normalized by
    A_n^alpha as in the classical (C, alpha) definition), ``partial`` (S_n) or
    ``generic`` (``coeffs[k-1]`` multiplies S_k f, k = 1..n).
    """

    kind: str
    n: int
    weights: WeightSequence | None = None
    coeffs: tuple = ()
    alpha: float | None = None

    def __post_init__(self):
        if self.n < 1 and self.kind != "partial":
            raise DomainError("means need n >= 1")
        if self.kind == "norlund" and self.weights is None:
            raise DomainError("norlund mean needs weights")
        if self.kind == "generic" and len(self.coeffs) != self.n:
            raise DegenerateWeightsError(
                f"generic mean needs {self.n} coefficients, got {len(self.coeffs)}")
        if self.kind == "riesz_log" and self.n < 2:
            raise DegenerateWeightsError("riesz_log needs n >= 2 (l_1 = 0)")
        if self.kind not in ("norlund", "riesz_log", "cesaro", "partial", "generic"):
            raise DomainError(f"unknown mean kind {self.kind!r}")

    def sk_coefficients(self) -> np.ndarray:
        """c_k multiplying S_k f for k = 1..n (index k-1)."""
        n = self.n
        if self.kind == "generic":
            return np.asarray(self.coeffs, dtype=np.float64)
        if self.kind == "partial":
            c = np.zeros(n)
            c[-1] = 1.0
            return c
        if self.kind == "riesz_log":
            k = np.arange(1, n + 1, dtype=np.float64)
            return np.where(k < n, 1.0 / (log_sum(n) * k), 0.0)
        if self.kind == "cesaro":
            A = cesaro_table(n + 1, self.alpha - 1)
            return A[n - np.arange(1, n + 1)] / cesaro_table(n + 1, self.alpha)[n]
        q = self.weights.q(n)
        Qn = float(np.sum(q))
        if Qn <= 0:
            raise DegenerateWeightsError(f"Q_{n} = 0 for {self.weights.label}")
        return q[n - np.arange(1, n + 1)] / Qn

    def multiplier(self) -> np.ndarray:
        """w_j for j < n: the factor applied to f^(j)."""
        n = self.n
        if self.kind == "partial":
            return np.ones(n)
        if self.kind == "norlund" and self.weights.q(1)[0] > 0:
            Q = self.weights.Q(n + 1)
            if Q[n] <= 0:
                raise DegenerateWeightsError(f"Q_{n} = 0 for {self.weights.label}")
            return Q[n - np.arange(n)] / Q[n]
        if self.kind == "cesaro":
            A = cesaro_table(n + 1, self.alpha)
            return A[n - 1 - np.arange(n)] / A[n]
        # generic route (also Norlund families with q_0 = 0): w_j = sum_{k > j} c_k
        c = self.sk_coefficients()
        return np.cumsum(c[::-1])[::-1]


def fejer_spec(n: int) -> MeanSpec:
    return MeanSpec("norlund", n, WeightSequence("fejer"))


def partial_sum(f: GridFunction, n: int) -> GridFunction:
    """S_n f: keep the coefficients below n."""
    if not 0 <= n <= f.size:
        raise RangeError(f"S_{n} needs 0 <= n <= M_N = {f.size}")
    c = forward(f).coefficients.copy()
    c[n:] = 0
    return inverse(CoefficientVector(f.radix, f.N, c))


def _full_multiplier(spec: MeanSpec, size: int) -> np.ndarray:
    if spec.n > size:
        raise RangeError(f"mean index {spec.n} exceeds M_N = {size}")
    w = np.zeros(size)
    w[:spec.n] = spec.multiplier()
    return w


def mean(f: GridFunction, spec: MeanSpec) -> GridFunction:
    c = forward(f).coefficients * _full_multiplier(spec, f.size)
    return inverse(CoefficientVector(f.radix, f.N, c))


def mean_by_partial_sums(f: GridFunction, spec: MeanSpec) -> GridFunction:
    """Same mean, summed literally as sum_k c_k S_k f (a slow cross-check)."""
    c = spec.sk_coefficients()
    fc = forward(f).coefficients
    rows = np.zeros((spec.n, f.size), dtype=np.complex128)
    for k in range(1, spec.n + 1):
        rows[k - 1, :k] = fc[:k]
    partials = inverse_batch(rows, f.radix, f.N)
    return GridFunction(f.radix, f.N, c @ partials)


MeanFactory = Callable[[int], MeanSpec]


def mean_factory(family) -> MeanFactory:
    """Accepts a WeightSequence, a MeanFactory, or one of 'partial', 'fejer', 'riesz_log',
    or 'cesaro:<alpha>'."""
    if isinstance(family, WeightSequence):
        return lambda n: MeanSpec("norlund", n, family)
    if callable(family):
        return family
    if family == "partial":
        return lambda n: MeanSpec("partial", n)
    if family == "fejer":
        return fejer_spec
    if family == "riesz_log":
        return lambda n: MeanSpec("riesz_log", n)
    if isinstance(family, str) and family.startswith("cesaro:"):
        alpha = float(family.split(":", 1)[1])
        return lambda n: MeanSpec("cesaro", n, alpha=alpha)
    if isinstance(family, str):
        ws = WeightSequence.parse(family)
        return lambda n: MeanSpec("norlund", n, ws)
    raise DomainError(f"unknown mean family {family!r}")


def means_batch(f: GridFunction, family, indices: Sequence[int]) -> np.ndarray:
    """Rows t_n f on the grid for every n in ``indices``."""
    factory = mean_factory(family)
    fc = forward(f).coefficients
    rows = np.zeros((len(indices), f.size), dtype=np.complex128)
    for i, n in enumerate(indices):
        if n == 0:
            continue
        rows[i] = fc * _full_multiplier(factory(n), f.size)
    return inverse_batch(rows, f.radix, f.N)


# Weighted maximal presets: name -> w(n; p, alpha).
WEIGHT_PRESETS: dict[str, Callable[..., float]] = {
    "pow_1/p-1": lambda n, p=1.0, alpha=0.0: (n + 1) ** (1 / p - 1),
    "log": lambda n, p=1.0, alpha=0.0: math.log(n + 1),
    "pow_1/p-2": lambda n, p=1.0, alpha=0.0: (n + 1) ** (1 / p - 2),
    "log2": lambda n, p=1.0, alpha=0.0: math.log(n + 1) ** 2,
    "pow_1/p-1-alpha": lambda n, p=1.0, alpha=0.0: (n + 1) ** (1 / p - 1 - alpha),
    "log_1+alpha": lambda n, p=1.0, alpha=0.0: math.log(n + 1) ** (1 + alpha),
}


def maximal_function(f: GridFunction, family, index_set: Iterable[int],
                     weight=None, p: float = 1.0, alpha: float = 0.0) -> GridFunction:
    """Pointwise sup over n in ``index_set`` of |t_n f| / w(n).

    ``weight`` is None (w = 1), a preset name from WEIGHT_PRESETS, or a callable n -> w(n).
    """
    indices = sorted(set(int(n) for n in index_set))
    if not indices:
        raise DomainError("empty index set")
    if indices[0] < 0 or indices[-1] > f.size:
        raise RangeError("index set must lie in [0, M_N]")
    if weight is None:
        wfun = lambda n: 1.0
    elif isinstance(weight, str):
        preset = WEIGHT_PRESETS[weight]
        wfun = lambda n: preset(n, p=p, alpha=alpha)
    else:
        wfun = weight
    rows = np.abs(means_batch(f, family, indices))
    scale = np.array([wfun(n) for n in indices], dtype=np.float64)
    return GridFunction(f.radix, f.N, np.max(rows / scale[:, None], axis=0))


def modulus_lp(f: GridFunction, n: int, p: float) -> float:
    """omega_p(1/M_n, f): sup over grid translations h in I_n of ||f(. - h) - f||_p."""
    if not 0 <= n <= f.N:
        raise RangeError(f"level {n} outside [0, {f.N}]")
    Mn = f.radix.M[n]
    best = 0.0
    for t in range(0, f.size, Mn):
        h = GroupPoint.from_index(t, f.radix, f.N)
        best = max(best, lp_norm(translate(f, h) - f, p))
    return best


def modulus_hp(f: GridFunction, n: int, p: float) -> float:
    """omega_{H_p}(1/M_n, f) = ||f - S_{M_n} f||_{H_p}."""
    from .hardy import hp_norm

    if not 0 <= n <= f.N:
        raise RangeError(f"level {n} outside [0, {f.N}]")
    return hp_norm(f - coset_average(f, n), p)


def best_approx_l2(f: GridFunction, n: int) -> float:
    """E_n(f, L_2) = ||f - S_n f||_2 (orthogonal projection)."""
    return lp_norm(f - partial_sum(f, n), 2)
