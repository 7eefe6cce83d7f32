"""p-atoms, the counterexample martingales, H_p quasi-norms and the sum functionals.

The H_p quasi-norm is taken as ||max_{n <= N} |S_{M_n} f| ||_p. Every function here is a
polynomial of order at most M_N, so its martingale stabilizes by level N and the finite
maximum is the full martingale maximal function.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .grid import GridFunction, coset_average, lp_norm
from .group import DomainError, RadixSequence, RangeError, first_nonzero_digit
from .summability import means_batch
from .transform import forward


# Entries below this fraction of the largest one are rounding noise; |.|^p with p < 1
# would otherwise inflate them (1e-16 ** (1/3) is about 5e-6).
NOISE_FLOOR = 1e-12


def _clean(a: np.ndarray, axis=None) -> np.ndarray:
    a = np.abs(a)
    top = np.max(a, axis=axis, keepdims=axis is not None) if a.size else 0.0
    return np.where(a > NOISE_FLOOR * top, a, 0.0)


def _dirichlet_difference(level: int, radix: RadixSequence, N: int) -> np.ndarray:
    """D_{M_{level+1}} - D_{M_level} from the Paley indicator (exact in floating point)."""
    s = first_nonzero_digit(radix, N)
    return (np.where(s >= level + 1, float(radix.M[level + 1]), 0.0)
            - np.where(s >= level, float(radix.M[level]), 0.0))


def atom_scale(level: int, p: float, radix: RadixSequence) -> float:
    return radix.M[level] ** (1 / p - 1) / radix.lam


def make_atom(alpha: int, p: float, radix: RadixSequence, N: int) -> GridFunction:
    """a = (M_alpha^{1/p-1} / lambda) (D_{M_{alpha+1}} - D_{M_alpha}), supported on I_alpha."""
    if not 0 < p <= 1:
        raise DomainError(f"atoms need 0 < p <= 1, got {p}")
    if not 0 <= alpha or alpha + 1 > N:
        raise RangeError(f"atom level {alpha} needs alpha + 1 <= N = {N}")
    return GridFunction(radix, N, atom_scale(alpha, p, radix) * _dirichlet_difference(alpha, radix, N))


@dataclass
class AtomCheck:
    support: bool
    mean_zero: float
    sup_norm: float
    sup_bound: float
    hp_norm: float

    def passed(self, mean_tol=1e-12, hp_tol=1e-9) -> bool:
        return (self.support and abs(self.mean_zero) <= mean_tol
                and self.sup_norm <= self.sup_bound and self.hp_norm <= 1 + hp_tol)


def atom_axioms(a: GridFunction, level: int, p: float) -> AtomCheck:
    """Check a against the p-atom axioms for the support interval I_level."""
    inside = first_nonzero_digit(a.radix, a.N) >= level
    support = bool(np.all(a.values[~inside] == 0))
    mean = complex(np.sum(a.values[inside]) / a.size)
    return AtomCheck(support=support, mean_zero=abs(mean), sup_norm=float(np.max(np.abs(a.values))),
                     sup_bound=a.radix.M[level] ** (1 / p), hp_norm=hp_norm(a, p))


def martingale_maximal(f: GridFunction) -> GridFunction:
    """f* = max over n <= N of |S_{M_n} f|, with S_{M_n} the coset average."""
    out = np.zeros(f.size)
    for n in range(f.N + 1):
        out = np.maximum(out, np.abs(coset_average(f, n).values))
    return GridFunction(f.radix, f.N, out)


def hp_norm(f: GridFunction, p: float) -> float:
    if not p > 0:
        raise DomainError(f"p must be positive, got {p}")
    return lp_norm(martingale_maximal(f), p)


FAMILIES = ("single_atom", "inv_sqrt_alpha", "phi_quarter", "inv_Mk_pow", "custom")


@dataclass
class MartingaleFamilySpec:
    """Parameters of a finite martingale sum_k lambda_k a_k.

    ``family``: single_atom (unscaled blocks D_{M_{2a+1}} - D_{M_{2a}}),
    inv_sqrt_alpha (lambda_k = lambda / alpha_k^{1/2}), phi_quarter
    (lambda_k = lambda / Phi_k^{1/4}, ``phi`` lists Phi at M_{2 alpha_k}), inv_Mk_pow
    (atoms at level 2 M_k with lambda_k = lambda / M_k^{1/p}; ``alpha_seq`` holds k),
    custom (``lambdas`` given, atoms at level 2 alpha_k).
    """

    radix: RadixSequence
    resolution: int
    p: float
    family: str
    alpha_seq: tuple
    phi: tuple = ()
    lambdas: tuple = ()
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.alpha_seq = tuple(int(a) for a in self.alpha_seq)
        self.phi = tuple(float(v) for v in self.phi)
        self.lambdas = tuple(float(v) for v in self.lambdas)
        if self.family not in FAMILIES:
            raise DomainError(f"unknown martingale family {self.family!r}")
        if not 0 < self.p <= 1:
            raise DomainError("martingale families need 0 < p <= 1")
        if not self.alpha_seq:
            raise DomainError("alpha_seq is empty")
        if any(b <= a for a, b in zip(self.alpha_seq, self.alpha_seq[1:])):
            raise DomainError("alpha_seq must be strictly increasing")
        if self.alpha_seq[0] < 0:
            raise DomainError("alpha_seq must be nonnegative")
        if self.family == "phi_quarter":
            if len(self.phi) != len(self.alpha_seq) or any(v <= 0 for v in self.phi):
                raise DomainError("phi_quarter needs one positive Phi value per alpha")
            if any(b < a for a, b in zip(self.phi, self.phi[1:])):
                raise DomainError("Phi must be nondecreasing")
        if self.family == "custom" and len(self.lambdas) != len(self.alpha_seq):
            raise DomainError("custom family needs one lambda per alpha")
        if not math.isfinite(sum(abs(v) ** self.p for v in self.coefficients_lambda())):
            raise DomainError("sum |lambda_k|^p is not finite")
        top = max(self.levels())
        if top + 1 > self.resolution:
            raise RangeError(f"atom level {top} does not fit resolution {self.resolution}")
        if self.resolution > self.radix.n_max:
            raise RangeError("resolution exceeds the radix sequence")

    def levels(self) -> list[int]:
        """Support level of each atom (2 alpha_k, or 2 M_k for inv_Mk_pow)."""
        if self.family == "inv_Mk_pow":
            return [2 * self.radix.M[k] for k in self.alpha_seq]
        return [2 * a for a in self.alpha_seq]

    def coefficients_lambda(self) -> list[float]:
        lam = self.radix.lam
        if self.family == "single_atom":
            return [1.0] * len(self.alpha_seq)
        if self.family == "inv_sqrt_alpha":
            return [lam / math.sqrt(a) if a > 0 else math.inf for a in self.alpha_seq]
        if self.family == "phi_quarter":
            return [lam / v ** 0.25 for v in self.phi]
        if self.family == "inv_Mk_pow":
            return [lam / self.radix.M[k] ** (1 / self.p) for k in self.alpha_seq]
        return list(self.lambdas)

    def block_values(self) -> list[tuple[int, int, float]]:
        """(start, stop, value): f^(j) = value for start <= j < stop, 0 off the blocks."""
        out = []
        for level, lam_k in zip(self.levels(), self.coefficients_lambda()):
            start, stop = self.radix.M[level], self.radix.M[level + 1]
            if self.family == "single_atom":
                value = 1.0
            else:
                value = lam_k * atom_scale(level, self.p, self.radix)
            out.append((start, stop, value))
        return out

    def to_json(self) -> str:
        payload = {"radix": self.radix.spec_string(), "resolution": self.resolution, "p": self.p,
                   "family": self.family, "alpha_seq": list(self.alpha_seq)}
        if self.phi:
            payload["phi"] = list(self.phi)
        if self.lambdas:
            payload["lambda"] = list(self.lambdas)
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "MartingaleFamilySpec":
        try:
            data = json.loads(text)
            return cls(radix=RadixSequence.parse(str(data["radix"])), resolution=int(data["resolution"]),
                       p=float(data["p"]), family=data["family"], alpha_seq=tuple(data["alpha_seq"]),
                       phi=tuple(data.get("phi", ())), lambdas=tuple(data.get("lambda", ())))
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise DomainError(f"bad martingale spec: {exc}") from exc


def build_martingale(spec: MartingaleFamilySpec) -> GridFunction:
    radix, N = spec.radix, spec.resolution
    values = np.zeros(radix.M[N], dtype=np.complex128)
    for level, lam_k in zip(spec.levels(), spec.coefficients_lambda()):
        if level + 1 > N:
            raise RangeError(f"atom level {level} does not fit resolution {N}")
        block = _dirichlet_difference(level, radix, N)
        if spec.family == "single_atom":
            values += block
        else:
            values += lam_k * atom_scale(level, spec.p, radix) * block
    return GridFunction(radix, N, values)


def example22(n: int, radix: RadixSequence, N: int) -> GridFunction:
    """f_n = D_{M_{2n+1}} - D_{M_{2n}}."""
    if 2 * n + 1 > N:
        raise RangeError(f"Example 2.2 block 2n+1 = {2 * n + 1} exceeds N = {N}")
    return GridFunction(radix, N, _dirichlet_difference(2 * n, radix, N))


def check_growth_conditions(alpha_seq, p: float, q: float, radix: RadixSequence) -> list[dict]:
    """Finite-prefix check of the growth conditions on {alpha_k} for the 1/sqrt(alpha) family."""
    lam = radix.lam
    M = radix.M
    rows = []
    for k, a in enumerate(alpha_seq):
        row = {"k": k, "alpha": a}
        if k == 0:
            row.update(increase=True, dominance=True)
        else:
            prev = sum(M[2 * b] ** (1 / p) / math.sqrt(b) for b in alpha_seq[:k])
            row["increase"] = prev < M[2 * a] ** (1 / p) / math.sqrt(a)
            b = alpha_seq[k - 1]
            lhs = 32 * lam * M[2 * b] ** (1 / p) / math.sqrt(b)
            expo = 1 / p if p == q else 1 / p - 1 / q
            row["dominance"] = lhs < M[a] ** expo / a ** 1.5
        rows.append(row)
    return rows


def search_alpha_sequence(p: float, q: float, radix: RadixSequence, count: int,
                          resolution: int, start: int = 1) -> list[int]:
    """Greedy smallest {alpha_k} meeting the growth conditions with 2 alpha_k + 1 <= resolution.

    Raises RangeError when the resolution cannot hold ``count`` terms.
    """
    seq = [start]
    while len(seq) < count:
        a = seq[-1] + 1
        while 2 * a + 1 <= resolution:
            if all(check_growth_conditions(seq + [a], p, q, radix)[-1][key]
                   for key in ("increase", "dominance")):
                break
            a += 1
        else:
            raise RangeError(f"no admissible alpha_{len(seq)} below resolution {resolution} "
                             f"(found {seq})")
        seq.append(a)
    if 2 * seq[-1] + 1 > resolution:
        raise RangeError("start value does not fit the resolution")
    return seq


def hardy_sum(f: GridFunction, p: float, n_max: int | None = None) -> float:
    """sum_{k=1}^{n_max} |f^(k)|^p / k^{2-p}."""
    if not 0 < p <= 2:
        raise DomainError("hardy_sum needs 0 < p <= 2")
    c = _clean(forward(f).coefficients)
    n_max = f.size - 1 if n_max is None else min(n_max, f.size - 1)
    k = np.arange(1, n_max + 1)
    return float(np.sum(c[1:n_max + 1] ** p / k ** (2 - p)))


def paley_sum(f: GridFunction, p: float) -> float:
    """(sum_{k=1}^{N-1} M_k^{2-2/p} sum_{j=1}^{m_k-1} |f^(j M_k)|^2)^{1/2}."""
    if not 0 < p <= 1:
        raise DomainError("paley_sum needs 0 < p <= 1")
    c = _clean(forward(f).coefficients)
    radix = f.radix
    total = 0.0
    for k in range(1, f.N):
        Mk = radix.M[k]
        idx = Mk * np.arange(1, radix.m[k])
        total += Mk ** (2 - 2 / p) * float(np.sum(c[idx] ** 2))
    return math.sqrt(total)


STRONG_FLAVORS = ("partial", "fejer", "log_partial", "log_fejer")


def strong_sum(f: GridFunction, flavor: str, n: int, p: float = 1.0) -> float:
    """Finite strong-summability sums up to index n.

    partial: sum ||S_k f||_p^p / k^{2-p}; fejer: sum ||sigma_k f||_p^p / k^{2-2p};
    log_partial: (1/log n) sum ||S_k f - f||_1 / k;
    log_fejer: (1/log n) sum ||sigma_k f||_{1/2}^{1/2} / k.
    """
    if flavor not in STRONG_FLAVORS:
        raise DomainError(f"unknown flavor {flavor!r}")
    if not 1 <= n <= f.size:
        raise RangeError(f"strong sum index {n} outside [1, M_N]")
    ks = list(range(1, n + 1))
    k = np.arange(1, n + 1, dtype=np.float64)
    if flavor in ("partial", "log_partial"):
        rows = means_batch(f, "partial", ks)
    else:
        rows = means_batch(f, "fejer", ks)
    if flavor == "partial":
        norms = np.mean(_clean(rows, axis=1) ** p, axis=1)
        return float(np.sum(norms / k ** (2 - p)))
    if flavor == "fejer":
        norms = np.mean(_clean(rows, axis=1) ** p, axis=1)
        return float(np.sum(norms / k ** (2 - 2 * p)))
    if n < 2:
        raise RangeError("log-normalized sums need n >= 2")
    if flavor == "log_partial":
        norms = np.mean(np.abs(rows - f.values[None, :]), axis=1)
    else:
        norms = np.mean(_clean(rows, axis=1) ** 0.5, axis=1)
    return float(np.sum(norms / k) / math.log(n))


def coefficient_ratio(f: GridFunction, p: float) -> float:
    """max_{1 <= n < M_N} |f^(n)| / n^{1/p-1}."""
    if not 0 < p < 1:
        raise DomainError("coefficient_ratio needs 0 < p < 1")
    c = np.abs(forward(f).coefficients)
    n = np.arange(1, f.size)
    return float(np.max(c[1:] / n ** (1 / p - 1)))


def coefficient_growth(f: GridFunction, spec: MartingaleFamilySpec, phi) -> list[float]:
    """|f^(M_{level_k})| / Phi(M_{level_k}) for each block; ``phi`` maps n -> Phi_n."""
    c = forward(f).coefficients
    out = []
    for start, _, _ in spec.block_values():
        out.append(float(abs(c[start]) / phi(start)))
    return out


def sqrt_phi_lambdas(alpha_seq, p: float, radix: RadixSequence, phi) -> tuple[float, ...]:
    """lambda_k = lambda Phi^{1/2} / M^{(1/p-1)/2} at M = M_{2 alpha_k}, for the coefficient example."""
    lam = radix.lam
    out = []
    for a in alpha_seq:
        Mk = radix.M[2 * a]
        out.append(lam * math.sqrt(phi(Mk)) / Mk ** ((1 / p - 1) / 2))
    return tuple(out)
