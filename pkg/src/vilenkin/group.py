"""Mixed-radix arithmetic on a bounded Vilenkin group and its index set."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

# M_N above this is refused everywhere (desk scale).
MAX_ORDER = 2**20


class VilenkinError(ValueError):
    """Base class for argument errors raised by this package."""


class RangeError(VilenkinError):
    pass


class DomainError(VilenkinError):
    pass


class ShapeError(VilenkinError):
    pass


@dataclass(frozen=True)
class RadixSequence:
    """Generating sequence ``m`` with the products ``M_k`` and the bound ``lam``."""

    m: tuple[int, ...]
    M: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        m = tuple(int(v) for v in self.m)
        if not m:
            raise DomainError("radix sequence is empty")
        if any(v < 2 for v in m):
            raise DomainError(f"every m_k must be >= 2, got {m}")
        M = [1]
        for v in m:
            M.append(M[-1] * v)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "M", tuple(M))

    @classmethod
    def parse(cls, spec: str) -> "RadixSequence":
        """Parse ``"2,3,4,3"`` or ``"2^10"`` (and mixtures such as ``"2^3,3"``)."""
        spec = spec.strip()
        if not spec:
            raise DomainError("empty radix specification")
        m: list[int] = []
        for token in spec.split(","):
            token = token.strip()
            match = re.fullmatch(r"(\d+)(?:\^(\d+))?", token)
            if match is None:
                raise DomainError(f"bad radix token {token!r}")
            base = int(match.group(1))
            reps = int(match.group(2)) if match.group(2) else 1
            m.extend([base] * reps)
        return cls(tuple(m))

    @classmethod
    def constant(cls, base: int, length: int) -> "RadixSequence":
        return cls((base,) * length)

    @property
    def n_max(self) -> int:
        return len(self.m)

    @property
    def lam(self) -> int:
        return max(self.m)

    def order(self, N: int) -> int:
        """M_N, the number of rank-N cosets."""
        if not 0 <= N <= self.n_max:
            raise RangeError(f"resolution {N} outside [0, {self.n_max}]")
        return self.M[N]

    def spec_string(self) -> str:
        return ",".join(str(v) for v in self.m)


def expand_index(n: int, radix: RadixSequence) -> tuple[int, ...]:
    """Digits (n_0, ..., n_{N_max-1}) with n = sum n_j M_j."""
    n = int(n)
    if n < 0 or n >= radix.M[-1]:
        raise RangeError(f"index {n} outside [0, {radix.M[-1]})")
    digits = []
    for base in radix.m:
        n, d = divmod(n, base)
        digits.append(d)
    return tuple(digits)


def compose_index(digits, radix: RadixSequence) -> int:
    if len(digits) > radix.n_max:
        raise ShapeError("more digits than the radix sequence provides")
    n = 0
    for j, d in enumerate(digits):
        d = int(d)
        if not 0 <= d < radix.m[j]:
            raise DomainError(f"digit {d} at position {j} not in Z_{radix.m[j]}")
        n += d * radix.M[j]
    return n


def lead_trail(n: int, radix: RadixSequence) -> tuple[int, int, int]:
    """Return (<n>, |n|, d(n)): lowest and highest nonzero digit positions and their gap."""
    if n < 1:
        raise DomainError("lead_trail needs n >= 1")
    nz = [j for j, d in enumerate(expand_index(n, radix)) if d]
    low, high = nz[0], nz[-1]
    return low, high, high - low


def variation(n: int, radix: RadixSequence, start: int = 0) -> tuple[int, int]:
    """Lukomskii's digit-variation pair (v(n), v*(n)).

    v(n) = sum_{j >= start} |delta_{j+1} - delta_j| + delta_0 and
    v*(n) = sum_{j >= start} delta*_j, where delta_j = sign(n_j) and
    delta*_j = |(-n_j mod m_j) - 1| delta_j (so delta*_j can exceed 1 once m_j >= 4).
    With ``start=0`` the two-sided Lebesgue-constant estimate holds for every n; the
    ``start=1`` reading undercounts the boundary at position 0 and breaks it at n = 1.
    """
    if n < 1:
        raise DomainError("variation needs n >= 1")
    if start not in (0, 1):
        raise DomainError("start must be 0 or 1")
    digits = expand_index(n, radix)
    delta = [1 if d else 0 for d in digits] + [0]
    v = sum(abs(delta[j + 1] - delta[j]) for j in range(start, len(digits))) + delta[0]
    v_star = sum(abs((radix.m[j] - d) % radix.m[j] - 1) * delta[j]
                 for j, d in enumerate(digits) if j >= start)
    return v, v_star


def special_index_q(n: int, radix: RadixSequence) -> int:
    """q_n = M_0 + M_2 + ... + M_{2n}."""
    if n < 0:
        raise DomainError("q_n needs n >= 0")
    if 2 * n >= radix.n_max:
        raise RangeError(f"q_{n} needs M_{2 * n} below M_{radix.n_max}")
    return sum(radix.M[2 * j] for j in range(n + 1))


@dataclass(frozen=True)
class GroupPoint:
    """A point of G_m truncated to its first ``len(digits)`` coordinates."""

    radix: RadixSequence
    digits: tuple[int, ...]

    def __post_init__(self):
        digits = tuple(int(d) for d in self.digits)
        if len(digits) > self.radix.n_max:
            raise ShapeError("resolution exceeds the radix sequence")
        for j, d in enumerate(digits):
            if not 0 <= d < self.radix.m[j]:
                raise DomainError(f"coordinate {d} at {j} not in Z_{self.radix.m[j]}")
        object.__setattr__(self, "digits", digits)

    @property
    def resolution(self) -> int:
        return len(self.digits)

    @classmethod
    def zero(cls, radix: RadixSequence, N: int) -> "GroupPoint":
        return cls(radix, (0,) * N)

    @classmethod
    def from_index(cls, t: int, radix: RadixSequence, N: int) -> "GroupPoint":
        return cls(radix, expand_index(t, radix)[:N])

    def index(self) -> int:
        """Grid position of the coset I_N(x)."""
        return compose_index(self.digits, self.radix)

    def __add__(self, other: "GroupPoint") -> "GroupPoint":
        return point_arithmetic(self, other, "add")

    def __sub__(self, other: "GroupPoint") -> "GroupPoint":
        return point_arithmetic(self, other, "sub")


def point_arithmetic(x: GroupPoint, y: GroupPoint, mode: str = "add") -> GroupPoint:
    if x.radix != y.radix or x.resolution != y.resolution:
        raise ShapeError("points live on different groups or resolutions")
    if mode not in ("add", "sub"):
        raise DomainError(f"mode must be 'add' or 'sub', got {mode!r}")
    sign = 1 if mode == "add" else -1
    m = x.radix.m
    return GroupPoint(x.radix, tuple((a + sign * b) % m[j]
                                     for j, (a, b) in enumerate(zip(x.digits, y.digits))))


def basis_point(n: int, radix: RadixSequence, resolution: int) -> GroupPoint:
    """e_n at the given resolution."""
    if not 0 <= n < resolution:
        raise RangeError(f"e_{n} needs resolution > {n}")
    digits = [0] * resolution
    digits[n] = 1
    return GroupPoint(radix, tuple(digits))


@dataclass(frozen=True)
class CosetDescriptor:
    """Where x sits in the decomposition of the complement of I_N.

    ``s`` is the first nonzero coordinate (None when x is in I_N); ``k, l`` name the
    cell I_N^{k,l}, with ``l == N`` when no second nonzero coordinate occurs below N.
    """

    in_IN: bool
    s: int | None = None
    k: int | None = None
    l: int | None = None


def classify_coset(x: GroupPoint, N: int) -> CosetDescriptor:
    if x.resolution < N:
        raise ShapeError("point resolution below N")
    nz = [j for j in range(N) if x.digits[j]]
    if not nz:
        return CosetDescriptor(True)
    k = nz[0]
    l = nz[1] if len(nz) > 1 else N
    return CosetDescriptor(False, s=k, k=k, l=l)


def coset_cell_measure(radix: RadixSequence, N: int, k: int, l: int) -> float:
    """Haar measure of I_N^{k,l}."""
    if l == N:
        return (radix.m[k] - 1) / radix.M[N]
    return (radix.m[k] - 1) * (radix.m[l] - 1) / radix.M[l + 1]


# ---------------------------------------------------------------------------
# Vectorized tables shared by the grid modules.


def _check_resolution(radix: RadixSequence, N: int) -> None:
    if not 0 <= N <= radix.n_max:
        raise RangeError(f"resolution {N} outside [0, {radix.n_max}]")
    if radix.M[N] > MAX_ORDER:
        raise RangeError(f"M_{N} = {radix.M[N]} exceeds the cap {MAX_ORDER}")


@lru_cache(maxsize=64)
def digit_table(radix: RadixSequence, N: int) -> np.ndarray:
    """Integer array of shape (M_N, N); row t holds the digits of t."""
    _check_resolution(radix, N)
    t = np.arange(radix.M[N], dtype=np.int64)
    table = np.empty((radix.M[N], N), dtype=np.int64)
    for j in range(N):
        table[:, j] = (t // radix.M[j]) % radix.m[j]
    table.setflags(write=False)
    return table


@lru_cache(maxsize=16)
def subtraction_table(radix: RadixSequence, N: int) -> np.ndarray:
    """``T[x, t]`` is the grid index of x - t (coordinatewise mod m_j)."""
    digits = digit_table(radix, N)
    size = radix.M[N]
    out = np.zeros((size, size), dtype=np.int64)
    for j in range(N):
        diff = (digits[:, None, j] - digits[None, :, j]) % radix.m[j]
        out += diff * radix.M[j]
    out.setflags(write=False)
    return out


def shifted_indices(radix: RadixSequence, N: int, h: tuple[int, ...], sign: int = -1) -> np.ndarray:
    """Grid index of x + sign*h for every grid x."""
    digits = digit_table(radix, N)
    out = np.zeros(radix.M[N], dtype=np.int64)
    for j in range(N):
        out += ((digits[:, j] + sign * h[j]) % radix.m[j]) * radix.M[j]
    return out


def first_nonzero_digit(radix: RadixSequence, N: int) -> np.ndarray:
    """For each grid point, the s with x in I_s minus I_{s+1}; N for x in I_N."""
    digits = digit_table(radix, N)
    nz = digits != 0
    out = np.where(nz.any(axis=1), nz.argmax(axis=1), N)
    return out
