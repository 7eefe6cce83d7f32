"""Exact arithmetic for sums of M_N-th roots of unity.

A value sum_j c_j w^j (w = exp(2 pi i / M), integer c_j) is reduced modulo the M-th
cyclotomic polynomial, which gives a canonical integer vector: two such sums are equal
exactly when their reduced vectors coincide. Used to certify kernel identities with zero
deviation rather than up to floating error.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import sympy

from .transform import unit_roots


@lru_cache(maxsize=32)
def cyclotomic_coefficients(order: int) -> np.ndarray:
    """Integer coefficients of Phi_order, lowest degree first."""
    x = sympy.Symbol("x")
    poly = sympy.Poly(sympy.cyclotomic_poly(order, x), x)
    coeffs = np.array([int(c) for c in reversed(poly.all_coeffs())], dtype=np.int64)
    coeffs.setflags(write=False)
    return coeffs


def reduce_counts(counts: np.ndarray, order: int) -> np.ndarray:
    """Reduce exponent-count rows (shape (..., order)) to canonical form mod Phi_order."""
    phi = cyclotomic_coefficients(order)
    deg = phi.size - 1
    work = np.array(counts, dtype=np.int64, copy=True)
    # Phi is monic: eliminate x^d for d >= deg from the top down.
    for d in range(order - 1, deg - 1, -1):
        lead = work[..., d].copy()
        if not lead.any():
            continue
        work[..., d - deg:d + 1] -= lead[..., None] * phi[None, :]
    return work[..., :deg]


def exponent_counts(phases: np.ndarray, order: int) -> np.ndarray:
    """phases: (terms, points) integer exponents; returns (points, order) counts."""
    terms, points = phases.shape
    flat = (np.arange(points)[None, :] * order + phases).ravel()
    return np.bincount(flat, minlength=points * order).reshape(points, order)


def evaluate_counts(counts: np.ndarray, order: int) -> np.ndarray:
    return counts @ unit_roots(order)
