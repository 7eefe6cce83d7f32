"""Fourier analysis on bounded Vilenkin groups at finite resolution."""

from .group import (DomainError, GroupPoint, RadixSequence, RangeError, ShapeError, VilenkinError,
                    expand_index, compose_index, lead_trail, special_index_q, variation)
from .grid import (GridFunction, convolve_direct, coset_average, integrate, lp_norm, translate,
                   weak_lp_norm)
from .transform import (CoefficientVector, convolve_fast, forward, forward_naive, inverse,
                        rademacher, vilenkin_function)
from .kernels import (dirichlet, dirichlet_closed, fejer, fejer_closed, fejer_gat, lebesgue_constant,
                      lukomskii_bounds, norlund_kernel, paley)
from .summability import (DegenerateWeightsError, MeanSpec, WeightSequence, maximal_function, mean,
                          modulus_hp, modulus_lp, partial_sum)
from .hardy import (MartingaleFamilySpec, build_martingale, coefficient_ratio, hardy_sum, hp_norm,
                    make_atom, martingale_maximal, paley_sum, strong_sum)
from .checks import run_verify

__all__ = [
    "build_martingale", "coefficient_ratio", "CoefficientVector", "compose_index",
    "convolve_direct", "convolve_fast", "coset_average", "DegenerateWeightsError", "dirichlet",
    "dirichlet_closed", "DomainError", "expand_index", "fejer", "fejer_closed", "fejer_gat",
    "forward", "forward_naive", "GridFunction", "GroupPoint", "hardy_sum", "hp_norm", "integrate",
    "inverse", "lead_trail", "lebesgue_constant", "lp_norm", "lukomskii_bounds", "make_atom",
    "martingale_maximal", "MartingaleFamilySpec", "maximal_function", "mean", "MeanSpec",
    "modulus_hp", "modulus_lp", "norlund_kernel", "paley", "paley_sum", "partial_sum",
    "rademacher", "RadixSequence", "RangeError", "run_verify", "ShapeError", "special_index_q",
    "strong_sum", "translate", "variation", "vilenkin_function", "VilenkinError", "weak_lp_norm",
    "WeightSequence",
]
