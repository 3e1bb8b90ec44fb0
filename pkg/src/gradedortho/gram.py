"""Gram matrix sources: explicit matrices, weighted Fourier bases and
multivariate monomial bases on box domains.

A :class:`GramSource` pairs a :class:`~gradedortho.grading.GradedIndex`
with the full Hermitian Gram matrix of the underlying vectors, blocks
aligned with the grading.  All backends assemble the matrix eagerly and
freeze it; the orthogonalizers never integrate anything themselves.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    InsufficientGrid,
    NonPositiveWeight,
    NotHermitian,
    QuadratureOrderTooLow,
)
from .grading import GradedIndex
from .spectral import hermitize, max_abs

TWO_PI = 2.0 * math.pi

# An explicit matrix whose symmetrization moves an entry by more than
# this (relative to the largest magnitude) is rejected rather than
# silently repaired.
HERMITIZE_REJECT_FACTOR = 1e-12


@dataclass(frozen=True)
class WeightFunction:
    """Positive weight, either uniform or sampled on a fixed grid.

    Fourier sources sample on the uniform periodic grid over [0, 2pi);
    monomial sources sample per tensor quadrature node (last axis
    fastest).
    """

    kind: str
    values: np.ndarray | None = None

    @classmethod
    def uniform(cls):
        return cls(kind="uniform")

    @classmethod
    def samples(cls, values):
        values = np.asarray(values, dtype=np.float64)
        if values.ndim != 1 or values.size == 0:
            raise NonPositiveWeight("weight samples must be a non-empty 1-d array")
        if not np.all(np.isfinite(values)) or np.any(values <= 0.0):
            raise NonPositiveWeight("weight samples must all be finite and positive")
        values = values.copy()
        values.setflags(write=False)
        return cls(kind="samples", values=values)

    def __post_init__(self):
        if self.kind not in ("uniform", "samples"):
            raise ValueError(f"unknown weight kind {self.kind!r}")


@dataclass(frozen=True)
class MonomialBasisSpec:
    """Monomials of total degree <= max_degree on a box, graded by degree."""

    dimension: int
    max_degree: int
    box: tuple = ()
    weight: WeightFunction = field(default_factory=WeightFunction.uniform)
    quadrature_order: int | None = None

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be at least 1")
        if self.max_degree < 0:
            raise ValueError("max_degree must be non-negative")
        box = tuple((float(lo), float(hi)) for lo, hi in self.box)
        if len(box) != self.dimension:
            raise DimensionMismatch(
                f"box has {len(box)} intervals for dimension {self.dimension}"
            )
        for lo, hi in box:
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise ValueError(f"invalid box interval [{lo}, {hi}]")
        object.__setattr__(self, "box", box)
        order = self.quadrature_order
        if order is None:
            order = self.max_degree + 1
            object.__setattr__(self, "quadrature_order", order)
        if order < self.max_degree + 1:
            raise QuadratureOrderTooLow(
                f"quadrature order {order} is below max_degree + 1 = "
                f"{self.max_degree + 1}; Gram entries would not be exact"
            )


class GramSource:
    """A graded index plus the frozen Gram matrix it induces."""

    def __init__(self, kind, index, matrix):
        matrix = np.asarray(matrix, dtype=np.complex128)
        if matrix.shape != (index.total, index.total):
            raise DimensionMismatch(
                f"Gram matrix shape {matrix.shape} does not match the "
                f"{index.total} indexed elements"
            )
        matrix = matrix.copy()
        matrix.setflags(write=False)
        self.kind = kind
        self.index = index
        self.matrix = matrix

    def full(self):
        """The full Hermitian Gram matrix (a fresh copy)."""
        return self.matrix.copy()

    def level_block(self, pos):
        sl = self.index.level_slice(pos)
        return self.matrix[sl, sl].copy()

    def cross_block(self, pos_a, pos_b):
        return self.matrix[self.index.level_slice(pos_a), self.index.level_slice(pos_b)].copy()


def full_gram(source):
    """Full Gram matrix of a source (module-level convenience)."""
    return source.full()


def build_explicit(index, matrix):
    """Wrap a user-supplied Hermitian matrix as a GramSource."""
    matrix = np.asarray(matrix, dtype=np.complex128)
    if matrix.shape != (index.total, index.total):
        raise DimensionMismatch(
            f"matrix dimension {matrix.shape} does not match index total {index.total}"
        )
    h, adjustment = hermitize(matrix)
    scale = max_abs(matrix)
    if adjustment > HERMITIZE_REJECT_FACTOR * max(scale, 1.0):
        raise NotHermitian(
            f"matrix is not Hermitian: symmetrization moved an entry by "
            f"{adjustment:.3e} (max magnitude {scale:.3e})"
        )
    return GramSource("explicit", index, h)


def fourier_index(max_harmonic):
    """Level 0 holds the constant; level k holds the +k and -k harmonics."""
    if max_harmonic < 0:
        raise ValueError("max_harmonic must be non-negative")
    levels = [["0"]] + [["+", "-"] for _ in range(max_harmonic)]
    return GradedIndex(levels)


def _fourier_harmonics(max_harmonic):
    harmonics = [0]
    for k in range(1, max_harmonic + 1):
        harmonics.extend([k, -k])
    return np.asarray(harmonics, dtype=np.int64)


def fourier_gram(max_harmonic, weight):
    """Gram matrix of {exp(imx)} for |m| <= max_harmonic in L2([0,2pi], rho).

    Entries are integrals of exp(i(m - m')x) rho(x), evaluated with the
    periodic rectangle rule on the sample grid (exact for band-limited
    weights once the grid has at least 4*max_harmonic + 1 points).  The
    matrix is exactly Toeplitz in the harmonic difference and exactly
    Hermitian by construction.
    """
    index = fourier_index(max_harmonic)
    n_coeff = 2 * max_harmonic + 1
    moments = np.zeros(n_coeff, dtype=np.complex128)
    if weight.kind == "uniform":
        moments[0] = TWO_PI
    else:
        samples = weight.values
        n_grid = samples.size
        if n_grid < 4 * max_harmonic + 1:
            raise InsufficientGrid(
                f"{n_grid} grid points cannot resolve harmonics up to "
                f"{max_harmonic}; need at least {4 * max_harmonic + 1}"
            )
        x = TWO_PI * np.arange(n_grid) / n_grid
        for s in range(n_coeff):
            moments[s] = (TWO_PI / n_grid) * np.sum(np.exp(1j * s * x) * samples)
    harmonics = _fourier_harmonics(max_harmonic)
    size = harmonics.size
    gram = np.empty((size, size), dtype=np.complex128)
    for i in range(size):
        for j in range(size):
            s = int(harmonics[i] - harmonics[j])
            gram[i, j] = moments[s] if s >= 0 else np.conj(moments[-s])
    return GramSource("fourier", index, gram)


def _variable_names(dimension):
    if dimension <= 3:
        return ("x", "y", "z")[:dimension]
    return tuple(f"x{i + 1}" for i in range(dimension))


def monomial_label(exponents, names):
    parts = []
    for name, e in zip(names, exponents):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def _degree_multi_indices(dimension, degree):
    # Descending lexicographic order: x^2 before x*y before y^2.
    if dimension == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in _degree_multi_indices(dimension - 1, degree - first):
            yield (first,) + rest


def monomial_index(dimension, max_degree):
    names = _variable_names(dimension)
    levels = []
    exponents = []
    for degree in range(max_degree + 1):
        members = list(_degree_multi_indices(dimension, degree))
        levels.append([monomial_label(m, names) for m in members])
        exponents.extend(members)
    return GradedIndex(levels), exponents


def _gauss_legendre(order):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    # Enforce exact +- symmetry so odd moments cancel to roundoff.
    nodes = 0.5 * (nodes - nodes[::-1])
    weights = 0.5 * (weights + weights[::-1])
    return nodes, weights


def monomial_gram(spec):
    """Gram matrix of the graded monomial basis via tensor Gauss-Legendre.

    With the uniform weight the rule is exact for all entries (total
    degree per axis at most 2*max_degree <= 2*order - 1); sampled
    weights are taken as given at the tensor nodes.
    """
    index, exponents = monomial_index(spec.dimension, spec.max_degree)
    nodes_1d, weights_1d = _gauss_legendre(spec.quadrature_order)
    axes_nodes = []
    axes_weights = []
    for lo, hi in spec.box:
        center = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        axes_nodes.append(center + half * nodes_1d)
        axes_weights.append(half * weights_1d)
    grids = np.meshgrid(*axes_nodes, indexing="ij")
    points = np.stack([g.ravel() for g in grids], axis=0)
    wgrids = np.meshgrid(*axes_weights, indexing="ij")
    quad_weights = np.prod(np.stack([wg.ravel() for wg in wgrids], axis=0), axis=0)
    if spec.weight.kind == "samples":
        samples = spec.weight.values
        if samples.size != points.shape[1]:
            raise DimensionMismatch(
                f"weight sampled at {samples.size} points but the tensor "
                f"grid has {points.shape[1]} nodes"
            )
        quad_weights = quad_weights * samples
    n_terms = len(exponents)
    values = np.empty((n_terms, points.shape[1]))
    for t, m in enumerate(exponents):
        v = np.ones(points.shape[1])
        for axis, e in enumerate(m):
            if e:
                v = v * points[axis] ** e
        values[t] = v
    gram = (values * quad_weights) @ values.T
    return GramSource("monomial", index, hermitize(gram)[0])
