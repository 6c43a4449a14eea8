"""Many-particle operators on the conserved-N subspace and their spectra.

All operators are real symmetric tridiagonal matrices in the Fock basis
|mu> = |mu*m, N/m - mu*n>, mu = 0..N/(m*n).  sy is never materialised as
a complex matrix: everything is expressed through the real ladder
weights, which keeps the whole module in real arithmetic.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal, eigvalsh_tridiagonal

from . import meanfield
from .model import ModelSpec


def ladder_strength(spec: ModelSpec, mu: int) -> float:
    """Squared hopping weight beta_mu connecting basis states mu-1 and mu.

    Product of the m factors mu*m, mu*m-1, ... and the n factors
    N/m - mu*n + n, ..., N/m - mu*n + 1, with the 1/N^(m+n-2) scaling
    interleaved factor by factor so intermediate values stay bounded for
    large N.  beta_0 = 0 and beta_{N/(m*n)+1} = 0 terminate the chain.
    """
    m, n = spec.m, spec.n
    top = spec.N // (m * n)
    if mu < 0 or mu > top + 1:
        raise ValueError(f"mu must lie in 0..{top + 1}")
    if mu == 0 or mu == top + 1:
        return 0.0
    scale = float(spec.N) ** ((m + n - 2) / (m + n))
    val = 1.0
    for i in range(m):
        val *= (mu * m - i) / scale
    base = spec.N // m - mu * n
    for i in range(n):
        val *= (base + n - i) / scale
    return val


@dataclass(frozen=True)
class TridiagonalOperator:
    """Real symmetric tridiagonal data for one of sx, sy, sz, H.

    For kind 'sy' the stored off-diagonal holds the magnitudes; the
    actual matrix is (+i) times them below the diagonal and (-i) above.
    """

    diag: np.ndarray
    offdiag: np.ndarray
    kind: str

    @property
    def dim(self) -> int:
        return len(self.diag)


@dataclass(frozen=True)
class OperatorSet:
    spec: ModelSpec
    sx: TridiagonalOperator
    sy: TridiagonalOperator
    sz: TridiagonalOperator
    h: TridiagonalOperator


def build_operators(spec: ModelSpec) -> OperatorSet:
    """Matrices of sx, sy, sz and H = eps*sz + v*sx on the N-subspace."""
    dim = spec.dim
    sqrt_beta = np.sqrt([ladder_strength(spec, mu) for mu in range(1, dim)])
    z = np.array([spec.sz_value(mu) for mu in range(dim)])
    zero = np.zeros(dim)
    sx = TridiagonalOperator(zero, 0.5 * sqrt_beta, "sx")
    sy = TridiagonalOperator(zero, 0.5 * sqrt_beta, "sy")
    sz = TridiagonalOperator(z, np.zeros(max(dim - 1, 0)), "sz")
    h = TridiagonalOperator(spec.eps * z, (spec.v / 2.0) * sqrt_beta, "h")
    return OperatorSet(spec, sx, sy, sz, h)


@dataclass(frozen=True)
class SpectrumResult:
    spec: ModelSpec
    raw_eigenvalues: np.ndarray
    scaled_eigenvalues: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.scaled_eigenvalues is None:
            object.__setattr__(
                self, "scaled_eigenvalues", self.spec.eta * self.raw_eigenvalues
            )


def eigen_spectrum(spec: ModelSpec) -> SpectrumResult:
    """All eigenvalues of H, sorted ascending, plus the eta-scaled copy.

    Uses the implicit-shift QL/QR solver for symmetric tridiagonal
    matrices (eigenvalues only, O(dim^2), no dense workspace).
    """
    ops = build_operators(spec)
    if spec.dim == 1:
        raw = ops.h.diag.copy()
    else:
        raw = eigvalsh_tridiagonal(
            ops.h.diag, ops.h.offdiag, lapack_driver="sterf"
        )
    raw = np.sort(raw)
    return SpectrumResult(spec, raw)


def eigen_residual(spec: ModelSpec) -> float:
    """Max relative residual ||H x - lambda x|| / ||H|| over all pairs.

    Recomputes eigenvectors with the divide-and-conquer tridiagonal
    solver; intended as a spot check for moderate dimensions.
    """
    ops = build_operators(spec)
    d, e = ops.h.diag, ops.h.offdiag
    w, vecs = eigh_tridiagonal(d, e)
    hv = d[:, None] * vecs
    hv[:-1] += e[:, None] * vecs[1:]
    hv[1:] += e[:, None] * vecs[:-1]
    res = np.linalg.norm(hv - vecs * w[None, :], axis=0)
    norm_h = max(np.max(np.abs(w)), 1e-300)
    return float(np.max(res) / norm_h)


@dataclass(frozen=True)
class DosHistogram:
    bin_edges: np.ndarray
    density: np.ndarray


def dos_histogram(result: SpectrumResult, bins: int, value_range=None) -> DosHistogram:
    """Probability-density histogram of the scaled eigenvalues.

    Density normalisation makes the histogram directly comparable to
    T(E)/(2*pi), whose integral over the band is also one.
    """
    if bins < 2:
        raise ValueError("bins must be >= 2")
    values = np.asarray(result.scaled_eigenvalues)
    if values.size == 0:
        raise ValueError("empty spectrum")
    density, edges = np.histogram(values, bins=bins, range=value_range, density=True)
    return DosHistogram(edges, density)


@dataclass(frozen=True)
class SweepTable:
    spec: ModelSpec
    eps_values: np.ndarray
    scaled_levels: list
    fixed_point_energies: list
    fixed_point_kinds: list


def _sweep_point(args):
    spec, eps = args
    point = spec.with_eps(eps)
    result = eigen_spectrum(point)
    fps = meanfield.find_fixed_points(point)
    return (
        result.scaled_eigenvalues,
        np.array([fp.energy for fp in fps]),
        [fp.stability for fp in fps],
    )


def sweep_epsilon(spec: ModelSpec, eps_grid, jobs: int = 1) -> SweepTable:
    """Spectra plus classical fixed-point energies over a grid of eps."""
    eps_grid = np.asarray(eps_grid, dtype=float)
    if eps_grid.size == 0:
        raise ValueError("eps grid must be nonempty")
    work = [(spec, e) for e in eps_grid]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_point, work))
    else:
        rows = [_sweep_point(w) for w in work]
    return SweepTable(
        spec,
        eps_grid,
        [r[0] for r in rows],
        [r[1] for r in rows],
        [r[2] for r in rows],
    )


def commutator_residuals(spec: ModelSpec) -> dict:
    """Relative residuals of the algebra identities as matrix equations.

    Checks [sz, sx] = i*sy, [sy, sz] = i*sx, [sx, sy] = i*F(sz) and the
    scalarity of sx^2 + sy^2 + G(sz), all through the real ladder
    decomposition.
    """
    from . import algebra

    dim = spec.dim
    beta = np.array([ladder_strength(spec, mu) for mu in range(dim + 1)])
    z = np.array([spec.sz_value(mu) for mu in range(dim)])
    a = 0.5 * np.sqrt(beta[1:dim])  # common off-diagonal magnitude

    # [sz, sx] superdiagonal is (z_{mu+1}-z_mu)*a = a; i*sy superdiagonal is a.
    step = z[1:] - z[:-1] if dim > 1 else np.array([])
    scale_off = max(np.max(a), 1e-300) if dim > 1 else 1.0
    res_zx = np.max(np.abs((step - 1.0) * a)) / scale_off if dim > 1 else 0.0

    f_diag = np.array([algebra.commutator_poly(spec, zi) for zi in z])
    lhs = 0.5 * (beta[:dim] - beta[1 : dim + 1])
    res_xy = np.max(np.abs(lhs - f_diag)) / max(np.max(np.abs(f_diag)), 1e-300)

    g_diag = np.array([algebra.casimir_poly(spec, zi) for zi in z])
    cas = 0.5 * (beta[:dim] + beta[1 : dim + 1]) + g_diag
    scale_cas = max(np.max(0.5 * (beta[:dim] + beta[1 : dim + 1])), 1e-300)
    res_cas = np.max(np.abs(cas - np.mean(cas))) / scale_cas

    return {
        "sz_sx": float(res_zx),
        "sy_sz": float(res_zx),  # same structural identity, mirrored signs
        "sx_sy": float(res_xy),
        "casimir": float(res_cas),
        "casimir_value": float(np.mean(cas)),
    }
