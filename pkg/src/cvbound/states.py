"""Covariance-matrix representation of Gaussian states and linear-optics maps.

Conventions used throughout the package:

* quadrature ordering is interleaved, ``R = (x_1, p_1, x_2, p_2, ...)``;
* ``[x, p] = i`` (hbar = 1), so the vacuum quadrature variance is 1/2;
* ``cov`` holds true second moments.  A Wigner function normalised as
  ``pi**-N * exp(-R^T Gamma^-1 R)`` has ``Gamma = 2 * cov``; all variance
  statements in this package are in direct-variance form and need no
  conversion;
* mode indices are 0-based everywhere in the library (the CLI accepts the
  1-based labels used in optical diagrams and converts at the boundary).

All values are immutable after construction and all operations are pure
functions, so states can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from collections.abc import Iterable

import numpy as np
import scipy.linalg

VACUUM_VAR = 0.5
SYMMETRY_TOL = 1e-10
PHYSICALITY_TOL = 1e-9
PAIR_COLLAPSE_TOL = 1e-8
SYMPLECTIC_TOL = 1e-10
MAX_SQUEEZING = 20.0

__all__ = [
    "GaussianState",
    "SymplecticMap",
    "NoisePattern",
    "symplectic_form",
    "vacuum_state",
    "epr_pair",
    "tensor",
    "beamsplitter",
    "rotation",
    "apply_symplectic",
    "add_classical_noise",
    "partial_trace",
    "partial_transpose",
    "symplectic_eigenvalues",
    "quad_variance",
    "sample_oracle",
    "state_to_dict",
    "state_from_dict",
]


def symplectic_form(n_modes: int) -> np.ndarray:
    """Symplectic form Omega for the interleaved ordering, 2x2 blocks [[0,1],[-1,0]]."""
    block = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return scipy.linalg.block_diag(*([block] * n_modes))


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


def symplectic_eigenvalues(cov: np.ndarray) -> np.ndarray:
    """Williamson spectrum of a covariance matrix, sorted ascending.

    The eigenvalues of the real matrix ``Omega @ cov`` come in pairs
    ``+/- i nu_k``; each ``nu_k`` is returned once.  Pair collapse uses an
    absolute tolerance of 1e-8, scaled up by the spectral magnitude so that
    strongly squeezed states (entries up to ~1e17 at r = 20) do not trip the
    check on double-precision rounding alone.

    Raises ``ValueError`` for non-symmetric, odd-dimensional or
    non-positive-definite input and ``RuntimeError`` when the spectrum does
    not pair up within tolerance.
    """
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
        raise ValueError("covariance matrix must be square with even dimension")
    scale = max(1.0, np.abs(cov).max())
    if np.abs(cov - cov.T).max() > SYMMETRY_TOL * scale:
        raise ValueError("covariance matrix must be symmetric")
    # scale-relative rejection: a strongly squeezed pure state is positive
    # definite in exact arithmetic but numerically singular in float64
    if np.linalg.eigvalsh(cov).min() <= -1e-12 * scale:
        raise ValueError("covariance matrix must be positive definite")
    n = cov.shape[0] // 2
    mags = np.sort(np.abs(np.linalg.eigvals(symplectic_form(n) @ cov)))
    tol = PAIR_COLLAPSE_TOL * max(1.0, mags[-1])
    lo, hi = mags[0::2], mags[1::2]
    if np.abs(hi - lo).max() > tol:
        raise RuntimeError("symplectic spectrum did not collapse into +/- pairs")
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class GaussianState:
    """An n-mode Gaussian state given by its mean vector and covariance matrix.

    ``mean`` has length 2n and ``cov`` is a symmetric 2n x 2n matrix in the
    interleaved quadrature ordering.  Construction validates symmetry and
    physicality (every symplectic eigenvalue >= 1/2 up to tolerance).
    """

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = _readonly(self.mean)
        cov = _readonly(self.cov)
        if mean.ndim != 1 or cov.ndim != 2:
            raise ValueError("mean must be a vector and cov a matrix")
        d = mean.shape[0]
        if d == 0 or d % 2 or cov.shape != (d, d):
            raise ValueError(f"inconsistent moment dimensions: mean {mean.shape}, cov {cov.shape}")
        scale = max(1.0, np.abs(cov).max())
        if np.abs(cov - cov.T).max() > SYMMETRY_TOL * scale:
            raise ValueError("covariance matrix must be symmetric within 1e-10")
        nu_min = symplectic_eigenvalues(cov).min()
        if nu_min < VACUUM_VAR - PHYSICALITY_TOL * scale:
            raise ValueError(
                f"unphysical covariance matrix: min symplectic eigenvalue {nu_min:.6g} < 1/2"
            )
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def n_modes(self) -> int:
        return self.mean.shape[0] // 2


@dataclass(frozen=True)
class SymplecticMap:
    """A linear phase-space map S with S Omega S^T = Omega."""

    matrix: np.ndarray

    def __post_init__(self):
        S = _readonly(self.matrix)
        if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] % 2:
            raise ValueError("symplectic matrix must be square with even dimension")
        omega = symplectic_form(S.shape[0] // 2)
        if np.abs(S @ omega @ S.T - omega).max() > SYMPLECTIC_TOL * max(1.0, np.abs(S).max() ** 2):
            raise ValueError("matrix is not symplectic")
        object.__setattr__(self, "matrix", S)

    def __matmul__(self, other: "SymplecticMap") -> "SymplecticMap":
        return SymplecticMap(self.matrix @ other.matrix)

    def inverse(self) -> "SymplecticMap":
        n = self.matrix.shape[0] // 2
        omega = symplectic_form(n)
        # S^-1 = Omega^T S^T Omega for symplectic S
        return SymplecticMap(omega.T @ self.matrix.T @ omega)


@dataclass(frozen=True)
class NoisePattern:
    """Correlated classical displacement noise.

    ``pattern`` is a signed quadrature coefficient vector of length 2n and
    ``sigma`` the standard deviation of the Gaussian random variable driving
    the displacement, so the covariance update is
    ``cov += sigma**2 * outer(pattern, pattern)``.
    """

    pattern: np.ndarray
    sigma: float

    def __post_init__(self):
        pattern = _readonly(self.pattern)
        if pattern.ndim != 1 or pattern.shape[0] % 2:
            raise ValueError("pattern must be a vector of length 2n")
        if not np.any(pattern):
            raise ValueError("pattern must be nonzero")
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")
        object.__setattr__(self, "pattern", pattern)


def vacuum_state(n: int) -> GaussianState:
    """The n-mode vacuum: zero mean, cov = I/2."""
    if n < 1:
        raise ValueError("need at least one mode")
    return GaussianState(np.zeros(2 * n), VACUUM_VAR * np.eye(2 * n))


def epr_pair(r: float) -> GaussianState:
    """Two-mode squeezed vacuum with squeezing parameter r.

    The squeezed joint quadratures are the position sum and momentum
    difference: var(x1 + x2) = var(p1 - p2) = exp(-2 r).  Each single-mode
    quadrature variance is cosh(2 r)/2 and the cross covariances are
    cov(x1, x2) = -sinh(2 r)/2, cov(p1, p2) = +sinh(2 r)/2.
    """
    if r < 0:
        raise ValueError("squeezing parameter must be nonnegative")
    if r > MAX_SQUEEZING:
        raise ValueError(f"squeezing parameter capped at {MAX_SQUEEZING} to avoid overflow")
    c, s = np.cosh(2 * r) / 2, np.sinh(2 * r) / 2
    cov = np.diag([c, c, c, c]).astype(float)
    cov[0, 2] = cov[2, 0] = -s
    cov[1, 3] = cov[3, 1] = +s
    return GaussianState(np.zeros(4), cov)


def tensor(a: GaussianState, b: GaussianState) -> GaussianState:
    """Product state with the modes of ``a`` followed by the modes of ``b``."""
    return GaussianState(
        np.concatenate([a.mean, b.mean]),
        scipy.linalg.block_diag(a.cov, b.cov),
    )


def beamsplitter(i: int, j: int, theta: float, n: int) -> SymplecticMap:
    """Beamsplitter mixing modes i and j of an n-mode register.

    Acts as x_i -> cos(theta) x_i + sin(theta) x_j,
    x_j -> -sin(theta) x_i + cos(theta) x_j, identically on p.
    theta = pi/4 is the balanced (50:50) case.
    """
    if i == j:
        raise ValueError("beamsplitter needs two distinct modes")
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError("mode index out of range")
    S = np.eye(2 * n)
    c, s = np.cos(theta), np.sin(theta)
    for q in (0, 1):
        a, b = 2 * i + q, 2 * j + q
        S[a, a] = c
        S[a, b] = s
        S[b, a] = -s
        S[b, b] = c
    return SymplecticMap(S)


def rotation(mode: int, phi: float, n: int) -> SymplecticMap:
    """Phase-space rotation of one mode: x -> cos(phi) x + sin(phi) p."""
    if not 0 <= mode < n:
        raise ValueError("mode index out of range")
    S = np.eye(2 * n)
    c, s = np.cos(phi), np.sin(phi)
    a, b = 2 * mode, 2 * mode + 1
    S[a, a] = c
    S[a, b] = s
    S[b, a] = -s
    S[b, b] = c
    return SymplecticMap(S)


def apply_symplectic(state: GaussianState, smap: SymplecticMap) -> GaussianState:
    """Gaussian-unitary action on moments: mean -> S mean, cov -> S cov S^T."""
    S = smap.matrix
    if S.shape[0] != 2 * state.n_modes:
        raise ValueError("dimension mismatch between state and symplectic map")
    return GaussianState(S @ state.mean, S @ state.cov @ S.T)


def add_classical_noise(state: GaussianState, noise: NoisePattern) -> GaussianState:
    """Mix over zero-mean Gaussian displacements along ``noise.pattern``.

    The mean is unchanged and cov gains the rank-1 term
    sigma^2 * pattern pattern^T.
    """
    if noise.pattern.shape[0] != 2 * state.n_modes:
        raise ValueError("noise pattern length does not match the state")
    cov = state.cov + noise.sigma**2 * np.outer(noise.pattern, noise.pattern)
    return GaussianState(state.mean, cov)


def _quad_indices(modes: Iterable[int]) -> list[int]:
    out = []
    for m in modes:
        out.extend((2 * m, 2 * m + 1))
    return out


def partial_trace(state: GaussianState, keep: Iterable[int]) -> GaussianState:
    """Reduced state on the given (sorted) subset of modes."""
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("must keep at least one mode")
    if keep[0] < 0 or keep[-1] >= state.n_modes:
        raise ValueError("mode index out of range")
    idx = _quad_indices(keep)
    return GaussianState(state.mean[idx], state.cov[np.ix_(idx, idx)])


def partial_transpose(state: GaussianState, flip: Iterable[int]) -> np.ndarray:
    """Covariance matrix after partial transposition of the ``flip`` modes.

    Returns the raw matrix T cov T, where T negates the momentum row and
    column of every flipped mode.  The result is generally not a physical
    covariance matrix; a symplectic eigenvalue below 1/2 witnesses
    entanglement across any cut separating ``flip`` from the rest.
    """
    flip = sorted(set(flip))
    n = state.n_modes
    if not flip or len(flip) >= n:
        raise ValueError("flip must be a nonempty proper subset of the modes")
    if flip[0] < 0 or flip[-1] >= n:
        raise ValueError("mode index out of range")
    signs = np.ones(2 * n)
    for m in flip:
        signs[2 * m + 1] = -1.0
    return signs[:, None] * state.cov * signs[None, :]


def quad_variance(state: GaussianState, coeffs: np.ndarray) -> float:
    """Variance of the quadrature combination sum_k coeffs_k R_k."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (2 * state.n_modes,):
        raise ValueError("coefficient vector length does not match the state")
    return float(coeffs @ state.cov @ coeffs)


_SAMPLE_CHUNK = 1 << 16


def sample_oracle(state, count: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Monte-Carlo moment estimator, the cross-validation oracle for tests.

    Draws ``count`` samples from the multivariate normal with the state's
    moments and returns (empirical mean, empirical covariance with ddof=1).
    Accepts a GaussianState or a (mean, cov) pair.  Sampling is chunked with
    a fixed chunk size, so a fixed seed gives bit-identical output across
    runs; empirical moments converge to the analytic ones at O(1/sqrt(count)).
    """
    if count < 2:
        raise ValueError("need at least two samples")
    if isinstance(state, GaussianState):
        mean, cov = state.mean, state.cov
    else:
        mean, cov = (np.asarray(a, dtype=float) for a in state)
    d = mean.shape[0]
    w, v = np.linalg.eigh(cov)
    if w.min() < -1e-10 * max(1.0, abs(w.max())):
        raise ValueError("covariance matrix must be positive semidefinite")
    factor = v * np.sqrt(np.clip(w, 0.0, None))
    rng = np.random.default_rng(seed)
    total = np.zeros(d)
    outer = np.zeros((d, d))
    done = 0
    while done < count:
        m = min(_SAMPLE_CHUNK, count - done)
        z = rng.standard_normal((m, d))
        x = z @ factor.T + mean
        total += x.sum(axis=0)
        outer += x.T @ x
        done += m
    est_mean = total / count
    est_cov = (outer - count * np.outer(est_mean, est_mean)) / (count - 1)
    return est_mean, est_cov


def state_to_dict(state: GaussianState) -> dict:
    """JSON-ready dict {"n_modes", "mean", "cov"} with a full row-major cov."""
    return {
        "n_modes": state.n_modes,
        "mean": state.mean.tolist(),
        "cov": state.cov.tolist(),
    }


def state_from_dict(data: dict) -> GaussianState:
    """Inverse of :func:`state_to_dict`; validates shape consistency."""
    try:
        n = int(data["n_modes"])
        mean = np.asarray(data["mean"], dtype=float)
        cov = np.asarray(data["cov"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed state object: {exc}") from exc
    if mean.shape != (2 * n,) or cov.shape != (2 * n, 2 * n):
        raise ValueError("state object dimensions are inconsistent with n_modes")
    return GaussianState(mean, cov)
