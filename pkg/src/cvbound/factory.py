"""Constructors for the unlockable bound-entangled Gaussian states.

The four-mode state is built from two position-sum / momentum-difference
squeezed pairs (modes (0,1) and (2,3)) mixed over correlated classical
displacements driven by two Gaussian random number generators: an x-pattern
(+1, +1, -1, -1) of strength sigma_x and a p-pattern (-1, +1, +1, -1) of
strength sigma_p.  Both canonical nullifier variances equal 2*exp(-2r)
independently of the noise strengths, because the patterns are orthogonal to
the nullifiers by construction.

The 2n-mode generalization keeps the two global nullifiers (position sum and
alternating momentum sum) and injects the classical noise as a chain of
n_pairs - 1 nearest-neighbour pair patterns.  A chain is used because it
cancels in both nullifiers for every n and reduces to the two-generator
four-mode circuit at n_pairs = 2; a single globally alternating pattern would
cancel only for even pair counts.

``equivalent_construction`` rebuilds the same covariance matrix from
resources placed on a different pairing of the four modes:

* grouping {0,3 | 1,2}: squeezed pairs sit on (0,3) and (1,2) and are mixed
  over two classically correlated displacement families.  Matching the target
  covariance exactly forces the pair squeezing to equal r and is possible
  precisely when sigma^2 >= sinh(2r)/4 in each quadrature sector (the
  positive-semidefiniteness window of the required noise).  That window
  coincides with the set of noise strengths for which the state is separable
  across this grouping, as it must for a mixture-of-products recipe.
* grouping {0,2 | 1,3}: party-local balanced beamsplitters (inside {0,2} and
  inside {1,3}) exactly factorize the state into one noise-free squeezed pair
  crossing the cut and one doubly-noised squeezed pair.  The construction is
  valid for every noise strength, and the untouched pair is why the state
  stays entangled across this grouping no matter how strong the noise is.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .stabilizer import Partition
from .states import (
    GaussianState,
    NoisePattern,
    SymplecticMap,
    add_classical_noise,
    apply_symplectic,
    beamsplitter,
    epr_pair,
    tensor,
)

GROUP_12_34 = Partition(((0, 1), (2, 3)))
GROUP_14_23 = Partition(((0, 3), (1, 2)))
GROUP_13_24 = Partition(((0, 2), (1, 3)))

__all__ = [
    "BoundStateSpec",
    "ConstructionVariant",
    "GROUP_12_34",
    "GROUP_14_23",
    "GROUP_13_24",
    "smolin_cv_four",
    "smolin_cv_2n",
    "equivalent_construction",
    "chain_noise_patterns",
    "mode_permutation",
]


@dataclass(frozen=True)
class BoundStateSpec:
    """Parameters of the bound-state family: pair count, squeezing, noise."""

    n_pairs: int = 2
    r: float = 1.0
    sigma_x: float = 1.0
    sigma_p: float = 1.0

    def __post_init__(self):
        if int(self.n_pairs) != self.n_pairs or self.n_pairs < 2:
            raise ValueError("n_pairs must be an integer >= 2")
        if not 0.0 <= self.r <= 20.0:
            raise ValueError("squeezing parameter must lie in [0, 20]")
        if self.sigma_x < 0 or self.sigma_p < 0:
            raise ValueError("noise strengths must be nonnegative")

    @property
    def n_modes(self) -> int:
        return 2 * self.n_pairs

    def to_dict(self) -> dict:
        return {
            "n_pairs": self.n_pairs,
            "r": self.r,
            "sigma_x": self.sigma_x,
            "sigma_p": self.sigma_p,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BoundStateSpec":
        try:
            return cls(
                n_pairs=int(data["n_pairs"]),
                r=float(data["r"]),
                sigma_x=float(data["sigma_x"]),
                sigma_p=float(data["sigma_p"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed state spec: {exc}") from exc


@dataclass(frozen=True)
class ConstructionVariant:
    """Outcome of matching an alternative generation circuit to the target.

    ``feasible`` is False when the matching system has no nonnegative
    solution; in that case the parameter fields are None.  For the
    {0,3 | 1,2} grouping, ``sigma_x_prime``/``sigma_p_prime`` are the
    strengths of the grouping's own correlated-displacement mixers and
    ``residual_sigma_x``/``residual_sigma_p`` the leftover strengths on the
    original pair patterns.  For the {0,2 | 1,3} grouping the primed sigmas
    are the (doubled-variance) strengths on the noisy pair, and
    ``noise_free_pair`` names the register slots of the squeezed pair that
    carries no displacement noise at all.
    """

    grouping: Partition
    feasible: bool
    r_prime: float | None = None
    sigma_x_prime: float | None = None
    sigma_p_prime: float | None = None
    residual_sigma_x: float | None = None
    residual_sigma_p: float | None = None
    noise_free_pair: tuple[int, int] | None = None
    note: str = ""


def _mode_parity_sign(m: int) -> float:
    # sign of p_m in the alternating momentum nullifier
    return 1.0 if m % 2 == 0 else -1.0


def chain_noise_patterns(pairs, sigma_x: float, sigma_p: float, n_modes: int) -> list[NoisePattern]:
    """Nearest-neighbour pair-chain displacement patterns.

    Pattern k puts x-signs +1 on the modes of pairs[k] and -1 on pairs[k+1];
    its p-companion puts -eps_m on pairs[k] and +eps_m on pairs[k+1], where
    eps_m is the alternating-nullifier sign of mode m.  Every pattern is
    orthogonal to both global nullifiers, so the nullifier variances never
    depend on the noise strengths.
    """
    patterns = []
    for k in range(len(pairs) - 1):
        xpat = np.zeros(2 * n_modes)
        ppat = np.zeros(2 * n_modes)
        for m in pairs[k]:
            xpat[2 * m] = 1.0
            ppat[2 * m + 1] = -_mode_parity_sign(m)
        for m in pairs[k + 1]:
            xpat[2 * m] = -1.0
            ppat[2 * m + 1] = +_mode_parity_sign(m)
        patterns.append(NoisePattern(xpat, sigma_x))
        patterns.append(NoisePattern(ppat, sigma_p))
    return patterns


def mode_permutation(targets, n_modes: int) -> SymplecticMap:
    """Symplectic map relabelling mode m of the input to targets[m]."""
    targets = list(targets)
    if sorted(targets) != list(range(n_modes)):
        raise ValueError("targets must be a permutation of 0..n-1")
    S = np.zeros((2 * n_modes, 2 * n_modes))
    for src, dst in enumerate(targets):
        S[2 * dst, 2 * src] = 1.0
        S[2 * dst + 1, 2 * src + 1] = 1.0
    return SymplecticMap(S)


def _epr_pairs_on(r: float, pairs, n_modes: int) -> GaussianState:
    state = epr_pair(r)
    for _ in range(len(pairs) - 1):
        state = tensor(state, epr_pair(r))
    targets = [0] * n_modes
    for k, (a, b) in enumerate(pairs):
        targets[2 * k] = a
        targets[2 * k + 1] = b
    return apply_symplectic(state, mode_permutation(targets, n_modes))


def smolin_cv_four(spec: BoundStateSpec) -> GaussianState:
    """The four-mode unlockable bound-entangled state at finite squeezing.

    Two squeezed pairs on modes (0,1) and (2,3), then zero-mean Gaussian
    displacements along the x-pattern (+1, +1, -1, -1) with strength sigma_x
    and the p-pattern (-1, +1, +1, -1) with strength sigma_p.
    """
    if spec.n_pairs != 2:
        raise ValueError("the four-mode constructor needs n_pairs = 2")
    state = tensor(epr_pair(spec.r), epr_pair(spec.r))
    xpat = np.array([1, 0, 1, 0, -1, 0, -1, 0], dtype=float)
    ppat = np.array([0, -1, 0, 1, 0, 1, 0, -1], dtype=float)
    state = add_classical_noise(state, NoisePattern(xpat, spec.sigma_x))
    state = add_classical_noise(state, NoisePattern(ppat, spec.sigma_p))
    return state


def smolin_cv_2n(spec: BoundStateSpec) -> GaussianState:
    """2n-mode generalization with pair-chain noise (see module docstring)."""
    pairs = [(2 * k, 2 * k + 1) for k in range(spec.n_pairs)]
    state = _epr_pairs_on(spec.r, pairs, spec.n_modes)
    for noise in chain_noise_patterns(pairs, spec.sigma_x, spec.sigma_p, spec.n_modes):
        state = add_classical_noise(state, noise)
    return state


def _matched_regrouping(spec: BoundStateSpec) -> tuple[ConstructionVariant, GaussianState | None]:
    # exact matching forces the regrouped pair squeezing to equal r and fixes
    # the grouping-chain strength at sinh(2r)/4 per sector; the original-chain
    # residual sigma^2 - sinh(2r)/4 must be nonnegative for the required
    # noise matrix to stay positive semidefinite
    base_sq = np.sinh(2 * spec.r) / 4.0
    res_x_sq = spec.sigma_x**2 - base_sq
    res_p_sq = spec.sigma_p**2 - base_sq
    if res_x_sq < 0 or res_p_sq < 0:
        note = (
            "infeasible: matching needs sigma_x^2 and sigma_p^2 >= sinh(2r)/4 "
            f"= {base_sq:.12g}"
        )
        return ConstructionVariant(GROUP_14_23, feasible=False, note=note), None
    grouping_pairs = GROUP_14_23.subsets
    original_pairs = GROUP_12_34.subsets
    state = _epr_pairs_on(spec.r, grouping_pairs, 4)
    base = np.sqrt(base_sq)
    for noise in chain_noise_patterns(grouping_pairs, base, base, 4):
        state = add_classical_noise(state, noise)
    for noise in chain_noise_patterns(
        original_pairs, np.sqrt(res_x_sq), np.sqrt(res_p_sq), 4
    ):
        state = add_classical_noise(state, noise)
    variant = ConstructionVariant(
        GROUP_14_23,
        feasible=True,
        r_prime=spec.r,
        sigma_x_prime=base,
        sigma_p_prime=base,
        residual_sigma_x=float(np.sqrt(res_x_sq)),
        residual_sigma_p=float(np.sqrt(res_p_sq)),
        note="squeezed pairs on (0,3) and (1,2) plus classically correlated displacements",
    )
    return variant, state


def _factorized_regrouping(spec: BoundStateSpec) -> tuple[ConstructionVariant, GaussianState]:
    # party-local balanced beamsplitters inside {0,2} and {1,3} turn the state
    # into a product of a noise-free squeezed pair (slots 0,1) and a pair
    # carrying doubled-variance displacement noise (slots 2,3)
    noisy = epr_pair(spec.r)
    noisy = add_classical_noise(
        noisy, NoisePattern(np.array([1, 0, 1, 0], dtype=float), np.sqrt(2) * spec.sigma_x)
    )
    noisy = add_classical_noise(
        noisy, NoisePattern(np.array([0, 1, 0, -1], dtype=float), np.sqrt(2) * spec.sigma_p)
    )
    slots = tensor(epr_pair(spec.r), noisy)
    unmix = beamsplitter(0, 2, -np.pi / 4, 4) @ beamsplitter(1, 3, -np.pi / 4, 4)
    state = apply_symplectic(slots, unmix)
    variant = ConstructionVariant(
        GROUP_13_24,
        feasible=True,
        r_prime=spec.r,
        sigma_x_prime=float(np.sqrt(2) * spec.sigma_x),
        sigma_p_prime=float(np.sqrt(2) * spec.sigma_p),
        noise_free_pair=(0, 1),
        note=(
            "balanced beamsplitters local to {0,2} and {1,3} factorize the state; "
            "register slots (0,1) hold a squeezed pair with no displacement noise, "
            "which keeps the state entangled across this grouping for every sigma"
        ),
    )
    return variant, state


def equivalent_construction(
    spec: BoundStateSpec, grouping: Partition
) -> tuple[ConstructionVariant, GaussianState | None]:
    """Rebuild the four-mode state from resources on a different mode pairing.

    Supported groupings are {0,3 | 1,2} and {0,2 | 1,3}.  Whenever the
    returned variant reports matched parameters, the rebuilt covariance
    matrix equals the one from :func:`smolin_cv_four` elementwise to 1e-10;
    infeasibility is a value, not an error.
    """
    if spec.n_pairs != 2:
        raise ValueError("equivalent constructions are defined for the four-mode state")
    if grouping == GROUP_14_23:
        return _matched_regrouping(spec)
    if grouping == GROUP_13_24:
        return _factorized_regrouping(spec)
    raise ValueError("unsupported grouping: expected {0,3 | 1,2} or {0,2 | 1,3}")
