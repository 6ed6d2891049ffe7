"""Free-fermion eigenstates and their hard-core-boson images.

A k-particle free-fermion eigenstate on the power graph is a normalized
Slater determinant over k distinct single-particle modes. It vanishes on
every collision label, survives the hard-core deletion untouched, and after
multiplication by the component-sorting signs becomes symmetric under
walker exchange. Projecting onto the ascending-label graph then yields a
complete orthonormal eigenbasis of the hard-core adjacency; eigenvalues are
sums of the chosen single-particle eigenvalues.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSizeError, PreconditionError
from .graph_core import weighted_path
from .hardcore import (
    DeletionMask,
    SignedDiagonal,
    _digits,
    apply_deletion,
    decompose_components,
    deletion_mask,
    symmetric_power,
    unit_antisymmetry,
)
from .products import cartesian_power
from .spectral import SpectralDecomposition, eigh

_BASIS_TAGS = ("power", "kept", "identical")


@dataclass(frozen=True)
class ModeTuple:
    """Strictly ascending single-particle mode indices, 0-based from the bottom."""

    modes: tuple[int, ...]

    def __post_init__(self) -> None:
        modes = tuple(int(x) for x in self.modes)
        if len(modes) < 1:
            raise InvalidSizeError("mode tuple needs at least one mode")
        if modes[0] < 0 or any(a >= b for a, b in zip(modes, modes[1:])):
            raise PreconditionError(f"modes must be strictly ascending and non-negative, got {modes}")
        object.__setattr__(self, "modes", modes)

    @property
    def k(self) -> int:
        return len(self.modes)

    @property
    def a(self) -> int:
        """Mode-index sum; ranks the tuple within the eigenvalue ladder."""
        return sum(self.modes)


def all_mode_tuples(n: int, k: int) -> tuple[ModeTuple, ...]:
    """Every ascending choice of k modes out of n, lexicographic order."""
    if not isinstance(n, int) or not isinstance(k, int) or not 1 <= k <= n:
        raise InvalidSizeError(f"need 1 <= k <= n, got k={k!r}, n={n!r}")
    return tuple(ModeTuple(c) for c in itertools.combinations(range(n), k))


@dataclass(frozen=True, eq=False)
class StateVector:
    """Amplitudes over one of the three walker bases.

    ``basis`` is "power" (all n**k labels), "kept" (collision-free labels in
    kept order) or "identical" (ascending labels in lexicographic order).
    """

    amplitudes: np.ndarray
    basis: str
    n: int
    k: int

    def __post_init__(self) -> None:
        if self.basis not in _BASIS_TAGS:
            raise PreconditionError(f"unknown basis tag {self.basis!r}")
        amps = np.array(self.amplitudes, dtype=float)
        expected = {
            "power": self.n**self.k,
            "kept": math.factorial(self.k) * math.comb(self.n, self.k),
            "identical": math.comb(self.n, self.k),
        }[self.basis]
        if amps.shape != (expected,):
            raise PreconditionError(
                f"basis {self.basis!r} for (n={self.n}, k={self.k}) needs {expected} amplitudes"
            )
        if not np.all(np.isfinite(amps)):
            raise PreconditionError("amplitudes must be finite")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def fermion_state(spec: SpectralDecomposition, modes: ModeTuple) -> StateVector:
    """Normalized Slater determinant of the chosen modes over the power basis.

    Amplitude on label (x_1, ..., x_k) is det(Z[x_i, l_j]) / sqrt(k!), which
    is antisymmetric under walker exchange and zero whenever two walkers
    share a site.
    """
    n = spec.n
    k = modes.k
    if modes.modes[-1] >= n:
        raise PreconditionError(f"mode {modes.modes[-1]} outside 0..{n - 1}")
    digits = _digits(np.arange(n**k), n, k)
    slater = spec.eigenvectors[np.ix_(np.arange(n), list(modes.modes))]
    blocks = slater[digits, :]  # (n**k, k, k): rows are walkers, columns modes
    dets = np.linalg.det(blocks)
    return StateVector(dets / math.sqrt(math.factorial(k)), "power", n, k)


def tg_boson_state(fermion: StateVector, signed: SignedDiagonal, mask: DeletionMask) -> StateVector:
    """Restrict a fermion state to kept labels and flip the component signs.

    The result is symmetric under walker exchange: exchanging two walkers
    lands in another component whose sign flip cancels the determinant's.
    """
    if (fermion.n, fermion.k) != (mask.n, mask.k):
        raise PreconditionError("fermion state and mask were built for different (n, k)")
    if fermion.basis == "power":
        restricted = fermion.amplitudes[mask.keep]
    elif fermion.basis == "kept":
        restricted = fermion.amplitudes
    else:
        raise PreconditionError("tg_boson_state needs a power- or kept-basis state")
    if signed.signs.size != restricted.size:
        raise PreconditionError("sign vector does not match the kept basis")
    return StateVector(restricted * signed.signs, "kept", fermion.n, fermion.k)


def project_identical(state: StateVector, mask: DeletionMask) -> StateVector:
    """Apply the indistinguishability isometry: cell sums scaled by 1/sqrt(k!)."""
    if state.basis != "kept":
        raise PreconditionError("project_identical needs a kept-basis state")
    if (state.n, state.k) != (mask.n, mask.k):
        raise PreconditionError("state and mask were built for different (n, k)")
    combos = list(itertools.combinations(range(1, mask.n + 1), mask.k))
    position = {c: i for i, c in enumerate(combos)}
    out = np.zeros(len(combos))
    for amp, label in zip(state.amplitudes, mask.kept_labels()):
        out[position[tuple(sorted(label))]] += amp
    out /= math.sqrt(math.factorial(mask.k))
    return StateVector(out, "identical", state.n, state.k)


def hc_spectrum(n: int, k: int) -> tuple[tuple[float, int], ...]:
    """Eigenvalues of the k-walker hard-core graph on the n-vertex weighted path.

    Returns (value, degeneracy) pairs ascending. Values form the integer
    ladder k(k - n) + 2*d for d = 0..k(n - k); the degeneracy of step d
    counts the ascending mode tuples whose index sum exceeds the minimum
    possible sum by d.
    """
    if not isinstance(n, int) or not isinstance(k, int) or not 1 <= k <= n:
        raise InvalidSizeError(f"need 1 <= k <= n, got k={k!r}, n={n!r}")
    counts = Counter(sum(c) for c in itertools.combinations(range(n), k))
    base = k * (k - 1) // 2
    ladder = []
    for d in range(k * (n - k) + 1):
        ladder.append((float(k * (k - n) + 2 * d), counts[base + d]))
    return tuple(ladder)


def parity_sign_rule(modes: ModeTuple, k: int) -> int:
    """Sign (-1)**(odd-mode count + floor(k/2)) attached to a mode tuple.

    Equals +1 on the bottom tuple (0, 1, ..., k-1) and flips whenever the
    index sum changes parity, so it alternates along the eigenvalue ladder.
    """
    if modes.k != k:
        raise PreconditionError(f"mode tuple has k={modes.k}, expected {k}")
    odd = sum(1 for m in modes.modes if m % 2)
    return -1 if (odd + k // 2) % 2 else 1


def verify_corollary1(n: int, k: int) -> float:
    """Worst residual of the projected Tonks-Girardeau eigenbasis construction.

    Builds every mode tuple's fermion state on the k-fold power of the
    n-vertex weighted path, pushes it through deletion, signing and the
    indistinguishability projection, and measures both the eigen-residual
    against the ascending-label adjacency and the Gram deviation from
    orthonormality. Returns the larger of the two maxima.
    """
    if not isinstance(n, int) or not isinstance(k, int) or not 1 <= k <= n or n < 2:
        raise InvalidSizeError(f"need n >= 2 and 1 <= k <= n, got n={n!r}, k={k!r}")
    path = weighted_path(n)
    spec = eigh(path)
    mask = deletion_mask(n, k)
    power = cartesian_power(path, k)
    kept = apply_deletion(power, mask)
    signed = unit_antisymmetry(decompose_components(kept, n, k))
    identical = symmetric_power(path, k)
    tuples = all_mode_tuples(n, k)
    states = np.empty((identical.n, len(tuples)))
    energies = np.empty(len(tuples))
    for col, modes in enumerate(tuples):
        fermion = fermion_state(spec, modes)
        boson = tg_boson_state(fermion, signed, mask)
        projected = project_identical(boson, mask)
        states[:, col] = projected.amplitudes
        energies[col] = float(spec.eigenvalues[list(modes.modes)].sum())
    residual = float(np.abs(identical.adjacency @ states - states * energies[None, :]).max())
    gram = float(np.abs(states.T @ states - np.eye(len(tuples))).max())
    return max(residual, gram)
