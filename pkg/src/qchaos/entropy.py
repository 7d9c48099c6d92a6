"""PVM dynamical entropy of unitary maps.

Iterating a unitary and measuring a rank-1 PVM after every step turns the
outcome sequence into a Markov chain whose transition matrix is unistochastic,
P_ij = |<phi_j|U|phi_i>|^2.  Its entropy rate (base 2, so the qubit maximum is
exactly 1 bit) is (1/d) * sum_ij eta(P_ij), and the PVM entropy of U is the
maximum of that rate over all orthonormal measurement bases.

For qubits the maximum has a closed form in terms of the eigenphase distance
theta = min(|phi - psi|, 2*pi - |phi - psi|):

    H(U) = 1                                      for theta >= pi/2
    H(U) = eta(cos^2(theta/2)) + eta(sin^2(theta/2))  otherwise.

For general small d the maximum is estimated by multi-start derivative-free
ascent over a plane-rotation parametrization of the basis.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .phases import EigenphasePair, TWO_PI, require_unitary
from .rng import stream_generator

#: Orthonormality tolerance for measurement bases and density matrices.
GRAM_TOL = 1e-10
#: Row/column sum tolerance accepted by the entropy rate.
STOCHASTIC_TOL = 1e-8
#: Inputs to eta may stray this far outside [0, 1] before being rejected.
ETA_CLAMP = 1e-12

_LOG2 = math.log(2.0)


def eta(x: float) -> float:
    """Entropy summand -x * log2(x), with eta(0) = 0.

    Accepts x in [0, 1]; values within ETA_CLAMP outside are clamped, since
    squared moduli of unit vectors can overshoot by rounding.
    """
    if x < -ETA_CLAMP or x > 1.0 + ETA_CLAMP:
        raise ValueError(f"eta argument must lie in [0, 1], got {x!r}")
    x = min(max(x, 0.0), 1.0)
    if x == 0.0:
        return 0.0
    return -x * math.log(x) / _LOG2


def eta_array(x: np.ndarray) -> np.ndarray:
    """Elementwise eta on an array, clamping to [0, 1] within ETA_CLAMP."""
    a = np.asarray(x, dtype=float)
    if a.min() < -ETA_CLAMP or a.max() > 1.0 + ETA_CLAMP:
        raise ValueError("eta arguments must lie in [0, 1]")
    a = np.clip(a, 0.0, 1.0)
    out = np.zeros_like(a)
    nz = a > 0.0
    out[nz] = -a[nz] * np.log2(a[nz])
    return out


def theta_of(pair: EigenphasePair) -> float:
    """Circular distance of the two eigenphases: min(|d|, 2*pi - |d|), in [0, pi]."""
    d = abs(pair.phi - pair.psi)
    return min(d, TWO_PI - d)


@dataclass(frozen=True)
class PvmBasis:
    """Orthonormal measurement basis; columns of ``vectors`` are the states."""

    vectors: np.ndarray

    def __post_init__(self):
        v = np.array(self.vectors, dtype=complex)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError(f"basis must be a square column matrix, got shape {v.shape}")
        gram = v.conj().T @ v
        err = np.max(np.abs(gram - np.eye(v.shape[0])))
        if err > GRAM_TOL:
            raise ValueError(f"basis is not orthonormal: Gram residual {err:.3e}")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def d(self) -> int:
        return self.vectors.shape[0]

    def column(self, j: int) -> np.ndarray:
        return self.vectors[:, j]

    @classmethod
    def computational(cls, d: int = 2) -> "PvmBasis":
        return cls(np.eye(d, dtype=complex))

    @classmethod
    def x_basis(cls) -> "PvmBasis":
        """The |+>, |-> basis for qubits."""
        s = 1.0 / math.sqrt(2.0)
        return cls(np.array([[s, s], [s, -s]], dtype=complex))


@dataclass(frozen=True)
class EntropyResult:
    """Entropy rate in bits per step, with the achieving basis when optimized."""

    value: float
    optimal_basis: PvmBasis | None = None
    method: str = "closed_form"

    def __post_init__(self):
        if self.value < 0.0:
            raise ValueError(f"entropy must be nonnegative, got {self.value}")
        if self.optimal_basis is not None and self.optimal_basis.d == 2:
            if self.value > 1.0 + 1e-9:
                raise ValueError(f"qubit entropy cannot exceed 1 bit, got {self.value}")


def qubit_entropy_closed(pair: EigenphasePair) -> EntropyResult:
    """Closed-form PVM entropy of a qubit unitary with the given eigenphases."""
    th = theta_of(pair)
    if th >= math.pi / 2.0:
        return EntropyResult(1.0, method="closed_form")
    c = math.cos(0.5 * th) ** 2
    return EntropyResult(eta(c) + eta(1.0 - c), method="closed_form")


def require_density_matrix(rho, tol: float = GRAM_TOL) -> np.ndarray:
    """Validate a density matrix: Hermitian, PSD and unit trace within tol."""
    r = np.asarray(rho, dtype=complex)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {r.shape}")
    if np.max(np.abs(r - r.conj().T)) > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(r).real - 1.0) > tol:
        raise ValueError(f"density matrix trace is {np.trace(r).real}, expected 1")
    if np.linalg.eigvalsh(r).min() < -tol:
        raise ValueError("density matrix is not positive semidefinite")
    return r


def measurement_probabilities(state, basis: PvmBasis) -> np.ndarray:
    """Outcome distribution p_j = <phi_j| rho |phi_j> of measuring ``basis``."""
    rho = require_density_matrix(state)
    if rho.shape[0] != basis.d:
        raise ValueError(f"state dimension {rho.shape[0]} != basis dimension {basis.d}")
    v = basis.vectors
    p = np.einsum("ij,jk,ki->i", v.conj().T, rho, v).real
    p = np.clip(p, 0.0, None)
    return p / p.sum()


@dataclass(frozen=True)
class TransitionMatrix:
    """Unistochastic transition matrix P_{i->j}; rows and columns sum to 1."""

    entries: np.ndarray

    def __post_init__(self):
        p = np.array(self.entries, dtype=float)
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise ValueError(f"transition matrix must be square, got shape {p.shape}")
        if p.min() < -GRAM_TOL or p.max() > 1.0 + GRAM_TOL:
            raise ValueError("transition probabilities must lie in [0, 1]")
        if np.max(np.abs(p.sum(axis=1) - 1.0)) > GRAM_TOL:
            raise ValueError("rows of a unistochastic matrix must sum to 1")
        if np.max(np.abs(p.sum(axis=0) - 1.0)) > GRAM_TOL:
            raise ValueError("columns of a unistochastic matrix must sum to 1")
        p.setflags(write=False)
        object.__setattr__(self, "entries", p)

    @property
    def d(self) -> int:
        return self.entries.shape[0]


def transition_matrix(u, basis: PvmBasis) -> TransitionMatrix:
    """Markov transition matrix P_{i->j} = |<phi_j|U|phi_i>|^2 of measured dynamics."""
    m = require_unitary(u)
    if m.shape[0] != basis.d:
        raise ValueError(f"unitary dimension {m.shape[0]} != basis dimension {basis.d}")
    amp = basis.vectors.conj().T @ m @ basis.vectors  # amp[j, i] = <phi_j|U|phi_i>
    return TransitionMatrix(np.abs(amp.T) ** 2)


def markov_entropy_rate(p) -> float:
    """Entropy rate (1/d) * sum_ij eta(P_ij) of a doubly stochastic chain (bits/step).

    Double stochasticity makes the uniform distribution stationary, which is
    what the 1/d prefactor assumes.  Raw arrays are accepted and validated
    within STOCHASTIC_TOL.
    """
    if isinstance(p, TransitionMatrix):
        entries = p.entries
    else:
        entries = np.asarray(p, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError("transition matrix must be square")
        if (np.max(np.abs(entries.sum(axis=1) - 1.0)) > STOCHASTIC_TOL
                or np.max(np.abs(entries.sum(axis=0) - 1.0)) > STOCHASTIC_TOL):
            raise ValueError("matrix is not doubly stochastic within 1e-8")
        if entries.min() < -ETA_CLAMP:
            raise ValueError("transition probabilities must be nonnegative")
    d = entries.shape[0]
    return float(eta_array(entries).sum() / d)


@dataclass(frozen=True)
class OptimizerOptions:
    """Knobs for the PVM entropy maximizer (Eq-level defaults, all overridable)."""

    restarts: int = 32
    max_iters: int = 2000
    match_tol: float = 1e-3
    xatol: float = 1e-10
    seed: int = 0
    threads: int = 1


# Plane pairs acted on by successive Givens-with-phase factors, per dimension.
_PLANES = {2: ((0, 1),), 3: ((0, 1), (0, 2), (1, 2))}


def basis_from_angles(d: int, angles) -> PvmBasis:
    """Basis from the plane-rotation parametrization used by the optimizer.

    Each plane (i, j) contributes a rotation angle t and a phase f; the
    product of the d(d-1)/2 factors spans every basis up to per-column phases,
    which the entropy rate cannot see.
    """
    if d not in _PLANES:
        raise ValueError(f"unsupported dimension {d}; only d in (2, 3)")
    angles = np.asarray(angles, dtype=float)
    if angles.size != d * (d - 1):
        raise ValueError(f"expected {d * (d - 1)} angles for d={d}, got {angles.size}")
    v = np.eye(d, dtype=complex)
    for (i, j), (t, f) in zip(_PLANES[d], angles.reshape(-1, 2)):
        g = np.eye(d, dtype=complex)
        ct, st = math.cos(t), math.sin(t)
        ef = cmath.exp(1j * f)
        g[i, i] = ct
        g[i, j] = -ef * st
        g[j, i] = st / ef
        g[j, j] = ct
        v = v @ g
    return PvmBasis(v)


def _neg_rate_d2(u: np.ndarray):
    """Scalar-arithmetic objective for d = 2; ~5x faster than the ndarray path."""
    u00, u01 = complex(u[0, 0]), complex(u[0, 1])
    u10, u11 = complex(u[1, 0]), complex(u[1, 1])

    def neg(x):
        t, f = x
        ct, st = math.cos(t), math.sin(t)
        ef = cmath.exp(1j * f)
        v00, v10 = ct, st * ef.conjugate()
        v01, v11 = -ef * st, ct
        a = u00 * v00 + u01 * v10
        b = u10 * v00 + u11 * v10
        c = u00 * v01 + u01 * v11
        e = u10 * v01 + u11 * v11
        p00 = min(abs(v00.conjugate() * a + v10.conjugate() * b) ** 2, 1.0)
        p10 = min(abs(v01.conjugate() * a + v11.conjugate() * b) ** 2, 1.0)
        p01 = min(abs(v00.conjugate() * c + v10.conjugate() * e) ** 2, 1.0)
        p11 = min(abs(v01.conjugate() * c + v11.conjugate() * e) ** 2, 1.0)
        total = 0.0
        for p in (p00, p01, p10, p11):
            if p > 0.0:
                total -= p * math.log(p)
        return -0.5 * total / _LOG2

    return neg


def _neg_rate_generic(u: np.ndarray, d: int):
    def neg(x):
        v = basis_from_angles(d, x).vectors
        w = v.conj().T @ u @ v
        p = np.clip(np.abs(w) ** 2, 0.0, 1.0)
        nz = p > 0.0
        return float(np.sum(p[nz] * np.log2(p[nz])) / d)

    return neg


def pvm_entropy_optimize(u, opts: OptimizerOptions | None = None) -> EntropyResult:
    """Best-found PVM entropy rate (1/d) max_V sum eta(|(V^dag U V)_jl|^2).

    Multi-start Nelder-Mead on the plane-rotation angles: the objective is
    non-smooth where transition probabilities hit 0, so derivative-free
    descent is the robust choice at this dimension.  Restart r draws its
    start from a counter-based stream keyed by (opts.seed, r), so the best
    value can only grow as restarts increase and never depends on thread
    scheduling.  The result is best-found, not certified-global.
    """
    opts = opts or OptimizerOptions()
    m = require_unitary(u)
    d = m.shape[0]
    if d not in _PLANES:
        raise ValueError(f"unsupported dimension {d}; only d in (2, 3)")
    n_params = d * (d - 1)
    neg = _neg_rate_d2(m) if d == 2 else _neg_rate_generic(m, d)

    def run_restart(r: int):
        x0 = stream_generator(opts.seed, r).uniform(0.0, TWO_PI, n_params)
        res = scipy.optimize.minimize(
            neg, x0, method="Nelder-Mead",
            options={"xatol": opts.xatol, "fatol": 1e-12, "maxiter": opts.max_iters},
        )
        return -float(res.fun), res.x

    if opts.threads > 1:
        with ThreadPoolExecutor(max_workers=opts.threads) as pool:
            results = list(pool.map(run_restart, range(opts.restarts)))
    else:
        results = [run_restart(r) for r in range(opts.restarts)]

    best_value, best_x = -1.0, None
    for value, x in results:  # earliest restart wins ties: deterministic merge
        if value > best_value:
            best_value, best_x = value, x
    best_value = max(0.0, min(best_value, float(math.log2(d))))
    return EntropyResult(best_value, optimal_basis=basis_from_angles(d, best_x),
                         method="optimized")
