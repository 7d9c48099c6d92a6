"""Eigenphase representations of 2x2 unitaries.

A 2x2 unitary is determined, up to the choice of eigenbasis, by its pair of
eigenphases (phi, psi).  This module holds the floating-point pair, the exact
rational phase m*pi/p used wherever idempotency must be decided exactly, and
the conversions between the matrix view and the eigenphase view.

Conventions: phases live in [0, 2*pi); a pair is called unimodular when
(phi + psi) mod 2*pi vanishes, which is the det(U) = 1 case.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg

TWO_PI = 2.0 * math.pi

#: Tolerance on the unimodular phase-sum invariant.
PHASE_TOL = 1e-12
#: Max absolute entrywise deviation of U^dag U from the identity.
UNITARY_TOL = 1e-12


def mod_2pi(x: float) -> float:
    """Reduce a finite angle (radians) to [0, 2*pi)."""
    if not math.isfinite(x):
        raise ValueError(f"angle must be finite, got {x!r}")
    r = math.fmod(x, TWO_PI)
    if r < 0.0:
        r += TWO_PI
    if r >= TWO_PI:  # fmod rounding can land exactly on 2*pi
        r -= TWO_PI
    return r


def circular_distance(x: float, y: float) -> float:
    """Distance between two angles on the circle, in [0, pi]."""
    d = mod_2pi(x - y)
    return min(d, TWO_PI - d)


@dataclass(frozen=True)
class EigenphasePair:
    """Eigenphases (phi, psi) of a 2x2 unitary, each reduced to [0, 2*pi)."""

    phi: float
    psi: float

    def __post_init__(self):
        object.__setattr__(self, "phi", mod_2pi(float(self.phi)))
        object.__setattr__(self, "psi", mod_2pi(float(self.psi)))

    def is_unimodular(self, tol: float = PHASE_TOL) -> bool:
        """True if (phi + psi) mod 2*pi = 0 within tol (the det = 1 case)."""
        return circular_distance(self.phi + self.psi, 0.0) <= tol

    def swapped(self) -> "EigenphasePair":
        return EigenphasePair(self.psi, self.phi)


def make_su2_from_psi(psi: float) -> EigenphasePair:
    """SU(2) pair from a single phase: phi is fixed by phi + psi = 0 mod 2*pi."""
    psi_r = mod_2pi(psi)
    phi = mod_2pi(TWO_PI - psi_r)
    return EigenphasePair(phi, psi_r)


@dataclass(frozen=True)
class RationalPhase:
    """Exact phase m*pi/p with gcd(|m|, p) = 1 and 0 <= m/p < 2.

    Any integer pair is accepted and normalized: the sign of p is absorbed
    into m, m is reduced modulo 2p so the phase lands in [0, 2*pi), and the
    fraction is brought to lowest terms.
    """

    m: int
    p: int = 1

    def __post_init__(self):
        m, p = self.m, self.p
        if not isinstance(m, int) or not isinstance(p, int):
            raise ValueError("rational phase needs integer numerator and denominator")
        if p == 0:
            raise ValueError("rational phase denominator must be nonzero")
        if p < 0:
            m, p = -m, -p
        m %= 2 * p
        g = math.gcd(m, p)
        object.__setattr__(self, "m", m // g)
        object.__setattr__(self, "p", p // g)

    @property
    def fraction(self) -> Fraction:
        """The phase in units of pi, as an exact Fraction in [0, 2)."""
        return Fraction(self.m, self.p)

    def radians(self) -> float:
        return self.m * math.pi / self.p

    @classmethod
    def from_fraction(cls, fr: Fraction) -> "RationalPhase":
        return cls(fr.numerator, fr.denominator)

    def __add__(self, other: "RationalPhase") -> "RationalPhase":
        return RationalPhase.from_fraction(self.fraction + other.fraction)

    def __str__(self) -> str:
        return f"{self.m}*pi/{self.p}"


def rational_phase_order(ph: RationalPhase) -> int:
    """Smallest n >= 1 with n * (m*pi/p) an exact multiple of 2*pi.

    n * m / p must be an even integer, which gives n = 2p / gcd(m, 2p).
    """
    return 2 * ph.p // math.gcd(ph.m, 2 * ph.p)


def require_unitary(u, tol: float = UNITARY_TOL, d: int | None = None) -> np.ndarray:
    """Validate that u is a d x d unitary matrix and return it as complex ndarray.

    Raises ValueError when the shape is wrong or max |U^dag U - I| exceeds tol.
    """
    if isinstance(u, Unitary2):
        u = u.matrix
    m = np.asarray(u, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if d is not None and m.shape[0] != d:
        raise ValueError(f"expected a {d}x{d} matrix, got shape {m.shape}")
    residual = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))
    if residual > tol:
        raise ValueError(f"matrix is not unitary: residual {residual:.3e} > {tol:.1e}")
    return m


@dataclass(frozen=True)
class Unitary2:
    """A dense 2x2 unitary, unitary within UNITARY_TOL.

    ``global_phase`` records the scalar prefactor (radians) when the matrix
    was materialized from an exact recipe; it is None for plain matrices.
    """

    matrix: np.ndarray
    global_phase: float | None = None

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
        require_unitary(m, UNITARY_TOL)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_pair(cls, pair: EigenphasePair) -> "Unitary2":
        """Diagonal representative Diag(e^{i phi}, e^{i psi}) in the eigenframe."""
        return cls(np.diag([cmath.exp(1j * pair.phi), cmath.exp(1j * pair.psi)]))

    @classmethod
    def identity(cls) -> "Unitary2":
        return cls(np.eye(2, dtype=complex))


@dataclass(frozen=True)
class ExactUnitarySpec:
    """Exact recipe e^{i g} * Diag(e^{i phase1}, e^{i phase2}), all rational phases.

    This is the only representation on which idempotency is decidable; the
    global phase takes part in strict idempotency but never in trace-magnitude
    chaoticity checks (|tr| is invariant under a unit-modulus prefactor).
    """

    phase1: RationalPhase
    phase2: RationalPhase
    global_phase: RationalPhase = RationalPhase(0)

    def pair(self) -> EigenphasePair:
        """The inner eigenphases as floats (global phase excluded)."""
        return EigenphasePair(self.phase1.radians(), self.phase2.radians())

    def phase_fractions(self) -> tuple[Fraction, Fraction]:
        """Inner phases in units of pi."""
        return self.phase1.fraction, self.phase2.fraction

    def combined_fractions(self) -> tuple[Fraction, Fraction]:
        """Total eigenvalue phases (global + inner) in units of pi, mod 2."""
        g = self.global_phase.fraction
        return (g + self.phase1.fraction) % 2, (g + self.phase2.fraction) % 2

    def to_unitary(self) -> Unitary2:
        g = self.global_phase.radians()
        pre = cmath.exp(1j * g)
        m = np.diag([pre * cmath.exp(1j * self.phase1.radians()),
                     pre * cmath.exp(1j * self.phase2.radians())])
        return Unitary2(m, global_phase=g)


def eigenphases_of(u) -> tuple[EigenphasePair, np.ndarray]:
    """Eigenphases and an orthonormal eigenbasis V of a 2x2 unitary.

    Returns (pair, V) with u = V @ Diag(e^{i phi}, e^{i psi}) @ V^dag and a
    reconstruction error of at most 1e-10 per entry.  Diagonal input (which
    covers every degenerate unitary) returns the computational basis.
    """
    m = require_unitary(u, UNITARY_TOL, d=2)
    if max(abs(m[0, 1]), abs(m[1, 0])) <= UNITARY_TOL:
        pair = EigenphasePair(cmath.phase(m[0, 0]), cmath.phase(m[1, 1]))
        return pair, np.eye(2, dtype=complex)
    t, v = scipy.linalg.schur(m, output="complex")
    pair = EigenphasePair(cmath.phase(t[0, 0]), cmath.phase(t[1, 1]))
    diag = np.diag([cmath.exp(1j * pair.phi), cmath.exp(1j * pair.psi)])
    err = np.max(np.abs(v @ diag @ v.conj().T - m))
    if err > 1e-10:
        raise ArithmeticError(f"eigendecomposition failed to reconstruct input: {err:.3e}")
    return pair, v


def power_eigenphases(pair: EigenphasePair, k: int) -> EigenphasePair:
    """Eigenphases of the k-th power: (k*phi mod 2*pi, k*psi mod 2*pi)."""
    if k < 1:
        raise ValueError(f"power must be a positive integer, got {k}")
    return EigenphasePair(math.fmod(k * pair.phi, TWO_PI), math.fmod(k * pair.psi, TWO_PI))


def trace_magnitude(pair: EigenphasePair) -> float:
    """|e^{i phi} + e^{i psi}| = 2 |cos((phi - psi)/2)|, in [0, 2].

    Unaffected by any unit-modulus global prefactor, so this is already the
    trace magnitude of the unimodular representative.
    """
    return 2.0 * abs(math.cos(0.5 * (pair.phi - pair.psi)))
