"""Stochastic side: trajectories, entropy estimation, census, phase noise.

Measuring a PVM after every K-th application of a unitary produces a Markov
chain over outcome indices with transition matrix P of U^K.  This module
samples such trajectories reproducibly (every draw comes from a counter-based
stream keyed by the caller's seed), estimates entropy rates from the sampled
symbols with a plug-in conditional block estimator, runs the uniform-phase
chaoticity census, and applies the uniform phase-noise model that perturbs
(phi, psi) to (phi + lambda, psi - lambda).
"""

from __future__ import annotations

import bisect
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .chaoticity import BOUNDARY_TOL, SQRT2, Verdict, verdict_of
from .entropy import (
    PvmBasis,
    measurement_probabilities,
    markov_entropy_rate,
    transition_matrix,
)
from .phases import (
    EigenphasePair,
    ExactUnitarySpec,
    TWO_PI,
    Unitary2,
    mod_2pi,
    require_unitary,
)
from .rng import stream_generator

#: Census trials per stream chunk; fixed so results are thread-count independent.
CENSUS_CHUNK = 1 << 15


class InsufficientDataError(ValueError):
    """Sequence too short for the requested block length."""


def _resolve_matrix(source) -> np.ndarray:
    if isinstance(source, EigenphasePair):
        return Unitary2.from_pair(source).matrix
    if isinstance(source, ExactUnitarySpec):
        return source.to_unitary().matrix
    if isinstance(source, Unitary2):
        return source.matrix
    return require_unitary(source)


@dataclass(frozen=True)
class TrajectoryConfig:
    """One measured-evolution run: measure ``basis`` after every ``period``
    applications of the unitary, ``steps`` measurements in total.

    ``initial`` is a basis index, a density matrix, or None for the maximally
    mixed state (the stationary start of any doubly stochastic chain).  The
    seed is mandatory; there is no ambient randomness anywhere.
    """

    unitary: object
    basis: PvmBasis
    steps: int
    seed: int
    period: int = 1
    initial: object = None
    stream: int = 0

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if self.period < 1:
            raise ValueError(f"period must be >= 1, got {self.period}")
        if not isinstance(self.seed, int):
            raise ValueError("seed is mandatory and must be an integer")


def _initial_distribution(cfg: TrajectoryConfig, d: int) -> np.ndarray:
    if cfg.initial is None:
        rho = np.eye(d, dtype=complex) / d
    elif isinstance(cfg.initial, (int, np.integer)):
        if not 0 <= int(cfg.initial) < d:
            raise ValueError(f"initial basis index {cfg.initial} out of range for d={d}")
        v = cfg.basis.column(int(cfg.initial))
        rho = np.outer(v, v.conj())
    else:
        rho = np.asarray(cfg.initial, dtype=complex)
    return measurement_probabilities(rho, cfg.basis)


def sample_trajectory(cfg: TrajectoryConfig) -> np.ndarray:
    """Outcome indices of the measured dynamics; bit-identical per (config, seed).

    The first outcome is a measurement of the initial state; every later one
    follows the chain P_{i->j} = |<phi_j|U^period|phi_i>|^2.
    """
    u = _resolve_matrix(cfg.unitary)
    d = u.shape[0]
    if d != cfg.basis.d:
        raise ValueError(f"unitary dimension {d} != basis dimension {cfg.basis.d}")
    u_eff = np.linalg.matrix_power(u, cfg.period)
    p = transition_matrix(u_eff, cfg.basis).entries

    cum0 = np.cumsum(_initial_distribution(cfg, d))
    cum0[-1] = 1.0
    cum = np.cumsum(p, axis=1)
    cum[:, -1] = 1.0

    uniforms = stream_generator(cfg.seed, cfg.stream).random(cfg.steps)
    out = np.empty(cfg.steps, dtype=np.uint8)
    x = int(np.searchsorted(cum0, uniforms[0], side="right"))
    out[0] = x
    ul = uniforms.tolist()
    if d == 2:
        t0, t1 = float(cum[0, 0]), float(cum[1, 0])
        for i in range(1, cfg.steps):
            x = 0 if ul[i] < (t0 if x == 0 else t1) else 1
            out[i] = x
    else:
        rows = [row.tolist() for row in cum]
        for i in range(1, cfg.steps):
            x = bisect.bisect_right(rows[x], ul[i])
            out[i] = x
    return out


def empirical_transition_matrix(sequence, d: int | None = None) -> np.ndarray:
    """Row-normalized transition frequencies of a symbol sequence (test helper)."""
    s = np.asarray(sequence, dtype=np.int64)
    if d is None:
        d = int(s.max()) + 1
    counts = np.zeros((d, d))
    np.add.at(counts, (s[:-1], s[1:]), 1.0)
    rows = counts.sum(axis=1, keepdims=True)
    rows[rows == 0.0] = 1.0
    return counts / rows


def empirical_entropy_rate(sequence, block_len: int,
                           alphabet_size: int | None = None) -> float:
    """Plug-in conditional block estimate H_{L+1} - H_L, in bits per symbol.

    Both block entropies come from the same set of (L+1)-windows, so the
    L-block marginal is exactly consistent and the difference is a genuine
    conditional entropy in [0, log2 d].  Requires at least 100 * d^L symbols.
    """
    if block_len < 1:
        raise ValueError(f"block length must be >= 1, got {block_len}")
    s = np.asarray(sequence, dtype=np.int64)
    if s.ndim != 1:
        raise ValueError("sequence must be one-dimensional")
    d = alphabet_size if alphabet_size is not None else int(s.max()) + 1
    if d < 1 or s.min() < 0 or s.max() >= d:
        raise ValueError("sequence symbols must lie in [0, alphabet_size)")
    needed = 100 * d ** block_len
    if s.size < needed:
        raise InsufficientDataError(
            f"need at least {needed} symbols for block length {block_len} "
            f"over a {d}-letter alphabet, got {s.size}")

    n_win = s.size - block_len
    codes = np.zeros(n_win, dtype=np.int64)
    for j in range(block_len + 1):  # last symbol is the least significant digit
        codes += s[j:j + n_win] * d ** (block_len - j)
    counts = np.bincount(codes, minlength=d ** (block_len + 1))

    def block_entropy(c: np.ndarray) -> float:
        n = c[c > 0].astype(float)
        total = n.sum()
        return math.log2(total) - float((n * np.log2(n)).sum()) / total

    h_hi = block_entropy(counts)
    h_lo = block_entropy(counts.reshape(-1, d).sum(axis=1))
    return max(0.0, h_hi - h_lo)


@dataclass(frozen=True)
class CensusResult:
    """Uniform-psi chaoticity census with its 3-sigma binomial half-width."""

    n_trials: int
    chaotic_count: int
    fraction: float
    half_width_3sigma: float

    def to_json(self) -> dict:
        return {"n_trials": self.n_trials, "chaotic_count": self.chaotic_count,
                "fraction": self.fraction, "half_width_3sigma": self.half_width_3sigma}


def _census_chunk(seed: int, chunk: int, size: int) -> int:
    psis = stream_generator(seed, chunk).uniform(0.0, TWO_PI, size)
    # trace magnitude of the SU(2) pair built from psi is 2|cos(psi)|;
    # boundary verdicts count as chaotic (the criterion is <=)
    return int(np.sum(2.0 * np.abs(np.cos(psis)) <= SQRT2 + BOUNDARY_TOL))


def monte_carlo_chaotic_fraction(n_trials: int, seed: int,
                                 threads: int = 1) -> CensusResult:
    """Draw psi uniform on [0, 2*pi), build the SU(2) pair, count chaotic verdicts.

    Trials are split into fixed chunks with one counter-based stream each, so
    the count is identical for any thread count.
    """
    if n_trials < 1:
        raise ValueError(f"n_trials must be >= 1, got {n_trials}")
    sizes = [min(CENSUS_CHUNK, n_trials - start)
             for start in range(0, n_trials, CENSUS_CHUNK)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            counts = list(pool.map(lambda c: _census_chunk(seed, c, sizes[c]),
                                   range(len(sizes))))
    else:
        counts = [_census_chunk(seed, c, sizes[c]) for c in range(len(sizes))]
    chaotic = sum(counts)
    return CensusResult(n_trials, chaotic, chaotic / n_trials,
                        3.0 * math.sqrt(0.25 / n_trials))


@dataclass(frozen=True)
class NoiseConfig:
    """Uniform phase noise of half-width epsilon*pi, one draw per step."""

    epsilon: float
    steps: int
    seed: int
    stream: int = 0

    def __post_init__(self):
        if self.epsilon < 0.0:
            raise ValueError(f"epsilon must be nonnegative, got {self.epsilon}")
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if not isinstance(self.seed, int):
            raise ValueError("seed is mandatory and must be an integer")


def noisy_phase_walk(base: EigenphasePair,
                     cfg: NoiseConfig) -> list[tuple[EigenphasePair, Verdict]]:
    """Per-step perturbed pairs ((phi+lambda) mod 2*pi, (psi-lambda) mod 2*pi).

    lambda is drawn uniformly from [-epsilon*pi, epsilon*pi] each step; the
    perturbation cancels in the phase sum, so a unimodular base stays
    unimodular at every step.
    """
    half = cfg.epsilon * math.pi
    lambdas = stream_generator(cfg.seed, cfg.stream).uniform(-half, half, cfg.steps)
    walk = []
    for lam in lambdas:
        pair = EigenphasePair(mod_2pi(base.phi + lam), mod_2pi(base.psi - lam))
        walk.append((pair, verdict_of(pair)))
    return walk


class EntropyRateExperiment(NamedTuple):
    """(empirical, predicted, abs_diff) entropy rates in bits per step."""

    empirical: float
    predicted: float
    abs_diff: float


def entropy_rate_experiment(pair: EigenphasePair, basis_choice: str, length: int,
                            block_len: int, seed: int,
                            period: int = 1) -> EntropyRateExperiment:
    """Empirical vs exact entropy rate for a pair measured in a chosen basis.

    ``basis_choice`` is "x_basis" (the |+>, |-> basis against the eigenframe)
    or "optimized" (the PVM entropy maximizer's basis).  The prediction is the
    Markov entropy rate of the exact transition matrix of U^period.
    """
    u = Unitary2.from_pair(pair).matrix
    if basis_choice == "x_basis":
        basis = PvmBasis.x_basis()
    elif basis_choice == "optimized":
        from .entropy import pvm_entropy_optimize

        basis = pvm_entropy_optimize(u).optimal_basis
    else:
        raise ValueError(f"basis_choice must be 'x_basis' or 'optimized', got {basis_choice!r}")
    cfg = TrajectoryConfig(pair, basis, steps=length, seed=seed, period=period)
    outcomes = sample_trajectory(cfg)
    empirical = empirical_entropy_rate(outcomes, block_len, alphabet_size=2)
    predicted = markov_entropy_rate(
        transition_matrix(np.linalg.matrix_power(u, period), basis))
    return EntropyRateExperiment(empirical, predicted, abs(empirical - predicted))


def write_trajectory_outputs(prefix, outcomes: np.ndarray, sidecar: dict,
                             ) -> tuple[Path, Path]:
    """Write the raw symbol stream (one byte per outcome) and its JSON sidecar."""
    prefix = Path(prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    stream_path = prefix.with_suffix(".stream")
    json_path = prefix.with_suffix(".json")
    stream_path.write_bytes(np.asarray(outcomes, dtype=np.uint8).tobytes())
    json_path.write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    return stream_path, json_path
