"""Chaoticity verdicts, order-K scans and exact idempotency detection.

A qubit unitary is chaotic (its PVM entropy attains the 1-bit maximum) exactly
when |tr U| <= sqrt(2); chaoticity to order K is the same test on U^K.  The
threshold is sensitive, so verdicts are tri-state: inside, outside, or within
BOUNDARY_TOL of sqrt(2).

Idempotency (U^n = I, strictly, global phase included) is decidable only for
exact rational phases; floating pairs are never declared idempotent.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .entropy import eta, qubit_entropy_closed, theta_of
from .phases import (
    EigenphasePair,
    ExactUnitarySpec,
    RationalPhase,
    power_eigenphases,
    rational_phase_order,
    trace_magnitude,
)

SQRT2 = math.sqrt(2.0)
#: Half-width of the boundary band around sqrt(2).
BOUNDARY_TOL = 1e-9


class VerdictLabel(str, enum.Enum):
    CHAOTIC = "chaotic"
    NON_CHAOTIC = "non_chaotic"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class Verdict:
    label: VerdictLabel
    trace_mag: float

    @property
    def margin(self) -> float:
        return abs(self.trace_mag - SQRT2)

    @property
    def is_chaotic(self) -> bool:
        return self.label is VerdictLabel.CHAOTIC

    @classmethod
    def from_trace_mag(cls, tm: float) -> "Verdict":
        if tm < SQRT2 - BOUNDARY_TOL:
            return cls(VerdictLabel.CHAOTIC, tm)
        if tm > SQRT2 + BOUNDARY_TOL:
            return cls(VerdictLabel.NON_CHAOTIC, tm)
        return cls(VerdictLabel.BOUNDARY, tm)


def verdict_of(pair: EigenphasePair) -> Verdict:
    """Tri-state chaoticity verdict from the sqrt(2) trace test."""
    return Verdict.from_trace_mag(trace_magnitude(pair))


def exact_theta_fraction(spec: ExactUnitarySpec, k: int) -> Fraction:
    """theta/pi of the k-th power of an exact spec, as an exact Fraction in [0, 1]."""
    if k < 1:
        raise ValueError(f"order must be a positive integer, got {k}")
    f1, f2 = spec.phase_fractions()
    d = abs((k * f1) % 2 - (k * f2) % 2)
    return min(d, 2 - d)


def _trace_mag_from_theta_fraction(tf: Fraction) -> float:
    # theta = tf*pi; trace magnitude 2*cos(theta/2) is exact at both endpoints
    if tf == 0:
        return 2.0
    if tf == 1:
        return 0.0
    return 2.0 * math.cos(float(tf) * math.pi / 2.0)


def theta_at_order(u, k: int) -> float:
    """theta of the k-th power, exact for rational specs (pi comes out exact)."""
    if isinstance(u, ExactUnitarySpec):
        return float(exact_theta_fraction(u, k)) * math.pi
    return theta_of(power_eigenphases(u, k))


def verdict_at_order(u, k: int) -> Verdict:
    """Chaoticity verdict of U^k; u is an EigenphasePair or ExactUnitarySpec."""
    if isinstance(u, ExactUnitarySpec):
        return Verdict.from_trace_mag(_trace_mag_from_theta_fraction(exact_theta_fraction(u, k)))
    if k < 1:
        raise ValueError(f"order must be a positive integer, got {k}")
    return verdict_of(power_eigenphases(u, k))


@dataclass(frozen=True)
class ChaoticityRecord:
    k: int
    theta: float
    entropy_bits: float
    trace_mag: float
    verdict: VerdictLabel

    def to_json_row(self) -> dict:
        return {"K": self.k, "theta": self.theta, "H": self.entropy_bits,
                "trace_mag": self.trace_mag, "verdict": self.verdict.value}


@dataclass(frozen=True)
class ChaoticityReport:
    """Per-order scan: theta_K, H_K, |tr U^K| and the verdict for K = 1..K_max."""

    records: tuple[ChaoticityRecord, ...]

    def record(self, k: int) -> ChaoticityRecord:
        return self.records[k - 1]

    def to_json_rows(self) -> list[dict]:
        return [r.to_json_row() for r in self.records]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["K", "theta", "H", "trace_mag", "verdict"])
        for r in self.records:
            w.writerow([r.k, repr(r.theta), repr(r.entropy_bits),
                        repr(r.trace_mag), r.verdict.value])
        return buf.getvalue()


def _exact_record(spec: ExactUnitarySpec, k: int) -> ChaoticityRecord:
    tf = exact_theta_fraction(spec, k)
    tm = _trace_mag_from_theta_fraction(tf)
    # branch on theta >= pi/2 exactly; the closed form is continuous there
    if tf >= Fraction(1, 2):
        h = 1.0
    elif tf == 0:
        h = 0.0
    else:
        c = math.cos(float(tf) * math.pi / 2.0) ** 2
        h = eta(c) + eta(1.0 - c)
    return ChaoticityRecord(k, float(tf) * math.pi, h, tm, Verdict.from_trace_mag(tm).label)


def chaoticity_scan(u, k_max: int) -> ChaoticityReport:
    """Scan orders 1..k_max; exact phase reduction when u is an ExactUnitarySpec."""
    if k_max < 1:
        raise ValueError(f"k_max must be a positive integer, got {k_max}")
    records = []
    if isinstance(u, ExactUnitarySpec):
        records = [_exact_record(u, k) for k in range(1, k_max + 1)]
    else:
        for k in range(1, k_max + 1):
            pk = power_eigenphases(u, k)
            tm = trace_magnitude(pk)
            records.append(ChaoticityRecord(k, theta_of(pk),
                                            qubit_entropy_closed(pk).value, tm,
                                            Verdict.from_trace_mag(tm).label))
    return ChaoticityReport(tuple(records))


class IdempotencyCapError(ValueError):
    """The exact idempotency order exceeds the requested cap."""

    def __init__(self, order: int, cap: int):
        self.order = order
        self.cap = cap
        super().__init__(f"idempotency order {order} exceeds cap {cap}")


@dataclass(frozen=True)
class IdempotencyResult:
    """Either a strict order n (U^n = I exactly) or a non-idempotency reason."""

    order: int | None
    reason: str | None = None
    inner_denominator_lcm: int | None = None

    @property
    def is_idempotent(self) -> bool:
        return self.order is not None


def _fraction_order(fr: Fraction) -> int:
    """Smallest n >= 1 with n*fr an even integer (fr in units of pi)."""
    return rational_phase_order(RationalPhase.from_fraction(fr % 2))


def idempotency_order(spec: ExactUnitarySpec, n_cap: int = 1_000_000) -> IdempotencyResult:
    """Exact minimal n with U^n = I, global phase included.

    n is the lcm of the orders of the two total eigenvalue phases; minimality
    is inherited from the componentwise minimal orders.  The lcm of the inner
    denominators is reported alongside, since for 1*pi/p phases with large
    prime p it is the commonly quoted order even though the strict order can
    differ by the global-phase contribution.
    """
    if n_cap < 1:
        raise ValueError(f"n_cap must be a positive integer, got {n_cap}")
    c1, c2 = spec.combined_fractions()
    order = math.lcm(_fraction_order(c1), _fraction_order(c2))
    if order > n_cap:
        raise IdempotencyCapError(order, n_cap)
    return IdempotencyResult(order=order,
                             inner_denominator_lcm=math.lcm(spec.phase1.p, spec.phase2.p))


def projective_idempotency_order(spec: ExactUnitarySpec, n_cap: int = 1_000_000) -> int:
    """Smallest n with U^n proportional to the identity (global phase ignored)."""
    if n_cap < 1:
        raise ValueError(f"n_cap must be a positive integer, got {n_cap}")
    f1, f2 = spec.phase_fractions()
    order = _fraction_order((f1 - f2) % 2)
    if order > n_cap:
        raise IdempotencyCapError(order, n_cap)
    return order


_SCAN_CHUNK = 1 << 16


def _trace_mags(pair: EigenphasePair, ks: np.ndarray) -> np.ndarray:
    # |tr U^K| = 2|cos(K*(phi-psi)/2)|; the mod-2pi reduction drops out under |cos|
    return 2.0 * np.abs(np.cos(ks * (0.5 * (pair.phi - pair.psi))))


def first_nonchaotic_order(pair: EigenphasePair, k_bound: int) -> int | None:
    """Smallest K <= k_bound with a non-chaotic verdict, or None if none found.

    None is not a proof of chaoticity to all orders; it only reports that no
    violation was seen below the bound.
    """
    if k_bound < 1:
        raise ValueError(f"k_bound must be a positive integer, got {k_bound}")
    for start in range(1, k_bound + 1, _SCAN_CHUNK):
        ks = np.arange(start, min(start + _SCAN_CHUNK, k_bound + 1), dtype=float)
        hits = np.nonzero(_trace_mags(pair, ks) > SQRT2 + BOUNDARY_TOL)[0]
        if hits.size:
            return start + int(hits[0])
    return None


def chaotic_order_fraction(pair: EigenphasePair, k_max: int) -> float:
    """Fraction of orders K in 1..k_max with a strictly chaotic verdict."""
    if k_max < 1:
        raise ValueError(f"k_max must be a positive integer, got {k_max}")
    count = 0
    for start in range(1, k_max + 1, _SCAN_CHUNK):
        ks = np.arange(start, min(start + _SCAN_CHUNK, k_max + 1), dtype=float)
        count += int(np.sum(_trace_mags(pair, ks) < SQRT2 - BOUNDARY_TOL))
    return count / k_max
