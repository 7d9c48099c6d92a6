"""Builders for the studied unitary families.

Three kinds of two-level unitaries are constructed here:

* exact rational-phase unitaries e^{i g} Diag(e^{i m1 pi/p1}, e^{i m2 pi/p2}),
  which are idempotent of a computable finite order;
* unitaries chaotic at a prescribed order K, obtained from the smallest prime
  p2 not dividing K with |cos(pi K / p2)| <= 1/sqrt(2), setting psi = pi/p2;
* non-idempotent SU(2) pairs from integer quadratic recurrences: with alpha,
  beta the roots of x^2 + a x + b (a, b nonzero integers, discriminant
  D = a^2 - 4b positive and not a perfect square), the sums
  s_t = alpha^t + beta^t follow the integer recurrence

      s_0 = 2,  s_1 = -a,  s_{t+1} = -a s_t - b s_{t-1},

  and whenever s_t is even the pair (phi, psi) = ((alpha^t mod 2) pi,
  (beta^t mod 2) pi) is a valid SU(2) eigenphase pair with certified
  irrational phases.

The mod-2 reduction of alpha^t is the delicate part: the integer portion can
carry dozens of bits while only the fractional part matters.  alpha^t is
evaluated by interval arithmetic at a precision chosen from t and |alpha|;
beta^t mod 2 is then recovered from the exact integer s_t as (s_t - alpha^t)
mod 2, confining all cancellation error to the alpha^t interval.  A direct
interval evaluation of beta^t cross-checks the result, so a precision failure
raises instead of silently corrupting phases.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from mpmath import iv, mp, mpf

from .phases import EigenphasePair, ExactUnitarySpec, RationalPhase

#: Circular tolerance (units of pi, mod 2) for the residue self-check.
SELF_CHECK_TOL = 2.0 ** -32
#: Guard bits added beyond the integer-part width of alpha^t.
DEFAULT_GUARD_BITS = 64

_INV_SQRT2 = 2.0 ** -0.5


class PrecisionSelfCheckError(ArithmeticError):
    """The interval reduction could not certify the phases at this precision."""


@dataclass(frozen=True)
class QuadraticSeed:
    """Integer coefficients (a, b) of x^2 + a x + b = 0.

    Only (a, b) are stored; the roots alpha = (-a + sqrt(D))/2 and
    beta = (-a - sqrt(D))/2 are derived on demand so nothing is committed to
    floating point prematurely.
    """

    a: int
    b: int

    def __post_init__(self):
        if not isinstance(self.a, int) or not isinstance(self.b, int):
            raise ValueError("seed coefficients must be integers")
        if self.a == 0 or self.b == 0:
            raise ValueError("seed coefficients must be nonzero")

    @property
    def discriminant(self) -> int:
        return self.a * self.a - 4 * self.b

    @property
    def has_square_discriminant(self) -> bool:
        d = self.discriminant
        if d < 0:
            return False
        r = math.isqrt(d)
        return r * r == d

    @property
    def in_default_regime(self) -> bool:
        """The a, b <= 0 regime the series constructions assume by default."""
        return self.a < 0 and self.b < 0

    def roots(self) -> tuple[float, float]:
        """(alpha, beta) as floats; fine for classification, not for reduction."""
        if self.discriminant < 0:
            raise ValueError("seed has complex roots (discriminant < 0)")
        s = math.sqrt(self.discriminant)
        return (-self.a + s) / 2.0, (-self.a - s) / 2.0


@dataclass(frozen=True)
class TraceSequence:
    """Integer sums s_t = alpha^t + beta^t for t = 0..t_max, with parity flags."""

    seed: QuadraticSeed
    values: tuple[int, ...]

    def s(self, t: int) -> int:
        return self.values[t]

    @property
    def even_flags(self) -> tuple[bool, ...]:
        return tuple(v % 2 == 0 for v in self.values)

    def even_indices(self) -> tuple[int, ...]:
        return tuple(t for t, v in enumerate(self.values) if v % 2 == 0)


def quadratic_trace_sequence(seed: QuadraticSeed, t_max: int) -> TraceSequence:
    """s_0..s_t_max by the exact integer recurrence s_{t+1} = -a s_t - b s_{t-1}."""
    if t_max < 1:
        raise ValueError(f"t_max must be a positive integer, got {t_max}")
    values = [2, -seed.a]
    for _ in range(t_max - 1):
        values.append(-seed.a * values[-1] - seed.b * values[-2])
    return TraceSequence(seed, tuple(values))


@dataclass(frozen=True)
class PrecisionPolicy:
    """Working precision (bits) for the interval evaluation of alpha^t."""

    bits: int

    def __post_init__(self):
        if self.bits < 8:
            raise ValueError(f"precision must be at least 8 bits, got {self.bits}")

    @classmethod
    def recommended(cls, seed: QuadraticSeed, t: int,
                    guard_bits: int = DEFAULT_GUARD_BITS) -> "PrecisionPolicy":
        """ceil(t * log2(max(|alpha|, |beta|, 1))) plus guard bits."""
        alpha, beta = seed.roots()
        growth = max(abs(alpha), abs(beta), 1.0)
        return cls(math.ceil(t * math.log2(growth)) + guard_bits)


def _mod2(v):
    """Residue of an mpf in [0, 2); exact at working precision away from edges."""
    r = v - 2 * mp.floor(v / 2)
    if r < 0:
        r += 2
    if r >= 2:
        r -= 2
    return r


def _circ2(x: float) -> float:
    """Distance of x from 0 on the circle of circumference 2."""
    r = math.fmod(x, 2.0)
    if r < 0.0:
        r += 2.0
    return min(r, 2.0 - r)


@dataclass(frozen=True)
class QuadraticBuildResult:
    """A constructed pair plus its series classification and self-check residual."""

    pair: EigenphasePair
    classification: str  # "converging_to_identity" or "traversing"
    s_t: int
    residual: float
    policy_bits: int


def build_quadratic_unitary(seed: QuadraticSeed, t: int,
                            policy: PrecisionPolicy | None = None,
                            allow_positive_coefficients: bool = False,
                            ) -> QuadraticBuildResult:
    """SU(2) pair ((alpha^t mod 2) pi, (beta^t mod 2) pi) from a quadratic seed.

    Preconditions: s_t must be even (otherwise the pair is not unimodular) and
    the discriminant must be positive and not a perfect square (otherwise the
    phases are rational and the construction loses its point).  Coefficients
    outside the a, b < 0 regime are rejected unless explicitly allowed.

    Raises PrecisionSelfCheckError when the interval widths or the residue
    cross-check exceed SELF_CHECK_TOL, which is how insufficient precision
    shows up instead of as silent phase corruption.
    """
    if t < 1:
        raise ValueError(f"t must be a positive integer, got {t}")
    if not seed.in_default_regime and not allow_positive_coefficients:
        raise ValueError(
            f"seed (a={seed.a}, b={seed.b}) is outside the a, b < 0 regime; "
            "pass allow_positive_coefficients=True to explore anyway")
    if seed.discriminant <= 0:
        raise ValueError(f"discriminant {seed.discriminant} must be positive")
    if seed.has_square_discriminant:
        raise ValueError(
            f"discriminant {seed.discriminant} is a perfect square, so the phases "
            "are rational; a non-idempotent construction requires an irrational root")
    s_t = quadratic_trace_sequence(seed, t).s(t)
    if s_t % 2 != 0:
        raise ValueError(f"s_{t} = {s_t} is odd; the pair would not be unimodular")

    policy = policy or PrecisionPolicy.recommended(seed, t)
    old_prec = iv.prec
    try:
        iv.prec = policy.bits
        sqrt_d = iv.sqrt(iv.mpf(seed.discriminant))
        x = ((iv.mpf(-seed.a) + sqrt_d) / 2) ** t  # alpha^t
        y = ((iv.mpf(-seed.a) - sqrt_d) / 2) ** t  # beta^t, for the cross-check
        with mp.workprec(policy.bits):
            width_x = float(mpf(x.delta.b))
            width_y = float(mpf(y.delta.b))
            if max(width_x, width_y) > SELF_CHECK_TOL:
                raise PrecisionSelfCheckError(
                    f"interval width {max(width_x, width_y):.3e} exceeds "
                    f"{SELF_CHECK_TOL:.3e} at {policy.bits} bits; raise the precision")
            mid_x = (mpf(x.a) + mpf(x.b)) / 2
            r_alpha = _mod2(mid_x)
            # beta^t mod 2 from the exact integer: cancellation stays in alpha^t
            r_beta = _mod2(mpf(s_t) - mid_x)
            r_beta_direct = _mod2((mpf(y.a) + mpf(y.b)) / 2)
            residual = _circ2(float(r_alpha + r_beta_direct))
            if residual > SELF_CHECK_TOL:
                raise PrecisionSelfCheckError(
                    f"residue self-check failed: alpha^t + beta^t deviates from the "
                    f"integer {s_t} by {residual:.3e} (mod 2) at {policy.bits} bits")
            phi = float(r_alpha) * math.pi
            psi = float(r_beta) * math.pi
    finally:
        iv.prec = old_prec

    _, beta = seed.roots()
    tag = "converging_to_identity" if abs(beta) < 1.0 else "traversing"
    return QuadraticBuildResult(EigenphasePair(phi, psi), tag, s_t, residual, policy.bits)


def build_rational_unitary(phase1: RationalPhase, phase2: RationalPhase,
                           global_phase: RationalPhase = RationalPhase(0),
                           ) -> ExactUnitarySpec:
    """Exact spec for e^{i g} Diag(e^{i phase1}, e^{i phase2}); inputs are normalized."""
    return ExactUnitarySpec(phase1, phase2, global_phase)


def _primes(cap: int):
    sieve = bytearray([1]) * (cap + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(cap) + 1):
        if sieve[i]:
            sieve[i * i::i] = b"\x00" * len(sieve[i * i::i])
    return [i for i in range(2, cap + 1) if sieve[i]]


def build_chaotic_order(k: int, prime_cap: int = 10_000) -> tuple[ExactUnitarySpec, int]:
    """Rational-phase unitary whose k-th power is chaotic, plus the prime used.

    Takes the smallest prime p2 not dividing k with |cos(pi k / p2)| <= 1/sqrt(2)
    and sets psi = pi/p2, phi = (2 p2 - 1) pi / p2 (the SU(2) completion).  The
    result is exactly rational, hence idempotent of some finite order.
    """
    if k < 1:
        raise ValueError(f"order must be a positive integer, got {k}")
    for p in _primes(prime_cap):
        if k % p == 0:
            continue
        # reduce k mod 2p exactly before the cosine; no precision loss for huge k
        r = k % (2 * p)
        if abs(math.cos(math.pi * r / p)) <= _INV_SQRT2:
            spec = ExactUnitarySpec(RationalPhase(2 * p - 1, p), RationalPhase(1, p))
            return spec, p
    raise ValueError(f"no qualifying prime below {prime_cap} for order {k}")


@dataclass(frozen=True)
class QuadraticRecipe:
    """Serializable build recipe: seed coefficients, exponent, optional precision."""

    a: int
    b: int
    t: int
    precision_bits: int | None = None

    @property
    def seed(self) -> QuadraticSeed:
        return QuadraticSeed(self.a, self.b)

    @property
    def policy(self) -> PrecisionPolicy | None:
        return PrecisionPolicy(self.precision_bits) if self.precision_bits else None

    def build(self, **kwargs) -> QuadraticBuildResult:
        return build_quadratic_unitary(self.seed, self.t, self.policy, **kwargs)


RATIONAL = "rational"
IRRATIONAL_CERTIFIED = "irrational_certified"
UNKNOWN = "unknown"


def classify_phase_rationality(source) -> str:
    """Rationality certificate for a phase source.

    Exact rational specs are rational; quadratic seeds with positive
    non-square discriminant are certified irrational (sqrt(D) irrational
    forces alpha^t/pi-coefficients irrational for every t >= 1); raw floating
    pairs carry no certificate either way.
    """
    if isinstance(source, (ExactUnitarySpec, RationalPhase)):
        return RATIONAL
    if isinstance(source, QuadraticRecipe):
        source = source.seed
    if isinstance(source, QuadraticSeed):
        if source.discriminant > 0 and not source.has_square_discriminant:
            return IRRATIONAL_CERTIFIED
        return RATIONAL
    if isinstance(source, EigenphasePair):
        return UNKNOWN
    raise ValueError(f"cannot classify object of type {type(source).__name__}")


def source_to_json(obj) -> dict:
    """JSON form of a build source: rational spec or quadratic recipe."""
    if isinstance(obj, ExactUnitarySpec):
        return {"kind": "rational",
                "m1": obj.phase1.m, "p1": obj.phase1.p,
                "m2": obj.phase2.m, "p2": obj.phase2.p,
                "g_m": obj.global_phase.m, "g_p": obj.global_phase.p}
    if isinstance(obj, QuadraticRecipe):
        return {"kind": "quadratic", "a": obj.a, "b": obj.b, "t": obj.t,
                "precision_bits": obj.precision_bits}
    raise ValueError(f"cannot serialize object of type {type(obj).__name__}")


def source_from_json(doc) -> ExactUnitarySpec | QuadraticRecipe:
    if isinstance(doc, str):
        doc = json.loads(doc)
    kind = doc.get("kind")
    if kind == "rational":
        return ExactUnitarySpec(RationalPhase(int(doc["m1"]), int(doc["p1"])),
                                RationalPhase(int(doc["m2"]), int(doc["p2"])),
                                RationalPhase(int(doc.get("g_m", 0)), int(doc.get("g_p", 1))))
    if kind == "quadratic":
        bits = doc.get("precision_bits")
        return QuadraticRecipe(int(doc["a"]), int(doc["b"]), int(doc["t"]),
                               int(bits) if bits else None)
    raise ValueError(f"unknown source kind {kind!r}")
