"""Non-idempotent unitaries from integer quadratic recurrences.

Roots alpha, beta of x^2 + a x + b (negative integer coefficients, non-square
discriminant) give certified-irrational SU(2) eigenphases via
phi = (alpha^t mod 2) pi, psi = (beta^t mod 2) pi whenever the integer
s_t = alpha^t + beta^t is even.  No power of such a unitary is the identity,
yet every one of them stops being chaotic at some finite order.
"""

import math

from qchaos import (
    PrecisionPolicy,
    PrecisionSelfCheckError,
    QuadraticSeed,
    build_quadratic_unitary,
    chaotic_order_fraction,
    classify_phase_rationality,
    first_nonchaotic_order,
    quadratic_trace_sequence,
    trace_magnitude,
    verdict_of,
)

# The golden-ratio seed: s_t are the Lucas numbers 2, 1, 3, 4, 7, 11, ...
lucas = QuadraticSeed(-1, -1)
seq = quadratic_trace_sequence(lucas, 12)
print("Lucas numbers:", seq.values)
print("even at t =", seq.even_indices(), "(only those t give SU(2) pairs)")

res = build_quadratic_unitary(lucas, 3)
print(f"\nt=3: phi = {res.pair.phi:.6f}, psi = {res.pair.psi:.6f}, "
      f"|tr| = {trace_magnitude(res.pair):.6f} -> {verdict_of(res.pair).label.value}")
print("rationality:", classify_phase_rationality(lucas))

# |beta| < 1 here, so beta^t -> 0 and the series drifts toward the identity:
for t in (3, 6, 9, 12):
    pair = build_quadratic_unitary(lucas, t).pair
    print(f"t={t:2d}: |tr| = {trace_magnitude(pair):.6f}")

# A traversing series needs beta < -1.  (|a|, |b|) = (2, 101) is the workhorse:
seed = QuadraticSeed(-2, -101)
res = build_quadratic_unitary(seed, 8)
print(f"\n(-2,-101) t=8 [{res.classification}]: s_8 = {res.s_t}, "
      f"|cos psi| = {abs(math.cos(res.pair.psi)):.4f} -> "
      f"{verdict_of(res.pair).label.value}")

# Chaotic today, non-chaotic at some finite order -- always:
k = first_nonchaotic_order(res.pair, 10 ** 4)
frac = chaotic_order_fraction(res.pair, 10 ** 5)
print(f"first non-chaotic order: K = {k}")
print(f"fraction of chaotic orders K <= 1e5: {frac:.4f} (equidistributes to 1/2)")

# alpha^8 is ~2.3e8, so the mod-2 reduction would be garbage in low precision.
# The interval self-check turns that into an error instead of silent noise:
try:
    build_quadratic_unitary(seed, 8, PrecisionPolicy(16))
except PrecisionSelfCheckError as exc:
    print(f"\n16-bit attempt correctly rejected: {exc}")
print(f"recommended precision here: {PrecisionPolicy.recommended(seed, 8).bits} bits")
