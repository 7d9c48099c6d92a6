"""Chaoticity order by order, and why idempotency caps it.

Measuring only every K-th application of U turns the question "is U chaotic"
into "is U^K chaotic", i.e. |tr(U^K)| <= sqrt(2).  Pauli operators pass at
every odd K and fail at every even K because their square is the identity.
Rational-phase unitaries let us prescribe both the idempotency order and a
chaotic order.
"""

import math

from qchaos import (
    EigenphasePair,
    RationalPhase,
    build_chaotic_order,
    build_rational_unitary,
    chaoticity_scan,
    idempotency_order,
    projective_idempotency_order,
)

PI = math.pi


def show(title, report):
    print(f"\n{title}")
    print("  K  theta/pi      H_K     |tr U^K|  verdict")
    for r in report.records:
        print(f"{r.k:3d}  {r.theta / PI:8.4f}  {r.entropy_bits:7.4f}"
              f"  {r.trace_mag:8.4f}  {r.verdict.value}")


show("Pauli X (phases 0, pi): chaotic at odd K only",
     chaoticity_scan(EigenphasePair(0.0, PI), 6))

# A unitary that is chaotic exactly when sampled every 5th step: take the
# smallest prime p2 not dividing 5 with |cos(5 pi / p2)| <= 2^(-1/2).
spec, p2 = build_chaotic_order(5)
print(f"\norder-5 construction: psi = pi/{p2}, phi = {spec.phase1}")
show("its scan (note K = 5)", chaoticity_scan(spec, 10))
print("strict idempotency order:", idempotency_order(spec).order)

# Arbitrary idempotency orders from rational phases.  The global phase matters
# for the strict order: these two are the classic order-4 and order-8 examples.
d4 = build_rational_unitary(RationalPhase(1, 4), RationalPhase(5, 4), RationalPhase(1, 4))
d8 = build_rational_unitary(RationalPhase(1, 32), RationalPhase(17, 32), RationalPhase(23, 32))
for name, spec in [("D4", d4), ("D8", d8)]:
    res = idempotency_order(spec)
    print(f"\n{name}: strict order {res.order}, "
          f"projective order {projective_idempotency_order(spec)}, "
          f"lcm of inner denominators {res.inner_denominator_lcm}")
    show(f"{name} scan", chaoticity_scan(spec, res.order))

# Idempotency of order n forces H_K = 0 at every multiple of n: U^n = I has
# trace magnitude exactly 2, the scans above show it landing on 2.0 exactly.
