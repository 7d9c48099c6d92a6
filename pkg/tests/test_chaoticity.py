"""Verdicts, order scans, exact idempotency, Kronecker-style order search."""

import csv
import io
import math
from fractions import Fraction

import numpy as np
import pytest

from qchaos import (
    BOUNDARY_TOL,
    EigenphasePair,
    ExactUnitarySpec,
    IdempotencyCapError,
    RationalPhase,
    SQRT2,
    TWO_PI,
    VerdictLabel,
    build_quadratic_unitary,
    build_rational_unitary,
    chaotic_order_fraction,
    chaoticity_scan,
    exact_theta_fraction,
    first_nonchaotic_order,
    idempotency_order,
    power_eigenphases,
    projective_idempotency_order,
    QuadraticSeed,
    theta_at_order,
    trace_magnitude,
    verdict_at_order,
    verdict_of,
)

PI = math.pi

PAULI_X_PHASES = EigenphasePair(0.0, PI)
LUCAS_T3 = build_quadratic_unitary(QuadraticSeed(-1, -1), 3).pair
D4 = build_rational_unitary(RationalPhase(1, 4), RationalPhase(5, 4), RationalPhase(1, 4))
D8 = build_rational_unitary(RationalPhase(1, 32), RationalPhase(17, 32), RationalPhase(23, 32))


class TestVerdictOf:
    def test_pauli_x_chaotic(self):
        v = verdict_of(PAULI_X_PHASES)
        assert v.label is VerdictLabel.CHAOTIC
        assert v.trace_mag == pytest.approx(0.0, abs=1e-15)

    def test_identity_non_chaotic(self):
        v = verdict_of(EigenphasePair(0.0, 0.0))
        assert v.label is VerdictLabel.NON_CHAOTIC
        assert v.trace_mag == 2.0

    def test_lucas_t3_non_chaotic(self):
        v = verdict_of(LUCAS_T3)
        assert v.label is VerdictLabel.NON_CHAOTIC
        assert v.trace_mag == pytest.approx(1.4747, abs=5e-4)

    def test_boundary_band(self):
        # a trace magnitude within BOUNDARY_TOL of sqrt(2) must not be classified
        theta = 2 * math.acos(SQRT2 / 2)  # exactly at the threshold
        v = verdict_of(EigenphasePair(0.0, theta))
        assert v.label is VerdictLabel.BOUNDARY
        assert v.margin <= BOUNDARY_TOL

    def test_unimodular_equivalent_form(self):
        # for unimodular pairs the verdict reduces to |cos psi| <= 2^(-1/2)
        rng = np.random.default_rng(4)
        for psi in rng.uniform(0, TWO_PI, 300):
            from qchaos import make_su2_from_psi

            v = verdict_of(make_su2_from_psi(psi))
            chaotic_by_cos = abs(math.cos(psi)) <= 2 ** -0.5
            if v.label is VerdictLabel.CHAOTIC:
                assert chaotic_by_cos
            elif v.label is VerdictLabel.NON_CHAOTIC:
                assert not chaotic_by_cos


class TestVerdictAtOrder:
    def test_pauli_x_even_orders_idle(self):
        v = verdict_at_order(PAULI_X_PHASES, 2)
        assert v.label is VerdictLabel.NON_CHAOTIC
        assert v.trace_mag == pytest.approx(2.0, abs=1e-12)

    def test_pauli_x_odd_orders_chaotic(self):
        assert verdict_at_order(PAULI_X_PHASES, 3).label is VerdictLabel.CHAOTIC

    def test_order5_construction(self):
        pair = EigenphasePair(3 * PI / 2, PI / 2)
        v = verdict_at_order(pair, 5)
        assert v.label is VerdictLabel.CHAOTIC
        from qchaos import theta_of

        assert theta_of(power_eigenphases(pair, 5)) == pytest.approx(PI, abs=1e-12)

    def test_rejects_zero_order(self):
        with pytest.raises(ValueError):
            verdict_at_order(PAULI_X_PHASES, 0)
        with pytest.raises(ValueError):
            verdict_at_order(D4, 0)

    def test_swap_and_global_phase_invariance(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            pair = EigenphasePair(rng.uniform(0, TWO_PI), rng.uniform(0, TWO_PI))
            k = int(rng.integers(1, 20))
            v = verdict_at_order(pair, k)
            assert verdict_at_order(pair.swapped(), k).label is v.label
            # a global phase shifts both eigenphases equally and moves |tr|
            # only through the unimodular representative, which is unchanged
            shift = rng.uniform(0, TWO_PI)
            shifted = EigenphasePair(pair.phi + shift, pair.psi + shift)
            tm_shifted = trace_magnitude(power_eigenphases(shifted, k))
            assert tm_shifted == pytest.approx(v.trace_mag, abs=1e-9)


class TestChaoticityScan:
    def test_pauli_x_scan(self):
        report = chaoticity_scan(PAULI_X_PHASES, 4)
        labels = [r.verdict for r in report.records]
        assert labels == [VerdictLabel.CHAOTIC, VerdictLabel.NON_CHAOTIC,
                          VerdictLabel.CHAOTIC, VerdictLabel.NON_CHAOTIC]
        assert report.record(2).entropy_bits == 0.0
        assert report.record(4).entropy_bits == 0.0
        assert report.record(1).entropy_bits == 1.0

    def test_d8_scan_exact(self):
        report = chaoticity_scan(D8, 8)
        assert report.record(8).theta == 0.0
        assert report.record(8).entropy_bits == 0.0
        assert report.record(8).trace_mag == 2.0
        assert report.record(1).theta == pytest.approx(PI / 2, abs=0)
        assert report.record(1).entropy_bits == 1.0  # boundary branch of the closed form

    def test_identity_scan(self):
        report = chaoticity_scan(EigenphasePair(0.0, 0.0), 6)
        assert all(r.verdict is VerdictLabel.NON_CHAOTIC for r in report.records)
        assert all(r.entropy_bits == 0.0 for r in report.records)

    def test_rejects_zero_kmax(self):
        with pytest.raises(ValueError):
            chaoticity_scan(PAULI_X_PHASES, 0)

    def test_entropy_zero_iff_theta_zero(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            pair = EigenphasePair(rng.uniform(0, TWO_PI), rng.uniform(0, TWO_PI))
            for rec in chaoticity_scan(pair, 16).records:
                assert (rec.entropy_bits == 0.0) == (rec.theta == 0.0)
                if rec.verdict is VerdictLabel.CHAOTIC and rec.theta >= PI / 2:
                    assert abs(rec.entropy_bits - 1.0) <= 1e-12

    def test_csv_round_trip(self):
        report = chaoticity_scan(LUCAS_T3, 10)
        rows = list(csv.DictReader(io.StringIO(report.to_csv())))
        assert len(rows) == 10
        for rec, row in zip(report.records, rows):
            assert int(row["K"]) == rec.k
            assert abs(float(row["theta"]) - rec.theta) <= 1e-12
            assert abs(float(row["H"]) - rec.entropy_bits) <= 1e-12
            assert abs(float(row["trace_mag"]) - rec.trace_mag) <= 1e-12
            assert row["verdict"] == rec.verdict.value

    def test_json_rows_shape(self):
        rows = chaoticity_scan(D4, 4).to_json_rows()
        assert rows[0].keys() == {"K", "theta", "H", "trace_mag", "verdict"}


class TestExactThetaFraction:
    def test_d4_theta_is_pi(self):
        assert exact_theta_fraction(D4, 1) == Fraction(1)
        assert theta_at_order(D4, 1) == PI

    def test_d8_theta_is_half_pi(self):
        assert exact_theta_fraction(D8, 1) == Fraction(1, 2)

    def test_matches_float_path(self):
        rng = np.random.default_rng(44)
        for _ in range(50):
            spec = ExactUnitarySpec(RationalPhase(int(rng.integers(0, 64)), 32),
                                    RationalPhase(int(rng.integers(0, 64)), 32))
            k = int(rng.integers(1, 40))
            exact = theta_at_order(spec, k)
            floaty = theta_at_order(spec.pair(), k)
            assert exact == pytest.approx(floaty, abs=1e-9)


class TestIdempotency:
    def test_d4_strict_order(self):
        res = idempotency_order(D4)
        assert res.order == 4
        assert res.is_idempotent

    def test_d8_strict_order(self):
        res = idempotency_order(D8)
        assert res.order == 8
        assert res.inner_denominator_lcm == 32  # the denominators alone overstate it

    def test_pauli_x_as_spec(self):
        spec = ExactUnitarySpec(RationalPhase(0, 1), RationalPhase(1, 1))
        assert idempotency_order(spec).order == 2

    def test_minimality_by_brute_force(self):
        rng = np.random.default_rng(19)
        for _ in range(30):
            spec = ExactUnitarySpec(
                RationalPhase(int(rng.integers(0, 24)), int(rng.integers(1, 13))),
                RationalPhase(int(rng.integers(0, 24)), int(rng.integers(1, 13))),
                RationalPhase(int(rng.integers(0, 24)), int(rng.integers(1, 13))))
            n = idempotency_order(spec, n_cap=10 ** 9).order
            c1, c2 = spec.combined_fractions()
            # U^m = I iff both total phases times m are even integers
            for m in range(1, min(n, 400)):
                assert not ((m * c1) % 2 == 0 and (m * c2) % 2 == 0)
            assert (n * c1) % 2 == 0 and (n * c2) % 2 == 0

    def test_cap_is_reported_not_truncated(self):
        spec = ExactUnitarySpec(RationalPhase(1, 9973), RationalPhase(1, 9967))
        with pytest.raises(IdempotencyCapError) as exc_info:
            idempotency_order(spec, n_cap=1000)
        assert exc_info.value.order > 1000

    def test_projective_variant_ignores_global(self):
        assert projective_idempotency_order(D4) == 2  # D4^2 = -I
        assert projective_idempotency_order(D8) == 4

    def test_large_prime_orders(self):
        # with m_i = 1 and distinct primes, the inner denominators say lcm(p1, p2)
        spec = ExactUnitarySpec(RationalPhase(1, 101), RationalPhase(1, 103))
        res = idempotency_order(spec)
        assert res.inner_denominator_lcm == 101 * 103
        assert res.order == 2 * 101 * 103  # strict order with zero global phase


class TestIdempotencyExcludesChaoticity:
    def test_verdict_at_multiples_of_order(self):
        rng = np.random.default_rng(61)
        specs = [D4, D8]
        for _ in range(20):
            specs.append(ExactUnitarySpec(
                RationalPhase(int(rng.integers(0, 40)), int(rng.integers(1, 21))),
                RationalPhase(int(rng.integers(0, 40)), int(rng.integers(1, 21))),
                RationalPhase(int(rng.integers(0, 40)), int(rng.integers(1, 21)))))
        for spec in specs:
            n = idempotency_order(spec, n_cap=10 ** 9).order
            for k in (n, 2 * n):
                v = verdict_at_order(spec, k)
                assert v.label is VerdictLabel.NON_CHAOTIC
                assert v.trace_mag == 2.0  # exact, via the rational reduction
                assert exact_theta_fraction(spec, k) == 0


class TestFirstNonchaoticOrder:
    def test_lucas_already_nonchaotic(self):
        assert first_nonchaotic_order(LUCAS_T3, 100) == 1

    def test_order5_pair_fails_at_two(self):
        # U^2 has phases (pi, pi): trace magnitude 2
        assert first_nonchaotic_order(EigenphasePair(3 * PI / 2, PI / 2), 100) == 2

    def test_chaotic_quadratic_pair_still_fails_somewhere(self):
        pair = build_quadratic_unitary(QuadraticSeed(-2, -101), 8).pair
        assert verdict_of(pair).label is VerdictLabel.CHAOTIC
        k = first_nonchaotic_order(pair, 10 ** 4)
        assert k is not None
        assert verdict_at_order(pair, k).label is VerdictLabel.NON_CHAOTIC
        for j in range(1, k):
            assert verdict_at_order(pair, j).label is not VerdictLabel.NON_CHAOTIC

    def test_none_when_not_found(self):
        # Pauli X only leaves the chaotic region at even orders; bound 1 sees none
        assert first_nonchaotic_order(PAULI_X_PHASES, 1) is None

    def test_rejects_zero_bound(self):
        with pytest.raises(ValueError):
            first_nonchaotic_order(LUCAS_T3, 0)


class TestChaoticFractionEquidistribution:
    def test_irrational_pairs_give_half(self):
        for seed, t in [((-1, -1), 3), ((-2, -101), 8), ((-3, -1), 3)]:
            pair = build_quadratic_unitary(QuadraticSeed(*seed), t).pair
            frac = chaotic_order_fraction(pair, 10 ** 5)
            assert abs(frac - 0.5) <= 0.01

    def test_rational_pair_fraction_is_periodic_average(self):
        # psi = pi/2 spec: orders cycle with period 4 -> exactly half chaotic
        pair = EigenphasePair(3 * PI / 2, PI / 2)
        assert chaotic_order_fraction(pair, 10 ** 4) == pytest.approx(0.5, abs=1e-12)
