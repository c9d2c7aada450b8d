"""Tests for probe-state construction, the four-port basis, and probabilities."""

import dataclasses

import numpy as np
import pytest

from loem import (
    antiparallel_family,
    antiparallel_qfim_closed,
    antiparallel_state,
    bell_like_basis,
    born_probabilities,
    derivatives,
    generator_unitary,
    identical_pair_family,
    loem_family,
    loem_state,
    orthogonal_probes,
    outcome_probabilities,
    qfim_pure,
    qubit_family,
    qubit_unitary,
    uhlmann_curvature,
    wcc_holds,
)


def random_generators(rng, d, m=2):
    gens = []
    for _ in range(m):
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        gens.append(0.5 * (a + a.conj().T))
    return gens


def qubit_unitary_family(x):
    return qubit_unitary(x[0], x[1])


class TestOrthogonalProbes:
    @pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
    def test_computational_basis(self, d):
        probes = orthogonal_probes(d)
        assert probes.shape == (d, d)
        gram = probes.conj() @ probes.T
        assert np.max(np.abs(gram - np.eye(d))) < 1e-12

    @pytest.mark.parametrize("d", [1, 7])
    def test_out_of_range_rejected(self, d):
        with pytest.raises(ValueError):
            orthogonal_probes(d)


class TestLoemState:
    def test_identity_point(self):
        out = loem_state(qubit_unitary_family, np.array([0.0, 1.7]), orthogonal_probes(2))
        assert np.allclose(out, [0, 1, 0, 0], atol=1e-15)

    def test_hand_multiplied_oracle(self):
        # U(pi/2, 0)|0> = (c, s), U(pi/2, 0)|1> = (-s, c) with c = s = 1/sqrt(2);
        # multiply the product out entry by entry
        u = qubit_unitary(np.pi / 2, 0.0)
        first, second = u[:, 0], u[:, 1]
        expected = np.array(
            [first[0] * second[0], first[0] * second[1], first[1] * second[0], first[1] * second[1]]
        )
        out = loem_state(qubit_unitary_family, np.array([np.pi / 2, 0.0]), orthogonal_probes(2))
        assert np.allclose(out, expected, atol=1e-15)
        assert np.allclose(out, [-0.5, 0.5, -0.5, 0.5], atol=1e-12)

    @pytest.mark.parametrize("d", [3, 4])
    def test_random_generator_family_normalized_and_compatible(self, d):
        rng = np.random.default_rng(40 + d)
        unitary = generator_unitary(random_generators(rng, d))
        family = loem_family(unitary, 2, orthogonal_probes(d))
        x = rng.uniform(0.2, 0.9, size=2)
        psi = family.evaluate(x)
        assert abs(np.sum(np.abs(psi) ** 2) - 1.0) < 1e-12
        jac = derivatives(family, x)
        # derivative overlaps of the full probe product are purely real
        assert abs(np.imag(np.vdot(jac[:, 0], jac[:, 1]))) < 1e-8

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            loem_state(qubit_unitary_family, np.array([0.1, 0.2]), orthogonal_probes(3))


class TestAntiparallelState:
    def test_zero_theta(self):
        assert np.allclose(antiparallel_state(0.0, 0.73, 1), [0, 1, 0, 0], atol=1e-15)

    def test_hand_multiplied(self):
        assert np.allclose(antiparallel_state(np.pi / 2, 0.0, 1), [-0.5, 0.5, -0.5, 0.5], atol=1e-12)

    def test_closed_form_amplitudes(self):
        # (-e^{-iNp} sin(Nt)/2, cos^2(Nt/2), -sin^2(Nt/2), e^{iNp} sin(Nt)/2)
        rng = np.random.default_rng(12)
        for _ in range(50):
            theta, phi = rng.uniform(0.0, 1.5, size=2)
            n = int(rng.integers(1, 6))
            a, b = n * theta, n * phi
            expected = np.array(
                [
                    -np.exp(-1j * b) * np.sin(a) / 2,
                    np.cos(a / 2) ** 2,
                    -np.sin(a / 2) ** 2,
                    np.exp(1j * b) * np.sin(a) / 2,
                ]
            )
            assert np.allclose(antiparallel_state(theta, phi, n), expected, atol=1e-13)

    def test_iteration_amplifies_angles(self):
        assert np.allclose(
            antiparallel_state(np.pi / 4, np.pi / 6, 2),
            antiparallel_state(np.pi / 2, np.pi / 3, 1),
            atol=1e-14,
        )

    def test_invalid_iteration_count(self):
        with pytest.raises(ValueError):
            antiparallel_state(0.1, 0.1, 0)


class TestBellLikeBasis:
    def test_fixed_port_order(self):
        basis = bell_like_basis()
        r = 1 / np.sqrt(2)
        assert np.allclose(basis[0], [0, 1, 0, 0])
        assert np.allclose(basis[1], [0, 0, 1, 0])
        assert np.allclose(basis[2], [r, 0, 0, r])
        assert np.allclose(basis[3], [r, 0, 0, -r])

    def test_completeness(self):
        basis = bell_like_basis()
        resolution = sum(np.outer(k, k.conj()) for k in basis)
        assert np.max(np.abs(resolution - np.eye(4))) < 1e-14

    def test_plus_minus_orthogonal(self):
        basis = bell_like_basis()
        assert abs(np.vdot(basis[2], basis[3])) < 1e-15


class TestBornProbabilities:
    def test_theta_zero_point_mass(self):
        probs = born_probabilities(antiparallel_state(0.0, 0.3, 1), bell_like_basis())
        assert np.allclose(probs, [1, 0, 0, 0], atol=1e-15)

    def test_uniform_point(self):
        probs = born_probabilities(antiparallel_state(np.pi / 2, np.pi / 4, 1), bell_like_basis())
        assert np.allclose(probs, [0.25, 0.25, 0.25, 0.25], atol=1e-12)

    def test_matches_closed_form_on_grid(self):
        basis = bell_like_basis()
        angles = np.linspace(0.0, 2 * np.pi, 40, endpoint=False)
        worst = 0.0
        for theta in angles:
            for phi in angles:
                pb = born_probabilities(antiparallel_state(theta, phi, 1), basis)
                pc = outcome_probabilities(theta, phi, 1)
                worst = max(worst, np.max(np.abs(pb - pc)))
        assert worst < 1e-12

    def test_matches_closed_form_random_triples(self):
        basis = bell_like_basis()
        rng = np.random.default_rng(13)
        for _ in range(1000):
            theta, phi = rng.uniform(-2 * np.pi, 2 * np.pi, size=2)
            n = int(rng.integers(1, 11))
            pb = born_probabilities(antiparallel_state(theta, phi, n), basis)
            pc = outcome_probabilities(theta, phi, n)
            assert np.max(np.abs(pb - pc)) < 1e-12

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            born_probabilities(np.array([1.0, 0.0]), bell_like_basis())


class TestOutcomeProbabilities:
    def test_theta_zero(self):
        assert np.allclose(outcome_probabilities(0.0, 0.9, 1), [1, 0, 0, 0], atol=1e-15)

    def test_reference_points(self):
        # substitution: (cos^4(pi/4), sin^4(pi/4), 0, sin^2(pi/2)/2)
        assert np.allclose(outcome_probabilities(np.pi / 2, 0.0, 1), [0.25, 0.25, 0.0, 0.5], atol=1e-12)
        assert np.allclose(
            outcome_probabilities(np.pi / 2, np.pi / 4, 1), [0.25, 0.25, 0.25, 0.25], atol=1e-12
        )

    def test_normalization_on_dense_grid(self):
        angles = np.linspace(0.0, 2 * np.pi, 101)
        worst = 0.0
        for n in (1, 4, 10):
            for theta in angles:
                for phi in angles:
                    worst = max(worst, abs(outcome_probabilities(theta, phi, n).sum() - 1.0))
        assert worst < 1e-14


class TestAntiparallelQfimClosed:
    def test_reference_values(self):
        assert np.allclose(antiparallel_qfim_closed(np.pi / 2, 1), np.diag([2.0, 2.0]), atol=1e-14)
        # substitution at (8.5 deg, N = 10): diag(200, 200 sin^2 85 deg)
        q = antiparallel_qfim_closed(np.radians(8.5), 10)
        assert np.allclose(q, np.diag([200.0, 198.48077530122083]), atol=1e-10)

    def test_degenerate_at_zero_theta(self):
        q = antiparallel_qfim_closed(0.0, 3)
        assert q[0, 0] == 18.0
        assert q[1, 1] == 0.0

    def test_matches_numerical_qfim(self):
        rng = np.random.default_rng(14)
        for _ in range(25):
            n = int(rng.integers(1, 11))
            theta = rng.uniform(0.05, np.pi / (2 * n) - 0.05)
            phi = rng.uniform(0.0, np.pi / (2 * n))
            if abs(np.sin(n * theta)) <= 0.05:
                continue
            family = dataclasses.replace(antiparallel_family(n), jacobian=None)
            x = np.array([theta, phi])
            q_num = qfim_pure(family.evaluate(x), derivatives(family, x))
            q_closed = antiparallel_qfim_closed(theta, n)
            assert np.allclose(q_num, q_closed, rtol=1e-6, atol=1e-6)


class TestWccContrast:
    def test_antiparallel_satisfies_wcc(self):
        rng = np.random.default_rng(15)
        for n in (1, 3, 7):
            family = antiparallel_family(n)
            numeric = dataclasses.replace(family, jacobian=None)
            x = rng.uniform(0.05, np.pi / (2 * n) - 0.05, size=2)
            curv = uhlmann_curvature(family.evaluate(x), derivatives(numeric, x))
            assert wcc_holds(curv, 1e-8)

    def test_identical_pair_violates_wcc(self):
        family = identical_pair_family()
        x = np.array([np.pi / 2, 0.2])
        curv = uhlmann_curvature(family.evaluate(x), derivatives(family, x))
        assert not wcc_holds(curv, 1e-8)
        assert abs(abs(curv[0, 1]) - np.sin(x[0])) < 1e-8

    def test_qfim_doubling(self):
        single = qubit_family()
        pair = antiparallel_family(1)
        rng = np.random.default_rng(16)
        for _ in range(20):
            x = rng.uniform(0.1, 1.4, size=2)
            q1 = qfim_pure(single.evaluate(x), derivatives(single, x))
            q2 = qfim_pure(pair.evaluate(x), derivatives(pair, x))
            assert np.max(np.abs(q2 - 2.0 * q1)) < 1e-8


class TestGeneratorUnitary:
    def test_unitary_for_random_generators(self):
        rng = np.random.default_rng(17)
        for d in (2, 3, 4):
            unitary = generator_unitary(random_generators(rng, d))
            x = rng.uniform(-1.0, 1.0, size=2)
            u = unitary(x)
            assert np.max(np.abs(u.conj().T @ u - np.eye(d))) < 1e-12

    def test_reduces_to_matrix_exponential_for_commuting_case(self):
        g = np.diag([1.0, -1.0]).astype(complex)
        unitary = generator_unitary([g])
        u = unitary(np.array([0.7]))
        assert np.allclose(u, np.diag(np.exp(-1j * 0.7 * np.diag(g))), atol=1e-12)

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValueError):
            generator_unitary([np.array([[0.0, 1.0], [0.0, 0.0]])])
