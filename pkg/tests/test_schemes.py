import numpy as np
import pytest
from dataclasses import replace

from conftest import PAULIS, random_complex, random_density, random_unitary
from tightport import (
    DENSE_CODING,
    TELEPORTATION,
    MaxEntangledBasis,
    NotDensityOperator,
    NotMaximallyEntangled,
    NotUnitaryExtraction,
    SchemeInvalid,
    basis_to_entangled,
    build_scheme,
    entangled_to_basis,
    extract_basis_from_scheme,
    hadamard_d4_family,
    latin_from_cyclic,
    matrix_units,
    omega_vector,
    shift_multiply_basis,
    swap_roles,
    tensor_product,
    teleport_state,
    trace_inner,
    verify_dense_coding,
    verify_entangled_basis,
    verify_orthonormal,
    verify_teleportation,
    weyl_basis,
)

BELL = (
    np.array([1, 0, 0, 1]) / np.sqrt(2),
    np.array([0, 1, 1, 0]) / np.sqrt(2),
    np.array([1, 0, 0, -1]) / np.sqrt(2),
    np.array([0, 1, -1, 0]) / np.sqrt(2),
)

# Regression floors for schemes built on a two-level resource with Schmidt
# coefficients (sqrt(p), sqrt(1-p)); the sweep behind them measured
# teleportation deviations of 8x these values and dense-coding of 4x.
def rigidity_floor(p):
    return (1 - 2 * np.sqrt(p * (1 - p))) / 4 * 0.5


def schmidt_pair_resource(p):
    omega = np.zeros(4, dtype=complex)
    omega[0] = np.sqrt(p)
    omega[3] = np.sqrt(1 - p)
    return omega


class TestBasisToEntangled:
    def test_degenerate_dimension(self):
        entangled = basis_to_entangled(weyl_basis(1))
        np.testing.assert_allclose(entangled.vectors[0], omega_vector(1), atol=0)

    def test_weyl_d2_gives_bell_vectors(self):
        entangled = basis_to_entangled(weyl_basis(2))
        matched = set()
        for vec in entangled.vectors:
            overlaps = [abs(np.vdot(bell, vec)) for bell in BELL]
            assert max(overlaps) == pytest.approx(1.0, abs=1e-12)
            matched.add(int(np.argmax(overlaps)))
        assert matched == {0, 1, 2, 3}

    def test_weyl_d3_satisfies_both_invariants(self):
        entangled = basis_to_entangled(weyl_basis(3))
        result = verify_entangled_basis(entangled, tol=1e-12)
        assert result.passed

    def test_rejects_non_entangled_reference(self):
        ref = np.zeros(4, dtype=complex)
        ref[0] = 1.0
        with pytest.raises(NotMaximallyEntangled):
            basis_to_entangled(weyl_basis(2), ref)


class TestEntangledToBasis:
    def test_round_trip_weyl_d3(self):
        basis = weyl_basis(3)
        back = entangled_to_basis(basis_to_entangled(basis))
        np.testing.assert_allclose(back.elements, basis.elements, atol=1e-12)

    def test_round_trip_with_non_canonical_reference(self):
        rng = np.random.default_rng(30)
        d = 3
        w = random_unitary(rng, d)
        ref = tensor_product(w, np.eye(d)) @ omega_vector(d)
        basis = weyl_basis(d)
        back = entangled_to_basis(basis_to_entangled(basis, ref), ref)
        np.testing.assert_allclose(back.elements, basis.elements, atol=1e-11)

    def test_bell_vectors_give_pauli_family(self):
        entangled = MaxEntangledBasis(2, np.asarray(BELL))
        basis = entangled_to_basis(entangled)
        for u in basis.elements:
            overlaps = [abs(trace_inner(u, p)) for p in PAULIS]
            assert max(overlaps) == pytest.approx(1.0, abs=1e-12)

    def test_product_vector_rejected(self):
        vectors = np.eye(4, dtype=complex)  # e0 x e0 etc., all product vectors
        with pytest.raises(NotUnitaryExtraction):
            entangled_to_basis(MaxEntangledBasis(2, vectors))


class TestBuildScheme:
    def test_weyl_d2_components(self):
        scheme = build_scheme(weyl_basis(2))
        np.testing.assert_allclose(scheme.omega, omega_vector(2), atol=0)
        assert scheme.mode == TELEPORTATION
        # effects resolve the identity on the doubled space
        vecs = scheme.effects.vectors
        total = vecs.T @ vecs.conj()
        np.testing.assert_allclose(total, np.eye(4), atol=1e-12)

    def test_effects_complete_at_d3(self):
        scheme = build_scheme(weyl_basis(3))
        vecs = scheme.effects.vectors
        total = vecs.T @ vecs.conj()
        np.testing.assert_allclose(total, np.eye(9), atol=1e-11)

    def test_mode_flag_shares_components(self):
        tele = build_scheme(weyl_basis(2), TELEPORTATION)
        dense = build_scheme(weyl_basis(2), DENSE_CODING)
        np.testing.assert_allclose(tele.omega, dense.omega, atol=0)
        np.testing.assert_allclose(
            tele.channel_unitaries, dense.channel_unitaries, atol=0
        )
        assert tele.mode != dense.mode

    def test_rejects_unknown_mode(self):
        with pytest.raises(ValueError):
            build_scheme(weyl_basis(2), "broadcast")


def kron_teleportation_oracle(scheme, rho, a):
    """Literal sum of tr((rho x omega)(F_x x U* A U)) over all outcomes."""
    d = scheme.d
    resource = scheme.resource_density()
    big_state = np.kron(rho, resource)
    total = 0.0 + 0.0j
    for x in range(d * d):
        phi = scheme.effects.vectors[x]
        u = scheme.channel_unitaries[x]
        effect = np.outer(phi, phi.conj())
        moved = u.conj().T @ a @ u
        total += np.trace(big_state @ np.kron(effect, moved))
    return total


class TestVerifyTeleportation:
    def test_weyl_d2_passes(self):
        verdict = verify_teleportation(build_scheme(weyl_basis(2)))
        assert verdict.passed and verdict.max_deviation < 1e-12

    def test_agrees_with_kron_oracle(self):
        rng = np.random.default_rng(31)
        scheme = build_scheme(weyl_basis(2))
        for _ in range(5):
            rho = random_complex(rng, 2, 2)
            a = random_complex(rng, 2, 2)
            lhs = kron_teleportation_oracle(scheme, rho, a)
            assert abs(lhs - np.trace(rho @ a)) < 1e-12

    def test_deviation_matches_kron_oracle_on_broken_scheme(self):
        # the contracted evaluation must reproduce the literal sum even when
        # it is far from the target
        scheme = build_scheme(weyl_basis(2))
        broken = replace(scheme, omega=schmidt_pair_resource(0.8))
        units = matrix_units(2)
        worst = 0.0
        for a_idx in range(4):
            for b_idx in range(4):
                lhs = kron_teleportation_oracle(broken, units[a_idx], units[b_idx])
                target = np.trace(units[a_idx] @ units[b_idx])
                worst = max(worst, abs(lhs - target))
        verdict = verify_teleportation(broken)
        assert verdict.max_deviation == pytest.approx(worst, abs=1e-13)

    def test_product_resource_fails_badly(self):
        scheme = build_scheme(weyl_basis(2))
        product = np.zeros(4, dtype=complex)
        product[0] = 1.0
        verdict = verify_teleportation(replace(scheme, omega=product))
        assert not verdict.passed
        assert verdict.max_deviation >= 0.1

    def test_phase_on_channel_is_harmless(self):
        scheme = build_scheme(weyl_basis(2))
        unitaries = scheme.channel_unitaries.copy()
        unitaries[2] *= np.exp(0.4j)
        verdict = verify_teleportation(replace(scheme, channel_unitaries=unitaries))
        assert verdict.passed

    def test_mode_gate(self):
        scheme = build_scheme(weyl_basis(2), DENSE_CODING)
        with pytest.raises(SchemeInvalid):
            verify_teleportation(scheme)
        assert verify_teleportation(scheme, require_mode=False).passed


class TestVerifyDenseCoding:
    def test_weyl_d3_outcome_matrix_is_identity(self):
        verdict = verify_dense_coding(build_scheme(weyl_basis(3), DENSE_CODING))
        assert verdict.passed
        np.testing.assert_allclose(verdict.table, np.eye(9), atol=1e-11)

    def test_partially_entangled_resource_leaks(self):
        scheme = build_scheme(weyl_basis(2), DENSE_CODING)
        verdict = verify_dense_coding(replace(scheme, omega=schmidt_pair_resource(0.9)))
        assert not verdict.passed
        off_diagonal = verdict.table - np.diag(np.diag(verdict.table))
        assert np.abs(off_diagonal).max() > 1e-2

    def test_rows_are_distributions_even_for_invalid_resource(self):
        scheme = build_scheme(weyl_basis(2), DENSE_CODING)
        verdict = verify_dense_coding(replace(scheme, omega=schmidt_pair_resource(0.75)))
        table = verdict.table
        assert table.min() >= -1e-11
        np.testing.assert_allclose(table.sum(axis=1), np.ones(4), atol=1e-11)


class TestSwapRoles:
    def test_teleportation_scheme_works_as_dense_coding(self):
        scheme = build_scheme(weyl_basis(2))
        assert verify_teleportation(scheme).passed
        assert verify_dense_coding(swap_roles(scheme)).passed

    def test_double_swap_is_identity(self):
        scheme = build_scheme(weyl_basis(2))
        back = swap_roles(swap_roles(scheme))
        assert back.mode == scheme.mode
        np.testing.assert_allclose(back.omega, scheme.omega, atol=0)

    def test_failing_scheme_fails_both_ways(self):
        scheme = build_scheme(weyl_basis(2))
        broken = replace(scheme, omega=schmidt_pair_resource(0.75))
        assert not verify_teleportation(broken).passed
        assert not verify_dense_coding(swap_roles(broken)).passed


class TestRigidity:
    @pytest.mark.parametrize("p", [0.6, 0.75, 0.9])
    def test_partially_entangled_resources_fail_with_margin(self, p):
        scheme = build_scheme(weyl_basis(2))
        broken = replace(scheme, omega=schmidt_pair_resource(p))
        floor = rigidity_floor(p)
        tele = verify_teleportation(broken)
        dense = verify_dense_coding(broken)
        assert not tele.passed and tele.max_deviation >= floor
        assert not dense.passed and dense.max_deviation >= floor

    def test_mixed_resource_fails_both_verifiers(self):
        scheme = build_scheme(weyl_basis(2))
        pure = np.outer(scheme.omega, scheme.omega.conj())
        mixed = 0.5 * pure + 0.5 * np.diag([1.0, 0, 0, 0]).astype(complex)
        broken = replace(scheme, omega=mixed)
        assert not verify_teleportation(broken).passed
        assert not verify_dense_coding(broken).passed


class TestTeleportState:
    def test_maximally_mixed_input(self):
        scheme = build_scheme(weyl_basis(3))
        rho = np.eye(3, dtype=complex) / 3
        output, probs = teleport_state(scheme, rho)
        np.testing.assert_allclose(output, rho, atol=1e-12)
        np.testing.assert_allclose(probs, np.full(9, 1 / 9), atol=1e-12)

    def test_basis_state_through_bell_scheme(self):
        scheme = build_scheme(weyl_basis(2))
        rho = np.diag([1.0, 0.0]).astype(complex)
        output, probs = teleport_state(scheme, rho)
        np.testing.assert_allclose(output, rho, atol=1e-12)
        np.testing.assert_allclose(probs, np.full(4, 0.25), atol=1e-12)

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_random_states_round_trip(self, d):
        rng = np.random.default_rng(32)
        scheme = build_scheme(weyl_basis(d))
        for _ in range(10):
            rho = random_density(rng, d)
            output, probs = teleport_state(scheme, rho)
            assert np.abs(output - rho).max() < 1e-10
            assert np.abs(probs - 1 / d**2).max() < 1e-10

    def test_rejects_non_density_inputs(self):
        scheme = build_scheme(weyl_basis(2))
        with pytest.raises(NotDensityOperator):
            teleport_state(scheme, np.array([[1.0, 0.5], [0.0, 0.0]]))  # not Hermitian
        with pytest.raises(NotDensityOperator):
            teleport_state(scheme, np.eye(2, dtype=complex))  # trace 2
        with pytest.raises(NotDensityOperator):
            teleport_state(scheme, np.diag([1.5, -0.5]).astype(complex))  # negative

    def test_zero_probability_outcome_is_skipped(self):
        scheme = build_scheme(weyl_basis(2))
        vectors = scheme.effects.vectors.copy()
        vectors[0] = 0.0
        crippled = replace(scheme, effects=MaxEntangledBasis(2, vectors))
        rho = np.eye(2, dtype=complex) / 2
        output, probs = teleport_state(crippled, rho)
        assert probs[0] == 0.0
        assert np.isfinite(output).all()
        # the dropped outcome's quarter of the weight is simply missing
        assert np.trace(output).real == pytest.approx(0.75)


class TestExtractBasis:
    def test_round_trip_weyl_d4(self):
        basis = weyl_basis(4)
        scheme = build_scheme(basis)
        extracted = extract_basis_from_scheme(scheme)
        report = verify_orthonormal(extracted)
        assert report.passed and report.max_deviation < 1e-11
        for x in range(16):
            assert abs(
                abs(trace_inner(basis.elements[x], extracted.elements[x])) - 1.0
            ) < 1e-11

    def test_channels_agree_on_matrix_units(self):
        basis = weyl_basis(3)
        extracted = extract_basis_from_scheme(build_scheme(basis))
        for unit in matrix_units(3):
            for x in range(9):
                original = basis.elements[x].conj().T @ unit @ basis.elements[x]
                recovered = extracted.elements[x].conj().T @ unit @ extracted.elements[x]
                np.testing.assert_allclose(original, recovered, atol=1e-11)

    def test_perturbed_scheme_rejected(self):
        scheme = build_scheme(weyl_basis(2))
        broken = replace(scheme, omega=schmidt_pair_resource(0.75))
        with pytest.raises(SchemeInvalid):
            extract_basis_from_scheme(broken)


class TestConversionRoundTrips:
    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_basis_entangled_basis(self, d):
        basis = weyl_basis(d)
        back = entangled_to_basis(basis_to_entangled(basis))
        for x in range(d * d):
            assert abs(
                abs(trace_inner(basis.elements[x], back.elements[x])) - 1.0
            ) < 1e-11

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_basis_scheme_basis(self, d):
        basis = weyl_basis(d)
        extracted = extract_basis_from_scheme(build_scheme(basis))
        gram = verify_orthonormal(extracted)
        assert gram.passed
        for x in range(d * d):
            assert abs(
                abs(trace_inner(basis.elements[x], extracted.elements[x])) - 1.0
            ) < 1e-11

    def test_shift_multiply_with_d4_family(self):
        basis = shift_multiply_basis(
            latin_from_cyclic(4), [hadamard_d4_family(np.exp(1.1j))] * 4
        )
        scheme = build_scheme(basis)
        assert verify_teleportation(scheme).passed
        assert verify_dense_coding(swap_roles(scheme)).passed
        extracted = extract_basis_from_scheme(scheme)
        assert verify_orthonormal(extracted).passed


class TestVerifyEntangledBasis:
    def test_valid_bases_pass(self):
        for d in (2, 3):
            entangled = basis_to_entangled(weyl_basis(d))
            assert verify_entangled_basis(entangled).passed

    def test_rotated_vector_fails(self):
        entangled = basis_to_entangled(weyl_basis(2))
        vectors = entangled.vectors.copy()
        vectors[0] = np.cos(0.1) * vectors[0] + np.sin(0.1) * vectors[1]
        result = verify_entangled_basis(MaxEntangledBasis(2, vectors))
        assert not result.passed
        assert result.deviation > 1e-3

    def test_product_vector_fails_entanglement_side(self):
        entangled = basis_to_entangled(weyl_basis(2))
        vectors = entangled.vectors.copy()
        vectors[0] = np.array([1, 0, 0, 0], dtype=complex)
        result = verify_entangled_basis(MaxEntangledBasis(2, vectors))
        assert not result.passed
