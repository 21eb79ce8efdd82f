import numpy as np
import pytest
from numpy.testing import assert_allclose

from ghzpurify.ghz import (GhzDiagonalEnsemble, GhzLabel, all_labels,
                           build_binary_ensemble, build_bitflip_ensemble,
                           build_werner, canonical_label, complement,
                           ensemble_fidelity, ensemble_to_density,
                           ghz_basis_matrix, ghz_label_to_state, hadamard_all,
                           is_valid_density, random_ghz_diagonal, target_label)

S2 = 1.0 / np.sqrt(2.0)


def vec(n, terms):
    out = np.zeros(1 << n, dtype=complex)
    for bits, amp in terms.items():
        out[int(bits, 2)] = amp
    return out


class TestLabels:
    def test_rejects_noncanonical_rep(self):
        with pytest.raises(ValueError):
            GhzLabel("100", +1)

    def test_rejects_bad_sign(self):
        with pytest.raises(ValueError):
            GhzLabel("000", 0)

    def test_canonicalization_flips_leading_one(self):
        assert canonical_label("100", +1) == GhzLabel("011", +1)
        assert canonical_label("011", -1) == GhzLabel("011", -1)

    def test_label_count(self):
        for n in (2, 3, 4, 5):
            labels = all_labels(n)
            assert len(labels) == 1 << n
            assert len(set(labels)) == 1 << n

    def test_canonicalization_preserves_state_up_to_phase(self):
        # States built from j and ~j with the same sign agree up to phase.
        for n in (2, 3, 4):
            for j in range(1 << n):
                bits = format(j, f"0{n}b")
                for sign in (+1, -1):
                    label = canonical_label(bits, sign)
                    raw = vec(n, {bits: S2}) + sign * vec(n, {complement(bits): S2})
                    built = ghz_label_to_state(label, n)
                    overlap = abs(np.vdot(raw, built))
                    assert overlap == pytest.approx(1.0, abs=1e-12)


class TestStates:
    def test_target_state(self):
        got = ghz_label_to_state(GhzLabel("000", +1), 3)
        assert_allclose(got, vec(3, {"000": S2, "111": S2}), atol=1e-15)

    def test_bit_error_state(self):
        got = ghz_label_to_state(GhzLabel("011", +1), 3)
        assert_allclose(got, vec(3, {"011": S2, "100": S2}), atol=1e-15)

    def test_phase_error_state(self):
        got = ghz_label_to_state(GhzLabel("000", -1), 3)
        assert_allclose(got, vec(3, {"000": S2, "111": -S2}), atol=1e-15)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            ghz_label_to_state(GhzLabel("000", +1), 4)

    def test_basis_is_orthonormal_and_complete(self):
        for n in (2, 3, 4, 5):
            B = ghz_basis_matrix(n)
            assert_allclose(B.conj().T @ B, np.eye(1 << n), atol=1e-12)


class TestEnsembles:
    def test_binary_fidelity(self):
        ens = build_binary_ensemble(0.8, GhzLabel("011", +1), 3)
        assert ensemble_fidelity(ens) == pytest.approx(0.8, abs=1e-15)
        assert ens.weight(GhzLabel("011", +1)) == pytest.approx(0.2, abs=1e-15)

    def test_binary_pure_target(self):
        ens = build_binary_ensemble(1.0, GhzLabel("011", +1), 3)
        assert ensemble_fidelity(ens) == 1.0

    def test_binary_degenerate_warns(self):
        with pytest.warns(UserWarning):
            ens = build_binary_ensemble(0.8, target_label(3), 3)
        assert ensemble_fidelity(ens) == 1.0

    def test_bitflip_ensemble_labels(self):
        ens = build_bitflip_ensemble([0.7, 0.1, 0.1, 0.1], 3)
        assert ens.weight(GhzLabel("000", +1)) == pytest.approx(0.7)
        # Flip on qubit 1 canonicalizes to rep 011.
        assert ens.weight(GhzLabel("011", +1)) == pytest.approx(0.1)
        assert ens.weight(GhzLabel("010", +1)) == pytest.approx(0.1)
        assert ens.weight(GhzLabel("001", +1)) == pytest.approx(0.1)

    def test_bitflip_pure_error(self):
        ens = build_bitflip_ensemble([0, 1, 0, 0], 3)
        assert ensemble_fidelity(ens) == 0.0
        assert ens.weight(GhzLabel("011", +1)) == 1.0

    def test_bitflip_negative_weight(self):
        with pytest.raises(ValueError):
            build_bitflip_ensemble([1.1, -0.1, 0, 0], 3)

    def test_werner_fidelity_formula(self):
        for n in (2, 3, 4, 5):
            for x in (0.0, 0.3, 0.8, 1.0):
                ens = build_werner(x, n)
                assert ensemble_fidelity(ens) == pytest.approx(
                    x + (1 - x) / (1 << n), abs=1e-15)

    def test_werner_x0_uniform(self):
        ens = build_werner(0.0, 3)
        for label in all_labels(3):
            assert ens.weight(label) == pytest.approx(0.125, abs=1e-15)

    def test_werner_example_value(self):
        assert ensemble_fidelity(build_werner(0.8, 3)) == pytest.approx(0.825)

    def test_uniform_fidelity(self):
        ens = GhzDiagonalEnsemble(3, {lab: 0.125 for lab in all_labels(3)})
        assert ensemble_fidelity(ens) == pytest.approx(0.125)

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            GhzDiagonalEnsemble(3, {target_label(3): 0.5})

    def test_rejects_oversized(self):
        with pytest.raises(ValueError):
            GhzDiagonalEnsemble(7, {target_label(7): 1.0})


class TestDensity:
    def test_pure_target_projector(self):
        ens = GhzDiagonalEnsemble(3, {target_label(3): 1.0})
        rho = ensemble_to_density(ens)
        v = ghz_label_to_state(target_label(3), 3)
        assert_allclose(rho, np.outer(v, v.conj()), atol=1e-15)

    def test_werner_matrix_identity(self):
        x = 0.8
        rho = ensemble_to_density(build_werner(x, 3))
        v = ghz_label_to_state(target_label(3), 3)
        expected = x * np.outer(v, v.conj()) + (1 - x) * np.eye(8) / 8
        assert_allclose(rho, expected, atol=1e-12)

    def test_mixture_trace_one(self):
        rho = ensemble_to_density(build_binary_ensemble(0.8, GhzLabel("011", 1), 3))
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
        assert is_valid_density(rho)

    def test_diagonal_roundtrip(self):
        rng = np.random.default_rng(3)
        for n in (2, 3, 4):
            ens = random_ghz_diagonal(n, rng)
            rho = ensemble_to_density(ens)
            B = ghz_basis_matrix(n)
            diag = (B.conj().T @ rho @ B).diagonal().real
            for lab, w in zip(all_labels(n), diag):
                assert w == pytest.approx(ens.weight(lab), abs=1e-12)


class TestHadamard:
    def test_single_qubit(self):
        got = hadamard_all(np.array([1.0, 0.0], dtype=complex))
        assert_allclose(got, np.array([S2, S2]), atol=1e-15)

    def test_target_maps_to_even_weight_plus_state(self):
        got = hadamard_all(ghz_label_to_state(target_label(3), 3))
        expected = vec(3, {s: 0.5 for s in ("000", "011", "101", "110")})
        assert_allclose(got, expected, atol=1e-12)

    def test_involution(self):
        rng = np.random.default_rng(0)
        v = rng.normal(size=16) + 1j * rng.normal(size=16)
        assert_allclose(hadamard_all(hadamard_all(v)), v, atol=1e-12)

    def test_sign_groups_have_disjoint_weight_parity_support(self):
        for n in (2, 3, 4, 5):
            for label in all_labels(n):
                rotated = hadamard_all(ghz_label_to_state(label, n))
                want_parity = 0 if label.sign == +1 else 1
                for x in range(1 << n):
                    if bin(x).count("1") % 2 != want_parity:
                        assert abs(rotated[x]) < 1e-12
