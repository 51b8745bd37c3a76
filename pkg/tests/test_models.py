import numpy as np
import pytest
from math import comb

from qumode_probe.models import (
    dicke_family,
    dicke_interaction,
    linear_family,
    preset_by_name,
    rabi_interaction,
    regime_presets,
)
from qumode_probe.operators import eigendecompose, sigma_x
from qumode_probe.probe import ProbeConfig, Squeezed
from qumode_probe.reconstruct import resolution_params


class TestRabiInteraction:
    def test_single_site_is_sigma_x(self):
        op = rabi_interaction(1)
        assert np.allclose(op.entries, sigma_x().entries)
        assert np.allclose(eigendecompose(op).eigenvalues, [-1.0, 1.0])

    def test_two_sites(self):
        vals = eigendecompose(rabi_interaction(2)).eigenvalues
        assert np.allclose(vals, [-2.0, 0.0, 0.0, 2.0], atol=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_binomial_degeneracies(self, n):
        vals = eigendecompose(rabi_interaction(n)).eigenvalues
        # brute-force oracle: numpy diagonalization of the Kronecker sum
        sx = sigma_x().entries
        explicit = np.zeros((2 ** n, 2 ** n), dtype=complex)
        for i in range(n):
            explicit += np.kron(np.kron(np.eye(2 ** i), sx), np.eye(2 ** (n - i - 1)))
        assert np.allclose(vals, np.linalg.eigvalsh(explicit), atol=1e-10)
        for k in range(n + 1):
            level = -n + 2 * k
            count = np.sum(np.abs(vals - level) < 1e-9)
            assert count == comb(n, k)

    def test_hadamard_rotation_probes_sigma_z(self):
        hadamard = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2)
        rotated = hadamard @ rabi_interaction(1).entries @ hadamard
        assert np.allclose(rotated, np.diag([1.0, -1.0]), atol=1e-12)


class TestDickeInteraction:
    def test_single_atom(self):
        assert np.allclose(dicke_interaction(1).entries, [[0.0, 0.5], [0.5, 0.0]])

    def test_two_atoms_spin_one(self):
        vals = eigendecompose(dicke_interaction(2)).eigenvalues
        assert np.allclose(vals, [-1.0, 0.0, 1.0], atol=1e-12)

    def test_hundred_atoms_collective_ladder(self):
        op = dicke_interaction(100)
        assert op.dim == 101
        vals = eigendecompose(op).eigenvalues
        assert np.allclose(vals, np.arange(-50.0, 51.0), atol=1e-8)

    def test_rejects_zero_atoms(self):
        with pytest.raises(ValueError):
            dicke_interaction(0)


class TestRegimePresets:
    def test_circuit_qed(self):
        assert preset_by_name("circuit_qed").g_tau == 200.0

    def test_cavity_qed(self):
        assert preset_by_name("cavity_qed").g_tau == 40.0

    def test_dicke_bounds(self):
        assert preset_by_name("dicke_cold_atoms_lower").g_tau == 1e-3
        assert preset_by_name("dicke_cold_atoms_upper").g_tau == 1e-2

    def test_unknown_rejected(self):
        with pytest.raises(KeyError):
            preset_by_name("tabletop")

    def test_all_positive(self):
        assert all(p.g_tau > 0 for p in regime_presets())

    def test_dicke_unsqueezed_resolution(self):
        g_tau = preset_by_name("dicke_cold_atoms_upper").g_tau
        probe = ProbeConfig(0.0, 1.0, g_tau, Squeezed(1.0))
        sigma_E = resolution_params(probe).sigma_E
        assert sigma_E == pytest.approx(1.0 / (np.sqrt(2) * 1e-2))
        assert sigma_E < 500.0


class TestParamFamilies:
    def test_dicke_family_scales_coupling(self):
        family = dicke_family(4)
        assert np.allclose(family.build(2.5).entries, 2.5 * dicke_interaction(4).entries)
        assert family.lambda_c == 1.0

    def test_family_members_hermitian(self):
        family = dicke_family(3)
        for lam in (-1.0, 0.5, 3.0):
            op = family.build(lam)
            assert np.allclose(op.entries, op.entries.conj().T)

    def test_linear_family(self):
        base = sigma_x()
        coupling = dicke_interaction(1)
        family = linear_family("mix", base, coupling)
        assert np.allclose(family.build(2.0).entries,
                           base.entries + 2.0 * coupling.entries)
