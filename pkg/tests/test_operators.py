import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qumode_probe.operators import (
    HermitianOperator,
    Spectrum,
    SystemState,
    commutator_norm,
    eigendecompose,
    evenly_spaced_spectrum,
    sigma_x,
    sigma_z,
    site_sum,
    spectrum_of,
    spin_x,
    thermal_state,
)


def random_hermitian(dim, seed):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return HermitianOperator(0.5 * (m + m.conj().T))


class TestSpinX:
    def test_spin_half_matrix(self):
        assert np.allclose(spin_x(1).entries, [[0.0, 0.5], [0.5, 0.0]])

    def test_pauli_normalization(self):
        vals = eigendecompose(spin_x(1, pauli=True)).eigenvalues
        assert np.allclose(vals, [-1.0, 1.0])

    def test_spin_one_spectrum(self):
        vals = eigendecompose(spin_x(2)).eigenvalues
        assert np.allclose(vals, [-1.0, 0.0, 1.0], atol=1e-12)

    def test_trivial_dimension(self):
        op = spin_x(0)
        assert op.dim == 1
        assert np.allclose(op.entries, 0.0)

    def test_pauli_flag_requires_two_level(self):
        with pytest.raises(ValueError):
            spin_x(2, pauli=True)


class TestSiteSum:
    def test_single_site(self):
        assert np.allclose(site_sum(sigma_x(), 1).entries, sigma_x().entries)

    def test_two_sites_spectrum(self):
        total = site_sum(sigma_x(), 2)
        # brute-force oracle on the explicit 4x4 Kronecker sum
        sx = sigma_x().entries
        explicit = np.kron(sx, np.eye(2)) + np.kron(np.eye(2), sx)
        assert np.allclose(total.entries, explicit)
        assert np.allclose(np.linalg.eigvalsh(explicit), [-2.0, 0.0, 0.0, 2.0], atol=1e-12)
        assert np.allclose(eigendecompose(total).eigenvalues, [-2.0, 0.0, 0.0, 2.0], atol=1e-12)

    def test_three_sites_max_eigenvalue(self):
        vals = eigendecompose(site_sum(sigma_x(), 3)).eigenvalues
        assert np.isclose(vals[-1], 3.0, atol=1e-12)

    def test_dimension_cap(self):
        with pytest.raises(ValueError):
            site_sum(sigma_x(), 11)  # 2**11 = 2048 > 1024


class TestThermalState:
    def test_infinite_temperature(self):
        st_ = thermal_state(random_hermitian(4, 0), beta=0.0)
        assert np.allclose(st_.rho, np.eye(4) / 4, atol=1e-12)

    def test_qubit_boltzmann(self):
        st_ = thermal_state(HermitianOperator(np.diag([0.0, 1.0])), beta=np.log(2))
        assert np.allclose(np.diag(st_.rho).real, [2 / 3, 1 / 3], atol=1e-12)

    def test_zero_temperature_limit(self):
        h = HermitianOperator(np.diag([0.0, 1.0, 2.0]))
        st_ = thermal_state(h, beta=50.0)
        assert np.allclose(st_.rho, np.diag([1.0, 0.0, 0.0]), atol=1e-10)

    def test_shift_invariance(self):
        h = random_hermitian(5, 3)
        shifted = HermitianOperator(h.entries + 7.3 * np.eye(5))
        a = thermal_state(h, 1.7).rho
        b = thermal_state(shifted, 1.7).rho
        assert np.allclose(a, b, atol=1e-12)

    def test_large_beta_no_underflow(self):
        h = HermitianOperator(np.diag([1000.0, 1001.0]))
        st_ = thermal_state(h, beta=500.0)
        assert np.isfinite(st_.rho).all()
        assert np.isclose(np.trace(st_.rho).real, 1.0)

    def test_rejects_bad_beta(self):
        h = random_hermitian(2, 0)
        with pytest.raises(ValueError):
            thermal_state(h, -1.0)
        with pytest.raises(ValueError):
            thermal_state(h, np.inf)

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 1000), beta=st.floats(0.01, 20.0))
    def test_boltzmann_ordering(self, seed, beta):
        h = random_hermitian(5, seed)
        spec = spectrum_of(thermal_state(h, beta), h)
        pops = spec.populations / spec.degeneracies
        assert np.all(np.diff(pops) <= 1e-12)


class TestSpectrumOf:
    def test_pure_eigenstate(self):
        h = random_hermitian(4, 7)
        v = h.eig().eigenvectors[:, 0]
        spec = spectrum_of(SystemState(np.outer(v, v.conj())), h)
        assert np.isclose(spec.lines[0].P, 1.0, atol=1e-10)
        assert np.isclose(spec.populations.sum(), 1.0, atol=1e-9)

    def test_maximally_mixed_sigma_x(self):
        spec = spectrum_of(SystemState(np.eye(2) / 2), sigma_x())
        assert [(round(l.E), l.g) for l in spec.lines] == [(-1, 1), (1, 1)]
        assert np.allclose(spec.populations, [0.5, 0.5])

    def test_degenerate_thermal_line(self):
        h = HermitianOperator(np.diag([0.0, 1.0, 1.0]))
        spec = spectrum_of(thermal_state(h, 1.0), h)
        z = 1 + 2 * np.exp(-1.0)
        assert len(spec.lines) == 2
        assert spec.lines[0].g == 1 and spec.lines[1].g == 2
        assert np.allclose(spec.populations, [1 / z, 2 * np.exp(-1.0) / z], atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            spectrum_of(SystemState(np.eye(2) / 2), random_hermitian(3, 0))

    def test_merge_tolerance_groups_nearby(self):
        h = HermitianOperator(np.diag([0.0, 1e-10, 1.0]))
        spec = spectrum_of(SystemState(np.eye(3) / 3), h, merge_tol=1e-8)
        assert [l.g for l in spec.lines] == [2, 1]


class TestCommutatorNorm:
    def test_self_commutes(self):
        h = random_hermitian(4, 1)
        assert commutator_norm(h, h) == 0.0

    def test_proportional_commute(self):
        assert commutator_norm(sigma_x(), HermitianOperator(3 * sigma_x().entries)) == 0.0

    def test_pauli_pair(self):
        assert np.isclose(commutator_norm(sigma_x(), sigma_z()), 2.0, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            commutator_norm(sigma_x(), random_hermitian(3, 0))


class TestValidation:
    def test_operator_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            HermitianOperator([[0.0, 1.0], [0.0, 0.0]])

    def test_state_rejects_bad_trace(self):
        with pytest.raises(ValueError):
            SystemState(np.eye(2))

    def test_state_rejects_negative_eigenvalue(self):
        with pytest.raises(ValueError):
            SystemState(np.diag([1.5, -0.5]))

    def test_spectrum_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            Spectrum.from_lines([(0.0, 0.4, 1), (1.0, 0.4, 1)])

    def test_spectrum_rejects_unsorted(self):
        with pytest.raises(ValueError):
            Spectrum.from_lines([(1.0, 0.5, 1), (0.0, 0.5, 1)])


def test_evenly_spaced_spectrum_seeded():
    a = evenly_spaced_spectrum(5, seed=42)
    b = evenly_spaced_spectrum(5, seed=42)
    assert a == b
    assert np.allclose(a.energies, [0, 1, 2, 3, 4])
    assert np.isclose(a.populations.sum(), 1.0)
