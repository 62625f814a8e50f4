import numpy as np
import pytest

from bandrec import (
    DimerizedModel,
    HeisenbergModel,
    LanczosConfig,
    NumericalError,
    SectorBasis,
    SingleIonModel,
    SpinModelSpec,
    Twist,
    ValidationError,
    build_hamiltonian,
    energy_series,
    ground_energy,
    lowest_eigenpair,
)


# ---------------------------------------------------------------------------
# independent dense oracle: build the full 2^L / 3^L Hamiltonian from Kronecker
# products of single-site spin matrices, with the same twist convention
# ---------------------------------------------------------------------------


def spin_matrices(local_dim):
    s = (local_dim - 1) / 2.0
    m = np.arange(s, -s - 1.0, -1.0)
    sz = np.diag(m)
    sp = np.zeros((local_dim, local_dim))
    for i in range(1, local_dim):
        sp[i - 1, i] = np.sqrt(s * (s + 1) - m[i] * (m[i] + 1))
    return sz, sp, sp.T


def site_operator(op, site, L, local_dim):
    mats = [np.eye(local_dim)] * L
    mats[site] = op
    out = mats[0]
    for mat in mats[1:]:
        out = np.kron(out, mat)
    return out


def dense_kron_hamiltonian(model, L, twist):
    d = model.local_dim
    sz, sp, sm = spin_matrices(d)
    couplings = model.bond_couplings(L)
    H = np.zeros((d**L, d**L))
    for b in range(L):
        i, j = b, (b + 1) % L
        sign = -1.0 if (twist is Twist.ABC and b == L - 1) else 1.0
        H += couplings[b] * site_operator(sz, i, L, d) @ site_operator(sz, j, L, d)
        H += (
            0.5
            * couplings[b]
            * sign
            * (
                site_operator(sp, i, L, d) @ site_operator(sm, j, L, d)
                + site_operator(sm, i, L, d) @ site_operator(sp, j, L, d)
            )
        )
    if model.onsite_anisotropy:
        for i in range(L):
            szi = site_operator(sz, i, L, d)
            H += model.onsite_anisotropy * szi @ szi
    return H


def dense_sector(model, L, twist):
    spec = SpinModelSpec(model, twist)
    return build_hamiltonian(spec, L).dense()


ALL_MODELS = [
    HeisenbergModel(1.0),
    DimerizedModel(1.0, 0.3),
    SingleIonModel(1.0, 2.5),
]


class TestSectorBasis:
    def test_dimensions(self):
        assert SectorBasis.build(4, 2).dim == 6  # C(4,2)
        assert SectorBasis.build(2, 3).dim == 3
        assert SectorBasis.build(4, 3).dim == 19  # central trinomial
        assert SectorBasis.build(3, 2).dim == 0  # odd spin-1/2 chain, Sz=0 empty

    def test_rank_unrank_roundtrip(self):
        basis = SectorBasis.build(6, 3)
        for idx in range(0, basis.dim, 7):
            assert basis.rank(basis.unrank(idx)) == idx

    def test_all_states_have_target_magnetization(self):
        basis = SectorBasis.build(5, 3, sz2_total=2)
        for i in range(basis.dim):
            digits = [basis.digits(site)[i] for site in range(5)]
            assert sum(d - 1 for d in digits) == 1  # total S^z = +1

    def test_invalid_inputs(self):
        with pytest.raises(ValidationError):
            SectorBasis.build(0, 2)
        with pytest.raises(ValidationError):
            SectorBasis.build(4, 5)


class TestHamiltonian:
    def test_minimum_chain_length(self):
        with pytest.raises(ValidationError):
            build_hamiltonian(SpinModelSpec(HeisenbergModel()), 1)

    def test_sector_mismatch(self):
        basis = SectorBasis.build(4, 3)
        with pytest.raises(ValidationError):
            build_hamiltonian(SpinModelSpec(HeisenbergModel()), 4, basis)

    @pytest.mark.parametrize("model", ALL_MODELS)
    @pytest.mark.parametrize("twist", [Twist.PBC, Twist.ABC])
    @pytest.mark.parametrize("L", [2, 3, 4, 5])
    def test_matches_kron_oracle_on_sector(self, model, twist, L):
        if model.local_dim == 2 and L % 2:
            pytest.skip("odd spin-1/2 sector is empty")
        basis = SectorBasis.build(L, model.local_dim)
        H_sector = dense_sector(model, L, twist)
        H_full = dense_kron_hamiltonian(model, L, twist)
        # project the full matrix onto the sector configurations; kron order
        # puts site 0 leftmost with m descending, our codes put site 0 in the
        # lowest digit with m ascending
        d = model.local_dim
        full_indices = []
        for code in basis.states:
            idx = 0
            for site in range(L):
                level = (code // d**site) % d
                idx += (d - 1 - level) * d ** (L - 1 - site)
            full_indices.append(idx)
        sub = H_full[np.ix_(full_indices, full_indices)]
        assert np.max(np.abs(H_sector - sub)) < 1e-12

    @pytest.mark.parametrize("model", ALL_MODELS)
    def test_hermiticity_on_random_vectors(self, model):
        for L in (4, 6, 8, 10):
            if model.local_dim == 3 and L > 8:
                continue
            ham = build_hamiltonian(SpinModelSpec(model, Twist.ABC), L)
            rng = np.random.default_rng(L)
            for _ in range(3):
                u = rng.standard_normal(ham.dim)
                v = rng.standard_normal(ham.dim)
                lhs = u @ ham.matvec(v)
                rhs = ham.matvec(u) @ v
                assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))

    @pytest.mark.parametrize("L", [4, 6, 8])
    def test_sector_contains_full_space_minimum(self, L):
        model = HeisenbergModel(1.0)
        sector_min = np.linalg.eigvalsh(dense_sector(model, L, Twist.PBC))[0]
        full_min = np.linalg.eigvalsh(dense_kron_hamiltonian(model, L, Twist.PBC))[0]
        assert sector_min == pytest.approx(full_min, abs=1e-10)

    @pytest.mark.parametrize("model", ALL_MODELS)
    def test_translation_invariance_of_pbc_spectrum(self, model):
        L = 6 if model.local_dim == 2 else 4
        basis = SectorBasis.build(L, model.local_dim)
        H = dense_sector(model, L, Twist.PBC)
        # conjugate by the cyclic site relabeling; dimerized couplings shift by
        # one bond, which maps delta -> -delta (same spectrum family)
        d = model.local_dim
        rotated_codes = (basis.states // d) + (basis.states % d) * d ** (L - 1)
        perm = np.searchsorted(basis.states, rotated_codes)
        if isinstance(model, DimerizedModel):
            H_rot = dense_sector(DimerizedModel(model.J, -model.delta), L, Twist.PBC)
        else:
            H_rot = H
        assert np.allclose(
            np.linalg.eigvalsh(H_rot), np.linalg.eigvalsh(H[np.ix_(perm, perm)]), atol=1e-10
        )

    @pytest.mark.parametrize("model", ALL_MODELS)
    @pytest.mark.parametrize("L", [4, 6, 8])
    def test_twist_position_is_gauge(self, model, L):
        if model.local_dim == 3 and L == 8:
            pytest.skip("keep dense sizes small")
        spec = SpinModelSpec(model, Twist.ABC)
        spectra = []
        for bond in (0, 1, L - 1):
            H = build_hamiltonian(spec, L, twist_bond=bond).dense()
            spectra.append(np.linalg.eigvalsh(H))
        assert np.allclose(spectra[0], spectra[1], atol=1e-10)
        assert np.allclose(spectra[0], spectra[2], atol=1e-10)


class TestGroundEnergy:
    def test_two_site_singlet(self):
        r = ground_energy(SpinModelSpec(HeisenbergModel(1.0)), 2)
        assert r.E0 == pytest.approx(-1.5, abs=1e-12)

    def test_four_site_value(self):
        r = ground_energy(SpinModelSpec(HeisenbergModel(1.0)), 4)
        assert r.E0 == pytest.approx(-2.0, abs=1e-10)

    def test_couplings_scale(self):
        r = ground_energy(SpinModelSpec(HeisenbergModel(2.5)), 4)
        assert r.E0 == pytest.approx(-5.0, abs=1e-9)

    def test_twelve_site_density_near_thermodynamic_value(self):
        r = ground_energy(SpinModelSpec(HeisenbergModel(1.0)), 12)
        e_inf = 0.25 - np.log(2.0)
        assert abs(r.E0 / 12 - e_inf) <= 0.03 * abs(e_inf)

    def test_dimerized_delta_zero_equals_heisenberg(self):
        for L in (4, 6, 8):
            e_dim = ground_energy(SpinModelSpec(DimerizedModel(1.0, 0.0)), L).E0
            e_heis = ground_energy(SpinModelSpec(HeisenbergModel(1.0)), L).E0
            assert e_dim == pytest.approx(e_heis, abs=1e-10)

    def test_single_ion_large_anisotropy_perturbative(self):
        D = 1000.0
        r = ground_energy(SpinModelSpec(SingleIonModel(1.0, D)), 2)
        # two-site dense oracle
        dense = dense_sector(SingleIonModel(1.0, D), 2, Twist.PBC)
        assert r.E0 == pytest.approx(np.linalg.eigvalsh(dense)[0], abs=1e-10)
        # leading order of the level repulsion from the doubly occupied states
        assert r.E0 == pytest.approx(-4.0 / D, abs=10.0 / D**2)

    def test_odd_spin_half_rejected(self):
        with pytest.raises(ValidationError):
            ground_energy(SpinModelSpec(HeisenbergModel()), 5)

    @pytest.mark.parametrize("model", ALL_MODELS)
    @pytest.mark.parametrize("twist", [Twist.PBC, Twist.ABC])
    def test_lanczos_matches_dense_on_small_sectors(self, model, twist):
        sizes = (2, 4, 6, 8, 10) if model.local_dim == 2 else (2, 3, 4, 5, 6, 7)
        for L in sizes:
            dense_min = np.linalg.eigvalsh(dense_sector(model, L, twist))[0]
            r = ground_energy(SpinModelSpec(model, twist), L)
            assert r.E0 == pytest.approx(dense_min, abs=1e-10), (model.kind, twist, L)

    def test_residual_bound(self):
        for L in (8, 12):
            r = ground_energy(SpinModelSpec(HeisenbergModel(1.0)), L)
            assert r.residual_norm <= 1e-8 * (abs(r.E0) + 1.0)


class TestLanczosSolver:
    def test_degeneracy_warning_on_near_degenerate_ground_state(self):
        # a gap below 1e-10 between the two lowest Ritz values raises the flag;
        # the tiny space exhausts the Krylov basis, making the Ritz values exact
        # (exactly degenerate copies are invisible to a single Krylov sequence)
        diag = np.array([0.0, 3e-11, 1.0])
        result, _ = lowest_eigenpair(lambda x: diag * x, diag.size)
        assert result.energy == pytest.approx(0.0, abs=1e-12)
        assert result.degeneracy_warning

    def test_no_warning_on_separated_spectrum(self):
        diag = np.linspace(0.0, 4.0, 50)
        result, _ = lowest_eigenpair(lambda x: diag * x, diag.size)
        assert not result.degeneracy_warning

    def test_nonconvergence_carries_best_estimate(self):
        rng = np.random.default_rng(0)
        A = rng.standard_normal((400, 400))
        A = (A + A.T) / 2
        config = LanczosConfig(tol_energy=1e-16, max_iter=4)
        with pytest.raises(NumericalError) as excinfo:
            lowest_eigenpair(lambda x: A @ x, 400, config)
        assert hasattr(excinfo.value, "best_estimate")

    def test_dimension_one(self):
        result, vec = lowest_eigenpair(lambda x: 2.5 * x, 1)
        assert result.energy == pytest.approx(2.5)

    def test_seed_determinism(self):
        rng = np.random.default_rng(1)
        A = rng.standard_normal((60, 60))
        A = A + A.T
        r1, v1 = lowest_eigenpair(lambda x: A @ x, 60, LanczosConfig(seed=7))
        r2, v2 = lowest_eigenpair(lambda x: A @ x, 60, LanczosConfig(seed=7))
        assert r1.energy == r2.energy
        assert np.array_equal(v1, v2)


class TestEnergySeries:
    def test_heisenberg_totals(self):
        series = energy_series(HeisenbergModel(1.0), [2, 4], (Twist.PBC,))
        assert series.E(2, Twist.PBC) == pytest.approx(-1.5, abs=1e-12)
        assert series.E(4, Twist.PBC) == pytest.approx(-2.0, abs=1e-10)
        assert series.source == "exact-diag"
        assert series.nu == 1.0

    def test_spin_one_includes_odd_sizes(self):
        series = energy_series(SingleIonModel(1.0, 5.0), [2, 3, 4], (Twist.PBC,))
        assert series.sizes(Twist.PBC) == (2, 3, 4)

    def test_spin_half_odd_size_rejected(self):
        with pytest.raises(ValidationError):
            energy_series(HeisenbergModel(1.0), [3], (Twist.PBC,))

    def test_sizes_below_two_rejected(self):
        with pytest.raises(ValidationError):
            energy_series(SingleIonModel(1.0, 5.0), [1, 2], (Twist.PBC,))

    def test_nu_hints(self):
        assert energy_series(DimerizedModel(1.0, 0.1), [2, 4]).nu == 3.0
        assert energy_series(SingleIonModel(1.0, 5.0), [2, 3]).nu == 2.0
