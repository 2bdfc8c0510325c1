import numpy as np
import pytest

from dtqw.lattice import LatticeSpec
from dtqw.operators import StepOperator2D, walk_matrix_dense
from dtqw.profiles import Constant, DomainWall
from dtqw.spectral import (block_eigensystem, bulk_bands, bulk_gap_edge,
                           bulk_openings, commensurate_grid, eigenphases,
                           momentum_block, near_unity_states, quasi_energies,
                           spectrum_scan, states_in_openings)


class TestBlocks:
    def test_commensurate_grid(self):
        g = commensurate_grid(7)
        assert len(g) == 7
        assert g[3] == 0.0
        assert np.allclose(np.diff(g), 2 * np.pi / 7)

    def test_blocks_tile_the_dense_spectrum(self):
        # union of block spectra over commensurate k_y == dense walk spectrum
        lat = LatticeSpec(7)
        op = StepOperator2D(lat, DomainWall(np.pi / 3, -np.pi / 3, 2),
                            Constant(np.pi / 7))
        dense = eigenphases(walk_matrix_dense(op))
        tiled = np.sort(np.concatenate(
            [quasi_energies(momentum_block(op, k))
             for k in commensurate_grid(7)]))
        assert np.allclose(dense, tiled, atol=1e-10)

    def test_block_eigensystem_residual(self):
        op = StepOperator2D(LatticeSpec(9),
                            DomainWall(np.pi / 3, -np.pi / 3, 3),
                            Constant(0.0))
        blk = momentum_block(op, 0.4)
        E, V = block_eigensystem(blk)
        lam = np.exp(-1j * E)
        resid = np.linalg.norm(blk.matrix @ V - V * lam[None, :])
        assert resid < 1e-10
        assert np.all(np.diff(E) >= 0)

    def test_noise_in_y_profile_rejected(self):
        op = StepOperator2D(LatticeSpec(9), Constant(0.1),
                            Constant(0.1).with_noise(0.05, 1))
        with pytest.raises(ValueError):
            momentum_block(op, 0.0)


class TestBulkBands:
    def test_free_case_dispersion(self):
        # theta = 0: cos E = cos k_x cos k_y, each value twice
        for kx, ky in [(0.3, -1.1), (2.0, 0.7)]:
            E = bulk_bands(0.0, 0.0, kx, ky)
            expect = np.arccos(np.cos(kx) * np.cos(ky))
            assert np.allclose(np.sort(np.abs(E)),
                               [expect, expect, expect, expect][:4][:len(E)],
                               atol=1e-12)

    def test_bands_match_uniform_lattice_blocks(self):
        # dual route: plane-wave bands vs the L x L lattice block at a
        # commensurate momentum
        L, tx, ty = 9, np.pi / 3, np.pi / 5
        op = StepOperator2D(LatticeSpec(L), Constant(tx), Constant(ty))
        ky = commensurate_grid(L)[6]
        lattice_E = quasi_energies(momentum_block(op, ky))
        band_E = np.sort(np.concatenate(
            [bulk_bands(tx, ty, kx, ky) for kx in commensurate_grid(L)]))
        assert np.allclose(np.sort(lattice_E), band_E, atol=1e-12)

    def test_gap_edge_formula(self):
        # brute-force the k_x minimum of |E| and compare
        theta, ky = np.pi / 3, 0.35
        edge = bulk_gap_edge(theta, ky)
        kxs = np.linspace(-np.pi, np.pi, 20001)
        brute = min(np.min(np.abs(bulk_bands(theta, 0.0, kx, ky)))
                    for kx in kxs)
        assert edge == pytest.approx(brute, abs=1e-6)


class TestOpenings:
    def test_openings_bracket_zero_and_pi(self):
        ops = bulk_openings((np.pi / 3, -np.pi / 3), np.pi / 3, 0.0)
        assert len(ops) == 2
        zero_open = [o for o in ops if o[0] < 0.0 < o[1]]
        pi_open = [o for o in ops if o[0] < np.pi < o[1]]
        assert len(zero_open) == 1 and len(pi_open) == 1

    def test_states_in_openings_wraps(self):
        openings = [(-0.5, 0.5), (2.9, 3.5)]   # second straddles +pi
        hits = states_in_openings([0.0, 0.4, 1.0, 3.0, -3.2], openings)
        # -3.2 + 2pi = 3.083 sits inside the wrapped opening
        assert sorted(hits) == pytest.approx([-3.2, 0.0, 0.4, 3.0])

    @pytest.mark.parametrize("ky", [0.0, 1.0, np.pi / 2])
    def test_opening_edges_match_gap_formula(self, ky):
        # the E ~ 0 opening of the +-theta media at theta_y = 0 is the
        # projected bulk gap; its edges must agree with the closed form
        ops = bulk_openings((np.pi / 3, -np.pi / 3), 0.0, ky, n_kx=2001)
        zero_open = [o for o in ops if o[0] < 0.0 < o[1]]
        assert len(zero_open) == 1
        lo, hi = zero_open[0]
        edge = bulk_gap_edge(np.pi / 3, ky)
        assert hi == pytest.approx(edge, abs=2e-3)
        assert lo == pytest.approx(-edge, abs=2e-3)


class TestNearUnityStates:
    def test_dual_route_against_plane_waves(self):
        # uniform trivial coin: smallest |E| from the eigensolver must match
        # the plane-wave minimum on the commensurate grid
        L, theta = 15, np.pi / 3
        op = StepOperator2D(LatticeSpec(L), Constant(theta), Constant(theta))
        pairs = near_unity_states(op, 4)
        grid = commensurate_grid(L)
        best = min(np.min(np.abs(bulk_bands(theta, theta, kx, ky)))
                   for kx in grid for ky in grid)
        assert abs(pairs[0].energy) == pytest.approx(best, abs=1e-8)
        for p in pairs:
            assert p.residual < 1e-8

    def test_degenerate_multiplet_not_truncated(self):
        # the requested count cuts into a degenerate multiplet; all returned
        # energies must still be genuine eigenphases (residual-checked)
        op = StepOperator2D(LatticeSpec(9), Constant(np.pi / 3),
                            Constant(np.pi / 3))
        pairs = near_unity_states(op, 3)
        assert len(pairs) == 3
        assert all(p.residual < 1e-9 for p in pairs)


class TestSpectrumScan:
    def test_rows_and_min_abs(self):
        op = StepOperator2D(LatticeSpec(9),
                            DomainWall(np.pi / 3, -np.pi / 3, 3),
                            Constant(0.0))
        spec = spectrum_scan(op)
        rows = list(spec.rows())
        assert len(rows) == 9 * 36
        assert spec.min_abs_energy(0.0) >= 0.0
