import numpy as np
import pytest

from dtqw.lattice import LatticeSpec, basis_state, norm
from dtqw.operators import (StepOperator1D, StepOperator2D, apply_shift,
                            coin_matrix, walk_matrix_dense,
                            walk_matrix_dense_1d)
from dtqw.profiles import Constant, DomainWall, LinearSaturated


def _rand_state(lat, seed=0):
    rng = np.random.Generator(np.random.PCG64(seed))
    psi = rng.normal(size=lat.shape) + 1j * rng.normal(size=lat.shape)
    return psi / norm(psi)


class TestCoins:
    @pytest.mark.parametrize("axis", ["x", "y"])
    def test_coin_is_real_orthogonal(self, axis):
        C = coin_matrix(axis, 0.7)
        assert np.allclose(C @ C.T, np.eye(4), atol=1e-15)
        assert np.max(np.abs(C.imag)) == 0.0

    def test_x_coin_acts_per_tau_block(self):
        # tau is the slow index: components (0,1) and (2,3) rotate separately
        C = coin_matrix("x", 0.3)
        assert C[0, 2] == C[0, 3] == C[1, 2] == C[1, 3] == 0.0
        c, s = np.cos(0.3), np.sin(0.3)
        assert np.allclose(C[:2, :2], [[c, -s], [s, c]])
        assert np.allclose(C[2:, 2:], [[c, -s], [s, c]])

    def test_y_coin_mixes_tau_within_sigma(self):
        C = coin_matrix("y", 0.3)
        c, s = np.cos(0.3), np.sin(0.3)
        expect = np.array([[c, 0, 0, -s],
                           [0, c, -s, 0],
                           [0, s, c, 0],
                           [s, 0, 0, c]])
        assert np.allclose(C, expect)

    def test_zero_angle_coin_is_identity(self):
        assert np.allclose(coin_matrix("y", 0.0), np.eye(4))


class TestShift:
    def test_shift_moves_components_oppositely(self):
        lat = LatticeSpec(5)
        psi = basis_state(lat, 0, 0, 0) + basis_state(lat, 0, 0, 1)
        psi /= norm(psi)
        out = apply_shift("x", psi)
        P = np.abs(out) ** 2
        # component 0 (left mover) at x=-1, component 1 (right mover) at x=+1
        assert P[lat.half_x - 1, lat.half_y, 0] == pytest.approx(0.5)
        assert P[lat.half_x + 1, lat.half_y, 1] == pytest.approx(0.5)

    def test_adjoint_inverts(self):
        lat = LatticeSpec(7)
        psi = _rand_state(lat)
        for axis in ("x", "y"):
            back = apply_shift(axis, apply_shift(axis, psi), adjoint=True)
            assert np.allclose(back, psi, atol=1e-15)


class TestStepOperator:
    @pytest.mark.parametrize("profile", [
        Constant(np.pi / 3),
        LinearSaturated(np.pi / 20, 5, np.pi / 4),
        DomainWall(np.pi / 3, -np.pi / 3, 3),
        DomainWall(np.pi / 3, -np.pi / 3, 3).with_noise(0.25, 5),
    ])
    def test_unitary_on_random_state(self, profile):
        lat = LatticeSpec(11)
        op = StepOperator2D(lat, profile, profile)
        psi = _rand_state(lat)
        assert norm(op.apply(psi)) == pytest.approx(1.0, abs=1e-13)
        assert np.allclose(op.apply_adjoint(op.apply(psi)), psi, atol=1e-13)

    def test_walk_matrix_is_real(self):
        # real coins and permutation shifts make the whole step real,
        # which is the operative particle-hole property
        op = StepOperator2D(LatticeSpec(7),
                            DomainWall(np.pi / 3, -np.pi / 3, 2),
                            Constant(np.pi / 7))
        U = walk_matrix_dense(op)
        assert np.max(np.abs(U.imag)) == 0.0
        assert np.allclose(U @ U.T, np.eye(U.shape[0]), atol=1e-13)

    def test_dense_matrix_matches_apply(self):
        lat = LatticeSpec(7)
        op = StepOperator2D(lat, LinearSaturated(0.1, 2, 0.3),
                            Constant(0.2))
        U = walk_matrix_dense(op)
        psi = _rand_state(lat, seed=3)
        assert np.allclose(U @ psi.reshape(-1),
                           op.apply(psi).reshape(-1), atol=1e-13)

    def test_1d_matches_2d_on_y_uniform_zero(self):
        # with theta_y = 0 and no y motion the 2D walk acts as two copies
        # of the 1D walk; compare against the dense 1D matrix
        op1 = StepOperator1D(9, DomainWall(np.pi / 3, -np.pi / 3, 2))
        U1 = walk_matrix_dense_1d(op1)
        assert np.allclose(U1 @ U1.T.conj(), np.eye(18), atol=1e-13)

    def test_free_walk_movers(self):
        # theta = 0: sigma = L/R moves -x/+x, and the y shift moves the
        # per-site sigma-even combination down for tau=D, up for tau=U.
        # Prepare states that become sigma-even at the origin after S_x.
        lat = LatticeSpec(5)
        op = StepOperator2D(lat, Constant(0.0), Constant(0.0))
        hx, hy = lat.half_x, lat.half_y

        pre_D = (basis_state(lat, 1, 0, 0)      # L at x=+1 -> origin
                 + basis_state(lat, -1, 0, 1)) / np.sqrt(2)
        P = np.sum(np.abs(op.apply(pre_D)) ** 2, axis=2)
        assert P[hx, hy - 1] == pytest.approx(1.0)

        pre_U = (basis_state(lat, 1, 0, 2)
                 + basis_state(lat, -1, 0, 3)) / np.sqrt(2)
        P = np.sum(np.abs(op.apply(pre_U)) ** 2, axis=2)
        assert P[hx, hy + 1] == pytest.approx(1.0)
