"""Coin and shift operators and the composite one-step walk unitary.

One time step of the 2D walk is

    U = S_y C_y S_x C_x

applied right-to-left.  In the fixed basis (LD, RD, LU, RU):

* ``C_x`` rotates the (LD,RD) and (LU,RU) pairs by the site angle
  theta_x(x):  [[c,-s],[s,c]] on each pair.
* ``S_x`` moves the L components (LD, LU) one site toward -x and the R
  components (RD, RU) toward +x, periodically.
* ``C_y`` is the real 4x4 matrix with diagonal c = cos(theta_y(y)) and
  off-diagonal entries -s at (LD,RU) and (RD,LU), +s at (LU,RD) and
  (RU,LD); it mixes the D and U sectors.
* ``S_y`` acts through the half-shift combinations
  P f(y) = (f(y+1) + f(y-1))/2 and Q f(y) = (f(y+1) - f(y-1))/2:

      LD' =  P LD + Q RD        LU' =  P LU - Q RU
      RD' =  Q LD + P RD        RU' = -Q LU + P RU

All four factors are real, so the assembled position-space matrix of U is
real for any angle profiles.

The 1D split-step walk U = S C on two components (L=0, R=1) uses the same
rotation coin and the same shift convention.

Everything here is matrix-free (vectorized numpy on (L_x, L_y, 4) arrays);
explicit small-lattice matrices for tests live in `walk_matrix_dense`.
"""

import numpy as np

from .lattice import LD, RD, LU, RU, LatticeSpec, allocate_state


def coin_matrix(axis, theta):
    """The 4x4 coin for one axis at a single angle.

    axis='x': block-diagonal rotation on (LD,RD) and (LU,RU).
    axis='y': the D/U-mixing real matrix described in the module docstring.
    Both are orthogonal.
    """
    c, s = np.cos(theta), np.sin(theta)
    if axis == "x":
        return np.array([[c, -s, 0, 0],
                         [s, c, 0, 0],
                         [0, 0, c, -s],
                         [0, 0, s, c]])
    if axis == "y":
        return np.array([[c, 0, 0, -s],
                         [0, c, -s, 0],
                         [0, s, c, 0],
                         [s, 0, 0, c]])
    raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")


def coin_matrix_1d(theta):
    """2x2 rotation coin [[c,-s],[s,c]] on (L, R)."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def _apply_coin_x(state, c, s):
    # c, s have shape (L_x, 1); state (L_x, L_y, 4)
    out = np.empty_like(state)
    out[:, :, LD] = c * state[:, :, LD] - s * state[:, :, RD]
    out[:, :, RD] = s * state[:, :, LD] + c * state[:, :, RD]
    out[:, :, LU] = c * state[:, :, LU] - s * state[:, :, RU]
    out[:, :, RU] = s * state[:, :, LU] + c * state[:, :, RU]
    return out


def _apply_coin_y(state, c, s):
    # c, s have shape (1, L_y)
    out = np.empty_like(state)
    out[:, :, LD] = c * state[:, :, LD] - s * state[:, :, RU]
    out[:, :, RD] = c * state[:, :, RD] - s * state[:, :, LU]
    out[:, :, LU] = s * state[:, :, RD] + c * state[:, :, LU]
    out[:, :, RU] = s * state[:, :, LD] + c * state[:, :, RU]
    return out


def _apply_shift_x(state, sign=+1):
    # sign=+1: the forward shift; sign=-1: its adjoint (directions swapped)
    out = np.empty_like(state)
    out[:, :, LD] = np.roll(state[:, :, LD], -sign, axis=0)
    out[:, :, LU] = np.roll(state[:, :, LU], -sign, axis=0)
    out[:, :, RD] = np.roll(state[:, :, RD], sign, axis=0)
    out[:, :, RU] = np.roll(state[:, :, RU], sign, axis=0)
    return out


def _apply_shift_y(state, sign=+1):
    up = np.roll(state, -1, axis=1)    # f(y+1)
    down = np.roll(state, 1, axis=1)   # f(y-1)
    P = 0.5 * (up + down)
    Q = 0.5 * sign * (up - down)       # adjoint flips the sign of Q
    out = np.empty_like(state)
    out[:, :, LD] = P[:, :, LD] + Q[:, :, RD]
    out[:, :, RD] = Q[:, :, LD] + P[:, :, RD]
    out[:, :, LU] = P[:, :, LU] - Q[:, :, RU]
    out[:, :, RU] = -Q[:, :, LU] + P[:, :, RU]
    return out


def apply_shift(axis, state, adjoint=False):
    """Apply S_x or S_y (or its adjoint) to a (L_x, L_y, 4) state."""
    sign = -1 if adjoint else +1
    if axis == "x":
        return _apply_shift_x(state, sign)
    if axis == "y":
        return _apply_shift_y(state, sign)
    raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")


class StepOperator2D:
    """The one-step walk unitary U = S_y C_y S_x C_x for given angle profiles.

    Coins are evaluated lazily per site from the profiles (matrix-free
    application, O(N) per step).  The operator is immutable after
    construction.
    """

    def __init__(self, lattice, profile_x, profile_y):
        self.lattice = lattice
        self.profile_x = profile_x
        self.profile_y = profile_y
        tx = profile_x.table(lattice.half_x)
        ty = profile_y.table(lattice.half_y)
        self._cx = np.cos(tx)[:, None]
        self._sx = np.sin(tx)[:, None]
        self._cy = np.cos(ty)[None, :]
        self._sy = np.sin(ty)[None, :]

    def _check(self, state):
        if state.shape != self.lattice.shape:
            raise ValueError(f"state shape {state.shape} does not match "
                             f"lattice {self.lattice!r}")

    def apply(self, state):
        """One walk step: S_y C_y S_x C_x |psi>."""
        self._check(state)
        psi = _apply_coin_x(state, self._cx, self._sx)
        psi = _apply_shift_x(psi)
        psi = _apply_coin_y(psi, self._cy, self._sy)
        psi = _apply_shift_y(psi)
        return psi

    def apply_adjoint(self, state):
        """One inverse step: C_x^T S_x^T C_y^T S_y^T |psi>."""
        self._check(state)
        psi = _apply_shift_y(state, sign=-1)
        psi = _apply_coin_y(psi, self._cy, -self._sy)
        psi = _apply_shift_x(psi, sign=-1)
        psi = _apply_coin_x(psi, self._cx, -self._sx)
        return psi

    def __repr__(self):
        return (f"StepOperator2D({self.lattice!r}, "
                f"x={self.profile_x.to_spec_string()}, "
                f"y={self.profile_y.to_spec_string()})")


class StepOperator1D:
    """The 1D split-step walk U = S C on (L, R) spinors of shape (L_x, 2)."""

    def __init__(self, L_x, profile_x):
        if L_x < 3 or L_x % 2 == 0:
            raise ValueError(f"L_x must be odd and >= 3, got {L_x}")
        self.L_x = int(L_x)
        self.half_x = self.L_x // 2
        self.profile_x = profile_x
        tx = profile_x.table(self.half_x)
        self._c = np.cos(tx)
        self._s = np.sin(tx)

    def apply(self, state):
        c, s = self._c, self._s
        coined_L = c * state[:, 0] - s * state[:, 1]
        coined_R = s * state[:, 0] + c * state[:, 1]
        out = np.empty_like(state)
        out[:, 0] = np.roll(coined_L, -1)
        out[:, 1] = np.roll(coined_R, 1)
        return out

    def apply_adjoint(self, state):
        unshifted_L = np.roll(state[:, 0], 1)
        unshifted_R = np.roll(state[:, 1], -1)
        c, s = self._c, self._s
        out = np.empty_like(state)
        out[:, 0] = c * unshifted_L + s * unshifted_R
        out[:, 1] = -s * unshifted_L + c * unshifted_R
        return out


def walk_matrix_dense(op):
    """Explicit matrix of U by applying the step to every basis vector.

    Index layout matches ``state.reshape(-1)``: (x, y, c) with c fastest.
    Intended for small lattices (tests, symmetry checks); O(N^2) memory.
    """
    n = op.lattice.size
    if n > 40000:
        raise ValueError(f"dense walk matrix with {n} rows is too large; "
                         "use the sparse builder or the matrix-free operator")
    U = np.empty((n, n), dtype=complex)
    basis = allocate_state(op.lattice)
    flat = basis.reshape(-1)
    for j in range(n):
        flat[j] = 1.0
        U[:, j] = op.apply(basis).reshape(-1)
        flat[j] = 0.0
    return U


def walk_matrix_dense_1d(op):
    """Explicit 2L x 2L matrix of the 1D walk; index = 2*(x+half) + comp."""
    n = 2 * op.L_x
    U = np.empty((n, n), dtype=complex)
    basis = np.zeros((op.L_x, 2), dtype=complex)
    flat = basis.reshape(-1)
    for j in range(n):
        flat[j] = 1.0
        U[:, j] = op.apply(basis).reshape(-1)
        flat[j] = 0.0
    return U
