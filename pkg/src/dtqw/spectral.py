"""Quasi-energy spectra, bulk bands, and near-unit-eigenvalue searches.

With a y-independent coin angle the walk block-diagonalizes over the y
momentum: replacing the S_y half-shift combinations P -> cos(k_y),
Q -> i sin(k_y) turns the step operator into a 4*L_x x 4*L_x unitary
U(k_y) whose eigenphases are the quasi-energies E in (-pi, pi]
(eigenvalue = exp(-iE)).

Corner-state searches on the full 2D lattice use the Hermitian surrogate
W = (U + U^dag)/2: the walk matrix is real in position space, so W is real
symmetric, its largest eigenvalues cos(E) mark the quasi-energies nearest
zero, and U restricted to the converged subspace resolves the E signs.
"""

import numpy as np
from scipy import sparse
from scipy.linalg import block_diag
from scipy.sparse.linalg import eigsh, ArpackNoConvergence

from .operators import coin_matrix
from .profiles import Constant

# off-diagonal patterns of the two coins and of the Q-part of S_y,
# in the fixed (LD, RD, LU, RU) order
_J_X = np.array([[0.0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
_J_Y = np.array([[0.0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]])
_Q4 = np.array([[0.0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, -1, 0]])


class ConvergenceError(RuntimeError):
    """An iterative eigensolve ran out of budget; carries the best residual."""

    def __init__(self, message, best_residual=None):
        super().__init__(message)
        self.best_residual = best_residual


def _require_block_structure(op):
    if not isinstance(op.profile_y, Constant) or op.profile_y.noise_amplitude:
        raise ValueError(
            "momentum blocks need a y-independent walk: profile_y must be a "
            f"plain Constant, got {op.profile_y.to_spec_string()!r}")


class MomentumBlock:
    """The 4*L_x x 4*L_x walk unitary at a fixed y momentum."""

    def __init__(self, k_y, matrix):
        self.k_y = float(k_y)
        self.matrix = matrix
        dev = np.max(np.abs(matrix.conj().T @ matrix - np.eye(matrix.shape[0])))
        if dev > 1e-12:
            raise ValueError(f"momentum block is not unitary "
                             f"(max deviation {dev:.3g})")

    @property
    def size(self):
        return self.matrix.shape[0]


def momentum_block(op, k_y):
    """Assemble U(k_y) = S_y(k_y) C_y S_x C_x over the x axis.

    Index layout: 4*(x + half_x) + c.  Requires y-translation invariance
    (constant noiseless theta_y); theta_x may be any profile including
    noise.
    """
    _require_block_structure(op)
    L = op.lattice.L_x
    tx = op.profile_x.table(op.lattice.half_x)
    C_x = block_diag(*(coin_matrix("x", t) for t in tx)).astype(complex)
    n = 4 * L
    S_x = np.zeros((n, n))
    xi = np.arange(L)
    for c, step in ((0, -1), (1, +1), (2, -1), (3, +1)):
        S_x[4 * ((xi + step) % L) + c, 4 * xi + c] = 1.0
    C_y = np.kron(np.eye(L), coin_matrix("y", op.profile_y.theta))
    cy, sy = np.cos(k_y), np.sin(k_y)
    s_y_cell = np.array([[cy, 1j * sy, 0, 0],
                         [1j * sy, cy, 0, 0],
                         [0, 0, cy, -1j * sy],
                         [0, 0, -1j * sy, cy]])
    S_y = np.kron(np.eye(L), s_y_cell)
    return MomentumBlock(k_y, S_y @ C_y @ S_x @ C_x)


def eigenphases(matrix):
    """Quasi-energies E in (-pi, pi] of a unitary matrix, sorted ascending."""
    lam = np.linalg.eigvals(matrix)
    drift = np.max(np.abs(np.abs(lam) - 1.0))
    if drift > 1e-10:
        raise ValueError(f"eigenvalue modulus drifts from 1 by {drift:.3g}; "
                         "matrix is not unitary enough")
    E = -np.angle(lam)
    E[E == -np.pi] = np.pi
    return np.sort(E)


def quasi_energies(block):
    """Sorted quasi-energies of a MomentumBlock (or raw unitary matrix)."""
    m = block.matrix if isinstance(block, MomentumBlock) else block
    return eigenphases(m)


def block_eigensystem(block):
    """(E, vectors) of a momentum block, sorted by E; vectors as columns."""
    m = block.matrix if isinstance(block, MomentumBlock) else block
    lam, V = np.linalg.eig(m)
    E = -np.angle(lam)
    E[E == -np.pi] = np.pi
    order = np.argsort(E)
    return E[order], V[:, order]


class QuasiEnergySpectrum:
    """E(k_y) over a grid: one sorted quasi-energy array per k_y."""

    def __init__(self, k_values, energies):
        self.k_values = np.asarray(k_values, dtype=float)
        self.energies = [np.asarray(e) for e in energies]

    def rows(self):
        """Iterate (k_y, E) pairs, one per eigenvalue, for CSV emission."""
        for k, Es in zip(self.k_values, self.energies):
            for E in Es:
                yield k, E

    def min_abs_energy(self, k_y):
        """Smallest |E| at the grid point nearest k_y."""
        i = int(np.argmin(np.abs(self.k_values - k_y)))
        return float(np.min(np.abs(self.energies[i])))


def commensurate_grid(L_y):
    """The lattice-commensurate grid k_y = 2 pi n / L_y, n = -floor(L/2)..floor(L/2)."""
    half = L_y // 2
    return 2.0 * np.pi * np.arange(-half, half + 1) / L_y


def spectrum_scan(op, k_grid=None):
    """Quasi-energy spectra over a k_y grid (default: commensurate grid)."""
    if k_grid is None:
        k_grid = commensurate_grid(op.lattice.L_y)
    energies = [quasi_energies(momentum_block(op, k)) for k in k_grid]
    return QuasiEnergySpectrum(k_grid, energies)


def bulk_bands(theta_x, theta_y, k_x, k_y):
    """The four quasi-energies of the uniform walk at one (k_x, k_y).

    Eigenphases of the 4x4 unitary S_y(k_y) C_y S_x(k_x) C_x with
    S_x(k_x) = diag(e^{ik_x}, e^{-ik_x}, e^{ik_x}, e^{-ik_x}) (the L
    components pick up +k_x since they move toward -x).
    """
    cx = coin_matrix("x", theta_x)
    cym = coin_matrix("y", theta_y)
    sx = np.diag(np.exp(1j * k_x * np.array([1, -1, 1, -1])))
    cy, sy = np.cos(k_y), np.sin(k_y)
    s_y = np.array([[cy, 1j * sy, 0, 0],
                    [1j * sy, cy, 0, 0],
                    [0, 0, cy, -1j * sy],
                    [0, 0, -1j * sy, cy]])
    return eigenphases(s_y @ cym @ sx @ cx)


def band_grid(theta_x, theta_y, k_x_values, k_y_values):
    """Bands over a rectangular k grid; shape (n_kx, n_ky, 4), sorted."""
    out = np.empty((len(k_x_values), len(k_y_values), 4))
    for i, kx in enumerate(k_x_values):
        for j, ky in enumerate(k_y_values):
            out[i, j] = bulk_bands(theta_x, theta_y, kx, ky)
    return out


def bulk_gap_edge(theta, k_y):
    """|E| of the bulk band edge at fixed k_y for theta_y = 0 walks.

    The uniform dispersion is cos E = cos(theta) cos(k_x) cos(k_y)
    + sin(theta) sin(k_x) sin(k_y); maximizing over k_x gives the band
    closest to zero.  The edge is the same for +-theta, so it applies on
    both sides of a domain wall.
    """
    R = np.hypot(np.cos(theta) * np.cos(k_y), np.sin(theta) * np.sin(k_y))
    return float(np.arccos(np.clip(R, -1.0, 1.0)))


def in_gap_points(spectrum, theta, rel_margin=0.05):
    """(k_y, E) spectrum entries inside the theta_y = 0 bulk gap around 0."""
    pts = []
    for k, Es in zip(spectrum.k_values, spectrum.energies):
        edge = bulk_gap_edge(theta, k) * (1.0 - rel_margin)
        for E in Es:
            if abs(E) < edge:
                pts.append((float(k), float(E)))
    return pts


def bulk_openings(theta_media, theta_y, k_y, n_kx=241, min_width=None):
    """Quasi-energy openings of the projected bulk bands at fixed k_y.

    Samples the uniform bands of every medium in `theta_media` (a scalar
    theta_x or an iterable, e.g. the two sides of a domain wall) over a
    dense k_x line, then reports the cyclic gaps between consecutive
    covered energies that exceed `min_width`.  Bands move at most ~2 per
    unit k_x, so the default threshold 5*(2 pi / n_kx) cannot split a
    covered band into spurious openings at the default sampling.

    Returns a list of (lo, hi) with hi > lo; an opening across E = +-pi is
    reported with hi > pi.
    """
    if np.isscalar(theta_media):
        theta_media = (theta_media,)
    if min_width is None:
        min_width = 5.0 * (2.0 * np.pi / n_kx)
    ks = np.linspace(-np.pi, np.pi, n_kx, endpoint=False)
    pts = np.sort(np.concatenate(
        [bulk_bands(tx, theta_y, kx, k_y) for tx in theta_media
         for kx in ks]))
    gaps = np.diff(pts)
    out = [(float(pts[i]), float(pts[i + 1]))
           for i in np.nonzero(gaps > min_width)[0]]
    wrap = 2.0 * np.pi - (pts[-1] - pts[0])
    if wrap > min_width:
        out.append((float(pts[-1]), float(pts[0] + 2.0 * np.pi)))
    return out


def states_in_openings(energies, openings, margin=0.0):
    """Energies strictly inside any (lo, hi) opening, `margin` off the edges.

    Energies and openings follow the bulk_openings convention (openings
    may extend past +pi to describe the wrap-around gap).
    """
    E = np.asarray(energies, dtype=float)
    hits = []
    for e in E:
        for lo, hi in openings:
            e_eff = e + 2.0 * np.pi if e < lo - np.pi else e
            if lo + margin < e_eff < hi - margin:
                hits.append(float(e))
                break
    return hits


def fit_edge_branch(spectrum, theta, k_window=0.2, rel_margin=0.05):
    """Fit |E| = v |k_y| to the in-gap branch near k_y = 0.

    Returns (v, relative_residual, points).  The relative residual is
    rms(|E| - v |k_y|) / rms(E) over the fitted points; points at k_y = 0
    contribute their |E| directly (the branch must cross zero there).
    """
    pts = [(k, E) for k, E in in_gap_points(spectrum, theta, rel_margin)
           if abs(k) <= k_window]
    if not pts:
        raise ValueError("no in-gap points found in the fit window")
    k = np.array([abs(p[0]) for p in pts])
    E = np.array([abs(p[1]) for p in pts])
    denom = float(k @ k)
    if denom == 0.0:
        raise ValueError("fit window contains only k_y = 0")
    v = float(k @ E) / denom
    resid = float(np.sqrt(np.mean((E - v * k) ** 2))
                  / np.sqrt(np.mean(E ** 2)))
    return v, resid, pts


def walk_matrix_sparse(op):
    """Sparse CSR matrix of U from its kron-factor structure.

    Same index layout as ``state.reshape(-1)``.  All factors are real, so
    the result is a real sparse matrix (~16 nonzeros per row).
    """
    L_x, L_y = op.lattice.L_x, op.lattice.L_y
    tx = op.profile_x.table(op.lattice.half_x)
    ty = op.profile_y.table(op.lattice.half_y)

    def roll(L, s):
        # (M psi)(i) = psi(i + s) with wraparound
        idx = np.arange(L)
        return sparse.csr_matrix((np.ones(L), (idx, (idx + s) % L)),
                                 shape=(L, L))

    I_x, I_y = sparse.identity(L_x), sparse.identity(L_y)
    I4 = sparse.identity(4)
    kron = sparse.kron

    C_x = (kron(sparse.diags(np.cos(tx)), kron(I_y, I4))
           + kron(sparse.diags(np.sin(tx)), kron(I_y, sparse.csr_matrix(_J_X))))
    C_y = kron(I_x, kron(sparse.diags(np.cos(ty)), I4)
               + kron(sparse.diags(np.sin(ty)), sparse.csr_matrix(_J_Y)))
    S_x = (kron(roll(L_x, +1), kron(I_y, sparse.diags([1.0, 0, 1, 0])))
           + kron(roll(L_x, -1), kron(I_y, sparse.diags([0.0, 1, 0, 1]))))
    P_y = (roll(L_y, +1) + roll(L_y, -1)) * 0.5
    Q_y = (roll(L_y, +1) - roll(L_y, -1)) * 0.5
    S_y = kron(I_x, kron(P_y, I4) + kron(Q_y, sparse.csr_matrix(_Q4)))
    return (S_y @ C_y @ S_x @ C_x).tocsr()


class Eigenpair:
    def __init__(self, energy, state, residual):
        self.energy = float(energy)
        self.state = state
        self.residual = float(residual)

    def __repr__(self):
        return (f"Eigenpair(E={self.energy:+.6e}, "
                f"residual={self.residual:.2e})")


def near_unity_states(op, count, dense_cutoff=10000, maxiter=None):
    """The `count` walk eigenpairs with quasi-energy closest to zero.

    Works on the Hermitian surrogate W = (U + U^T)/2 (real symmetric since
    the walk matrix is real): its largest eigenvalues are cos(E) for the E
    nearest zero.  Small problems are solved densely; larger ones go
    through ARPACK with a deterministic start vector.  U is then re-
    diagonalized inside the converged subspace to recover signed E and
    per-state residuals ||U psi - e^{-iE} psi||.

    Returns a list of Eigenpair sorted by |E|, states shaped (L_x, L_y, 4).
    """
    lattice = op.lattice
    n = lattice.size
    if count < 1 or count > n:
        raise ValueError(f"count must be in 1..{n}")
    U = walk_matrix_sparse(op)
    W = (U + U.T) * 0.5
    # The kept subspace must be U-invariant, which fails if the cut lands
    # inside a degenerate cos(E) multiplet (the inner eig then yields
    # spurious Ritz values anywhere inside the spectral hull).  Always
    # extend the cut to the next genuine gap in the W spectrum.
    gap_tol = 1e-9
    if n <= dense_cutoff:
        w, V = np.linalg.eigh(W.toarray())
        order = np.argsort(w)[::-1]
        w = w[order]
        j = count
        while j < n and w[j - 1] - w[j] <= gap_tol:
            j += 1
        V = V[:, order[:j]]
    else:
        rng = np.random.Generator(np.random.PCG64(20240817))
        v0 = rng.normal(size=n)
        k_sub = min(count + 8, n - 2)
        while True:
            try:
                w, V = eigsh(W, k=k_sub, which="LA", v0=v0,
                             maxiter=maxiter,
                             ncv=min(n - 1, max(4 * k_sub, 40)))
            except ArpackNoConvergence as err:
                nconv = len(err.eigenvalues)
                raise ConvergenceError(
                    f"eigensolver converged only {nconv}/{k_sub} pairs "
                    f"within the iteration budget",
                    best_residual=None) from err
            order = np.argsort(w)[::-1]
            w = w[order]
            V = V[:, order]
            j = count
            while j < k_sub and w[j - 1] - w[j] <= gap_tol:
                j += 1
            if j < k_sub or k_sub >= n - 2:
                break
            # multiplet straddles the buffer: enlarge and retry
            k_sub = min(k_sub + 16, n - 2)
        V = V[:, :j]
    # resolve U inside the W subspace: small non-Hermitian eigenproblem
    UV = U @ V
    lam, C = np.linalg.eig(V.T @ UV)
    vecs = V @ C
    vecs /= np.linalg.norm(vecs, axis=0, keepdims=True)
    E = -np.angle(lam)
    E[E == -np.pi] = np.pi
    resid = np.linalg.norm(U @ vecs - lam * vecs, axis=0)
    order = np.argsort(np.abs(E))[:count]
    return [Eigenpair(E[j], vecs[:, j].reshape(lattice.shape), resid[j])
            for j in order]


def region_mask(lattice, x_center=None, y_center=None, radius=0,
                manhattan_centers=None):
    """Boolean (L_x, L_y) site mask for localization measurements.

    Either a slab |x - x_center| <= radius (and/or |y - y_center| <=
    radius), or the union of Manhattan balls around `manhattan_centers`.
    """
    X = lattice.coords_x[:, None]
    Y = lattice.coords_y[None, :]
    if manhattan_centers is not None:
        mask = np.zeros((lattice.L_x, lattice.L_y), dtype=bool)
        for (x0, y0) in manhattan_centers:
            mask |= (np.abs(X - x0) + np.abs(Y - y0)) <= radius
        return mask
    mask = np.ones((lattice.L_x, lattice.L_y), dtype=bool)
    if x_center is not None:
        mask &= np.abs(X - x_center) <= radius
    if y_center is not None:
        mask &= np.abs(Y - y_center) <= radius
    return mask


def localization_metrics(state, regions):
    """Probability weight inside each region mask, plus the IPR.

    `state` may be a (L_x, L_y, 4) walk state or any array whose |.|^2
    summed over the last axis gives a site probability map.
    """
    P = np.sum(np.abs(state) ** 2, axis=-1)
    total = P.sum()
    weights = [float(P[mask].sum() / total) for mask in regions]
    ipr = float(np.sum((P / total) ** 2))
    return {"weights": weights, "ipr": ipr}
