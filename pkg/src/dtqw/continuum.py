"""Continuum-side oracles: lattice Dirac Hamiltonians and analytic states.

The walk factors are exact exponentials once momentum is realized as the
Fourier-spectral derivative on the periodic lattice:

    S_x = exp(+i a p_x sigma^z)          C_x = exp(-i theta_x sigma^y)
    S_y = exp(+i a p_y tau^z sigma^x)    C_y = exp(-i theta_y tau^y sigma^x)

so one walk step is the first-order product formula for the Hamiltonian

    H = -eps sigma^z p_x + m_x(x) sigma^y
        - eps tau^z sigma^x p_y + m_y(y) tau^y sigma^x          (a = eps*dt)

i.e. H = H_x (x) tau^0 + sigma^x (x) H_y with the 1D factors

    H_mu = -eps s^z p_mu + m_mu s^y,   {s^x, H_mu} = 0.

With a linear mass m = beta*x this is a Dirac oscillator: H^2 restricted to
a s^x sector is a shifted harmonic oscillator with omega = 2*eps*beta, the
spectrum is +-sqrt(n*omega), and the zero mode is the Gaussian
(-1, 1)^T exp(-beta x^2 / 2 eps) living in the s^x = -1 sector.

Internal tensor products follow the walk basis c = 2*tau + sigma, so a
product written A_sigma (x) B_tau is the matrix kron(B_tau, A_sigma).
Position-space operators act on flattened (x[, y[, z]], internal) arrays
with the internal index fastest.
"""

import numpy as np

SIGMA_0 = np.eye(2)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])


class OracleParams:
    """Scales tying the walk to its continuum limit.

    eps   : velocity scale a/dt (lattice units: 1)
    beta  : mass slope, equal to the coin slope b (dt = 1)
    m0    : wall mass magnitude
    omega : oscillator frequency 2*eps*beta
    m_S   : Schroedinger mass from eps^2 = 1/(2 m_S)
    """

    def __init__(self, eps=1.0, beta=np.pi / 20, m0=None):
        if eps <= 0 or beta <= 0:
            raise ValueError("eps and beta must be positive")
        if m0 is not None and m0 <= 0:
            raise ValueError("m0 must be positive when given")
        self.eps = float(eps)
        self.beta = float(beta)
        self.m0 = None if m0 is None else float(m0)

    @property
    def omega(self):
        return 2.0 * self.eps * self.beta

    @property
    def m_S(self):
        return 1.0 / (2.0 * self.eps ** 2)

    @property
    def length(self):
        """Oscillator length sqrt(eps/beta)."""
        return np.sqrt(self.eps / self.beta)

    def __repr__(self):
        return (f"OracleParams(eps={self.eps}, beta={self.beta}, "
                f"m0={self.m0})")


def _check_odd(L):
    L = int(L)
    if L < 3 or L % 2 == 0:
        raise ValueError(f"axis length must be odd and >= 3, got {L} "
                         "(odd L keeps the coordinate range symmetric and "
                         "the momentum grid free of an unpaired mode)")
    return L


def coords(L):
    L = _check_odd(L)
    return np.arange(-(L // 2), L // 2 + 1)


def momentum_matrix(L, scheme="spectral"):
    """Hermitian momentum p = -i d/dx on the periodic L-site axis.

    scheme='spectral': exact on plane waves (diagonal k in the Fourier
    basis), which makes exp(+-i a p) the exact one-site translation.
    scheme='central': the usual antisymmetric difference -i(f(x+1)-f(x-1))/2.
    """
    L = _check_odd(L)
    if scheme == "spectral":
        k = 2.0 * np.pi * np.fft.fftfreq(L)
        P = np.fft.ifft(k[:, None] * np.fft.fft(np.eye(L), axis=0), axis=0)
        return 0.5 * (P + P.conj().T)   # symmetrize away rounding
    if scheme == "central":
        # (P f)(x) = -i (f(x+1) - f(x-1))/2
        P = np.zeros((L, L), dtype=complex)
        idx = np.arange(L)
        P[idx, (idx + 1) % L] = -0.5j
        P[idx, (idx - 1) % L] = 0.5j
        return P
    raise ValueError(f"unknown derivative scheme {scheme!r}")


def mass_array(mass, L):
    """Mass profile as an array over coords(L).

    Accepts an ndarray of length L, a callable m(x), a scalar, or an
    AngleProfile (theta = m*dt with dt = 1).
    """
    L = _check_odd(L)
    x = coords(L)
    if hasattr(mass, "table"):          # AngleProfile
        return np.asarray(mass.table(L // 2), dtype=float)
    if callable(mass):
        return np.asarray([float(mass(xi)) for xi in x])
    m = np.asarray(mass, dtype=float)
    if m.ndim == 0:
        return np.full(L, float(m))
    if m.shape != (L,):
        raise ValueError(f"mass array has shape {m.shape}, expected ({L},)")
    return m


class LatticeHamiltonian:
    """A dense Hermitian lattice Hamiltonian plus its construction data."""

    def __init__(self, matrix, dims, masses, params, scheme):
        self.matrix = matrix
        self.dims = tuple(dims)          # axis lengths
        self.masses = masses             # list of per-axis mass arrays
        self.params = params
        self.scheme = scheme
        herm = np.max(np.abs(matrix - matrix.conj().T))
        if herm > 1e-12:
            raise ValueError(f"assembled matrix is not Hermitian "
                             f"(max deviation {herm:.3g})")

    @property
    def dim(self):
        return len(self.dims)

    @property
    def size(self):
        return self.matrix.shape[0]

    def eigh(self):
        return np.linalg.eigh(self.matrix)

    def __repr__(self):
        return (f"LatticeHamiltonian(dim={self.dim}, dims={self.dims}, "
                f"scheme={self.scheme!r})")


def _kron(*factors):
    out = np.array([[1.0 + 0.0j]])
    for f in factors:
        out = np.kron(out, f)
    return out


def dirac_1d_factor(mass, params, L, scheme="spectral"):
    """The 2-component factor H = -eps s^z p + m(x) s^y on (x, spinor)."""
    L = _check_odd(L)
    p = momentum_matrix(L, scheme)
    m = mass_array(mass, L)
    H = -params.eps * np.kron(p, SIGMA_Z) + np.kron(np.diag(m), SIGMA_Y)
    return H, m


def build_dirac(dim, masses, params, L_x, L_y=None, scheme="spectral"):
    """Lattice Dirac Hamiltonian in 1 or 2 dimensions.

    Parameters
    ----------
    dim : 1 or 2
    masses : mass profile (dim=1) or pair (m_x, m_y) of profiles (dim=2);
        each may be an array over coords, a callable, a scalar, or an
        AngleProfile
    params : OracleParams
    L_x, L_y : odd axis lengths (L_y defaults to L_x)
    scheme : 'spectral' (default) or 'central' derivative

    Returns a LatticeHamiltonian.  dim=2 assembles

        H = H_x (x) tau^0 + sigma^x (x) H_y

    over flattened (x, y, tau, sigma) with sigma fastest, which matches the
    walk's (x, y, c) state layout.
    """
    if dim == 1:
        H, m = dirac_1d_factor(masses, params, L_x, scheme)
        return LatticeHamiltonian(H, (L_x,), [m], params, scheme)
    if dim != 2:
        raise ValueError(f"dim must be 1 or 2, got {dim}")
    if L_y is None:
        L_y = L_x
    L_x, L_y = _check_odd(L_x), _check_odd(L_y)
    try:
        m_x_in, m_y_in = masses
    except (TypeError, ValueError):
        raise ValueError("dim=2 needs a pair of mass profiles (m_x, m_y)")
    p_x = momentum_matrix(L_x, scheme)
    p_y = momentum_matrix(L_y, scheme)
    m_x = mass_array(m_x_in, L_x)
    m_y = mass_array(m_y_in, L_y)
    I_x, I_y = np.eye(L_x), np.eye(L_y)
    H = (-params.eps * _kron(p_x, I_y, SIGMA_0, SIGMA_Z)
         + _kron(np.diag(m_x), I_y, SIGMA_0, SIGMA_Y)
         - params.eps * _kron(I_x, p_y, SIGMA_Z, SIGMA_X)
         + _kron(I_x, np.diag(m_y), SIGMA_Y, SIGMA_X))
    return LatticeHamiltonian(H, (L_x, L_y), [m_x, m_y], params, scheme)


def square_decomposition_check(H2):
    """Residual of (H^(2))^2 against its Schroedinger direct-sum form.

    Squaring the 2D Hamiltonian must produce

        H_Sx (x) tau^0 + sigma^0 (x) H_Sy,
        H_Smu = eps^2 p^2 + m_mu^2 + i eps s^x [p, m_mu],

    with every sigma-tau cross term cancelling (the x factor anticommutes
    with sigma^x).  Returns the max-norm residual; the commutator term is
    kept as the exact lattice commutator, which for a discontinuous wall
    mass concentrates at the wall sites.
    """
    if H2.dim != 2:
        raise ValueError("square_decomposition_check needs a dim=2 Hamiltonian")
    L_x, L_y = H2.dims
    eps = H2.params.eps
    m_x, m_y = H2.masses
    p_x = momentum_matrix(L_x, H2.scheme)
    p_y = momentum_matrix(L_y, H2.scheme)

    def schroedinger_1d(p, m):
        comm = p @ np.diag(m) - np.diag(m) @ p
        return (np.kron(eps ** 2 * (p @ p) + np.diag(m ** 2), SIGMA_0)
                + 1j * eps * np.kron(comm, SIGMA_X))

    # embed H_Sx acting on (x, sigma) and H_Sy acting on (y, tau) into the
    # full (x, y, tau, sigma) layout; row index order a,y,u,s / col b,z,v,t
    hsx4 = schroedinger_1d(p_x, m_x).reshape(L_x, 2, L_x, 2)
    hsy4 = schroedinger_1d(p_y, m_y).reshape(L_y, 2, L_y, 2)
    full_x = np.einsum("asbt,yz,uv->ayusbzvt", hsx4, np.eye(L_y), np.eye(2))
    full_y = np.einsum("yuzv,ab,st->ayusbzvt", hsy4, np.eye(L_x), np.eye(2))
    n = L_x * L_y * 4
    target = full_x.reshape(n, n) + full_y.reshape(n, n)
    sq = H2.matrix @ H2.matrix
    return float(np.max(np.abs(sq - target)))


def hermite_state(n, params, L):
    """n-th harmonic oscillator eigenfunction sampled on the lattice.

    Generated by the ladder recurrence
    psi_{n+1} proportional to (-sqrt(eps/beta) d/dx + sqrt(beta/eps) x) psi_n
    with the spectral derivative, starting from the Gaussian
    psi_0 ~ exp(-beta x^2 / 2 eps); each level is renormalized on the
    lattice.  Errors out when the lattice cannot hold the tail.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    L = _check_odd(L)
    x = coords(L).astype(float)
    lam = params.length
    psi = np.exp(-x ** 2 / (2.0 * lam ** 2))
    psi = psi / np.linalg.norm(psi)
    if n > 0:
        p = momentum_matrix(L)
        ddx = 1j * p                    # d/dx = i p since p = -i d/dx
        for _ in range(n):
            psi = -lam * (ddx @ psi) + (x / lam) * psi
            psi = psi / np.linalg.norm(psi)
    tail = float(np.abs(psi[0]) ** 2 + np.abs(psi[-1]) ** 2)
    if tail > 1e-6:
        raise ValueError(f"lattice L={L} too small for oscillator level "
                         f"n={n}: boundary probability {tail:.3g} > 1e-6")
    return psi


def dirac_oscillator_eigenstate(n, sign, params, L):
    """Analytic eigenstates of the 1D linear-mass (oscillator) Hamiltonian.

    sign '+'/'-' (n >= 1): energy +-sqrt(n*omega), spinor
        (1/sqrt2) (|n-1>, |n-1>)^T +- (i/sqrt2) (-|n>, |n>)^T
    sign 0 (n ignored): the zero mode (1/sqrt2) (-|0>, |0>)^T.

    Returns an (L, 2) complex array, unit lattice norm.
    """
    L = _check_odd(L)
    out = np.zeros((L, 2), dtype=complex)
    if sign == 0 or sign == "0":
        h0 = hermite_state(0, params, L)
        out[:, 0] = -h0
        out[:, 1] = h0
    elif sign in (+1, -1, "+", "-"):
        s = +1 if sign in (+1, "+") else -1
        if n < 1:
            raise ValueError("n must be >= 1 for the +- branches")
        lo = hermite_state(n - 1, params, L)
        hi = hermite_state(n, params, L)
        out[:, 0] = lo - s * 1j * hi
        out[:, 1] = lo + s * 1j * hi
    else:
        raise ValueError(f"sign must be '+', '-' or 0, got {sign!r}")
    return out / np.linalg.norm(out)


class CombinedEigenstate:
    """Mixing data for building a 2D eigenstate from 1D factors.

    The Ansatz  Psi = (gamma + delta s^x) (psi_x (x) psi_y)  with
    H psi_x = E_x psi_x, H psi_y = E_y psi_y and s = <psi_x|s^x|psi_x>
    is an exact eigenstate of H^(2) at energy E = +-sqrt(E_x^2 + E_y^2);
    (gamma, delta) = A (cos phi, sin phi) with tan 2phi = E_y / E_x and
    the normalization A^2 (1 + s sin 2phi) = 1.
    """

    def __init__(self, E_x, E_y, E, phi, A, s):
        self.E_x = E_x
        self.E_y = E_y
        self.E = E
        self.phi = phi
        self.A = A
        self.s = s

    @property
    def gamma(self):
        return self.A * np.cos(self.phi)

    @property
    def delta(self):
        return self.A * np.sin(self.phi)

    def __repr__(self):
        return (f"CombinedEigenstate(E={self.E:.6g}, phi={self.phi:.6g}, "
                f"A={self.A:.6g}, s={self.s:.6g})")


def combine_2d(E_x, E_y, s, sign=+1):
    """Solve the 2D combination problem for given 1D energies.

    sign selects the E = +sqrt(E_x^2+E_y^2) or the -sqrt branch; the
    negative branch negates both projections (E_x = E cos 2phi,
    E_y = E sin 2phi continue to hold).  Errors out when the combination
    is non-normalizable (1 + s sin 2phi <= 0).
    """
    if E_x == 0.0 and E_y == 0.0:
        raise ValueError("(E_x, E_y) = (0, 0): the zero mode does not mix; "
                         "use the product of 1D zero modes directly")
    if not -1.0 <= s <= 1.0:
        raise ValueError(f"s must be in [-1, 1], got {s}")
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    E = sign * float(np.hypot(E_x, E_y))
    two_phi = np.arctan2(sign * E_y, sign * E_x)
    phi = 0.5 * two_phi
    denom = 1.0 + s * np.sin(two_phi)
    if denom <= 1e-12:
        raise ValueError(
            f"combination not normalizable: 1 + s*sin(2phi) = {denom:.3g} <= 0")
    A = 1.0 / np.sqrt(denom)
    return CombinedEigenstate(float(E_x), float(E_y), E, float(phi),
                              float(A), float(s))


def analytic_zero_mode_2d(kind, params, lattice, center=(0, 0)):
    """Closed-form 2D zero modes sampled on the walk lattice.

    kind='gaussian': spinor (-1,1) (x) (-1,1) times
        exp(-beta (x^2+y^2) / 2 eps)   (the oscillator ground state).
    kind='corner': spinor (1,1) (x) (1,1) times
        exp(-(m0/eps)(|x-x0| + |y-y0|)), the product of two wall-bound
        states, recentered at the wall corner `center`.

    Returns a normalized (L_x, L_y, 4) array; errors out when the tail at
    the lattice boundary exceeds 1e-8.
    """
    xs = lattice.coords_x.astype(float)
    ys = lattice.coords_y.astype(float)
    if kind == "gaussian":
        fx = np.exp(-params.beta * xs ** 2 / (2.0 * params.eps))
        fy = np.exp(-params.beta * ys ** 2 / (2.0 * params.eps))
        spinor = np.kron([-1.0, 1.0], [-1.0, 1.0])   # tau (x) sigma = (+,-,-,+)
    elif kind == "corner":
        if params.m0 is None:
            raise ValueError("corner zero mode needs params.m0")
        x0, y0 = center
        kappa = params.m0 / params.eps
        fx = np.exp(-kappa * np.abs(xs - x0))
        fy = np.exp(-kappa * np.abs(ys - y0))
        spinor = np.kron([1.0, 1.0], [1.0, 1.0])
    else:
        raise ValueError(f"kind must be 'gaussian' or 'corner', got {kind!r}")
    psi = fx[:, None, None] * fy[None, :, None] * spinor[None, None, :]
    psi = psi.astype(complex)
    psi /= np.linalg.norm(psi)
    P = np.sum(np.abs(psi) ** 2, axis=2)
    tail = float(P[0, :].sum() + P[-1, :].sum()
                 + P[1:-1, 0].sum() + P[1:-1, -1].sum())
    if tail > 1e-8:
        raise ValueError(f"zero-mode tail at the lattice boundary is "
                         f"{tail:.3g} > 1e-8; enlarge the lattice")
    return psi


def jr_edge_state(m0, eps, L):
    """Bound state at a mass wall: (1,1)/sqrt2 * exp(-m0 |x| / eps).

    The wall sits at x = 0 (recenter with np.roll for walls elsewhere);
    probability falls by exp(-2 m0 / eps) per site.  Returns (L, 2), unit
    norm.
    """
    if m0 <= 0:
        raise ValueError("m0 must be positive")
    L = _check_odd(L)
    x = coords(L).astype(float)
    env = np.exp(-m0 * np.abs(x) / eps)
    out = np.stack([env, env], axis=1).astype(complex) / np.sqrt(2.0)
    return out / np.linalg.norm(out)


def jr_scattering(k_x, m0, eps=1.0):
    """Reflection/transmission data against a mass wall.

    With tan 2phi = m0 / (eps k_x): B/A = -sin 2phi, C/A = -cos 2phi and
    E_x = +sqrt((eps k_x)^2 + m0^2); flux conservation |B/A|^2 + |C/A|^2 = 1
    holds identically.
    """
    if k_x <= 0:
        raise ValueError("k_x must be positive")
    two_phi = np.arctan2(m0, eps * k_x)
    B_over_A = complex(-np.sin(two_phi))
    C_over_A = complex(-np.cos(two_phi))
    E_x = float(np.hypot(eps * k_x, m0))
    return B_over_A, C_over_A, E_x


def dispersion_reference(case, k, params):
    """Reference energy curves for the three wall geometries.

    case 'a': single wall seen from the scattering side -- a zero mode at
        E=0 plus continua +-sqrt((eps k)^2 + m0^2) with gap edges +-m0.
    case 'b': dispersion along the wall -- edge branches +-eps*k inside the
        bulk continua +-sqrt((eps k)^2 + m0^2).
    case 'c': two crossed walls -- zero mode, wall continua starting at
        +-m0, and the doubled-mass continua +-sqrt((eps k)^2 + 2 m0^2)
        starting at +-sqrt(2) m0.
    """
    if params.m0 is None:
        raise ValueError("dispersion_reference needs params.m0")
    k = np.atleast_1d(np.asarray(k, dtype=float))
    eps, m0 = params.eps, params.m0
    bulk = np.sqrt((eps * k) ** 2 + m0 ** 2)
    if case == "a":
        return {"k": k, "zero_mode": 0.0,
                "upper": bulk, "lower": -bulk, "gap_edge": m0}
    if case == "b":
        return {"k": k, "edge_up": eps * k, "edge_down": -eps * k,
                "upper": bulk, "lower": -bulk, "gap_edge": m0}
    if case == "c":
        bulk2 = np.sqrt((eps * k) ** 2 + 2.0 * m0 ** 2)
        return {"k": k, "zero_mode": 0.0,
                "edge_upper": bulk, "edge_lower": -bulk,
                "bulk_upper": bulk2, "bulk_lower": -bulk2,
                "gap_edge": m0, "second_edge": np.sqrt(2.0) * m0}
    raise ValueError(f"case must be 'a', 'b' or 'c', got {case!r}")


def _expm_factor(H, t):
    """exp(-i H t) for Hermitian H via eigendecomposition."""
    w, V = np.linalg.eigh(H)
    return (V * np.exp(-1j * w * t)) @ V.conj().T


def trotter_error(mass, params, L, dt, t, dim=1, psi0=None, scheme="spectral"):
    """Splitting error of the walk-style product formula at step size dt.

    Scales the walk to step dt (shift distance eps*dt realized spectrally,
    coin angles m*dt), applies t/dt product steps to psi0 and compares with
    the exact propagator exp(-i H t) of the same lattice Hamiltonian.
    Returns the 2-norm of the difference.

    dim=1 uses the two-factor product exp(-iK dt) exp(-iM dt); dim=2 the
    walk's four-factor order exp(-iK_y dt) exp(-iM_y dt) exp(-iK_x dt)
    exp(-iM_x dt).  With m = 0 the product is exact for any dt.
    """
    steps = t / dt
    if abs(steps - round(steps)) > 1e-9:
        raise ValueError(f"t/dt = {steps:.6g} is not an integer; choose a "
                         "commensurate step")
    steps = int(round(steps))
    if dim == 1:
        H = build_dirac(1, mass, params, L, scheme=scheme)
        p = momentum_matrix(L, scheme)
        K = -params.eps * np.kron(p, SIGMA_Z)
        M = np.kron(np.diag(H.masses[0]), SIGMA_Y)
        # application order: mass rotation first, then the kinetic shift,
        # matching a coin-then-shift walk step
        factors = [_expm_factor(M, dt), _expm_factor(K, dt)]
        if psi0 is None:
            g = np.exp(-(coords(L) - 2.0) ** 2
                       * params.beta / (2.0 * params.eps))
            psi0 = np.kron(g, [1.0, 0.0]).astype(complex)
    elif dim == 2:
        H = build_dirac(2, mass, params, L, scheme=scheme)
        L_x, L_y = H.dims
        p_x = momentum_matrix(L_x, scheme)
        p_y = momentum_matrix(L_y, scheme)
        I_x, I_y = np.eye(L_x), np.eye(L_y)
        K_x = -params.eps * _kron(p_x, I_y, SIGMA_0, SIGMA_Z)
        M_x = _kron(np.diag(H.masses[0]), I_y, SIGMA_0, SIGMA_Y)
        K_y = -params.eps * _kron(I_x, p_y, SIGMA_Z, SIGMA_X)
        M_y = _kron(I_x, np.diag(H.masses[1]), SIGMA_Y, SIGMA_X)
        factors = [_expm_factor(M_x, dt), _expm_factor(K_x, dt),
                   _expm_factor(M_y, dt), _expm_factor(K_y, dt)]
        if psi0 is None:
            gx = np.exp(-(coords(L_x) - 2.0) ** 2
                        * params.beta / (2.0 * params.eps))
            gy = np.exp(-coords(L_y) ** 2 * params.beta / (2.0 * params.eps))
            psi0 = np.kron(np.kron(gx, gy), [1.0, 0.0, 0.0, 0.0]).astype(complex)
    else:
        raise ValueError(f"dim must be 1 or 2, got {dim}")
    psi0 = np.asarray(psi0, dtype=complex).ravel()
    psi0 = psi0 / np.linalg.norm(psi0)

    step = np.eye(H.size, dtype=complex)
    for f in factors:
        step = f @ step
    psi = psi0.copy()
    for _ in range(steps):
        psi = step @ psi
    ref = _expm_factor(H.matrix, t) @ psi0
    return float(np.linalg.norm(psi - ref))


def topo_index(m1, m2):
    """nu = 1 iff the masses on the two sides of a wall differ in sign."""
    if m1 == 0.0 or m2 == 0.0:
        raise ValueError("topological index undefined for zero mass")
    return 1 if np.sign(m1) != np.sign(m2) else 0


def topo_product(nus):
    """Product of per-axis indices: nonzero only when every factor is."""
    out = 1
    for nu in nus:
        if nu not in (0, 1):
            raise ValueError(f"indices must be 0 or 1, got {nu}")
        out *= nu
    return out


class ChiralSet:
    """1D Hamiltonian blocks H_1..H_n and chiral operators G_1..G_{n-1}.

    Each block acts on (axis_m, 2) with its own mass profile; each G is a
    2x2 involution expected to anticommute with its block's internal part.
    """

    def __init__(self, masses, params, Ls, gammas=None, scheme="spectral"):
        self.n = len(masses)
        if self.n not in (2, 3):
            raise ValueError("2 or 3 blocks supported")
        Ls = [_check_odd(L) for L in (Ls if np.iterable(Ls)
                                      else [Ls] * self.n)]
        if len(Ls) != self.n:
            raise ValueError("need one axis length per block")
        self.Ls = Ls
        self.params = params
        self.scheme = scheme
        self.mass_arrays = [mass_array(m, L) for m, L in zip(masses, Ls)]
        if gammas is None:
            gammas = [SIGMA_X] * (self.n - 1)
        self.gammas = [np.asarray(g, dtype=complex) for g in gammas]
        if len(self.gammas) != self.n - 1:
            raise ValueError(f"need {self.n - 1} chiral operators, "
                             f"got {len(self.gammas)}")

    def block(self, m):
        """Dense H_m on (axis_m, 2)."""
        p = momentum_matrix(self.Ls[m], self.scheme)
        return (-self.params.eps * np.kron(p, SIGMA_Z)
                + np.kron(np.diag(self.mass_arrays[m]), SIGMA_Y))


def build_higher_order(n, chiral_set):
    """Assemble H^(n) from anticommuting blocks; n in {2, 3}.

    The m-th term carries G_1 ... G_{m-1} on the internal slots below its
    own and H_m on slot m:

        H^(n) = sum_m  G_1 (x) ... (x) G_{m-1} (x) H_m (x) 1 (x) ... (x) 1

    (slot-1 factor leftmost; in matrix form the internal kron chain runs
    from the highest slot down, matching the walk layout (x, y[, z], ...,
    slot2, slot1)).  Returns (LatticeHamiltonian, report dict); raises when
    a chiral operator fails to anticommute with its block, naming the pair.
    """
    cs = chiral_set
    if n != cs.n:
        raise ValueError(f"n={n} but the chiral set has {cs.n} blocks")
    report = {"anticommutators": [], "involutions": []}
    for i, G in enumerate(cs.gammas):
        r_inv = float(np.max(np.abs(G @ G - np.eye(2))))
        report["involutions"].append(r_inv)
        if r_inv > 1e-12:
            raise ValueError(f"Gamma_{i + 1}^2 != 1 (residual {r_inv:.3g})")
        block = cs.block(i)
        G_full = np.kron(np.eye(cs.Ls[i]), G)
        r_anti = float(np.max(np.abs(G_full @ block + block @ G_full)))
        report["anticommutators"].append(r_anti)
        if r_anti > 1e-10:
            raise ValueError(f"{{Gamma_{i + 1}, H_{i + 1}}} != 0 "
                             f"(residual {r_anti:.3g}); the construction "
                             "requires anticommuting blocks")

    eye2 = np.eye(2)
    size = int(np.prod(cs.Ls)) * 2 ** n
    H = np.zeros((size, size), dtype=complex)
    for m in range(n):
        p = momentum_matrix(cs.Ls[m], cs.scheme)
        for site_part, internal_part in (
                (p, -cs.params.eps * SIGMA_Z),
                (np.diag(cs.mass_arrays[m]), SIGMA_Y)):
            sites = [np.eye(L) for L in cs.Ls]
            sites[m] = site_part
            # internal slot j (1-based, fastest kron factor = slot 1):
            # Gamma_j below the block's own slot, the block part at slot m,
            # identity above
            slots = list(cs.gammas[:m]) + [internal_part] + [eye2] * (n - m - 1)
            H += _kron(*sites, *slots[::-1])
    H = LatticeHamiltonian(H, tuple(cs.Ls),
                           list(cs.mass_arrays), cs.params, cs.scheme)
    if n == 2:
        ref = build_dirac(2, (cs.mass_arrays[0], cs.mass_arrays[1]),
                          cs.params, cs.Ls[0], cs.Ls[1], cs.scheme)
        dev = float(np.max(np.abs(H.matrix - ref.matrix)))
        report["matches_dirac_2d"] = dev
        if dev > 1e-12:
            raise ValueError(f"n=2 assembly deviates from the direct 2D "
                             f"build by {dev:.3g}")
    return H, report
