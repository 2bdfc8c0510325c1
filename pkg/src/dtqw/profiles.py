"""Coin-angle profiles theta(x) and their little specification grammar.

Three variants cover every experiment in the package:

* ``Constant(theta)`` -- uniform angle.
* ``LinearSaturated(b, x_c, theta_sat)`` -- theta = b*x inside |x| <= x_c,
  clamped to sign(x)*theta_sat outside (the walk analogue of a linear
  potential / harmonic trap).
* ``DomainWall(theta1, theta2, L_wall)`` -- theta1 for |x| <= L_wall,
  theta2 for |x| > L_wall (two walls on the periodic ring, at +-L_wall).

Any profile can carry a seeded uniform perturbation on [-W, W], drawn
independently per site in ascending coordinate order from a PCG64 stream,
so disorder realizations are bit-reproducible.

Profiles are evaluated on the symmetric coordinate range -half..+half of a
lattice axis; the half-width is an argument because the noise realization
covers the whole axis.

Grammar (used by the CLI and config files)::

    constant:<theta>
    linear:<b>:<x_c>:<theta_sat>
    wall:<theta1>:<theta2>:<L>
    ... optionally followed by +noise:<W>:<seed>

Angles parse as decimals or rational multiples of pi: ``pi/20``, ``-pi/3``,
``3pi/4``, ``2*pi/5``, ``0.25``.
"""

import re

import numpy as np


def parse_angle(text):
    """Parse an angle given as a decimal or a rational multiple of pi.

    Accepted forms: ``0.3``, ``-1.2e-3``, ``pi``, ``-pi``, ``pi/50``,
    ``3pi/4``, ``2*pi/5``.
    """
    s = str(text).strip().lower().replace(" ", "")
    if "pi" in s:
        m = re.fullmatch(r"(-?)(\d+(?:\.\d+)?)?\*?pi(?:/(\d+(?:\.\d+)?))?", s)
        if m is None:
            raise ValueError(f"cannot parse angle {text!r}; expected forms "
                             "like 'pi/20', '-pi/3', '3pi/4' or a decimal")
        sign = -1.0 if m.group(1) == "-" else 1.0
        num = float(m.group(2)) if m.group(2) else 1.0
        den = float(m.group(3)) if m.group(3) else 1.0
        return sign * num * np.pi / den
    try:
        return float(s)
    except ValueError:
        raise ValueError(f"cannot parse angle {text!r}; expected forms "
                         "like 'pi/20', '-pi/3', '3pi/4' or a decimal") from None


def _fmt(x):
    # repr round-trips doubles exactly, and stays short for simple values
    return repr(float(x))


class AngleProfile:
    """Base class: a site-dependent coin angle with optional seeded noise."""

    def __init__(self, noise_amplitude=0.0, noise_seed=0):
        self.noise_amplitude = float(noise_amplitude)
        self.noise_seed = int(noise_seed)
        self._tables = {}

    def base_value(self, x):
        raise NotImplementedError

    def with_noise(self, W, seed):
        """Copy of this profile carrying a uniform [-W, W] perturbation."""
        import copy
        p = copy.copy(self)
        p.noise_amplitude = float(W)
        p.noise_seed = int(seed)
        p._tables = {}
        return p

    def table(self, half_width):
        """Angles over the full axis, site coordinates -half..+half ascending.

        The noise draw covers the whole axis in this order, which pins down
        the realization for a given (W, seed, half_width).
        """
        half_width = int(half_width)
        if half_width not in self._tables:
            x = np.arange(-half_width, half_width + 1)
            theta = np.asarray(self.base_value(x), dtype=float)
            if self.noise_amplitude > 0.0:
                rng = np.random.Generator(np.random.PCG64(self.noise_seed))
                theta = theta + rng.uniform(-self.noise_amplitude,
                                            self.noise_amplitude, size=x.size)
            theta.setflags(write=False)
            self._tables[half_width] = theta
        return self._tables[half_width]

    # --- grammar -------------------------------------------------------

    def _base_spec(self):
        raise NotImplementedError

    def to_spec_string(self):
        s = self._base_spec()
        if self.noise_amplitude > 0.0:
            s += f"+noise:{_fmt(self.noise_amplitude)}:{self.noise_seed}"
        return s

    def __repr__(self):
        return f"{type(self).__name__}({self.to_spec_string()!r})"

    def __eq__(self, other):
        return (type(self) is type(other)
                and self.to_spec_string() == other.to_spec_string())


class Constant(AngleProfile):
    def __init__(self, theta, **kw):
        super().__init__(**kw)
        self.theta = float(theta)

    def base_value(self, x):
        return np.full(np.shape(x), self.theta)

    def _base_spec(self):
        return f"constant:{_fmt(self.theta)}"


class LinearSaturated(AngleProfile):
    """theta(x) = b*x for |x| <= x_c, sign(x)*theta_sat beyond."""

    def __init__(self, b, x_c, theta_sat, **kw):
        super().__init__(**kw)
        self.b = float(b)
        self.x_c = int(x_c)
        self.theta_sat = float(theta_sat)
        if abs(self.b) * self.x_c > self.theta_sat + 1e-12:
            raise ValueError(
                f"linear part exceeds the saturation value: |b|*x_c = "
                f"{abs(self.b) * self.x_c:g} > theta_sat = {self.theta_sat:g}")

    def base_value(self, x):
        x = np.asarray(x)
        return np.where(np.abs(x) <= self.x_c, self.b * x,
                        np.sign(x) * self.theta_sat)

    def _base_spec(self):
        return f"linear:{_fmt(self.b)}:{self.x_c}:{_fmt(self.theta_sat)}"


class DomainWall(AngleProfile):
    """theta1 inside |x| <= L_wall, theta2 outside.

    The sites at |x| = L_wall exactly take the inner value theta1; the sign
    flip therefore sits on the bonds just outside +-L_wall.
    """

    def __init__(self, theta1, theta2, L_wall, **kw):
        super().__init__(**kw)
        self.theta1 = float(theta1)
        self.theta2 = float(theta2)
        self.L_wall = int(L_wall)

    def base_value(self, x):
        x = np.asarray(x)
        return np.where(np.abs(x) <= self.L_wall, self.theta1, self.theta2)

    def _base_spec(self):
        return f"wall:{_fmt(self.theta1)}:{_fmt(self.theta2)}:{self.L_wall}"


def eval_profile(profile, x, half_width):
    """Angle at site x on an axis of half-width `half_width` (noise included).

    Raises for |x| beyond the axis range.
    """
    x = int(x)
    half_width = int(half_width)
    if abs(x) > half_width:
        raise ValueError(f"site x={x} outside the axis range +-{half_width}")
    return float(profile.table(half_width)[x + half_width])


def parse_profile(text):
    """Parse the profile grammar; see the module docstring."""
    s = str(text).strip()
    noise = None
    if "+noise:" in s:
        s, noise_part = s.split("+noise:", 1)
        fields = noise_part.split(":")
        if len(fields) != 2:
            raise ValueError(f"bad noise suffix in {text!r}; "
                             "expected +noise:<W>:<seed>")
        noise = (float(fields[0]), int(fields[1]))
    parts = s.split(":")
    kind = parts[0].lower()
    try:
        if kind == "constant" and len(parts) == 2:
            prof = Constant(parse_angle(parts[1]))
        elif kind == "linear" and len(parts) == 4:
            prof = LinearSaturated(parse_angle(parts[1]), int(parts[2]),
                                   parse_angle(parts[3]))
        elif kind == "wall" and len(parts) == 4:
            prof = DomainWall(parse_angle(parts[1]), parse_angle(parts[2]),
                              int(parts[3]))
        else:
            # a bare angle is shorthand for a constant profile
            if len(parts) == 1:
                prof = Constant(parse_angle(parts[0]))
            else:
                raise ValueError
    except ValueError as err:
        detail = f" ({err})" if str(err) else ""
        raise ValueError(
            f"cannot parse profile {text!r}; expected constant:<theta>, "
            "linear:<b>:<x_c>:<theta_sat>, wall:<theta1>:<theta2>:<L> "
            f"or a bare angle, optionally +noise:<W>:<seed>{detail}") from None
    if noise is not None:
        prof = prof.with_noise(*noise)
    return prof
