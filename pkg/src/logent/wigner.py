"""Phase-space quasi-probability dynamics on a periodic (x, p) grid.

The state is a real function w(x, p), possibly negative, normalized to
integral(w dx dp) = 1, with information I = h * integral(w^2 dx dp) and
entropy S = 1 - I.  Pure states have I = 1 and obey max|w| <= 2/h, the
two-dimensional counterpart of the line-density bound.

The evolution equation is

    dw/dt + (p/m) dw/dx =
        (2 pi i / h^2) * integral( [V(x + l/2) - V(x - l/2)]
                                   * exp(2 pi i (p - p') l / h)
                                   * w(x, p') dp' dl ),

which conserves both integral(w) and integral(w^2) but not higher powers of
w.  The solver splits each step symmetrically (half kick, full transport,
half kick).  Free transport is an exact shift, diagonal in the x-conjugate
Fourier variable; the kick is, for each x column, a diagonal phase in the
p-conjugate variable with rate (2 pi / h)(V(x + l/2) - V(x - l/2)) at
l = h * nu_p.  Both substeps multiply Fourier modes by unit-modulus phases,
so each conserves both invariants to round-off, and the composition does.

For states concentrated at a single position a, the transport term drops
and the remaining kick dynamics closes in p alone.  That reduced equation
is implemented separately in delta_localized_evolve by direct quadrature of
the double integral, deliberately sharing no evolution code with the
spectral line-density path so the two can serve as oracles for each other.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .densities import DensityGrid
from .errors import DomainError, GridError, NormalizationError

QUAD_TOL = 1e-9
ADMISSIBLE_TOL = 1e-9
WRAP_TOL = 1e-10
DEFAULT_STEP_ANGLE = 0.1  # max phase advance per step with the default dt
PHASE_WARN = math.pi  # beyond this the fastest grid phase wraps within one step


@dataclass(frozen=True, eq=False)
class WignerGrid:
    """Uniform periodic phase-space sampling of a normalized distribution.

    values[i, j] approximates w(x0 + i dx, p0 + j dp).  The quadrature
    normalization is enforced within 1e-9; distributions with I > 1 are
    representable but flagged inadmissible.
    """

    values: np.ndarray
    x0: float
    dx: float
    p0: float
    dp: float
    h: float
    mass: float

    def __post_init__(self):
        arr = np.array(self.values, dtype=float)
        if arr.ndim != 2:
            raise GridError("values must be a 2-d array")
        if arr.shape[0] % 2 or arr.shape[1] % 2:
            raise GridError("grid sizes must be even")
        if not np.all(np.isfinite(arr)):
            raise GridError("values must be finite")
        if self.dx <= 0.0 or self.dp <= 0.0 or self.h <= 0.0 or self.mass <= 0.0:
            raise GridError("dx, dp, h, mass must be positive")
        total = float(arr.sum()) * self.dx * self.dp
        if abs(total - 1.0) > QUAD_TOL:
            raise NormalizationError(
                f"quadrature sum is {total:.12g}, expected 1 within {QUAD_TOL:g}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def nx(self) -> int:
        return self.values.shape[0]

    @property
    def npts(self) -> int:
        return self.values.shape[1]

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.nx)

    @property
    def p(self) -> np.ndarray:
        return self.p0 + self.dp * np.arange(self.npts)

    @property
    def total(self) -> float:
        return float(self.values.sum()) * self.dx * self.dp

    @property
    def information(self) -> float:
        return self.h * float(np.sum(self.values**2)) * self.dx * self.dp

    @property
    def entropy(self) -> float:
        return 1.0 - self.information

    @property
    def is_admissible(self) -> bool:
        return self.information <= 1.0 + ADMISSIBLE_TOL

    @property
    def amplitude_bound_satisfied(self) -> bool:
        """Diagnostic max|w| <= 2/h, meaningful for admissible pure states."""
        return float(np.max(np.abs(self.values))) <= 2.0 / self.h * (1.0 + 1e-9)


@dataclass(frozen=True, eq=False)
class PotentialSpec:
    """Potential energy profile from a small named family."""

    family: str
    params: tuple = ()

    _FAMILIES = ("constant", "linear", "harmonic", "quartic", "tabulated")

    def __post_init__(self):
        if self.family not in self._FAMILIES:
            raise DomainError(f"unknown potential family {self.family!r}")

    @classmethod
    def constant(cls, value: float = 0.0) -> "PotentialSpec":
        return cls("constant", (float(value),))

    @classmethod
    def linear(cls, slope: float) -> "PotentialSpec":
        return cls("linear", (float(slope),))

    @classmethod
    def harmonic(cls, omega: float, mass: float = 1.0) -> "PotentialSpec":
        """V(x) = mass * omega^2 * x^2 / 2."""
        return cls("harmonic", (float(omega), float(mass)))

    @classmethod
    def quartic(cls, beta: float) -> "PotentialSpec":
        """V(x) = beta * x^4."""
        return cls("quartic", (float(beta),))

    @classmethod
    def tabulated(cls, xs, vs) -> "PotentialSpec":
        xs = np.asarray(xs, dtype=float)
        vs = np.asarray(vs, dtype=float)
        if xs.ndim != 1 or xs.shape != vs.shape or xs.size < 2:
            raise DomainError("need matching 1-d tables with at least two samples")
        if np.any(np.diff(xs) <= 0.0):
            raise DomainError("table abscissae must be strictly increasing")
        xs.setflags(write=False)
        vs.setflags(write=False)
        return cls("tabulated", (xs, vs))

    def evaluate(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.family == "constant":
            v = np.full_like(x, self.params[0])
        elif self.family == "linear":
            v = self.params[0] * x
        elif self.family == "harmonic":
            omega, mass = self.params
            v = 0.5 * mass * omega**2 * x**2
        elif self.family == "quartic":
            v = self.params[0] * x**4
        else:
            xs, vs = self.params
            if np.any(x < xs[0]) or np.any(x > xs[-1]):
                raise DomainError("tabulated potential queried outside its table")
            v = np.interp(x, xs, vs)
        if not np.all(np.isfinite(v)):
            raise DomainError("potential is not finite at a sampled point")
        return v


@dataclass(frozen=True, eq=False)
class WignerRunRecord:
    """Per-step conservation diagnostics of one solver run."""

    times: np.ndarray
    total_probability: np.ndarray
    information: np.ndarray
    moment3: np.ndarray
    min_value: np.ndarray


def gaussian_pure_wigner(
    nx: int,
    npts: int,
    lx: float,
    lp: float,
    sigma_x: float,
    h: float = 1.0,
    mass: float = 1.0,
    x_center: float = 0.0,
    p_center: float = 0.0,
) -> WignerGrid:
    """Minimum-uncertainty Gaussian, sigma_x * sigma_p = h / (4 pi), I = 1.

    The domain is [-lx/2, lx/2) x [-lp/2, lp/2).  Raises GridError when a
    boundary amplitude exceeds 1e-10 of the peak (wrap-around too large).
    """
    if sigma_x <= 0.0:
        raise DomainError("sigma_x must be positive")
    sigma_p = h / (4.0 * math.pi * sigma_x)
    x0, p0 = -lx / 2.0, -lp / 2.0
    for center, lo, length, sigma in (
        (x_center, x0, lx, sigma_x),
        (p_center, p0, lp, sigma_p),
    ):
        dist = min(abs(center - lo), abs(lo + length - center))
        if math.exp(-0.5 * (dist / sigma) ** 2) > WRAP_TOL:
            raise GridError(
                "domain too small for the requested Gaussian: boundary "
                "amplitude exceeds 1e-10 of the peak"
            )
    dx, dp = lx / nx, lp / npts
    x = x0 + dx * np.arange(nx)
    p = p0 + dp * np.arange(npts)
    values = np.exp(
        -0.5 * ((x[:, None] - x_center) / sigma_x) ** 2
        - 0.5 * ((p[None, :] - p_center) / sigma_p) ** 2
    ) / (2.0 * math.pi * sigma_x * sigma_p)
    values /= values.sum() * dx * dp
    return WignerGrid(values=values, x0=x0, dx=dx, p0=p0, dp=dp, h=h, mass=mass)


def higher_moment(w: WignerGrid, r: int) -> float:
    """Dimensionless moment h^(r-1) * integral(w^r dx dp), r >= 2."""
    if not isinstance(r, (int, np.integer)) or r < 2:
        raise DomainError("moment order must be an integer >= 2")
    return float(w.h ** (r - 1) * np.sum(w.values**r) * w.dx * w.dp)


def _phase_rates(w: WignerGrid, potential: PotentialSpec):
    """Angular rates of the kick (per x, per p-mode) and transport phases."""
    lam = w.h * np.fft.fftfreq(w.npts, d=w.dp)
    x = w.x
    dv = potential.evaluate(x[:, None] + lam[None, :] / 2.0) - potential.evaluate(
        x[:, None] - lam[None, :] / 2.0
    )
    kick_rate = (2.0 * math.pi / w.h) * dv
    kick_rate[:, w.npts // 2] = 0.0  # unpaired Nyquist mode in p
    nu_x = np.fft.fftfreq(w.nx, d=w.dx)
    transport_rate = -2.0 * math.pi * nu_x[:, None] * w.p[None, :] / w.mass
    transport_rate[w.nx // 2, :] = 0.0  # unpaired Nyquist mode in x
    return kick_rate, transport_rate


def _apply_kick(values: np.ndarray, multiplier: np.ndarray) -> np.ndarray:
    """Potential kick: diagonal phases in the p-conjugate variable, per x."""
    return np.fft.ifft(np.fft.fft(values, axis=1) * multiplier, axis=1)


def _apply_transport(values: np.ndarray, multiplier: np.ndarray) -> np.ndarray:
    """Free streaming: exact shift, diagonal in the x-conjugate variable."""
    return np.fft.ifft(np.fft.fft(values, axis=0) * multiplier, axis=0)


def _run(w0: WignerGrid, potential: PotentialSpec, t: float, dt: float | None, record: bool):
    kick_rate, transport_rate = _phase_rates(w0, potential)
    max_rate = max(
        float(np.max(np.abs(kick_rate))), float(np.max(np.abs(transport_rate)))
    )
    if dt is None:
        dt = DEFAULT_STEP_ANGLE / max_rate if max_rate > 0.0 else (t if t > 0.0 else 1.0)
    if dt <= 0.0:
        raise DomainError("dt must be positive")
    if dt * max_rate > PHASE_WARN:
        warnings.warn(
            f"dt = {dt:g} advances the fastest grid phase by "
            f"{dt * max_rate:.2f} rad per step; aliasing likely",
            stacklevel=3,
        )
    n_steps = max(1, int(math.ceil(abs(t) / dt - 1e-12))) if t != 0.0 else 0
    step = t / n_steps if n_steps else 0.0
    kick_half = np.exp(1j * kick_rate * step / 2.0)
    transport = np.exp(1j * transport_rate * step)

    area = w0.dx * w0.dp
    values = w0.values.copy()
    diag = {"times": [0.0], "total": [], "info": [], "m3": [], "mn": []}

    def _record(v):
        diag["total"].append(float(v.sum()) * area)
        diag["info"].append(w0.h * float(np.sum(v * v)) * area)
        diag["m3"].append(w0.h**2 * float(np.sum(v**3)) * area)
        diag["mn"].append(float(v.min()))

    if record:
        _record(values)
    for k in range(n_steps):
        buf = _apply_kick(values, kick_half)
        buf = _apply_transport(buf, transport)
        values = _apply_kick(buf, kick_half).real
        if record:
            diag["times"].append((k + 1) * step)
            _record(values)

    final = WignerGrid(
        values=values, x0=w0.x0, dx=w0.dx, p0=w0.p0, dp=w0.dp, h=w0.h, mass=w0.mass
    )
    if not record:
        return None, final
    rec = WignerRunRecord(
        times=np.array(diag["times"]),
        total_probability=np.array(diag["total"]),
        information=np.array(diag["info"]),
        moment3=np.array(diag["m3"]),
        min_value=np.array(diag["mn"]),
    )
    return rec, final


def wigner_evolve(
    w0: WignerGrid, potential: PotentialSpec, t: float, dt: float | None = None
) -> WignerGrid:
    """Evolve by symmetric split steps (half kick, transport, half kick).

    The default dt bounds the fastest grid phase at 0.1 rad per step; a
    warning is issued when a supplied dt lets any grid phase exceed pi per
    step.  Both invariants are conserved to round-off for any dt.
    """
    _, final = _run(w0, potential, t, dt, record=False)
    return final


def wigner_run(
    w0: WignerGrid, potential: PotentialSpec, t: float, dt: float | None = None
) -> tuple[WignerRunRecord, WignerGrid]:
    """Same as wigner_evolve but records conservation diagnostics per step."""
    rec, final = _run(w0, potential, t, dt, record=True)
    return rec, final


def delta_localized_evolve(
    wbar0: DensityGrid, potential: PotentialSpec, a: float, t: float
) -> DensityGrid:
    """Momentum-only dynamics of a state concentrated at position a.

    Implements

        dwbar/dt = (i/h) * integral( [Omega(a + l/2) - Omega(a - l/2)]
                                     * exp(2 pi i (p - p') l / h)
                                     * wbar(p') dp' dl ),

    with Omega = 2 pi V / h, by direct quadrature: the l integral is
    truncated at the grid Nyquist frequency and sampled at l_k = k h / L
    (spacing h/L), the p' integral at the grid points (spacing dp), giving
    a dense antisymmetric generator that is exponentiated.  No code is
    shared with the spectral density path, so the two discretizations can
    be checked against each other.
    """
    n, dp, h = wbar0.n, wbar0.dz, wbar0.h
    if t == 0.0:
        return DensityGrid(values=wbar0.values.copy(), z0=wbar0.z0, dz=dp, h=h)
    lam = h * np.fft.fftfreq(n, d=dp)
    m_hat = (2.0 * math.pi / h) * (
        potential.evaluate(a + lam / 2.0) - potential.evaluate(a - lam / 2.0)
    )
    m_hat[n // 2] = 0.0  # unpaired Nyquist mode
    d_lam = h / (n * dp)  # lambda sample spacing
    mode_ints = np.rint(np.fft.fftfreq(n) * n).astype(int)
    offsets = np.arange(n)
    # column of the circulant: c_d = (i/h) sum_l mhat_l e^{2 pi i d l / N} dl dp
    expo = np.exp(2j * math.pi * np.outer(offsets, mode_ints) / n)
    col = (1j * d_lam * dp / h) * (expo @ m_hat)
    if float(np.max(np.abs(col.imag))) > 1e-10 * max(1.0, float(np.max(np.abs(col.real)))):
        raise DomainError("kernel quadrature produced a non-real generator")
    c = col.real
    c = (c - c[(-offsets) % n]) / 2.0  # enforce exact periodic oddness
    gen = c[(offsets[:, None] - offsets[None, :]) % n]
    values = scipy.linalg.expm(t * gen) @ wbar0.values
    return DensityGrid(values=values, z0=wbar0.z0, dz=dp, h=h)


# ---------------------------------------------------------------------------
# snapshot and diagnostics export


def write_wigner_csv(w: WignerGrid, path, meta_path=None) -> None:
    """Flat CSV (x, p, w) at 17 significant digits plus a JSON sidecar."""
    if meta_path is None:
        meta_path = str(path) + ".meta.json"
    x, p = w.x, w.p
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("x,p,w\n")
        for i in range(w.nx):
            for j in range(w.npts):
                fh.write(f"{x[i]:.16e},{p[j]:.16e},{w.values[i, j]:.16e}\n")
    meta = {
        "x0": w.x0,
        "dx": w.dx,
        "p0": w.p0,
        "dp": w.dp,
        "h": w.h,
        "mass": w.mass,
        "Nx": w.nx,
        "Np": w.npts,
    }
    with open(meta_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")


def read_wigner_csv(path, meta_path=None) -> WignerGrid:
    if meta_path is None:
        meta_path = str(path) + ".meta.json"
    with open(meta_path, "r", encoding="utf-8") as fh:
        meta = json.load(fh)
    nx, npts = int(meta["Nx"]), int(meta["Np"])
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "x,p,w":
            raise GridError("not a phase-space CSV")
        flat = [float(line.strip().split(",")[2]) for line in fh if line.strip()]
    if len(flat) != nx * npts:
        raise GridError("CSV row count disagrees with metadata shape")
    return WignerGrid(
        values=np.array(flat).reshape(nx, npts),
        x0=float(meta["x0"]),
        dx=float(meta["dx"]),
        p0=float(meta["p0"]),
        dp=float(meta["dp"]),
        h=float(meta["h"]),
        mass=float(meta["mass"]),
    )


def write_diagnostics_csv(rec: WignerRunRecord, path) -> None:
    """Time series (t, sum, I, moment3) at 15 significant digits."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t,sum,I,moment3\n")
        for row in zip(rec.times, rec.total_probability, rec.information, rec.moment3):
            fh.write(",".join(f"{v:.14e}" for v in row) + "\n")
