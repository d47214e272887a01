"""Finite-dimensional dynamics that conserve total probability and information.

The probability vector rotates: dp/dt = rate * M p with M antisymmetric and
all row and column sums zero.  Antisymmetry makes p.(Mp) = 0, so the norm
(and with it the information) is constant; zero column sums make
sum((Mp)_i) = 0, so the total probability is constant.

Time stepping uses the Cayley transform of the generator,

    p_{k+1} = (I - (dt/2) G)^{-1} (I + (dt/2) G) p_k,    G = rate * M,

the implicit midpoint rule for a linear system.  The Cayley matrix of a
skew G is exactly orthogonal and fixes the unit-sum hyperplane, so both
invariants are conserved to round-off for any step size; the step size
only controls phase accuracy against exp(tG).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, DomainError, GridError
from .vectors import SignedProbVector

MARGINAL_TOL = 1e-12
DEFAULT_STEP_ANGLE = 0.1  # |G| * dt for the default step choice


@dataclass(frozen=True, eq=False)
class GeneratorMatrix:
    """Antisymmetric zero-marginal generator with a separate rate scale.

    The strictly upper triangle is the canonical storage; the full matrix is
    reconstructed as upper - upper.T, which is antisymmetric by construction.
    Row and column sums must vanish within 1e-12.
    """

    upper: np.ndarray
    rate: float = 1.0

    def __post_init__(self):
        arr = np.array(self.upper, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DomainError("generator storage must be square")
        if arr.shape[0] < 2:
            raise DomainError("generator needs dimension >= 2")
        if not np.all(np.isfinite(arr)):
            raise DomainError("generator entries must be finite")
        if np.any(np.tril(arr) != 0.0):
            raise DomainError("canonical storage must be strictly upper triangular")
        full = arr - arr.T
        sums = full.sum(axis=1)
        if float(np.max(np.abs(sums))) > MARGINAL_TOL:
            raise DomainError(
                f"row sums reach {np.max(np.abs(sums)):.3e}, exceed {MARGINAL_TOL:g}"
            )
        arr.setflags(write=False)
        full.setflags(write=False)
        object.__setattr__(self, "upper", arr)
        object.__setattr__(self, "_full", full)

    @property
    def n(self) -> int:
        return self.upper.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        """Full antisymmetric matrix, reflected from the upper triangle."""
        return self._full

    @classmethod
    def from_dense(cls, m, rate: float = 1.0) -> "GeneratorMatrix":
        arr = np.asarray(m, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DomainError("generator must be square")
        if float(np.max(np.abs(arr + arr.T))) > MARGINAL_TOL:
            raise DomainError("matrix is not antisymmetric within 1e-12")
        # symmetrize before extracting so the reflection is exact
        skew = (arr - arr.T) / 2.0
        return cls(upper=np.triu(skew, 1), rate=rate)


@dataclass(frozen=True, eq=False)
class TrajectoryRecord:
    """Sampled evolution with per-sample conservation drifts."""

    times: np.ndarray
    states: list
    probability_drift: np.ndarray
    information_drift: np.ndarray


def cyclic_generator3() -> GeneratorMatrix:
    """The 3x3 cyclic antisymmetric generator with rate sqrt(3)/3.

    Its action is the cross product with the unit vector along (1,1,1):
    a rigid rotation of the probability vector about the uniform state at
    unit angular speed.
    """
    m = np.array([[0.0, -1.0, 1.0], [1.0, 0.0, -1.0], [-1.0, 1.0, 0.0]])
    return GeneratorMatrix.from_dense(m, rate=math.sqrt(3.0) / 3.0)


def random_generator(n: int, seed: int, rate: float = 1.0) -> GeneratorMatrix:
    """Seeded random antisymmetric zero-marginal generator.

    Draws an n x n matrix with entries uniform on [-1, 1] from
    numpy.random.default_rng(seed) (PCG64), antisymmetrizes it, and projects
    both sides with P = I - ones/n.  PAP keeps antisymmetry and has exactly
    zero row and column sums because P annihilates the constant vector.
    """
    if n < 2:
        raise DomainError("n must be >= 2")
    rng = np.random.default_rng(seed)
    a = rng.uniform(-1.0, 1.0, size=(n, n))
    skew = (a - a.T) / 2.0
    proj = np.eye(n) - np.full((n, n), 1.0 / n)
    return GeneratorMatrix.from_dense(proj @ skew @ proj, rate=rate)


def _cayley(g: np.ndarray, dt: float) -> np.ndarray:
    n = g.shape[0]
    eye = np.eye(n)
    return np.linalg.solve(eye - (dt / 2.0) * g, eye + (dt / 2.0) * g)


def evolve(p0: SignedProbVector, g: GeneratorMatrix, t: float, dt: float | None = None) -> SignedProbVector:
    """State at time t under dp/dt = rate * M p, via Cayley steps.

    dt is the internal step size; by default it is chosen so that
    |G| * dt <= 0.1.  Conservation of sum and information holds for any dt;
    smaller steps only tighten agreement with the exact exponential.
    """
    if p0.n != g.n:
        raise DimensionMismatchError(f"state has n = {p0.n}, generator n = {g.n}")
    gen = g.rate * g.matrix
    norm = float(np.linalg.norm(gen, 2))
    if t == 0.0 or norm == 0.0:
        return SignedProbVector(p0.entries.copy())
    if dt is None:
        dt = DEFAULT_STEP_ANGLE / norm
    if dt <= 0.0:
        raise DomainError("dt must be positive")
    n_steps = max(1, int(math.ceil(abs(t) / dt - 1e-12)))
    step = t / n_steps
    propagator = np.linalg.matrix_power(_cayley(gen, step), n_steps)
    return SignedProbVector(propagator @ p0.entries)


def trajectory(p0: SignedProbVector, g: GeneratorMatrix, t_end: float, dt: float) -> TrajectoryRecord:
    """Sample the evolution at multiples of dt up to t_end, recording the
    drifts |sum p(t) - 1| and |I(t) - I(0)| at every sample."""
    if dt <= 0.0:
        raise DomainError("dt must be positive")
    if t_end < 0.0:
        raise DomainError("t_end must be nonnegative")
    info0 = p0.information
    n_samples = int(math.floor(t_end / dt + 1e-12))
    times = np.arange(n_samples + 1) * dt
    states = [p0]
    for _ in range(n_samples):
        states.append(evolve(states[-1], g, dt))
    prob_drift = np.array([abs(float(s.entries.sum()) - 1.0) for s in states])
    info_drift = np.array([abs(s.information - info0) for s in states])
    return TrajectoryRecord(
        times=times,
        states=states,
        probability_drift=prob_drift,
        information_drift=info_drift,
    )


def write_trajectory_csv(rec: TrajectoryRecord, path) -> None:
    """CSV with columns t, p_0..p_{n-1}, sum_drift, info_drift at 15
    significant digits."""
    n = rec.states[0].n
    header = ",".join(["t"] + [f"p_{i}" for i in range(n)] + ["sum_drift", "info_drift"])
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for t, state, pd, idr in zip(
            rec.times, rec.states, rec.probability_drift, rec.information_drift
        ):
            row = [t, *state.entries, pd, idr]
            fh.write(",".join(f"{v:.14e}" for v in row) + "\n")


def read_trajectory_csv(path) -> dict:
    """Read a trajectory CSV back into arrays (times, states, drifts)."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        rows = [list(map(float, line.strip().split(","))) for line in fh if line.strip()]
    if len(header) < 4 or header[0] != "t":
        raise GridError("not a trajectory CSV")
    data = np.array(rows)
    return {
        "times": data[:, 0],
        "states": data[:, 1:-2],
        "probability_drift": data[:, -2],
        "information_drift": data[:, -1],
    }
