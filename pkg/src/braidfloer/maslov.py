"""Permuted Conley-Zehnder indices of symplectic paths Psi' = J0 K(t) Psi.

Coordinates are ordered (p^1..p^n, q^1..q^n), so the standard structure is
J0 = [[0, -I], [I, 0]] and a strand permutation acts block-diagonally on the
p's and q's.  Crossings are the zeros of det(Psi(t) - sigma); each carries the
quadratic form <sigma xi, K(t0) sigma xi> on the kernel, and the index is the
sum of crossing-form signatures with half weight at the endpoints.  Indices
are stored doubled so half-integers stay exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (
    BraidInputError,
    DegenerateCrossingError,
    StationaryDegenerateError,
    StiffnessError,
)
from .words import StrandPermutation

DRIFT_BOUND = 1e-8
KERNEL_TOL = 1e-8
EIGEN_TOL = 1e-8
BISECTION_TOL = 1e-12
MIN_SEPARATION = 1e-6
SYMMETRY_TOL = 1e-12


def standard_j(n: int) -> np.ndarray:
    j = np.zeros((2 * n, 2 * n))
    j[:n, n:] = -np.eye(n)
    j[n:, :n] = np.eye(n)
    return j


def permutation_matrix(sigma: StrandPermutation) -> np.ndarray:
    """Block-diagonal pair of permutation matrices defining the permuted diagonal."""
    n = sigma.n
    p = np.zeros((n, n))
    for k in range(n):
        p[k, sigma(k)] = 1.0
    out = np.zeros((2 * n, 2 * n))
    out[:n, :n] = p
    out[n:, n:] = p
    return out


@dataclass
class SymmetricFamily:
    """Time family of symmetric 2n x 2n matrices."""

    dimension: int
    matrix: Callable[[float], np.ndarray]
    periodic: bool = True

    def __post_init__(self):
        if self.dimension % 2:
            raise BraidInputError("dimension must be even (2n)")

    def __call__(self, t: float) -> np.ndarray:
        k = self.matrix(t)
        checked = getattr(self, "_checked", 0)
        if checked < 16:  # validate early calls, then trust the callable
            object.__setattr__(self, "_checked", checked + 1)
            k = np.asarray(k, dtype=float)
            if k.shape != (self.dimension, self.dimension):
                raise BraidInputError(f"K(t) must be {self.dimension}x{self.dimension}")
            if np.max(np.abs(k - k.T)) >= SYMMETRY_TOL:
                raise BraidInputError("K(t) is not symmetric")
        return k

    @property
    def strands(self) -> int:
        return self.dimension // 2


def constant_family(k) -> SymmetricFamily:
    k = np.asarray(k, dtype=float)
    return SymmetricFamily(k.shape[0], lambda t: k)


def rotation_family(k: int, n: int = 1, tau: float = 1.0) -> SymmetricFamily:
    """Generator of the loop e^{(2 pi k / tau) J0 t}."""
    return constant_family((2 * np.pi * k / tau) * np.eye(2 * n))


def direct_sum_family(a: SymmetricFamily, b: SymmetricFamily) -> SymmetricFamily:
    """K_a + K_b acting on disjoint strand blocks, in (p..., q...) coordinates."""
    na, nb = a.strands, b.strands
    n = na + nb

    def embed(k, offset, m, out):
        idx = list(range(offset, offset + m)) + list(range(n + offset, n + offset + m))
        out[np.ix_(idx, idx)] += k

    def mat(t):
        out = np.zeros((2 * n, 2 * n))
        embed(a(t), 0, na, out)
        embed(b(t), na, nb, out)
        return out

    return SymmetricFamily(2 * n, mat, a.periodic and b.periodic)


def direct_sum_permutation(sa: StrandPermutation, sb: StrandPermutation) -> StrandPermutation:
    na = sa.n
    return StrandPermutation(
        tuple(sa(k) for k in range(na)) + tuple(na + sb(k) for k in range(sb.n))
    )


def sampled_family(times: Sequence[float], matrices: Sequence, periodic: bool = True) -> SymmetricFamily:
    """Linear interpolation through a table of sampled symmetric matrices."""
    ts = np.asarray(times, dtype=float)
    mats = [np.asarray(m, dtype=float) for m in matrices]
    if len(ts) != len(mats) or len(ts) < 2:
        raise BraidInputError("need matching times and matrices, at least two samples")

    def mat(t):
        i = int(np.clip(np.searchsorted(ts, t) - 1, 0, len(ts) - 2))
        w = (t - ts[i]) / (ts[i + 1] - ts[i])
        w = min(max(w, 0.0), 1.0)
        return (1 - w) * mats[i] + w * mats[i + 1]

    return SymmetricFamily(mats[0].shape[0], mat, periodic)


@dataclass
class SymplecticPathSample:
    """Dense RK4 samples of Psi with the generating family attached."""

    family: SymmetricFamily
    tau: float
    times: np.ndarray
    matrices: list[np.ndarray]
    steps: int
    drift: float
    halvings: int = 0

    def psi(self, t: float) -> np.ndarray:
        """Psi(t) integrated afresh from the nearest stored node at or below t."""
        i = int(np.clip(np.searchsorted(self.times, t, side="right") - 1, 0, len(self.times) - 1))
        t0 = self.times[i]
        psi = self.matrices[i]
        if t <= t0:
            return psi
        h = self.times[1] - self.times[0]
        nsub = max(1, int(np.ceil((t - t0) / h * 4)))
        return _rk4(self.family, psi, t0, t, nsub)


def _rk4(family: SymmetricFamily, psi0: np.ndarray, t0: float, t1: float, steps: int,
         j: np.ndarray | None = None) -> np.ndarray:
    if j is None:
        j = standard_j(family.dimension // 2)
    h = (t1 - t0) / steps
    psi = psi0.copy()
    t = t0
    for _ in range(steps):
        k1 = j @ family(t) @ psi
        k2 = j @ family(t + h / 2) @ (psi + h / 2 * k1)
        k3 = j @ family(t + h / 2) @ (psi + h / 2 * k2)
        k4 = j @ family(t + h) @ (psi + h * k3)
        psi = psi + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
    return psi


def integrate_path(family: SymmetricFamily, tau: float, min_steps: int = 128) -> SymplecticPathSample:
    """Classical 4th-order integration with adaptive step halving.

    Steps halve until the symplectic drift stays below 1e-8 at every sample
    and the endpoint agrees with the next refinement to 1e-10; Psi(0) is the
    identity exactly.
    """
    n = family.dimension // 2
    j = standard_j(n)
    steps = max(min_steps, 64)
    prev_end = None
    for _ in range(22):
        h = tau / steps
        psi = np.eye(2 * n)
        mats = [psi]
        drift = 0.0
        t = 0.0
        ok = True
        for _ in range(steps):
            psi = _rk4(family, psi, t, t + h, 1, j)
            t += h
            mats.append(psi)
            drift = max(drift, float(np.max(np.abs(psi.T @ j @ psi - j))))
            if drift >= DRIFT_BOUND:
                ok = False
                break
        if ok:
            converged = prev_end is not None and float(np.max(np.abs(mats[-1] - prev_end))) < 1e-10
            if converged:
                return SymplecticPathSample(
                    family, tau, np.linspace(0.0, tau, steps + 1), mats, steps, drift
                )
            prev_end = mats[-1]
        else:
            prev_end = None
        steps *= 2
    raise StiffnessError(f"accuracy bounds unreachable at {steps} steps")


@dataclass(frozen=True)
class CrossingRecord:
    time: float
    kernel_dimension: int
    form_eigenvalues: tuple[float, ...]
    signature: int
    endpoint: bool


@dataclass(frozen=True)
class MaslovIndex:
    """Half-integer index stored doubled; integer when endpoints behave."""

    twice_value: int
    crossings: tuple[CrossingRecord, ...] = field(default=(), compare=False)

    @property
    def value(self) -> float:
        return self.twice_value / 2

    def __add__(self, other: "MaslovIndex") -> "MaslovIndex":
        return MaslovIndex(self.twice_value + other.twice_value)


def _crossing_form(path: SymplecticPathSample, sbar: np.ndarray, t0: float) -> CrossingRecord:
    psi = path.psi(t0)
    u, s, vt = np.linalg.svd(psi - sbar)
    kernel = vt[s < KERNEL_TOL].T
    if kernel.shape[1] == 0:
        raise DegenerateCrossingError(f"no kernel at detected crossing t={t0}")
    k = path.family(t0)
    m = kernel.T @ sbar.T @ k @ sbar @ kernel
    eigs = np.linalg.eigvalsh((m + m.T) / 2)
    if np.any(np.abs(eigs) < EIGEN_TOL):
        raise DegenerateCrossingError(f"degenerate crossing form at t={t0}")
    sig = int(np.sum(eigs > 0) - np.sum(eigs < 0))
    return CrossingRecord(t0, kernel.shape[1], tuple(float(e) for e in eigs), sig, False)


def _smin(path: SymplecticPathSample, sbar: np.ndarray, t: float) -> float:
    return float(np.linalg.svd(path.psi(t) - sbar, compute_uv=False)[-1])


def _polish_minimum(path, sbar, lo: float, hi: float) -> float:
    while hi - lo > BISECTION_TOL:
        m1 = lo + (hi - lo) / 3
        m2 = hi - (hi - lo) / 3
        if _smin(path, sbar, m1) <= _smin(path, sbar, m2):
            hi = m2
        else:
            lo = m1
    return (lo + hi) / 2


def _detect_crossings(path: SymplecticPathSample, sbar: np.ndarray, a: float, b: float):
    """Zeros of det(Psi - sigma) in the open interval (a, b).

    det may touch zero without a sign change (kernels of dimension two and
    definite crossing forms), so crossings are found through the smallest
    singular value: every region where it dips near zero is rescanned on a
    finer grid and its local minima are polished by ternary search.  Twin
    dips inside one coarse cell leave the whole region low, so the region
    trigger catches them even without a coarse local minimum.
    """
    ts = [t for t in path.times if a < t < b]
    grid = [a] + ts + [b]
    g = [_smin(path, sbar, t) for t in grid]
    h = max(grid[i + 1] - grid[i] for i in range(len(grid) - 1))
    slope = max(
        (abs(g[i + 1] - g[i]) / (grid[i + 1] - grid[i])
         for i in range(len(grid) - 1) if grid[i + 1] > grid[i]),
        default=1.0,
    )
    threshold = max(4 * slope * h, 1e3 * KERNEL_TOL)
    low = [v <= threshold for v in g]
    crossings = []
    i = 0
    while i < len(grid):
        if not low[i]:
            i += 1
            continue
        j = i
        while j + 1 < len(grid) and low[j + 1]:
            j += 1
        lo = grid[max(i - 1, 0)]
        hi = grid[min(j + 1, len(grid) - 1)]
        fine_n = max(48, int((hi - lo) / h * 16))
        fine = np.linspace(lo, hi, fine_n + 1)
        fg = [_smin(path, sbar, t) for t in fine]
        margin = max(1e-9, 100 * BISECTION_TOL)
        for p in range(fine_n + 1):
            # one-sided minima at region edges catch crossings squeezed
            # against an endpoint
            if (p > 0 and fg[p] > fg[p - 1]) or (p < fine_n and fg[p] > fg[p + 1]):
                continue
            t0 = _polish_minimum(
                path, sbar, fine[max(p - 1, 0)], fine[min(p + 1, fine_n)]
            )
            if _smin(path, sbar, t0) < KERNEL_TOL and a + margin < t0 < b - margin:
                crossings.append(t0)
        i = j + 1
    crossings.sort()
    suspicious = any(
        t1 - t0 < MIN_SEPARATION for t0, t1 in zip(crossings, crossings[1:])
    )
    return crossings, suspicious


def _graph_index(
    path: SymplecticPathSample, sbar: np.ndarray, a: float, b: float, closed: bool = False
) -> MaslovIndex:
    """Maslov index of gr(Psi) against the permuted diagonal over [a, b]."""
    crossings = []
    for attempt in range(3):
        raw, suspicious = _detect_crossings(path, sbar, a, b)
        crossings = []
        for t0 in raw:  # merge polish duplicates from adjacent grid minima
            if not crossings or t0 - crossings[-1] > 100 * BISECTION_TOL:
                crossings.append(t0)
        suspicious = suspicious and any(
            t1 - t0 < MIN_SEPARATION for t0, t1 in zip(crossings, crossings[1:])
        )
        if not suspicious:
            break
        path = integrate_path(path.family, path.tau, min_steps=2 * path.steps)
        path.halvings = attempt + 1
    records = []
    twice = 0
    if _smin(path, sbar, a) < KERNEL_TOL:
        rec = _crossing_form(path, sbar, a)
        records.append(
            CrossingRecord(rec.time, rec.kernel_dimension, rec.form_eigenvalues, rec.signature, True)
        )
        twice += rec.signature
    for t0 in crossings:
        rec = _crossing_form(path, sbar, t0)
        records.append(rec)
        twice += 2 * rec.signature
    if _smin(path, sbar, b) < KERNEL_TOL:
        if not closed:
            raise StationaryDegenerateError(
                f"det(Psi({b}) - sigma) vanishes: stationary braid degenerate"
            )
        rec = _crossing_form(path, sbar, b)
        records.append(
            CrossingRecord(rec.time, rec.kernel_dimension, rec.form_eigenvalues, rec.signature, True)
        )
        twice += rec.signature
    return MaslovIndex(twice, tuple(records))


def permuted_cz_index(
    path: SymplecticPathSample,
    sigma: StrandPermutation | None = None,
    a: float = 0.0,
    b: float | None = None,
    closed: bool = False,
) -> MaslovIndex:
    """mu_sigma(Psi, tau): crossing signatures with half weight at endpoints.

    The start t=0 is always a crossing (Psi(0)=Id meets the permuted diagonal
    in the fixed space of sigma, which is even dimensional).  A vanishing
    determinant at the far endpoint is reported as a degenerate stationary
    braid unless `closed` is set, in which case the endpoint crossing enters
    with half weight (the loop convention).
    """
    n = path.family.strands
    sigma = sigma or StrandPermutation.identity(n)
    if sigma.n != n:
        raise BraidInputError("permutation size does not match the family")
    sbar = permutation_matrix(sigma)
    b = path.tau if b is None else b
    idx = _graph_index(path, sbar, a, b, closed=closed)
    if a == 0.0:
        start = next((r for r in idx.crossings if r.endpoint), None)
        if start is not None and start.signature % 2:
            raise AssertionError("odd endpoint signature on an even-dimensional kernel")
    return idx


def rotated_path(path: SymplecticPathSample, k: int) -> SymplecticPathSample:
    """The path t -> e^{2 pi k J0 t / tau} Psi(t), built in closed form."""
    n = path.family.strands
    fam = _rotated_family(path.family, k, path.tau)
    j = standard_j(n)
    eye = np.eye(2 * n)
    rate = 2 * np.pi * k / path.tau
    mats = []
    for t, psi in zip(path.times, path.matrices):
        theta = rate * t
        mats.append((np.cos(theta) * eye + np.sin(theta) * j) @ psi)
    return SymplecticPathSample(fam, path.tau, path.times, mats, path.steps, path.drift)


def rotation_shift_check(
    path: SymplecticPathSample, sigma: StrandPermutation | None, k: int
) -> bool:
    """Whether composing with the loop e^{2 pi k J0 t / tau} shifts mu by 2kn."""
    n = path.family.strands
    base = permuted_cz_index(path, sigma)
    shifted = permuted_cz_index(rotated_path(path, k), sigma)
    return shifted.twice_value == base.twice_value + 4 * k * n


def _rotated_family(family: SymmetricFamily, k: int, tau: float) -> SymmetricFamily:
    n = family.strands
    j = standard_j(n)
    eye = np.eye(2 * n)
    rate = 2 * np.pi * k / tau
    rate_eye = rate * eye

    def mat(t):
        theta = rate * t
        phi = np.cos(theta) * eye + np.sin(theta) * j
        return rate_eye + phi @ family(t) @ phi.T

    return SymmetricFamily(2 * n, mat, family.periodic)


@dataclass(frozen=True)
class AnnulusCriticalPoint:
    action: float          # symplectic polar I coordinate
    angle: float
    hessian: np.ndarray
    morse_index: int


@dataclass(frozen=True)
class AnnulusModel:
    """Radial-plus-angular model Hamiltonian on the annulus.

    H(x) = F(|x|) + phi_delta(|x|) * eps * cos(arg x) with F quadratic; the
    two critical points sit at I = 1/8, theta = 0 and pi.
    """

    r1: float
    r2: float
    delta: float
    eps: float
    outward: bool
    critical_points: tuple[AnnulusCriticalPoint, ...]
    degenerate: bool

    def hessian_families(self) -> list[SymmetricFamily]:
        return [constant_family(c.hessian) for c in self.critical_points]

    def cz_indices(self, tau: float = 1.0) -> list[int]:
        out = []
        for fam in self.hessian_families():
            path = integrate_path(fam, tau)
            idx = permuted_cz_index(path)
            assert idx.twice_value % 2 == 0
            out.append(idx.twice_value // 2)
        return out


def annulus_hamiltonian(
    r1: float = 0.1,
    r2: float = 0.9,
    delta: float = 0.1,
    eps: float = 0.1,
    outward: bool = True,
) -> AnnulusModel:
    """The model Hamiltonian of the annulus computation.

    `outward` selects the sign of the radial well (flow exiting or entering
    the annulus boundary); eps = 0 restores rotational symmetry and is
    reported as a degenerate circle of equilibria.
    """
    if not 0 < r1 < r2 <= 1:
        raise BraidInputError("need 0 < r1 < r2 <= 1")
    if delta <= 0 or delta >= 0.25:
        raise BraidInputError("need 0 < delta < 1/4")
    if eps < 0 or (eps and eps >= 1 / (4 * delta) - 1):
        raise BraidInputError("need 0 <= eps < 1/(4 delta) - 1")
    if eps == 0:
        return AnnulusModel(r1, r2, delta, eps, outward, (), True)
    # radial Hessian d/dI of +-(2I - sqrt(2I)/2) at I = 1/8 is +-1;
    # angular Hessian of eps cos(theta) in the metric is -4 eps cos(theta)
    if outward:
        pts = (
            AnnulusCriticalPoint(0.125, 0.0, np.diag([1.0, -4 * eps]), 1),   # saddle
            AnnulusCriticalPoint(0.125, np.pi, np.diag([1.0, 4 * eps]), 0),  # minimum
        )
    else:
        pts = (
            AnnulusCriticalPoint(0.125, 0.0, np.diag([-1.0, -4 * eps]), 2),  # maximum
            AnnulusCriticalPoint(0.125, np.pi, np.diag([-1.0, 4 * eps]), 1),
        )
    return AnnulusModel(r1, r2, delta, eps, outward, pts, False)
