"""Equilibria, stability, and continuation of the equilibrium branch in zeta."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import ConfigurationError
from .massaction import additive_input, input_parameter, rate_assignment
from .model import ReactionNetwork, input_output_order

log = logging.getLogger(__name__)

STABILITY_TOL = -1e-9
MAX_ITER = 200
MAX_HALVINGS = 40


class MassActionSystem:
    """Vectorised mass-action field with the input parameter made explicit.

    The arrays are built straight from the reaction list, independent of the
    symbolic polynomial layer.
    """

    def __init__(
        self,
        net: ReactionNetwork,
        k: Optional[Mapping[str, float]] = None,
        default: Optional[float] = None,
    ):
        self.net = net
        self.additive = additive_input(net)
        self.parameter = input_parameter(net)
        self.flagged = net.input_reaction()
        probe = rate_assignment(net, k, zeta=1.0, default=default)
        self.rates = np.array([probe[r.rate.name] for r in net.reactions], dtype=float)
        if any(not v > 0 for v in self.rates):
            raise ConfigurationError("rate constants must be positive")
        self.Y = np.array([r.source for r in net.reactions], dtype=float).reshape(-1, net.n_species)
        self.D = np.array([r.vector for r in net.reactions], dtype=float).reshape(-1, net.n_species).T
        self.order = input_output_order(net)
        self.n = net.n_species

    @property
    def scale(self) -> float:
        return 1.0 + float(np.max(self.rates, initial=0.0))

    def _k(self, zeta: float) -> np.ndarray:
        k = self.rates.copy()
        if self.flagged is not None:
            k[self.flagged] = zeta
        return k

    def _monomials(self, x: np.ndarray) -> np.ndarray:
        return np.prod(np.power(x[None, :], self.Y), axis=1)

    def rhs(self, x, zeta: float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        f = self.D @ (self._k(zeta) * self._monomials(x))
        if self.additive:
            f[self.net.input_index] += zeta
        return f

    def jacobian(self, x, zeta: float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        flux = self._k(zeta) * self._monomials(x)
        dflux = flux[:, None] * self.Y / x[None, :]
        return self.D @ dflux

    def zeta_derivative(self, x, zeta: float) -> np.ndarray:
        """Partial derivative of the field with respect to the input parameter."""
        if self.additive:
            g = np.zeros(self.n)
            g[self.net.input_index] = 1.0
            return g
        x = np.asarray(x, dtype=float)
        j = self.flagged
        return self.D[:, j] * float(np.prod(np.power(x, self.Y[j])))

    def minor_det(self, jac: np.ndarray) -> float:
        """det of the Jacobian minor without the input row and output column."""
        p = jac[np.ix_(self.order, self.order)]
        if self.n == 1:
            return float("nan")
        return float(np.linalg.det(p[1:, :-1]))

    def residual(self, x, zeta: float) -> float:
        return float(np.max(np.abs(self.rhs(x, zeta)), initial=0.0))


@dataclass(frozen=True)
class Equilibrium:
    x: tuple[float, ...]
    zeta: float
    residual: float
    jacobian_eigenvalues: tuple[complex, ...]
    stable: bool


@dataclass(frozen=True)
class BranchSample:
    zeta: float
    equilibrium: Equilibrium
    detB: float
    detJ: float
    io_derivative: float
    dx_dzeta: tuple[float, ...]
    grid_index: int

    @property
    def stable(self) -> bool:
        return self.equilibrium.stable


@dataclass
class Branch:
    samples: list[BranchSample]
    gaps: list[tuple[float, str]]
    system: MassActionSystem = field(repr=False)

    def __iter__(self):
        return iter(self.samples)

    def __len__(self):
        return len(self.samples)

    def __getitem__(self, i):
        return self.samples[i]


@dataclass(frozen=True)
class HomeostasisPoint:
    zeta_star: float
    x_star: tuple[float, ...]
    stable: bool
    kind: str  # "infinitesimal" or "perfect-interval"
    detB: float
    zeta_interval: Optional[tuple[float, float]] = None
    iterations: int = 0
    diagnostic: str = ""


def _spectrum(jac: np.ndarray) -> tuple[tuple[complex, ...], bool]:
    eig = np.linalg.eigvals(jac)
    eig = sorted((complex(v) for v in eig), key=lambda v: (v.real, v.imag))
    return tuple(eig), all(v.real < STABILITY_TOL for v in eig)


def _solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.solve(a, b)
    except np.linalg.LinAlgError:
        return np.linalg.lstsq(a, b, rcond=None)[0]


def newton(
    system: MassActionSystem,
    x0: Sequence[float],
    zeta: float,
    tol: Optional[float] = None,
) -> Optional[np.ndarray]:
    """Damped Newton in log-concentrations; returns None on failure.

    Each step is halved until the residual norm decreases (at most 40
    halvings); at most 200 iterations.
    """
    tol = 1e-13 * system.scale if tol is None else tol
    accept = 1e-10 * system.scale
    u = np.log(np.asarray(x0, dtype=float))
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        x = np.exp(u)
        f = system.rhs(x, zeta)
        norm = float(np.linalg.norm(f))
        for _ in range(MAX_ITER):
            if np.max(np.abs(f), initial=0.0) <= tol:
                break
            ju = system.jacobian(x, zeta) * x[None, :]
            step = _solve(ju, -f)
            if not np.all(np.isfinite(step)):
                return None
            t = 1.0
            for _ in range(MAX_HALVINGS + 1):
                u_new = u + t * step
                x_new = np.exp(u_new)
                f_new = system.rhs(x_new, zeta)
                n_new = float(np.linalg.norm(f_new))
                if np.all(np.isfinite(f_new)) and np.all(x_new > 0) and n_new < norm:
                    break
                t *= 0.5
            else:
                break
            u, x, f, norm = u_new, x_new, f_new, n_new
        if not np.all(np.isfinite(x)) or np.max(np.abs(f), initial=0.0) > accept:
            return None
        # polish in plain coordinates
        for _ in range(3):
            step = _solve(system.jacobian(x, zeta), -f)
            x_new = x + step
            if not np.all(x_new > 0):
                break
            f_new = system.rhs(x_new, zeta)
            if np.linalg.norm(f_new) >= np.linalg.norm(f):
                break
            x, f = x_new, f_new
    return x


def _equilibrium(system: MassActionSystem, x: np.ndarray, zeta: float) -> Equilibrium:
    eig, stable = _spectrum(system.jacobian(x, zeta))
    return Equilibrium(tuple(float(v) for v in x), float(zeta), system.residual(x, zeta), eig, stable)


def find_equilibria(
    net: ReactionNetwork,
    k: Optional[Mapping[str, float]] = None,
    zeta: float = 1.0,
    attempts: int = 20,
    seed: int = 0,
    default: Optional[float] = None,
    system: Optional[MassActionSystem] = None,
    min_concentration: float = 1e-9,
) -> list[Equilibrium]:
    """Positive equilibria from log-uniform random starts in [1e-3, 1e3]^n.

    Newton runs in log coordinates, so starts attracted to the boundary
    converge to points with vanishing coordinates; those below
    ``min_concentration`` are discarded.
    """
    if zeta < 0:
        raise ValueError("zeta must be nonnegative")
    system = system or MassActionSystem(net, k, default)
    rng = np.random.default_rng(seed)
    starts = np.exp(rng.uniform(math.log(1e-3), math.log(1e3), size=(attempts, net.n_species)))
    found: list[np.ndarray] = []
    for x0 in starts:
        x = newton(system, x0, zeta)
        if x is None or np.min(x) < min_concentration:
            continue
        if any(np.linalg.norm(x - y) <= 1e-6 * max(np.linalg.norm(x), np.linalg.norm(y)) for y in found):
            continue
        found.append(x)
    found.sort(key=tuple)
    return [_equilibrium(system, x, zeta) for x in found]


def stability_spectrum(
    net: ReactionNetwork,
    k: Optional[Mapping[str, float]],
    eq: Sequence[float],
    zeta: float = 1.0,
    default: Optional[float] = None,
) -> tuple[tuple[complex, ...], bool]:
    """Jacobian eigenvalues at ``eq`` and whether all real parts are negative."""
    if any(not v > 0 for v in eq):
        raise ValueError("equilibrium must be strictly positive")
    system = MassActionSystem(net, k, default)
    return _spectrum(system.jacobian(np.asarray(eq, dtype=float), zeta))


def _sample(system: MassActionSystem, x: np.ndarray, zeta: float, index: int) -> BranchSample:
    jac = system.jacobian(x, zeta)
    eq = _equilibrium(system, x, zeta)
    det_j = float(np.linalg.det(jac))
    dx = _solve(jac, -system.zeta_derivative(x, zeta))
    out = system.net.output_index
    return BranchSample(
        zeta=float(zeta),
        equilibrium=eq,
        detB=system.minor_det(jac),
        detJ=det_j,
        io_derivative=float(dx[out]),
        dx_dzeta=tuple(float(v) for v in dx),
        grid_index=index,
    )


def branch_sweep(
    net: ReactionNetwork,
    k: Optional[Mapping[str, float]] = None,
    zeta_range: tuple[float, float] = (0.1, 1.0),
    steps: int = 32,
    default: Optional[float] = None,
    x0: Optional[Sequence[float]] = None,
    seed: int = 0,
    attempts: int = 20,
) -> Branch:
    """Natural-parameter continuation over an evenly spaced zeta grid.

    Each point is warm-started from the previous one with a tangent
    predictor.  Newton failures and stability changes are recorded in
    ``gaps``.
    """
    lo, hi = zeta_range
    if not (lo > 0 and hi > lo and steps >= 2):
        raise ValueError("need 0 < lo < hi and steps >= 2")
    system = MassActionSystem(net, k, default)
    grid = np.linspace(lo, hi, steps)
    if x0 is not None:
        x = newton(system, x0, grid[0])
    else:
        eqs = find_equilibria(net, zeta=grid[0], attempts=attempts, seed=seed, system=system)
        pick = next((e for e in eqs if e.stable), eqs[0] if eqs else None)
        x = None if pick is None else np.array(pick.x)
    if x is None:
        raise ConfigurationError(f"no equilibrium found at zeta={lo}")
    samples = [_sample(system, x, grid[0], 0)]
    gaps: list[tuple[float, str]] = []
    for i in range(1, steps):
        prev = samples[-1]
        h = grid[i] - prev.zeta
        guess = np.array(prev.equilibrium.x) + h * np.array(prev.dx_dzeta)
        if not np.all(guess > 0) or not np.all(np.isfinite(guess)):
            guess = np.array(prev.equilibrium.x)
        x = newton(system, guess, grid[i])
        if x is None:
            x = newton(system, prev.equilibrium.x, grid[i])
        if x is None:
            gaps.append((float(grid[i]), "newton failure"))
            log.debug("newton failed at zeta=%r", float(grid[i]))
            continue
        s = _sample(system, x, grid[i], i)
        if s.stable != prev.stable:
            gaps.append((float(grid[i]), "stability change"))
        samples.append(s)
    return Branch(samples, gaps, system)


def _bisect(system, a: BranchSample, b: BranchSample, tol: float, max_iter: int):
    za, zb = a.zeta, b.zeta
    xa, xb = np.array(a.equilibrium.x), np.array(b.equilibrium.x)
    da = a.detB
    best = a if abs(a.detB) <= abs(b.detB) else b
    for it in range(1, max_iter + 1):
        zm = 0.5 * (za + zb)
        x = newton(system, 0.5 * (xa + xb), zm)
        if x is None:
            log.debug("bisection lost the bracket at zeta=%r", zm)
            return best, it, f"bracket lost at zeta={zm!r} (possible fold)"
        s = _sample(system, x, zm, -1)
        best = s
        if abs(s.detB) <= tol:
            return s, it, ""
        if (s.detB > 0) == (da > 0):
            za, xa, da = zm, x, s.detB
        else:
            zb, xb = zm, x
        if zb - za <= 4 * np.finfo(float).eps * max(abs(za), 1.0):
            return s, it, "bracket collapsed before reaching tolerance"
    return best, max_iter, "iteration limit reached"


def locate_homeostasis_point(
    branch: Branch, tol: float = 1e-9, max_iter: int = 80
) -> list[HomeostasisPoint]:
    """Zeros of det(B) along the branch.

    Runs of two or more samples with ``|detB| <= tol`` are reported as one
    perfect-interval point; isolated sign changes are refined by bisection.
    """
    samples = branch.samples
    points: list[HomeostasisPoint] = []
    zero = [abs(s.detB) <= tol for s in samples]
    i = 0
    while i < len(samples):
        if zero[i]:
            j = i
            while j + 1 < len(samples) and zero[j + 1] and samples[j + 1].grid_index == samples[j].grid_index + 1:
                j += 1
            s = samples[i]
            if j > i:
                points.append(
                    HomeostasisPoint(
                        s.zeta, s.equilibrium.x, all(t.stable for t in samples[i : j + 1]),
                        "perfect-interval", s.detB, (s.zeta, samples[j].zeta),
                    )
                )
            else:
                points.append(
                    HomeostasisPoint(s.zeta, s.equilibrium.x, s.stable, "infinitesimal", s.detB)
                )
            i = j + 1
            continue
        if i + 1 < len(samples) and not zero[i + 1]:
            a, b = samples[i], samples[i + 1]
            if b.grid_index == a.grid_index + 1 and (a.detB > 0) != (b.detB > 0):
                s, iters, diag = _bisect(branch.system, a, b, tol, max_iter)
                points.append(
                    HomeostasisPoint(
                        s.zeta, s.equilibrium.x, s.stable, "infinitesimal", s.detB,
                        iterations=iters, diagnostic=diag,
                    )
                )
        i += 1
    return points
