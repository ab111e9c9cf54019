"""Desk-scale 1+1D space-time solver for the scalar problem.

Discretizes -d/dx(alpha du/dx + beta u) - eps d2u/dt2 + du/dt = f on a tensor
grid over [0, Lx] x [t0, T] in edge-flux form, with Dirichlet data on the
spatial boundary and the initial-time face, and the artificial terminal
condition eps du/dt = q at the final time (q = 0 unless manufactured data is
supplied).  Three edge-flux schemes are available: centered, donor-cell
upwind, and the exponentially fitted Bernoulli-weight scheme.  A classical
backward Euler marcher provides the independent zero-perturbation reference,
and the sweep driver measures the decay of the difference as eps shrinks.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla


class Scheme(str, Enum):
    CENTERED = "centered"
    UPWIND = "upwind"
    EXP_FITTED = "exp-fitted"


class AssemblyError(ValueError):
    pass


class SolveError(RuntimeError):
    pass


class SweepFloorError(RuntimeError):
    """The sweep hit the discretization-error floor; refine the grid."""

    def __init__(self, message, entries):
        super().__init__(message)
        self.entries = entries


def bernoulli(z: float) -> float:
    """B(z) = z / (exp(z) - 1), with a series branch near zero.

    The quadratic series keeps full precision for |z| < 1e-4; the large-|z|
    branches avoid overflow of exp for the strongly convection-dominated
    edges that appear when eps is tiny.
    """
    if abs(z) < 1e-4:
        return 1.0 - z / 2.0 + z * z / 12.0
    if z > 500.0:
        return z * math.exp(-z)
    if z < -500.0:
        return -z
    return z / math.expm1(z)


@dataclass(frozen=True)
class Grid1p1:
    """Tensor grid over [0, Lx] x [t0, T] with interior node counts nx, nt.

    Nodes are indexed i = 0..nx+1 in x and j = 0..nt+1 in t; the flat index
    is j*(nx+2) + i.  ``with_cells`` builds the grid from subinterval counts
    (an n-cell direction has n-1 interior nodes).
    """

    nx: int
    nt: int
    lx: float = 1.0
    t0: float = 0.0
    t_final: float = 1.0

    def __post_init__(self):
        if self.nx < 2 or self.nt < 2:
            raise ValueError("need at least two interior nodes per direction")
        if not (self.lx > 0 and self.t_final > self.t0):
            raise ValueError("empty domain")

    @classmethod
    def with_cells(cls, cells_x: int, cells_t: int, **kwargs) -> "Grid1p1":
        return cls(cells_x - 1, cells_t - 1, **kwargs)

    @property
    def hx(self) -> float:
        return self.lx / (self.nx + 1)

    @property
    def ht(self) -> float:
        return (self.t_final - self.t0) / (self.nt + 1)

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(0.0, self.lx, self.nx + 2)

    @property
    def ts(self) -> np.ndarray:
        return np.linspace(self.t0, self.t_final, self.nt + 2)

    @property
    def shape(self) -> tuple:
        return (self.nt + 2, self.nx + 2)

    @property
    def n_nodes(self) -> int:
        return (self.nx + 2) * (self.nt + 2)

    def index(self, i: int, j: int) -> int:
        return j * (self.nx + 2) + i


@dataclass
class DiscreteField:
    """Nodal values over a grid, stored time-major: values[j, i]."""

    grid: Grid1p1
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.shape:
            raise ValueError(f"values shape {self.values.shape} != grid {self.grid.shape}")

    def l2_x(self, j: int) -> float:
        """Trapezoidal L2 norm over the spatial slab at time index j."""
        return math.sqrt(float(np.trapezoid(self.values[j] ** 2, dx=self.grid.hx)))


@dataclass
class LinearSystem:
    matrix: sp.csr_matrix
    rhs: np.ndarray
    grid: Grid1p1
    epsilon: float
    scheme: Scheme
    dirichlet: np.ndarray  # boolean mask over flat node indices


@dataclass
class ProblemConfig:
    """Coefficients, data and scheme for one 1+1D problem.

    ``alpha`` and ``beta`` are constants or functions of x; ``f`` and the
    Dirichlet data ``g`` are functions of (x, t).  ``q_terminal`` prescribes
    eps*du/dt on the final-time face (zero when absent) as a function of
    (x, t) evaluated at the grid's final time.  ``manufactured`` optionally
    carries the exact solution for error measurement.
    """

    alpha: object
    beta: object
    epsilon: float
    f: Callable
    g: Callable
    scheme: Scheme = Scheme.CENTERED
    q_terminal: Optional[Callable] = None
    manufactured: Optional[Callable] = None

    @classmethod
    def from_manufactured(
        cls,
        expression,
        *,
        alpha=1.0,
        beta=0.0,
        epsilon: float,
        scheme: Scheme = Scheme.CENTERED,
        target: str = "spacetime",
    ) -> "ProblemConfig":
        """Derive forcing and boundary data from an exact solution.

        ``target='spacetime'`` makes the given expression solve the perturbed
        space-time equation (the forcing includes the -eps u_tt term and the
        terminal data equals eps*u_t), which is the manufactured-convergence
        setup.  ``target='limit'`` makes it solve the eps = 0 evolution
        problem with homogeneous terminal data, the setup used to observe the
        perturbation decay.
        """
        import sympy

        x, t = sympy.symbols("x t")
        u = sympy.sympify(expression, locals={"x": x, "t": t, "pi": sympy.pi})
        alpha_e = sympy.sympify(alpha)
        beta_e = sympy.sympify(beta)
        transport = u.diff(t) - (alpha_e * u.diff(x) + beta_e * u).diff(x)
        if target == "spacetime":
            f_expr = -epsilon * u.diff(t, 2) + transport
            q_expr = epsilon * u.diff(t)
        elif target == "limit":
            f_expr = transport
            q_expr = None
        else:
            raise ValueError(f"unknown target {target!r}")

        def lam(expr):
            fn = sympy.lambdify((x, t), expr, "numpy")
            return lambda xv, tv: float(fn(xv, tv))

        alpha_v = float(alpha_e) if not alpha_e.free_symbols else sympy.lambdify(x, alpha_e, "numpy")
        beta_v = float(beta_e) if not beta_e.free_symbols else sympy.lambdify(x, beta_e, "numpy")
        return cls(
            alpha=alpha_v,
            beta=beta_v,
            epsilon=epsilon,
            f=lam(f_expr),
            g=lam(u),
            scheme=scheme,
            q_terminal=lam(q_expr) if q_expr is not None else None,
            manufactured=lam(u),
        )


def _as_xfunc(value) -> Callable:
    if callable(value):
        return value
    v = float(value)
    return lambda x: v


def _x_edge_weights(config: ProblemConfig, grid: Grid1p1):
    """Linear edge-flux weights: J_e = wl*u_left + wr*u_right per x-edge."""
    alpha = _as_xfunc(config.alpha)
    beta = _as_xfunc(config.beta)
    hx = grid.hx
    xs = grid.xs
    mids = 0.5 * (xs[:-1] + xs[1:])
    a = np.array([float(alpha(xm)) for xm in mids])
    b = np.array([float(beta(xm)) for xm in mids])
    if np.any(a <= 0):
        raise AssemblyError("nonpositive diffusion coefficient on an edge")
    wl = np.empty_like(a)
    wr = np.empty_like(a)
    if config.scheme is Scheme.CENTERED:
        wl = -a / hx + b / 2.0
        wr = a / hx + b / 2.0
    elif config.scheme is Scheme.UPWIND:
        wl = -a / hx + np.minimum(b, 0.0)
        wr = a / hx + np.maximum(b, 0.0)
    elif config.scheme is Scheme.EXP_FITTED:
        z = b * hx / a
        wl = -(a / hx) * np.array([bernoulli(v) for v in z])
        wr = (a / hx) * np.array([bernoulli(-v) for v in z])
    else:
        raise AssemblyError(f"unknown scheme {config.scheme}")
    return wl, wr


def _t_edge_weights(config: ProblemConfig, grid: Grid1p1):
    """Edge-flux weights in time: J_e = wd*u_down + wu*u_up (velocity -1)."""
    eps = float(config.epsilon)
    ht = grid.ht
    if config.scheme is Scheme.CENTERED:
        return -eps / ht - 0.5, eps / ht - 0.5
    if config.scheme is Scheme.UPWIND:
        return -eps / ht - 1.0, eps / ht
    if config.scheme is Scheme.EXP_FITTED:
        z = -ht / eps
        return -(eps / ht) * bernoulli(z), (eps / ht) * bernoulli(-z)
    raise AssemblyError(f"unknown scheme {config.scheme}")


def assemble(config: ProblemConfig, grid: Grid1p1) -> LinearSystem:
    """Five-point edge-flux discretization of the space-time equation.

    Dirichlet nodes keep identity rows.  The final-time rows use the interior
    stencil with the ghost slab eliminated through the centered terminal
    condition eps*u_t = q, which preserves both second order and the
    M-matrix sign pattern of the fitted scheme.
    """
    eps = float(config.epsilon)
    if eps <= 0:
        raise AssemblyError(f"space-time assembly needs epsilon > 0, got {eps}")
    wl, wr = _x_edge_weights(config, grid)
    wd, wu = _t_edge_weights(config, grid)
    nxn, ntn = grid.nx + 2, grid.nt + 2
    hx, ht = grid.hx, grid.ht
    xs, ts = grid.xs, grid.ts

    rows, cols, data = [], [], []
    rhs = np.zeros(grid.n_nodes)
    dirichlet = np.zeros(grid.n_nodes, dtype=bool)

    def add(r, c, v):
        rows.append(r)
        cols.append(c)
        data.append(v)

    qfun = config.q_terminal or (lambda x, t: 0.0)
    top = ntn - 1
    for j in range(ntn):
        for i in range(nxn):
            r = grid.index(i, j)
            if i == 0 or i == nxn - 1 or j == 0:
                add(r, r, 1.0)
                rhs[r] = float(config.g(xs[i], ts[j]))
                dirichlet[r] = True
                continue
            # -(Jx_right - Jx_left)/hx - (Jt_up - Jt_down)/ht = f
            add(r, grid.index(i - 1, j), wl[i - 1] / hx)
            add(r, r, (wr[i - 1] - wl[i]) / hx)
            add(r, grid.index(i + 1, j), -wr[i] / hx)
            add(r, grid.index(i, j - 1), wd / ht)
            add(r, r, (wu - wd) / ht)
            rhs[r] = float(config.f(xs[i], ts[j]))
            if j < top:
                add(r, grid.index(i, j + 1), -wu / ht)
            else:
                # ghost slab from eps*(u_ghost - u_below)/(2 ht) = q
                ghost_coeff = -wu / ht
                add(r, grid.index(i, j - 1), ghost_coeff)
                rhs[r] -= ghost_coeff * (2.0 * ht / eps) * float(qfun(xs[i], ts[j]))

    matrix = sp.csr_matrix(
        sp.coo_matrix((data, (rows, cols)), shape=(grid.n_nodes, grid.n_nodes))
    )
    return LinearSystem(matrix, rhs, grid, eps, config.scheme, dirichlet)


def solve(system: LinearSystem) -> DiscreteField:
    """Direct sparse solve with one refinement step; checks the residual."""
    try:
        lu = spla.splu(system.matrix.tocsc())
        x = lu.solve(system.rhs)
        x += lu.solve(system.rhs - system.matrix @ x)
    except RuntimeError as exc:
        raise SolveError(
            f"factorization failed (eps={system.epsilon}, scheme={system.scheme.value}, "
            f"grid={system.grid.nx}x{system.grid.nt}): {exc}"
        ) from exc
    residual = np.linalg.norm(system.rhs - system.matrix @ x)
    scale = max(np.linalg.norm(system.rhs), 1e-300)
    if not np.all(np.isfinite(x)) or residual / scale > 1e-10:
        raise SolveError(
            f"relative residual {residual / scale:.3e} above 1e-10 "
            f"(eps={system.epsilon}, scheme={system.scheme.value}, "
            f"grid={system.grid.nx}x{system.grid.nt})"
        )
    return DiscreteField(system.grid, x.reshape(system.grid.shape))


def reference_evolution(config: ProblemConfig, grid: Grid1p1) -> DiscreteField:
    """Backward Euler marching of the eps = 0 evolution problem.

    Uses the same spatial edge fluxes as the space-time assembly and the
    grid's own time step; unconditionally stable.
    """
    if float(config.epsilon) != 0.0:
        raise ValueError("the reference evolution is the epsilon = 0 problem")
    wl, wr = _x_edge_weights(config, grid)
    nxn = grid.nx + 2
    hx, ht = grid.hx, grid.ht
    xs, ts = grid.xs, grid.ts

    rows, cols, data = [], [], []
    for i in range(nxn):
        if i == 0 or i == nxn - 1:
            rows.append(i), cols.append(i), data.append(1.0)
            continue
        rows.append(i), cols.append(i - 1), data.append(wl[i - 1] / hx)
        rows.append(i), cols.append(i), data.append(1.0 / ht + (wr[i - 1] - wl[i]) / hx)
        rows.append(i), cols.append(i + 1), data.append(-wr[i] / hx)
    step_matrix = sp.csc_matrix(sp.coo_matrix((data, (rows, cols)), shape=(nxn, nxn)))
    lu = spla.splu(step_matrix)

    values = np.zeros(grid.shape)
    values[0] = [config.g(x, ts[0]) for x in xs]
    for n in range(1, grid.nt + 2):
        rhs = values[n - 1] / ht + np.array([config.f(x, ts[n]) for x in xs])
        rhs[0] = config.g(xs[0], ts[n])
        rhs[-1] = config.g(xs[-1], ts[n])
        values[n] = lu.solve(rhs)
    return DiscreteField(grid, values)


# ---------------------------------------------------------------------------
# norms, errors and the perturbation sweep
# ---------------------------------------------------------------------------


def _l2_x(values_1d: np.ndarray, grid: Grid1p1) -> float:
    return math.sqrt(float(np.trapezoid(values_1d**2, dx=grid.hx)))


def _energy_integral(diff: np.ndarray, grid: Grid1p1) -> float:
    """Space-time integral of the squared graph norm (value and x-slope)."""
    dx = np.gradient(diff, grid.hx, axis=1, edge_order=1)
    density = np.trapezoid(diff**2 + dx**2, dx=grid.hx, axis=1)
    return float(np.trapezoid(density, dx=grid.ht))


def l2_error(field: DiscreteField, exact: Callable) -> float:
    grid = field.grid
    exact_values = np.array([[exact(x, t) for x in grid.xs] for t in grid.ts])
    diff = field.values - exact_values
    per_slab = np.trapezoid(diff**2, dx=grid.hx, axis=1)
    return math.sqrt(float(np.trapezoid(per_slab, dx=grid.ht)))


@dataclass
class SweepEntry:
    epsilon: float
    l2_error_T: float
    l2_error_mid: float
    energy_integral: float
    pairwise_slope: Optional[float]
    at_floor: bool


@dataclass
class SweepResult:
    entries: list
    slope: float
    slope_residual: float
    floor_estimate: float

    def csv_rows(self) -> list:
        rows = [("epsilon", "l2_error_T", "energy_integral", "slope_estimate")]
        for e in self.entries:
            rows.append(
                (
                    format(e.epsilon, ".17g"),
                    format(e.l2_error_T, ".17g"),
                    format(e.energy_integral, ".17g"),
                    "" if e.pairwise_slope is None else format(e.pairwise_slope, ".17g"),
                )
            )
        rows.append(("fit", "", "", format(self.slope, ".17g")))
        return rows

    def text_table(self) -> str:
        lines = [
            f"{'epsilon':>12} {'l2_error_T':>14} {'l2_error_mid':>14} "
            f"{'energy':>14} {'slope':>8} {'floor?':>7}"
        ]
        for e in self.entries:
            slope = "" if e.pairwise_slope is None else f"{e.pairwise_slope:8.3f}"
            lines.append(
                f"{e.epsilon:12.6g} {e.l2_error_T:14.6e} {e.l2_error_mid:14.6e} "
                f"{e.energy_integral:14.6e} {slope:>8} {'yes' if e.at_floor else 'no':>7}"
            )
        lines.append(f"fitted slope: {self.slope:.4f} (fit residual {self.slope_residual:.2e})")
        lines.append(f"discretization floor estimate: {self.floor_estimate:.3e}")
        return "\n".join(lines)


def epsilon_sweep(config: ProblemConfig, grid: Grid1p1, eps_list: Sequence[float]) -> SweepResult:
    """Solve the perturbed problem for each eps and compare to the reference.

    Reports the spatial L2 difference on the final slab, the mid-time
    difference, and the space-time energy integral; fits the log-log decay
    slope.  A preliminary time-refinement probe of the reference estimates
    the discretization floor, and the sweep aborts if the errors stop
    decreasing while eps does.
    """
    eps_list = [float(e) for e in eps_list]
    if not eps_list:
        raise ValueError("empty epsilon list")
    if any(e <= 0 for e in eps_list):
        raise ValueError("epsilon values must be positive")
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise ValueError("epsilon list must be strictly decreasing")

    limit_config = dataclasses.replace(config, epsilon=0.0, q_terminal=None)
    reference = reference_evolution(limit_config, grid)

    fine_grid = dataclasses.replace(grid, nt=2 * grid.nt + 1)
    fine_reference = reference_evolution(limit_config, fine_grid)
    floor_estimate = _l2_x(fine_reference.values[-1] - reference.values[-1], grid)

    mid = (grid.nt + 1) // 2
    entries = []
    for eps in eps_list:
        perturbed = solve(assemble(dataclasses.replace(config, epsilon=eps), grid))
        diff = perturbed.values - reference.values
        l2_T = _l2_x(diff[-1], grid)
        entry = SweepEntry(
            epsilon=eps,
            l2_error_T=l2_T,
            l2_error_mid=_l2_x(diff[mid], grid),
            energy_integral=_energy_integral(diff, grid),
            pairwise_slope=None,
            at_floor=l2_T <= 3.0 * floor_estimate,
        )
        if entries:
            prev = entries[-1]
            if entry.l2_error_T >= 0.98 * prev.l2_error_T:
                raise SweepFloorError(
                    "difference to the reference stopped decreasing "
                    f"({prev.l2_error_T:.3e} -> {entry.l2_error_T:.3e} while eps "
                    f"{prev.epsilon} -> {entry.epsilon}); the discretization floor "
                    "was reached, refine the grid (larger nt) or stop the sweep earlier",
                    entries + [entry],
                )
            entry.pairwise_slope = math.log(entry.l2_error_T / prev.l2_error_T) / math.log(
                entry.epsilon / prev.epsilon
            )
        entries.append(entry)

    logs_e = np.log([e.epsilon for e in entries])
    logs_err = np.log([e.l2_error_T for e in entries])
    if len(entries) >= 2:
        slope, intercept = np.polyfit(logs_e, logs_err, 1)
        fit_residual = float(np.max(np.abs(slope * logs_e + intercept - logs_err)))
    else:
        slope, fit_residual = float("nan"), float("nan")
    return SweepResult(entries, float(slope), fit_residual, floor_estimate)


def discrete_bilinear(u: DiscreteField, v: DiscreteField, config: ProblemConfig) -> float:
    """Quadrature of the space-time bilinear form on two nodal fields.

    Integrand: alpha*ux*vx + beta*u*vx + eps*ut*vt - u*vt over the domain,
    plus the final-time boundary mass term.  Central differences inside,
    one-sided at the boundaries, trapezoidal weights throughout.
    """
    if u.grid != v.grid:
        raise ValueError("fields live on different grids")
    grid = u.grid
    alpha = _as_xfunc(config.alpha)
    beta = _as_xfunc(config.beta)
    eps = float(config.epsilon)
    ax = np.array([float(alpha(x)) for x in grid.xs])
    bx = np.array([float(beta(x)) for x in grid.xs])

    ux = np.gradient(u.values, grid.hx, axis=1, edge_order=1)
    vx = np.gradient(v.values, grid.hx, axis=1, edge_order=1)
    ut = np.gradient(u.values, grid.ht, axis=0, edge_order=1)
    vt = np.gradient(v.values, grid.ht, axis=0, edge_order=1)

    integrand = ax * ux * vx + bx * u.values * vx + eps * ut * vt - u.values * vt
    volume = float(np.trapezoid(np.trapezoid(integrand, dx=grid.hx, axis=1), dx=grid.ht))
    terminal = float(np.trapezoid(u.values[-1] * v.values[-1], dx=grid.hx))
    return volume + terminal
