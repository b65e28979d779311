"""Dense bounded-variable revised simplex.

Solves ``min c.x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  0 <= x <= u``.

Two phases with artificial variables.  Rows are equilibrated (divided by
their largest coefficient) before solving; every reported quantity refers to
the original, unscaled rows.  Pricing is Dantzig's rule (largest reduced-cost
violation, lowest index on ties); the ratio test takes the lowest row on
ties.  A run of degenerate pivots switches to Bland's rule until progress
resumes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class NumericalBreakdown(RuntimeError):
    pass


@dataclass(frozen=True)
class Tolerances:
    feasibility: float = 1e-7
    reduced_cost: float = 1e-9
    pivot: float = 1e-11
    degenerate_run: int = 50
    refactor_every: int = 100
    max_iterations: int = 50_000


def _matrix(A, n: int) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim == 2:
        if A.shape[1] != n:
            raise ValueError("inconsistent LP dimensions")
        return A
    return A.reshape(-1, n) if n else np.zeros((0, 0))


@dataclass
class LinearProgram:
    c: np.ndarray
    A_ub: np.ndarray
    b_ub: np.ndarray
    A_eq: np.ndarray
    b_eq: np.ndarray
    upper: np.ndarray
    var_names: list[str] = field(default_factory=list)
    ub_names: list[str] = field(default_factory=list)
    eq_names: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float)
        n = self.c.size
        self.A_ub = _matrix(self.A_ub, n)
        self.A_eq = _matrix(self.A_eq, n)
        self.b_ub = np.asarray(self.b_ub, dtype=float).reshape(-1)
        self.b_eq = np.asarray(self.b_eq, dtype=float).reshape(-1)
        self.upper = np.asarray(self.upper, dtype=float).reshape(-1)
        if self.upper.size != n or self.b_ub.size != self.A_ub.shape[0] or self.b_eq.size != self.A_eq.shape[0]:
            raise ValueError("inconsistent LP dimensions")
        if np.any(self.upper < 0):
            raise ValueError("upper bounds must be non-negative")
        if not self.var_names:
            self.var_names = [f"x{j}" for j in range(n)]
        if not self.ub_names:
            self.ub_names = [f"ub{i}" for i in range(self.A_ub.shape[0])]
        if not self.eq_names:
            self.eq_names = [f"eq{i}" for i in range(self.A_eq.shape[0])]

    @property
    def n(self) -> int:
        return self.c.size

    @property
    def m_ub(self) -> int:
        return self.A_ub.shape[0]

    @property
    def m_eq(self) -> int:
        return self.A_eq.shape[0]

    def objective(self, x: np.ndarray) -> float:
        return float(self.c @ x)


@dataclass
class LPResult:
    status: Status
    x: np.ndarray | None = None
    objective: float | None = None
    y_ub: np.ndarray | None = None
    y_eq: np.ndarray | None = None
    reduced_costs: np.ndarray | None = None
    basis: tuple[int, ...] = ()
    farkas: tuple[np.ndarray, np.ndarray] | None = None  # (y_ub, y_eq)
    ray: np.ndarray | None = None
    iterations: int = 0
    dual_objective: float | None = None


class _Tableau:
    """Working state for the standard form  A z = b,  0 <= z <= u."""

    def __init__(self, A, b, u, basis, tol: Tolerances):
        self.A = A
        self.b = b
        self.u = u.copy()
        self.m, self.N = A.shape
        self.tol = tol
        self.basis = np.array(basis, dtype=int)
        self.at_upper = np.zeros(self.N, dtype=bool)
        self.is_basic = np.zeros(self.N, dtype=bool)
        self.is_basic[self.basis] = True
        self.iterations = 0
        self.refactor()

    def refactor(self):
        try:
            self.Binv = np.linalg.inv(self.A[:, self.basis])
        except np.linalg.LinAlgError as exc:
            raise NumericalBreakdown("basis matrix became singular") from exc
        if not np.all(np.isfinite(self.Binv)):
            raise NumericalBreakdown("basis inverse is not finite")
        self.since_refactor = 0
        self.compute_xb()

    def nonbasic_values(self) -> np.ndarray:
        z = np.zeros(self.N)
        z[self.at_upper] = self.u[self.at_upper]
        z[self.basis] = 0.0
        return z

    def compute_xb(self):
        z = self.nonbasic_values()
        self.xb = self.Binv @ (self.b - self.A @ z)

    def values(self) -> np.ndarray:
        z = self.nonbasic_values()
        z[self.basis] = self.xb
        return z

    def run(self, cost: np.ndarray):
        """Iterate to optimality for ``cost``. Returns ("optimal", None) or ("unbounded", ray)."""
        tol = self.tol
        degenerate = 0
        bland = False
        while True:
            if self.iterations >= tol.max_iterations:
                raise NumericalBreakdown(f"iteration limit {tol.max_iterations} reached")
            y = cost[self.basis] @ self.Binv
            d = cost - y @ self.A
            fixed = self.u <= 0.0
            eligible = ~self.is_basic & ~fixed & (
                (~self.at_upper & (d < -tol.reduced_cost)) | (self.at_upper & (d > tol.reduced_cost))
            )
            cand = np.flatnonzero(eligible)
            if cand.size == 0:
                return "optimal", None
            if bland:
                j = int(cand[0])
            else:
                j = int(cand[np.argmax(np.abs(d[cand]))])
            sgn = 1.0 if not self.at_upper[j] else -1.0
            alpha = self.Binv @ self.A[:, j]
            delta = sgn * alpha

            # entries at round-off level relative to the column count as zero
            drop = max(tol.pivot, 1e-9 * float(np.abs(alpha).max(initial=0.0)))
            ratios = np.full(self.m, np.inf)
            dec = delta > drop
            ratios[dec] = np.maximum(self.xb[dec], 0.0) / delta[dec]
            inc = (delta < -drop) & np.isfinite(self.u[self.basis])
            ub = self.u[self.basis]
            ratios[inc] = np.maximum(ub[inc] - self.xb[inc], 0.0) / (-delta[inc])
            theta_row = ratios.min() if self.m else np.inf
            theta_flip = self.u[j]

            if not np.isfinite(theta_row) and not np.isfinite(theta_flip):
                ray = np.zeros(self.N)
                ray[j] = sgn
                ray[self.basis] = -delta
                return "unbounded", ray

            self.iterations += 1
            if theta_flip <= theta_row:
                theta = theta_flip
                self.xb = self.xb - theta * delta
                self.at_upper[j] = not self.at_upper[j]
            else:
                if bland:
                    ties = np.flatnonzero(ratios <= theta_row + 1e-12)
                    r = int(ties[np.argmin(self.basis[ties])])
                else:
                    r = self._harris_row(delta, dec, inc, ratios)
                theta = ratios[r]
                leaving = int(self.basis[r])
                leave_to_upper = delta[r] < 0
                entering_value = (self.u[j] if self.at_upper[j] else 0.0) + sgn * theta
                self.xb = self.xb - theta * delta
                self.xb[r] = entering_value
                self._pivot(r, j, alpha)
                self.is_basic[leaving] = False
                self.at_upper[leaving] = bool(leave_to_upper)
                self.is_basic[j] = True
                self.at_upper[j] = False
                self.basis[r] = j
                self.since_refactor += 1
                if self.since_refactor >= tol.refactor_every:
                    self.refactor()

            if theta <= 1e-12:
                degenerate += 1
                if degenerate >= tol.degenerate_run:
                    bland = True
            else:
                degenerate = 0
                bland = False

    def _harris_row(self, delta, dec, inc, ratios) -> int:
        # pass 1: widest step keeping every basic within the feasibility tolerance
        ftol = self.tol.feasibility
        relaxed = np.full(self.m, np.inf)
        relaxed[dec] = (np.maximum(self.xb[dec], 0.0) + ftol) / delta[dec]
        ub = self.u[self.basis]
        relaxed[inc] = (np.maximum(ub[inc] - self.xb[inc], 0.0) + ftol) / (-delta[inc])
        bound = relaxed.min()
        # pass 2: largest pivot among rows blocking within that step, lowest row on ties
        rows = np.flatnonzero(ratios <= bound)
        mag = np.abs(delta[rows])
        return int(rows[np.flatnonzero(mag == mag.max())[0]])

    def _pivot(self, r: int, j: int, alpha: np.ndarray):
        piv = alpha[r]
        if abs(piv) < self.tol.pivot:
            raise NumericalBreakdown(f"pivot magnitude {abs(piv):.3e} below tolerance")
        row = self.Binv[r] / piv
        rows = np.flatnonzero(alpha)
        self.Binv[rows] -= alpha[rows, None] * row
        self.Binv[r] = row

    def pivot_in(self, r: int, j: int):
        """Degenerate pivot of nonbasic ``j`` into row ``r`` (values unchanged)."""
        alpha = self.Binv @ self.A[:, j]
        leaving = int(self.basis[r])
        self._pivot(r, j, alpha)
        self.is_basic[leaving] = False
        self.at_upper[leaving] = False
        self.is_basic[j] = True
        self.at_upper[j] = False
        self.basis[r] = j
        self.compute_xb()


def _standard_form(lp: LinearProgram):
    n, m1, m2 = lp.n, lp.m_ub, lp.m_eq
    m = m1 + m2
    A = np.zeros((m, n + m1))
    A[:m1, :n] = lp.A_ub
    A[:m1, n:] = np.eye(m1)
    A[m1:, :n] = lp.A_eq
    b = np.concatenate([lp.b_ub, lp.b_eq])
    scale = np.ones(m)
    rowmax = np.abs(A[:, :n]).max(axis=1) if n else np.zeros(m)
    nz = rowmax > 0
    scale[nz] = 1.0 / rowmax[nz]
    A = A * scale[:, None]
    b = b * scale
    sign = np.where(b < 0, -1.0, 1.0)
    A = A * sign[:, None]
    b = b * sign
    u = np.concatenate([lp.upper, np.full(m1, np.inf)])
    return A, b, u, scale * sign


def solve_lp(lp: LinearProgram, tol: Tolerances | None = None) -> LPResult:
    tol = tol or Tolerances()
    n, m1, m2 = lp.n, lp.m_ub, lp.m_eq
    m = m1 + m2
    A, b, u, rowmul = _standard_form(lp)
    nz = n + m1
    # a <= row whose right-hand side kept its sign starts from its slack
    slack_ok = [i < m1 and A[i, n + i] > 0 for i in range(m)]
    art_rows = [i for i in range(m) if not slack_ok[i]]
    A_full = np.hstack([A, np.eye(m)[:, art_rows]])
    u_full = np.concatenate([u, np.full(len(art_rows), np.inf)])
    basis = [0] * m
    for i in range(m):
        basis[i] = n + i if slack_ok[i] else nz + art_rows.index(i)
    tab = _Tableau(A_full, b, u_full, basis, tol)

    cost1 = np.concatenate([np.zeros(nz), np.ones(len(art_rows))])
    tab.run(cost1)
    infeas = float(cost1 @ tab.values())
    if infeas > tol.feasibility * max(1.0, np.abs(b).max() if m else 1.0):
        y = cost1[tab.basis] @ tab.Binv
        y_orig = y * rowmul
        return LPResult(
            Status.INFEASIBLE, farkas=(y_orig[:m1], y_orig[m1:]), iterations=tab.iterations
        )

    # drive remaining artificials out of the basis where possible, then fix them at zero
    for r in range(m):
        if tab.basis[r] >= nz:
            row = tab.Binv[r] @ A_full[:, :nz]
            row[tab.is_basic[:nz]] = 0.0
            cands = np.flatnonzero(np.abs(row) > 1e-9)
            if cands.size:
                tab.pivot_in(r, int(cands[np.argmax(np.abs(row[cands]))]))
    tab.u[nz:] = 0.0
    tab.at_upper[nz:] = False
    tab.compute_xb()

    cost2 = np.concatenate([lp.c, np.zeros(m1), np.zeros(len(art_rows))])
    state, ray = tab.run(cost2)
    if state == "unbounded":
        return LPResult(Status.UNBOUNDED, ray=ray[:n].copy(), iterations=tab.iterations)

    tab.refactor()
    z = tab.values()
    x = np.clip(z[:n], 0.0, lp.upper)
    y = cost2[tab.basis] @ tab.Binv
    y_orig = y * rowmul
    y_ub, y_eq = y_orig[:m1], y_orig[m1:]
    d = lp.c - lp.A_ub.T @ y_ub - lp.A_eq.T @ y_eq
    res = LPResult(
        Status.OPTIMAL,
        x=x,
        objective=float(lp.c @ x),
        y_ub=y_ub,
        y_eq=y_eq,
        reduced_costs=d,
        basis=tuple(sorted(int(i) for i in tab.basis)),
        iterations=tab.iterations,
    )
    res.dual_objective = dual_objective(lp, y_ub, y_eq)
    return res


def dual_objective(lp: LinearProgram, y_ub: np.ndarray, y_eq: np.ndarray) -> float:
    d = lp.c - lp.A_ub.T @ y_ub - lp.A_eq.T @ y_eq
    finite = np.isfinite(lp.upper)
    return float(lp.b_ub @ y_ub + lp.b_eq @ y_eq + np.sum(lp.upper[finite] * np.minimum(d[finite], 0.0)))


# -- certificates and optimality checks --------------------------------------


def primal_residuals(lp: LinearProgram, x: np.ndarray) -> np.ndarray:
    """Per-row constraint violation after dividing each row by its largest coefficient."""
    def scaled(A, r):
        s = np.abs(A).max(axis=1) if A.size else np.zeros(A.shape[0])
        s[s == 0] = 1.0
        return r / s

    ub = scaled(lp.A_ub, np.maximum(lp.A_ub @ x - lp.b_ub, 0.0))
    eq = scaled(lp.A_eq, np.abs(lp.A_eq @ x - lp.b_eq))
    bounds = np.concatenate([np.maximum(-x, 0.0), np.maximum(x - lp.upper, 0.0)])
    return np.concatenate([ub, eq, bounds])


def optimality_report(lp: LinearProgram, res: LPResult) -> dict[str, float]:
    """Worst-case primal residual, reduced-cost sign violation, complementarity, and duality gap."""
    x, d = res.x, res.reduced_costs
    at_up = np.isfinite(lp.upper) & (x >= lp.upper - 1e-9)
    at_low = x <= 1e-9
    # a variable at its upper bound may have d <= 0, at its lower bound d >= 0,
    # strictly between bounds d = 0; a fixed variable is at both
    sign_viol = np.abs(d)
    sign_viol = np.where(at_up, np.minimum(sign_viol, np.maximum(d, 0.0)), sign_viol)
    sign_viol = np.where(at_low, np.minimum(sign_viol, np.maximum(-d, 0.0)), sign_viol)
    slack = lp.b_ub - lp.A_ub @ x
    dist = np.minimum(x, np.where(np.isfinite(lp.upper), lp.upper - x, np.inf))
    cs = np.concatenate([np.abs(res.y_ub * slack), np.abs(d) * dist])
    dual = dual_objective(lp, res.y_ub, res.y_eq)
    gap = abs(res.objective - dual) / max(1.0, abs(res.objective))
    return {
        "primal_residual": float(primal_residuals(lp, x).max(initial=0.0)),
        "reduced_cost_violation": float(sign_viol.max(initial=0.0)),
        "dual_sign_violation": float(np.maximum(res.y_ub, 0.0).max(initial=0.0)),
        "complementary_slackness": float(cs.max(initial=0.0)),
        "duality_gap": float(gap),
    }


def verify_farkas(lp: LinearProgram, y_ub: np.ndarray, y_eq: np.ndarray, tol: float = 1e-9) -> bool:
    """True if (y_ub, y_eq) proves the LP has no feasible point."""
    if np.any(y_ub > tol):
        return False
    g = lp.A_ub.T @ y_ub + lp.A_eq.T @ y_eq
    inf = ~np.isfinite(lp.upper)
    if np.any(g[inf] > tol):
        return False
    box_max = float(np.sum(np.maximum(g[~inf], 0.0) * lp.upper[~inf]))
    return float(lp.b_ub @ y_ub + lp.b_eq @ y_eq) - box_max > tol


def verify_ray(lp: LinearProgram, ray: np.ndarray, tol: float = 1e-9) -> bool:
    """True if ``ray`` is a feasible direction of unbounded descent."""
    if lp.c @ ray >= -tol or np.any(ray < -tol):
        return False
    if np.any(ray[np.isfinite(lp.upper)] > tol):
        return False
    if lp.m_ub and np.any(lp.A_ub @ ray > tol):
        return False
    if lp.m_eq and np.any(np.abs(lp.A_eq @ ray) > tol):
        return False
    return True


# -- presolve ----------------------------------------------------------------


@dataclass
class Presolved:
    lp: LinearProgram | None
    kept: np.ndarray
    fixed: dict[int, float]
    offset: float
    infeasible: bool = False

    def expand(self, x_reduced: np.ndarray, n: int) -> np.ndarray:
        x = np.zeros(n)
        x[self.kept] = x_reduced
        for j, v in self.fixed.items():
            x[j] = v
        return x


def presolve(lp: LinearProgram, tol: float = 1e-12) -> Presolved:
    """Remove fixed variables, singleton rows and empty rows/columns.

    Only exact reductions are applied, so the reduced LP has the same optimal
    value up to ``offset``.
    """
    A_ub, b_ub = lp.A_ub.copy(), lp.b_ub.copy()
    A_eq, b_eq = lp.A_eq.copy(), lp.b_eq.copy()
    upper = lp.upper.copy()
    c = lp.c
    n = lp.n
    alive = np.ones(n, dtype=bool)
    ub_alive = np.ones(A_ub.shape[0], dtype=bool)
    eq_alive = np.ones(A_eq.shape[0], dtype=bool)
    fixed: dict[int, float] = {}
    offset = 0.0

    def fix(j, v):
        nonlocal offset
        fixed[j] = v
        alive[j] = False
        offset += c[j] * v
        b_ub[:] -= A_ub[:, j] * v
        b_eq[:] -= A_eq[:, j] * v
        A_ub[:, j] = 0.0
        A_eq[:, j] = 0.0

    changed = True
    while changed:
        changed = False
        for j in np.flatnonzero(alive & (upper <= tol)):
            fix(int(j), 0.0)
            changed = True
        for i in np.flatnonzero(eq_alive):
            nzj = np.flatnonzero(np.abs(A_eq[i]) > tol)
            if nzj.size == 0:
                if abs(b_eq[i]) > 1e-9:
                    return Presolved(None, np.flatnonzero(alive), fixed, offset, infeasible=True)
                eq_alive[i] = False
                changed = True
            elif nzj.size == 1:
                j = int(nzj[0])
                v = b_eq[i] / A_eq[i, j]
                if v < -1e-9 or v > upper[j] + 1e-9:
                    return Presolved(None, np.flatnonzero(alive), fixed, offset, infeasible=True)
                eq_alive[i] = False
                fix(j, min(max(v, 0.0), upper[j]))
                changed = True
        for i in np.flatnonzero(ub_alive):
            nzj = np.flatnonzero(np.abs(A_ub[i]) > tol)
            if nzj.size == 0:
                if b_ub[i] < -1e-9:
                    return Presolved(None, np.flatnonzero(alive), fixed, offset, infeasible=True)
                ub_alive[i] = False
                changed = True
            elif nzj.size == 1:
                j = int(nzj[0])
                a = A_ub[i, j]
                if a > 0:
                    upper[j] = min(upper[j], b_ub[i] / a)
                    if upper[j] < -1e-9:
                        return Presolved(None, np.flatnonzero(alive), fixed, offset, infeasible=True)
                    upper[j] = max(upper[j], 0.0)
                    ub_alive[i] = False
                    changed = True
                elif b_ub[i] / a <= 0:
                    # a x >= b/a with a < 0 and bound <= 0 is implied by x >= 0
                    ub_alive[i] = False
                    changed = True
        for j in np.flatnonzero(alive):
            if not (np.any(np.abs(A_ub[ub_alive, j]) > tol) or np.any(np.abs(A_eq[eq_alive, j]) > tol)):
                if c[j] >= 0:
                    fix(int(j), 0.0)
                elif np.isfinite(upper[j]):
                    fix(int(j), float(upper[j]))
                else:
                    continue
                changed = True

    kept = np.flatnonzero(alive)
    reduced = LinearProgram(
        c[kept],
        A_ub[np.ix_(ub_alive, kept)],
        b_ub[ub_alive],
        A_eq[np.ix_(eq_alive, kept)],
        b_eq[eq_alive],
        upper[kept],
        [lp.var_names[j] for j in kept],
        [nm for nm, a in zip(lp.ub_names, ub_alive) if a],
        [nm for nm, a in zip(lp.eq_names, eq_alive) if a],
    )
    return Presolved(reduced, kept, fixed, offset)
