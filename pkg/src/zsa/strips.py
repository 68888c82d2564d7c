"""Critical strips, projection sets and the theorem-verification suite.

The projection set R_n collects the real parts of zeros of G_n; it is
characterized pointwise by m(x) <= p^x <= M(x) with m, M the extremes of
|G_n^*| on the vertical line through x.  This module computes membership
scans, the resulting projection intervals, empirical strip bounds from
certified zeros, the positivity margin delta_n, and runs the verdict
suite over the family of statements the package is built to check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from zsa.gdpoly import (
    DomainError,
    GeneralizedDirichletPoly,
    evaluate_real,
    is_prime,
    last_prime_leq,
    m_star,
    make_g,
    make_g_star,
    make_partial_sum,
)
from zsa.levelset import (
    SearchError,
    bstar_dominance,
    extreme_monotonicity,
    get_engine,
    lower_extreme,
    upper_extreme,
)
from zsa.realroots import (
    RealExpEquation,
    factorial_inequality_check,
    hadamard_drift_constant,
    solve_unique_root,
)
from zsa.zerofinder import ComplexZero, zeros_up_to_height

LOG2 = math.log(2.0)
PASS, FAIL, INCONCLUSIVE, REPORT = "pass", "fail", "inconclusive", "report"

THEOREM_IDS = ("T2", "C3", "T10", "C11", "L12", "L13", "T14", "T15",
               "C16", "T17", "C19", "C20", "C21", "asympt_report",
               "factorials")


# ---------------------------------------------------------------------------
# Shared zero store

class ZeroStore:
    """Monotone per-(family, n) store of certified zeros of one family.

    Extending the searched height reuses all previously certified zeros;
    heights only grow, so empirical bounds are monotone by construction.
    """

    def __init__(self):
        self._data: dict[tuple[str, int], tuple[float, list[ComplexZero]]] = {}

    def zeros(self, family: str, n: int, height: float,
              tol: float = 1e-10) -> list[ComplexZero]:
        key = (family, n)
        done, zs = self._data.get(key, (0.0, []))
        if height > done:
            poly = _family_poly(family, n)
            x_lo, x_hi = zero_envelope(family, n)
            zs = zs + zeros_up_to_height(poly, x_lo, x_hi, height,
                                         tol=tol, y_start=done)
            zs.sort(key=lambda z: (z.position.imag, z.position.real))
            self._data[key] = (height, zs)
            done = height
        return [z for z in zs if z.position.imag <= height]

    def searched_height(self, family: str, n: int) -> float:
        return self._data.get((family, n), (0.0, []))[0]


_STORE = ZeroStore()


def shared_store() -> ZeroStore:
    return _STORE


def _family_poly(family: str, n: int) -> GeneralizedDirichletPoly:
    if family == "G":
        return make_g(n)
    if family == "zeta":
        return make_partial_sum(n)
    if family == "Gstar":
        return make_g_star(n)
    raise DomainError(f"unknown family {family!r}")


def analytic_upper_bound(n: int) -> float:
    """Unique root of 1 + 2^x + ... + (n-1)^x = n^x."""
    if n < 3:
        raise DomainError("analytic upper bound needs n >= 3")
    eq = RealExpEquation(
        GeneralizedDirichletPoly.from_terms(
            [(1.0, k) for k in range(1, n)] + [(-1.0, n)]), 0.0)
    return solve_unique_root(eq, (0.0, 4.0))


def zero_envelope(family: str, n: int) -> tuple[float, float]:
    """Vertical strip guaranteed to contain every zero of the family."""
    if n == 2:
        return (-1.0, 1.0)
    hi = analytic_upper_bound(n) + 0.1
    lo = -(n + 1) * LOG2 - 1.0
    if family == "G":
        return (lo, hi)
    if family == "zeta":
        return (-hi, -lo)
    if family == "Gstar":
        # Same shape of bound with the largest remaining base dominant.
        top = m_star(n)
        terms = [(1.0, k) for k in range(1, n + 1)
                 if k not in (last_prime_leq(n), top)]
        terms.append((-1.0, top))
        eq = RealExpEquation(GeneralizedDirichletPoly.from_terms(terms), 0.0)
        return (lo, solve_unique_root(eq, (0.0, 8.0)) + 0.1)
    raise DomainError(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# Membership and projection intervals

def rn_membership(n: int, x: float, tol: float = 1e-9) -> bool:
    """Whether the line Re z = x meets a zero of G_n: m(x) <= p^x <= M(x)."""
    if n <= 2:
        raise DomainError("membership requires n > 2")
    engine = get_engine(n)
    level = float(last_prime_leq(n)) ** x
    if level > engine.m_max(x) + tol:
        return False
    prof = engine.profile(x)
    return prof.m_hat <= level + tol


@dataclass(frozen=True)
class ProjectionInterval:
    x_lo: float
    x_hi: float
    grid_step: float
    holes: tuple[float, ...]     # grid abscissas inside the span that failed


def projection_interval(n: int, grid_step: float = 1e-3,
                        tol: float = 1e-8,
                        scan: tuple[float, float] | None = None) -> ProjectionInterval:
    """Contiguous span of R_n on a grid, endpoints refined by bisection.

    The scan is vectorized: grid minima of |G_n^*| decide membership
    outright where the Lipschitz slack allows, and only the ambiguous
    abscissas get the refined profile treatment.
    """
    if n <= 2:
        raise DomainError("projection intervals require n > 2")
    engine = get_engine(n)
    p = float(last_prime_leq(n))
    if scan is None:
        scan = (-3.0, analytic_upper_bound(n) + 0.5)
    xs = np.arange(scan[0], scan[1] + 0.5 * grid_step, grid_step)
    levels = p ** xs
    m_max = evaluate_real(engine.poly, xs)
    mins, _ = engine.min_modulus_grid(xs)
    member = np.zeros(xs.size, dtype=bool)
    upper_ok = levels <= m_max + 1e-12
    clear_in = upper_ok & (levels >= mins)     # grid min overestimates
    member[clear_in] = True
    half = 0.5 * engine.step
    for i in np.nonzero(upper_ok & ~clear_in)[0]:
        slack = half * engine.y_lipschitz(float(xs[i]))
        if mins[i] - levels[i] > slack:
            continue                            # rigorously infeasible
        member[i] = rn_membership(n, float(xs[i]), tol=1e-12)
    idx = np.nonzero(member)[0]
    if idx.size == 0:
        raise SearchError(f"no membership found on the grid over {scan}")
    lo_i, hi_i = int(idx[0]), int(idx[-1])
    holes = tuple(float(xs[i]) for i in range(lo_i, hi_i + 1) if not member[i])
    if lo_i == 0 or hi_i == xs.size - 1:
        raise SearchError("membership reaches the scan boundary")

    def refine(inside: float, outside: float) -> float:
        while abs(inside - outside) > tol:
            mid = 0.5 * (inside + outside)
            if rn_membership(n, mid, tol=1e-12):
                inside = mid
            else:
                outside = mid
        return 0.5 * (inside + outside)

    x_lo = refine(float(xs[lo_i]), float(xs[lo_i - 1]))
    x_hi = refine(float(xs[hi_i]), float(xs[hi_i + 1]))
    return ProjectionInterval(x_lo=x_lo, x_hi=x_hi, grid_step=grid_step,
                              holes=holes)


# ---------------------------------------------------------------------------
# Empirical bounds and delta_n

@dataclass(frozen=True)
class EmpiricalBounds:
    a_hat: float | None
    b_hat: float | None
    height: float
    zero_count: int


def empirical_bounds(n: int, family: str = "G",
                     height_T: float = 200.0,
                     store: ZeroStore | None = None) -> EmpiricalBounds:
    """Min and max real part over certified zeros up to a given height."""
    if height_T <= 0:
        raise DomainError("height must be positive")
    store = store or _STORE
    zs = store.zeros(family, n, height_T)
    if not zs:
        return EmpiricalBounds(None, None, height_T, 0)
    res = [z.position.real for z in zs]
    return EmpiricalBounds(a_hat=min(res), b_hat=max(res),
                           height=height_T, zero_count=len(zs))


def delta_n(n: int, tol: float = 1e-8, height_T: float = 200.0,
            store: ZeroStore | None = None) -> float:
    """min(b_{n, a_n}, b_hat_n), the positive margin around the axis."""
    if n <= 2:
        raise DomainError("delta_n requires n > 2")
    proj = projection_interval(n, grid_step=0.01, tol=tol)
    b_at_left = upper_extreme(n, proj.x_lo, tol=tol)
    emp = empirical_bounds(n, "G", height_T, store=store)
    if emp.b_hat is None:
        raise SearchError(f"no zeros of G_{n} up to height {height_T}")
    return min(b_at_left, emp.b_hat)


# ---------------------------------------------------------------------------
# Verdict suite

@dataclass(frozen=True)
class Budgets:
    height: float = 600.0
    witnesses: int = 3
    near_axis: float = 0.05
    k_max: int = 300
    m_max: int = 10_000
    grid_step: float = 0.01
    desk_range: tuple[int, int] = (3, 12)


def _sign_witnesses(zs: Sequence[ComplexZero], near: float):
    pos = sum(1 for z in zs if z.position.real > 0)
    neg = sum(1 for z in zs if z.position.real < 0)
    near_pos = sum(1 for z in zs if 0 < z.position.real <= near)
    near_neg = sum(1 for z in zs if -near <= z.position.real < 0)
    return pos, neg, near_pos, near_neg


def verify_theorem(theorem_id: str, n_range: Sequence[int],
                   budgets: Budgets | None = None,
                   store: ZeroStore | None = None) -> dict:
    """Per-n verdicts for one statement id.

    Existence claims come back pass or inconclusive, never fail; directly
    checkable inequalities come back pass or fail.
    """
    if theorem_id not in THEOREM_IDS:
        raise DomainError(f"unknown theorem id {theorem_id!r}")
    b = budgets or Budgets()
    store = store or _STORE
    out: dict = {}

    if theorem_id == "factorials":
        bad = [k for k in range(3, b.k_max + 1)
               if not factorial_inequality_check(k).holds_weak]
        bad += [k for k in range(6, b.k_max + 1)
                if not factorial_inequality_check(k).holds_sharp]
        bad_m = [m for m in range(5, b.m_max + 1)
                 if hadamard_drift_constant(m).margin <= 0]
        out["all"] = PASS if not bad and not bad_m else FAIL
        out["detail"] = {"bad_k": bad, "bad_m": bad_m}
        return out

    if theorem_id == "asympt_report":
        rows = []
        for n in n_range:
            emp = empirical_bounds(n, "G", b.height, store=store)
            # zeta-frame bounds are the reversal of the G-frame ones
            b_zeta = -emp.a_hat if emp.a_hat is not None else None
            a_zeta = -emp.b_hat if emp.b_hat is not None else None
            rows.append({
                "n": n,
                "b_hat": b_zeta,
                "b_model": 1.0 + (4.0 / math.pi - 1.0)
                * math.log(math.log(n)) / math.log(n),
                "a_hat_over_n": a_zeta / n if a_zeta is not None else None,
                "a_model": -LOG2,
            })
        return {"verdict": REPORT, "rows": rows}

    for n in n_range:
        if theorem_id == "T2":
            zs = store.zeros("G", n, b.height)
            pos, neg, _, _ = _sign_witnesses(zs, b.near_axis)
            out[n] = PASS if pos >= b.witnesses and neg >= b.witnesses \
                else INCONCLUSIVE
        elif theorem_id == "C3":
            emp = empirical_bounds(n, "G", b.height, store=store)
            ok = emp.a_hat is not None and emp.a_hat < 0 < emp.b_hat
            out[n] = PASS if ok else INCONCLUSIVE
        elif theorem_id == "T10":
            proj = projection_interval(n, grid_step=b.grid_step)
            x0 = proj.x_lo
            hi = min(upper_extreme(n, x0), proj.x_hi)
            pts = np.linspace(x0, hi, 21)
            ok = all(rn_membership(n, float(x)) for x in pts)
            out[n] = PASS if ok else FAIL
        elif theorem_id == "C11":
            if n != 3:
                continue
            proj = projection_interval(3, grid_step=1e-3)
            a3 = solve_unique_root(RealExpEquation(
                GeneralizedDirichletPoly.from_terms([(1.0, 2), (1.0, 3)]),
                1.0), (-0.80, -0.78))
            ok = (abs(proj.x_lo - a3) < 1e-6 and abs(proj.x_hi - 1.0) < 1e-6
                  and not proj.holes)
            out[3] = PASS if ok else FAIL
        elif theorem_id == "L12":
            grid = list(np.linspace(-2.0, 0.8, 20))
            out[n] = PASS if extreme_monotonicity(n, grid).ok else FAIL
        elif theorem_id == "L13":
            out[n] = PASS if bstar_dominance(n, (-1.0, 0.0, 1.0)).ok else FAIL
        elif theorem_id == "T14":
            if n != 4:
                continue
            proj = projection_interval(4, grid_step=1e-3)
            beta4 = beta_fixed_point(4)
            au = analytic_upper_bound(4)
            ok = (not proj.holes and proj.x_hi <= beta4 + 1e-6
                  and beta4 <= au)
            out[4] = PASS if ok else FAIL
        elif theorem_id in ("T15", "C16"):
            zs = store.zeros("Gstar", n, min(b.height, 100.0))
            if n in (3, 4):
                ok = all(abs(z.position.real) < 1e-8 for z in zs) and zs
                out[n] = PASS if ok else FAIL
            else:
                found = any(abs(z.position.real) > 1e-6 for z in zs)
                out[n] = PASS if found else INCONCLUSIVE
        elif theorem_id == "T17":
            out[n] = PASS if delta_n(n, store=store) > 0 else FAIL
        elif theorem_id == "C21":
            proj = projection_interval(n, grid_step=b.grid_step)
            out[n] = PASS if proj.x_lo < 0 < proj.x_hi else FAIL
        elif theorem_id == "C20":
            zs = store.zeros("G", n, b.height)
            _, _, np_, nn = _sign_witnesses(zs, b.near_axis)
            out[n] = PASS if np_ >= 1 and nn >= 1 else INCONCLUSIVE

    if theorem_id == "C19":
        intervals = [projection_interval(n, grid_step=b.grid_step)
                     for n in n_range]
        lo = max(iv.x_lo for iv in intervals)
        hi = min(iv.x_hi for iv in intervals)
        deltas = [delta_n(n, store=store) for n in n_range]
        ok = lo < 0 < hi
        out["common"] = PASS if ok else INCONCLUSIVE
        out["interval"] = (lo, hi)
        out["delta_min"] = min(deltas)
    return out


def beta_fixed_point(n: int) -> float:
    """Fixed point of x -> b_{n,x}: the level curve of x0 = beta has
    upper extreme beta itself, so b_n <= beta."""
    if n <= 2:
        raise DomainError("fixed point requires n > 2")

    def g(x):
        return upper_extreme(n, x, tol=1e-10) - x

    lo, hi = 0.0, analytic_upper_bound(n)
    if g(lo) <= 0 or g(hi) >= 0:
        raise SearchError("fixed point not bracketed by [0, analytic upper]")
    while hi - lo > 1e-8:
        mid = 0.5 * (lo + hi)
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Aggregate report

@dataclass(frozen=True)
class StripReport:
    n: int
    family: str
    empirical: EmpiricalBounds
    analytic_upper: float
    projection: ProjectionInterval
    delta: float
    verdicts: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "family": self.family,
            "empirical_bounds": {
                "a_hat": self.empirical.a_hat,
                "b_hat": self.empirical.b_hat,
                "height": self.empirical.height,
                "zero_count": self.empirical.zero_count,
            },
            "analytic_upper": self.analytic_upper,
            "projection_interval": {
                "x_lo": self.projection.x_lo,
                "x_hi": self.projection.x_hi,
                "grid_step": self.projection.grid_step,
                "holes": list(self.projection.holes),
            },
            "delta_n": self.delta,
            "verdicts": self.verdicts,
        }


def strip_report(n: int, family: str = "G", height_T: float = 200.0,
                 grid_step: float = 0.01,
                 store: ZeroStore | None = None) -> StripReport:
    """One n's worth of strip data: bounds, projection, delta, verdicts."""
    store = store or _STORE
    emp = empirical_bounds(n, family, height_T, store=store)
    proj = projection_interval(n, grid_step=grid_step)
    if family == "zeta":
        proj = ProjectionInterval(x_lo=-proj.x_hi, x_hi=-proj.x_lo,
                                  grid_step=proj.grid_step,
                                  holes=tuple(-h for h in reversed(proj.holes)))
    d = delta_n(n, height_T=height_T, store=store)
    verdicts = {
        "T17": PASS if d > 0 else FAIL,
        "C21": PASS if proj.x_lo < 0 < proj.x_hi else FAIL,
    }
    return StripReport(n=n, family=family, empirical=emp,
                       analytic_upper=analytic_upper_bound(n),
                       projection=proj, delta=d, verdicts=verdicts)
