"""Real-line tools for exponential-sum equations.

Sign-change counting (the Polya-Szego rule for sums of exponentials with
distinct positive bases), a brute-force real-zero counter used as its
oracle, unique-root solving for equations like 1 + 2^x + 4^x = 3^x0, and
the factorial / drift inequalities used by the half-plane arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from zsa.gdpoly import (
    DomainError,
    GeneralizedDirichletPoly,
    evaluate_real,
    last_prime_leq,
    m_star,
)


@dataclass(frozen=True)
class RealExpEquation:
    """poly(x) = level, poly restricted to real argument."""

    poly: GeneralizedDirichletPoly
    level: float

    def __post_init__(self):
        if not math.isfinite(self.level):
            raise DomainError("level must be finite")

    def residual(self, x):
        return evaluate_real(self.poly, x) - self.level

    def merged_terms(self) -> list[tuple[float, Fraction]]:
        """Base-sorted terms of poly - level, the level merged at base 1."""
        terms = []
        seen_one = False
        for c, b in self.poly.terms:
            if b == 1:
                terms.append((c - self.level, b))
                seen_one = True
            else:
                terms.append((c, b))
        if not seen_one and self.level != 0.0:
            terms.append((-self.level, Fraction(1)))
            terms.sort(key=lambda t: t[1])
        return terms

    def merged_coefficients(self) -> list[float]:
        return [c for c, _ in self.merged_terms()]


@dataclass(frozen=True)
class SignChangeReport:
    W: int
    N: int
    parity_ok: bool


def sign_changes(equation: RealExpEquation) -> int:
    """Strict sign alternations of the base-ordered coefficients, zeros ignored."""
    coeffs = [c for c in equation.merged_coefficients() if c != 0]
    if not coeffs:
        raise DomainError("all coefficients vanish")
    w = 0
    for a, b in zip(coeffs, coeffs[1:]):
        if (a > 0) != (b > 0):
            w += 1
    return w


def _root_envelope(equation: RealExpEquation) -> tuple[float, float]:
    """Interval guaranteed to contain every real zero of the residual.

    Outside it one extreme-base term dominates the sum of all others.
    """
    terms = [(c, float(b)) for c, b in equation.merged_terms() if c != 0]
    if len(terms) < 2:
        return (-1.0, 1.0)
    total = sum(abs(c) for c, _ in terms)
    c_hi, b_hi = terms[-1]
    _, b_hi2 = terms[-2]
    hi = math.log(total / abs(c_hi)) / math.log(b_hi / b_hi2) + 1.0
    c_lo, b_lo = terms[0]
    _, b_lo2 = terms[1]
    lo = -math.log(total / abs(c_lo)) / math.log(b_lo2 / b_lo) - 1.0
    return (min(lo, -1.0), max(hi, 1.0))


def count_real_zeros_brute(equation: RealExpEquation,
                           interval: tuple[float, float],
                           grid_points: int = 4001) -> int:
    """Sign-crossing count of the residual on a grid, bisection-confirmed.

    Counts transversal crossings only; even-multiplicity touches are
    invisible by design (the parity check never needs them on random
    instances).  An exactly-zero grid sample triggers a level nudge of
    1e-9 and a retry, to dodge degenerate draws.
    """
    lo, hi = interval
    if not lo < hi:
        raise DomainError("empty interval")
    if grid_points < 1000:
        raise DomainError("need at least 1000 grid points")
    xs = np.linspace(lo, hi, grid_points)
    for nudge in (0.0, 1e-9, -1e-9):
        eq = equation if nudge == 0.0 else RealExpEquation(
            equation.poly, equation.level + nudge)
        res = eq.residual(xs)
        if np.all(res == 0.0):
            raise DomainError("residual identically zero on grid")
        if np.any(res == 0.0):
            continue
        count = 0
        signs = np.sign(res)
        for i in np.nonzero(signs[:-1] != signs[1:])[0]:
            root = brentq(eq.residual, xs[i], xs[i + 1])
            if xs[i] <= root <= xs[i + 1]:
                count += 1
        return count
    raise DomainError("degenerate equation: grid zeros persist under nudging")


def polya_szego_check(equation: RealExpEquation,
                      interval: tuple[float, float] | None = None) -> SignChangeReport:
    """W >= N with W - N even, N from the brute-force oracle."""
    w = sign_changes(equation)
    if interval is None:
        interval = _root_envelope(equation)
    n = count_real_zeros_brute(equation, interval)
    ok = w >= n and (w - n) % 2 == 0
    return SignChangeReport(W=w, N=n, parity_ok=ok)


class BracketError(ValueError):
    """No sign change found on (or around) the requested bracket."""


def solve_unique_root(equation: RealExpEquation,
                      bracket: tuple[float, float],
                      tol: float | None = None) -> float:
    """Root of an equation whose sign pattern guarantees a single real zero.

    Requires W = 1.  The bracket is doubled around its midpoint up to
    2^10 times if the residual does not change sign on it.
    """
    if sign_changes(equation) != 1:
        raise DomainError("equation does not have sign-change count 1")
    if tol is None:
        tol = 1e-12 * max(1.0, abs(equation.level))
    lo, hi = bracket
    if not lo < hi:
        raise BracketError("bracket is empty")
    f_lo = equation.residual(lo)
    f_hi = equation.residual(hi)
    tries = 0
    while f_lo * f_hi > 0:
        tries += 1
        if tries > 10:
            raise BracketError("no sign change after 2^10 bracket doublings")
        mid = 0.5 * (lo + hi)
        half = (hi - lo)
        lo, hi = mid - half, mid + half
        f_lo = equation.residual(lo)
        f_hi = equation.residual(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    return float(brentq(equation.residual, lo, hi, xtol=tol, rtol=8.9e-16))


# ---------------------------------------------------------------------------
# Constant arithmetic for the half-plane arguments

class FactorialInequalities(NamedTuple):
    holds_weak: bool    # (k!)^2 > k^k
    holds_sharp: bool   # (k!)^2 > k^(k-1) (k-1)^2


def factorial_inequality_check(k: int) -> FactorialInequalities:
    """Both factorial inequalities, evaluated in the log domain."""
    if k < 2:
        raise DomainError("k must be >= 2")
    log_fact2 = 2.0 * math.lgamma(k + 1)
    weak = log_fact2 > k * math.log(k)
    sharp = log_fact2 > (k - 1) * math.log(k) + 2.0 * math.log(k - 1)
    return FactorialInequalities(holds_weak=weak, holds_sharp=sharp)


class DriftConstant(NamedTuple):
    a_m: float      # log(m! / p) / (m - 1), p the last prime <= m
    margin: float   # 2 a_m - log(m*), positive for every m > 4


def hadamard_drift_constant(m: int) -> DriftConstant:
    """Exponential drift constant of the pruned family and its margin."""
    if m <= 4:
        raise DomainError("drift constant defined for m > 4")
    p = last_prime_leq(m)
    a_m = (math.lgamma(m + 1) - math.log(p)) / (m - 1)
    return DriftConstant(a_m=a_m, margin=2.0 * a_m - math.log(m_star(m)))
