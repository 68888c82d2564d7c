"""Generalized Dirichlet polynomials: representation and stable evaluation.

A polynomial here is a finite sum  f(z) = sum_k a_k * mu_k^z  with real
coefficients a_k and positive real bases mu_k.  The three families of
interest are

    zeta_n(z) = sum_{k=1..n} k^(-z)      (bases 1/k)
    G_n(z)    = zeta_n(-z)               (bases k)
    G_n^*(z)  = G_n(z) minus the term of the largest prime p <= n

Bases are stored as exact rationals so that zeta_n and G_n share one
evaluator (zeta_n keeps bases 1/k instead of negating z downstream).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

# Exponent clamp for mu^x in log domain; strip scans reach x ~ +-50*log(n).
EXP_CLAMP = 700.0


class DomainError(ValueError):
    """Raised when an argument is outside an operation's domain."""


def _as_fraction(base) -> Fraction:
    if isinstance(base, Fraction):
        return base
    if isinstance(base, int):
        return Fraction(base)
    return Fraction(base).limit_denominator(10**12)


@dataclass(frozen=True)
class GeneralizedDirichletPoly:
    """Finite sum of real-coefficient exponentials a_k * mu_k^z.

    terms are (coefficient, base) pairs sorted strictly ascending by base;
    zero coefficients are never stored.
    """

    terms: tuple[tuple[float, Fraction], ...]
    label: str = ""

    def __post_init__(self):
        if not self.terms:
            raise DomainError("polynomial needs at least one term")
        prev = None
        for coeff, base in self.terms:
            if base <= 0:
                raise DomainError(f"base {base} is not positive")
            if coeff == 0:
                raise DomainError("zero coefficients must not be stored")
            if prev is not None and base <= prev:
                raise DomainError("bases must be strictly increasing")
            prev = base

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[float, object]], label: str = ""):
        tt = sorted(((float(c), _as_fraction(b)) for c, b in terms if c != 0),
                    key=lambda t: t[1])
        return cls(terms=tuple(tt), label=label)

    @cached_property
    def coeffs(self) -> np.ndarray:
        return np.array([c for c, _ in self.terms], dtype=float)

    @cached_property
    def log_bases(self) -> np.ndarray:
        return np.array([math.log(b) for _, b in self.terms], dtype=float)

    @property
    def max_base(self) -> Fraction:
        return self.terms[-1][1]

    def abs_scale(self, x_lo: float, x_hi: float) -> float:
        """Upper bound sum_k |a_k| * max(mu_k^x_lo, mu_k^x_hi) on a strip."""
        t_lo = np.clip(self.log_bases * x_lo, -EXP_CLAMP, EXP_CLAMP)
        t_hi = np.clip(self.log_bases * x_hi, -EXP_CLAMP, EXP_CLAMP)
        return float(np.sum(np.abs(self.coeffs) *
                            np.maximum(np.exp(t_lo), np.exp(t_hi))))

    def __call__(self, z):
        return evaluate(self, z)

    def to_json_dict(self) -> dict:
        return {
            "label": self.label,
            "terms": [[c, b.numerator, b.denominator] for c, b in self.terms],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, obj: dict) -> "GeneralizedDirichletPoly":
        terms = [(float(c), Fraction(int(num), int(den)))
                 for c, num, den in obj["terms"]]
        return cls(terms=tuple(terms), label=obj.get("label", ""))

    @classmethod
    def from_json(cls, text: str) -> "GeneralizedDirichletPoly":
        return cls.from_json_dict(json.loads(text))


def evaluate(poly: GeneralizedDirichletPoly, z):
    """Evaluate sum a_k exp(z log mu_k), scalar or ndarray argument.

    Exponentials are computed in the log domain with a clamp at +-700 so
    that deep strip scans do not overflow.  The split into exp(x L) and
    (cos(y L), sin(y L)) keeps f(conj z) = conj f(z) exact for real
    coefficients.
    """
    z = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z)):
        raise DomainError("non-finite evaluation point")
    x = z.real
    y = z.imag
    out = np.zeros(z.shape, dtype=complex)
    for coeff, logb in zip(poly.coeffs, poly.log_bases):
        t = np.clip(x * logb, -EXP_CLAMP, EXP_CLAMP)
        out += coeff * np.exp(t) * np.exp(1j * (y * logb))
    if out.shape == ():
        return complex(out)
    return out


def evaluate_real(poly: GeneralizedDirichletPoly, x):
    """Evaluate on the real axis without complex arithmetic."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape, dtype=float)
    for coeff, logb in zip(poly.coeffs, poly.log_bases):
        out += coeff * np.exp(np.clip(x * logb, -EXP_CLAMP, EXP_CLAMP))
    if out.shape == ():
        return float(out)
    return out


def evaluate_derivative(poly: GeneralizedDirichletPoly, z):
    """d/dz of the polynomial: sum a_k log(mu_k) mu_k^z."""
    z = np.asarray(z, dtype=complex)
    x = z.real
    y = z.imag
    out = np.zeros(z.shape, dtype=complex)
    for coeff, logb in zip(poly.coeffs, poly.log_bases):
        t = np.clip(x * logb, -EXP_CLAMP, EXP_CLAMP)
        out += coeff * logb * np.exp(t) * np.exp(1j * (y * logb))
    if out.shape == ():
        return complex(out)
    return out


# ---------------------------------------------------------------------------
# Prime helpers

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def last_prime_leq(n: int) -> int:
    """Largest prime p <= n."""
    if n < 2:
        raise DomainError("no prime below 2")
    p = n
    while not is_prime(p):
        p -= 1
    return p


def m_star(m: int) -> int:
    """Largest base appearing in G_m^*: m-1 if m is prime, else m."""
    if m <= 2:
        raise DomainError("m_star requires m > 2")
    return m - 1 if is_prime(m) else m


# ---------------------------------------------------------------------------
# Family constructors

def make_partial_sum(n: int) -> GeneralizedDirichletPoly:
    """zeta_n(z) = sum_{k=1..n} (1/k)^z."""
    if n < 2:
        raise DomainError("partial sums require n >= 2")
    return GeneralizedDirichletPoly.from_terms(
        ((1.0, Fraction(1, k)) for k in range(1, n + 1)), label=f"zeta_{n}")


def make_g(n: int) -> GeneralizedDirichletPoly:
    """G_n(z) = zeta_n(-z) = sum_{k=1..n} k^z."""
    if n < 2:
        raise DomainError("G_n requires n >= 2")
    return GeneralizedDirichletPoly.from_terms(
        ((1.0, Fraction(k)) for k in range(1, n + 1)), label=f"G_{n}")


def make_g_star(n: int) -> GeneralizedDirichletPoly:
    """G_n with the term of the largest prime p <= n removed."""
    if n <= 2:
        raise DomainError("G_n^* requires n > 2")
    p = last_prime_leq(n)
    return GeneralizedDirichletPoly.from_terms(
        ((1.0, Fraction(k)) for k in range(1, n + 1) if k != p),
        label=f"G_{n}_star")


def family_poly(family: str, n: int) -> GeneralizedDirichletPoly:
    """Constructor dispatch for the CLI family names."""
    if family == "zeta":
        return make_partial_sum(n)
    if family == "G":
        return make_g(n)
    if family == "Gstar":
        return make_g_star(n)
    raise DomainError(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# Squared-modulus expansion

@dataclass(frozen=True)
class SquaredModulusExpansion:
    """Cosine expansion of |f(x+iy)|^2 for a real-coefficient polynomial.

    |f|^2 = sum_k a_k^2 mu_k^{2x}
          + sum_{j<m} 2 a_j a_m (mu_j mu_m)^x cos(y log(mu_m/mu_j))
    """

    diag_coeffs: tuple[float, ...]        # a_k^2
    diag_logs: tuple[float, ...]          # 2 log mu_k
    cross_pairs: tuple[tuple[int, int], ...]
    cross_coeffs: tuple[float, ...]       # 2 a_j a_m
    cross_logs: tuple[float, ...]         # log mu_j + log mu_m
    cross_freqs: tuple[float, ...]        # log(mu_m / mu_j)

    def amplitudes(self, x: float) -> tuple[np.ndarray, np.ndarray]:
        """(diagonal sum, cross-term amplitude vector) at abscissa x."""
        d = np.asarray(self.diag_coeffs) * np.exp(
            np.clip(x * np.asarray(self.diag_logs), -EXP_CLAMP, EXP_CLAMP))
        c = np.asarray(self.cross_coeffs) * np.exp(
            np.clip(x * np.asarray(self.cross_logs), -EXP_CLAMP, EXP_CLAMP))
        return d, c

    def value(self, x: float, y):
        """|f(x+iy)|^2; y may be a scalar or an ndarray."""
        y = np.asarray(y, dtype=float)
        d, c = self.amplitudes(x)
        freqs = np.asarray(self.cross_freqs)
        cosmat = np.cos(np.outer(y, freqs)) if y.ndim else np.cos(y * freqs)
        out = float(np.sum(d)) + cosmat @ c
        if y.shape == ():
            return float(out)
        return out


def squared_modulus_expansion(poly: GeneralizedDirichletPoly) -> SquaredModulusExpansion:
    """Expand |f(x+iy)|^2 into diagonal and cosine cross terms."""
    coeffs = poly.coeffs
    logs = poly.log_bases
    k = len(coeffs)
    pairs, camps, clogs, cfreqs = [], [], [], []
    for j in range(k):
        for m in range(j + 1, k):
            pairs.append((j, m))
            camps.append(2.0 * coeffs[j] * coeffs[m])
            clogs.append(logs[j] + logs[m])
            cfreqs.append(logs[m] - logs[j])
    return SquaredModulusExpansion(
        diag_coeffs=tuple(float(c * c) for c in coeffs),
        diag_logs=tuple(float(2 * l) for l in logs),
        cross_pairs=tuple(pairs),
        cross_coeffs=tuple(camps),
        cross_logs=tuple(clogs),
        cross_freqs=tuple(cfreqs),
    )
