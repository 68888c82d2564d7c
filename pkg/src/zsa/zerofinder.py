"""Complex zero location in rectangles via the argument principle.

Winding numbers come from adaptive phase tracking along the boundary
(step-halving until every successive phase delta is below pi/4), boxes
are split recursively until each isolates one zero, and Newton polishing
finishes the job.  Closed-form zero lists for the three families whose
zeros are known exactly, translation numbers of the almost-periodic
families, and zero replication along vertical translates round out the
constructive side.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from zsa.gdpoly import (
    EXP_CLAMP,
    DomainError,
    GeneralizedDirichletPoly,
    evaluate,
    evaluate_derivative,
    make_g,
    make_partial_sum,
)

TWO_PI = 2.0 * math.pi
BOUNDARY_GUARD_REL = 1e-8
PHASE_STEP = math.pi / 4.0


class BoundaryError(RuntimeError):
    """A zero sits (numerically) on the contour; perturb the rectangle."""


class SearchExhaustedError(RuntimeError):
    """A bounded search ran out of span or budget."""


class IncompleteEnumerationError(RuntimeError):
    """Subdivision budget exhausted; unresolved boxes attached."""

    def __init__(self, message, boxes):
        super().__init__(message)
        self.boxes = boxes


@dataclass(frozen=True)
class Rectangle:
    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise DomainError("degenerate rectangle")
        for v in (self.x_min, self.x_max, self.y_min, self.y_max):
            if not math.isfinite(v):
                raise DomainError("rectangle bounds must be finite")

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.x_min + self.x_max),
                       0.5 * (self.y_min + self.y_max))

    def contains(self, z: complex, slack: float = 0.0) -> bool:
        return (self.x_min - slack <= z.real <= self.x_max + slack and
                self.y_min - slack <= z.imag <= self.y_max + slack)

    def corners(self) -> list[complex]:
        return [complex(self.x_min, self.y_min), complex(self.x_max, self.y_min),
                complex(self.x_max, self.y_max), complex(self.x_min, self.y_max)]


@dataclass(frozen=True)
class ComplexZero:
    position: complex
    residual: float
    certified: bool
    multiplicity: int = 1


def _zero_sort_key(z: ComplexZero):
    return (z.position.imag, z.position.real)


# ---------------------------------------------------------------------------
# Phase tracking

def _wrap(phases: np.ndarray) -> np.ndarray:
    return (phases + math.pi) % TWO_PI - math.pi


def _phase_winding(f: Callable[[np.ndarray], np.ndarray],
                   pts: np.ndarray,
                   guard: "Callable[[np.ndarray], np.ndarray] | float",
                   max_rounds: int = 48) -> float:
    """Total phase change / 2pi along a closed polyline of sample points.

    Segments whose phase delta reaches pi/4 are midpoint-bisected until
    all deltas are small; any sample with |f| below the guard (scalar or
    pointwise threshold) raises BoundaryError.
    """
    vals = f(pts)
    for _ in range(max_rounds):
        thresh = guard(pts) if callable(guard) else guard
        if np.any(np.abs(vals) < thresh):
            raise BoundaryError("contour passes too close to a zero")
        phases = np.angle(vals)
        diffs = _wrap(np.diff(phases))
        bad = np.nonzero(np.abs(diffs) >= PHASE_STEP)[0]
        if bad.size == 0:
            return float(np.sum(diffs) / TWO_PI)
        mids = 0.5 * (pts[bad] + pts[bad + 1])
        new_vals = f(mids)
        pts = np.insert(pts, bad + 1, mids)
        vals = np.insert(vals, bad + 1, new_vals)
    raise BoundaryError("phase tracking did not settle; zero near contour?")


def _boundary_samples(rect: Rectangle, step: float) -> np.ndarray:
    """Counterclockwise closed loop of boundary points, spacing <= step."""
    cs = rect.corners() + [complex(rect.x_min, rect.y_min)]
    pts = []
    for a, b in zip(cs, cs[1:]):
        n = max(2, int(math.ceil(abs(b - a) / step)) + 1)
        seg = a + (b - a) * np.linspace(0.0, 1.0, n)[:-1]
        pts.append(seg)
    pts.append(np.array([cs[0]]))
    return np.concatenate(pts)


def _guard_fn(poly: GeneralizedDirichletPoly) -> Callable[[np.ndarray], np.ndarray]:
    """Pointwise guard: a fraction of the column scale sum |a_k| mu_k^x.

    A rectangle can span many orders of magnitude of growth; a guard
    keyed to the rectangle-wide maximum would reject contours that are
    perfectly healthy in the small-|f| columns.
    """
    abs_coeffs = np.abs(poly.coeffs)
    log_bases = poly.log_bases

    def guard(pts: np.ndarray) -> np.ndarray:
        x = np.atleast_1d(np.asarray(pts)).real
        t = np.clip(np.outer(x, log_bases), -EXP_CLAMP, EXP_CLAMP)
        return BOUNDARY_GUARD_REL * (np.exp(t) @ abs_coeffs)

    return guard


def winding_number(poly: GeneralizedDirichletPoly, rect: Rectangle,
                   max_step: float | None = None) -> int:
    """Zeros of poly inside rect, by boundary phase tracking.

    Raises BoundaryError when the sampled boundary minimum of |f| falls
    below the guard threshold; the caller perturbs the rectangle.
    """
    if len(poly.terms) < 2:
        raise DomainError("winding of a constant-signature polynomial")
    l_max = float(np.max(np.abs(poly.log_bases)))
    step = 0.5 * PHASE_STEP / max(l_max, 1e-9)
    if max_step is not None:
        step = min(step, max_step)
    pts = _boundary_samples(rect, step)
    guard = _guard_fn(poly)
    total = _phase_winding(lambda p: evaluate(poly, p), pts, guard)
    w = round(total)
    if abs(total - w) > 0.25:
        raise BoundaryError(f"non-integer winding {total:.3f}")
    return int(w)


def winding_along_path(poly: GeneralizedDirichletPoly,
                       vertices: Sequence[complex]) -> int:
    """Winding of poly along an arbitrary closed polyline."""
    pts = np.asarray(list(vertices) + [vertices[0]], dtype=complex)
    guard = _guard_fn(poly)
    total = _phase_winding(lambda p: evaluate(poly, p), pts, guard)
    w = round(total)
    if abs(total - w) > 0.25:
        raise BoundaryError(f"non-integer winding {total:.3f}")
    return int(w)


# ---------------------------------------------------------------------------
# Zero search

_SPLIT_JITTERS = (0.0, 0.013, -0.027, 0.041, -0.059, 0.084, -0.11)


def _newton_polish(poly: GeneralizedDirichletPoly, z0: complex, box: Rectangle,
                   tol: float, max_iter: int = 50) -> complex | None:
    """Newton from z0; None on divergence or escape from the doubled box."""
    scale = poly.abs_scale(box.x_min, box.x_max)
    z = z0
    slack = max(box.width, box.height)
    for _ in range(max_iter):
        fz = evaluate(poly, z)
        if abs(fz) <= 1e-3 * tol * scale:
            break
        dfz = evaluate_derivative(poly, z)
        if dfz == 0:
            return None
        step = fz / dfz
        z = z - step
        if not box.contains(z, slack=slack):
            return None
        if abs(step) < 1e-16 * (1.0 + abs(z)):
            break
    if abs(evaluate(poly, z)) <= tol * max(scale, 1.0):
        return z
    return None


def _certify(poly: GeneralizedDirichletPoly, z: complex, tol: float) -> bool:
    half = max(1e-5, 10.0 * tol)
    box = Rectangle(z.real - half, z.real + half, z.imag - half, z.imag + half)
    for jit in _SPLIT_JITTERS:
        try:
            grown = Rectangle(box.x_min - jit * half, box.x_max + jit * half,
                              box.y_min - 0.7 * jit * half,
                              box.y_max + 0.7 * jit * half)
            return winding_number(poly, grown) == 1
        except BoundaryError:
            continue
    return False


def _split_box(poly: GeneralizedDirichletPoly, rect: Rectangle, w: int,
               ) -> tuple[Rectangle, Rectangle, int, int]:
    """Cut the longer side; jitter the cut if it lands on a zero."""
    vertical = rect.height >= rect.width
    span = rect.height if vertical else rect.width
    for jit in _SPLIT_JITTERS:
        frac = 0.5 + jit
        if vertical:
            cut = rect.y_min + frac * span
            r1 = Rectangle(rect.x_min, rect.x_max, rect.y_min, cut)
            r2 = Rectangle(rect.x_min, rect.x_max, cut, rect.y_max)
        else:
            cut = rect.x_min + frac * span
            r1 = Rectangle(rect.x_min, cut, rect.y_min, rect.y_max)
            r2 = Rectangle(cut, rect.x_max, rect.y_min, rect.y_max)
        try:
            w1 = winding_number(poly, r1)
        except BoundaryError:
            continue
        w2 = w - w1
        if w2 < 0:
            # Inconsistent counts mean a zero grazed a contour; re-jitter.
            continue
        return r1, r2, w1, w2
    raise BoundaryError("could not find a guard-passing split line")


def find_zeros(poly: GeneralizedDirichletPoly, rect: Rectangle,
               tol: float = 1e-10, max_depth: int = 60) -> list[ComplexZero]:
    """All zeros of poly in rect, winding-certified and sorted by (Im, Re).

    The returned count equals winding_number(poly, rect) by construction:
    boxes partition the rectangle and each leaf either holds one polished
    zero or none.  Boxes that refuse to separate below diameter 1e-6 are
    reported as one zero carrying a multiplicity flag.
    """
    w_total = winding_number(poly, rect)
    zeros: list[ComplexZero] = []
    unresolved: list[Rectangle] = []
    stack: list[tuple[Rectangle, int, int]] = [(rect, w_total, 0)]
    while stack:
        box, w, depth = stack.pop()
        if w == 0:
            continue
        diam = max(box.width, box.height)
        if w == 1 and diam <= 0.35:
            z = _newton_polish(poly, box.center, box, tol)
            if z is not None and box.contains(z, slack=1e-9 + 1e-6 * diam):
                res = abs(evaluate(poly, z))
                zeros.append(ComplexZero(z, res, _certify(poly, z, tol)))
                continue
            if diam <= max(1e-6, 20.0 * tol):
                z = box.center
                zeros.append(ComplexZero(z, abs(evaluate(poly, z)), False))
                continue
        elif w >= 2 and diam <= 1e-6:
            z = box.center
            zeros.append(ComplexZero(z, abs(evaluate(poly, z)), False,
                                     multiplicity=w))
            continue
        if depth >= max_depth:
            unresolved.append(box)
            continue
        try:
            r1, r2, w1, w2 = _split_box(poly, box, w)
        except BoundaryError:
            unresolved.append(box)
            continue
        stack.append((r1, w1, depth + 1))
        stack.append((r2, w2, depth + 1))
    if unresolved:
        raise IncompleteEnumerationError(
            f"{len(unresolved)} boxes unresolved at depth {max_depth}",
            unresolved)
    zeros.sort(key=_zero_sort_key)
    return zeros


# ---------------------------------------------------------------------------
# Closed-form zero families

LOG2 = math.log(2.0)


def closed_form_zeros(family: str, k_range: Iterable[int]) -> list[complex]:
    """Exact zeros of zeta_2, G_3^* and G_4^*.

    zeta2 / g3star: i pi (2k+1) / log 2.
    g4star: i 2pi (3k+1) / (3 log 2) and i 2pi (3k+2) / (3 log 2),
    interleaved and sorted.
    """
    ks = list(k_range)
    if family in ("zeta2", "g3star"):
        out = [1j * math.pi * (2 * k + 1) / LOG2 for k in ks]
    elif family == "g4star":
        out = []
        for k in ks:
            out.append(1j * TWO_PI * (3 * k + 1) / (3.0 * LOG2))
            out.append(1j * TWO_PI * (3 * k + 2) / (3.0 * LOG2))
    else:
        raise DomainError(f"unknown closed-form family {family!r}")
    return sorted(out, key=lambda z: (z.imag, z.real))


# ---------------------------------------------------------------------------
# Translation numbers

@dataclass(frozen=True)
class TranslationNumber:
    T: float
    delta: float   # achieved uniform bound on the sampled strip


def _shift_bound(poly: GeneralizedDirichletPoly, strip: tuple[float, float],
                 t_vals: np.ndarray) -> np.ndarray:
    """Rigorous bound on sup_strip |f(z+iT) - f(z)| for each T.

    |mu^z (e^{iT log mu} - 1)| <= |a| max(mu^a, mu^b) * 2|sin(T log mu / 2)|.
    """
    a, b = strip
    weights = np.abs(poly.coeffs) * np.maximum(
        np.exp(np.clip(poly.log_bases * a, -700, 700)),
        np.exp(np.clip(poly.log_bases * b, -700, 700)))
    out = np.zeros_like(t_vals)
    for w, l in zip(weights, poly.log_bases):
        if l != 0.0:
            out += w * 2.0 * np.abs(np.sin(0.5 * l * t_vals))
    return out


def _verify_translation(poly: GeneralizedDirichletPoly, t: float,
                        strip: tuple[float, float]) -> float:
    """Sampled sup of |f(z+iT) - f(z)| over a strip grid (>= 10^4 points)."""
    a, b = strip
    l_min = min((abs(l) for l in poly.log_bases if l != 0.0), default=1.0)
    xs = np.linspace(a, b, 21)
    ys = np.linspace(0.0, 2.0 * TWO_PI / l_min, 512)
    zz = (xs[:, None] + 1j * ys[None, :]).ravel()
    return float(np.max(np.abs(evaluate(poly, zz + 1j * t) -
                               evaluate(poly, zz))))


def translation_number(poly: GeneralizedDirichletPoly, delta: float,
                       strip: tuple[float, float] = (-1.0, 1.0),
                       search_span: float = 1e3,
                       t_min: float = 1.0) -> TranslationNumber:
    """Smallest found T in (t_min, search_span] with sup |f(z+iT)-f(z)| <= delta.

    A fine grid (step 1e-3) is scanned first; if the rigorous sine bound
    never dips under delta there, candidates anchored at multiples of the
    dominant period are scanned instead (the fine grid cannot reach the
    long commensurability returns at desk tolerances).  The winning T is
    polished by local minimization of the bound, then verified by strip
    sampling.
    """
    if delta <= 0:
        raise DomainError("delta must be positive")
    nontrivial = [l for l in poly.log_bases if l != 0.0]
    if not nontrivial:
        raise DomainError("polynomial has no oscillating term")
    fine_hi = min(search_span, 5e3)
    window = None
    if fine_hi > t_min:
        ts = np.arange(t_min + 1e-3, fine_hi, 1e-3)
        ok = np.nonzero(_shift_bound(poly, strip, ts) <= delta)[0]
        if ok.size:
            run_end = ok[0]
            for idx in ok[1:]:
                if idx != run_end + 1:
                    break
                run_end = idx
            window = (float(ts[ok[0]]), float(ts[run_end]))
    if window is None:
        # Anchor on the smallest frequency: every commensurate multiple of
        # it is phase-exact at the anchors, leaving only the independent
        # frequencies to line up.
        l_ref = min(abs(l) for l in nontrivial)
        period = TWO_PI / l_ref
        m_max = int(search_span / period)
        if m_max < 1:
            raise SearchExhaustedError("search span below one period")
        anchors = period * np.arange(1, m_max + 1)
        anchors = anchors[anchors > t_min]
        bounds = _shift_bound(poly, strip, anchors)
        ok = np.nonzero(bounds <= delta)[0]
        if ok.size == 0:
            raise SearchExhaustedError(
                f"no translation number under span {search_span}")
        t0 = float(anchors[ok[0]])
        window = (max(t_min, t0 - 2e-3), t0 + 2e-3)
    bound_at = lambda t: float(_shift_bound(poly, strip, np.array([t]))[0])
    res = minimize_scalar(bound_at, bounds=window, method="bounded",
                          options={"xatol": 1e-14})
    t_best = float(res.x)
    # Snap onto an exact period multiple when that only improves the bound
    # (single-frequency families then return their true period).
    for l in sorted(set(abs(l) for l in nontrivial)):
        t_snap = round(t_best * l / TWO_PI) * TWO_PI / l
        if (window[0] - 1e-9 <= t_snap <= window[1] + 1e-9 and
                bound_at(t_snap) <= bound_at(t_best)):
            t_best = t_snap
    achieved = _verify_translation(poly, t_best, strip)
    if achieved > delta:
        t_best = window[0]
        achieved = _verify_translation(poly, t_best, strip)
        if achieved > delta:
            raise SearchExhaustedError("candidate failed strip verification")
    return TranslationNumber(T=t_best, delta=achieved)


def replicate_zero(poly: GeneralizedDirichletPoly, z0: ComplexZero,
                   count: int, delta_schedule: Sequence[float] | None = None,
                   epsilon: float = 0.05,
                   tol: float = 1e-10) -> list[ComplexZero]:
    """At least `count` further zeros within |Re z - Re z0| < epsilon.

    Successive translation numbers T_k (spaced by more than 1) move the
    certified seed up the strip; each translate is re-located by a
    winding search in a small box.  The default delta schedule halves at
    every step.  Budget exhaustion returns a partial result with a
    warning instead of failing.
    """
    if not z0.certified:
        raise DomainError("seed zero must be certified")
    if count == 0:
        return []
    x0 = z0.position.real
    strip = (x0 - epsilon, x0 + epsilon)
    if delta_schedule is None:
        slope = abs(evaluate_derivative(poly, z0.position))
        base = 0.5 * epsilon * max(slope, 1e-3)
        delta_schedule = [base / 2 ** k for k in range(count)]
    deltas = list(delta_schedule)
    if any(b > a for a, b in zip(deltas, deltas[1:])):
        raise DomainError("delta schedule must be non-increasing")
    while len(deltas) < count:
        deltas.append(deltas[-1] / 2.0)
    found: list[ComplexZero] = []
    t_prev = 0.0
    span = 1e4
    attempts = 0
    while len(found) < count and attempts < 4 * count:
        attempts += 1
        delta = deltas[min(len(found), len(deltas) - 1)]
        try:
            tn = translation_number(poly, delta, strip=strip,
                                    search_span=span, t_min=t_prev + 1.0)
        except SearchExhaustedError:
            span *= 10.0
            if span > 1e8:
                break
            continue
        t_prev = tn.T
        center = z0.position + 1j * tn.T
        half_y = max(4.0 * epsilon, 0.2)
        for grow in (1.0, 2.0, 4.0):
            box = Rectangle(x0 - epsilon, x0 + epsilon,
                            center.imag - grow * half_y,
                            center.imag + grow * half_y)
            try:
                zs = [z for z in find_zeros(poly, box, tol=tol)
                      if abs(z.position.real - x0) < epsilon]
            except (BoundaryError, IncompleteEnumerationError):
                continue
            if zs:
                best = min(zs, key=lambda z: abs(z.position - center))
                if all(abs(best.position - f.position) > 10 * tol
                       for f in found):
                    found.append(best)
                break
    if len(found) < count:
        warnings.warn(f"replication budget exhausted: {len(found)}/{count}")
    return found


# ---------------------------------------------------------------------------
# Mirror and Ritt

class ConsistencyError(RuntimeError):
    """A mirrored zero failed its residual re-check."""


def mirror_zeros(zeros: Sequence[ComplexZero], n: int,
                 tol: float = 1e-9) -> list[ComplexZero]:
    """Negate certified zeros of G_n into verified zeros of zeta_n."""
    zeta = make_partial_sum(n)
    out = []
    for z in zeros:
        pos = -z.position
        res = abs(evaluate(zeta, pos))
        scale = zeta.abs_scale(pos.real, pos.real)
        if res > tol * max(scale, 1.0):
            raise ConsistencyError(
                f"mirror of {z.position} has residual {res:.3e}")
        out.append(replace(z, position=pos, residual=res))
    out.sort(key=_zero_sort_key)
    return out


def zeros_up_to_height(poly: GeneralizedDirichletPoly, x_lo: float,
                       x_hi: float, height: float, tol: float = 1e-10,
                       tile_height: float = 25.0,
                       y_start: float = 0.0) -> list[ComplexZero]:
    """All zeros with y_start < Im z <= height inside a vertical envelope.

    The strip is covered by horizontal tiles; tile edges are jittered
    when a zero sits on one.
    """
    zeros: list[ComplexZero] = []
    y = y_start
    eps = 1e-9
    while y < height:
        y_top = min(y + tile_height, height)
        for jit in _SPLIT_JITTERS:
            lo = y + jit * 1e-3 if y > y_start else y + eps
            hi = y_top + jit * 1e-3 if y_top < height else height
            try:
                tile = Rectangle(x_lo, x_hi, lo, hi)
                zeros.extend(find_zeros(poly, tile, tol=tol))
                y_top = hi
                break
            except BoundaryError:
                continue
        else:
            raise BoundaryError(f"tile at height {y} resisted jittering")
        y = y_top
    dedup: list[ComplexZero] = []
    for z in sorted(zeros, key=_zero_sort_key):
        if dedup and abs(z.position - dedup[-1].position) <= 10 * tol:
            continue
        if y_start < z.position.imag <= height:
            dedup.append(z)
    return dedup


def ritt_partial_sums(poly: GeneralizedDirichletPoly,
                      heights: Sequence[float],
                      x_envelope: tuple[float, float],
                      tol: float = 1e-10) -> list[float]:
    """sum of Re z over certified zeros with 0 < Im z <= T, per height.

    Report-only: the O(1) bound behind it carries no explicit constant.
    """
    hs = sorted(heights)
    zeros = zeros_up_to_height(poly, x_envelope[0], x_envelope[1], hs[-1],
                               tol=tol)
    out = []
    for t in heights:
        out.append(float(sum(z.position.real for z in zeros
                             if 0.0 < z.position.imag <= t)))
    return out
