import math

import numpy as np
import pytest

from zsa.gdpoly import DomainError, evaluate, make_g, make_g_star, make_partial_sum
from zsa.zerofinder import (
    BoundaryError,
    ComplexZero,
    Rectangle,
    closed_form_zeros,
    find_zeros,
    mirror_zeros,
    replicate_zero,
    translation_number,
    winding_number,
    zeros_up_to_height,
)

LOG2 = math.log(2.0)


def test_rectangle_validation():
    with pytest.raises(DomainError):
        Rectangle(1.0, 0.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        Rectangle(0.0, 1.0, 0.0, float("inf"))
    r = Rectangle(-1.0, 1.0, 2.0, 4.0)
    assert r.center == complex(0.0, 3.0)
    assert r.contains(complex(0.5, 3.0))
    assert not r.contains(complex(2.0, 3.0))


def test_winding_counts_known_zeros():
    g2 = make_g(2)   # zeros at i(2k+1)pi/log2
    y1 = math.pi / LOG2
    assert winding_number(g2, Rectangle(-1, 1, y1 - 1, y1 + 1)) == 1
    assert winding_number(g2, Rectangle(-1, 1, 3 * y1 - 1, 3 * y1 + 1)) == 1
    assert winding_number(g2, Rectangle(-1, 1, y1 + 1, 3 * y1 - 1)) == 0
    assert winding_number(g2, Rectangle(-1, 1, 0.5, y1 - 0.5)) == 0
    # both first zeros at once
    assert winding_number(g2, Rectangle(-1, 1, 0.5, 3 * y1 + 1)) == 2


def test_winding_guard_trips_on_contour_zero():
    g2 = make_g(2)
    y1 = math.pi / LOG2
    with pytest.raises(BoundaryError):
        winding_number(g2, Rectangle(-1, 1, y1, y1 + 1))


def test_closed_form_families():
    z2 = closed_form_zeros("zeta2", range(0, 3))
    assert z2[0] == complex(0.0, math.pi / LOG2)
    g4 = closed_form_zeros("g4star", range(0, 2))
    base = 2.0 * math.pi / (3.0 * LOG2)
    assert abs(g4[0].imag - base) < 1e-14
    assert abs(g4[1].imag - 2 * base) < 1e-14
    with pytest.raises(DomainError):
        closed_form_zeros("unknown", range(3))


def test_find_zeros_certifies_and_sorts():
    poly = make_g(3)
    zeros = find_zeros(poly, Rectangle(-1.5, 1.5, 0.1, 30.0), tol=1e-11)
    assert zeros
    assert all(z.certified for z in zeros)
    ims = [z.position.imag for z in zeros]
    assert ims == sorted(ims)
    for z in zeros:
        assert abs(evaluate(poly, z.position)) < 1e-8


def test_find_zeros_matches_winding_count():
    poly = make_g(5)
    rect = Rectangle(-2.0, 2.5, 0.1, 20.0)
    w = winding_number(poly, rect)
    zeros = find_zeros(poly, rect)
    assert len(zeros) == w


def test_mirror_zeros_certify_on_zeta():
    g = make_g(4)
    zeros = find_zeros(g, Rectangle(-1.5, 1.5, 0.1, 15.0))
    mirrored = mirror_zeros(zeros, 4)
    zeta = make_partial_sum(4)
    assert len(mirrored) == len(zeros)
    for z in mirrored:
        assert abs(evaluate(zeta, z.position)) < 1e-9


def test_translation_number_of_periodic_sum():
    # zeta_2 is genuinely periodic: the translation number is the period
    # 2*pi/log 2 for every delta, with essentially zero shift bound.
    zeta2 = make_partial_sum(2)
    period = 2.0 * math.pi / LOG2
    for delta in (0.5, 1e-3):
        t = translation_number(zeta2, delta)
        assert abs(t.T - period) < 1e-9
        assert t.delta < 1e-12


def test_translation_number_shifts_values():
    poly = make_g(3)
    t = translation_number(poly, 0.25, strip=(-1.0, 1.0))
    ys = np.linspace(0.0, 40.0, 300)
    for x in (-1.0, 0.0, 1.0):
        pts = x + 1j * ys
        diff = np.abs(evaluate(poly, pts + 1j * t.T) - evaluate(poly, pts))
        assert float(diff.max()) <= 0.25 + 1e-9


def test_replicate_zero_matches_closed_forms():
    zeta2 = make_partial_sum(2)
    seed = ComplexZero(position=complex(0.0, math.pi / LOG2),
                       residual=0.0, certified=True)
    copies = replicate_zero(zeta2, seed, 4)
    assert len(copies) == 4
    expected = closed_form_zeros("zeta2", range(1, 5))
    for c, e in zip(copies, expected):
        assert abs(c.position - e) < 1e-8
    # strictly increasing spacing > 1
    heights = [seed.position.imag] + [c.position.imag for c in copies]
    assert all(b - a > 1.0 for a, b in zip(heights, heights[1:]))


def test_replicate_zero_requires_certified_seed():
    zeta2 = make_partial_sum(2)
    bad = ComplexZero(position=1j, residual=1.0, certified=False)
    with pytest.raises(DomainError):
        replicate_zero(zeta2, bad, 1)


def test_zeros_up_to_height_dedup_and_range():
    poly = make_g_star(4)
    zeros = zeros_up_to_height(poly, -1.0, 1.0, 30.0)
    base = 2.0 * math.pi / (3.0 * LOG2)
    expected = [k * base for k in (1, 2, 4, 5, 7, 8)
                if k * base <= 30.0]
    got = [z.position.imag for z in zeros]
    assert len(got) == len(expected)
    for a, b in zip(got, expected):
        assert abs(a - b) < 1e-9
    assert all(abs(z.position.real) < 1e-10 for z in zeros)


def test_conjugate_symmetric_zero_search():
    poly = make_g(6)
    upper = find_zeros(poly, Rectangle(-2.0, 2.0, 0.1, 12.0))
    lower = find_zeros(poly, Rectangle(-2.0, 2.0, -12.0, -0.1))
    assert len(upper) == len(lower)
    for u, l in zip(upper, reversed(lower)):
        assert abs(u.position - l.position.conjugate()) < 1e-9
