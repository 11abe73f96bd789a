from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k3lab.isometry import MirrorContext
from k3lab.period import (
    ComplexLine,
    IrrationalNormalization,
    KahlerTriple,
    OrientedPlane,
    PeriodError,
    PlanePair,
    ThreeSpace,
    delta_embed,
    forget,
    gamma_embed,
    line_from_plane,
    oriented_plane_equals,
    phi34,
    pi_project,
    plane_from_line,
    psi43,
)
from k3lab.sampling import random_three_space, random_triple, rational_vector, suite_rng

seeds = st.integers(0, 2 ** 32)


def hyp(e, i):
    return e(i) + e(i + 1)


def test_plane_from_line(e):
    x = ComplexLine(hyp(e, 16), hyp(e, 18))
    p = plane_from_line(x)
    assert p.basis == (hyp(e, 16), hyp(e, 18))
    assert plane_from_line(x.rescale(0, 1)) == p
    assert plane_from_line(x.rescale(2)) == p
    assert plane_from_line(x.rescale(-1)) == p


def test_line_rejects_bad_input(e):
    with pytest.raises(PeriodError):
        ComplexLine(hyp(e, 16), 2 * hyp(e, 18))
    with pytest.raises(PeriodError):
        ComplexLine(hyp(e, 16), hyp(e, 16))


def test_oriented_equality(e):
    b1, b2 = hyp(e, 16), hyp(e, 18)
    p = OrientedPlane(b1, b2)
    assert not oriented_plane_equals(p, OrientedPlane(b2, b1))
    assert oriented_plane_equals(p, OrientedPlane(b1 + b2, b2))
    assert oriented_plane_equals(p, OrientedPlane(2 * b1, 3 * b2))
    assert p.reversed() == OrientedPlane(b2, b1)


def test_line_from_plane(e):
    b1, b2 = hyp(e, 16), hyp(e, 18)
    assert line_from_plane(OrientedPlane(b1, b2)) == ComplexLine(b1, b2)
    with pytest.raises(IrrationalNormalization):
        line_from_plane(OrientedPlane(b1, 3 * e(18) + e(19)))  # squares 2 and 6


def _F(e):
    return ThreeSpace((hyp(e, 16), hyp(e, 18), hyp(e, 20)))


def test_phi34_b_zero(ctx, e):
    F = _F(e)
    Pi = phi34(ctx, F, 2, ctx.gamma.zero())
    assert Pi.basis[0] == ctx.w + ctx.wstar
    assert Pi.basis[1:] == tuple(ctx.lift(f) for f in F.basis)
    back = psi43(ctx, Pi)
    assert back.alpha == 2 and back.B.is_zero() and back.F == F


def test_phi34_bprime_square(ctx, e):
    B = e(0) + Fraction(1, 3) * e(16)
    Pi = phi34(ctx, _F(e), Fraction(7, 2), B)
    assert Pi.basis[0].sq() == Fraction(7, 2)


def test_psi43_degenerate(ctx, e):
    # inside w^⊥ there is no positive four-space at all
    vs = [ctx.lift(x) for x in (hyp(e, 16), hyp(e, 18), hyp(e, 20))] + [ctx.w + ctx.lift(e(16) + e(17))]
    assert all(x @ ctx.w == 0 for x in vs)
    with pytest.raises(PeriodError):
        psi43(ctx, vs)


def test_gamma_b_zero(ctx, e):
    om = hyp(e, 16)
    t = KahlerTriple(ComplexLine(hyp(e, 18), hyp(e, 20)), om, ctx.gamma.zero())
    pp = gamma_embed(ctx, t)
    assert pp.H1 == OrientedPlane(*(ctx.lift(x) for x in t.plane().basis))
    assert pp.H2 == OrientedPlane((om.sq() / 2) * ctx.w + ctx.wstar, ctx.lift(om))


def test_h1_ignores_omega(ctx, e):
    line = ComplexLine(hyp(e, 18), hyp(e, 20))
    B = e(3)
    t1 = KahlerTriple(line, hyp(e, 16), B)
    t2 = KahlerTriple(line, 2 * e(16) + 5 * e(17), B)
    assert gamma_embed(ctx, t1).H1 == gamma_embed(ctx, t2).H1


def test_delta(ctx, e):
    P = OrientedPlane(hyp(e, 18), hyp(e, 20))
    assert delta_embed(ctx, P, ctx.gamma.zero()) == OrientedPlane(*(ctx.lift(x) for x in P.basis))
    B = e(0)  # orthogonal to P
    assert delta_embed(ctx, P, B) == OrientedPlane(*(ctx.lift(x) for x in P.basis))


def test_pair_needs_orthogonality(ctx, e):
    a = OrientedPlane(ctx.lift(hyp(e, 16)), ctx.lift(hyp(e, 18)))
    b = OrientedPlane(ctx.lift(hyp(e, 16) + e(16)), ctx.lift(hyp(e, 20)))
    with pytest.raises(PeriodError):
        PlanePair(a, b)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_phi34_psi43_inverse(seed):
    ctx = MirrorContext.standard()
    rng = suite_rng(seed, "period")
    F = random_three_space(ctx, rng)
    B = rational_vector(ctx.gamma, rng)
    alpha = Fraction(rng.randint(1, 20), rng.randint(1, 5))
    back = psi43(ctx, phi34(ctx, F, alpha, B))
    assert back.F == F and back.alpha == alpha and back.B == B


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_gamma_orthogonal_and_projects(seed):
    ctx = MirrorContext.standard()
    t = random_triple(ctx, suite_rng(seed, "gamma"))
    pp = gamma_embed(ctx, t)
    assert all(a @ b == 0 for a in pp.H1.basis for b in pp.H2.basis)
    F, alpha, B = forget(t)
    assert pi_project(pp).same_span(phi34(ctx, F, alpha, B))
    assert delta_embed(ctx, t.plane(), t.B) == pp.H1
