from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k3lab.isometry import MirrorContext, mk_psi0, mk_psi1, mk_xi
from k3lab.lattice import LatticeError, Sublattice
from k3lab.mirror import (
    MirrorUndefined,
    dolgachev_alpha,
    elliptic_context,
    elliptic_mirror,
    fm_compare,
    hk_rotation_check,
    mirror_as_triple,
    mirror_triple,
    polarized_membership,
    psi0_action,
    psi1_action,
    psi1_scale,
    singular_classes,
    xi_tilde_on_pairs,
)
from k3lab.period import ComplexLine, KahlerTriple, PeriodError, gamma_embed, pi_project
from k3lab import sampling as smp

seeds = st.integers(0, 2 ** 32)


def hyp(e, i):
    return e(i) + e(i + 1)


def test_mshk_fixture(ctx):
    for rich in (False, True):
        t = smp.mshk_triple(ctx, rich)
        m = mirror_triple(ctx, t)
        assert m.sigma == ComplexLine(t.line.re, t.omega)
        assert m.omega == t.line.im
        assert m.B.is_zero()


def test_b_zero_formula(ctx, e):
    re = 3 * ctx.v + Fraction(1, 3) * ctx.vstar  # square 2, <re, v> = 1/3
    im = hyp(e, 18)
    om = 2 * e(16) + e(17)
    t = KahlerTriple(ComplexLine(re, im), om, ctx.gamma.zero())
    m = mirror_triple(ctx, t)
    assert m.sigma.re == 3 * ((om.sq() / 2) * ctx.v + ctx.vstar)
    assert m.sigma.im == 3 * om
    assert m.omega == 3 * im


def test_undefined(ctx, e):
    line = ComplexLine(hyp(e, 16), hyp(e, 18))  # plane inside v^⊥
    t = KahlerTriple(line, 2 * ctx.v + ctx.vstar, ctx.gamma.zero())
    with pytest.raises(MirrorUndefined):
        mirror_triple(ctx, t)
    t = KahlerTriple(ComplexLine(ctx.v + ctx.vstar, hyp(e, 18)), hyp(e, 16), e(21))
    with pytest.raises(MirrorUndefined):
        mirror_triple(ctx, t)


def test_iota_alone_leaves_gamma_image(ctx):
    t = smp.random_triple(ctx, smp.suite_rng(3, "iota"))
    pp = gamma_embed(ctx, t)
    swapped = type(pp)(pp.H2, pp.H1)
    # H1 of a γ-image is orthogonal to w; after the swap it is not
    assert all(x @ ctx.w == 0 for x in pp.H1.basis)
    assert any(x @ ctx.w != 0 for x in swapped.H1.basis)


def test_psi0(ctx, e):
    t = smp.mshk_triple(ctx)
    r = psi0_action(ctx, t)
    assert r.omega == -t.omega and r.B.is_zero()
    assert psi0_action(ctx, r).omega == t.omega
    assert gamma_embed(ctx, r) == gamma_embed(ctx, t).map(mk_psi0(ctx))


def test_psi1_fixed_point(ctx, e):
    t = KahlerTriple(ComplexLine(hyp(e, 18), hyp(e, 20)), hyp(e, 16), ctx.gamma.zero())
    assert psi1_scale(t) == 1
    r = psi1_action(ctx, t)
    assert r.omega == t.omega and r.line.re == t.line.re


def test_psi1_scales(ctx, e):
    line = ComplexLine(2 * hyp(e, 18), 2 * hyp(e, 20))
    t = KahlerTriple(line, 2 * hyp(e, 16), ctx.gamma.zero())
    assert psi1_scale(t) == Fraction(1, 4)
    r = psi1_action(ctx, t)
    assert r.omega.sq() == Fraction(1, 2)
    rr = psi1_action(ctx, r)
    assert rr.omega == t.omega and rr.line.re == t.line.re
    assert psi1_scale(t) == (r.alpha - r.B.sq()) / 2
    assert gamma_embed(ctx, r) == gamma_embed(ctx, t).map(mk_psi1(ctx))


def test_polarized(ctx):
    pd = smp.standard_polarization(ctx)
    assert pd.signatures() == ((1, 9), (1, 9))
    rng = smp.suite_rng(0, "pol")
    t = smp.random_n_side_triple(ctx, rng)
    assert polarized_membership(pd, t).n_side
    assert polarized_membership(pd, mirror_as_triple(ctx, t)).mirror_side
    bad = KahlerTriple(t.line, t.omega + Fraction(1, 100) * ctx.gamma.basis_vector(8), t.B)
    assert polarized_membership(pd, bad) == (False, False)


def test_dolgachev(ctx, e):
    pd = smp.standard_polarization(ctx)
    om = hyp(e, 18)
    line = dolgachev_alpha(pd, ctx.gamma.zero(), om)
    assert line == ComplexLine(ctx.v + ctx.vstar, om)
    with pytest.raises(PeriodError):
        dolgachev_alpha(pd, ctx.gamma.zero(), ctx.gamma.zero())


def test_polarization_rejects_non_orthogonal(ctx, e):
    with pytest.raises(LatticeError):
        smp.PolarizationData.from_pol(ctx, Sublattice(ctx.gamma, (e(20),)))


def test_elliptic_unit_volume(ctx, e):
    f, s0 = ctx.v, ctx.vstar - ctx.v
    om_i = hyp(e, 16)
    sigma_i = ComplexLine(f + (f + s0), hyp(e, 18))
    m = elliptic_mirror(ctx, f, s0, sigma_i, om_i, 1)
    assert m.sigma == ComplexLine(2 * f + s0, om_i)
    ectx = elliptic_context(ctx, f, s0)
    assert ectx.v == f and ectx.vstar == f + s0
    assert m.projectively_equals(mirror_triple(ectx, KahlerTriple(sigma_i, om_i, ctx.gamma.zero())))
    assert m.omega @ f == 0 and m.sigma.im @ f == 0


def test_elliptic_fixture(ctx):
    f, s0, sigma_i, om_i, vol = smp.elliptic_fixture(ctx)
    m = elliptic_mirror(ctx, f, s0, sigma_i, om_i, vol)
    ref = mirror_triple(elliptic_context(ctx, f, s0), KahlerTriple(sigma_i, om_i, ctx.gamma.zero()))
    assert m.sigma == ref.sigma and m.omega == ref.omega and m.B.is_zero()
    assert m.sigma.re == ((om_i.sq() / 2) * f + s0 + f) / vol
    with pytest.raises(PeriodError):
        elliptic_mirror(ctx, f, s0, sigma_i, om_i, vol + 1)


def test_hk_rotation(ctx, e):
    t = smp.mshk_triple(ctx, True)
    assert hk_rotation_check(ctx, t)
    re = ctx.v + 2 * ctx.vstar                    # square 4, <re, v> = 2
    im = 2 * e(18) + e(19)                        # square 4
    om = 2 * e(16) + e(17)
    t2 = KahlerTriple(ComplexLine(re, im), om, ctx.gamma.zero())
    assert re @ ctx.v == 2
    assert not hk_rotation_check(ctx, t2)
    with pytest.raises(PeriodError):
        hk_rotation_check(ctx, KahlerTriple(t.line, t.omega, e(0)))


def test_fm_compare(ctx):
    f, s0, *_ = smp.elliptic_fixture(ctx)
    rep = fm_compare(ctx, f, s0)
    assert rep["xi_f_is_pt"] and rep["xi_vstar_is_one"]
    rows = {r.name: r for r in rep["rows"]}
    assert rows["f"].agrees_plain
    assert rows["pt"].agrees_plain
    assert "sigma0" in rep["discrepancies"]
    assert rows["sigma0"].agrees_via_eta


def test_singular_classes(ctx):
    m = mirror_triple(ctx, smp.mshk_triple(ctx))
    found = singular_classes(m)
    assert found and all(c.sq() == -2 for c in found)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_master_oracle(seed):
    ctx = MirrorContext.standard()
    t = smp.random_triple(ctx, smp.suite_rng(seed, "master"))
    m = mirror_triple(ctx, t)
    assert gamma_embed(ctx, m.triple()) == xi_tilde_on_pairs(ctx, gamma_embed(ctx, t))
    assert mirror_triple(ctx, m.triple()).projectively_equals(t)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_xi_tilde_pairs(seed):
    ctx = MirrorContext.standard()
    pp = gamma_embed(ctx, smp.random_triple(ctx, smp.suite_rng(seed, "pairs")))
    assert xi_tilde_on_pairs(ctx, xi_tilde_on_pairs(ctx, pp)) == pp
    xi = mk_xi(ctx)
    assert pi_project(xi_tilde_on_pairs(ctx, pp)).same_span(pi_project(pp).map(xi))


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_dolgachev_matches(seed):
    ctx = MirrorContext.standard()
    pd = smp.standard_polarization(ctx)
    t = smp.random_mirror_side_triple(ctx, smp.suite_rng(seed, "dolg"))
    assert dolgachev_alpha(pd, t.B, t.omega) == mirror_triple(ctx, t).sigma
