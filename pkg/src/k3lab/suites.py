"""Named property suites run by ``verify all``.

Each suite gets its own generator seeded from (seed, suite name) and
returns how many cases it checked plus the first counterexample, if any.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from . import linalg
from .isometry import (
    Isometry,
    LinearMap,
    MirrorContext,
    mk_eta,
    mk_exp_b,
    mk_phi_b,
    mk_psi0,
    mk_psi1,
    mk_reflection,
    mk_xi,
    reflect_toward_chamber,
)
from .lattice import (
    HyperbolicSplitting,
    IntegralLattice,
    Sublattice,
    Vector,
    direct_sum,
    hyperbolic_plane,
    is_primitive,
    k3_lattice,
    lattice_from_label,
    minus_e8,
    orthogonal_complement,
)
from .limits import (
    b_shift_orbit,
    exp_nilpotent,
    is_kummer_plane,
    isotropic_lattice_point_near,
    kummer_plane_near,
    lcs_check,
    log_unipotent,
    monodromy_from_bshift_loop,
    weight_filtration,
    fibre_volume_sequence,
)
from .mirror import (
    dolgachev_alpha,
    elliptic_mirror,
    fm_compare,
    hk_rotation_check,
    mirror_triple,
    polarized_membership,
    psi0_action,
    psi1_action,
    psi1_scale,
    xi_tilde_on_pairs,
)
from .period import (
    ComplexLine,
    KahlerTriple,
    forget,
    gamma_embed,
    phi34,
    pi_project,
    psi43,
    same_span,
)
from . import sampling as smp
from .serialize import encode


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int
    counterexample: Any = None

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checked": self.checked,
                "counterexample": self.counterexample}


class Failure(Exception):
    def __init__(self, payload):
        super().__init__("counterexample")
        self.payload = payload


def expect(cond: bool, **payload):
    if not cond:
        raise Failure(encode(payload))


@dataclass
class Env:
    rng: random.Random
    n: int
    inject: str | None = None
    ctx: MirrorContext = field(default_factory=MirrorContext.standard)


SUITES: dict[str, Callable[[Env], int]] = {}


def suite(name):
    def deco(fn):
        SUITES[name] = fn
        return fn
    return deco


def _random_unimodular(n: int, rng: random.Random, steps: int = 40) -> list[list[int]]:
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        k = rng.choice([-1, 1])
        for r in m:
            r[i] += k * r[j]
    return m


# ---------------------------------------------------------------------------
# lattice core


@suite("lattice.pair_symmetric_bilinear")
def _(env):
    L = env.ctx.gamma
    for _ in range(env.n):
        x, y, z = (smp.rational_vector(L, env.rng) for _ in range(3))
        a = smp.random_rational(env.rng)
        expect(x @ y == y @ x, x=x, y=y)
        expect((a * x + z) @ y == a * (x @ y) + z @ y, x=x, y=y, z=z, a=a)
    return env.n


@suite("lattice.even_squares")
def _(env):
    lattices = [k3_lattice(), minus_e8(), hyperbolic_plane(), lattice_from_label("K3+U"),
                lattice_from_label("<2>+U")]
    count = 0
    for L in lattices:
        for _ in range(max(env.n, 1000) // len(lattices)):
            x = smp.small_vector(L, env.rng, bound=5)
            expect(x.sq() % 2 == 0, x=x)
            count += 1
    return count


@suite("lattice.decompose_roundtrip")
def _(env):
    split = env.ctx.splitting
    for _ in range(env.n):
        x = smp.small_vector(env.ctx.gamma, env.rng, bound=4)
        y, lam, mu = split.decompose(x)
        expect(y + lam * split.v + mu * split.vstar == x and split.in_complement(y)
               and y.is_integral(), x=x)
    return env.n


@suite("lattice.orthogonal_complement")
def _(env):
    L = env.ctx.gamma
    count = 0
    for _ in range(max(env.n // 10, 5)):
        k = env.rng.choice([1, 2])
        vs = [smp.nonzero_small_vector(L, env.rng, bound=2) for _ in range(k)]
        if linalg.rank([list(v.coords) for v in vs]) < k:
            continue
        S = Sublattice.saturate(L, vs)
        C = orthogonal_complement(S)
        expect(S.is_orthogonal_to(C), S=list(S.basis))
        if S.is_nondegenerate():
            expect(S.rank + C.rank == L.rank, S=list(S.basis))
        count += 1
    return count


@suite("lattice.signature_unimodular_invariance")
def _(env):
    L = env.ctx.gamma
    count = max(env.n // 2, 1)
    for _ in range(count):
        U = _random_unimodular(L.rank, env.rng)
        G = linalg.matmul(linalg.matmul(linalg.transpose(U), L.gram), U)
        p, q, z = linalg.symmetric_signature(G)
        expect((p, q) == (3, 19) and z == 0, unimodular=U)
    return count


# ---------------------------------------------------------------------------
# isometries


def _checking_lattice(env, lattice: IntegralLattice) -> IntegralLattice:
    """The lattice the Gram check runs against; a perturbed copy under ``broken-gram``."""
    if env.inject != "broken-gram":
        return lattice
    g = [list(r) for r in lattice.gram]
    g[0][16] = g[16][0] = 1  # couple the first −E8 to U1
    return IntegralLattice(tuple(map(tuple, g)), f"{lattice.label}-broken")


@suite("isometry.phi_b_and_exp_b_verify")
def _(env):
    ctx = env.ctx
    L = _checking_lattice(env, ctx.gamma_u)
    for _ in range(env.n):
        b = smp.small_vector(ctx.gamma, env.rng, bound=3)
        phi, ex = mk_phi_b(ctx, b), mk_exp_b(ctx, b)
        ok = Isometry(L, phi.matrix).verify() and phi.integral and ex.verify()
        expect(ok, B0=b, checked_against=L.label)
    return env.n


@suite("isometry.eta_intertwining")
def _(env):
    ctx = env.ctx
    eta = mk_eta(ctx)
    for _ in range(env.n):
        b = smp.small_vector(ctx.gamma, env.rng, bound=3)
        phi, ex = mk_phi_b(ctx, b), mk_exp_b(ctx, b)
        lhs = eta @ LinearMap(phi.lattice, phi.lattice, phi.matrix)
        rhs = LinearMap(ex.lattice, ex.lattice, ex.matrix) @ eta
        expect(lhs.matrix == rhs.matrix, B0=b)
    return env.n


@suite("isometry.phi_b_group_law")
def _(env):
    ctx = env.ctx
    count = max(env.n // 4, 1)
    for _ in range(count):
        b0 = smp.rational_vector(ctx.gamma, env.rng, bound=2)
        b1 = smp.rational_vector(ctx.gamma, env.rng, bound=2)
        expect(mk_phi_b(ctx, b0) @ mk_phi_b(ctx, b1) == mk_phi_b(ctx, b0 + b1), B0=b0, B1=b1)
    return count


@suite("isometry.involutions")
def _(env):
    ctx = env.ctx
    gens = [mk_psi0(ctx), mk_psi1(ctx), mk_xi(ctx)]
    for g in gens:
        expect(g.verify() and g.integral and (g @ g).is_identity(), generator=g)
    L = ctx.gamma_u
    count = len(gens)
    for _ in range(max(env.n // 20, 1)):
        c = env.rng.choice(smp.gamma_prime_roots(ctx))
        c = ctx.lift(c)
        s = mk_reflection(c)
        expect(s.verify() and (s @ s).is_identity() and s(c) == -c, root=c)
        count += 1
    return count


@suite("isometry.chamber_walk")
def _(env):
    L = direct_sum(minus_e8(), hyperbolic_plane(), label="-E8+U")
    roots = [L.basis_vector(i) for i in range(8)]
    for _ in range(env.n):
        e = smp.small_vector(L, env.rng, range(8), 2)
        a = env.rng.randint(1, 6)
        alpha = e + a * L.basis_vector(8) + (a * a + 40) * L.basis_vector(9)
        res = reflect_toward_chamber(alpha, roots)
        expect(res.converged and res.result.sq() == alpha.sq()
               and all(res.result @ r >= 0 for r in roots), alpha=alpha)
    return env.n


# ---------------------------------------------------------------------------
# period domains


@suite("period.line_rescaling_invariance")
def _(env):
    for _ in range(env.n):
        t = smp.random_triple(env.ctx, env.rng, b_field="zero", length=3)
        c, d = smp.random_rational(env.rng), smp.random_rational(env.rng)
        if c == 0 and d == 0:
            c = Fraction(1)
        expect(t.line.rescale(c, d).plane() == t.line.plane(), line=t.line, c=c, d=d)
    return env.n


@suite("period.phi34_psi43_inverse")
def _(env):
    ctx = env.ctx
    for _ in range(env.n):
        F = smp.random_three_space(ctx, env.rng)
        a = Fraction(env.rng.randint(1, 12), env.rng.randint(1, 5))
        B = smp.rational_vector(ctx.gamma, env.rng, bound=2)
        back = psi43(ctx, phi34(ctx, F, a, B))
        expect(back.alpha == a and back.B == B
               and all(x == y for x, y in zip(back.F.basis, F.basis)), F=F, alpha=a, B=B)
    return env.n


@suite("period.gamma_embed_orthogonal_positive")
def _(env):
    for _ in range(env.n):
        t = smp.random_triple(env.ctx, env.rng)
        pp = gamma_embed(env.ctx, t)  # PlanePair and OrientedPlane validate on construction
        expect(all(a @ b == 0 for a in pp.H1.basis for b in pp.H2.basis), triple=t)
    return env.n


@suite("period.projection_diagram_commutes")
def _(env):
    ctx = env.ctx
    for _ in range(env.n):
        t = smp.random_triple(ctx, env.rng)
        d = forget(t)
        expect(same_span(pi_project(gamma_embed(ctx, t)).basis, phi34(ctx, d.F, d.alpha, d.B).basis),
               triple=t)
    return env.n


# ---------------------------------------------------------------------------
# mirror map


@suite("mirror.master_oracle")
def _(env):
    ctx = env.ctx
    for _ in range(env.n):
        t = smp.random_triple(ctx, env.rng)
        m = mirror_triple(ctx, t)
        expect(gamma_embed(ctx, m.triple()) == xi_tilde_on_pairs(ctx, gamma_embed(ctx, t)), triple=t)
    return env.n


@suite("mirror.involution")
def _(env):
    ctx = env.ctx
    for _ in range(env.n):
        t = smp.random_triple(ctx, env.rng)
        expect(mirror_triple(ctx, mirror_triple(ctx, t).triple()).projectively_equals(t), triple=t)
    return env.n


@suite("mirror.xi_tilde_pairs_involution")
def _(env):
    ctx = env.ctx
    for _ in range(max(env.n // 2, 1)):
        pp = gamma_embed(ctx, smp.random_triple(ctx, env.rng))
        expect(xi_tilde_on_pairs(ctx, xi_tilde_on_pairs(ctx, pp)) == pp, pair=pp)
    return max(env.n // 2, 1)


@suite("mirror.psi0_oracle")
def _(env):
    ctx = env.ctx
    psi0 = mk_psi0(ctx)
    count = max(env.n // 2, 1)
    for _ in range(count):
        t = smp.random_triple(ctx, env.rng)
        r = psi0_action(ctx, t)
        expect(gamma_embed(ctx, r) == gamma_embed(ctx, t).map(psi0), triple=t)
    return count


@suite("mirror.psi1_oracle")
def _(env):
    ctx = env.ctx
    psi1 = mk_psi1(ctx)
    count = max(env.n // 2, 1)
    for _ in range(count):
        t = smp.random_triple(ctx, env.rng, b_field="orthogonal")
        r = psi1_action(ctx, t)
        s = psi1_scale(t)
        expect(gamma_embed(ctx, r) == gamma_embed(ctx, t).map(psi1)
               and s == (r.alpha - r.B.sq()) / 2, triple=t)
    return count


@suite("mirror.dolgachev_matches_mirror")
def _(env):
    ctx = env.ctx
    pd = smp.standard_polarization(ctx)
    count = max(env.n // 2, 1)
    for _ in range(count):
        t = smp.random_mirror_side_triple(ctx, env.rng)
        line = dolgachev_alpha(pd, t.B, t.omega)
        expect(line == mirror_triple(ctx, t).sigma, triple=t)
    return count


@suite("mirror.polarized_bijection")
def _(env):
    ctx = env.ctx
    pd = smp.standard_polarization(ctx)
    count = max(env.n // 4, 1)
    for _ in range(count):
        t = smp.random_n_side_triple(ctx, env.rng)
        m = mirror_triple(ctx, t).triple()
        expect(polarized_membership(pd, t).n_side and polarized_membership(pd, m).mirror_side,
               triple=t)
    return count


@suite("mirror.bfield_vanishing_transport")
def _(env):
    ctx = env.ctx
    count = max(env.n // 4, 1)
    roots = smp.gamma_prime_roots(ctx)
    for _ in range(count):
        # B = 0 with Re σ ∈ U'_Q gives B^∨ = 0; move by O(Γ') and check again
        t = smp.mshk_triple(ctx, rich=env.rng.random() < 0.5)
        word = smp.random_word(ctx, env.rng, 6, roots, None)
        moved = KahlerTriple(ComplexLine(smp.apply_word(word, t.line.re), smp.apply_word(word, t.line.im)),
                             smp.apply_word(word, t.omega), t.B)
        expect(mirror_triple(ctx, t).B.is_zero() and mirror_triple(ctx, moved).B.is_zero(), triple=moved)
    return count


@suite("mirror.special_fixtures")
def _(env):
    ctx = env.ctx
    count = 0
    for rich in (False, True):
        t = smp.mshk_triple(ctx, rich)
        m = mirror_triple(ctx, t)
        expect(m.sigma.re == t.line.re and m.sigma.im == t.omega and m.omega == t.line.im
               and m.B.is_zero() and hk_rotation_check(ctx, t), triple=t)
        count += 1
    f, s0, sig, om_i, vol = smp.elliptic_fixture(ctx)
    em = elliptic_mirror(ctx, f, s0, sig, om_i, vol)
    mt = mirror_triple(ctx, KahlerTriple(sig, om_i, ctx.gamma.zero()))
    expect(em.sigma.re == mt.sigma.re and em.sigma.im == mt.sigma.im and em.omega == mt.omega
           and em.B == mt.B, f=f, s0=s0)
    rep = fm_compare(ctx, f, s0)
    expect(rep["xi_f_is_pt"] and rep["xi_vstar_is_one"], f=f, s0=s0)
    return count + 2


# ---------------------------------------------------------------------------
# limits


def _random_b0(env) -> Vector:
    while True:
        b = smp.nonzero_small_vector(env.ctx.gamma, env.rng, smp.GAMMA_PRIME, 2)
        if b.sq() != 0:
            return b


@suite("limits.monodromy_lcs")
def _(env):
    ctx = env.ctx
    v = ctx.v
    count = 20
    for _ in range(count):
        b = _random_b0(env)
        T = monodromy_from_bshift_loop(ctx, b)
        W = weight_filtration(log_unipotent(T))
        w0, w2, w3 = W.vectors(ctx.gamma, 0), W.vectors(ctx.gamma, 2), W.vectors(ctx.gamma, 3)
        expect(T.verify() and T.integral and lcs_check(T) and W.dims[:3] == (1, 1, 2)
               and same_span(w0, [v]) and same_span(w2, [v, b])
               and all(a @ c == 0 for a in w0 for c in w3), B0=b)
    return count


@suite("limits.log_exp_roundtrip")
def _(env):
    ctx = env.ctx
    count = max(env.n // 20, 3)
    for _ in range(count):
        b = smp.nonzero_small_vector(ctx.gamma, env.rng, smp.GAMMA_PRIME, 2)
        T = monodromy_from_bshift_loop(ctx, b)
        expect(exp_nilpotent(log_unipotent(T)) == [list(r) for r in T.matrix], B0=b)
    return count


@suite("limits.filtration_dims_basis_independent")
def _(env):
    ctx = env.ctx
    count = max(env.n // 40, 3)
    for _ in range(count):
        b = _random_b0(env)
        T = [list(r) for r in monodromy_from_bshift_loop(ctx, b).matrix]
        U = _random_unimodular(len(T), env.rng, 20)
        Ui = linalg.inverse(U)
        T2 = linalg.matmul(linalg.matmul(Ui, T), U)
        expect(weight_filtration(log_unipotent(T)).dims == weight_filtration(log_unipotent(T2)).dims,
               B0=b)
    return count


@suite("limits.orbit_closed_form_and_monotone")
def _(env):
    L = lattice_from_label("<2>+U")
    split = HyperbolicSplitting(L, L.basis_vector(1), L.basis_vector(2))
    B = L.basis_vector(0)
    trace = b_shift_orbit(split, B, split.vstar, 60)
    for k, x in enumerate(trace.points, start=1):
        expect(x == k * B + split.vstar - k * k * split.v, step=k)
    d = trace.distances
    expect(all(a > b for a, b in zip(d, d[1:])), distances=[repr(x) for x in d])
    fixed = b_shift_orbit(split, B, split.v, 5)
    expect(all(x == 0.0 for x in fixed.distances), start="v")
    return 61


@suite("limits.isotropic_points")
def _(env):
    split = env.ctx.splitting
    for _ in range(env.n):
        r = smp.rational_vector(env.ctx.gamma, env.rng, smp.GAMMA_PRIME, 3, 4)
        x = isotropic_lattice_point_near(split, r)
        expect(x.is_integral() and is_primitive(x) and x.sq() == 0, r=r)
    return env.n


@suite("limits.kummer_planes")
def _(env):
    ctx = env.ctx
    count = max(env.n // 50, 2)
    for _ in range(count):
        t = smp.random_triple(ctx, env.rng, b_field="zero", length=3)
        k = kummer_plane_near(ctx, t.line.re, t.line.im, 20)
        expect(k.complete and is_kummer_plane(k.x1, k.x2) and is_primitive(k.x1) and is_primitive(k.x2)
               and all((a * k.x1 + b * k.x2).sq() % 4 == 0 for a in range(-10, 11) for b in range(-10, 11)),
               y1=t.line.re, y2=t.line.im)
    return count


@suite("limits.fibre_volume_shrinks")
def _(env):
    ctx = env.ctx
    ts = [Fraction(k, 2) for k in range(1, 11)]
    count = 0
    for rich in (False, True):
        t = smp.mshk_triple(ctx, rich)
        vals = fibre_volume_sequence(ctx, t.line, t.omega, ts)
        for tv, val in zip(ts, vals):
            expect(val == 1 / ((tv * t.line.re) @ ctx.v), t=tv)
        expect(all(a > b for a, b in zip(vals, vals[1:])), values=vals)
        count += len(ts)
    return count


# ---------------------------------------------------------------------------


def run_suite(name: str, seed: int, n: int, inject: str | None = None) -> SuiteResult:
    env = Env(smp.suite_rng(seed, name), n, inject)
    try:
        checked = SUITES[name](env)
    except Failure as f:
        return SuiteResult(name, False, 0, f.payload)
    except Exception as e:  # a crash is a failed invariant, reported with its message
        return SuiteResult(name, False, 0, {"error": f"{type(e).__name__}: {e}"})
    return SuiteResult(name, True, checked)


def run_all(seed: int, n: int, inject: str | None = None, only: str | None = None) -> dict:
    names = sorted(k for k in SUITES if only is None or k.startswith(only))
    results = [run_suite(k, seed, n, inject) for k in names]
    return {
        "seed": seed,
        "sample_count": n,
        "inject": inject,
        "passed": all(r.passed for r in results),
        "suites": [r.as_dict() for r in results],
    }
