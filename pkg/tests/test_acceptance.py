"""Acceptance criteria 1 to 11, one printed PASS/FAIL line each.

Run ``python tests/test_acceptance.py`` for just the lines, or through pytest
where they appear in the terminal summary.  Everything is exact except
criterion 8's orbit distance, pinned at ORBIT_TOL.
"""
import subprocess
import sys
from fractions import Fraction

import pytest

from k3lab import linalg
from k3lab import sampling as smp
from k3lab.isometry import (
    Isometry,
    LinearMap,
    MirrorContext,
    mk_eta,
    mk_exp_b,
    mk_phi_b,
    mk_psi0,
    mk_psi1,
)
from k3lab.lattice import HyperbolicSplitting, Vector, hyperbolic_plane, is_primitive, k3_lattice, lattice_from_label
from k3lab.limits import (
    b_shift_orbit,
    fibre_volume_sequence,
    isotropic_lattice_point_near,
    kummer_plane_near,
    lcs_check,
    log_unipotent,
    monodromy_from_bshift_loop,
    weight_filtration,
)
from k3lab.mirror import (
    dolgachev_alpha,
    elliptic_context,
    elliptic_mirror,
    fm_compare,
    mirror_triple,
    psi0_action,
    psi1_action,
    psi1_scale,
    xi_tilde_on_pairs,
)
from k3lab.period import KahlerTriple, ComplexLine, forget, gamma_embed, phi34, pi_project, psi43

SEED = 42
ORBIT_TOL = 1e-9
RESULTS: dict[int, tuple[bool, str]] = {}

CTX = MirrorContext.standard()


def rng(tag):
    return smp.suite_rng(SEED, f"acceptance.{tag}")


def record(n, ok, detail):
    RESULTS[n] = (bool(ok), detail)
    return ok


def line(n):
    ok, detail = RESULTS[n]
    return f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"


# ---------------------------------------------------------------------------


def check_1():
    K3 = k3_lattice()
    w, ws = hyperbolic_plane().basis()
    facts = K3.rank == 22 and K3.signature == (3, 19) and K3.is_even
    forms = all((w + m * ws).sq() == 2 * m for m in range(-3, 6))
    return record(1, facts and forms, f"rank {K3.rank}, signature {K3.signature}, even {K3.is_even}; "
                                      f"q(w+mw*) = 2m for m in -3..5: {forms}")


def check_2():
    r = rng(2)
    eta = mk_eta(CTX)
    bad = 0
    for _ in range(200):
        b = smp.small_vector(CTX.gamma, r, bound=3)
        phi, ex = mk_phi_b(CTX, b), mk_exp_b(CTX, b)
        lhs = eta @ LinearMap(phi.lattice, phi.lattice, phi.matrix)
        rhs = LinearMap(ex.lattice, ex.lattice, ex.matrix) @ eta
        if not (phi.verify() and phi.integral and ex.verify() and lhs.matrix == rhs.matrix):
            bad += 1
    return record(2, bad == 0, f"200 integral B0, {bad} failures (Gram checks and eta intertwining)")


def check_3():
    r = rng(3)
    bad = 0
    for _ in range(200):
        F = smp.random_three_space(CTX, r)
        B = smp.rational_vector(CTX.gamma, r)
        alpha = Fraction(r.randint(1, 30), r.randint(1, 6))
        back = psi43(CTX, phi34(CTX, F, alpha, B))
        t = smp.random_triple(CTX, r)
        pp = gamma_embed(CTX, t)
        orth = all(a @ b == 0 for a in pp.H1.basis for b in pp.H2.basis)
        Fd, al, Bd = forget(t)
        spans = pi_project(pp).same_span(phi34(CTX, Fd, al, Bd))
        if not (back.F == F and back.alpha == alpha and back.B == B and orth and spans):
            bad += 1
    return record(3, bad == 0, f"200 inputs, {bad} failures (psi43∘phi34 = id, H1 ⊥ H2, pi∘gamma = phi)")


def check_4():
    r = rng(4)
    bad_oracle = bad_inv = 0
    for _ in range(200):
        t = smp.random_triple(CTX, r)
        m = mirror_triple(CTX, t)
        if gamma_embed(CTX, m.triple()) != xi_tilde_on_pairs(CTX, gamma_embed(CTX, t)):
            bad_oracle += 1
        if not mirror_triple(CTX, m.triple()).projectively_equals(t):
            bad_inv += 1
    return record(4, bad_oracle == bad_inv == 0,
                  f"200 triples, oracle failures {bad_oracle}, involution failures {bad_inv}")


def check_5():
    ok_mshk = True
    for rich in (False, True):
        t = smp.mshk_triple(CTX, rich)
        m = mirror_triple(CTX, t)
        ok_mshk &= m.sigma == ComplexLine(t.line.re, t.omega) and m.B.is_zero() and m.omega == t.line.im
    f, s0, sigma_i, om_i, vol = smp.elliptic_fixture(CTX)
    em = elliptic_mirror(CTX, f, s0, sigma_i, om_i, vol)
    ref = mirror_triple(elliptic_context(CTX, f, s0), KahlerTriple(sigma_i, om_i, CTX.gamma.zero()))
    ok_ell = (em.sigma.re == ((om_i.sq() / 2) * f + s0 + f) / vol and em.sigma.im == om_i / vol
              and em.sigma == ref.sigma and em.omega == ref.omega and ref.B.is_zero())
    pd = smp.standard_polarization(CTX)
    r = rng(5)
    bad = 0
    for _ in range(100):
        t = smp.random_mirror_side_triple(CTX, r)
        if dolgachev_alpha(pd, t.B, t.omega) != mirror_triple(CTX, t).sigma:
            bad += 1
    return record(5, ok_mshk and ok_ell and bad == 0,
                  f"MSHK {ok_mshk}, elliptic vol={vol} {ok_ell}, Dolgachev mismatches {bad}/100")


def check_6():
    r = rng(6)
    psi0, psi1 = mk_psi0(CTX), mk_psi1(CTX)
    bad0 = bad1 = bad_scale = 0
    for _ in range(100):
        t = smp.random_triple(CTX, r)
        if gamma_embed(CTX, psi0_action(CTX, t)) != gamma_embed(CTX, t).map(psi0):
            bad0 += 1
    for _ in range(100):
        t = smp.random_triple(CTX, r, b_field="orthogonal")
        out = psi1_action(CTX, t)
        if gamma_embed(CTX, out) != gamma_embed(CTX, t).map(psi1):
            bad1 += 1
        if psi1_scale(t) != (out.omega.sq() - out.B.sq()) / 2:
            bad_scale += 1
    return record(6, bad0 == bad1 == bad_scale == 0,
                  f"psi0 {bad0}/100, psi1 {bad1}/100, scale identity {bad_scale}/100 failures")


def check_7():
    r = rng(7)
    bad, done = 0, 0
    L = CTX.gamma
    while done < 20:
        b0 = smp.nonzero_small_vector(L, r, smp.GAMMA_PRIME, bound=2)
        if b0.sq() == 0:
            continue
        done += 1
        T = monodromy_from_bshift_loop(CTX, b0)
        W = weight_filtration(log_unipotent(T))
        w0 = W.vectors(L, 0)
        w2 = [list(x.coords) for x in W.vectors(L, 2)]
        ok = (lcs_check(T) and W.dims[:3] == (1, 1, 2)
              and linalg.rank([list(w0[0].coords), list(CTX.v.coords)]) == 1
              and linalg.rank(w2 + [list(CTX.v.coords), list(b0.coords)]) == 2
              and all(a @ b == 0 for a in w0 for b in W.vectors(L, 3)))
        bad += not ok
    return record(7, bad == 0, f"20 B0 in Γ' with B0² ≠ 0, {bad} failures (dims (1,1,2), W0 = Qv, W2 = Qv+QB0, W0 ⊥ W3)")


def check_8():
    L = lattice_from_label("<2>+U")
    B, v, vs = L.basis()
    split = HyperbolicSplitting(L, v, vs)
    tr = b_shift_orbit(split, B, vs, 60)
    dist = tr.distances[-1]
    orbit_ok = dist < ORBIT_TOL
    r = rng(8)
    iso_ok = True
    for _ in range(100):
        rv = smp.rational_vector(CTX.gamma, r, smp.GAMMA_PRIME, bound=4, den=5)
        x = isotropic_lattice_point_near(CTX.splitting, rv)
        iso_ok &= x.sq() == 0 and is_primitive(x) and x.is_integral()
    e = CTX.gamma.basis_vector
    kum_ok = True
    for y1, y2 in [(e(16) + e(17), e(18) + e(19)), (e(16) + 2 * e(17), 3 * e(18) + e(19) + e(0))]:
        k = kummer_plane_near(CTX, y1, y2, 20)
        alg = (k.x1 @ k.x2 == 0 and k.x1.sq() % 4 == 0 and k.x2.sq() % 4 == 0
               and k.x1.sq() > 0 and k.x2.sq() > 0)
        grid = all((a * a * k.x1.sq() + b * b * k.x2.sq()) % 4 == 0
                   and (a * k.x1 + b * k.x2).sq() % 4 == 0
                   for a in range(-10, 11) for b in range(-10, 11))
        kum_ok &= k.complete and alg and grid
    return record(8, orbit_ok and iso_ok and kum_ok,
                  f"orbit distance at k=60 is {dist:.3e} (tol {ORBIT_TOL:g}) -> {orbit_ok}; "
                  f"isotropic points {iso_ok}; Kummer planes {kum_ok}")


def check_9():
    ok = True
    ts = [Fraction(k, 3) for k in range(1, 13)]
    for rich in (False, True):
        t = smp.mshk_triple(CTX, rich)
        vals = fibre_volume_sequence(CTX, t.line, t.omega, ts)
        exact = all(val == 1 / ((s * t.line.re) @ CTX.v) for s, val in zip(ts, vals))
        mono = all(a > b for a, b in zip(vals, vals[1:]))
        ok &= exact and mono
    return record(9, ok, f"{len(ts)} t-values on two MSHK fixtures: exact 1/<Re σ_t,v> and strictly decreasing {ok}")


def check_10():
    f, s0, *_ = smp.elliptic_fixture(CTX)
    rep = fm_compare(CTX, f, s0)
    ok = rep["xi_f_is_pt"] and rep["xi_vstar_is_one"]
    return record(10, ok, f"ξ(f) = [pt] {rep['xi_f_is_pt']}, ξ(f+σ0) = 1 {rep['xi_vstar_is_one']}; "
                          f"reported discrepancies: {', '.join(rep['discrepancies']) or 'none'}")


def check_11():
    cmd = [sys.executable, "-m", "k3lab", "verify", "all", "--seed", str(SEED)]
    a = subprocess.run(cmd, capture_output=True)
    b = subprocess.run(cmd, capture_output=True)
    same = a.stdout == b.stdout and len(a.stdout) > 0
    return record(11, same and a.returncode == 0 == b.returncode,
                  f"two runs, {len(a.stdout)} bytes, identical {same}, exit codes {a.returncode}/{b.returncode}")


CHECKS = {n: globals()[f"check_{n}"] for n in range(1, 12)}


@pytest.mark.parametrize("n", sorted(CHECKS))
def test_criterion(n):
    ok = CHECKS[n]()
    print(line(n))
    assert ok, line(n)


if __name__ == "__main__":
    for n in sorted(CHECKS):
        CHECKS[n]()
        print(line(n), flush=True)
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
