"""Seeded random inputs for the property suites.

Valid triples are produced by moving a fixed base triple with random words
in isometries that fix v (reflections in roots of Γ', internal B-shifts).
Every step is applied to vectors directly, never through matrices.
"""
from __future__ import annotations

import hashlib
import random
from fractions import Fraction
from typing import Callable, Sequence

from .isometry import MirrorContext, reflect
from .lattice import IntegralLattice, Sublattice, Vector
from .mirror import PolarizationData
from .period import ComplexLine, KahlerTriple, ThreeSpace

# coordinate blocks of the standard K3 lattice
E8_1 = range(0, 8)
E8_2 = range(8, 16)
U1, U2, U3 = (16, 17), (18, 19), (20, 21)


def suite_rng(seed: int, name: str) -> random.Random:
    """Independent stream per (seed, suite name)."""
    digest = hashlib.sha256(f"{seed}:{name}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def small_vector(L: IntegralLattice, rng: random.Random, indices: Sequence[int] | None = None,
                 bound: int = 2) -> Vector:
    idx = range(L.rank) if indices is None else indices
    coords = [0] * L.rank
    for i in idx:
        coords[i] = rng.randint(-bound, bound)
    return Vector(L, coords)


def nonzero_small_vector(L, rng, indices=None, bound=2) -> Vector:
    while True:
        x = small_vector(L, rng, indices, bound)
        if not x.is_zero():
            return x


def random_rational(rng: random.Random, bound: int = 5, den: int = 4) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, den))


def rational_vector(L, rng, indices=None, bound=3, den=3) -> Vector:
    idx = range(L.rank) if indices is None else indices
    coords = [Fraction(0)] * L.rank
    for i in idx:
        coords[i] = random_rational(rng, bound, den)
    return Vector(L, coords)


def _unit(L, i) -> Vector:
    return L.basis_vector(i)


def gamma_prime_roots(ctx: MirrorContext, blocks=("e8_1", "e8_2", "u1", "u2")) -> list[Vector]:
    """Simple roots of the −E8 summands and u − u* for the first two U summands."""
    L = ctx.gamma
    roots = []
    if "e8_1" in blocks:
        roots += [_unit(L, i) for i in E8_1]
    if "e8_2" in blocks:
        roots += [_unit(L, i) for i in E8_2]
    if "u1" in blocks:
        roots.append(_unit(L, U1[0]) - _unit(L, U1[1]))
    if "u2" in blocks:
        roots.append(_unit(L, U2[0]) - _unit(L, U2[1]))
    return roots


def internal_shift(ctx: MirrorContext, B: Vector) -> Callable[[Vector], Vector]:
    v = ctx.v
    half = B.sq() / 2

    def f(x: Vector) -> Vector:
        t = x @ v
        return x + t * B - ((B @ x) + t * half) * v

    return f


def random_word(ctx: MirrorContext, rng: random.Random, length: int, roots: Sequence[Vector],
                shift_indices: Sequence[int] | None) -> list[Callable[[Vector], Vector]]:
    """Isometries of Γ fixing v: reflections in ``roots`` and shifts supported on ``shift_indices``."""
    word = []
    for _ in range(length):
        if shift_indices and rng.random() < 0.3:
            word.append(internal_shift(ctx, nonzero_small_vector(ctx.gamma, rng, shift_indices, 1)))
        else:
            c = rng.choice(roots)
            word.append(lambda x, c=c: reflect(c, x))
    return word


def apply_word(word, x: Vector) -> Vector:
    for g in word:
        x = g(x)
    return x


def _rescale(line: ComplexLine, rng: random.Random) -> ComplexLine:
    while True:
        c, d = random_rational(rng, 4, 3), random_rational(rng, 4, 3)
        if c or d:
            return line.rescale(c, d)


GAMMA_PRIME = tuple(range(0, 20))


def random_triple(ctx: MirrorContext, rng: random.Random, *, length: int = 6,
                  b_field: str = "general") -> KahlerTriple:
    """A valid triple with ω, B ⊥ v and <σ, v> ≠ 0.

    ``b_field``: "general" (B ∈ Γ'_Q + Qv), "zero", or "orthogonal"
    (B ⊥ P and B ⊥ ω, taken from the second −E8 before moving).
    """
    L = ctx.gamma
    e = lambda i: _unit(L, i)
    re0 = e(U2[0]) + e(U2[1])
    im0 = ctx.v + ctx.vstar
    s = rng.choice([1, 2, 3])
    r = rng.randint(-s + 1, s - 1)
    om0 = s * (e(U1[0]) + e(U1[1])) + r * e(0)
    if b_field == "zero":
        B0 = L.zero()
    elif b_field == "orthogonal":
        B0 = rational_vector(L, rng, E8_2)
    else:
        B0 = rational_vector(L, rng, GAMMA_PRIME, 2, 3) + random_rational(rng) * ctx.v
    roots = gamma_prime_roots(ctx)
    word = random_word(ctx, rng, length, roots, GAMMA_PRIME)
    re, im, om, B = (apply_word(word, x) for x in (re0, im0, om0, B0))
    line = _rescale(ComplexLine(re, im), rng)
    om = rng.randint(1, 3) * om / rng.randint(1, 3)
    if b_field == "orthogonal":
        # keep α ≠ B² so that the ψ1 scale is defined
        while om.sq() == B.sq():
            om = 2 * om
    return KahlerTriple(line, om, B)


def random_three_space(ctx: MirrorContext, rng: random.Random) -> ThreeSpace:
    L = ctx.gamma
    e = lambda i: _unit(L, i)
    base = [e(a) + e(b) for a, b in (U1, U2, U3)]
    word = random_word(ctx, rng, 5, gamma_prime_roots(ctx), GAMMA_PRIME)
    moved = [apply_word(word, x) for x in base]
    # random upper-triangular rational change of basis with positive diagonal
    out = []
    for i in range(3):
        x = Fraction(rng.randint(1, 4), rng.randint(1, 3)) * moved[i]
        for j in range(i + 1, 3):
            x = x + random_rational(rng, 2, 3) * moved[j]
        out.append(x)
    return ThreeSpace(tuple(out))


# ---------------------------------------------------------------------------
# lattice polarization N = U1 ⊕ E8#1, N^∨ = E8#2 ⊕ U2


def standard_polarization(ctx: MirrorContext) -> PolarizationData:
    L = ctx.gamma
    pol = Sublattice(L, tuple(_unit(L, i) for i in (*E8_1, *U1)))
    return PolarizationData.from_pol(ctx, pol)


def random_mirror_side_triple(ctx: MirrorContext, rng: random.Random, length: int = 6) -> KahlerTriple:
    """ω, B ∈ N^∨_Q and P ⊂ (N ⊕ U')_Q."""
    L = ctx.gamma
    e = lambda i: _unit(L, i)
    n_roots = gamma_prime_roots(ctx, ("e8_1", "u1"))
    m_roots = gamma_prime_roots(ctx, ("e8_2", "u2"))
    n_idx = (*E8_1, *U1)
    m_idx = (*E8_2, *U2)
    s = rng.choice([1, 2, 3])
    r = rng.randint(-s + 1, s - 1)
    om0 = s * (e(U2[0]) + e(U2[1])) + r * e(8)
    B0 = rational_vector(L, rng, m_idx, 2, 3)
    wm = random_word(ctx, rng, length, m_roots, None)
    om, B = apply_word(wm, om0), apply_word(wm, B0)
    wn = random_word(ctx, rng, length, n_roots, n_idx)
    re = apply_word(wn, e(U1[0]) + e(U1[1]))
    im = apply_word(wn, ctx.v + ctx.vstar)
    return KahlerTriple(_rescale(ComplexLine(re, im), rng), om, B)


def random_n_side_triple(ctx: MirrorContext, rng: random.Random, length: int = 6) -> KahlerTriple:
    """ω, B ∈ N_Q and P ⊂ (N^∨ ⊕ U')_Q."""
    L = ctx.gamma
    e = lambda i: _unit(L, i)
    n_roots = gamma_prime_roots(ctx, ("e8_1", "u1"))
    m_roots = gamma_prime_roots(ctx, ("e8_2", "u2"))
    n_idx = (*E8_1, *U1)
    m_idx = (*E8_2, *U2)
    s = rng.choice([1, 2, 3])
    r = rng.randint(-s + 1, s - 1)
    om0 = s * (e(U1[0]) + e(U1[1])) + r * e(0)
    B0 = rational_vector(L, rng, n_idx, 2, 3)
    wn = random_word(ctx, rng, length, n_roots, None)
    om, B = apply_word(wn, om0), apply_word(wn, B0)
    wm = random_word(ctx, rng, length, m_roots, m_idx)
    re = apply_word(wm, e(U2[0]) + e(U2[1]))
    im = apply_word(wm, ctx.v + ctx.vstar)
    return KahlerTriple(_rescale(ComplexLine(re, im), rng), om, B)


# ---------------------------------------------------------------------------
# fixtures


def mshk_triple(ctx: MirrorContext, rich: bool = False) -> KahlerTriple:
    """Re σ ∈ U'_Q with <Re σ, v> = 1; Im σ, ω ∈ Γ'_Q; B = 0."""
    L = ctx.gamma
    e = lambda i: _unit(L, i)
    u1 = e(U1[0]) + e(U1[1])
    if not rich:
        return KahlerTriple(ComplexLine(ctx.v + ctx.vstar, e(U2[0]) + e(U2[1])), u1, L.zero())
    om = 2 * u1 + e(0)                     # square 6
    re = 3 * ctx.v + ctx.vstar             # square 6, <re, v> = 1
    im = e(U2[0]) + 3 * e(U2[1])           # square 6
    return KahlerTriple(ComplexLine(re, im), om, L.zero())


def elliptic_fixture(ctx: MirrorContext):
    """(f, σ0, σ_I, ω_I, vol) with f = v, σ0 = v* − v, ω_J = v + 4v*, vol(f) = 4."""
    L = ctx.gamma
    e = lambda i: _unit(L, i)
    f = ctx.v
    s0 = ctx.vstar - ctx.v
    om_j = ctx.v + 4 * ctx.vstar
    om_i = 2 * (e(U1[0]) + e(U1[1]))
    om_k = 2 * (e(U2[0]) + e(U2[1]))
    return f, s0, ComplexLine(om_j, om_k), om_i, Fraction(4)
