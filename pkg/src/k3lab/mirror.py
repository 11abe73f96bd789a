"""The mirror map ξ̃ = ι∘ξ on triples ((P, ω), B) and its special cases."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from . import linalg
from .isometry import MirrorContext, mk_eta, mk_xi
from .lattice import (
    HyperbolicSplitting,
    LatticeError,
    Sublattice,
    Vector,
    orthogonal_complement,
)
from .period import (
    ComplexLine,
    KahlerTriple,
    OrientedPlane,
    PeriodError,
    PlanePair,
)


class MirrorUndefined(PeriodError):
    pass


@dataclass(frozen=True, eq=False)
class MirrorImage:
    sigma: ComplexLine
    omega: Vector
    B: Vector

    def __post_init__(self):
        # validity as a triple is part of the contract
        self.triple()

    def triple(self) -> KahlerTriple:
        return KahlerTriple(self.sigma, self.omega, self.B)

    def projectively_equals(self, other: "MirrorImage | KahlerTriple") -> bool:
        """Same oriented period plane, same ray of ω, same B."""
        s = other.sigma if isinstance(other, MirrorImage) else other.line
        return (self.sigma == s and same_ray(self.omega, other.omega)
                and self.B == other.B)


def same_ray(x: Vector, y: Vector) -> bool:
    """y = t·x for some rational t > 0."""
    x.lattice._check(y)
    i = next((k for k, c in enumerate(x.coords) if c), None)
    if i is None:
        return y.is_zero()
    t = y.coords[i] / x.coords[i]
    return t > 0 and y == t * x


def xi_tilde_on_pairs(ctx: MirrorContext, pp: PlanePair) -> PlanePair:
    """(H1, H2) ↦ (ξ(H2), ξ(H1)), orientations carried by ξ."""
    xi = mk_xi(ctx)
    return PlanePair(pp.H2.map(xi), pp.H1.map(xi))


def normalized_line(ctx: MirrorContext, line: ComplexLine) -> tuple[ComplexLine, Fraction]:
    """Rescale σ so that <Im σ, v> = 0; returns the line and c = <Re σ, v> ≠ 0."""
    v = ctx.v
    a, b = line.re @ v, line.im @ v
    if a == 0 and b == 0:
        raise MirrorUndefined("period plane lies in v^⊥; σ cannot be normalized")
    if b == 0:
        return line, a
    # multiply by λ = a − ib
    return line.rescale(a, -b), a * a + b * b


def mirror_triple(ctx: MirrorContext, t: KahlerTriple) -> MirrorImage:
    """Closed-form ξ̃-mirror of ((P, ω), B).

    Requires ω, B ∈ Γ'_R ⊕ Rv, i.e. <ω, v> = <B, v> = 0; outside that set the
    ξ-image of the pair is not of the form γ(triple) with these formulas.
    """
    ctx.gamma._check(t.omega)
    v, vs = ctx.v, ctx.vstar
    om, B = t.omega, t.B
    if om @ v != 0 or B @ v != 0:
        raise MirrorUndefined("ω and B must be orthogonal to v")
    line, c = normalized_line(ctx, t.line)
    re, im = line.re, line.im
    pr = ctx.pr
    inv = 1 / c
    sig_re = inv * (pr(B) - ((B.sq() - om.sq()) / 2) * v + vs)
    sig_im = inv * (pr(om) - (B @ om) * v)
    B_v = inv * (pr(re) - (re @ B) * v)
    om_v = inv * (pr(im) - (im @ B) * v)
    return MirrorImage(ComplexLine(sig_re, sig_im), om_v, B_v)


def mirror_as_triple(ctx: MirrorContext, t: KahlerTriple) -> KahlerTriple:
    return mirror_triple(ctx, t).triple()


# ---------------------------------------------------------------------------
# ψ0 / ψ1 on triples


def psi0_action(ctx: MirrorContext, t: KahlerTriple) -> KahlerTriple:
    """((P, ω), B) ↦ ((P, −ω), −B)."""
    return KahlerTriple(t.line, -t.omega, -t.B)


def psi1_scale(t: KahlerTriple) -> Fraction:
    d = t.alpha - t.B.sq()
    if d == 0:
        raise PeriodError("α = B²: scale 2/(α − B²) undefined")
    return 2 / d


def psi1_action(ctx: MirrorContext, t: KahlerTriple) -> KahlerTriple:
    """((P, ω), B) ↦ s·((P, ω), B) with s = 2/(α − B²); needs B ⊥ P and B ⊥ ω."""
    B = t.B
    if B @ t.line.re or B @ t.line.im or B @ t.omega:
        raise PeriodError("ψ1 action needs B orthogonal to P and ω")
    s = psi1_scale(t)
    return KahlerTriple(ComplexLine(s * t.line.re, s * t.line.im), s * t.omega, s * B)


# ---------------------------------------------------------------------------
# lattice polarization


def _is_zbasis_of(sub: Sublattice, vectors) -> bool:
    if len(vectors) != sub.rank:
        return False
    for x in vectors:
        if not sub.contains(x):
            return False
    m = [x.int_coords() for x in vectors]
    return linalg.rank(m) == len(m) and all(d == 1 for d in linalg.smith_invariants(m))


@dataclass(frozen=True, eq=False)
class PolarizationData:
    """N ⊂ Γ' with mirror lattice N^∨ = N^⊥ ∩ U'^⊥, so that N^⊥ = N^∨ ⊕ U'."""

    pol: Sublattice
    pol_mirror: Sublattice
    ctx: MirrorContext

    def __post_init__(self):
        v, vs = self.ctx.v, self.ctx.vstar
        if not self.pol.is_orthogonal_to([v, vs]):
            raise LatticeError("N must be orthogonal to U'")
        if not self.pol.is_orthogonal_to(self.pol_mirror):
            raise LatticeError("N and N^∨ must be orthogonal")
        perp = orthogonal_complement(self.pol)
        if not _is_zbasis_of(perp, list(self.pol_mirror.basis) + [v, vs]):
            raise LatticeError("N^∨ ⊕ U' does not saturate N^⊥")

    @classmethod
    def from_pol(cls, ctx: MirrorContext, pol: Sublattice) -> "PolarizationData":
        extra = Sublattice.saturate(ctx.gamma, list(pol.basis) + [ctx.v, ctx.vstar])
        return cls(pol, orthogonal_complement(extra), ctx)

    def signatures(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return self.pol.signature, self.pol_mirror.signature


class Membership(NamedTuple):
    n_side: bool
    mirror_side: bool


def _side(sub: Sublattice, t: KahlerTriple) -> bool:
    return (sub.contains(t.omega) and sub.contains(t.B)
            and sub.is_orthogonal_to([t.line.re, t.line.im]))


def polarized_membership(pd: PolarizationData, t: KahlerTriple) -> Membership:
    """Closure conditions: ω, B ∈ N_R and P ⊥ N (resp. with N^∨)."""
    return Membership(_side(pd.pol, t), _side(pd.pol_mirror, t))


def dolgachev_alpha(pd: PolarizationData, B: Vector, omega: Vector) -> ComplexLine:
    """z = B + iω ↦ line of z − ½z²·v + v*."""
    if omega.sq() <= 0:
        raise PeriodError("ω² must be positive")
    if not (pd.pol_mirror.contains(B) and pd.pol_mirror.contains(omega)):
        raise PeriodError("B and ω must lie in N^∨_R")
    v, vs = pd.ctx.v, pd.ctx.vstar
    z2_re = B.sq() - omega.sq()
    z2_im = 2 * (B @ omega)
    return ComplexLine(B - (z2_re / 2) * v + vs, omega - (z2_im / 2) * v)


# ---------------------------------------------------------------------------
# elliptic K3 and hyperkähler rotation


def elliptic_context(gamma_ctx: MirrorContext, f: Vector, s0: Vector) -> MirrorContext:
    """Marking v = f, v* = f + σ0 from a fibre class and a section class."""
    L = gamma_ctx.gamma
    L._check(f)
    L._check(s0)
    if f.sq() != 0 or s0.sq() != -2 or f @ s0 != 1:
        raise LatticeError("need f² = 0, σ0² = −2, <f,σ0> = 1")
    return MirrorContext(L, f, f + s0)


def elliptic_mirror(ctx: MirrorContext, f: Vector, s0: Vector, sigma_I: ComplexLine,
                    omega_I: Vector, vol_f) -> MirrorImage:
    """Mirror of (X, ω_I) with σ_I = ω_J + iω_K and fibre volume <ω_J, f>.

    σ^∨ = vol⁻¹((ω_I²/2) f + σ0 + f + iω_I), ω^∨ = vol⁻¹·Im σ_I, B^∨ = 0.
    """
    ectx = elliptic_context(ctx, f, s0)
    vol = Fraction(vol_f)
    if vol <= 0:
        raise PeriodError("fibre volume must be positive")
    if sigma_I.re @ f != vol:
        raise PeriodError(f"<ω_J, f> = {sigma_I.re @ f} does not match vol(f) = {vol}")
    split = ectx.splitting
    if not split.in_complement(omega_I):
        raise PeriodError("ω_I must lie in Γ'")
    if not split.in_complement(sigma_I.im):
        raise PeriodError("Im σ_I must lie in Γ' (fibres special Lagrangian)")
    re = ((omega_I.sq() / 2) * f + s0 + f) / vol
    return MirrorImage(ComplexLine(re, omega_I / vol), sigma_I.im / vol, ctx.gamma.zero())


def hk_rotation_check(ctx: MirrorContext, t: KahlerTriple) -> bool:
    """Whether ξ̃ of (X, ω_I, 0) is the −K rotation: σ^∨ ~ ω_J + iω_I and B^∨ = 0.

    The mirror Kähler class then equals −ω_{−K} = Im σ_I; that sign is the
    global −id ambiguity and is not tested here.
    """
    if not t.B.is_zero():
        raise PeriodError("hyperkähler rotation check needs B = 0")
    split = ctx.splitting
    re, im = t.line.re, t.line.im
    if not split.project(re).is_zero():
        raise PeriodError("Re σ_I must lie in U'_R")
    if not (split.in_complement(im) and split.in_complement(t.omega)):
        raise PeriodError("Im σ_I and ω_I must lie in Γ'_R")
    image = mirror_triple(ctx, t)
    rotated = ComplexLine(re, t.omega)  # σ_{−K} = ω_J + iω_I
    return image.sigma == rotated and image.B.is_zero() and image.omega == im / (re @ ctx.v)


# ---------------------------------------------------------------------------
# cohomological Fourier–Mukai comparison


class FMRow(NamedTuple):
    name: str
    source: Vector
    xi_image: Vector
    expected: Vector | None
    agrees_plain: bool | None
    agrees_via_eta: bool | None


def fm_compare(ctx: MirrorContext, f: Vector, s0: Vector) -> dict:
    """Compare ξ with the Mukai vectors of the relative Fourier–Mukai transform.

    Identification: w* = 1 ∈ H⁰, w = [pt] ∈ H⁴, v = f, v* = f + σ0.  Expected
    images: O_f ↦ O_{σ0∩f} ([pt]), O_{σ0}(−1) ↦ O_Y ([pt] + [Y]), their sum by
    linearity, and a point ↦ a degree-0 line bundle on its fibre (f).  No
    image is asserted for 1.
    """
    ectx = elliptic_context(ctx, f, s0)
    xi = mk_xi(ectx)
    eta = mk_eta(ectx)
    w, ws = ectx.w, ectx.wstar
    fu, su = ectx.lift(f), ectx.lift(s0)
    cases = [
        ("f", fu, w),
        ("sigma0", su, w + ws),
        ("f+sigma0", fu + su, 2 * w + ws),
        ("pt", w, fu),
        ("1", ws, None),
    ]
    rows = []
    for name, x, exp in cases:
        y = xi(x)
        if exp is None:
            rows.append(FMRow(name, x, y, None, None, None))
            continue
        plain = y == exp
        # the expected Mukai vector lives in Γ⊕(−U) with the same coordinates
        via = eta(y).coords == exp.coords
        rows.append(FMRow(name, x, y, exp, plain, via))
    return {
        "rows": rows,
        "xi_f_is_pt": xi(fu) == w,
        "xi_vstar_is_one": xi(fu + su) == ws,
        "discrepancies": [r.name for r in rows if r.agrees_plain is False],
    }


# ---------------------------------------------------------------------------
# (−2)-classes orthogonal to the mirror data


def singular_classes(image: MirrorImage, support: int = 2, bound: int = 1) -> list[Vector]:
    """(−2)-classes c with <c, σ^∨> = <c, ω^∨> = 0 among small vectors.

    Searches vectors with at most ``support`` nonzero coordinates in
    [−bound, bound].  Finding none proves nothing.
    """
    L = image.omega.lattice
    checks = (image.sigma.re, image.sigma.im, image.omega)
    found = []
    values = [k for k in range(-bound, bound + 1) if k]
    for s in range(1, support + 1):
        for idx in itertools.combinations(range(L.rank), s):
            for vals in itertools.product(values, repeat=s):
                coords = [0] * L.rank
                for i, a in zip(idx, vals):
                    coords[i] = a
                c = Vector(L, coords)
                if c.sq() == -2 and all(c @ x == 0 for x in checks):
                    found.append(c)
    return found
