"""Period-domain points as exact rational spanning data.

Positive subspaces are ordered spanning tuples; orientation is the basis
order.  Nothing is orthonormalized, so every comparison stays over Q.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple, Sequence

from . import linalg
from .isometry import MirrorContext
from .lattice import IntegralLattice, LatticeError, LatticeMismatch, Vector


class PeriodError(LatticeError):
    pass


class IrrationalNormalization(PeriodError):
    """The plane has no rational orthogonal basis of equal squares in the tried directions."""


def gram_of(vectors: Sequence[Vector]) -> list[list[Fraction]]:
    return [[a @ b for b in vectors] for a in vectors]


def _same_lattice(vectors: Sequence[Vector]) -> IntegralLattice:
    L = vectors[0].lattice
    for x in vectors[1:]:
        L._check(x)
    return L


def coefficients_in(basis: Sequence[Vector], x: Vector) -> list[Fraction] | None:
    """Coordinates of ``x`` in ``basis`` or ``None`` if ``x`` is outside the span."""
    cols = linalg.transpose([list(b.coords) for b in basis])
    c = linalg.solve(cols, list(x.coords))
    return c


def change_of_basis(old: Sequence[Vector], new: Sequence[Vector]) -> list[list[Fraction]] | None:
    """Matrix whose j-th column expresses ``new[j]`` in ``old``; None if spans differ.

    When the form is nondegenerate on ``old`` the coefficients come from its
    Gram matrix; each reconstruction is then checked exactly.
    """
    if len(new) != len(old):
        return None
    G = gram_of(old)
    if linalg.det(G) == 0:
        cols = []
        for y in new:
            c = coefficients_in(old, y)
            if c is None:
                return None
            cols.append(c)
    else:
        Gi = linalg.inverse(G)
        cols = []
        for y in new:
            c = linalg.matvec(Gi, [b @ y for b in old])
            if _combine(old, c) != y:
                return None
            cols.append(c)
    m = linalg.transpose(cols)
    if linalg.det(m) == 0:
        return None
    return m


def same_span(a: Sequence[Vector], b: Sequence[Vector]) -> bool:
    return change_of_basis(a, b) is not None


def same_oriented_span(a: Sequence[Vector], b: Sequence[Vector]) -> bool:
    m = change_of_basis(a, b)
    return m is not None and linalg.det(m) > 0


@dataclass(frozen=True, eq=False)
class PositiveSpace:
    """Ordered basis of a positive definite subspace; orientation is the basis order."""

    basis: tuple[Vector, ...]

    def __post_init__(self):
        basis = tuple(self.basis)
        object.__setattr__(self, "basis", basis)
        if not basis:
            raise PeriodError("empty basis")
        _same_lattice(basis)
        if not linalg.is_positive_definite(gram_of(basis)):
            raise PeriodError(f"restricted form on the {len(basis)}-space is not positive definite")

    @property
    def lattice(self) -> IntegralLattice:
        return self.basis[0].lattice

    @property
    def dim(self) -> int:
        return len(self.basis)

    def gram(self) -> list[list[Fraction]]:
        return gram_of(self.basis)

    def contains(self, x: Vector) -> bool:
        return coefficients_in(self.basis, x) is not None

    def same_span(self, other: "PositiveSpace") -> bool:
        return same_span(self.basis, other.basis)

    def __eq__(self, other) -> bool:
        """Equality as oriented subspaces."""
        if not isinstance(other, PositiveSpace):
            return NotImplemented
        return self.lattice == other.lattice and same_oriented_span(self.basis, other.basis)

    __hash__ = None

    def map(self, f: Callable[[Vector], Vector]):
        return type(self)(tuple(f(b) for b in self.basis))


class ThreeSpace(PositiveSpace):
    def __post_init__(self):
        super().__post_init__()
        if self.dim != 3:
            raise PeriodError("a three-space needs three vectors")


class FourSpace(PositiveSpace):
    def __post_init__(self):
        super().__post_init__()
        if self.dim != 4:
            raise PeriodError("a four-space needs four vectors")


class OrientedPlane(PositiveSpace):
    def __init__(self, b1: Vector, b2: Vector | None = None):
        basis = tuple(b1) if b2 is None else (b1, b2)
        object.__setattr__(self, "basis", basis)
        self.__post_init__()

    def __post_init__(self):
        super().__post_init__()
        if self.dim != 2:
            raise PeriodError("a plane needs two vectors")

    @property
    def b1(self) -> Vector:
        return self.basis[0]

    @property
    def b2(self) -> Vector:
        return self.basis[1]

    def reversed(self) -> "OrientedPlane":
        return OrientedPlane(self.b2, self.b1)

    def __repr__(self):
        return f"OrientedPlane({self.b1!r}, {self.b2!r})"


def oriented_plane_equals(p: OrientedPlane, q: OrientedPlane) -> bool:
    if p.lattice != q.lattice:
        raise LatticeMismatch("planes live in different lattices")
    return p == q


@dataclass(frozen=True, eq=False)
class ComplexLine:
    """x = re + i·im with x² = 0 and (x + x̄)² > 0."""

    re: Vector
    im: Vector

    def __post_init__(self):
        self.re.lattice._check(self.im)
        a, b, c = self.re.sq(), self.im.sq(), self.re @ self.im
        if a != b or c != 0 or a <= 0:
            raise PeriodError("line needs re² = im² > 0 and <re,im> = 0")

    @property
    def lattice(self) -> IntegralLattice:
        return self.re.lattice

    def plane(self) -> OrientedPlane:
        return OrientedPlane(self.re, self.im)

    def rescale(self, c, d=0) -> "ComplexLine":
        """Multiply by λ = c + d·i."""
        c, d = Fraction(c), Fraction(d)
        if c == 0 and d == 0:
            raise PeriodError("cannot rescale by zero")
        return ComplexLine(c * self.re - d * self.im, d * self.re + c * self.im)

    def pair(self, y: Vector) -> tuple[Fraction, Fraction]:
        """<x, y> as (real, imaginary) parts."""
        return self.re @ y, self.im @ y

    def __eq__(self, other) -> bool:
        """Projective equality (same oriented plane)."""
        if not isinstance(other, ComplexLine):
            return NotImplemented
        return self.plane() == other.plane()

    __hash__ = None

    def __repr__(self):
        return f"ComplexLine(re={self.re!r}, im={self.im!r})"


def plane_from_line(x: ComplexLine) -> OrientedPlane:
    return x.plane()


def _rational_sqrt(q: Fraction) -> Fraction | None:
    from math import isqrt
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def line_from_plane(p: OrientedPlane) -> ComplexLine:
    """Inverse dictionary: a line whose plane is ``p``, when it exists over Q.

    Uses the Gram–Schmidt pair (b1, b2 − t·b1); if the ratio of their squares
    is not a rational square, raises :class:`IrrationalNormalization`.
    """
    b1 = p.b1
    b2 = p.b2 - ((p.b1 @ p.b2) / p.b1.sq()) * p.b1
    r = _rational_sqrt(b1.sq() / b2.sq())
    if r is None:
        raise IrrationalNormalization("irrational normalization required for this plane")
    return ComplexLine(b1, r * b2)


@dataclass(frozen=True, eq=False)
class KahlerTriple:
    """((P, ω), B): period line, Kähler class ω ⊥ P with ω² > 0, and B-field."""

    line: ComplexLine
    omega: Vector
    B: Vector

    def __post_init__(self):
        L = self.line.lattice
        L._check(self.omega)
        L._check(self.B)
        if self.omega @ self.line.re != 0 or self.omega @ self.line.im != 0:
            raise PeriodError("ω must be orthogonal to the period plane")
        if self.omega.sq() <= 0:
            raise PeriodError("ω² must be positive")

    @property
    def lattice(self) -> IntegralLattice:
        return self.line.lattice

    @property
    def alpha(self) -> Fraction:
        return self.omega.sq()

    def plane(self) -> OrientedPlane:
        return self.line.plane()

    def three_space(self) -> ThreeSpace:
        """The oriented positive three-space (Re σ, Im σ, ω)."""
        return ThreeSpace((self.line.re, self.line.im, self.omega))

    def __repr__(self):
        return f"KahlerTriple(line={self.line!r}, omega={self.omega!r}, B={self.B!r})"


@dataclass(frozen=True, eq=False)
class PlanePair:
    H1: OrientedPlane
    H2: OrientedPlane

    def __post_init__(self):
        if self.H1.lattice != self.H2.lattice:
            raise LatticeMismatch("planes of a pair must share a lattice")
        if any(a @ b for a in self.H1.basis for b in self.H2.basis):
            raise PeriodError("H1 and H2 must be orthogonal")

    @property
    def lattice(self) -> IntegralLattice:
        return self.H1.lattice

    def map(self, f: Callable[[Vector], Vector]) -> "PlanePair":
        return PlanePair(self.H1.map(f), self.H2.map(f))

    def __eq__(self, other) -> bool:
        """Equality as ordered pairs of oriented planes."""
        if not isinstance(other, PlanePair):
            return NotImplemented
        return self.H1 == other.H1 and self.H2 == other.H2

    __hash__ = None


# ---------------------------------------------------------------------------
# dictionaries between the period domains


class FourSpaceData(NamedTuple):
    F: ThreeSpace
    alpha: Fraction
    B: Vector


def phi34(ctx: MirrorContext, F: ThreeSpace | Sequence[Vector], alpha, B: Vector) -> FourSpace:
    """(F, α, B) ↦ Π = B'R ⊕ F' with B' = B + ½(α − B²)w + w* and f' = f − <f,B>w."""
    if not isinstance(F, ThreeSpace):
        F = ThreeSpace(tuple(F))
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise PeriodError("α must be positive")
    B = ctx.to_gamma(B)
    for f in F.basis:
        ctx.gamma._check(f)
    w, ws = ctx.w, ctx.wstar
    Bl = ctx.lift(B)
    b_prime = Bl + ((alpha - B.sq()) / 2) * w + ws
    f_prime = [ctx.lift(f) - (f @ B) * w for f in F.basis]
    assert all(fp @ b_prime == 0 for fp in f_prime)
    return FourSpace((b_prime, *f_prime))


def psi43(ctx: MirrorContext, Pi: FourSpace | Sequence[Vector]) -> FourSpaceData:
    """Inverse of :func:`phi34`.

    B' is the vector of Π orthogonal to Π ∩ w^⊥, scaled so <B',w> = 1;
    F' is the image of Π's basis under the projection along B' into w^⊥.
    """
    basis = tuple(Pi.basis) if isinstance(Pi, PositiveSpace) else tuple(Pi)
    if len(basis) != 4:
        raise PeriodError("Π needs four vectors")
    for p in basis:
        ctx.gamma_u._check(p)
    w = ctx.w
    row = [p @ w for p in basis]
    if all(r == 0 for r in row):
        raise PeriodError("Π ⊂ w^⊥: Π ∩ w^⊥ is not three-dimensional")
    Pi = Pi if isinstance(Pi, FourSpace) else FourSpace(basis)
    kernel = linalg.nullspace([row])  # coefficients of Π ∩ w^⊥
    G = Pi.gram()
    c = linalg.nullspace(linalg.matmul(kernel, G))
    if len(c) != 1:
        raise PeriodError("could not isolate the B' direction")
    b_prime = _combine(basis, c[0])
    t = b_prime @ w
    if t == 0:
        raise PeriodError("B' lies in w^⊥")
    b_prime = b_prime / t
    f_prime = []
    for p in basis:
        q = p - (p @ w) * b_prime
        if not q.is_zero() and _independent(f_prime + [q]):
            f_prime.append(q)
        if len(f_prime) == 3:
            break
    # keep (B', F') oriented like Π
    if linalg.det(change_of_basis(basis, [b_prime] + f_prime)) < 0:
        f_prime[-1] = -f_prime[-1]
    F = ThreeSpace(tuple(ctx.project(q) for q in f_prime))
    return FourSpaceData(F, b_prime.sq(), ctx.project(b_prime))


def _combine(basis: Sequence[Vector], coeffs: Sequence[Fraction]) -> Vector:
    out = basis[0].lattice.zero()
    for b, c in zip(basis, coeffs):
        if c:
            out = out + c * b
    return out


def _independent(vectors: Sequence[Vector]) -> bool:
    return linalg.rank([list(v.coords) for v in vectors]) == len(vectors)


def forget(t: KahlerTriple) -> FourSpaceData:
    """(P, ω, B) ↦ (F = P ⊕ Rω, α = ω², B)."""
    return FourSpaceData(t.three_space(), t.alpha, t.B)


def delta_embed(ctx: MirrorContext, P: OrientedPlane, B: Vector) -> OrientedPlane:
    """(P, B) ↦ {x − <x,B>w | x ∈ P} inside Γ⊕U."""
    B = ctx.to_gamma(B)
    return OrientedPlane(*(ctx.lift(x) - (ctx.to_gamma(x) @ B) * ctx.w for x in P.basis))


def gamma_embed(ctx: MirrorContext, t: KahlerTriple) -> PlanePair:
    """((P, ω), B) ↦ (H1, H2) in Γ⊕U."""
    B, om = t.B, t.omega
    w, ws = ctx.w, ctx.wstar
    H1 = delta_embed(ctx, t.plane(), B)
    h21 = ((t.alpha - B.sq()) / 2) * w + ws + ctx.lift(B)
    h22 = ctx.lift(om) - (om @ B) * w
    return PlanePair(H1, OrientedPlane(h21, h22))


def pi_project(pp: PlanePair) -> FourSpace:
    return FourSpace(pp.H1.basis + pp.H2.basis)
