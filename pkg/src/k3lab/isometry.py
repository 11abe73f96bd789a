"""Isometries of integral lattices and the generators used by mirror symmetry.

Convention: a matrix acts on column coordinate vectors, its j-th column is
the image of the j-th basis vector, and ``(f @ g)(x) == f(g(x))``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, NamedTuple, Sequence

from . import linalg
from .lattice import (
    HyperbolicSplitting,
    IntegralLattice,
    LatticeError,
    LatticeMismatch,
    Vector,
    direct_sum,
    hyperbolic_plane,
    k3_lattice,
    scaled,
)


class IsometryError(LatticeError):
    pass


def _as_fraction_matrix(m) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(x if type(x) is Fraction else Fraction(x) for x in row) for row in m)


@dataclass(frozen=True, eq=False)
class LinearMap:
    """Rational linear map between two lattices (columns = images of basis vectors)."""

    source: IntegralLattice
    target: IntegralLattice
    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        m = _as_fraction_matrix(self.matrix)
        if len(m) != self.target.rank or any(len(r) != self.source.rank for r in m):
            raise IsometryError("matrix shape does not match lattices")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_images(cls, source, target, images: Sequence[Vector]):
        for y in images:
            target._check(y)
        return cls(source, target, tuple(zip(*[y.coords for y in images])))

    def __call__(self, x: Vector) -> Vector:
        self.source._check(x)
        return Vector._raw(self.target, tuple(linalg.matvec(self.matrix, x.coords)))

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        if other.target != self.source:
            raise LatticeMismatch("cannot compose: codomain/domain mismatch")
        return LinearMap(other.source, self.target, linalg.matmul(self.matrix, other.matrix))

    def pulls_back_form(self) -> bool:
        """True iff ``M^T G_target M == G_source``."""
        mt = linalg.transpose(self.matrix)
        return linalg.matmul(linalg.matmul(mt, self.target.gram), self.matrix) == [
            [Fraction(x) for x in row] for row in self.source.gram]

    @property
    def integral(self) -> bool:
        return all(x.denominator == 1 for row in self.matrix for x in row)


@dataclass(frozen=True, eq=False)
class Isometry:
    lattice: IntegralLattice
    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        m = _as_fraction_matrix(self.matrix)
        n = self.lattice.rank
        if len(m) != n or any(len(r) != n for r in m):
            raise IsometryError(f"matrix must be {n}x{n}")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, lattice: IntegralLattice) -> "Isometry":
        return cls(lattice, linalg.identity(lattice.rank))

    @classmethod
    def from_images(cls, lattice: IntegralLattice, images: Sequence[Vector]) -> "Isometry":
        for y in images:
            lattice._check(y)
        return cls(lattice, tuple(zip(*[y.coords for y in images])))

    @classmethod
    def from_function(cls, lattice: IntegralLattice, f: Callable[[Vector], Vector]) -> "Isometry":
        return cls.from_images(lattice, [f(e) for e in lattice.basis()])

    @cached_property
    def integral(self) -> bool:
        return all(x.denominator == 1 for row in self.matrix for x in row)

    def verify(self) -> bool:
        mt = linalg.transpose(self.matrix)
        lhs = linalg.matmul(linalg.matmul(mt, self.lattice.gram), self.matrix)
        return all(lhs[i][j] == self.lattice.gram[i][j]
                   for i in range(self.lattice.rank) for j in range(self.lattice.rank))

    def __call__(self, x: Vector) -> Vector:
        self.lattice._check(x)
        return Vector._raw(self.lattice, tuple(linalg.matvec(self.matrix, x.coords)))

    def __matmul__(self, other: "Isometry") -> "Isometry":
        if not (other.lattice is self.lattice or other.lattice == self.lattice):
            raise LatticeMismatch("cannot compose isometries of different lattices")
        return Isometry(self.lattice, linalg.matmul(self.matrix, other.matrix))

    def __pow__(self, k: int) -> "Isometry":
        if k < 0:
            return Isometry(self.lattice, linalg.inverse(self.matrix)) ** (-k)
        return Isometry(self.lattice, linalg.mat_pow(self.matrix, k))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Isometry):
            return NotImplemented
        return self.lattice == other.lattice and self.matrix == other.matrix

    __hash__ = None

    def is_identity(self) -> bool:
        return self.matrix == _as_fraction_matrix(linalg.identity(self.lattice.rank))


def verify(i: Isometry) -> bool:
    return i.verify()


# ---------------------------------------------------------------------------
# the marked splittings Γ⊕U and Γ = Γ'⊕U'


@dataclass(frozen=True, eq=False)
class MirrorContext:
    """Γ⊕U with its U basis (w, w*) and a splitting Γ = Γ'⊕U' with basis (v, v*).

    ``w`` and ``w*`` are the last two coordinates of Γ⊕U.  Vectors of Γ are
    moved into Γ⊕U with :meth:`lift` and back with :meth:`project`.
    """

    gamma: IntegralLattice
    v: Vector
    vstar: Vector

    def __post_init__(self):
        split = HyperbolicSplitting(self.gamma, self.v, self.vstar)
        object.__setattr__(self, "splitting", split)

    @classmethod
    def standard(cls) -> "MirrorContext":
        """K3 lattice with U' the last copy of U."""
        k3 = k3_lattice()
        return cls(k3, k3.basis_vector(20), k3.basis_vector(21))

    @cached_property
    def gamma_u(self) -> IntegralLattice:
        return direct_sum(self.gamma, hyperbolic_plane(), label=f"{self.gamma.label}+U")

    @cached_property
    def mukai(self) -> IntegralLattice:
        return direct_sum(self.gamma, scaled(hyperbolic_plane(), -1, "(-U)"),
                          label=f"{self.gamma.label}+(-U)")

    @property
    def n(self) -> int:
        return self.gamma.rank

    @cached_property
    def w(self) -> Vector:
        return self.gamma_u.basis_vector(self.n)

    @cached_property
    def wstar(self) -> Vector:
        return self.gamma_u.basis_vector(self.n + 1)

    @cached_property
    def gamma_prime_basis(self) -> tuple[Vector, ...]:
        return self.splitting.complement_basis

    def lift(self, x: Vector) -> Vector:
        """Γ → Γ⊕U; vectors already in Γ⊕U are returned unchanged."""
        if x.lattice is self.gamma_u or x.lattice == self.gamma_u:
            return x
        self.gamma._check(x)
        return Vector._raw(self.gamma_u, x.coords + (Fraction(0), Fraction(0)))

    def project(self, x: Vector) -> Vector:
        """Γ⊕U → Γ, forgetting the U coordinates."""
        self.gamma_u._check(x)
        return Vector._raw(self.gamma, x.coords[: self.n])

    def in_gamma(self, x: Vector) -> bool:
        self.gamma_u._check(x)
        return x.coords[self.n] == 0 and x.coords[self.n + 1] == 0

    def to_gamma(self, x: Vector) -> Vector:
        """Accept a Γ vector or a Γ⊕U vector supported on Γ; return the Γ vector."""
        if x.lattice is self.gamma or x.lattice == self.gamma:
            return x
        if not self.in_gamma(x):
            raise IsometryError("vector is not supported in the Γ summand")
        return self.project(x)

    def pr(self, x: Vector) -> Vector:
        """Orthogonal projection Γ → Γ'."""
        return self.splitting.project(x)

    @property
    def v_up(self) -> Vector:
        return self.lift(self.v)

    @property
    def vstar_up(self) -> Vector:
        return self.lift(self.vstar)

    def check(self) -> None:
        """Verify the marking invariants of Γ⊕U = Γ'⊕U'⊕U."""
        v, vs, w, ws = self.v_up, self.vstar_up, self.w, self.wstar
        gp = [self.lift(b) for b in self.gamma_prime_basis]
        for a in (v, vs, w, ws):
            if a.sq() != 0:
                raise IsometryError("hyperbolic basis vectors must be isotropic")
        if v @ vs != 1 or w @ ws != 1:
            raise IsometryError("hyperbolic pairs must pair to 1")
        for a in (v, vs):
            for b in (w, ws):
                if a @ b:
                    raise IsometryError("U and U' are not orthogonal")
        for g in gp:
            if any(g @ a for a in (v, vs, w, ws)):
                raise IsometryError("Γ' is not orthogonal to U ⊕ U'")
        basis = [list(x.coords) for x in gp + [v, vs, w, ws]]
        if abs(linalg.det(basis)) != 1:
            raise IsometryError("Γ' ∪ {v, v*, w, w*} is not a Z-basis of Γ⊕U")


# ---------------------------------------------------------------------------
# generators


def mk_phi_b(ctx: MirrorContext, b0: Vector) -> Isometry:
    """B-shift on Γ⊕U: w ↦ w, w* ↦ B0 + w* − (B0²/2) w, x ↦ x − <B0,x> w on Γ."""
    b = ctx.lift(ctx.to_gamma(b0))
    w = ctx.w
    half = b.sq() / 2

    def f(x: Vector) -> Vector:
        t = x @ w
        return x + t * b - ((b @ x) + t * half) * w

    return Isometry.from_function(ctx.gamma_u, f)


def mk_internal_phi_b(split: HyperbolicSplitting, b: Vector) -> Isometry:
    """Internal B-shift on L = L'⊕U': v ↦ v, v* ↦ B + v* − (B²/2) v, x ↦ x − <B,x> v."""
    split.lattice._check(b)
    if not split.in_complement(b):
        raise IsometryError("B must lie in the complement of U'")
    v = split.v
    half = b.sq() / 2

    def f(x: Vector) -> Vector:
        t = x @ v
        return x + t * b - ((b @ x) + t * half) * v

    return Isometry.from_function(split.lattice, f)


def mk_exp_b(ctx: MirrorContext, b0: Vector) -> Isometry:
    """Multiplication by exp(B0) = w* + B0 + (B0²/2) w on the Mukai lattice Γ⊕(−U)."""
    g = ctx.to_gamma(b0)
    M = ctx.mukai
    n = ctx.n
    half = g.sq() / 2
    b = M.embed(g, 0)
    w = M.basis_vector(n)

    def f(x: Vector) -> Vector:
        lam = x.coords[n + 1]  # coefficient of w*
        core = Vector._raw(ctx.gamma, x.coords[:n])
        return x + lam * b + ((g @ core) + lam * half) * w

    return Isometry.from_function(M, f)


@lru_cache(maxsize=64)
def mk_eta(ctx: MirrorContext) -> LinearMap:
    """η: Γ⊕U → Γ⊕(−U), identity on Γ, w ↦ −w, w* ↦ w*."""
    src, tgt = ctx.gamma_u, ctx.mukai
    images = [tgt.basis_vector(i) for i in range(ctx.n)]
    images.append(-tgt.basis_vector(ctx.n))
    images.append(tgt.basis_vector(ctx.n + 1))
    return LinearMap.from_images(src, tgt, images)


@lru_cache(maxsize=64)
def mk_psi0(ctx: MirrorContext) -> Isometry:
    """−id on U, identity on Γ."""
    return Isometry.from_function(
        ctx.gamma_u, lambda x: x if ctx.in_gamma(x) else -x)


@lru_cache(maxsize=64)
def mk_psi1(ctx: MirrorContext) -> Isometry:
    """w ↔ w*, identity on Γ."""
    images = ctx.gamma_u.basis()
    images[ctx.n], images[ctx.n + 1] = images[ctx.n + 1], images[ctx.n]
    return Isometry.from_images(ctx.gamma_u, images)


@lru_cache(maxsize=64)
def mk_xi(ctx: MirrorContext) -> Isometry:
    """Identity on Γ', v ↔ w, v* ↔ w*."""
    v, vs, w, ws = ctx.v_up, ctx.vstar_up, ctx.w, ctx.wstar

    def f(x: Vector) -> Vector:
        a_v, a_vs = x @ vs, x @ v        # coefficients on v, v*
        a_w, a_ws = x @ ws, x @ w        # coefficients on w, w*
        y = x - a_v * v - a_vs * vs - a_w * w - a_ws * ws
        return y + a_v * w + a_vs * ws + a_w * v + a_ws * vs

    return Isometry.from_function(ctx.gamma_u, f)


def reflect(c: Vector, alpha: Vector) -> Vector:
    return alpha + (alpha @ c) * c


def mk_reflection(c: Vector) -> Isometry:
    """Reflection s_c(α) = α + <α,c> c in a (−2)-vector."""
    if c.sq() != -2:
        raise IsometryError(f"reflection needs c² = −2, got {c.sq()}")
    return Isometry.from_function(c.lattice, lambda x: reflect(c, x))


class ChamberWalk(NamedTuple):
    result: Vector
    word: list[int]
    converged: bool


def reflect_toward_chamber(alpha: Vector, roots: Sequence[Vector], cap: int = 10_000) -> ChamberWalk:
    """Reflect in listed roots pairing negatively with α until none remain.

    Stops after ``cap`` reflections with ``converged=False``; the listed
    roots may generate an infinite group.
    """
    for r in roots:
        alpha.lattice._check(r)
        if r.sq() != -2:
            raise IsometryError("every root must have square −2")
    word: list[int] = []
    x = alpha
    while True:
        bad = next((i for i, r in enumerate(roots) if x @ r < 0), None)
        if bad is None:
            return ChamberWalk(x, word, True)
        if len(word) >= cap:
            return ChamberWalk(x, word, False)
        x = reflect(roots[bad], x)
        word.append(bad)
