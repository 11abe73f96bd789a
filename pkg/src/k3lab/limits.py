"""Large-complex-structure monodromy, weight filtrations, B-shift orbits and
the density constructions (isotropic points, Kummer-type planes)."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from . import linalg
from .isometry import Isometry, IsometryError, MirrorContext, mk_internal_phi_b
from .lattice import HyperbolicSplitting, LatticeError, Sublattice, Vector, is_primitive, orthogonal_complement
from .mirror import mirror_triple
from .period import ComplexLine, KahlerTriple, PeriodError


class NotUnipotent(LatticeError):
    pass


def monodromy_from_bshift_loop(ctx: MirrorContext, B0: Vector) -> Isometry:
    """T(v) = v, T(v*) = v* + B0 − (B0²/2)v, T(x) = x − <B0,x>v on Γ'."""
    B0 = ctx.to_gamma(B0)
    if B0.is_zero():
        raise IsometryError("B0 must be nonzero")
    if not B0.is_integral():
        raise IsometryError("B0 must be a lattice vector")
    return mk_internal_phi_b(ctx.splitting, B0)


def _as_matrix(T) -> list[list[Fraction]]:
    return [list(r) for r in (T.matrix if isinstance(T, Isometry) else T)]


def _nilpotency(m) -> int | None:
    """Smallest k with m^k = 0, or None if m is not nilpotent."""
    n = len(m)
    p = m
    for k in range(1, n + 2):
        if linalg.is_zero_matrix(p):
            return k
        p = linalg.matmul(p, m)
    return None


def log_unipotent(T) -> list[list[Fraction]]:
    """N = log T = Σ (−1)^{k+1} (T − 1)^k / k, finite because T − 1 is nilpotent."""
    t = _as_matrix(T)
    n = len(t)
    m = linalg.mat_add(t, linalg.identity(n), -1)
    k_max = _nilpotency(m)
    if k_max is None:
        raise NotUnipotent("T − 1 is not nilpotent")
    out = linalg.zeros(n, n)
    p = m
    for k in range(1, k_max):
        out = linalg.mat_add(out, p, Fraction((-1) ** (k + 1), k))
        p = linalg.matmul(p, m)
    return out


def exp_nilpotent(N) -> list[list[Fraction]]:
    n = len(N)
    k_max = _nilpotency(N)
    if k_max is None:
        raise NotUnipotent("N is not nilpotent")
    out = linalg.identity(n)
    p = linalg.identity(n)
    fact = 1
    for k in range(1, k_max):
        p = linalg.matmul(p, N)
        fact *= k
        out = linalg.mat_add(out, p, Fraction(1, fact))
    return out


@dataclass(frozen=True)
class WeightFiltration:
    """W0 = Im N², W1 = N(ker N²), W2 = Im N, W3 = ker N²; bases as coordinate lists."""

    W0: tuple
    W1: tuple
    W2: tuple
    W3: tuple

    @property
    def dims(self) -> tuple[int, int, int, int]:
        return len(self.W0), len(self.W1), len(self.W2), len(self.W3)

    def is_nested(self) -> bool:
        chain = [self.W0, self.W1, self.W2, self.W3]
        for small, big in zip(chain, chain[1:]):
            if not small:
                continue
            if not big or linalg.rank(list(big) + list(small)) != len(big):
                return False
        return True

    def vectors(self, lattice, i: int) -> list[Vector]:
        return [Vector(lattice, c) for c in (self.W0, self.W1, self.W2, self.W3)[i]]


def _tup(vs) -> tuple:
    return tuple(tuple(Fraction(x) for x in v) for v in vs)


def weight_filtration(N) -> WeightFiltration:
    N = _as_matrix(N)
    if _nilpotency(N) is None:
        raise NotUnipotent("N is not nilpotent")
    n = len(N)
    N2 = linalg.matmul(N, N)
    ker2 = linalg.nullspace(N2, n)
    if ker2:
        img = [linalg.matvec(N, k) for k in ker2]
        W1 = linalg.column_space(linalg.transpose(img))
    else:
        W1 = []
    return WeightFiltration(_tup(linalg.column_space(N2)), _tup(W1),
                            _tup(linalg.column_space(N)), _tup(ker2))


def lcs_check(T) -> bool:
    """Maximal unipotency: (T−1)³ = 0, (T−1)² ≠ 0 and filtration dims (1, 1, 2)."""
    t = _as_matrix(T)
    m = linalg.mat_add(t, linalg.identity(len(t)), -1)
    m2 = linalg.matmul(m, m)
    if linalg.is_zero_matrix(m2) or not linalg.is_zero_matrix(linalg.matmul(m2, m)):
        return False
    return weight_filtration(log_unipotent(t)).dims[:3] == (1, 1, 2)


# ---------------------------------------------------------------------------
# B-shift orbits


def projective_distance(x: Vector, y: Vector) -> float:
    """Sine of the angle between the lines [x], [y] in Euclidean coordinates.

    The squared sine is exact; only the final square root is floating point.
    """
    if x.is_zero() or y.is_zero():
        raise LatticeError("zero vector has no line")
    xx = sum(c * c for c in x.coords)
    yy = sum(c * c for c in y.coords)
    xy = sum(a * b for a, b in zip(x.coords, y.coords))
    s2 = 1 - xy * xy / (xx * yy)
    return math.sqrt(max(s2, 0))


@dataclass(frozen=True)
class OrbitTrace:
    points: tuple[Vector, ...]
    distances: tuple[float, ...]

    def __post_init__(self):
        if len(self.points) != len(self.distances):
            raise ValueError("points and distances differ in length")
        if any(d < 0 for d in self.distances):
            raise ValueError("negative distance")


def b_shift_orbit(split: HyperbolicSplitting, B: Vector, y: Vector, k: int) -> OrbitTrace:
    """Iterates φ_B^j(y), j = 1..k, with their distances to [v]."""
    if y.is_zero():
        raise LatticeError("start vector must be nonzero")
    if B.sq() == 0:
        raise IsometryError("B² must be nonzero")
    phi = mk_internal_phi_b(split, B)
    pts, dist = [], []
    x = y
    for _ in range(k):
        x = phi(x)
        pts.append(x)
        dist.append(projective_distance(x, split.v))
    return OrbitTrace(tuple(pts), tuple(dist))


def isotropic_lattice_point_near(split: HyperbolicSplitting, r: Vector) -> Vector:
    """Primitive x on the line of r − (r²/2)v + v*, which has x² = 0."""
    if not split.lattice.is_even:
        raise LatticeError("lattice must be even")
    if not split.in_complement(r):
        raise LatticeError("r must lie in the complement of U'")
    x = r - (r.sq() / 2) * split.v + split.vstar
    return x.primitive()


class KummerPlane(NamedTuple):
    x1: Vector
    x2: Vector
    distance1: float
    distance2: float
    complete: bool


def _integral_direction(y: Vector) -> Vector:
    return y.primitive()


def _mod4_seed(basis: Sequence[Vector], bound: int = 1) -> list[Vector]:
    """Small primitive vectors in span(basis) with square ≡ 0 mod 4."""
    out = []
    for b in basis:
        if b.sq() % 4 == 0:
            out.append(b)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            for a in (1, -1):
                z = basis[i] + a * basis[j]
                if z.sq() % 4 == 0:
                    out.append(z)
    return out


def kummer_plane_near(ctx: MirrorContext, y1: Vector, y2: Vector, search_bound: int = 50) -> KummerPlane:
    """Orthogonal primitive x1, x2 with positive squares ≡ 0 mod 4 near [y1], [y2].

    x1 = (2v + v*) + N·ŷ1 with N even; x2 = z0 + N·ŷ2 inside x1^⊥, where ŷ2
    is the integral direction of y2 projected to x1^⊥ and z0² ≡ 0 mod 4.
    Larger even N brings the lines closer; the largest admissible N up to
    2·search_bound is returned with the distances reached.
    """
    L = ctx.gamma
    L._check(y1)
    L._check(y2)
    g = [[y1.sq(), y1 @ y2], [y1 @ y2, y2.sq()]]
    if not linalg.is_positive_definite(g):
        raise PeriodError("targets must span a positive plane")
    seed = 2 * ctx.v + ctx.vstar
    d1 = _integral_direction(y1)
    x1 = None
    for N in range(2 * search_bound, 0, -2):
        cand = seed + N * d1
        if cand.sq() > 0 and is_primitive(cand):
            x1 = cand
            break
    if x1 is None:
        x1 = seed
    perp = orthogonal_complement(Sublattice(L, (x1,)))
    y2p = y2 - ((y2 @ x1) / x1.sq()) * x1
    d2 = _integral_direction(y2p)
    best = None
    for z0 in _mod4_seed(list(perp.basis)):
        for N in range(2 * search_bound, 0, -2):
            cand = z0 + N * d2
            if cand.sq() > 0 and is_primitive(cand):
                dist = projective_distance(cand, y2)
                if best is None or dist < best[1]:
                    best = (cand, dist)
                break
    if best is None:
        return KummerPlane(x1, L.zero(), projective_distance(x1, y1), float("inf"), False)
    return KummerPlane(x1, best[0], projective_distance(x1, y1), best[1], True)


def is_kummer_plane(x1: Vector, x2: Vector) -> bool:
    """Orthogonal, positive, both squares ≡ 0 mod 4."""
    return (x1 @ x2 == 0 and x1.sq() > 0 and x2.sq() > 0
            and x1.sq() % 4 == 0 and x2.sq() % 4 == 0)


# ---------------------------------------------------------------------------
# fibre volumes in the large Kähler limit


def fibre_volume_sequence(ctx: MirrorContext, line: ComplexLine, omega: Vector,
                          t_values: Sequence, rescale: bool = True) -> list[Fraction]:
    """<Re σ_t^∨, v> for ω_t = t·ω, B = 0.

    With ``rescale`` σ_t = t·σ keeps σσ̄ = 2ω_t²; without it σ is frozen.
    """
    if line.re.sq() != omega.sq():
        raise PeriodError("need σσ̄ = 2ω², i.e. (Re σ)² = ω²")
    out = []
    for t in t_values:
        t = Fraction(t)
        if t <= 0:
            raise PeriodError("t must be positive")
        s = t if rescale else Fraction(1)
        tri = KahlerTriple(ComplexLine(s * line.re, s * line.im), t * omega, ctx.gamma.zero())
        out.append(mirror_triple(ctx, tri).sigma.re @ ctx.v)
    return out
