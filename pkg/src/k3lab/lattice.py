"""Integral lattices, exact vectors and sublattices.

A lattice is a Gram matrix over Z together with a label.  Vectors carry
rational coordinates in the lattice basis and a reference to their
lattice; mixing vectors of different lattices is an error.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import linalg


class LatticeError(ValueError):
    pass


class LatticeMismatch(LatticeError):
    pass


class NotSaturated(LatticeError):
    pass


_ZERO = Fraction(0)
_ONE = Fraction(1)

E8_CARTAN_EDGES = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)]


@dataclass(frozen=True)
class IntegralLattice:
    gram: tuple[tuple[int, ...], ...]
    label: str = ""
    # (summand, offset) pairs recorded by direct_sum; not part of identity
    summands: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        gram = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", gram)
        n = len(gram)
        if n == 0 or any(len(row) != n for row in gram):
            raise LatticeError("Gram matrix must be square and nonempty")
        for i in range(n):
            for j in range(i):
                if gram[i][j] != gram[j][i]:
                    raise LatticeError(f"Gram matrix not symmetric at ({i},{j})")
        if self.det == 0:
            raise LatticeError(f"degenerate form on {self.label or 'lattice'}")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> int:
        return int(linalg.det(self.gram))

    @cached_property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    @cached_property
    def signature(self) -> tuple[int, int]:
        p, n, _ = linalg.symmetric_signature(self.gram)
        return p, n

    @cached_property
    def _sparse(self):
        return [[(j, g) for j, g in enumerate(row) if g] for row in self.gram]

    def pair(self, x: "Vector", y: "Vector") -> Fraction:
        if not (x.lattice is self or x.lattice == self) or not (y.lattice is self or y.lattice == self):
            raise LatticeMismatch(f"vectors do not belong to {self.label!r}")
        return self._pair_int(x, y)

    def _pair_int(self, x: "Vector", y: "Vector") -> Fraction:
        (a, da), (b, db) = x._integral_form(), y._integral_form()
        s = 0
        sparse = self._sparse
        for i, ai in enumerate(a):
            if ai:
                t = 0
                for j, g in sparse[i]:
                    bj = b[j]
                    if bj:
                        t += g * bj
                s += ai * t
        return Fraction(s, da * db)

    def vector(self, coords: Iterable) -> "Vector":
        return Vector(self, coords)

    def zero(self) -> "Vector":
        return Vector._raw(self, (_ZERO,) * self.rank)

    def basis_vector(self, i: int) -> "Vector":
        return Vector._raw(self, tuple(_ONE if k == i else _ZERO for k in range(self.rank)))

    def basis(self) -> list["Vector"]:
        return [self.basis_vector(i) for i in range(self.rank)]

    def embed(self, x: "Vector", index: int) -> "Vector":
        """Canonical inclusion of summand ``index`` of a direct sum."""
        summand, offset = self.summands[index]
        if not (x.lattice is summand or x.lattice == summand):
            raise LatticeMismatch(f"vector is not in summand {index} ({summand.label!r})")
        coords = [Fraction(0)] * self.rank
        coords[offset:offset + summand.rank] = x.coords
        return Vector._raw(self, tuple(coords))

    def restrict(self, x: "Vector", index: int) -> "Vector":
        """Coordinates of ``x`` on summand ``index`` (the canonical projection)."""
        summand, offset = self.summands[index]
        self._check(x)
        return Vector._raw(summand, x.coords[offset:offset + summand.rank])

    def _check(self, x: "Vector"):
        if not (x.lattice is self or x.lattice == self):
            raise LatticeMismatch(f"vector lives in {x.lattice.label!r}, expected {self.label!r}")


class Vector:
    """Rational coordinate vector in a lattice basis.

    Integral vectors are the lattice points; the rest live in the
    rational span.  ``x @ y`` is the lattice pairing.
    """

    __slots__ = ("lattice", "coords", "_int")

    def __init__(self, lattice: IntegralLattice, coords: Iterable):
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != lattice.rank:
            raise LatticeError(f"expected {lattice.rank} coordinates, got {len(coords)}")
        self.lattice = lattice
        self.coords = coords
        self._int = None

    @classmethod
    def _raw(cls, lattice, coords):
        v = object.__new__(cls)
        v.lattice = lattice
        v.coords = coords
        v._int = None
        return v

    def _integral_form(self) -> tuple[tuple[int, ...], int]:
        """(integer coordinates, common denominator), cached."""
        if self._int is None:
            den = 1
            for c in self.coords:
                if c.denominator != 1:
                    den = linalg.lcm(den, c.denominator)
            if den == 1:
                ints = tuple(c.numerator for c in self.coords)
            else:
                ints = tuple(c.numerator * (den // c.denominator) for c in self.coords)
            self._int = (ints, den)
        return self._int

    def _same(self, other: "Vector"):
        if not isinstance(other, Vector):
            return NotImplemented
        if not (other.lattice is self.lattice or other.lattice == self.lattice):
            raise LatticeMismatch(
                f"cannot combine vectors of {self.lattice.label!r} and {other.lattice.label!r}")
        return True

    def __add__(self, other: "Vector") -> "Vector":
        if self._same(other) is NotImplemented:
            return NotImplemented
        return Vector._raw(self.lattice, tuple((a + b if b else a) if a else b
                                               for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Vector") -> "Vector":
        if self._same(other) is NotImplemented:
            return NotImplemented
        return Vector._raw(self.lattice, tuple((a - b if b else a) if a else -b
                                               for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Vector":
        return Vector._raw(self.lattice, tuple(-a for a in self.coords))

    def __mul__(self, s) -> "Vector":
        if isinstance(s, Vector):
            return NotImplemented
        s = Fraction(s)
        return Vector._raw(self.lattice, tuple(a * s if a else a for a in self.coords))

    __rmul__ = __mul__

    def __truediv__(self, s) -> "Vector":
        s = Fraction(s)
        return Vector._raw(self.lattice, tuple(a / s for a in self.coords))

    def __matmul__(self, other: "Vector") -> Fraction:
        return self.lattice.pair(self, other)

    def sq(self) -> Fraction:
        return self.lattice._pair_int(self, self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Vector):
            return NotImplemented
        return (other.lattice is self.lattice or other.lattice == self.lattice) and self.coords == other.coords

    def __hash__(self):
        return hash((self.lattice.label, self.coords))

    def __repr__(self):
        nz = ", ".join(f"{i}:{c}" for i, c in enumerate(self.coords) if c)
        return f"Vector<{self.lattice.label}>({{{nz}}})"

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def int_coords(self) -> list[int]:
        if not self.is_integral():
            raise LatticeError("vector is not integral")
        return [int(c) for c in self.coords]

    def primitive(self) -> "Vector":
        """Primitive integral vector on the same ray (clears denominators, divides by gcd)."""
        if self.is_zero():
            raise LatticeError("zero vector has no primitive representative")
        den = 1
        for c in self.coords:
            den = linalg.lcm(den, c.denominator)
        ints = [int(c * den) for c in self.coords]
        g = linalg.vec_gcd(ints)
        return Vector._raw(self.lattice, tuple(Fraction(x // g) for x in ints))


def pair(x: Vector, y: Vector) -> Fraction:
    return x.lattice.pair(x, y)


def is_primitive(x: Vector) -> bool:
    if x.is_zero():
        raise LatticeError("zero vector")
    return linalg.vec_gcd(x.int_coords()) == 1


# ---------------------------------------------------------------------------
# constructions


def direct_sum(*lattices: IntegralLattice, label: str | None = None) -> IntegralLattice:
    n = sum(L.rank for L in lattices)
    gram = [[0] * n for _ in range(n)]
    summands = []
    off = 0
    for L in lattices:
        for i in range(L.rank):
            for j in range(L.rank):
                gram[off + i][off + j] = L.gram[i][j]
        summands.append((L, off))
        off += L.rank
    if label is None:
        label = "+".join(L.label for L in lattices)
    return IntegralLattice(tuple(map(tuple, gram)), label, tuple(summands))


def scaled(L: IntegralLattice, k: int, label: str | None = None) -> IntegralLattice:
    if label is None:
        label = f"{L.label}({k})"
    return IntegralLattice(tuple(tuple(k * x for x in row) for row in L.gram), label)


def hyperbolic_plane() -> IntegralLattice:
    return IntegralLattice(((0, 1), (1, 0)), "U")


def e8_cartan() -> IntegralLattice:
    g = [[0] * 8 for _ in range(8)]
    for i in range(8):
        g[i][i] = 2
    for i, j in E8_CARTAN_EDGES:
        g[i][j] = g[j][i] = -1
    return IntegralLattice(tuple(map(tuple, g)), "E8")


def minus_e8() -> IntegralLattice:
    return scaled(e8_cartan(), -1, "-E8")


def rank_one(n: int) -> IntegralLattice:
    return IntegralLattice(((n,),), f"<{n}>")


def u_sum(k: int) -> IntegralLattice:
    if k < 1:
        raise LatticeError("need at least one copy of U")
    if k == 1:
        return hyperbolic_plane()
    return direct_sum(*[hyperbolic_plane()] * k, label=f"{k}U")


def k3_lattice() -> IntegralLattice:
    """2(-E8) + 3U in that coordinate order (ranks 8, 8, 2, 2, 2)."""
    e = minus_e8()
    u = hyperbolic_plane()
    return direct_sum(e, e, u, u, u, label="K3")


def make_standard_lattice(kind: str, k: int = 1) -> IntegralLattice:
    kind = kind.strip()
    if kind == "U":
        return hyperbolic_plane()
    if kind in ("minusE8", "-E8"):
        return minus_e8()
    if kind == "K3":
        return k3_lattice()
    if kind in ("USum", "kU"):
        return u_sum(k)
    raise LatticeError(f"unknown standard lattice kind {kind!r}")


_TOKEN = re.compile(r"^(?:(\d+)U|<(-?\d+)>|\(-U\)|-U|U|K3|-E8|E8)$")


def _split_label(label: str) -> list[str]:
    parts, depth, cur = [], 0, ""
    for ch in label:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "+" and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return [p.strip() for p in parts]


def lattice_from_label(label: str) -> IntegralLattice:
    """Rebuild a lattice from a label such as ``K3+U``, ``<2>+U`` or ``K3+(-U)``."""
    tokens = _split_label(label)
    pieces = []
    for tok in tokens:
        m = _TOKEN.match(tok)
        if not m:
            raise LatticeError(f"cannot parse lattice label component {tok!r}")
        if m.group(1):
            pieces.append(u_sum(int(m.group(1))))
        elif m.group(2):
            pieces.append(rank_one(int(m.group(2))))
        elif tok in ("(-U)", "-U"):
            pieces.append(scaled(hyperbolic_plane(), -1, "(-U)"))
        elif tok == "U":
            pieces.append(hyperbolic_plane())
        elif tok == "K3":
            pieces.append(k3_lattice())
        elif tok == "-E8":
            pieces.append(minus_e8())
        else:
            pieces.append(e8_cartan())
    if len(pieces) == 1:
        return pieces[0]
    return direct_sum(*pieces, label=label)


# ---------------------------------------------------------------------------
# sublattices


def _coords_matrix(vectors: Sequence[Vector]) -> list[list[Fraction]]:
    return [list(v.coords) for v in vectors]


def saturation_basis(ambient: IntegralLattice, vectors: Sequence[Vector]) -> list[Vector]:
    """Z-basis of ambient ∩ (Q-span of vectors)."""
    if not vectors:
        return []
    rows = []
    for v in vectors:
        ambient._check(v)
        rows.append(list(v.primitive().coords) if not v.is_zero() else list(v.coords))
    dual = linalg.integer_kernel([[int(x) for x in r] for r in rows], ambient.rank)
    if not dual:
        return ambient.basis()
    sat = linalg.integer_kernel(dual, ambient.rank)
    return [Vector(ambient, b) for b in sat]


@dataclass(frozen=True)
class Sublattice:
    ambient: IntegralLattice
    basis: tuple[Vector, ...]

    def __post_init__(self):
        basis = tuple(self.basis)
        object.__setattr__(self, "basis", basis)
        for b in basis:
            self.ambient._check(b)
            if not b.is_integral():
                raise LatticeError("sublattice basis vectors must be integral")
        if basis:
            m = [b.int_coords() for b in basis]
            if linalg.rank(m) != len(basis):
                raise LatticeError("sublattice basis is linearly dependent")
            if any(d != 1 for d in linalg.smith_invariants(m)):
                raise NotSaturated("basis does not span a saturated sublattice")

    @classmethod
    def saturate(cls, ambient: IntegralLattice, vectors: Sequence[Vector]) -> "Sublattice":
        return cls(ambient, tuple(saturation_basis(ambient, vectors)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @cached_property
    def gram(self) -> list[list[Fraction]]:
        return [[a @ b for b in self.basis] for a in self.basis]

    @cached_property
    def signature(self) -> tuple[int, int]:
        p, n, _ = linalg.symmetric_signature(self.gram)
        return p, n

    def is_nondegenerate(self) -> bool:
        return linalg.det(self.gram) != 0

    def contains(self, x: Vector) -> bool:
        """Membership of ``x`` in the rational span."""
        self.ambient._check(x)
        if not self.basis:
            return x.is_zero()
        cols = linalg.transpose(_coords_matrix(self.basis))
        return linalg.solve(cols, list(x.coords)) is not None

    def is_orthogonal_to(self, other: "Sublattice | Sequence[Vector]") -> bool:
        vs = other.basis if isinstance(other, Sublattice) else other
        return all(a @ b == 0 for a in self.basis for b in vs)


def orthogonal_complement(S: Sublattice) -> Sublattice:
    """Saturated sublattice of vectors orthogonal to every basis vector of S."""
    L = S.ambient
    rows = [[int(sum(g * c for g, c in zip(L.gram[k], b.coords)))
             for k in range(L.rank)] for b in S.basis]
    if not rows:
        return Sublattice(L, tuple(L.basis()))
    kernel = linalg.integer_kernel(rows, L.rank)
    return Sublattice(L, tuple(Vector(L, k) for k in kernel))


def check_hyperbolic_pair(v: Vector, vstar: Vector):
    if v.lattice != vstar.lattice:
        raise LatticeMismatch("hyperbolic pair spans two lattices")
    if v.sq() != 0 or vstar.sq() != 0 or v @ vstar != 1:
        raise LatticeError("(v, v*) is not a standard hyperbolic basis: need v^2 = v*^2 = 0, <v,v*> = 1")


def decompose_against_hyperbolic(x: Vector, v: Vector, vstar: Vector) -> tuple[Vector, Fraction, Fraction]:
    """Split ``x = y + lam*v + mu*v*`` with ``y`` orthogonal to both."""
    check_hyperbolic_pair(v, vstar)
    lam = x @ vstar
    mu = x @ v
    y = x - lam * v - mu * vstar
    return y, lam, mu


@dataclass(frozen=True)
class HyperbolicSplitting:
    """A lattice written as L' + U' with (v, v*) a standard basis of U'."""

    lattice: IntegralLattice
    v: Vector
    vstar: Vector

    def __post_init__(self):
        self.lattice._check(self.v)
        self.lattice._check(self.vstar)
        if not (self.v.is_integral() and self.vstar.is_integral()):
            raise LatticeError("hyperbolic pair must be integral")
        check_hyperbolic_pair(self.v, self.vstar)

    @cached_property
    def complement_basis(self) -> tuple[Vector, ...]:
        L = self.lattice
        v, vs = self.v.int_coords(), self.vstar.int_coords()
        units = [i for i, c in enumerate(v) if c] + [i for i, c in enumerate(vs) if c]
        if (sorted(v) == [0] * (L.rank - 1) + [1] and sorted(vs) == [0] * (L.rank - 1) + [1]
                and all(L.gram[i][j] == 0 for i in units for j in range(L.rank) if j not in units)):
            return tuple(L.basis_vector(i) for i in range(L.rank) if i not in units)
        S = Sublattice.saturate(L, [self.v, self.vstar])
        return orthogonal_complement(S).basis

    def decompose(self, x: Vector) -> tuple[Vector, Fraction, Fraction]:
        return decompose_against_hyperbolic(x, self.v, self.vstar)

    def project(self, x: Vector) -> Vector:
        """Orthogonal projection onto the complement L'."""
        return x - (x @ self.vstar) * self.v - (x @ self.v) * self.vstar

    def in_complement(self, x: Vector) -> bool:
        return x @ self.v == 0 and x @ self.vstar == 0
