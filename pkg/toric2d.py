"""
Rank-2 rational cones: duality, Hilbert bases, the binomial relation of a
three-element basis, and the rays of the local toric models X(O).
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import numpy as np
import sympy

from errors import ConeError, LatticeError
from rootsys import as_fraction, dot, weyl_orbit

logger = logging.getLogger(__name__)


def primitive(vector):
    """Divide an integer vector by the gcd of its entries."""
    entries = [int(v) for v in vector]
    divisor = 0
    for v in entries:
        divisor = gcd(divisor, v)
    if divisor == 0:
        raise ConeError("The zero vector has no primitive direction")
    return tuple(v // divisor for v in entries)


def _det(u, v):
    return u[0] * v[1] - u[1] * v[0]


@dataclass(frozen=True)
class Cone2D:
    """Cone spanned by two primitive lattice vectors, stored counter-clockwise."""

    generators: tuple

    def __post_init__(self):
        if len(self.generators) != 2:
            raise ConeError("A rank-2 cone needs exactly two generators")
        u, v = (primitive(g) for g in self.generators)
        if len(u) != 2 or len(v) != 2:
            raise ConeError("Generators must be vectors in a rank-2 lattice")
        det = _det(u, v)
        if det == 0:
            raise ConeError(f"Degenerate cone: {u} and {v} are parallel")
        if det < 0:
            u, v = v, u
        object.__setattr__(self, "generators", (u, v))

    @property
    def determinant(self):
        u, v = self.generators
        return _det(u, v)

    def contains(self, point):
        u, v = self.generators
        return _det(point, v) >= 0 and _det(u, point) >= 0

    def same_as(self, other):
        return set(self.generators) == set(other.generators)


def dual_cone(cone):
    u, v = cone.generators
    return Cone2D((primitive((v[1], -v[0])), primitive((-u[1], u[0]))))


def _bounding_points(cone):
    u, v = cone.generators
    corners = np.array([(0, 0), u, v, (u[0] + v[0], u[1] + v[1])])
    low = corners.min(axis=0)
    high = corners.max(axis=0)
    for x in range(int(low[0]), int(high[0]) + 1):
        for y in range(int(low[1]), int(high[1]) + 1):
            yield (x, y)


def _is_reducible(cone, point, candidates):
    for q in candidates:
        if q == (0, 0) or q == point:
            continue
        rest = (point[0] - q[0], point[1] - q[1])
        if rest != (0, 0) and cone.contains(q) and cone.contains(rest):
            return True
    return False


def hilbert_basis(cone):
    """Minimal generators of the lattice points of the cone, in counter-clockwise order.

    Every Hilbert basis element lies in the half-open fundamental parallelogram
    or is a generator; the irreducible ones among those are returned.
    """
    u, v = cone.generators
    det = cone.determinant
    candidates = [u, v]
    box = list(_bounding_points(cone))
    for p in box:
        a = _det(p, v)
        b = _det(u, p)
        if p != (0, 0) and 0 <= a < det and 0 <= b < det:
            candidates.append(p)

    basis = sorted(
        {p for p in candidates if not _is_reducible(cone, p, box)},
        key=lambda p: np.arctan2(_det(u, p), u[0] * p[0] + u[1] * p[1]),
    )
    logger.debug(f"Hilbert basis of {cone.generators}: {basis}")
    return basis


def _height_functional(cone):
    a, b = dual_cone(cone).generators
    return (a[0] + b[0], a[1] + b[1])


def semigroup_decomposition(cone, basis, point):
    """Nonnegative integer coefficients expressing point over basis."""
    point = tuple(int(p) for p in point)
    if not cone.contains(point):
        raise ConeError(f"{point} is not in the cone")
    basis = [tuple(b) for b in basis]
    height = _height_functional(cone)

    @lru_cache(maxsize=None)
    def decompose(p):
        if p == (0, 0):
            return (0,) * len(basis)
        if height[0] * p[0] + height[1] * p[1] <= 0:
            return None
        for index, b in enumerate(basis):
            rest = (p[0] - b[0], p[1] - b[1])
            if cone.contains(rest):
                found = decompose(rest)
                if found is not None:
                    return tuple(c + (1 if i == index else 0) for i, c in enumerate(found))
        return None

    result = decompose(point)
    if result is None:
        raise ConeError(f"{point} is not generated by {basis}")
    return result


def binomial_relation(basis):
    """m_1 u_1 + ... = n_1 u_1 + ... as (lhs exponents, rhs exponents)."""
    if len(basis) != 3:
        raise ConeError(f"A binomial relation needs exactly 3 basis vectors, got {len(basis)}")
    matrix = np.array(basis, dtype=np.int64).T
    if matrix.shape != (2, 3):
        raise ConeError("Basis vectors must lie in a rank-2 lattice")
    kernel = np.cross(matrix[0], matrix[1])
    if not kernel.any():
        raise ConeError("Basis vectors do not span the lattice")
    kernel = primitive(kernel)
    lhs = tuple(max(k, 0) for k in kernel)
    rhs = tuple(max(-k, 0) for k in kernel)
    if not any(lhs) or not any(rhs):
        raise ConeError("No binomial relation between the basis vectors")
    if sum(1 for e in lhs if e) > sum(1 for e in rhs if e):
        lhs, rhs = rhs, lhs
    return lhs, rhs


def _monomial(exponents, names):
    factors = [name if e == 1 else f"{name}^{e}" for name, e in zip(names, exponents) if e]
    return "*".join(factors) or "1"


def format_relation(relation, names=("x", "w", "z")):
    lhs, rhs = relation
    return f"{_monomial(lhs, names)} = {_monomial(rhs, names)}"


def _coordinates(ambient, lattice_basis):
    rows = sympy.Matrix([[sympy.Rational(a.numerator, a.denominator) for a in b] for b in lattice_basis])
    target = sympy.Matrix([sympy.Rational(a.numerator, a.denominator) for a in ambient])
    gram = rows * rows.T
    coefficients = gram.inv() * (rows * target)
    if rows.T * coefficients != target:
        raise LatticeError(f"{[str(a) for a in ambient]} is not in the span of the lattice basis")
    return tuple(as_fraction(c) for c in coefficients)


def rays_of_XO(rs, orbit_rep, lattice_basis=None):
    """Graphs (1, a) for a in the W-orbit, in coordinates of a Z-basis of Ch(T)*.

    The default basis is the fundamental coweights, where coordinates are the
    pairings with the simple roots.
    """
    rays = []
    for a in weyl_orbit(rs, orbit_rep):
        ambient = rs.to_ambient(a)
        if lattice_basis is None:
            if not rs.in_root_span(ambient):
                raise LatticeError("Vectors with a central part need an explicit lattice basis")
            coords = tuple(dot(ambient, alpha) for alpha in rs.simple_roots)
        else:
            coords = _coordinates(ambient, [tuple(as_fraction(x) for x in b) for b in lattice_basis])
        if any(c.denominator != 1 for c in coords):
            raise LatticeError(f"{a} is not a lattice point for the chosen basis")
        rays.append(primitive((1,) + tuple(int(c) for c in coords)))
    return sorted(set(rays))


def sl2_example(k):
    """Dual cone, Hilbert basis and relation of the SL(2) model with orbit {k a, -k a}."""
    if k < 1:
        raise ConeError("k must be positive")
    cone = Cone2D(((1, k), (1, -k)))
    dual = dual_cone(cone)
    basis = hilbert_basis(dual)
    ordered = sorted(basis, key=lambda p: (p[1] != 0, -p[1]))
    relation = binomial_relation(ordered)
    return {
        "k": k,
        "cone": [list(g) for g in cone.generators],
        "dual_cone": [list(g) for g in dual.generators],
        "hilbert_basis": [list(p) for p in ordered],
        "relation": {"lhs": list(relation[0]), "rhs": list(relation[1])},
        "relation_text": format_relation(relation),
    }
