"""
Exact root systems of the irreducible Cartan types.

Simple roots follow the Bourbaki numbering:

    A_n  e_i - e_{i+1} (1 <= i <= n) inside the n+1 coordinates of gl_{n+1}
    B_n  e_i - e_{i+1} (i < n), e_n
    C_n  e_i - e_{i+1} (i < n), 2 e_n
    D_n  e_i - e_{i+1} (i < n), e_{n-1} + e_n
    E_8  1/2(e_1 + e_8) - 1/2(e_2 + ... + e_7), e_1 + e_2, e_2 - e_1, ..., e_7 - e_6
         (E_6 and E_7 use the first six and seven of these)
    F_4  e_2 - e_3, e_3 - e_4, e_4, 1/2(e_1 - e_2 - e_3 - e_4)
    G_2  e_1 - e_2, -2 e_1 + e_2 + e_3   (inside the plane x + y + z = 0)

The ambient inner product is the Euclidean one, so long roots of the
simply-laced types have squared length 2. All arithmetic is exact.
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache

import sympy
from sympy.matrices.normalforms import smith_normal_form
from sympy.polys.domains import ZZ

from errors import InputError, LatticeError, VerificationError

logger = logging.getLogger(__name__)

FAMILY_RANKS = {
    "A": (1, None),
    "B": (2, None),
    "C": (2, None),
    "D": (3, None),
    "E": (6, 8),
    "F": (4, 4),
    "G": (2, 2),
}


def as_fraction(value):
    """Parse an int, Fraction or "p/q" string into a Fraction (floats are refused)"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"Not a rational coordinate: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InputError(f"Not a rational coordinate: {value!r}") from e
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    raise InputError(f"Not a rational coordinate: {value!r}")


@dataclass(frozen=True)
class CartanType:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in FAMILY_RANKS:
            raise InputError(f"Unknown Cartan family: {self.family!r}")
        if not isinstance(self.rank, int) or isinstance(self.rank, bool):
            raise InputError(f"Rank must be an integer, got {self.rank!r}")
        low, high = FAMILY_RANKS[self.family]
        if self.rank < low or (high is not None and self.rank > high):
            raise InputError(f"Invalid rank {self.rank} for family {self.family}")

    @classmethod
    def parse(cls, label):
        """Parse labels such as "E6", "d4" or "A1"."""
        label = str(label).strip()
        if len(label) < 2 or not label[1:].isdigit():
            raise InputError(f"Cannot parse Cartan type label: {label!r}")
        return cls(label[0].upper(), int(label[1:]))

    @property
    def label(self):
        return f"{self.family}{self.rank}"

    @property
    def is_simply_laced(self):
        return self.family in ("A", "D", "E")


@dataclass(frozen=True)
class SO4Type:
    """so(4) = A1 x A1, realized on e_1 - e_2 and e_1 + e_2 like a rank-2 D.

    Only used so the orthogonal examples extend to n = 2; it is not a
    CartanType and never appears in classification tables.
    """

    family: str = "D"
    rank: int = 2
    label: str = "A1xA1"
    is_simply_laced: bool = True


SO4_TYPE = SO4Type()


def orthogonal_type(n):
    """Root datum of so(2n): D_n for n >= 3, A1 x A1 for n = 2"""
    if n == 2:
        return SO4_TYPE
    if n < 2:
        raise InputError(f"so(2n) needs n >= 2, got {n}")
    return CartanType("D", n)


def first_axis_coweight(rs):
    """e_1 in ambient coordinates (alpha_1^* for D_n with n >= 3, but not for A1 x A1)"""
    return LatticeVector(_unit(rs.ambient_dim, 0), BasisTag.AMBIENT)


def cartan_type_from(family, rank):
    """Cartan type from a family name and rank; "A1xA1" selects the so(4) datum."""
    if str(family).upper() == SO4_TYPE.label.upper():
        if int(rank) != SO4_TYPE.rank:
            raise InputError(f"{SO4_TYPE.label} has rank 2, got {rank}")
        return SO4_TYPE
    return CartanType(str(family).upper(), int(rank))


class BasisTag(str, Enum):
    AMBIENT = "ambient"
    FUNDAMENTAL_WEIGHT = "fundamental_weight"
    FUNDAMENTAL_COWEIGHT = "fundamental_coweight"


@dataclass(frozen=True)
class LatticeVector:
    coordinates: tuple
    basis: BasisTag = BasisTag.AMBIENT

    def __post_init__(self):
        object.__setattr__(
            self, "coordinates", tuple(as_fraction(c) for c in self.coordinates)
        )
        object.__setattr__(self, "basis", BasisTag(self.basis))

    def _check_same_basis(self, other):
        if self.basis != other.basis or len(self) != len(other):
            raise LatticeError(
                f"Cannot combine {self.basis.value} vector of length {len(self)} "
                f"with {other.basis.value} vector of length {len(other)}"
            )

    def __len__(self):
        return len(self.coordinates)

    def __add__(self, other):
        self._check_same_basis(other)
        return LatticeVector(
            tuple(a + b for a, b in zip(self.coordinates, other.coordinates)),
            self.basis,
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return LatticeVector(tuple(-a for a in self.coordinates), self.basis)

    def scale(self, factor):
        factor = as_fraction(factor)
        return LatticeVector(tuple(factor * a for a in self.coordinates), self.basis)

    def is_zero(self):
        return all(a == 0 for a in self.coordinates)

    def is_integral(self):
        return all(a.denominator == 1 for a in self.coordinates)

    def to_strings(self):
        return [str(a) for a in self.coordinates]

    def __repr__(self):
        coords = ", ".join(str(a) for a in self.coordinates)
        return f"LatticeVector([{coords}], {self.basis.value})"


def dot(u, v):
    """Euclidean pairing of two exact coordinate tuples"""
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def _axpy(alpha, x, y):
    """y + alpha * x on coordinate tuples"""
    return tuple(b + alpha * a for a, b in zip(x, y))


def _unit(dim, i, value=1):
    return tuple(Fraction(value) if k == i else Fraction(0) for k in range(dim))


def _simple_roots(t):
    n = t.rank
    half = Fraction(1, 2)
    if t.family == "A":
        dim = n + 1
        return dim, [_axpy(-1, _unit(dim, i + 1), _unit(dim, i)) for i in range(n)]
    if t.family in ("B", "C", "D"):
        dim = n
        roots = [_axpy(-1, _unit(dim, i + 1), _unit(dim, i)) for i in range(n - 1)]
        if t.family == "B":
            roots.append(_unit(dim, n - 1))
        elif t.family == "C":
            roots.append(_unit(dim, n - 1, 2))
        else:
            roots.append(_axpy(1, _unit(dim, n - 1), _unit(dim, n - 2)))
        return dim, roots
    if t.family == "E":
        dim = 8
        first = tuple([half] + [-half] * 6 + [half])
        roots = [first, _axpy(1, _unit(dim, 1), _unit(dim, 0))]
        for i in range(1, 7):
            roots.append(_axpy(-1, _unit(dim, i - 1), _unit(dim, i)))
        return dim, roots[:n]
    if t.family == "F":
        dim = 4
        return dim, [
            _axpy(-1, _unit(dim, 2), _unit(dim, 1)),
            _axpy(-1, _unit(dim, 3), _unit(dim, 2)),
            _unit(dim, 3),
            (half, -half, -half, -half),
        ]
    # G2
    return 3, [
        (Fraction(1), Fraction(-1), Fraction(0)),
        (Fraction(-2), Fraction(1), Fraction(1)),
    ]


def _exact_inverse(matrix):
    inverse = sympy.Matrix(matrix).inv()
    size = len(matrix)
    return [[as_fraction(inverse[i, j]) for j in range(size)] for i in range(size)]


@dataclass(frozen=True, eq=False)
class RootSystem:
    cartan_type: CartanType
    ambient_dim: int
    simple_roots: tuple
    roots: frozenset
    positive_roots: frozenset
    fundamental_weights: tuple
    fundamental_coweights: tuple
    weyl_vector: tuple
    cartan_matrix: tuple
    _coroots: tuple = field(repr=False, default=())

    @property
    def rank(self):
        return self.cartan_type.rank

    def inner_product(self, u, v):
        return dot(u, v)

    def simple_coroot(self, i):
        """Coroot of simple root i (0-based)"""
        return self._coroots[i]

    def coroot(self, beta):
        norm = dot(beta, beta)
        return tuple(2 * a / norm for a in beta)

    def reflect(self, v, i):
        """Simple reflection s_i on ambient coordinates (0-based index)"""
        return _axpy(-dot(v, self._coroots[i]), self.simple_roots[i], v)

    def root_coefficients(self, beta):
        """Coefficients of beta on the simple roots, i.e. alpha_i^*(beta)"""
        return tuple(dot(beta, w) for w in self.fundamental_coweights)

    def height(self, beta):
        return sum(self.root_coefficients(beta))

    @property
    def highest_root(self):
        return max(self.positive_roots, key=self.height)

    def is_dominant(self, v):
        return all(dot(v, alpha) >= 0 for alpha in self.simple_roots)

    def in_root_span(self, v):
        coords = [dot(v, c) for c in self._coroots]
        rebuilt = tuple(Fraction(0) for _ in range(self.ambient_dim))
        for c, lam in zip(coords, self.fundamental_weights):
            rebuilt = _axpy(c, lam, rebuilt)
        return rebuilt == tuple(v)

    # -- basis conversions -------------------------------------------------

    def to_ambient(self, v):
        if v.basis == BasisTag.AMBIENT:
            if len(v) != self.ambient_dim:
                raise LatticeError(
                    f"{self.cartan_type.label} ambient vectors have {self.ambient_dim} "
                    f"coordinates, got {len(v)}"
                )
            return v.coordinates
        if len(v) != self.rank:
            raise LatticeError(
                f"{self.cartan_type.label} {v.basis.value} vectors have {self.rank} "
                f"coordinates, got {len(v)}"
            )
        basis = (
            self.fundamental_weights
            if v.basis == BasisTag.FUNDAMENTAL_WEIGHT
            else self.fundamental_coweights
        )
        result = tuple(Fraction(0) for _ in range(self.ambient_dim))
        for c, b in zip(v.coordinates, basis):
            result = _axpy(c, b, result)
        return result

    def to_basis(self, v, basis):
        """Exact conversion; refuses vectors with a component off the root span."""
        basis = BasisTag(basis)
        ambient = self.to_ambient(v)
        if basis == BasisTag.AMBIENT:
            return LatticeVector(ambient, basis)
        if not self.in_root_span(ambient):
            raise LatticeError(
                f"Vector {list(map(str, ambient))} has a central component and has no "
                f"{basis.value} coordinates"
            )
        dual = self._coroots if basis == BasisTag.FUNDAMENTAL_WEIGHT else self.simple_roots
        return LatticeVector(tuple(dot(ambient, d) for d in dual), basis)

    def vector(self, coordinates, basis=BasisTag.AMBIENT):
        v = LatticeVector(tuple(coordinates), basis)
        self.to_ambient(v)
        return v

    def fundamental_weight(self, i):
        """lambda_i as a LatticeVector (1-based Bourbaki index)"""
        self.check_node(i)
        return LatticeVector(_unit(self.rank, i - 1), BasisTag.FUNDAMENTAL_WEIGHT)

    def fundamental_coweight(self, i):
        """alpha_i^*, the coweight dual to the simple roots (1-based index)"""
        self.check_node(i)
        return LatticeVector(_unit(self.rank, i - 1), BasisTag.FUNDAMENTAL_COWEIGHT)

    def check_node(self, i):
        if not 1 <= i <= self.rank:
            raise InputError(f"Node {i} out of range for {self.cartan_type.label}")


def _closure(simple_roots, coroots):
    seen = set(simple_roots)
    queue = deque(simple_roots)
    while queue:
        beta = queue.popleft()
        for alpha, coroot in zip(simple_roots, coroots):
            image = _axpy(-dot(beta, coroot), alpha, beta)
            if image not in seen:
                seen.add(image)
                queue.append(image)
    return frozenset(seen)


@lru_cache(maxsize=None)
def build_root_system(t):
    """Build the exact root data for Cartan type t (reflection closure of the simple roots)."""
    if not isinstance(t, (CartanType, SO4Type)):
        raise InputError(f"Expected a CartanType, got {t!r}")
    dim, simple = _simple_roots(t)
    simple = tuple(tuple(Fraction(a) for a in alpha) for alpha in simple)
    coroots = tuple(tuple(2 * a / dot(alpha, alpha) for a in alpha) for alpha in simple)
    r = len(simple)

    cartan = tuple(
        tuple(int(dot(simple[i], coroots[j])) for j in range(r)) for i in range(r)
    )
    roots = _closure(simple, coroots)

    inverse = _exact_inverse(cartan)
    zero = tuple(Fraction(0) for _ in range(dim))
    weights = []
    coweights = []
    for i in range(r):
        lam = zero
        cow = zero
        for j in range(r):
            lam = _axpy(inverse[i][j], simple[j], lam)
            cow = _axpy(inverse[j][i], coroots[j], cow)
        weights.append(lam)
        coweights.append(cow)

    positive = frozenset(
        beta for beta in roots if all(dot(beta, w) >= 0 for w in coweights)
    )
    delta = zero
    for lam in weights:
        delta = _axpy(1, lam, delta)
    half_sum = zero
    for beta in positive:
        half_sum = _axpy(Fraction(1, 2), beta, half_sum)

    if len(roots) != 2 * len(positive) or delta != half_sum:
        raise VerificationError(f"Inconsistent root data for {t.label}")

    logger.debug(f"Built root system {t.label}: {len(roots)} roots in dimension {dim}")
    return RootSystem(
        cartan_type=t,
        ambient_dim=dim,
        simple_roots=simple,
        roots=roots,
        positive_roots=positive,
        fundamental_weights=tuple(weights),
        fundamental_coweights=tuple(coweights),
        weyl_vector=delta,
        cartan_matrix=cartan,
        _coroots=coroots,
    )


def weyl_orbit(rs, v):
    """W-orbit of v by closure under simple reflections, in the basis of v."""
    start = rs.to_ambient(v)
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for i in range(rs.rank):
            image = rs.reflect(u, i)
            if image not in seen:
                seen.add(image)
                queue.append(image)
    if v.basis == BasisTag.AMBIENT:
        return {LatticeVector(u, BasisTag.AMBIENT) for u in seen}
    return {rs.to_basis(LatticeVector(u), v.basis) for u in seen}


def dominant_ambient(rs, ambient):
    u = tuple(ambient)
    changed = True
    while changed:
        changed = False
        for i, alpha in enumerate(rs.simple_roots):
            if dot(u, alpha) < 0:
                u = rs.reflect(u, i)
                changed = True
    return u


def dominant_representative(rs, v):
    """The unique element of the W-orbit of v in the closed fundamental chamber"""
    u = dominant_ambient(rs, rs.to_ambient(v))
    if v.basis == BasisTag.AMBIENT:
        return LatticeVector(u, BasisTag.AMBIENT)
    return rs.to_basis(LatticeVector(u), v.basis)


def pair(rs, w, a):
    """Exact pairing <w, a> of a weight with a coweight."""
    if w.basis == BasisTag.FUNDAMENTAL_COWEIGHT:
        raise LatticeError("First argument of pair() must be a weight")
    if a.basis == BasisTag.FUNDAMENTAL_WEIGHT:
        raise LatticeError("Second argument of pair() must be a coweight")
    return dot(rs.to_ambient(w), rs.to_ambient(a))


def standard_weights(rs):
    """Weights of the defining representation of a classical type (gl-style e_i for A)."""
    t = rs.cartan_type
    dim = rs.ambient_dim
    units = [_unit(dim, i) for i in range(dim)]
    if t.family == "A":
        vectors = units
    elif t.family == "B":
        vectors = units + [tuple(-a for a in u) for u in units] + [_unit(dim, 0, 0)]
    elif t.family in ("C", "D"):
        vectors = units + [tuple(-a for a in u) for u in units]
    else:
        raise InputError(f"No standard representation for {t.label}")
    return [LatticeVector(u, BasisTag.AMBIENT) for u in vectors]


def coweight_quotient_invariants(rs):
    """Invariant factors (> 1) of P-dual / Q-dual via the Smith normal form of the Cartan matrix"""
    snf = smith_normal_form(sympy.Matrix(rs.cartan_matrix), domain=ZZ)
    diagonal = [abs(int(snf[i, i])) for i in range(rs.rank)]
    return sorted(d for d in diagonal if d > 1)
