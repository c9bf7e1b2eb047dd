"""
Dimension formulas for symplectic leaves and Hecke correspondences, the
singularity divisors, and the two non-emptiness conditions (pi_1 image and
linear equivalence of the determinant divisors).

Each SingularityDatum stores the dominant representative of its W-orbit.
Formulas that want the representative a with -a dominant (gamma, S_i)
take a = -dominant(-a_p) internally.
"""
import logging
from collections import Counter, deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import lcm

from ellfun import EllipticContext, EllipticDivisor, linearly_equivalent
from errors import InputError, LatticeError, VerificationError
from rootsys import (
    BasisTag,
    LatticeVector,
    coweight_quotient_invariants,
    dot,
    dominant_ambient,
    dominant_representative,
    first_axis_coweight,
)

logger = logging.getLogger(__name__)


class LatticeModel(str, Enum):
    SIMPLY_CONNECTED = "simply_connected"
    ADJOINT = "adjoint"
    GL = "gl"
    INTERMEDIATE = "intermediate"


def _frac_part(x):
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True)
class GroupSpec:
    """Root system + center dimension + choice of cocharacter lattice Ch(T)*.

    INTERMEDIATE lattices are the coroot lattice plus the given coweight
    generators, e.g. SO(2n) = Q-dual + Z e_1.
    """

    root_system: object
    center_dim: int = 0
    lattice_model: LatticeModel = LatticeModel.ADJOINT
    generators: tuple = ()
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "lattice_model", LatticeModel(self.lattice_model))
        rs = self.root_system
        if self.center_dim < 0:
            raise InputError("center_dim must be nonnegative")
        if self.lattice_model == LatticeModel.GL:
            if rs.cartan_type.family != "A":
                raise InputError("The gl lattice model needs a type A root system")
            if self.center_dim != 1:
                raise InputError("The gl lattice model has a one-dimensional center")
        if self.lattice_model == LatticeModel.INTERMEDIATE:
            if not self.generators:
                raise InputError("An intermediate lattice needs coweight generators")
            for g in self.generators:
                if not self._in_coweight_lattice(rs.to_ambient(g)):
                    raise LatticeError(f"Generator {g} is not a coweight")
        elif self.generators:
            raise InputError("Generators are only used by the intermediate lattice model")

    # -- constructors -------------------------------------------------------

    @classmethod
    def simply_connected(cls, rs, name=""):
        return cls(rs, 0, LatticeModel.SIMPLY_CONNECTED, name=name or f"simply connected {rs.cartan_type.label}")

    @classmethod
    def adjoint(cls, rs, name=""):
        return cls(rs, 0, LatticeModel.ADJOINT, name=name or f"adjoint {rs.cartan_type.label}")

    @classmethod
    def general_linear(cls, rs):
        return cls(rs, 1, LatticeModel.GL, name=f"GL({rs.rank + 1})")

    @classmethod
    def special_orthogonal_even(cls, rs):
        """SO(2n): the coroot lattice of D_n extended by e_1 (the vector representation's coweight)"""
        if rs.cartan_type.family != "D":
            raise InputError("SO(2n) needs a type D root system")
        return cls(
            rs,
            0,
            LatticeModel.INTERMEDIATE,
            generators=(first_axis_coweight(rs),),
            name=f"SO({2 * rs.rank})",
        )

    # -- lattice membership -------------------------------------------------

    def _in_coweight_lattice(self, ambient):
        rs = self.root_system
        if not rs.in_root_span(ambient):
            return False
        return all(dot(ambient, alpha).denominator == 1 for alpha in rs.simple_roots)

    def coroot_class(self, ambient):
        """Class of a coweight in P-dual / Q-dual: fractional coroot coordinates"""
        rs = self.root_system
        return tuple(_frac_part(dot(ambient, lam)) for lam in rs.fundamental_weights)

    def _subgroup(self):
        start = tuple(Fraction(0) for _ in range(self.root_system.rank))
        gens = [self.coroot_class(self.root_system.to_ambient(g)) for g in self.generators]
        seen = {start}
        queue = deque([start])
        while queue:
            c = queue.popleft()
            for g in gens:
                image = tuple(_frac_part(a + b) for a, b in zip(c, g))
                if image not in seen:
                    seen.add(image)
                    queue.append(image)
        return seen

    def contains(self, ambient):
        if self.lattice_model == LatticeModel.GL:
            return all(a.denominator == 1 for a in ambient)
        if not self._in_coweight_lattice(ambient):
            return False
        if self.lattice_model == LatticeModel.ADJOINT:
            return True
        cls_ = self.coroot_class(ambient)
        if self.lattice_model == LatticeModel.SIMPLY_CONNECTED:
            return all(a == 0 for a in cls_)
        return cls_ in self._subgroup()

    def lattice_generators(self):
        """Ambient vectors spanning Ch(T)* over Z"""
        rs = self.root_system
        if self.lattice_model == LatticeModel.GL:
            return [
                tuple(Fraction(int(i == j)) for j in range(rs.ambient_dim))
                for i in range(rs.ambient_dim)
            ]
        if self.lattice_model == LatticeModel.ADJOINT:
            return list(rs.fundamental_coweights)
        coroots = [rs.simple_coroot(i) for i in range(rs.rank)]
        if self.lattice_model == LatticeModel.SIMPLY_CONNECTED:
            return coroots
        return coroots + [rs.to_ambient(g) for g in self.generators]

    @property
    def pi1_order(self):
        """|pi_1(G)|, or None when it is infinite (gl model)"""
        rs = self.root_system
        if self.lattice_model == LatticeModel.GL:
            return None
        if self.lattice_model == LatticeModel.SIMPLY_CONNECTED:
            return 1
        if self.lattice_model == LatticeModel.ADJOINT:
            order = 1
            for d in coweight_quotient_invariants(rs):
                order *= d
            return order
        return len(self._subgroup())


@dataclass(frozen=True)
class SingularityDatum:
    point: complex
    coweight: LatticeVector
    lattice: tuple = None  # (a, b) with point = a + b tau, when given that way
    label: str = ""


@dataclass(frozen=True)
class SingularityData:
    group: GroupSpec
    tau: complex
    data: tuple = ()
    context: EllipticContext = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        ctx = self.context or EllipticContext(complex(self.tau))
        object.__setattr__(self, "context", ctx)
        object.__setattr__(self, "tau", ctx.tau)
        rs = self.group.root_system

        normalized = []
        for datum in self.data:
            ambient = rs.to_ambient(datum.coweight)
            if not self.group.contains(ambient):
                raise LatticeError(
                    f"Coweight {datum.coweight} at {datum.point} is not in the "
                    f"{self.group.lattice_model.value} cocharacter lattice"
                )
            dominant = dominant_representative(rs, datum.coweight)
            normalized.append(
                SingularityDatum(complex(datum.point), dominant, datum.lattice, datum.label)
            )

        for i in range(len(normalized)):
            for j in range(i + 1, len(normalized)):
                if ctx.same_point(normalized[i].point, normalized[j].point):
                    raise InputError(
                        f"Points {normalized[i].point} and {normalized[j].point} coincide modulo the lattice"
                    )
        object.__setattr__(self, "data", tuple(normalized))

    @property
    def root_system(self):
        return self.group.root_system

    def antidominant_ambient(self, datum):
        rs = self.root_system
        ambient = rs.to_ambient(datum.coweight)
        return tuple(-a for a in dominant_ambient(rs, tuple(-a for a in ambient)))

    def concatenate(self, other):
        return SingularityData(self.group, self.tau, self.data + other.data, self.context)


# -- gamma and dimensions -------------------------------------------------------


def _antidominant(rs, v):
    ambient = rs.to_ambient(v)
    return tuple(-a for a in dominant_ambient(rs, tuple(-a for a in ambient)))


def gamma(rs, orbit_rep):
    """gamma(O) = sum over roots of max(0, -alpha(a)) = -2 a(delta), with -a dominant."""
    a = _antidominant(rs, orbit_rep)
    root_sum = sum((max(Fraction(0), -dot(beta, a)) for beta in rs.roots), Fraction(0))
    weyl_form = -2 * dot(a, rs.weyl_vector)
    if root_sum != weyl_form:
        raise VerificationError(
            f"gamma mismatch for {orbit_rep}: root sum {root_sum} != -2a(delta) {weyl_form}"
        )
    if root_sum.denominator != 1:
        raise LatticeError(f"{orbit_rep} does not pair integrally with the roots")
    return int(root_sum)


def gamma_total(sd):
    return sum(gamma(sd.root_system, d.coweight) for d in sd.data)


def gamma_parity_report(sd):
    total = gamma_total(sd)
    return {"gamma_sum": total, "even": total % 2 == 0}


def leaf_dimension(sd):
    """2 dim(z) + sum of gamma(O_p)"""
    total = gamma_total(sd)
    if total % 2:
        logger.warning(
            f"Sum of gamma is odd ({total}) for {sd.group.name or sd.root_system.cartan_type.label}"
        )
    return 2 * sd.group.center_dim + total


def hecke_dimension(sd):
    """dim(z) + sum of gamma(O_p)"""
    return sd.group.center_dim + gamma_total(sd)


def gl_leaf_dimension(n, beta):
    """2 + sum_p sum_i beta_i(p) i (n - i) for GL(n) data given by dominant-weight coefficients."""
    if n < 2:
        raise InputError("GL(n) needs n >= 2")
    total = 2
    for point, coefficients in beta.items():
        coefficients = list(coefficients)
        if len(coefficients) != n - 1:
            raise InputError(f"Point {point}: expected {n - 1} coefficients, got {len(coefficients)}")
        for i, b in enumerate(coefficients, start=1):
            if b < 0:
                raise InputError(f"Point {point}: coefficients must be nonnegative")
            total += b * i * (n - i)
    return total


def gl_coweight_from_beta(n, coefficients):
    """Integral GL(n) coweight -(sum_i beta_i (e_1 + ... + e_i)) in ambient coordinates"""
    coords = [0] * n
    for i, b in enumerate(coefficients, start=1):
        for j in range(i):
            coords[j] -= b
    return LatticeVector(tuple(coords), BasisTag.AMBIENT)


def simple_zeros_poles_dimension(n, ranks):
    """2 + sum_p r_p (n - r_p) for GL(n) sections with simple zeros/poles of rank r_p."""
    total = 2
    for r in ranks:
        if not 0 <= r <= n:
            raise InputError(f"rank {r} out of range for GL({n})")
        total += r * (n - r)
    return total


# -- topological invariant ------------------------------------------------------


@dataclass(frozen=True)
class Pi1Image:
    """Image of sum_p a_p in pi_1(G); components are fractional coroot coordinates
    (finite quotient) or the coordinate sum (gl model)."""

    model: LatticeModel
    components: tuple

    @property
    def is_identity(self):
        return all(c == 0 for c in self.components)

    @property
    def order(self):
        if self.model == LatticeModel.GL:
            return 1 if self.is_identity else None
        return lcm(*(c.denominator for c in self.components)) if self.components else 1

    def __add__(self, other):
        if self.model != other.model or len(self.components) != len(other.components):
            raise InputError("Cannot add pi_1 images of different groups")
        if self.model == LatticeModel.GL:
            return Pi1Image(self.model, tuple(a + b for a, b in zip(self.components, other.components)))
        return Pi1Image(
            self.model, tuple(_frac_part(a + b) for a, b in zip(self.components, other.components))
        )

    def to_dict(self):
        return {
            "model": self.model.value,
            "components": [str(c) for c in self.components],
            "identity": self.is_identity,
            "order": self.order,
        }


def pi1_image(sd):
    """sum_p a_p modulo the coroot lattice."""
    rs = sd.root_system
    total = tuple(Fraction(0) for _ in range(rs.ambient_dim))
    for datum in sd.data:
        ambient = rs.to_ambient(datum.coweight)
        if not sd.group.contains(ambient):
            raise LatticeError(f"Coweight {datum.coweight} outside the declared lattice")
        total = tuple(a + b for a, b in zip(total, ambient))

    if sd.group.lattice_model == LatticeModel.GL:
        return Pi1Image(LatticeModel.GL, (sum(total, Fraction(0)),))
    return Pi1Image(sd.group.lattice_model, sd.group.coroot_class(total))


def is_topologically_nonempty(sd):
    return pi1_image(sd).is_identity


# -- divisors -------------------------------------------------------------------


def _check_weights(rs, rep_weights):
    weights = [rs.to_ambient(w) for w in rep_weights]
    if any(w.basis == BasisTag.FUNDAMENTAL_COWEIGHT for w in rep_weights):
        raise LatticeError("Representation weights must be weights, not coweights")
    counts = Counter(weights)
    for i in range(rs.rank):
        if Counter(rs.reflect(w, i) for w in weights) != counts:
            raise InputError("Representation weights are not W-invariant")
    return weights


def d_plus(rs, rep_weights, a):
    """max of w(a) over the weights"""
    ambient = rs.to_ambient(a)
    return max(dot(w, ambient) for w in (rs.to_ambient(x) for x in rep_weights))


def d_minus(rs, rep_weights, a):
    """min of w(a) over the weights"""
    ambient = rs.to_ambient(a)
    return min(dot(w, ambient) for w in (rs.to_ambient(x) for x in rep_weights))


def polar_divisor(sd, rep_weights):
    """Coefficient at p is -d_minus(O_p, rho)."""
    rs = sd.root_system
    weights = _check_weights(rs, rep_weights)
    entries = []
    for datum in sd.data:
        ambient = rs.to_ambient(datum.coweight)
        lowest = min(dot(w, ambient) for w in weights)
        entries.append((datum.point, -lowest))
    return EllipticDivisor.from_points(sd.context, entries)


def singularity_divisors(sd):
    """S_i = sum_p -lambda_i(a_p) p with -a_p dominant; sum of degrees is half of sum gamma."""
    rs = sd.root_system
    divisors = []
    for lam in rs.fundamental_weights:
        entries = []
        for datum in sd.data:
            a = sd.antidominant_ambient(datum)
            entries.append((datum.point, -dot(lam, a)))
        divisors.append(EllipticDivisor.from_points(sd.context, entries))

    for i, divisor in enumerate(divisors, start=1):
        if not divisor.is_effective():
            raise VerificationError(f"S_{i} is not effective")
    total = sum((d.degree for d in divisors), Fraction(0))
    if total != Fraction(gamma_total(sd), 2):
        raise VerificationError(
            f"sum of deg S_i = {total} differs from half the gamma sum {Fraction(gamma_total(sd), 2)}"
        )
    return divisors


def normal_bundle_degree(sd):
    return sum((d.degree for d in singularity_divisors(sd)), Fraction(0))


def determinant_divisors(sd, rep_weights):
    """(zero divisor, polar divisor) of the determinant in the representation"""
    rs = sd.root_system
    weights = _check_weights(rs, rep_weights)
    zeros = []
    poles = []
    for datum in sd.data:
        ambient = rs.to_ambient(datum.coweight)
        pairings = [dot(w, ambient) for w in weights]
        zeros.append((datum.point, sum((max(Fraction(0), -p) for p in pairings), Fraction(0))))
        poles.append((datum.point, sum((max(Fraction(0), p) for p in pairings), Fraction(0))))
    return (
        EllipticDivisor.from_points(sd.context, zeros),
        EllipticDivisor.from_points(sd.context, poles),
    )


def det_divisor_check(sd, rep_weights, tol=1e-9):
    """Zero and polar divisors of det must be linearly equivalent."""
    zeros, poles = determinant_divisors(sd, rep_weights)
    result = linearly_equivalent(sd.context, zeros, poles, tol=tol)
    logger.debug(f"det divisor check: deg {zeros.degree} vs {poles.degree} -> {result}")
    return result
