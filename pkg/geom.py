"""
Intersection numbers on labeled divisor-class lattices, adjunction and
Riemann-Hurwitz genus arithmetic, and the genus / Prym chains of the worked
examples. Everything here is exact integer arithmetic: a non-integral genus is
a GenusError, never a rounding.
"""
import logging
from dataclasses import dataclass

import numpy as np

from catalog import build_example, quadric_points
from ellfun import EllipticContext, EllipticDivisor, division_points, linearly_equivalent
from errors import GenusError, InputError, VerificationError
from leafdim import leaf_dimension, normal_bundle_degree

logger = logging.getLogger(__name__)

CHAIN_TAGS = ("quadric", "isotropic", "calogero", "grassmann")


@dataclass(frozen=True)
class DivisorClass:
    coefficients: tuple

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(int(c) for c in self.coefficients))

    def __add__(self, other):
        if len(self.coefficients) != len(other.coefficients):
            raise InputError("Divisor classes of different rank")
        return DivisorClass(tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def scale(self, factor):
        return DivisorClass(tuple(int(factor) * a for a in self.coefficients))


@dataclass(frozen=True, eq=False)
class DivisorClassLattice:
    labels: tuple
    gram: np.ndarray
    canonical: DivisorClass

    def __post_init__(self):
        gram = np.asarray(self.gram, dtype=np.int64)
        size = len(self.labels)
        if gram.shape != (size, size):
            raise InputError(f"Gram matrix must be {size}x{size}, got {gram.shape}")
        if not np.array_equal(gram, gram.T):
            raise InputError("Gram matrix must be symmetric")
        canonical = self.canonical
        if not isinstance(canonical, DivisorClass):
            canonical = DivisorClass(canonical)
        if len(canonical.coefficients) != size:
            raise InputError("Canonical class has the wrong rank")
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "canonical", canonical)

    @property
    def rank(self):
        return len(self.labels)

    def element(self, **coefficients):
        """Class from label=coefficient keywords; missing labels are 0."""
        unknown = set(coefficients) - set(self.labels)
        if unknown:
            raise InputError(f"Unknown classes {sorted(unknown)}")
        return DivisorClass(tuple(coefficients.get(label, 0) for label in self.labels))

    def basis_class(self, label):
        return self.element(**{label: 1})


def intersect(lattice, c1, c2):
    if len(c1.coefficients) != lattice.rank or len(c2.coefficients) != lattice.rank:
        raise InputError("Divisor class rank does not match the lattice")
    return int(np.array(c1.coefficients) @ lattice.gram @ np.array(c2.coefficients))


def arithmetic_genus(lattice, c):
    """Adjunction: 1 + (C.C + K.C) / 2"""
    total = intersect(lattice, c, c) + intersect(lattice, lattice.canonical, c)
    if total % 2:
        raise GenusError(f"C^2 + K.C = {total} is odd")
    return 1 + total // 2


def isotropic_example_model(n):
    """phi, z and four exceptional classes E_ij; K = 2 phi - 2 z + E, gamma = 2n phi + 2n z - n E."""
    if n < 2:
        raise InputError("The isotropic model needs n >= 2")
    labels = ("phi", "z", "E11", "E12", "E21", "E22")
    gram = np.zeros((6, 6), dtype=np.int64)
    gram[0, 1] = gram[1, 0] = 1
    for i in range(2, 6):
        gram[i, i] = -1
    canonical = DivisorClass((2, -2, 1, 1, 1, 1))
    lattice = DivisorClassLattice(labels, gram, canonical)
    curve = DivisorClass((2 * n, 2 * n, -n, -n, -n, -n))
    return lattice, curve


def quadric_example_model(n):
    """Ruled model {s, f}: s.f = 1, s^2 = f^2 = 0, K = -2s, Gamma = n s + 2 f."""
    if n < 2:
        raise InputError("The quadric model needs n >= 2")
    lattice = DivisorClassLattice(("s", "f"), np.array([[0, 1], [1, 0]]), DivisorClass((-2, 0)))
    return lattice, DivisorClass((n, 2))


def geometric_genus_after_nodes(p_a, node_count):
    if node_count < 0:
        raise GenusError("node count must be nonnegative")
    if node_count > p_a:
        raise GenusError(f"{node_count} nodes exceed the arithmetic genus {p_a}")
    return p_a - node_count


def riemann_hurwitz_quotient(g_cover, degree, ramification_count):
    """Genus h of the quotient: 2g - 2 = degree (2h - 2) + R."""
    if degree < 1 or ramification_count < 0:
        raise GenusError("degree must be positive and ramification nonnegative")
    numerator = 2 * g_cover - 2 - ramification_count
    if numerator % degree:
        raise GenusError(
            f"2g-2-R = {numerator} is not divisible by the degree {degree}"
        )
    twice = numerator // degree + 2
    if twice % 2 or twice < 0:
        raise GenusError(f"Non-integral quotient genus {twice}/2")
    return twice // 2


def riemann_hurwitz_cover(g_base, degree, ramification_count):
    """Genus g of a degree-d cover of a genus-h curve with total ramification R."""
    if degree < 1 or ramification_count < 0 or g_base < 0:
        raise GenusError("degree must be positive, genus and ramification nonnegative")
    twice = degree * (2 * g_base - 2) + ramification_count + 2
    if twice % 2 or twice < 0:
        raise GenusError(f"Non-integral cover genus {twice}/2")
    return twice // 2


def prym_dimension(g_cover, g_quotient):
    if g_cover < g_quotient:
        raise GenusError(f"cover genus {g_cover} below quotient genus {g_quotient}")
    return g_cover - g_quotient


def _step(name, value, formula):
    return {"step": name, "value": value, "formula": formula}


def _isotropic_chain(n):
    lattice, curve = isotropic_example_model(n)
    p_a = arithmetic_genus(lattice, curve)
    nodes = intersect(lattice, curve, lattice.basis_class("z"))
    normalized = geometric_genus_after_nodes(p_a, nodes)
    quotient = riemann_hurwitz_quotient(normalized, 2, 4 * n)
    free_quotient = riemann_hurwitz_quotient(quotient, 2, 0)
    prym = prym_dimension(quotient, free_quotient)
    steps = [
        _step("gamma.gamma", intersect(lattice, curve, curve), "4n^2"),
        _step("K.gamma", intersect(lattice, lattice.canonical, curve), "4n"),
        _step("arithmetic_genus", p_a, "2(n^2+n)+1"),
        _step("nodes", nodes, "2n"),
        _step("geometric_genus", normalized, "2n^2+1"),
        _step("quotient_genus", quotient, "n^2-n+1"),
        _step("free_quotient_genus", free_quotient, "(n^2-n+2)/2"),
        _step("prym_dimension", prym, "(n^2-n)/2"),
    ]
    return steps, prym


def _quadric_chain(n):
    lattice, curve = quadric_example_model(n)
    p_a = arithmetic_genus(lattice, curve)
    cover = riemann_hurwitz_cover(p_a, 2, 0)
    prym = prym_dimension(cover, p_a)
    steps = [
        _step("Gamma.Gamma", intersect(lattice, curve, curve), "4n"),
        _step("K.Gamma", intersect(lattice, lattice.canonical, curve), "-4"),
        _step("arithmetic_genus", p_a, "2n-1"),
        _step("cover_genus", cover, "4n-3"),
        _step("prym_dimension", prym, "2n-2"),
    ]
    return steps, prym


def _calogero_chain(n):
    genus = riemann_hurwitz_cover(1, n, 2 * (n - 1))
    steps = [
        _step("base_genus", 1, "1"),
        _step("ramification", 2 * (n - 1), "2(n-1)"),
        _step("spectral_genus", genus, "n"),
    ]
    return steps, genus


def example_chain(tag, n, k=1):
    """Full derivation chain for one worked example plus its leaf dimension."""
    if tag not in CHAIN_TAGS:
        raise InputError(f"Unknown example {tag!r}; choose from {', '.join(CHAIN_TAGS)}")
    if n < 2:
        raise InputError("Examples need n >= 2")

    data = build_example(tag, n, k=k)
    leaf = leaf_dimension(data)
    if tag == "isotropic":
        steps, fiber = _isotropic_chain(n)
    elif tag == "quadric":
        steps, fiber = _quadric_chain(n)
    elif tag == "calogero":
        steps, fiber = _calogero_chain(n)
    else:
        degree = normal_bundle_degree(data)
        fiber = int(degree)
        steps = [_step("sum_deg_S", fiber, "k(n-k)")]

    logger.debug(f"{tag} chain n={n}: fiber {fiber}, leaf {leaf}")
    return {
        "example": tag,
        "n": n,
        "k": k if tag == "grassmann" else None,
        "steps": steps,
        "fiber_dimension": fiber,
        "leaf_dimension": leaf,
        "half_dimension_consistent": 2 * fiber == leaf,
    }


def halfdim_consistency(tag, n, k=1):
    return example_chain(tag, n, k)["half_dimension_consistent"]


def quadric_component_count(ctx, p1=None, p2=None):
    """Solutions of 2 x_1 ~ p1 + p2 and 2 x_-1 ~ p1 + p2; 4 each, 16 combined."""
    if not isinstance(ctx, EllipticContext):
        ctx = EllipticContext(complex(ctx))
    if p1 is None or p2 is None:
        p1, p2 = quadric_points(ctx)
    target = EllipticDivisor.from_points(ctx, [(p1, 1), (p2, 1)])
    solutions = division_points(ctx, p1 + p2, 2)
    for x in solutions:
        doubled = EllipticDivisor.from_points(ctx, [(x, 2)])
        if not linearly_equivalent(ctx, doubled, target):
            raise VerificationError(f"{x} does not solve 2x ~ p1 + p2")
    distinct = []
    for x in solutions:
        if not any(ctx.same_point(x, y) for y in distinct):
            distinct.append(x)
    per_condition = len(distinct)
    return {
        "solutions": [[x.real, x.imag] for x in distinct],
        "per_condition": per_condition,
        "components": per_condition * per_condition,
    }
