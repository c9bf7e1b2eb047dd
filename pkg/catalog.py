"""
Worked singularity-data configurations.

Points are placed by lattice coordinates (a, b), meaning a + b tau, so that
the Abel-sum conditions hold exactly:

    calogero    GL(n): (1,...,1) at p0, (0,-1,...,-1) at p1, (0,...,0,-1) at p2
                with p2 = n p0 - (n-1) p1
    grassmann   PGL(n): alpha_k^* at p1, -alpha_k^* at p2
    quadric     SO(2n): e_1 at p1 and p2 (A1 x A1 stands in for D_2 at n = 2)
    isotropic   PD(n): alpha_n^* at p1 and p2 (n even); alpha_n^*, alpha_{n-1}^* (n odd)
    gl_empty    GL(n) with no singular points
"""
import logging
from fractions import Fraction

from ellfun import EllipticContext
from errors import InputError
from leafdim import GroupSpec, SingularityData, SingularityDatum
from rootsys import (
    CartanType,
    LatticeVector,
    build_root_system,
    first_axis_coweight,
    orthogonal_type,
)

logger = logging.getLogger(__name__)

EXAMPLE_TAGS = ("calogero", "grassmann", "quadric", "isotropic", "gl_empty")

# Generic base points in lattice coordinates
_P0 = (Fraction(0), Fraction(0))
_P1 = (Fraction(3, 11), Fraction(2, 13))
_P2 = (Fraction(5, 17), Fraction(7, 19))


def _reduce(a, b):
    return (a - (a.numerator // a.denominator), b - (b.numerator // b.denominator))


def _datum(ctx, lattice, coweight, label):
    a, b = lattice
    return SingularityDatum(
        point=ctx.from_lattice(float(a), float(b)),
        coweight=coweight,
        lattice=(a, b),
        label=label,
    )


def _context(tau):
    return tau if isinstance(tau, EllipticContext) else EllipticContext(complex(tau))


def _parse_shift(shift):
    """(a, b) offset in lattice coordinates; accepts "a,b" or a pair of numbers / "p/q" strings"""
    try:
        parts = list(shift.split(",") if isinstance(shift, str) else shift)
        coords = tuple(Fraction(str(x).strip()) for x in parts)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise InputError(f"Cannot read shift {shift!r}: {e}") from e
    if len(coords) != 2:
        raise InputError(f"A shift needs two lattice coordinates, got {shift!r}")
    return coords


def calogero(n, tau=1j, shift=None):
    """Deformed Calogero-Moser data for GL(n); shift moves p2 off its balanced position."""
    if n < 2:
        raise InputError("Calogero data needs n >= 2")
    ctx = _context(tau)
    rs = build_root_system(CartanType("A", n - 1))
    group = GroupSpec.general_linear(rs)

    p2 = _reduce(n * _P0[0] - (n - 1) * _P1[0], n * _P0[1] - (n - 1) * _P1[1])
    if shift is not None:
        da, db = _parse_shift(shift)
        p2 = _reduce(p2[0] + da, p2[1] + db)

    data = (
        _datum(ctx, _P0, LatticeVector((1,) * n), "p0"),
        _datum(ctx, _P1, LatticeVector((0,) + (-1,) * (n - 1)), "p1"),
        _datum(ctx, p2, LatticeVector((0,) * (n - 1) + (-1,)), "p2"),
    )
    return SingularityData(group, ctx.tau, data, ctx)


def grassmann(n, k, tau=1j):
    """PGL(n) with alpha_k^* and -alpha_k^*; leaf dimension 2k(n-k)."""
    if n < 2 or not 1 <= k <= n - 1:
        raise InputError(f"Grassmannian data needs 1 <= k <= n-1, got n={n}, k={k}")
    ctx = _context(tau)
    rs = build_root_system(CartanType("A", n - 1))
    group = GroupSpec.adjoint(rs, name=f"PGL({n})")
    coweight = rs.fundamental_coweight(k)
    data = (
        _datum(ctx, _P1, coweight, "p1"),
        _datum(ctx, _P2, -coweight, "p2"),
    )
    return SingularityData(group, ctx.tau, data, ctx)


def quadric(n, tau=1j):
    """SO(2n) with e_1 (the vector coweight) at two points; leaf dimension 4n-4."""
    if n < 2:
        raise InputError("Quadric data needs n >= 2")
    ctx = _context(tau)
    rs = build_root_system(orthogonal_type(n))
    group = GroupSpec.special_orthogonal_even(rs)
    coweight = first_axis_coweight(rs)
    data = (
        _datum(ctx, _P1, coweight, "p1"),
        _datum(ctx, _P2, coweight, "p2"),
    )
    return SingularityData(group, ctx.tau, data, ctx)


def isotropic(n, tau=1j):
    """Adjoint D_n with spinor coweights at two points; leaf dimension n^2 - n.

    Two copies of alpha_n^* sum into the coroot lattice only for even n; for odd
    n the pair alpha_n^*, alpha_{n-1}^* is used so the pi_1 condition still holds.
    """
    if n < 2:
        raise InputError("Isotropic data needs n >= 2")
    ctx = _context(tau)
    rs = build_root_system(orthogonal_type(n))
    group = GroupSpec.adjoint(rs, name=f"PSO({2 * n})")
    second = n if n % 2 == 0 else n - 1
    data = (
        _datum(ctx, _P1, rs.fundamental_coweight(n), "p1"),
        _datum(ctx, _P2, rs.fundamental_coweight(second), "p2"),
    )
    return SingularityData(group, ctx.tau, data, ctx)


def gl_empty(n, tau=1j):
    ctx = _context(tau)
    rs = build_root_system(CartanType("A", n - 1))
    return SingularityData(GroupSpec.general_linear(rs), ctx.tau, (), ctx)


def build_example(tag, n, k=1, tau=1j):
    if tag == "calogero":
        return calogero(n, tau)
    if tag == "grassmann":
        return grassmann(n, k, tau)
    if tag == "quadric":
        return quadric(n, tau)
    if tag == "isotropic":
        return isotropic(n, tau)
    if tag == "gl_empty":
        return gl_empty(n, tau)
    raise InputError(f"Unknown example {tag!r}; choose from {', '.join(EXAMPLE_TAGS)}")


def quadric_points(tau=1j):
    """The two marked points of the quadric data as curve points"""
    ctx = _context(tau)
    return ctx.from_lattice(float(_P1[0]), float(_P1[1])), ctx.from_lattice(float(_P2[0]), float(_P2[1]))


