"""
JSON-ready reports shared by the CLI, the HTTP API and the Celery tasks.
Every report is a plain dict carrying "schema": 1 and, for checks, "pass".
"""
import logging
from enum import Enum
from fractions import Fraction

import numpy as np

from catalog import calogero
from ellfun import (
    EllipticContext,
    EllipticDivisor,
    linearly_equivalent,
    periodicity_check,
)
from errors import InputError
from geom import example_chain, quadric_component_count
from leafdim import (
    det_divisor_check,
    determinant_divisors,
    gamma,
    gamma_parity_report,
    hecke_dimension,
    leaf_dimension,
    normal_bundle_degree,
    pi1_image,
    singularity_divisors,
)
from parabolics import classification_row, classification_table
from rmatrix import cdybe_sweep, parse_algebra, projection_check
from rootsys import (
    CartanType,
    LatticeVector,
    build_root_system,
    coweight_quotient_invariants,
    standard_weights,
)
from toric2d import rays_of_XO, sl2_example

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


def make_json_serializable(obj):
    """Convert numpy, Fraction, complex and lattice types to native JSON values."""
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return make_json_serializable(obj.tolist())
    if isinstance(obj, Fraction):
        return int(obj) if obj.denominator == 1 else str(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, LatticeVector):
        return {"basis": obj.basis.value, "coords": obj.to_strings()}
    if isinstance(obj, dict):
        return {str(k): make_json_serializable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [make_json_serializable(v) for v in obj]
    return obj


def _envelope(command, payload):
    report = {"schema": SCHEMA_VERSION, "command": command}
    report.update(payload)
    return make_json_serializable(report)


def _strings(vector):
    return [str(a) for a in vector]


def rootsys_report(cartan_type):
    rs = build_root_system(cartan_type)
    return _envelope(
        "rootsys info",
        {
            "type": cartan_type.label,
            "rank": rs.rank,
            "ambient_dim": rs.ambient_dim,
            "root_count": len(rs.roots),
            "positive_root_count": len(rs.positive_roots),
            "simply_laced": cartan_type.is_simply_laced,
            "cartan_matrix": [list(row) for row in rs.cartan_matrix],
            "simple_roots": [_strings(a) for a in rs.simple_roots],
            "highest_root": _strings(rs.highest_root),
            "weyl_vector": _strings(rs.weyl_vector),
            "fundamental_weights": [_strings(w) for w in rs.fundamental_weights],
            "fundamental_coweights": [_strings(w) for w in rs.fundamental_coweights],
            "coweight_quotient_invariants": coweight_quotient_invariants(rs),
            "pass": True,
        },
    )


def _representation_weights(sd):
    try:
        return standard_weights(sd.root_system)
    except InputError:
        return None


def leaf_report(sd):
    rs = sd.root_system
    image = pi1_image(sd)
    payload = {
        "group": sd.group.name or rs.cartan_type.label,
        "lattice": sd.group.lattice_model,
        "center_dim": sd.group.center_dim,
        "tau": sd.tau,
        "points": [
            {
                "label": d.label,
                "z": d.point,
                "dominant_coweight": d.coweight,
                "gamma": gamma(rs, d.coweight),
            }
            for d in sd.data
        ],
        "gamma": gamma_parity_report(sd),
        "dimension": leaf_dimension(sd),
        "hecke_dimension": hecke_dimension(sd),
        "pi1_image": image.to_dict(),
        "topologically_nonempty": image.is_identity,
        "normal_bundle_degree": normal_bundle_degree(sd),
        "singularity_divisor_degrees": [d.degree for d in singularity_divisors(sd)],
    }

    weights = _representation_weights(sd)
    equivalent = None
    if weights is not None and all(_integral_pairings(rs, d, weights) for d in sd.data):
        zeros, poles = determinant_divisors(sd, weights)
        equivalent = det_divisor_check(sd, weights)
        payload["determinant"] = {
            "zeros": zeros.to_dict(sd.context),
            "poles": poles.to_dict(sd.context),
            "linearly_equivalent": equivalent,
        }
    payload["pass"] = bool(image.is_identity and equivalent is not False)
    return _envelope("leaf-dim", payload)


def _integral_pairings(rs, datum, weights):
    ambient = rs.to_ambient(datum.coweight)
    return all(sum(a * b for a, b in zip(rs.to_ambient(w), ambient)).denominator == 1 for w in weights)


def hecke_report(sd):
    return _envelope(
        "hecke-dim",
        {
            "group": sd.group.name or sd.root_system.cartan_type.label,
            "center_dim": sd.group.center_dim,
            "gamma_sum": gamma_parity_report(sd)["gamma_sum"],
            "dimension": hecke_dimension(sd),
            "pass": True,
        },
    )


def parabolics_report(cartan_type=None, max_rank=None):
    if cartan_type is not None:
        payload = classification_row(cartan_type)
    else:
        payload = {"max_rank": max_rank, "rows": classification_table(max_rank)}
    payload["pass"] = True
    return _envelope("classify-parabolics", payload)


def ellfun_report(tau, samples=100, seed=0, tol=1e-10):
    return _envelope("ellfun check", periodicity_check(EllipticContext(tau), samples, seed, tol))


def cdybe_report(algebra, tau, samples=20, seed=0, tol=1e-6):
    rep = parse_algebra(algebra)
    return _envelope("cdybe-check", cdybe_sweep(rep, EllipticContext(tau), samples, seed, tol))


def projection_report(algebra, tau, seed=0, radius=0.25):
    rep = parse_algebra(algebra)
    return _envelope("project-check", projection_check(rep, EllipticContext(tau), seed, radius))


def genus_report(example, n, k=1):
    chain = example_chain(example, n, k)
    chain["pass"] = chain["half_dimension_consistent"]
    return _envelope("genus", chain)


def toric_hilbert_report(k):
    payload = sl2_example(k)
    payload["pass"] = True
    return _envelope("toric hilbert", payload)


def toric_rays_report(cartan_type, coweight, lattice="adjoint"):
    """Rays in coordinates of the coweight lattice (adjoint) or the coroot lattice (simply_connected)."""
    rs = build_root_system(cartan_type)
    if lattice == "simply_connected":
        lattice_basis = [rs.simple_coroot(i) for i in range(rs.rank)]
    elif lattice == "adjoint":
        lattice_basis = None
    else:
        raise InputError(f"Unsupported lattice {lattice!r} for toric rays")
    rays = rays_of_XO(rs, coweight, lattice_basis)
    return _envelope(
        "toric rays",
        {
            "type": cartan_type.label,
            "coweight": coweight,
            "lattice": lattice,
            "rays": [list(r) for r in rays],
            "ray_count": len(rays),
            "pass": True,
        },
    )


def parse_divisor(ctx, text):
    """"a,b:m;a,b:m" in lattice coordinates (a + b tau) -> EllipticDivisor"""
    entries = []
    for chunk in filter(None, (c.strip() for c in str(text).split(";"))):
        try:
            coords, _, multiplicity = chunk.partition(":")
            a, b = (float(x) for x in coords.split(","))
            entries.append((ctx.from_lattice(a, b), int(multiplicity or 1)))
        except ValueError as e:
            raise InputError(f"Cannot read divisor entry {chunk!r}; use a,b:m") from e
    return EllipticDivisor.from_points(ctx, entries)


def divisor_report(tau, lhs=None, rhs=None, example=None, n=3, shift=None):
    ctx = EllipticContext(tau)
    if example == "calogero":
        sd = calogero(n, ctx, shift=shift)
        zeros, poles = determinant_divisors(sd, standard_weights(sd.root_system))
        equivalent = linearly_equivalent(ctx, zeros, poles)
        payload = {"example": "calogero", "n": n, "lhs": zeros.to_dict(ctx), "rhs": poles.to_dict(ctx)}
    elif example == "quadric":
        counts = quadric_component_count(ctx)
        equivalent = counts["per_condition"] == 4 and counts["components"] == 16
        payload = {"example": "quadric", **counts}
    elif example is None:
        if lhs is None or rhs is None:
            raise InputError("divisor-equiv needs --lhs and --rhs, or --example")
        d1 = parse_divisor(ctx, lhs)
        d2 = parse_divisor(ctx, rhs)
        equivalent = linearly_equivalent(ctx, d1, d2)
        payload = {"lhs": d1.to_dict(ctx), "rhs": d2.to_dict(ctx)}
    else:
        raise InputError(f"Unknown divisor example {example!r}")
    payload["tau"] = ctx.tau
    payload["linearly_equivalent"] = bool(equivalent)
    payload["pass"] = bool(equivalent)
    return _envelope("divisor-equiv", payload)


def parse_cartan(family, rank=None):
    """("E", 6), ("E6", None) -> CartanType"""
    if rank is None:
        return CartanType.parse(family)
    return CartanType(str(family).upper(), int(rank))
