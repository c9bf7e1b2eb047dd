"""
Simple roots whose dual coweight pairs with every root in {0, 1, -1}, and
the dimensions of the corresponding flag varieties G/P.
"""
import logging
import time

from rootsys import CartanType, build_root_system

logger = logging.getLogger(__name__)

# Names of the flag varieties G/P for the nodes that pass the compact-orbit test
_VARIETY_NAMES = {
    "B": {1: "odd-dimensional quadric"},
    "C": {"last": "Lagrangian grassmannian"},
    "D": {1: "even-dimensional quadric", "spinor": "spinor variety"},
    "E6": {1: "Cayley plane", 6: "Cayley plane"},
    "E7": {7: "Freudenthal variety"},
}


def compact_orbit_roots(rs):
    """1-based indices i with alpha_i^*(beta) in {0, 1, -1} for every root beta."""
    coefficients = [rs.root_coefficients(beta) for beta in rs.positive_roots]
    return [
        i + 1
        for i in range(rs.rank)
        if all(abs(c[i]) <= 1 for c in coefficients)
    ]


def flag_dimension(rs, i):
    """Sum of the alpha_i-coefficients over the roots of the opposite unipotent radical."""
    rs.check_node(i)
    total = 0
    for beta in rs.roots:
        coefficient = rs.root_coefficients(beta)[i - 1]
        if coefficient < 0:
            total += -coefficient
    return int(total)


def variety_name(t, i):
    family = t.family
    if family == "A":
        return f"grassmannian G({i},{t.rank + 1})"
    names = _VARIETY_NAMES.get(t.label, _VARIETY_NAMES.get(family, {}))
    if i in names:
        return names[i]
    if family == "C" and i == t.rank:
        return names["last"]
    if family == "D" and i in (t.rank - 1, t.rank):
        return names["spinor"]
    return None


def classification_row(t):
    rs = build_root_system(t)
    nodes = compact_orbit_roots(rs)
    return {
        "type": t.label,
        "family": t.family,
        "rank": t.rank,
        "compact_orbit_roots": nodes,
        "flag_dimensions": {str(i): flag_dimension(rs, i) for i in nodes},
        "varieties": {str(i): variety_name(t, i) for i in nodes},
    }


def classification_types(max_rank):
    types = []
    for n in range(1, max_rank + 1):
        types.append(CartanType("A", n))
    for family, low in (("B", 2), ("C", 2), ("D", 3)):
        for n in range(low, max_rank + 1):
            types.append(CartanType(family, n))
    for family, n in (("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2)):
        if n <= max_rank:
            types.append(CartanType(family, n))
    return types


def classification_table(max_rank):
    """One row per Cartan type of rank <= max_rank (exceptional types included when they fit)."""
    start = time.perf_counter()
    rows = [classification_row(t) for t in classification_types(max_rank)]
    logger.info(
        f"Classified {len(rows)} Cartan types up to rank {max_rank} in {time.perf_counter() - start:.2f}s"
    )
    return rows
