"""
JSON singularity-data format, schema 1.

{
  "schema": 1,
  "group": {"family": "D", "rank": 4, "lattice": "adjoint", "center_dim": 0,
            "generators": [{"basis": "fundamental_coweight", "coords": ["1", "0", "0", "0"]}]},
  "tau": [0.0, 1.0],
  "points": [
    {"lattice": ["1/3", "0"], "coweight": {"basis": "fundamental_coweight", "coords": ["0", "0", "0", "1"]}},
    {"z": [0.25, 0.4], "coweight": {"basis": "ambient", "coords": ["1/2", "1/2", "1/2", "1/2"]}, "label": "p2"}
  ]
}

Coweight coordinates are integers or "p/q" strings; floats are refused so
that rational coweights stay exact. "lattice" points mean a + b tau.
"""
import json
import logging
from fractions import Fraction

from errors import DataFormatError, InputError
from leafdim import GroupSpec, LatticeModel, SingularityData, SingularityDatum
from rootsys import BasisTag, LatticeVector, SO4Type, build_root_system, cartan_type_from

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


def parse_tau(value):
    """"re,im" or [re, im] -> complex with positive imaginary part"""
    try:
        if isinstance(value, str):
            parts = [float(p) for p in value.replace(" ", "").split(",")]
        else:
            parts = [float(p) for p in value]
    except (TypeError, ValueError) as e:
        raise DataFormatError(f"Cannot read tau from {value!r}") from e
    if len(parts) != 2:
        raise DataFormatError(f"tau needs two components, got {value!r}")
    tau = complex(parts[0], parts[1])
    if tau.imag <= 0:
        raise DataFormatError(f"tau must have positive imaginary part, got {tau}")
    return tau


def _require(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise DataFormatError(f"Missing '{key}' in {where}")
    return obj[key]


def _parse_vector(obj, where):
    basis = _require(obj, "basis", where)
    coords = _require(obj, "coords", where)
    if not isinstance(coords, list):
        raise DataFormatError(f"'coords' in {where} must be a list")
    if any(isinstance(c, float) for c in coords):
        raise DataFormatError(f"{where}: write rational coordinates as integers or \"p/q\" strings")
    try:
        return LatticeVector(tuple(coords), BasisTag(basis))
    except ValueError as e:
        raise DataFormatError(f"{where}: {e}") from e


def _parse_lattice_coordinate(value, where):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return value
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise DataFormatError(f"{where}: cannot read lattice coordinate {value!r}") from e


def parse_group(obj):
    family = _require(obj, "family", "group")
    rank = _require(obj, "rank", "group")
    lattice = obj.get("lattice", LatticeModel.ADJOINT.value)
    try:
        t = cartan_type_from(family, rank)
        model = LatticeModel(lattice)
    except (TypeError, ValueError) as e:
        raise DataFormatError(f"group: {e}") from e
    rs = build_root_system(t)
    center_dim = int(obj.get("center_dim", 1 if model == LatticeModel.GL else 0))
    generators = tuple(
        _parse_vector(g, f"group generator {i}") for i, g in enumerate(obj.get("generators", []))
    )
    return GroupSpec(rs, center_dim, model, generators, obj.get("name", ""))


def parse_singularity_data(obj):
    """Dict in schema 1 -> SingularityData"""
    if not isinstance(obj, dict):
        raise DataFormatError("Singularity data must be a JSON object")
    schema = obj.get("schema", SCHEMA_VERSION)
    if schema != SCHEMA_VERSION:
        raise DataFormatError(f"Unsupported schema {schema}; expected {SCHEMA_VERSION}")

    group = parse_group(_require(obj, "group", "singularity data"))
    tau = parse_tau(_require(obj, "tau", "singularity data"))

    data = []
    for i, point in enumerate(obj.get("points", [])):
        where = f"point {i}"
        coweight = _parse_vector(_require(point, "coweight", where), f"{where} coweight")
        if "lattice" in point:
            a, b = (_parse_lattice_coordinate(x, where) for x in point["lattice"])
            z = complex(float(a) + float(b) * tau)
            lattice = (a, b)
        elif "z" in point:
            try:
                re_part, im_part = (float(x) for x in point["z"])
            except (TypeError, ValueError) as e:
                raise DataFormatError(f"{where}: 'z' must be [re, im]") from e
            z = complex(re_part, im_part)
            lattice = None
        else:
            raise DataFormatError(f"{where} needs 'z' or 'lattice'")
        data.append(SingularityDatum(z, coweight, lattice, str(point.get("label", ""))))

    try:
        return SingularityData(group, tau, tuple(data))
    except InputError:
        raise
    except ValueError as e:
        raise DataFormatError(str(e)) from e


def load_singularity_data(path):
    try:
        with open(path, "r", encoding="utf-8") as f:
            obj = json.load(f)
    except json.JSONDecodeError as e:
        raise DataFormatError(f"{path}: invalid JSON ({e})") from e
    except OSError as e:
        raise DataFormatError(f"Cannot read {path}: {e}") from e
    logger.debug(f"Loaded singularity data from {path}")
    return parse_singularity_data(obj)


def _vector_dict(v):
    return {"basis": v.basis.value, "coords": v.to_strings()}


def _lattice_coordinate(value):
    return str(value) if isinstance(value, Fraction) else value


def dump_singularity_data(sd):
    """SingularityData -> dict in schema 1 (coweights as their stored dominant representatives)"""
    rs = sd.root_system
    group = sd.group
    points = []
    for datum in sd.data:
        entry = {"coweight": _vector_dict(datum.coweight)}
        if datum.lattice is not None:
            entry["lattice"] = [_lattice_coordinate(x) for x in datum.lattice]
        else:
            entry["z"] = [datum.point.real, datum.point.imag]
        if datum.label:
            entry["label"] = datum.label
        points.append(entry)

    group_dict = {
        "family": rs.cartan_type.label if isinstance(rs.cartan_type, SO4Type) else rs.cartan_type.family,
        "rank": rs.rank,
        "lattice": group.lattice_model.value,
        "center_dim": group.center_dim,
    }
    if group.generators:
        group_dict["generators"] = [_vector_dict(g) for g in group.generators]
    if group.name:
        group_dict["name"] = group.name
    return {
        "schema": SCHEMA_VERSION,
        "group": group_dict,
        "tau": [sd.tau.real, sd.tau.imag],
        "points": points,
    }


def save_singularity_data(sd, path):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(dump_singularity_data(sd), f, indent=2)
    logger.info(f"Wrote singularity data to {path}")
