"""Tensor documents and report serialization.

A tensor document is a JSON object::

    {"version": 1, "role": "stiffness", "kelvin": [[...6 rows...]],
     "description": "optional text"}

with exactly one payload among ``kelvin`` (6x6 Kelvin matrix), ``voigt``
(6x6 Voigt matrix, converted on load) and ``components`` (a map such as
``{"C_1111": 100.0, "C_2323": 40.0}``; missing components are zero and every
given component also sets its symmetric images).
"""

import csv
import io
import json
import math
import re
from dataclasses import dataclass, fields, is_dataclass

import numpy as np

from .catalog import ExoticCatalogEntry
from .covariants import GeometricStructure
from .errors import ValidationError
from .groups import ClassedGroup
from .harmonic import HarmonicTriplet
from .labels import ClassLabel
from .tensor import ElasticityTensor, components_to_kelvin

FORMAT_VERSION = 1

#: Largest accepted asymmetry, relative to the largest entry.
ASYMMETRY_TOL = 1e-12

ROLES = ("stiffness", "compliance")
PAYLOADS = ("kelvin", "voigt", "components")
_KEYS = {"version", "role", "description"} | set(PAYLOADS)
_COMPONENT = re.compile(r"^[CS]_?([1-3])([1-3])([1-3])([1-3])$")


@dataclass(frozen=True)
class TensorDocument:
    """A parsed tensor document.

    Attributes
    ----------
    tensor : ElasticityTensor
    role : {"stiffness", "compliance"}
    description : str
    version : int
    """

    tensor: ElasticityTensor
    role: str
    description: str = ""
    version: int = FORMAT_VERSION

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValidationError(f"role must be one of {ROLES}, got {self.role!r}")


def _matrix(value, name):
    try:
        m = np.array(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{name} payload is not a numeric matrix") from exc
    if m.shape != (6, 6):
        raise ValidationError(f"{name} payload must be 6x6, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError(f"{name} payload contains non-finite entries")
    return m


def _check_symmetric(m, name):
    diff = np.abs(m - m.T)
    scale = max(float(np.max(np.abs(m))), np.finfo(float).tiny)
    i, j = np.unravel_index(int(np.argmax(diff)), diff.shape)
    if diff[i, j] > ASYMMETRY_TOL * scale:
        i, j = sorted((int(i), int(j)))
        raise ValidationError(
            f"{name} payload is not symmetric: entries ({i + 1},{j + 1}) = {float(m[i, j])!r} "
            f"and ({j + 1},{i + 1}) = {float(m[j, i])!r} differ")
    return 0.5 * (m + m.T)


def _components(value):
    if not isinstance(value, dict) or not value:
        raise ValidationError("components payload must be a non-empty object")
    c = np.zeros((3, 3, 3, 3))
    seen = np.zeros((3, 3, 3, 3), dtype=bool)
    origin = {}
    for key, raw in value.items():
        m = _COMPONENT.match(str(key).strip())
        if not m:
            raise ValidationError(f"bad component name {key!r}; expected e.g. C_1123")
        try:
            x = float(raw)
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"component {key} is not a number") from exc
        if not math.isfinite(x):
            raise ValidationError(f"component {key} is not finite")
        i, j, k, l = (int(d) - 1 for d in m.groups())
        for idx in {(i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k),
                    (k, l, i, j), (l, k, i, j), (k, l, j, i), (l, k, j, i)}:
            if seen[idx] and abs(c[idx] - x) > ASYMMETRY_TOL * max(abs(x), abs(c[idx])):
                raise ValidationError(
                    f"components {origin[idx]} and {key} violate the index symmetries")
            c[idx], seen[idx] = x, True
            origin[idx] = key
    return ElasticityTensor(components_to_kelvin(c))


def tensor_from_payload(data):
    """Build a :class:`TensorDocument` from an already decoded JSON object."""
    if not isinstance(data, dict):
        raise ValidationError("a tensor document must be a JSON object")
    unknown = sorted(set(data) - _KEYS)
    if unknown:
        raise ValidationError(f"unknown field(s) {unknown}; allowed: {sorted(_KEYS)}")
    version = data.get("version")
    if version != FORMAT_VERSION:
        raise ValidationError(f"unsupported or missing version {version!r} "
                              f"(expected {FORMAT_VERSION})")
    role = data.get("role")
    if role not in ROLES:
        raise ValidationError(f"role must be one of {ROLES}, got {role!r}")
    present = [p for p in PAYLOADS if p in data]
    if len(present) != 1:
        raise ValidationError(f"exactly one payload among {PAYLOADS} is required, "
                              f"got {present or 'none'}")
    description = data.get("description", "")
    if not isinstance(description, str):
        raise ValidationError("description must be a string")
    kind = present[0]
    if kind == "components":
        tensor = _components(data[kind])
    else:
        m = _check_symmetric(_matrix(data[kind], kind), kind)
        tensor = (ElasticityTensor(m) if kind == "kelvin"
                  else ElasticityTensor.from_voigt(m, role))
    return TensorDocument(tensor, role, description, version)


def parse_tensor(text):
    """Parse a tensor document from JSON text.

    Raises
    ------
    ValidationError
        On malformed JSON, unknown fields, a missing role or payload, or an
        asymmetric matrix (the message names the worst pair of entries).
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from exc
    return tensor_from_payload(data)


def tensor_payload(doc):
    """JSON-ready object of a tensor document (Kelvin payload)."""
    out = {"version": doc.version, "role": doc.role,
           "kelvin": doc.tensor.kelvin.tolist()}
    if doc.description:
        out["description"] = doc.description
    return out


def dump_tensor(doc):
    """JSON text of a tensor document; floats use the shortest round-trip form."""
    return json.dumps(tensor_payload(doc), indent=2)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

def to_jsonable(obj):
    """Convert library objects into JSON-compatible values.

    Arrays become nested lists, class labels and catalog entries their text
    labels, elasticity tensors their Kelvin matrices and dataclasses
    dictionaries of their fields.
    """
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, ClassLabel):
        return str(obj)
    if isinstance(obj, ElasticityTensor):
        return obj.kelvin.tolist()
    if isinstance(obj, ExoticCatalogEntry):
        return {"label": obj.label, "material": obj.material,
                "signature": [str(x) for x in obj.signature.as_tuple()]}
    if isinstance(obj, ClassedGroup):
        out = {"class": str(obj.label)}
        if obj.label.kind not in ("1", "SO3"):
            out["frame"] = obj.frame.tolist()
        return out
    if isinstance(obj, HarmonicTriplet):
        return {"scheme": obj.scheme, "alpha": float(obj.alpha), "beta": float(obj.beta),
                "h_a": obj.h_a.tolist(), "h_b": obj.h_b.tolist(),
                "H": components_to_kelvin(obj.H).tolist()}
    if isinstance(obj, GeometricStructure):
        names = ("h_a", "h_b", "H", "ab", "aH", "bH", "overall")
        return {"signature": [str(x) for x in obj.labels],
                "groups": dict(zip(names, (to_jsonable(g) for g in obj.groups)))}
    if isinstance(obj, BaseException):
        return str(obj)
    if is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, frozenset, set)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(x) for x in items]
    return str(obj)


def dump_report(report):
    """JSON text of a report; lossless for every float it contains."""
    return json.dumps(to_jsonable(report), indent=2, allow_nan=False)


def parse_report(text):
    return json.loads(text)


def _flatten(prefix, value, rows):
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, rows)
    elif isinstance(value, list) and value and isinstance(value[0], (list, dict)):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, rows)
    elif isinstance(value, list):
        rows.append((prefix, " ".join(repr(x) if isinstance(x, float) else str(x)
                                      for x in value)))
    else:
        rows.append((prefix, repr(value) if isinstance(value, float) else value))


def to_csv(header, rows):
    """CSV text with ``\\n`` line endings and shortest round-trip floats."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(x) if isinstance(x, float) else x for x in row])
    return buf.getvalue()


def report_to_csv(report):
    """Two-column ``key,value`` CSV of a (nested) report."""
    rows = []
    _flatten("", to_jsonable(report), rows)
    return to_csv(("key", "value"), rows)
