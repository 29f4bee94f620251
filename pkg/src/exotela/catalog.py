"""Catalog of generic and exotic geometric structures.

The catalog holds the generic structure of each of the eight elasticity
classes and the 18 exotic structures of the classes above orthotropy.  Three
exotic transversely isotropic entries carry a material name, which is tied to
the tensor and scheme on which the vanishing conditions are stated:

* ``UTI``: ``h_b = 0`` for the CGHD of the stiffness,
* ``IDTI``: ``h_a = H = 0`` for the CGHD of the stiffness,
* ``IYTI``: ``h_b = H = 0`` for the SWHD of the compliance.
"""

import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .clips import ENUMERABLE, StructureSignature, enumerate_structures
from .errors import ValidationError
from .groups import ClassedGroup
from .labels import D2, D3, D4, O2, OCTA, SO3, TRICLINIC, Z2, parse_label

#: Material name -> (class, exotic index, role, scheme).
MATERIALS = {
    "UTI": (O2, 2, "stiffness", "CGHD"),
    "IDTI": (O2, 5, "stiffness", "CGHD"),
    "IYTI": (O2, 6, "compliance", "SWHD"),
}

#: Generic structures of the eight classes (six entries each).
GENERIC_ROWS = {
    SO3: (SO3, SO3, SO3, SO3, SO3, SO3),
    OCTA: (SO3, SO3, OCTA, SO3, OCTA, OCTA),
    O2: (O2, O2, O2, O2, O2, O2),
    D4: (O2, O2, D4, O2, D4, D4),
    D3: (O2, O2, D3, O2, D3, D3),
    D2: (D2, D2, D2, D2, D2, D2),
    Z2: (D2, D2, Z2, Z2, Z2, Z2),
    TRICLINIC: (D2, D2, TRICLINIC, TRICLINIC, TRICLINIC, TRICLINIC),
}

#: Shorthand names accepted by :func:`find_entry`.
ALIASES = {"TI": "O(2)^g", "CUBIC": "O^g", "ISOTROPIC": "SO(3)^g",
           "ISO": "SO(3)^g", "TETRAGONAL": "D4^g", "TRIGONAL": "D3^g",
           "ORTHOTROPIC": "D2^g", "MONOCLINIC": "Z2^g", "TRICLINIC": "1^g"}


@dataclass(frozen=True)
class ExoticCatalogEntry:
    """One geometric structure of the catalog.

    Attributes
    ----------
    signature : StructureSignature
    index : int
        0 for the generic structure, ``k >= 1`` for the k-th exotic one.
    material : str or None
        ``"UTI"``, ``"IDTI"`` or ``"IYTI"`` where applicable.
    role, scheme : str or None
        Tensor role and decomposition on which the material is defined.
    """

    signature: StructureSignature
    index: int
    material: str = None
    role: str = None
    scheme: str = None

    @property
    def overall(self):
        return self.signature.overall

    @property
    def generic(self):
        return self.index == 0

    @property
    def label(self):
        g = str(self.overall)
        return f"{g}^g" if self.generic else f"{g}^e_{self.index}"

    @property
    def high(self):
        """True for classes strictly above orthotropy."""
        return self.overall in ENUMERABLE

    def __str__(self):
        name = f" ({self.material})" if self.material else ""
        return f"{self.label}{name}"


@lru_cache(maxsize=None)
def catalog():
    """All 26 catalog entries: the structure table above orthotropy followed by
    the generic structures of the three lowest classes."""
    entries = []
    for g in (SO3, OCTA, O2, D4, D3):
        for k, sig in enumerate(enumerate_structures(g)):
            name = next((m for m, (cls, idx, _, _) in MATERIALS.items()
                         if cls == g and idx == k), None)
            role, scheme = (MATERIALS[name][2:] if name else (None, None))
            entries.append(ExoticCatalogEntry(sig, k, name, role, scheme))
    for g in (D2, Z2, TRICLINIC):
        entries.append(ExoticCatalogEntry(StructureSignature(*GENERIC_ROWS[g], g), 0))
    return tuple(entries)


_LABEL = re.compile(r"^\[?(?P<cls>[^\]\^]+?)\]?\s*\^\s*\{?(?P<kind>g|e)\}?(?:_?\{?(?P<k>\d+)\}?)?$",
                    re.IGNORECASE)


def find_entry(key):
    """Catalog entry from a label (``"O(2)^e_2"``, ``"D4^g"``, ``"D3"``), a
    material name or an alias such as ``"TI"`` or ``"cubic"``."""
    if isinstance(key, ExoticCatalogEntry):
        return key
    text = str(key).strip()
    upper = text.upper()
    if upper in MATERIALS:
        return next(e for e in catalog() if e.material == upper)
    text = ALIASES.get(upper, text)
    m = _LABEL.match(text)
    if m:
        cls = parse_label(m.group("cls"))
        index = 0 if m.group("kind").lower() == "g" else int(m.group("k") or -1)
    else:
        cls, index = parse_label(text), 0
    for e in catalog():
        if e.overall == cls and e.index == index:
            return e
    raise ValidationError(f"no catalog entry {key!r}")


def match_signature(sig):
    """Catalog entry with exactly the given structure, or None."""
    for e in catalog():
        if e.signature == sig:
            return e
    return None


# ---------------------------------------------------------------------------
# Group embeddings used to realize an entry in a reference frame
# ---------------------------------------------------------------------------

def _d3_cube_frame():
    r3 = np.array([1.0, 1.0, 1.0]) / np.sqrt(3.0)
    r1 = np.array([1.0, -1.0, 0.0]) / np.sqrt(2.0)
    return np.array([r1, np.cross(r3, r1), r3])


def covariant_groups(entry):
    """Groups ``(K_a, K_b, K_H)`` realizing an entry in the reference frame.

    A generic element of ``Fix(K_a) x Fix(K_b) x Fix(K_H)`` has the structure of
    ``entry``.  The class of ``entry`` is realized with principal axis ``e3``
    and secondary axis ``e1``; cubic covariants are placed so that their
    symmetry group contains that group.
    """
    entry = find_entry(entry)
    g = entry.overall
    base = ClassedGroup(g) if g != SO3 else ClassedGroup(SO3)
    out = []
    for s in entry.signature.singletons:
        if s == SO3:
            out.append(ClassedGroup(SO3))
        elif s == O2:
            out.append(ClassedGroup(O2))
        elif s == OCTA:
            out.append(ClassedGroup(OCTA, _d3_cube_frame() if g == D3 else None))
        else:
            out.append(base)
    return tuple(out)
