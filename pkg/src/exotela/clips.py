"""Clips products of symmetry classes and exotic structure enumeration.

The clips product ``[H1] ⊙ [H2]`` is the set of conjugacy classes of the
intersections ``H1 ∩ g H2 g^T`` over all rotations ``g``.  The table for
closed subgroups of SO(3) is stored as data together with its gcd arithmetic.
"""

from dataclasses import dataclass
from math import gcd

from .errors import ValidationError
from .labels import (
    D2,
    D3,
    D4,
    ELASTICITY_CLASSES,
    O2,
    OCTA,
    SO2,
    SO3,
    TETRA,
    TRICLINIC,
    Z2,
    ClassLabel,
    is_strict_subclass,
    is_subclass,
    make_label,
    parse_label,
)

_Z3 = ClassLabel("Z", 3)
_Z4 = ClassLabel("Z", 4)
_Z5 = ClassLabel("Z", 5)
_D5 = ClassLabel("D", 5)

# row order of the clips table; the table is lower triangular in this order
_TABLE_ORDER = {"Z": 0, "D": 1, "T": 2, "O": 3, "I": 4, "SO2": 5, "O2": 6}


class ClassSet(frozenset):
    """Deduplicated set of class labels, iterated in poset-compatible order."""

    def __new__(cls, labels=()):
        return super().__new__(cls, (parse_label(x) for x in labels))

    def __iter__(self):
        return iter(sorted(frozenset.__iter__(self), key=lambda x: x.sort_key))

    def __or__(self, other):
        return ClassSet(frozenset.__or__(self, other))

    def __str__(self):
        return "{" + ", ".join(str(x) for x in self) + "}"

    def __repr__(self):
        return f"ClassSet({self})"


def _z(n):
    return make_label("Z", n)


def _d(n):
    return make_label("D", n)


def _cell(a, b):
    """Table cell for row class ``a`` (parameter m) and column class ``b``
    (parameter n), with ``a`` not before ``b`` in the table order."""
    m, n = a.n, b.n
    ka, kb = a.kind, b.kind
    d2 = gcd(n, 2)
    d3 = gcd(n, 3)
    d5 = gcd(n, 5)
    d4 = 4 if n % 4 == 0 else 1
    one = TRICLINIC
    if kb == "Z":
        return {
            "Z": [one, _z(gcd(m, n))],
            "D": [one, _z(gcd(m, n)), _z(d2)],
            "T": [one, _z(d2), _z(d3)],
            "O": [one, _z(d2), _z(d3), _z(d4)],
            "I": [one, _z(d2), _z(d3), _z(d5)],
            "SO2": [one, _z(n)],
            "O2": [one, _z(d2), _z(n)],
        }[ka]
    if kb == "D":
        d = gcd(m, n)
        dz = 2 if (m % 2 == 0 and n % 2 == 0) else 1
        return {
            "D": [one, Z2, _z(d), _d(dz), _d(d)],
            "T": [one, Z2, _z(d3), _d(d2)],
            "O": [one, Z2, _z(d3), _z(d4), _d(d2), _d(d3), _d(d4)],
            "I": [one, Z2, _z(d3), _z(d5), _d(d2), _d(d3), _d(d5)],
            "SO2": [one, Z2, _z(n)],
            "O2": [one, Z2, _d(3 - d2), _d(n)],
        }[ka]
    return {
        ("T", "T"): [one, Z2, _Z3, D2, TETRA],
        ("O", "T"): [one, Z2, _Z3, D2, TETRA],
        ("O", "O"): [one, Z2, _Z3, _Z4, D2, D3, D4, OCTA],
        ("I", "T"): [one, Z2, _Z3, TETRA],
        ("I", "O"): [one, Z2, _Z3, D3, TETRA],
        ("I", "I"): [one, Z2, _Z3, _Z5, D3, _D5, ClassLabel("I")],
        ("SO2", "T"): [one, Z2, _Z3],
        ("SO2", "O"): [one, Z2, _Z3, _Z4],
        ("SO2", "I"): [one, Z2, _Z3, _Z5],
        ("SO2", "SO2"): [one, SO2],
        ("O2", "T"): [one, Z2, _Z3, D2],
        ("O2", "O"): [one, Z2, D2, D3, D4],
        ("O2", "I"): [one, Z2, D2, D3, _D5],
        ("O2", "SO2"): [one, Z2, SO2],
        ("O2", "O2"): [Z2, D2, O2],
    }[(ka, kb)]


def clips_pair(a, b):
    """Clips product ``[a] ⊙ [b]`` of two symmetry classes.

    Examples
    --------
    >>> str(clips_pair("O(2)", "O(2)"))
    '{Z2, D2, O(2)}'
    """
    a, b = parse_label(a), parse_label(b)
    if a.kind == "1" or b.kind == "1":
        return ClassSet([TRICLINIC])
    if a.kind == "SO3":
        return ClassSet([b])
    if b.kind == "SO3":
        return ClassSet([a])
    if _TABLE_ORDER[a.kind] < _TABLE_ORDER[b.kind]:
        a, b = b, a
    return ClassSet(_cell(a, b))


def clips_sets(f1, f2):
    """Union of ``clips_pair`` over all members of two families."""
    out = ClassSet()
    for a in ClassSet(f1):
        for b in ClassSet(f2):
            out = out | clips_pair(a, b)
    return out


def restricted_clips(f1, f2, g):
    """Union of ``clips_pair(h1, h2)`` over members strictly above ``g``."""
    g = parse_label(g)
    if g not in ELASTICITY_CLASSES:
        raise ValidationError(f"restriction class {g} is outside the elasticity poset")
    keep1 = [h for h in ClassSet(f1) if is_strict_subclass(g, h)]
    keep2 = [h for h in ClassSet(f2) if is_strict_subclass(g, h)]
    return clips_sets(keep1, keep2)


#: Symmetry classes of the harmonic spaces of order 0, 2 and 4.
HARMONIC_CLASSES = {
    0: ClassSet([SO3]),
    2: ClassSet([D2, O2, SO3]),
    4: ClassSet([TRICLINIC, Z2, D2, D3, D4, O2, OCTA, SO3]),
}


def derive_space_classes(structure):
    """Symmetry classes of a direct sum of harmonic spaces.

    Parameters
    ----------
    structure : iterable of (order, multiplicity)
        For instance ``[(0, 2), (2, 2), (4, 1)]`` for elasticity tensors.
    """
    result = ClassSet([SO3])
    for order, mult in structure:
        if order not in HARMONIC_CLASSES:
            raise ValidationError(f"harmonic order {order} is not supported")
        if mult < 0:
            raise ValidationError("multiplicity must be nonnegative")
        for _ in range(mult):
            result = clips_sets(result, HARMONIC_CLASSES[order])
    return result


# ---------------------------------------------------------------------------
# Structures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StructureSignature:
    """Classes of the three covariants, the three pairs and the triplet."""

    h_a: ClassLabel
    h_b: ClassLabel
    H: ClassLabel
    ab: ClassLabel
    aH: ClassLabel
    bH: ClassLabel
    overall: ClassLabel

    @classmethod
    def from_labels(cls, labels):
        labels = [parse_label(x) for x in labels]
        if len(labels) != 7:
            raise ValidationError("a structure has exactly seven entries")
        return cls(*labels)

    @property
    def singletons(self):
        return (self.h_a, self.h_b, self.H)

    @property
    def pairs(self):
        return (self.ab, self.aH, self.bH)

    @property
    def six(self):
        """The six singleton and pair entries."""
        return self.singletons + self.pairs

    def as_tuple(self):
        return self.six + (self.overall,)

    def __str__(self):
        return "(" + ", ".join(str(x) for x in self.as_tuple()) + ")"


def _minimal_above(candidates, g):
    """Unique minimal member of ``candidates`` lying above ``g``, or None."""
    above = [c for c in candidates if is_subclass(g, c)]
    minimal = [c for c in above if not any(is_strict_subclass(o, c) for o in above)]
    if len(minimal) != 1:
        return None
    return minimal[0]


ENUMERABLE = (D3, D4, O2, OCTA, SO3)


def _raise_key(sig, generic):
    raised = tuple(i for i in range(3) if sig.six[i] != generic.six[i])
    raised_pairs = tuple(i for i in range(3, 6) if sig.six[i] != generic.six[i])
    # single covariant raises first, then raises of a pair of covariants
    return (len(raised), raised if len(raised) == 1 else raised_pairs, raised)


def enumerate_structures(g):
    """Admissible geometric structures of an elasticity tensor of class ``g``.

    Candidates are the choices of covariant classes above ``g``; each pair
    entry is the least class above ``g`` in the clips product of its two
    singletons, and the candidate is kept when the triplet class equals ``g``.

    Returns
    -------
    list of StructureSignature
        The generic structure first, then the exotic ones.
    """
    g = parse_label(g)
    if g not in ENUMERABLE:
        raise ValidationError(
            f"structure enumeration is available for classes above D2, not {g}")
    found = []
    for sa in HARMONIC_CLASSES[2]:
        for sb in HARMONIC_CLASSES[2]:
            for sh in HARMONIC_CLASSES[4]:
                if not all(is_subclass(g, s) for s in (sa, sb, sh)):
                    continue
                ab = _minimal_above(clips_pair(sa, sb), g)
                ah = _minimal_above(clips_pair(sa, sh), g)
                bh = _minimal_above(clips_pair(sb, sh), g)
                if None in (ab, ah, bh):
                    continue
                overall = _minimal_above(clips_pair(ab, sh), g)
                if overall == g:
                    found.append(StructureSignature(sa, sb, sh, ab, ah, bh, g))
    generic = [s for s in found
               if not any(o is not s and all(is_subclass(x, y) for x, y in zip(o.six, s.six))
                          for o in found)]
    if len(generic) != 1:
        raise RuntimeError(f"no unique generic structure for {g}")
    generic = generic[0]
    exotic = sorted((s for s in found if s is not generic),
                    key=lambda s: _raise_key(s, generic))
    return [generic] + exotic
