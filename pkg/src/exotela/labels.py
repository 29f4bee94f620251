"""Conjugacy classes of closed subgroups of SO(3).

A class is written ``[1], [Zn], [Dn], [T], [O], [I], [SO(2)], [O(2)], [SO(3)]``.
:class:`ClassLabel` stores the tag and, for ``Zn`` and ``Dn``, the integer
parameter.  The subgroup partial order is exposed by :func:`is_subclass`.
"""

import re
from dataclasses import dataclass

from .errors import ValidationError

KINDS = ("1", "Z", "D", "T", "O", "I", "SO2", "O2", "SO3")
_RANK = {k: i for i, k in enumerate(KINDS)}
_TEXT = {"1": "1", "T": "T", "O": "O", "I": "I",
         "SO2": "SO(2)", "O2": "O(2)", "SO3": "SO(3)"}


@dataclass(frozen=True, order=False)
class ClassLabel:
    """Symmetry class ``(kind, n)``.

    ``n`` is the order parameter of ``Z`` and ``D`` (at least 2) and 0 for every
    other kind.  Use :func:`make_label` for the conventions ``Z1 = 1`` and
    ``D1 = Z2``.
    """

    kind: str
    n: int = 0

    def __post_init__(self):
        if self.kind not in _RANK:
            raise ValidationError(f"unknown class kind {self.kind!r}")
        if self.kind in ("Z", "D"):
            if int(self.n) != self.n or self.n < 2:
                raise ValidationError(f"{self.kind}n needs n >= 2, got {self.n}")
        elif self.n != 0:
            raise ValidationError(f"class {self.kind} takes no parameter")

    @property
    def sort_key(self):
        return (_RANK[self.kind], self.n)

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    @property
    def is_finite(self):
        return self.kind not in ("SO2", "O2", "SO3")

    @property
    def order(self):
        """Group order, ``None`` for continuous groups."""
        return {"1": 1, "Z": self.n, "D": 2 * self.n, "T": 12, "O": 24,
                "I": 60}.get(self.kind, self.n if self.kind in "ZD" else None)

    def __str__(self):
        if self.kind in ("Z", "D"):
            return f"{self.kind}{self.n}"
        return _TEXT[self.kind]

    def __repr__(self):
        return f"ClassLabel({self})"


def make_label(kind, n=0):
    """Label with the collapse rules ``Z1 -> 1`` and ``D1 -> Z2``."""
    if kind in ("Z", "D") and n == 1:
        return ClassLabel("1") if kind == "Z" else ClassLabel("Z", 2)
    return ClassLabel(kind, n)


TRICLINIC = ClassLabel("1")
Z2 = ClassLabel("Z", 2)
D2 = ClassLabel("D", 2)
D3 = ClassLabel("D", 3)
D4 = ClassLabel("D", 4)
TETRA = ClassLabel("T")
OCTA = ClassLabel("O")
ICOSA = ClassLabel("I")
SO2 = ClassLabel("SO2")
O2 = ClassLabel("O2")
SO3 = ClassLabel("SO3")

#: The eight symmetry classes of elasticity tensors, in increasing order.
ELASTICITY_CLASSES = (TRICLINIC, Z2, D2, D3, D4, O2, OCTA, SO3)

#: Covering relations of the partial order on the eight elasticity classes.
ELASTICITY_HASSE = (
    (TRICLINIC, Z2), (Z2, D2), (Z2, D3), (D2, D4), (D3, O2),
    (D3, OCTA), (D4, O2), (D4, OCTA), (O2, SO3), (OCTA, SO3),
)

_PATTERN = re.compile(
    r"^\[?\s*(?:(?P<zd>[ZD])_?\{?(?P<n>\d+)\}?|(?P<so>S?O)\s*\(?\s*(?P<d>[23])\s*\)?"
    r"|(?P<one>1|triclinic)|(?P<single>[TOI]))\s*\]?$",
    re.IGNORECASE,
)


def parse_label(text):
    """Parse an ASCII class label such as ``"D4"``, ``"O(2)"`` or ``"[SO(3)]"``."""
    if isinstance(text, ClassLabel):
        return text
    m = _PATTERN.match(str(text).strip())
    if not m:
        raise ValidationError(f"cannot parse class label {text!r}")
    if m.group("zd"):
        n = int(m.group("n"))
        if n < 1:
            raise ValidationError(f"invalid parameter in {text!r}")
        return make_label(m.group("zd").upper(), n)
    if m.group("so"):
        return ClassLabel(m.group("so").upper() + m.group("d"))
    if m.group("one"):
        return TRICLINIC
    return ClassLabel(m.group("single").upper())


_CYCLIC_IN = {"T": (2, 3), "O": (2, 3, 4), "I": (2, 3, 5)}


def is_subclass(a, b):
    """True if some group of class ``a`` is a subgroup of some group of class ``b``."""
    a, b = parse_label(a), parse_label(b)
    if a == b or a.kind == "1" or b.kind == "SO3":
        return True
    if a.kind == "SO3":
        return False
    if b.kind == "1":
        return False
    ka, kb = a.kind, b.kind
    if ka == "Z":
        if kb == "Z":
            return b.n % a.n == 0
        if kb == "D":
            return b.n % a.n == 0 or a.n == 2
        if kb in _CYCLIC_IN:
            return a.n in _CYCLIC_IN[kb]
        return True  # SO(2), O(2)
    if ka == "D":
        if kb == "D":
            return b.n % a.n == 0
        if kb == "T":
            return a.n == 2
        if kb in ("O", "I"):
            return a.n in _CYCLIC_IN[kb]
        return kb == "O2"
    if ka == "T":
        return kb in ("O", "I")
    if ka == "SO2":
        return kb == "O2"
    return False


def is_strict_subclass(a, b):
    """``a`` strictly below ``b`` in the partial order."""
    return parse_label(a) != parse_label(b) and is_subclass(a, b)


def comparable(a, b):
    return is_subclass(a, b) or is_subclass(b, a)
