"""Explicit harmonic decompositions of elasticity tensors.

Two equivariant decompositions ``C -> (alpha, beta, h_a, h_b, H)`` are
provided:

``CGHD``
    organized by the deviatoric / spherical blocks of stress-strain space,
    ``C = alpha J + beta K + h_a ⊠ 1 + (h_b ⊗ 1 + 1 ⊗ h_b)/3 + H``.
``SWHD``
    organized by the totally symmetric / asymmetric split of ``C``,
    ``C = alpha 1⊗(2,2)1 + beta 1⊗(4)1 + h_a⊗(2,2)1 + h_b⊗(4)1 + H``.

In both, ``h_a`` and ``h_b`` are deviatoric and ``H`` is harmonic (totally
symmetric and traceless).  ``H`` is the same in both schemes.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ValidationError
from .tensor import (
    ID2,
    J4,
    K4,
    ElasticityTensor,
    as_array4,
    box_product,
    components_to_kelvin,
    ddot,
    deviatoric,
    dyad,
    full_trace,
    quadruple,
    rotate,
    sym4_product,
    sym22_product,
    trace12,
    trace13,
)

SCHEMES = ("CGHD", "SWHD")

#: Relative size of roundoff tolerated in an extracted harmonic tensor.
HARMONIC_SCRUB_TOL = 1e-12

_ONE4 = sym4_product(ID2, ID2)
_ONE22 = sym22_product(ID2, ID2)


def normalize_scheme(scheme):
    """Canonical upper-case scheme tag; raises on unknown names."""
    s = str(scheme).upper()
    if s not in SCHEMES:
        raise ValidationError(f"unknown decomposition scheme {scheme!r}")
    return s


def total_symmetrization(t):
    """Average of a fourth-order array over all 24 index permutations."""
    t = as_array4(t)
    return sum(t.transpose(p) for p in itertools.permutations(range(4))) / 24.0


def harmonic_part(s):
    """Harmonic (traceless) part of a totally symmetric fourth-order tensor."""
    s = as_array4(s)
    beta = np.einsum("iijj->", s) / 5.0
    hb = 6.0 / 7.0 * (trace12(s) - 5.0 / 3.0 * beta * ID2)
    return s - sym4_product(hb, ID2) - beta * _ONE4


@dataclass(frozen=True, eq=False)
class HarmonicTriplet:
    """Harmonic coordinates of an elasticity tensor.

    Attributes
    ----------
    alpha, beta : float
        Isotropic invariants.
    h_a, h_b : (3, 3) ndarray
        Deviatoric second-order covariants.
    H : (3, 3, 3, 3) ndarray
        Harmonic fourth-order covariant.
    scheme : str
        ``"CGHD"`` or ``"SWHD"``.
    """

    alpha: float
    beta: float
    h_a: np.ndarray
    h_b: np.ndarray
    H: np.ndarray
    scheme: str

    def __post_init__(self):
        object.__setattr__(self, "scheme", normalize_scheme(self.scheme))
        for name in ("h_a", "h_b", "H"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.h_a.shape != (3, 3) or self.h_b.shape != (3, 3):
            raise ValidationError("h_a and h_b must be 3x3")
        if self.H.shape != (3, 3, 3, 3):
            raise ValidationError("H must be a (3, 3, 3, 3) array")

    def covariants(self):
        """``(h_a, h_b, H)``."""
        return self.h_a, self.h_b, self.H

    def rotated(self, g):
        """Triplet of the rotated tensor (covariants rotated, invariants kept)."""
        return HarmonicTriplet(self.alpha, self.beta, rotate(self.h_a, g),
                               rotate(self.h_b, g), rotate(self.H, g), self.scheme)

    def allclose(self, other, atol):
        """Entrywise comparison of all five coordinates at absolute ``atol``."""
        return (abs(self.alpha - other.alpha) <= atol
                and abs(self.beta - other.beta) <= atol
                and np.max(np.abs(self.h_a - other.h_a)) <= atol
                and np.max(np.abs(self.h_b - other.h_b)) <= atol
                and np.max(np.abs(self.H - other.H)) <= atol)


def split_sym_anti(c):
    """Totally symmetric part ``C_s`` and remainder ``C_a = C - C_s``.

    ``C_s,ijkl = (C_ijkl + C_ikjl + C_iljk) / 3``, which is the full
    symmetrization for tensors with the minor and major symmetries.
    """
    c = as_array4(c)
    cs = (c + c.transpose(0, 2, 1, 3) + c.transpose(0, 2, 3, 1)) / 3.0
    return cs, c - cs


def _scrub_harmonic(h, scale):
    """Project ``h`` onto harmonic tensors, refusing large corrections."""
    clean = harmonic_part(total_symmetrization(h))
    dev = np.linalg.norm(h - clean)
    if dev > HARMONIC_SCRUB_TOL * max(scale, np.linalg.norm(h)):
        raise NumericalError(f"extracted H is not harmonic (deviation {dev:.3e})")
    return clean


def decompose(c, scheme="CGHD"):
    """Harmonic decomposition of an elasticity tensor.

    Parameters
    ----------
    c : ElasticityTensor or array_like
        Tensor to decompose (Kelvin matrix or component array accepted).
    scheme : {"CGHD", "SWHD"}

    Returns
    -------
    HarmonicTriplet
    """
    scheme = normalize_scheme(scheme)
    c = as_array4(c)
    scale = float(np.linalg.norm(c))
    if scheme == "CGHD":
        cdd = ddot(ddot(J4, c), J4)
        alpha = quadruple(cdd, J4) / 5.0
        beta = ddot(ID2, ddot(c, ID2)) / 3.0
        h_a = deviatoric(trace13(cdd))
        h_b = deviatoric(ddot(c, ID2))
        big_h = cdd - box_product(h_a, ID2) - alpha * J4
    else:
        cs, ca = split_sym_anti(c)
        alpha = full_trace(ca) / 4.0
        beta = full_trace(cs) / 5.0
        h_a = deviatoric(3.0 * (trace12(ca) - 4.0 / 3.0 * alpha * ID2))
        h_b = deviatoric(6.0 / 7.0 * (trace12(cs) - 5.0 / 3.0 * beta * ID2))
        big_h = cs - sym4_product(h_b, ID2) - beta * _ONE4
    return HarmonicTriplet(float(alpha), float(beta), h_a, h_b,
                           _scrub_harmonic(big_h, scale), scheme)


def reconstruct_array(t):
    """Component array ``(3, 3, 3, 3)`` of the tensor with harmonic coordinates ``t``."""
    if t.scheme == "CGHD":
        return (t.alpha * J4 + t.beta * K4 + box_product(t.h_a, ID2)
                + (dyad(t.h_b, ID2) + dyad(ID2, t.h_b)) / 3.0 + t.H)
    return (t.alpha * _ONE22 + t.beta * _ONE4 + sym22_product(t.h_a, ID2)
            + sym4_product(t.h_b, ID2) + t.H)


def reconstruct(t):
    """Elasticity tensor with harmonic coordinates ``t``."""
    return ElasticityTensor(components_to_kelvin(reconstruct_array(t)))


def convert_scheme(t, scheme):
    """Re-express a triplet in another scheme."""
    return decompose(reconstruct_array(t), scheme)
