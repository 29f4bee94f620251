"""Kelvin normal forms of transversely isotropic, cubic and isotropic tensors.

All forms are written in their symmetry frame (axis ``e3`` for the
transversely isotropic family).  Shear parameters are Kelvin entries, i.e.
``k44 = 2 C_2323``.  The Kelvin entry ``(6, 6)`` of every transversely
isotropic form equals ``C_1111 - C_1122``.
"""

import numpy as np

from .errors import ValidationError
from .tensor import ElasticityTensor


def _ti_matrix(c11, c12, c13, c33, k44):
    k = np.zeros((6, 6))
    k[:3, :3] = [[c11, c12, c13], [c12, c11, c13], [c13, c13, c33]]
    k[3, 3] = k[4, 4] = k44
    k[5, 5] = c11 - c12
    return ElasticityTensor(k)


def transversely_isotropic(c11, c12, c13, c33, k44):
    """Generic transversely isotropic tensor (five parameters)."""
    return _ti_matrix(c11, c12, c13, c33, k44)


def uncoupled_ti(c11, c12, c13, k44):
    """Uncoupled transverse isotropy: ``C_3333 = C_1111 + C_1122 - C_1133``."""
    return _ti_matrix(c11, c12, c13, c11 + c12 - c13, k44)


def isotropic_deviatoric_ti(c11, c12, c13):
    """Transverse isotropy with isotropic deviatoric part.

    ``C_3333 = C_1111 - 2 C_1122 + 2 C_1133`` and all shear Kelvin entries equal
    ``C_1111 - C_1122``.
    """
    return _ti_matrix(c11, c12, c13, c11 - 2 * c12 + 2 * c13, c11 - c12)


def isotropic_young_ti(s11, s12, s13):
    """Compliance of transverse isotropy with isotropic Young's modulus.

    ``S_3333 = S_1111``, Kelvin shear entries ``S_1111 - S_1133`` (axial planes)
    and ``S_1111 - S_1122`` (transverse plane).
    """
    return _ti_matrix(s11, s12, s13, s11, s11 - s13)


def cubic(c11, c12, k44):
    """Cubic tensor in its cube frame, Kelvin shear entries ``k44``."""
    k = np.zeros((6, 6))
    k[:3, :3] = c12
    np.fill_diagonal(k[:3, :3], c11)
    k[3, 3] = k[4, 4] = k[5, 5] = k44
    return ElasticityTensor(k)


def isotropic_tensor(c11, c12):
    """Isotropic tensor from ``C_1111`` and ``C_1122``."""
    return cubic(c11, c12, c11 - c12)


def isotropic_lame(lam, mu):
    """Isotropic tensor ``lam 1⊗1 + 2 mu I``."""
    return isotropic_tensor(lam + 2 * mu, lam)


def isotropic_bulk_shear(bulk, shear):
    """Isotropic tensor ``3 bulk K + 2 shear J``."""
    return isotropic_lame(bulk - 2.0 * shear / 3.0, shear)


NORMAL_FORMS = {
    "TI": (transversely_isotropic, 5),
    "UTI": (uncoupled_ti, 4),
    "IDTI": (isotropic_deviatoric_ti, 3),
    "IYTI": (isotropic_young_ti, 3),
    "cubic": (cubic, 3),
    "isotropic": (isotropic_tensor, 2),
}


def normal_form(kind, *params):
    """Normal form by name.

    Parameters
    ----------
    kind : {"TI", "UTI", "IDTI", "IYTI", "cubic", "isotropic"}
        Case-insensitive.
    *params : float
        5, 4, 3, 3, 3 and 2 parameters respectively.  IYTI parameters are
        compliance entries and the result is a compliance tensor.
    """
    key = {k.lower(): k for k in NORMAL_FORMS}.get(str(kind).lower())
    if key is None:
        raise ValidationError(f"unknown normal form {kind!r}; choose from {sorted(NORMAL_FORMS)}")
    fn, count = NORMAL_FORMS[key]
    if len(params) != count:
        raise ValidationError(f"normal form {key} takes {count} parameters, got {len(params)}")
    values = [float(p) for p in params]
    if not all(np.isfinite(values)):
        raise ValidationError("normal form parameters must be finite")
    return fn(*values)
