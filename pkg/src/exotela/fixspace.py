"""Orthonormal coordinates on harmonic spaces and their fixed subspaces.

``H2`` (dimension 5) is represented by Kelvin 6-vectors and ``H4``
(dimension 9) by flattened Kelvin 6x6 matrices; both embeddings are
isometric, so orthogonal projections computed here are orthogonal in the
tensor inner product.
"""

from functools import lru_cache

import numpy as np

from .groups import ClassedGroup
from .harmonic import harmonic_part
from .labels import ClassLabel
from .tensor import (
    ID2,
    components_to_kelvin,
    kelvin_rotation,
    kelvin_to_components,
    kelvin_to_sym2,
    sym2_to_kelvin,
    sym4_product,
)

#: Continuous groups are averaged over a dihedral group of this order; it fixes
#: exactly the same harmonic tensors of order <= 4.
_AVERAGING_ORDER = 12


def _orthonormal_range(m, rtol=1e-10):
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    return u[:, s > rtol * max(s[0], 1.0)] if s.size and s[0] > 0 else u[:, :0]


@lru_cache(maxsize=None)
def h2_basis():
    """(6, 5) array: orthonormal Kelvin vectors spanning deviatoric tensors."""
    vecs = []
    for i in range(3):
        for j in range(i, 3):
            e = np.zeros((3, 3))
            e[i, j] = e[j, i] = 1.0
            e -= np.trace(e) / 3.0 * ID2
            vecs.append(sym2_to_kelvin(e))
    return _orthonormal_range(np.array(vecs).T)


@lru_cache(maxsize=None)
def h4_basis():
    """(36, 9) array: orthonormal flattened Kelvin matrices spanning H4."""
    vecs = []
    for i in range(3):
        for j in range(i, 3):
            for k in range(3):
                for m in range(k, 3):
                    a = np.zeros((3, 3))
                    b = np.zeros((3, 3))
                    a[i, j] = a[j, i] = 1.0
                    b[k, m] = b[m, k] = 1.0
                    h = harmonic_part(sym4_product(a, b))
                    vecs.append(components_to_kelvin(h).ravel())
    return _orthonormal_range(np.array(vecs).T)


def h2_to_coords(h):
    return h2_basis().T @ sym2_to_kelvin(h)


def coords_to_h2(x):
    return kelvin_to_sym2(h2_basis() @ x)


def h4_to_coords(H):
    return h4_basis().T @ components_to_kelvin(H).ravel()


def coords_to_h4(x):
    return kelvin_to_components((h4_basis() @ x).reshape(6, 6))


def _averaging_elements(group):
    label = group.label
    if label.kind == "SO3":
        return None
    if label.kind in ("O2", "SO2"):
        kind = "D" if label.kind == "O2" else "Z"
        return ClassedGroup(ClassLabel(kind, _AVERAGING_ORDER), group.frame).elements
    return group.elements


def fixed_projector(group, order):
    """Orthogonal projector onto ``Fix(group)`` in H2 or H4 coordinates.

    Parameters
    ----------
    group : ClassedGroup
    order : {2, 4}

    Returns
    -------
    (5, 5) or (9, 9) ndarray
    """
    basis = h2_basis() if order == 2 else h4_basis()
    dim = basis.shape[1]
    elements = _averaging_elements(group)
    if elements is None:
        return np.zeros((dim, dim))
    q = kelvin_rotation(np.array(elements))
    if order == 2:
        rho = np.einsum("ai,gab,bj->ij", basis, q, basis) / len(elements)
    else:
        mats = basis.T.reshape(dim, 6, 6)
        moved = q[:, None] @ mats[None] @ np.swapaxes(q, -1, -2)[:, None]
        rho = basis.T @ moved.reshape(len(elements), dim, 36).mean(axis=0).T
    return 0.5 * (rho + rho.T)


def fixed_basis(group, order):
    """Orthonormal basis (columns) of ``Fix(group)`` in H2 or H4 coordinates."""
    key = (group.label, np.round(group.frame, 12).tobytes(), order)
    if key not in _BASIS_CACHE:
        basis = _orthonormal_range(fixed_projector(group, order), rtol=1e-8)
        basis.setflags(write=False)
        _BASIS_CACHE[key] = basis
    return _BASIS_CACHE[key]


_BASIS_CACHE = {}
