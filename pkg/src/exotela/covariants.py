"""Symmetry classes of covariants and geometric structure of elasticity tensors.

Detection works on the harmonic covariants ``h_a, h_b`` (second order) and
``H`` (fourth order).  Every invariance or equality test is three-valued:
a relative residual below ``tol`` passes, one above ``AMBIGUITY_FACTOR * tol``
fails, and anything in between raises :class:`AmbiguousClassError` rather than
guessing.
"""

from dataclasses import dataclass

import numpy as np

from .clips import StructureSignature
from .errors import AmbiguousClassError, ValidationError
from .groups import ClassedGroup, frame_from_axes, intersect
from .harmonic import decompose
from .labels import D2, D3, D4, O2, OCTA, SO3, TRICLINIC, Z2
from .linalg import jacobi_eigh
from .tensor import (
    ID2,
    as_array4,
    components_to_kelvin,
    deviatoric,
    kelvin_rotation,
    kelvin_to_sym2,
    rotation,
)

#: Default relative tolerance for symmetry detection.
EPS_SYM = 1e-7

#: Residuals between ``tol`` and ``AMBIGUITY_FACTOR * tol`` are undecidable.
AMBIGUITY_FACTOR = 100.0

#: Rotation angles used to tell O(2) from finite groups about a known axis.
AXIAL_TEST_ANGLES = (1.0, np.pi / 2, 2 * np.pi / 3, np.pi / 5)


def _decide(value, tol, what, candidates):
    if value < tol:
        return True
    if value > AMBIGUITY_FACTOR * tol:
        return False
    raise AmbiguousClassError(
        f"{what}: relative residual {value:.3e} is within the ambiguity band "
        f"[{tol:.1e}, {AMBIGUITY_FACTOR * tol:.1e}]", candidates)


def _right_handed(v):
    v = np.array(v, dtype=float)
    if np.linalg.det(v) < 0:
        v[:, 0] = -v[:, 0]
    return v


def d2_covariant(H):
    """Second-order covariant ``d2 = tr13(H:H)`` and its deviatoric part.

    Returns
    -------
    d2, d2_dev : (3, 3) ndarray
    """
    h = as_array4(H)
    hh = (h.reshape(9, 9) @ h.reshape(9, 9)).reshape(3, 3, 3, 3)
    d2 = np.einsum("ijil->jl", hh)
    d2 = 0.5 * (d2 + d2.T)
    return d2, deviatoric(d2)


# ---------------------------------------------------------------------------
# Second order
# ---------------------------------------------------------------------------

def classify_h2(h, tol=EPS_SYM, scale=1.0):
    """Symmetry group of a deviatoric second-order tensor.

    Parameters
    ----------
    h : (3, 3) array_like
    tol : float
        Relative tolerance.
    scale : float
        Reference magnitude for the zero test ``||h|| < tol * scale``.

    Returns
    -------
    ClassedGroup
        ``SO(3)`` for zero, ``O(2)`` about the simple eigenvector for a
        double eigenvalue, otherwise ``D2`` in the eigenframe.
    """
    h = np.asarray(h, dtype=float)
    norm = np.linalg.norm(h)
    if norm == 0.0 or _decide(norm / scale, tol, "zero test of h", ("SO(3)", "D2/O(2)")):
        return ClassedGroup(SO3)
    w, v = jacobi_eigh(h)
    gaps = np.diff(w) / norm
    k = int(np.argmin(gaps))
    if _decide(gaps[k], tol, "eigenvalue gap of h", ("O(2)", "D2")):
        axis = v[:, 2] if k == 0 else v[:, 0]
        return ClassedGroup(O2, frame_from_axes(axis))
    return ClassedGroup(D2, _right_handed(v))


# ---------------------------------------------------------------------------
# Fourth order
# ---------------------------------------------------------------------------

def _residual(hk, g):
    q = kelvin_rotation(g)
    return np.linalg.norm(q @ hk @ q.T - hk) / np.linalg.norm(hk)


def _invariant(hk, g, tol, what, candidates):
    return _decide(_residual(hk, g), tol, what, candidates)


def _best_twofold_in_plane(hk, axis, n_samples=64):
    """Unit vector ``u`` orthogonal to ``axis`` minimizing the residual of a
    half-turn about ``u``, and that relative residual.

    The squared residual is a trigonometric polynomial of low degree in the
    in-plane angle; it is sampled, interpolated by FFT, minimized on a dense
    grid and polished by Newton steps.
    """
    frame = frame_from_axes(axis)
    e1, e2 = frame[:, 0], frame[:, 1]
    psi = 2 * np.pi * np.arange(n_samples) / n_samples

    def half_turns(phi):
        u = np.cos(phi)[:, None] * e1 + np.sin(phi)[:, None] * e2
        return 2.0 * u[:, :, None] * u[:, None, :] - ID2, u

    g, _ = half_turns(psi / 2)
    q = kelvin_rotation(g)
    diff = q @ hk @ np.swapaxes(q, -1, -2) - hk
    f = np.sum(diff * diff, axis=(-2, -1))
    coef = np.fft.rfft(f)[:12] / n_samples
    k = np.arange(len(coef))

    def series(x, order=0):
        e = np.exp(1j * np.multiply.outer(x, k)) * (1j * k) ** order
        val = np.real(e @ coef) * 2.0
        return val - (np.real(coef[0]) if order == 0 else 0.0)

    fine = np.linspace(0.0, 2 * np.pi, 2048, endpoint=False)
    x = fine[np.argmin(series(fine))]
    for _ in range(30):
        d1 = series(np.array([x]), 1)[0]
        d2 = series(np.array([x]), 2)[0]
        if d2 <= 0.0:
            break
        step = d1 / d2
        x -= step
        if abs(step) < 1e-15:
            break
    g, u = half_turns(np.array([x / 2]))
    return u[0], _residual(hk, g[0])


def _cubic_frame(hk):
    """Cube axes of a (presumed) cubic harmonic tensor from its Kelvin matrix.

    For a cubic harmonic tensor the Kelvin matrix has a two-dimensional
    eigenspace on deviatoric tensors whose elements are diagonal in the cube
    frame; a well separated element of that eigenspace yields the frame.
    """
    s = np.array([1.0, 1.0, 1.0, 0.0, 0.0, 0.0]) / np.sqrt(3.0)
    shift = 10.0 * np.linalg.norm(hk) + 1.0
    w, v = jacobi_eigh(hk + shift * np.outer(s, s))
    spherical = int(np.argmax(np.abs(v.T @ s)))
    keep = [i for i in range(6) if i != spherical]
    w, v = w[keep], v[:, keep]
    if (w[1] - w[0]) + (w[4] - w[2]) <= (w[2] - w[0]) + (w[4] - w[3]):
        pair = v[:, :2]
    else:
        pair = v[:, 3:]
    t1, t2 = kelvin_to_sym2(pair[:, 0]), kelvin_to_sym2(pair[:, 1])
    theta = np.linspace(0.0, np.pi, 12, endpoint=False)
    mix = np.cos(theta)[:, None, None] * t1 + np.sin(theta)[:, None, None] * t2
    gaps = np.min(np.diff(np.linalg.eigvalsh(mix), axis=-1), axis=-1)
    best = int(np.argmax(gaps))
    return _right_handed(jacobi_eigh(mix[best])[1])


def classify_h4(H, tol=EPS_SYM, scale=1.0):
    """Symmetry group of a harmonic fourth-order tensor.

    Parameters
    ----------
    H : (3, 3, 3, 3) array_like
        Harmonic tensor.
    tol : float
        Relative tolerance.
    scale : float
        Reference magnitude for the zero test ``||H|| < tol * scale``.

    Returns
    -------
    ClassedGroup
        One of ``SO(3), O, O(2), D4, D3, D2, Z2, 1``.

    Raises
    ------
    AmbiguousClassError
        If a test falls in the ambiguity band or the data fit no class.
    """
    h = as_array4(H)
    hk = components_to_kelvin(h)
    norm = np.linalg.norm(hk)
    if norm == 0.0 or _decide(norm / scale, tol, "zero test of H", ("SO(3)", "anisotropic")):
        return ClassedGroup(SO3)
    d2, d2_dev = d2_covariant(h)
    n2 = np.linalg.norm(d2)
    if _decide(np.linalg.norm(d2_dev) / n2, tol, "deviator of d2", ("O", "non-cubic")):
        frame = _cubic_frame(hk)
        ok = all(_invariant(hk, rotation(frame[:, i], np.pi / 2), tol,
                            "cubic generator", ("O", "unknown")) for i in (0, 2))
        if not ok:
            raise AmbiguousClassError(
                "d2 is spherical but H is not cubic", ("O", "non-cubic"))
        return ClassedGroup(OCTA, frame)

    w, v = jacobi_eigh(d2_dev)
    ndev = np.linalg.norm(d2_dev)
    gaps = np.diff(w) / ndev
    k = int(np.argmin(gaps))
    if _decide(gaps[k], tol, "eigenvalue gap of d2", ("axial", "orthorhombic")):
        axis = v[:, 2] if k == 0 else v[:, 0]
        return _classify_axial(hk, axis, tol)

    hits = [_invariant(hk, rotation(v[:, i], np.pi), tol, "half-turn test", ("D2", "Z2", "1"))
            for i in range(3)]
    count = sum(hits)
    if count == 3:
        return ClassedGroup(D2, _right_handed(v))
    if count == 1:
        return ClassedGroup(Z2, frame_from_axes(v[:, hits.index(True)]))
    if count == 0:
        return ClassedGroup(TRICLINIC)
    raise AmbiguousClassError("exactly two half-turn symmetries found", ("D2", "Z2"))


def _classify_axial(hk, axis, tol):
    """Classification when d2 singles out an axis."""
    one_rad, quarter, third, fifth = (
        _invariant(hk, rotation(axis, th), tol, "axial rotation test", ("O(2)", "finite"))
        for th in AXIAL_TEST_ANGLES)
    if one_rad:
        return ClassedGroup(O2, frame_from_axes(axis))
    if fifth:
        raise AmbiguousClassError("five-fold axial symmetry is impossible for H", ("O(2)", "D5"))
    for found, label in ((quarter, D4), (third, D3)):
        if found:
            u, res = _best_twofold_in_plane(hk, axis)
            if _decide(res, tol, "perpendicular two-fold axis", (str(label), "cyclic")):
                return ClassedGroup(label, frame_from_axes(axis, u))
            raise AmbiguousClassError(
                f"{label} rotation found without perpendicular two-fold axis",
                (str(label), f"Z{label.n}"))
    half = _invariant(hk, rotation(axis, np.pi), tol, "half-turn test", ("Z2", "1"))
    u, res = _best_twofold_in_plane(hk, axis)
    in_plane = _decide(res, tol, "in-plane two-fold axis", ("Z2", "1"))
    if half and in_plane:
        return ClassedGroup(D2, frame_from_axes(axis, u))
    if half:
        return ClassedGroup(Z2, frame_from_axes(axis))
    if in_plane:
        return ClassedGroup(Z2, frame_from_axes(u))
    return ClassedGroup(TRICLINIC)


# ---------------------------------------------------------------------------
# Structures
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GeometricStructure:
    """Classes of ``h_a, h_b, H``, of their pairs and of the triplet.

    Attributes
    ----------
    signature : StructureSignature
        The seven class labels.
    groups : tuple of ClassedGroup
        Concrete groups in the same order.
    triplet : HarmonicTriplet
        The decomposition the structure was computed from.
    """

    signature: StructureSignature
    groups: tuple
    triplet: object

    @property
    def labels(self):
        return self.signature.as_tuple()

    @property
    def overall(self):
        return self.signature.overall

    def __str__(self):
        return str(self.signature)


def geometric_structure(c, scheme="CGHD", tol=EPS_SYM):
    """Geometric structure of an elasticity tensor under a decomposition scheme."""
    t = decompose(c, scheme)
    scale = float(np.linalg.norm(components_to_kelvin(as_array4(c))))
    if scale == 0.0:
        raise ValidationError("the zero tensor has no geometric structure")
    ga = classify_h2(t.h_a, tol, scale)
    gb = classify_h2(t.h_b, tol, scale)
    gh = classify_h4(t.H, tol, scale)
    gab = intersect(ga, gb)
    gah = intersect(ga, gh)
    gbh = intersect(gb, gh)
    gall = intersect(gab, gh)
    groups = (ga, gb, gh, gab, gah, gbh, gall)
    sig = StructureSignature(*(grp.label for grp in groups))
    return GeometricStructure(sig, groups, t)


def symmetry_class(c, tol=EPS_SYM):
    """Symmetry class of an elasticity tensor."""
    return geometric_structure(c, "CGHD", tol).overall


def is_cubic(c, scheme="CGHD", tol=EPS_SYM):
    """Cubic characterization: ``h_a = h_b = 0``, ``dev(d2) = 0`` and ``d2 != 0``."""
    t = decompose(c, scheme)
    scale = float(np.linalg.norm(components_to_kelvin(as_array4(c))))
    if scale == 0.0:
        return False
    d2, d2_dev = d2_covariant(t.H)
    return bool(np.linalg.norm(t.h_a) < tol * scale
                and np.linalg.norm(t.h_b) < tol * scale
                and np.linalg.norm(d2_dev) < tol * scale ** 2
                and np.linalg.norm(d2) >= tol * scale ** 2)
