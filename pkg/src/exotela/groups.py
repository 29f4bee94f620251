"""Concrete rotation groups: a class label placed in a frame.

Finite groups carry their elements explicitly; ``O(2)``, ``SO(2)`` and
``SO(3)`` are represented by their axis.  Intersections are computed
analytically for the continuous groups and by filtering elements otherwise.
"""

from functools import lru_cache
from itertools import permutations, product

import numpy as np

from .errors import ValidationError
from .labels import O2, SO2, SO3, ClassLabel, make_label
from .tensor import ID2, check_rotation, rotation

#: Default tolerance for matching rotations and axes.
GEOM_TOL = 1e-6

E1, E2, E3 = np.eye(3)


def frame_from_axes(axis, secondary=None):
    """Rotation whose third column is ``axis`` and first column ``secondary``.

    ``secondary`` is orthogonalized against ``axis``; when omitted a
    deterministic perpendicular direction is chosen.
    """
    a = np.asarray(axis, dtype=float)
    a = a / np.linalg.norm(a)
    if secondary is None:
        trial = E1 if abs(a[0]) < 0.9 else E2
        u = trial - (trial @ a) * a
    else:
        u = np.asarray(secondary, dtype=float)
        u = u - (u @ a) * a
    u = u / np.linalg.norm(u)
    return np.column_stack([u, np.cross(a, u), a])


@lru_cache(maxsize=None)
def _standard_elements(kind, n):
    if kind == "1":
        mats = [ID2]
    elif kind == "Z":
        mats = [rotation(E3, 2 * np.pi * k / n) for k in range(n)]
    elif kind == "D":
        mats = [rotation(E3, 2 * np.pi * k / n) for k in range(n)]
        mats += [rotation((np.cos(np.pi * k / n), np.sin(np.pi * k / n), 0.0), np.pi)
                 for k in range(n)]
    elif kind == "O":
        mats = []
        for perm in permutations(range(3)):
            for signs in product((1.0, -1.0), repeat=3):
                m = np.zeros((3, 3))
                for row, (col, s) in enumerate(zip(perm, signs)):
                    m[row, col] = s
                if np.linalg.det(m) > 0:
                    mats.append(m)
    else:
        raise ValidationError(f"no explicit elements for class {kind}")
    return tuple(np.array(m) for m in mats)


def _axis_angle(g):
    """Axis and angle in ``[0, pi]`` of a rotation matrix."""
    angle = np.arccos(np.clip((np.trace(g) - 1.0) / 2.0, -1.0, 1.0))
    skew = np.array([g[2, 1] - g[1, 2], g[0, 2] - g[2, 0], g[1, 0] - g[0, 1]])
    if np.linalg.norm(skew) > 1e-6:
        return skew / np.linalg.norm(skew), angle
    # angle close to 0 or pi: axis from the symmetric part
    b = g + ID2
    col = b[:, np.argmax(np.linalg.norm(b, axis=0))]
    n = np.linalg.norm(col)
    return (col / n if n > 0 else E3), angle


class ClassedGroup:
    """A symmetry group given by its class and a frame.

    Parameters
    ----------
    label : ClassLabel
        Symmetry class.
    frame : (3, 3) array_like
        Rotation taking the reference axes to the natural axes of the group;
        the principal axis is ``frame @ e3`` and, for dihedral and cubic
        groups, ``frame @ e1`` is a secondary two-fold axis.
    elements : sequence of (3, 3) arrays, optional
        Explicit elements for finite groups.  Generated from the standard
        group conjugated by ``frame`` when omitted.
    """

    def __init__(self, label, frame=None, elements=None):
        if not isinstance(label, ClassLabel):
            raise ValidationError("label must be a ClassLabel")
        self.label = label
        self.frame = ID2.copy() if frame is None else check_rotation(frame, tol=1e-6)
        if label.is_finite:
            if elements is None:
                if label.kind not in ("1", "Z", "D", "O"):
                    raise ValidationError(f"class {label} never occurs for elasticity tensors")
                std = _standard_elements(label.kind, label.n)
                elements = [self.frame @ g @ self.frame.T for g in std]
            self.elements = tuple(np.asarray(g, dtype=float) for g in elements)
        else:
            self.elements = None

    @property
    def axis(self):
        """Principal axis ``frame @ e3``."""
        return self.frame[:, 2]

    def contains(self, g, tol=GEOM_TOL):
        """Membership test for a rotation matrix."""
        g = np.asarray(g, dtype=float)
        kind = self.label.kind
        if kind == "SO3":
            return True
        if kind in ("O2", "SO2"):
            ga = g @ self.axis
            if kind == "SO2":
                return bool(np.linalg.norm(ga - self.axis) < tol)
            return bool(min(np.linalg.norm(ga - self.axis),
                            np.linalg.norm(ga + self.axis)) < tol)
        return any(np.linalg.norm(g - h) < tol for h in self.elements)

    def generators(self):
        """A few elements generating the group (a dense subgroup if continuous)."""
        f = self.frame
        kind, n = self.label.kind, self.label.n
        r = lambda ax, th: rotation(f @ ax, th)  # noqa: E731
        if kind == "1":
            return [ID2.copy()]
        if kind == "Z":
            return [r(E3, 2 * np.pi / n)]
        if kind == "D":
            return [r(E3, 2 * np.pi / n), r(E1, np.pi)]
        if kind == "O":
            return [r(E3, np.pi / 2), r(E1, np.pi / 2)]
        if kind == "SO2":
            return [r(E3, 1.0)]
        if kind == "O2":
            return [r(E3, 1.0), r(E1, np.pi)]
        if kind == "SO3":
            return [rotation(E3, 1.0), rotation(E1, 1.0)]
        # remaining finite classes only appear through intersections
        return list(self.elements)

    def rotated(self, g):
        """The conjugate group ``g G g^T``."""
        g = check_rotation(g)
        elements = None if self.elements is None else [g @ h @ g.T for h in self.elements]
        return ClassedGroup(self.label, g @ self.frame, elements)

    def __repr__(self):
        return f"ClassedGroup({self.label}, axis={np.round(self.axis, 6).tolist()})"


def _same_axis(a, b, tol):
    return min(np.linalg.norm(a - b), np.linalg.norm(a + b)) < tol


def identify_finite(elements, tol=GEOM_TOL):
    """Class and frame of a finite rotation group given by its elements."""
    elements = list(elements)
    n = len(elements)
    if n == 1:
        return ClassedGroup(ClassLabel("1"), ID2, elements)
    # group non-identity elements by rotation axis
    axes = []
    for g in elements:
        axis, angle = _axis_angle(g)
        if angle < tol:
            continue
        for entry in axes:
            if _same_axis(entry[0], axis, tol):
                entry[1] += 1
                break
        else:
            axes.append([axis, 1])
    cyclic = [(count + 1, axis) for axis, count in axes]
    k_max = max(k for k, _ in cyclic)
    principal = next(axis for k, axis in cyclic if k == k_max)
    if k_max == n:
        return ClassedGroup(make_label("Z", n), frame_from_axes(principal), elements)
    if n == 2 * k_max:
        twofold = [axis for k, axis in cyclic
                   if k == 2 and abs(axis @ principal) < tol]
        return ClassedGroup(make_label("D", k_max),
                            frame_from_axes(principal, twofold[0]), elements)
    if n == 24:
        fours = [axis for k, axis in cyclic if k == 4]
        return ClassedGroup(ClassLabel("O"), frame_from_axes(fours[0], fours[1]), elements)
    if n == 12:
        return ClassedGroup(ClassLabel("T"), ID2, elements)
    if n == 60:
        return ClassedGroup(ClassLabel("I"), ID2, elements)
    raise ValidationError(f"elements do not form a recognized group (order {n})")


def intersect(ga, gb, tol=GEOM_TOL):
    """Intersection of two concrete groups, as a :class:`ClassedGroup`."""
    if ga.label == SO3:
        return gb
    if gb.label == SO3:
        return ga
    if not ga.label.is_finite and not gb.label.is_finite:
        a, b = ga.axis, gb.axis
        c = abs(a @ b)
        both_o2 = ga.label == O2 and gb.label == O2
        if 1.0 - c < tol:
            if both_o2:
                return ga
            return ga if ga.label == SO2 else gb
        if c < tol:
            if both_o2:
                return ClassedGroup(make_label("D", 2), frame_from_axes(a, b))
            so2 = ga if ga.label == SO2 else gb
            if ga.label != gb.label:
                return ClassedGroup(make_label("Z", 2), frame_from_axes(so2.axis))
            return ClassedGroup(ClassLabel("1"))
        if both_o2:
            return ClassedGroup(make_label("Z", 2), frame_from_axes(np.cross(a, b)))
        return ClassedGroup(ClassLabel("1"))
    if not ga.label.is_finite:
        ga, gb = gb, ga
    kept = [g for g in ga.elements if gb.contains(g, tol)]
    return identify_finite(kept, tol)


def intersect_groups(ga, gb, tol=GEOM_TOL):
    """Class of the intersection of two concrete groups."""
    return intersect(ga, gb, tol).label
