"""Nearest tensor with a prescribed geometric structure.

A catalog entry is realized in the reference frame by fixed subspaces of its
covariants (see :func:`exotela.catalog.covariant_groups`).  Tensors whose
covariants lie in those subspaces form a linear subspace of the 21-dimensional
space of elasticity tensors; :func:`project_in_frame` is the orthogonal
projection onto it.  :func:`nearest_in_structure` additionally optimizes the
orientation of the reference frame.

The metric is the Frobenius norm of the Kelvin matrix, which equals the
tensor norm ``sqrt(C :: C)``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .catalog import _d3_cube_frame, covariant_groups, find_entry
from .covariants import _best_twofold_in_plane, _cubic_frame, _right_handed, d2_covariant
from .errors import ConvergenceError, ValidationError
from .fixspace import _orthonormal_range, coords_to_h2, coords_to_h4, fixed_basis
from .groups import ClassedGroup, frame_from_axes
from .harmonic import HarmonicTriplet, decompose, normalize_scheme, reconstruct
from .labels import D3, OCTA
from .linalg import jacobi_eigh
from .tensor import (
    ElasticityTensor,
    as_elasticity,
    components_to_kelvin,
    is_positive_definite,
    kelvin_rotation,
    quaternion_from_rotation,
    rotation_from_quaternion,
)

_IU = np.triu_indices(6)
_VEC_WEIGHTS = np.where(_IU[0] == _IU[1], 1.0, np.sqrt(2.0))

#: Objective value below which a start stops the whole search.
EARLY_EXIT = 1e-12


def kelvin_to_vec21(k):
    """Orthonormal 21-vector of a symmetric Kelvin matrix."""
    return np.asarray(k, dtype=float)[..., _IU[0], _IU[1]] * _VEC_WEIGHTS


def vec21_to_kelvin(x):
    """Inverse of :func:`kelvin_to_vec21`."""
    x = np.asarray(x, dtype=float) / _VEC_WEIGHTS
    k = np.zeros(x.shape[:-1] + (6, 6))
    k[..., _IU[0], _IU[1]] = x
    k[..., _IU[1], _IU[0]] = x
    return k


def _entry_scheme(entry, scheme):
    if scheme is None:
        return entry.scheme or "CGHD"
    return normalize_scheme(scheme)


def _check_entry(entry):
    entry = find_entry(entry)
    if not entry.high:
        raise ValidationError(f"projection onto {entry.label} is not supported "
                              "(classes at or below orthotropic)")
    return entry


_OPERATORS = {}


def projection_operator(entry, scheme=None):
    """21x21 orthogonal projector of :func:`project_in_frame`.

    Acts on the orthonormal 21-vectors of :func:`kelvin_to_vec21`.
    """
    entry = _check_entry(entry)
    scheme = _entry_scheme(entry, scheme)
    key = (entry.label, scheme)
    if key not in _OPERATORS:
        ka, kb, kh = covariant_groups(entry)
        zero2, zero4 = np.zeros((3, 3)), np.zeros((3, 3, 3, 3))
        triplets = [HarmonicTriplet(1.0, 0.0, zero2, zero2, zero4, scheme),
                    HarmonicTriplet(0.0, 1.0, zero2, zero2, zero4, scheme)]
        triplets += [HarmonicTriplet(0.0, 0.0, coords_to_h2(x), zero2, zero4, scheme)
                     for x in fixed_basis(ka, 2).T]
        triplets += [HarmonicTriplet(0.0, 0.0, zero2, coords_to_h2(x), zero4, scheme)
                     for x in fixed_basis(kb, 2).T]
        triplets += [HarmonicTriplet(0.0, 0.0, zero2, zero2, coords_to_h4(x), scheme)
                     for x in fixed_basis(kh, 4).T]
        span = np.array([kelvin_to_vec21(reconstruct(t).kelvin) for t in triplets]).T
        basis = _orthonormal_range(span, rtol=1e-10)
        p = basis @ basis.T
        p = 0.5 * (p + p.T)
        p.setflags(write=False)
        _OPERATORS[key] = p
    return _OPERATORS[key]


def project_in_frame(c, entry, scheme=None):
    """Orthogonal projection onto the tensors realizing ``entry`` in the
    reference frame.

    The isotropic invariants are kept and each covariant is projected onto the
    fixed subspace of its group, so the result has the structure of ``entry``
    or a more symmetric one.

    Parameters
    ----------
    c : ElasticityTensor
        For ``IYTI`` this is the compliance tensor.
    entry : ExoticCatalogEntry or str
        Catalog entry above orthotropy.
    scheme : {"CGHD", "SWHD"}, optional
        Decomposition in which the covariants are constrained; defaults to the
        scheme bound to the entry (CGHD for unnamed entries).
    """
    p = projection_operator(entry, scheme)
    x = kelvin_to_vec21(as_elasticity(c).kelvin)
    return ElasticityTensor(vec21_to_kelvin(p @ x))


@dataclass
class ProjectionResult:
    """Outcome of :func:`nearest_in_structure`.

    Attributes
    ----------
    tensor : ElasticityTensor
        Nearest tensor found, in the frame of the input.
    distance : float
        ``||C - tensor||``.
    relative_distance : float
        ``distance / ||C||``.
    rotation : (3, 3) ndarray
        Orientation ``g`` with ``tensor = g * P(g^T * C)``.
    quaternion : (4,) ndarray
    entry : ExoticCatalogEntry
    scheme : str
    positive_definite : bool
        Reported, never enforced.
    converged : bool
        Whether the best start met a convergence criterion.
    start_values : list of float
        Final relative distance of every start that was run, in start order.
    """

    tensor: ElasticityTensor
    distance: float
    relative_distance: float
    rotation: np.ndarray
    quaternion: np.ndarray
    entry: object
    scheme: str
    positive_definite: bool
    converged: bool
    start_values: list = field(default_factory=list)


class _Objective:
    """Relative distance to the structure as a function of the orientation."""

    def __init__(self, c, p):
        self.k = c.kelvin
        self.norm = max(c.norm(), np.finfo(float).tiny)
        self.residual = np.eye(21) - p

    def __call__(self, q):
        w, x, y, z = q / math.sqrt(q @ q)
        g = np.array([
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ])
        r = kelvin_rotation(g)
        v = self.residual @ kelvin_to_vec21(r.T @ self.k @ r)
        return math.sqrt(v @ v) / self.norm


def _tangent_basis(q0):
    """Orthonormal basis (4, 3) of the tangent space of the unit sphere at ``q0``."""
    u, _, _ = np.linalg.svd(q0[:, None])
    return u[:, 1:]


def _nelder_mead(f, q0, step, max_iters, xtol=1e-10, ftol=1e-14, stall=25):
    """Nelder-Mead descent over unit quaternions.

    The simplex lives in the tangent space at ``q0``; a point ``w`` stands for
    the unit quaternion ``(q0 + B w) / |q0 + B w|``.

    Returns
    -------
    q : (4,) ndarray
    value : float
    converged : bool
    """
    basis = _tangent_basis(q0)

    def unit(w):
        q = q0 + basis @ w
        return q / math.sqrt(q @ q)

    def fw(w):
        return f(unit(w))

    simplex = np.vstack([np.zeros(3), step * np.eye(3)])
    values = np.array([fw(w) for w in simplex])
    history = []
    converged = False
    for _ in range(max_iters):
        order = np.argsort(values, kind="stable")
        simplex, values = simplex[order], values[order]
        history.append(values[0])
        if values[0] <= EARLY_EXIT:
            converged = True
            break
        diameter = np.max(np.linalg.norm(simplex[1:] - simplex[0], axis=1))
        if diameter < xtol or (len(history) > stall
                               and history[-stall - 1] - values[0] < ftol):
            converged = True
            break
        centroid = simplex[:-1].mean(axis=0)
        worst = simplex[-1]
        xr = centroid + (centroid - worst)
        fr = fw(xr)
        if fr < values[0]:
            xe = centroid + 2.0 * (centroid - worst)
            fe = fw(xe)
            simplex[-1], values[-1] = (xe, fe) if fe < fr else (xr, fr)
        elif fr < values[-2]:
            simplex[-1], values[-1] = xr, fr
        else:
            if fr < values[-1]:
                xc = centroid + 0.5 * (xr - centroid)
            else:
                xc = centroid + 0.5 * (worst - centroid)
            fc = fw(xc)
            if fc < min(fr, values[-1]):
                simplex[-1], values[-1] = xc, fc
            else:
                simplex[1:] = simplex[0] + 0.5 * (simplex[1:] - simplex[0])
                values[1:] = [fw(w) for w in simplex[1:]]
    best = int(np.argmin(values))
    return unit(simplex[best]), float(values[best]), converged


def _eigenframes(t):
    frames = []
    d2_dev = d2_covariant(t.H)[1]
    for h in (t.h_a, t.h_b, d2_dev):
        if np.linalg.norm(h) == 0.0:
            continue
        v = _right_handed(jacobi_eigh(h)[1])
        for shift in range(3):
            frames.append(np.roll(v, shift, axis=1))
    return frames


def _axial_refinements(frames, hk):
    """Frames sharing the third axis of ``frames`` with the first axis moved to
    the best in-plane half-turn axis of ``hk``."""
    if np.linalg.norm(hk) == 0.0:
        return []
    out = []
    for f in frames:
        u, _ = _best_twofold_in_plane(hk, f[:, 2])
        out.append(frame_from_axes(f[:, 2], u))
    return out


def _cubic_candidates(entry, hk):
    groups = covariant_groups(entry)
    if not any(g.label == OCTA for g in groups) or np.linalg.norm(hk) == 0.0:
        return []
    cube = _cubic_frame(hk)
    syms = ClassedGroup(OCTA).elements
    reference = _d3_cube_frame() if entry.overall == D3 else np.eye(3)
    return [cube @ s @ reference.T for s in syms]


def _candidate_frames(c, entry, scheme, objective):
    """Start orientations as quaternions with their objective values.

    Cheaper candidates come first; later tiers are skipped once a candidate
    reaches :data:`EARLY_EXIT`.
    """
    t = decompose(c, scheme)
    hk = components_to_kelvin(t.H)
    frames = _eigenframes(t) + [np.eye(3)]
    tiers = [lambda: frames,
             lambda: _axial_refinements(frames, hk) if entry.overall.kind == "D" else [],
             lambda: _cubic_candidates(entry, hk)]
    quats, scores = [], []
    for tier in tiers:
        for f in tier():
            q = quaternion_from_rotation(f)
            quats.append(q)
            scores.append(objective(q))
        if min(scores) <= EARLY_EXIT:
            break
    return quats, scores


def nearest_in_structure(c, entry, scheme=None, starts=16, max_iters=2000, seed=0):
    """Nearest tensor having the structure of ``entry`` in some orientation.

    Minimizes ``||C - g * P(g^T * C)||`` over rotations ``g`` (unit
    quaternions), where ``P`` is :func:`project_in_frame`.  Half of the starts
    are the best orientations built from eigenframes of the covariants of
    ``C`` (and cube frames when the entry has a cubic covariant); the others
    are seeded random orientations.

    Parameters
    ----------
    c : ElasticityTensor
        For ``IYTI`` this is the compliance tensor.
    entry : ExoticCatalogEntry or str
    scheme : {"CGHD", "SWHD"}, optional
    starts : int
        Number of Nelder-Mead runs.
    max_iters : int
        Iteration budget of each run.
    seed : int
        Seed of the random starts.

    Returns
    -------
    ProjectionResult

    Raises
    ------
    ConvergenceError
        If no start converges within ``max_iters``; ``best`` holds the best
        result found.
    """
    entry = _check_entry(entry)
    scheme = _entry_scheme(entry, scheme)
    if starts < 1 or max_iters < 1:
        raise ValidationError("starts and max_iters must be positive")
    c = as_elasticity(c)
    objective = _Objective(c, projection_operator(entry, scheme))

    cands, scores = _candidate_frames(c, entry, scheme, objective)
    n_cov = min(len(cands), max(1, starts // 2))
    chosen = [cands[i] for i in np.argsort(scores, kind="stable")[:n_cov]]
    rng = np.random.default_rng(seed)
    for _ in range(starts - n_cov):
        q = rng.normal(size=4)
        chosen.append(q / np.linalg.norm(q))

    best = None
    values = []
    any_ok = False
    for i, q0 in enumerate(chosen):
        step = 0.05 if i < n_cov else 0.3
        q, value, ok = _nelder_mead(objective, q0, step, max_iters)
        if ok and value > EARLY_EXIT:
            # restart once from the converged point to escape a collapsed simplex
            q2, v2, ok2 = _nelder_mead(objective, q, 1e-3, max_iters)
            if v2 < value:
                q, value, ok = q2, v2, ok2
        values.append(value)
        any_ok = any_ok or ok
        if best is None or value < best[1]:
            best = (q, value, ok)
        if value <= EARLY_EXIT:
            break

    q, value, ok = best
    g = rotation_from_quaternion(q)
    r = kelvin_rotation(g)
    inner = project_in_frame(ElasticityTensor(r.T @ c.kelvin @ r), entry, scheme)
    out = ElasticityTensor(r @ inner.kelvin @ r.T)
    distance = float(np.linalg.norm(c.kelvin - out.kelvin))
    result = ProjectionResult(out, distance, distance / max(c.norm(), np.finfo(float).tiny),
                              g, quaternion_from_rotation(g), entry, scheme,
                              is_positive_definite(out), ok, values)
    if not any_ok:
        raise ConvergenceError(f"no start converged within {max_iters} iterations", result)
    return result
