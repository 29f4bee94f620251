"""Material-level recognition of exotic structures, sampling and Young's modulus."""

from dataclasses import dataclass, field

import numpy as np

from .catalog import MATERIALS, covariant_groups, find_entry, match_signature
from .covariants import EPS_SYM, d2_covariant, geometric_structure
from .errors import AmbiguousClassError, ConvergenceError, SingularTensorError, ValidationError
from .fixspace import coords_to_h2, coords_to_h4, fixed_basis
from .harmonic import HarmonicTriplet, decompose, reconstruct, split_sym_anti
from .tensor import (
    as_array4,
    as_elasticity,
    invert,
    is_positive_definite,
    random_rotation,
    rotate,
    spectrum,
)

#: Analyses run by :func:`classify_material`, in tie-break order.
ANALYSES = (("stiffness", "CGHD"), ("stiffness", "SWHD"), ("compliance", "SWHD"))

#: Covariants that vanish for each named material.
MATERIAL_CONDITIONS = {"UTI": ("h_b",), "IDTI": ("h_a", "H"), "IYTI": ("h_b", "H")}

OUT_OF_SCOPE = "at or below orthotropic (out of enumeration scope)"


def analysis_key(role, scheme):
    return f"{role}/{scheme}"


@dataclass
class MaterialReport:
    """Outcome of :func:`classify_material`.

    Attributes
    ----------
    entry : ExoticCatalogEntry or None
        Most specific matching catalog entry.
    material : str or None
        ``UTI``, ``IDTI`` or ``IYTI`` when the named conditions hold on the
        tensor and scheme they are defined for.
    analysis : str or None
        ``"role/scheme"`` of the analysis that produced ``entry``.
    matches : dict
        Catalog entry found by each analysis (None if no match).
    structures : dict
        Geometric structure of each analysis.
    residuals : dict
        Relative norms of ``h_a, h_b, H`` and ``dev(d2)`` per analysis.
    vanishing : dict
        Names of the covariants detected as zero per analysis.
    positive_definite : bool
    eigenvalues : ndarray
    note : str
    ambiguous : dict
        Message of each analysis whose symmetry tests were inconclusive.
    """

    entry: object
    material: str
    analysis: str
    matches: dict = field(default_factory=dict)
    structures: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)
    vanishing: dict = field(default_factory=dict)
    positive_definite: bool = False
    eigenvalues: np.ndarray = None
    note: str = ""
    ambiguous: dict = field(default_factory=dict)

    @property
    def label(self):
        return self.entry.label if self.entry is not None else None

    @property
    def overall(self):
        return self.entry.overall if self.entry is not None else None

    def material_residual(self, name):
        """Largest relative norm among the covariants that ``name`` requires to vanish."""
        _, _, role, scheme = MATERIALS[name]
        res = self.residuals[analysis_key(role, scheme)]
        return max(res[k] for k in MATERIAL_CONDITIONS[name])


def _residuals(t, scale):
    _, d2_dev = d2_covariant(t.H)
    return {"h_a": float(np.linalg.norm(t.h_a) / scale),
            "h_b": float(np.linalg.norm(t.h_b) / scale),
            "H": float(np.linalg.norm(t.H) / scale),
            "d2_dev": float(np.linalg.norm(d2_dev) / scale ** 2)}


def _specificity(entry):
    """Number of singleton entries raised above the generic structure."""
    if entry is None:
        return -1
    generic = find_entry(f"{entry.overall}^g")
    return sum(a != b for a, b in zip(entry.signature.singletons,
                                      generic.signature.singletons))


def classify_material(c, tol=EPS_SYM):
    """Recognize the catalog entry and named material of a stiffness tensor.

    The geometric structure is computed for the CGHD and SWHD of the stiffness
    and, when it is invertible, of the compliance.  Each structure is matched
    against the catalog and the match raising the most covariants above the
    generic structure is reported (ties go to the earlier analysis).  An
    analysis whose tests are inconclusive is skipped and recorded in
    ``ambiguous``; the error is raised only when no analysis is conclusive.

    Parameters
    ----------
    c : ElasticityTensor
        Stiffness tensor.
    tol : float
        Relative tolerance of the symmetry tests.

    Returns
    -------
    MaterialReport
    """
    c = as_elasticity(c)
    tensors = {"stiffness": c}
    try:
        tensors["compliance"] = invert(c)
    except SingularTensorError:
        pass
    matches, structures, residuals, vanishing, ambiguous = {}, {}, {}, {}, {}
    for role, scheme in ANALYSES:
        if role not in tensors:
            continue
        key = analysis_key(role, scheme)
        scale = tensors[role].norm()
        residuals[key] = _residuals(decompose(tensors[role], scheme), scale)
        try:
            st = geometric_structure(tensors[role], scheme, tol)
        except AmbiguousClassError as exc:
            ambiguous[key] = exc
            continue
        structures[key] = st
        vanishing[key] = tuple(k for k, grp in zip(("h_a", "h_b", "H"), st.groups[:3])
                               if grp.label.kind == "SO3")
        matches[key] = match_signature(st.signature)

    ranked = []
    for order, (key, entry) in enumerate(matches.items()):
        if entry is None:
            continue
        named = bool(entry.material) and key == analysis_key(entry.role, entry.scheme)
        ranked.append((-_specificity(entry), not named, order, key, entry))
    if ambiguous and not ranked:
        first = next(iter(ambiguous.values()))
        raise AmbiguousClassError(f"no conclusive analysis: {first}", first.candidates)
    ranked.sort(key=lambda r: r[:3])
    best_key, best = (ranked[0][3], ranked[0][4]) if ranked else (None, None)
    material = best.material if ranked and not ranked[0][1] else None

    note = ""
    if best is None:
        note = "no catalog match"
    elif not best.high:
        note = OUT_OF_SCOPE
    eig = spectrum(c)
    return MaterialReport(best, material, best_key, matches, structures, residuals,
                          vanishing, bool(is_positive_definite(c)), eig, note,
                          {k: str(v) for k, v in ambiguous.items()})


@dataclass
class InversionReport:
    """Whether an exotic label survives inversion of the tensor."""

    label: str
    original: MaterialReport
    inverse: MaterialReport
    survives: bool

    @property
    def inverse_label(self):
        return self.inverse.material or self.inverse.label


def _report_has(report, key):
    entry = find_entry(key)
    if key.upper() in MATERIALS:
        # the named conditions must hold on the analysis they are stated for
        k = analysis_key(entry.role, entry.scheme)
        st = report.structures.get(k)
        return (st is not None and st.overall == entry.overall
                and set(MATERIAL_CONDITIONS[entry.material]) <= set(report.vanishing[k]))
    return entry in report.matches.values()


def inversion_stability(c, label=None, tol=EPS_SYM):
    """Invert a tensor and check whether its exotic label is preserved.

    Parameters
    ----------
    c : ElasticityTensor
    label : str, optional
        Material name or catalog label; defaults to the detected one.

    Raises
    ------
    ValidationError
        If ``c`` does not carry ``label``.
    """
    c = as_elasticity(c)
    original = classify_material(c, tol)
    if label is None:
        label = original.material or original.label
        if label is None:
            raise ValidationError("tensor matches no catalog entry")
    if not _report_has(original, label):
        raise ValidationError(f"tensor does not carry the label {label}")
    inverse = classify_material(invert(c), tol)
    return InversionReport(str(label), original, inverse, _report_has(inverse, label))


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def _draw(basis, rng, fill):
    if basis.shape[1] == 0:
        return np.zeros(basis.shape[0])
    mags = rng.uniform(0.1, 1.0, basis.shape[1]) * rng.choice((-1.0, 1.0), basis.shape[1])
    return fill * (basis @ mags)


def sample_random(entry, seed, max_tries=1000):
    """Random positive definite stiffness tensor with a given structure.

    The invariants are ``alpha, beta = 3 + U(-1, 1)``; each covariant is a
    combination of an orthonormal basis of its fixed subspace with coefficients
    of modulus ``U(0.1, 1)`` and random sign, scaled by 1/2.  The tensor is
    built in the scheme (and role) bound to the entry, CGHD of the stiffness
    otherwise, then rotated by a random rotation.  Draws that are not positive
    definite are rejected.

    Parameters
    ----------
    entry : ExoticCatalogEntry or str
    seed : int

    Returns
    -------
    ElasticityTensor
        The stiffness tensor (the inverse of the sampled compliance for IYTI).
    """
    entry = find_entry(entry)
    role = entry.role or "stiffness"
    scheme = entry.scheme or "CGHD"
    groups = covariant_groups(entry)
    bases = (fixed_basis(groups[0], 2), fixed_basis(groups[1], 2), fixed_basis(groups[2], 4))
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        alpha, beta = 3.0 + rng.uniform(-1.0, 1.0, 2)
        h_a = coords_to_h2(_draw(bases[0], rng, 0.5))
        h_b = coords_to_h2(_draw(bases[1], rng, 0.5))
        big_h = coords_to_h4(_draw(bases[2], rng, 0.5))
        t = reconstruct(HarmonicTriplet(alpha, beta, h_a, h_b, big_h, scheme))
        g = random_rotation(rng)
        if not is_positive_definite(t):
            continue
        t = rotate(t, g)
        return invert(t) if role == "compliance" else t
    raise ConvergenceError(f"no positive definite sample for {entry.label} "
                           f"after {max_tries} draws")


# ---------------------------------------------------------------------------
# Young's modulus
# ---------------------------------------------------------------------------

def _quartic(s, n):
    return np.einsum("ijkl,...i,...j,...k,...l->...", as_array4(s), n, n, n, n, optimize=True)


def young_modulus(s, n, tol=1e-9):
    """Directional Young's modulus ``E(n) = 1 / (S :: n⊗n⊗n⊗n)``.

    Parameters
    ----------
    s : ElasticityTensor
        Compliance tensor.
    n : (3,) array_like
        Unit direction.
    """
    n = np.asarray(n, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1.0) > tol:
        raise ValidationError("direction must be a unit 3-vector")
    q = float(_quartic(s, n))
    if q <= 0.0:
        raise SingularTensorError(f"compliance quartic form is not positive ({q:.3e})", q)
    return 1.0 / q


@dataclass
class YoungSurface:
    """Young's modulus on an equiangular grid; ``E[i, j]`` at ``theta[i], phi[j]``."""

    theta: np.ndarray
    phi: np.ndarray
    E: np.ndarray

    def rows(self):
        """``(theta, phi, E)`` triples, theta varying slowest."""
        for i, th in enumerate(self.theta):
            for j, ph in enumerate(self.phi):
                yield float(th), float(ph), float(self.E[i, j])


def directions(theta, phi):
    """Unit vectors for polar angle ``theta`` and azimuth ``phi`` (broadcast)."""
    theta, phi = np.broadcast_arrays(theta, phi)
    return np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi),
                     np.cos(theta)], axis=-1)


def young_surface(s, n_theta, n_phi):
    """Young's modulus on ``n_theta`` polar angles in ``[0, pi]`` and ``n_phi``
    azimuths ``2 pi k / n_phi``."""
    if n_theta < 2 or n_phi < 2:
        raise ValidationError("grid sizes must be at least 2")
    theta = np.linspace(0.0, np.pi, n_theta)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    n = directions(theta[:, None], phi[None, :])
    q = _quartic(s, n)
    if np.any(q <= 0.0):
        raise SingularTensorError("compliance quartic form is not positive", float(q.min()))
    return YoungSurface(theta, phi, 1.0 / q)


def totally_symmetric_part(s):
    """Totally symmetric part of a tensor, as an elasticity tensor."""
    return as_elasticity(split_sym_anti(s)[0])

