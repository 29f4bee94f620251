"""Fixed-size tensor algebra in three dimensions.

Fourth-order tensors are handled internally as ``(3, 3, 3, 3)`` arrays and
stored canonically as symmetric 6x6 Kelvin matrices.  The Kelvin basis order is
``(11, 22, 33, 23, 13, 12)``; rows and columns belonging to shear pairs carry a
factor ``sqrt(2)``, so that the Frobenius norm and the quadruple contraction of
tensors coincide with those of their Kelvin matrices.

Second-order symmetric tensors are plain symmetric ``(3, 3)`` arrays.
"""

import numpy as np
from scipy.spatial.transform import Rotation as _ScipyRotation

from .errors import SingularTensorError, ValidationError
from .linalg import jacobi_eigh

#: Default relative tolerance for numerical equality tests.
EPS_NUM = 1e-9

SQRT2 = np.sqrt(2.0)

#: Index pairs of the Kelvin basis, zero based.
KELVIN_PAIRS = ((0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1))

#: Kelvin weights of the six basis entries.
KELVIN_WEIGHTS = np.array([1.0, 1.0, 1.0, SQRT2, SQRT2, SQRT2])

_PAIR_INDEX = np.empty((3, 3), dtype=int)
for _I, (_i, _j) in enumerate(KELVIN_PAIRS):
    _PAIR_INDEX[_i, _j] = _PAIR_INDEX[_j, _i] = _I
_ROWS = np.array([p[0] for p in KELVIN_PAIRS])
_COLS = np.array([p[1] for p in KELVIN_PAIRS])
# number of sqrt(2) factors carried by each Kelvin entry (0, 1 or 2)
_NSQRT = np.add.outer((np.arange(6) >= 3).astype(int), (np.arange(6) >= 3).astype(int))
# shear-shear weights are exactly 2 (sqrt2 * sqrt2 rounds above 2)
_WW = np.choose(_NSQRT, [1.0, SQRT2, 2.0])

ID2 = np.eye(3)


# ---------------------------------------------------------------------------
# Kelvin conversions
# ---------------------------------------------------------------------------

def sym2(t11, t22, t33, t23=0.0, t13=0.0, t12=0.0):
    """Symmetric second-order tensor from its six independent components."""
    return np.array([[t11, t12, t13], [t12, t22, t23], [t13, t23, t33]], dtype=float)


def sym2_to_kelvin(t):
    """Kelvin 6-vector of a symmetric second-order tensor."""
    t = np.asarray(t, dtype=float)
    return t[..., _ROWS, _COLS] * KELVIN_WEIGHTS


def kelvin_to_sym2(v):
    """Symmetric second-order tensor from its Kelvin 6-vector."""
    v = np.asarray(v, dtype=float)
    c = v / KELVIN_WEIGHTS
    return c[..., _PAIR_INDEX]


def components_to_kelvin(c):
    """Kelvin matrix of a minor-symmetric fourth-order component array.

    Only the components ``c[i, j, k, l]`` with ``(i, j)`` and ``(k, l)`` taken
    from :data:`KELVIN_PAIRS` are read.
    """
    c = np.asarray(c, dtype=float)
    block = c[..., _ROWS[:, None], _COLS[:, None], _ROWS[None, :], _COLS[None, :]]
    return block * _WW


def kelvin_to_components(k):
    """Fourth-order component array of a Kelvin matrix.

    The division by the Kelvin weights is corrected by one ulp where needed so
    that converting the result back with :func:`components_to_kelvin`
    reproduces ``k`` bit for bit whenever ``k`` is itself the image of a
    component array.
    """
    k = np.asarray(k, dtype=float)
    c = k / _WW
    single = _NSQRT == 1
    if np.any(single):
        # fl(fl(y / sqrt2) * sqrt2) may differ from y by one ulp
        back = c * _WW
        bad = single & (back != k)
        if np.any(bad):
            for direction in (np.inf, -np.inf):
                trial = np.nextafter(c, direction)
                fix = bad & (trial * _WW == k)
                c = np.where(fix, trial, c)
                bad &= ~fix
    return c[..., _PAIR_INDEX[:, :, None, None], _PAIR_INDEX[None, None, :, :]]


def check_fourth_order_symmetry(c, tol=0.0, major=True):
    """Validate the index symmetries of a component array.

    Parameters
    ----------
    c : (3, 3, 3, 3) array_like
    tol : float
        Absolute tolerance, relative to ``max(1, max|c|)``.
    major : bool
        Also require ``c_ijkl = c_klij``.

    Raises
    ------
    ValidationError
        Naming the violated identity with the worst offending indices.
    """
    c = np.asarray(c, dtype=float)
    if c.shape != (3, 3, 3, 3):
        raise ValidationError(f"expected a (3, 3, 3, 3) array, got {c.shape}")
    if not np.all(np.isfinite(c)):
        raise ValidationError("component array contains non-finite values")
    limit = tol * max(1.0, float(np.max(np.abs(c))))
    checks = [
        ("minor symmetry C_ijkl = C_jikl", c.transpose(1, 0, 2, 3)),
        ("minor symmetry C_ijkl = C_ijlk", c.transpose(0, 1, 3, 2)),
    ]
    if major:
        checks.append(("major symmetry C_ijkl = C_klij", c.transpose(2, 3, 0, 1)))
    for name, other in checks:
        diff = np.abs(c - other)
        worst = np.unravel_index(np.argmax(diff), diff.shape)
        if diff[worst] > limit:
            idx = "".join(str(i + 1) for i in worst)
            raise ValidationError(
                f"{name} violated at C_{idx} (difference {diff[worst]:.3e})"
            )


# ---------------------------------------------------------------------------
# Elasticity tensor
# ---------------------------------------------------------------------------

class ElasticityTensor:
    """Fourth-order tensor with minor and major symmetries.

    Stored as an immutable symmetric 6x6 Kelvin matrix.  The same type is used
    for stiffness and compliance tensors.

    Parameters
    ----------
    kelvin : (6, 6) array_like
        Kelvin matrix.
    tol : float, optional
        Accepted relative asymmetry of ``kelvin``; the stored matrix is the
        symmetric part.
    """

    __slots__ = ("_k",)

    def __init__(self, kelvin, tol=1e-12):
        k = np.array(kelvin, dtype=float)
        if k.shape != (6, 6):
            raise ValidationError(f"Kelvin matrix must be 6x6, got {k.shape}")
        if not np.all(np.isfinite(k)):
            raise ValidationError("Kelvin matrix contains non-finite values")
        asym = np.abs(k - k.T)
        if asym.max() > tol * max(1.0, np.abs(k).max()):
            i, j = np.unravel_index(np.argmax(asym), asym.shape)
            raise ValidationError(
                f"Kelvin matrix not symmetric: entry ({i + 1},{j + 1}) differs "
                f"from ({j + 1},{i + 1}) by {asym[i, j]:.3e}"
            )
        k = 0.5 * (k + k.T)
        k.setflags(write=False)
        self._k = k

    @classmethod
    def from_components(cls, c, tol=1e-12):
        """Build from a ``(3, 3, 3, 3)`` component array with index symmetries."""
        check_fourth_order_symmetry(c, tol=tol)
        return cls(components_to_kelvin(c))

    @classmethod
    def from_voigt(cls, v, role="stiffness"):
        """Build from a 6x6 Voigt matrix.

        Voigt order is the Kelvin order.  Stiffness matrices carry no shear
        factors; compliance matrices carry factors 2 (normal-shear) and 4
        (shear-shear) on the engineering-strain convention.
        """
        v = np.asarray(v, dtype=float)
        if v.shape != (6, 6):
            raise ValidationError(f"Voigt matrix must be 6x6, got {v.shape}")
        return cls(v * _voigt_factor(role))

    def to_voigt(self, role="stiffness"):
        """Voigt matrix of the tensor for the given role."""
        return self._k / _voigt_factor(role)

    @property
    def kelvin(self):
        """Read-only Kelvin matrix."""
        return self._k

    @property
    def components(self):
        """Full ``(3, 3, 3, 3)`` component array (computed on access)."""
        return kelvin_to_components(self._k)

    def norm(self):
        """Frobenius norm (identical for the tensor and its Kelvin matrix)."""
        return float(np.linalg.norm(self._k))

    def __add__(self, other):
        return ElasticityTensor(self._k + as_kelvin(other))

    def __sub__(self, other):
        return ElasticityTensor(self._k - as_kelvin(other))

    def __mul__(self, scalar):
        return ElasticityTensor(float(scalar) * self._k)

    __rmul__ = __mul__

    def __neg__(self):
        return ElasticityTensor(-self._k)

    def __eq__(self, other):
        if not isinstance(other, ElasticityTensor):
            return NotImplemented
        return bool(np.array_equal(self._k, other._k))

    def __hash__(self):
        return hash(self._k.tobytes())

    def allclose(self, other, rtol=EPS_NUM, atol=0.0):
        """Relative Frobenius comparison."""
        other = as_kelvin(other)
        scale = max(np.linalg.norm(self._k), np.linalg.norm(other))
        return bool(np.linalg.norm(self._k - other) <= rtol * scale + atol)

    def __repr__(self):
        rows = np.array2string(self._k, precision=6, suppress_small=True)
        return f"ElasticityTensor(\n{rows})"


def _voigt_factor(role):
    if role == "stiffness":
        return _WW
    if role == "compliance":
        # engineering shear strains put factors 2 and 4 on the Voigt entries
        return 1.0 / _WW
    raise ValidationError(f"unknown role {role!r}")


def as_array4(t):
    """Component array of an ElasticityTensor, Kelvin matrix or 3^4 array."""
    if isinstance(t, ElasticityTensor):
        return t.components
    t = np.asarray(t, dtype=float)
    if t.shape == (3, 3, 3, 3):
        return t
    if t.shape == (6, 6):
        return kelvin_to_components(t)
    raise ValidationError(f"cannot interpret array of shape {t.shape} as a fourth-order tensor")


def as_kelvin(t):
    """Kelvin matrix of an ElasticityTensor, Kelvin matrix or 3^4 array."""
    if isinstance(t, ElasticityTensor):
        return t.kelvin
    t = np.asarray(t, dtype=float)
    if t.shape == (6, 6):
        return t
    if t.shape == (3, 3, 3, 3):
        return components_to_kelvin(t)
    raise ValidationError(f"cannot interpret array of shape {t.shape} as a Kelvin matrix")


def as_elasticity(t):
    """Coerce to :class:`ElasticityTensor`."""
    if isinstance(t, ElasticityTensor):
        return t
    t = np.asarray(t, dtype=float)
    if t.shape == (3, 3, 3, 3):
        return ElasticityTensor.from_components(t, tol=1e-10)
    return ElasticityTensor(t)


# ---------------------------------------------------------------------------
# Products and contractions
# ---------------------------------------------------------------------------

def dyad(a, b):
    """Tensor product ``(a ⊗ b)_ijkl = a_ij b_kl``."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return a[:, :, None, None] * b[None, None, :, :]


def kelvin_product(a, b):
    """Symmetrized product ``(a ⊗̄ b)_ijkl = (a_ik b_jl + a_il b_jk) / 2``."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    t = a[:, None, :, None] * b[None, :, None, :]
    return 0.5 * (t + t.transpose(0, 1, 3, 2))


def box_product(a, b):
    """Product ``a ⊠ b = (6(a⊗̄b + b⊗̄a) - 4(a⊗b + b⊗a)) / 7``."""
    return (6.0 * (kelvin_product(a, b) + kelvin_product(b, a))
            - 4.0 * (dyad(a, b) + dyad(b, a))) / 7.0


def sym4_product(a, b):
    """Totally symmetric product ``(a⊗b + b⊗a + 2a⊗̄b + 2b⊗̄a) / 6``."""
    return (dyad(a, b) + dyad(b, a)
            + 2.0 * (kelvin_product(a, b) + kelvin_product(b, a))) / 6.0


def sym22_product(a, b):
    """Product ``(a⊗b + b⊗a - a⊗̄b - b⊗̄a) / 3``, free of totally symmetric part."""
    return (dyad(a, b) + dyad(b, a)
            - kelvin_product(a, b) - kelvin_product(b, a)) / 3.0


_PRODUCTS = {
    "dyad": dyad,
    "sym": sym4_product,
    "anti": sym22_product,
    "box": box_product,
    "kelvin": kelvin_product,
}


def structured_product(kind, a, b):
    """Dispatch to one of the five products by name.

    ``kind`` is one of ``"dyad"``, ``"sym"``, ``"anti"``, ``"box"`` and
    ``"kelvin"``.
    """
    try:
        fn = _PRODUCTS[kind]
    except KeyError:
        raise ValidationError(f"unknown product kind {kind!r}") from None
    return fn(np.asarray(a, dtype=float), np.asarray(b, dtype=float))


def trace12(t):
    """``(tr12 T)_kl = T_iikl``."""
    return np.einsum("iikl->kl", as_array4(t))


def trace13(t):
    """``(tr13 T)_jl = T_ijil``."""
    return np.einsum("ijil->jl", as_array4(t))


def full_trace(t):
    """``T_iijj``."""
    return float(np.einsum("iijj->", as_array4(t)))


def _order(x):
    if isinstance(x, ElasticityTensor):
        return 4, x.components
    x = np.asarray(x, dtype=float)
    if x.shape == (3, 3):
        return 2, x
    if x.shape in ((3, 3, 3, 3), (6, 6)):
        return 4, as_array4(x)
    raise ValidationError(f"unsupported operand shape {x.shape}")


def ddot(a, b):
    """Double contraction over the two adjacent index pairs.

    Handles the four combinations of second- and fourth-order operands, e.g.
    ``ddot(C, eps)`` is ``C_ijkl eps_kl`` and ``ddot(A, B)`` is ``A_ijpq B_pqkl``.
    """
    na, a = _order(a)
    nb, b = _order(b)
    if na == 4 and nb == 4:
        return (a.reshape(9, 9) @ b.reshape(9, 9)).reshape(3, 3, 3, 3)
    if na == 4:
        return (a.reshape(9, 9) @ b.ravel()).reshape(3, 3)
    if nb == 4:
        return (a.ravel() @ b.reshape(9, 9)).reshape(3, 3)
    return float(a.ravel() @ b.ravel())


def quadruple(a, b):
    """Full contraction ``A_ijkl B_ijkl``."""
    return float(as_array4(a).ravel() @ as_array4(b).ravel())


def contract(kind, a, b=None):
    """Dispatch to a contraction by name.

    ``kind`` is one of ``"tr12"``, ``"tr13"``, ``"full_trace"`` (single
    argument) or ``"double"``, ``"quadruple"``, ``"apply"`` (two arguments).
    """
    unary = {"tr12": trace12, "tr13": trace13, "full_trace": full_trace}
    binary = {"double": ddot, "quadruple": quadruple, "apply": ddot}
    if kind in unary:
        return unary[kind](a)
    if kind in binary:
        if b is None:
            raise ValidationError(f"contraction {kind!r} needs two operands")
        return binary[kind](a, b)
    raise ValidationError(f"unknown contraction kind {kind!r}")


def deviatoric(t):
    """Deviatoric part of a second-order tensor (symmetrized)."""
    t = np.asarray(t, dtype=float)
    t = 0.5 * (t + t.T)
    return t - np.trace(t) / 3.0 * ID2


I4 = kelvin_product(ID2, ID2)
K4 = dyad(ID2, ID2) / 3.0
J4 = I4 - K4


def isotropic_projectors():
    """The identity ``I`` on symmetric tensors, the deviatoric projector ``J``
    and the spherical projector ``K = (1/3) 1⊗1``, as elasticity tensors."""
    return (ElasticityTensor(components_to_kelvin(I4)),
            ElasticityTensor(components_to_kelvin(J4)),
            ElasticityTensor(components_to_kelvin(K4)))


def isotropic(alpha, beta):
    """Isotropic tensor ``alpha J + beta K``."""
    return ElasticityTensor(components_to_kelvin(alpha * J4 + beta * K4))


# ---------------------------------------------------------------------------
# Rotations
# ---------------------------------------------------------------------------

def check_rotation(g, tol=1e-9):
    """Return ``g`` as an array after checking it lies in SO(3)."""
    g = np.asarray(g, dtype=float)
    if g.shape != (3, 3):
        raise ValidationError(f"rotation must be 3x3, got {g.shape}")
    if not np.all(np.isfinite(g)):
        raise ValidationError("rotation contains non-finite values")
    if np.linalg.norm(g.T @ g - ID2) > tol or abs(np.linalg.det(g) - 1.0) > tol:
        raise ValidationError("matrix is not a proper rotation")
    return g


def rotation(axis, angle):
    """Rotation of ``angle`` radians about ``axis`` (right-hand rule)."""
    axis = np.asarray(axis, dtype=float)
    n = np.linalg.norm(axis)
    if axis.shape != (3,) or n < 1e-12:
        raise ValidationError("rotation axis must be a nonzero 3-vector")
    x, y, z = axis / n
    c, s = np.cos(angle), np.sin(angle)
    skew = np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])
    return c * ID2 + s * skew + (1.0 - c) * np.outer((x, y, z), (x, y, z))


def rotation_from_quaternion(q):
    """Rotation matrix of the quaternion ``(w, x, y, z)`` after normalization."""
    q = np.asarray(q, dtype=float)
    n = np.linalg.norm(q)
    if q.shape != (4,) or n < 1e-12:
        raise ValidationError("quaternion must be a nonzero 4-vector")
    w, x, y, z = q / n
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def quaternion_from_rotation(g):
    """Unit quaternion ``(w, x, y, z)`` with ``w >= 0`` of a rotation matrix."""
    x, y, z, w = _ScipyRotation.from_matrix(check_rotation(g, tol=1e-6)).as_quat()
    q = np.array([w, x, y, z])
    return -q if w < 0 else q


def random_rotation(rng):
    """Uniformly distributed rotation drawn from a numpy Generator."""
    return _ScipyRotation.random(random_state=rng).as_matrix()


def _kelvin_rotation_map():
    # Q_IJ is a quadratic form in g; store it as a (36, 81) matrix acting on g (x) g
    m = np.zeros((6, 6, 3, 3, 3, 3))
    for a, (i, j) in enumerate(KELVIN_PAIRS):
        for b, (p, q) in enumerate(KELVIN_PAIRS):
            f = KELVIN_WEIGHTS[a] / KELVIN_WEIGHTS[b] * (0.5 if b < 3 else 1.0)
            m[a, b, i, p, j, q] += f
            m[a, b, i, q, j, p] += f
    return m.reshape(36, 81)


_KELVIN_ROTATION_MAP = _kelvin_rotation_map()


def kelvin_rotation(g):
    """6x6 orthogonal matrix ``Q`` with ``[g * C] = Q [C] Q^T``.

    ``g`` may carry leading batch dimensions.
    """
    g = np.asarray(g, dtype=float)
    gg = (g[..., :, :, None, None] * g[..., None, None, :, :]).reshape(g.shape[:-2] + (81,))
    return (gg @ _KELVIN_ROTATION_MAP.T).reshape(g.shape[:-2] + (6, 6))


def rotate(t, g):
    """Rotate a tensor: ``(g * T)_i...l = g_ip ... g_ls T_p...s``.

    ``t`` may be an :class:`ElasticityTensor`, a vector, a second-order
    tensor, a ``(3, 3, 3, 3)`` array or a 6x6 Kelvin matrix; the result has the
    same type.
    """
    g = check_rotation(g)
    if isinstance(t, ElasticityTensor):
        q = kelvin_rotation(g)
        return ElasticityTensor(q @ t.kelvin @ q.T)
    t = np.asarray(t, dtype=float)
    if t.shape == (3,):
        return g @ t
    if t.shape == (3, 3):
        return g @ t @ g.T
    if t.shape == (6, 6):
        q = kelvin_rotation(g)
        return q @ t @ q.T
    if t.shape == (3, 3, 3, 3):
        return np.einsum("ip,jq,kr,ls,pqrs->ijkl", g, g, g, g, t, optimize=True)
    raise ValidationError(f"cannot rotate array of shape {t.shape}")


# ---------------------------------------------------------------------------
# Inversion and spectra
# ---------------------------------------------------------------------------

def invert(c, cond_cap=1e12):
    """Inverse on symmetric second-order tensors (e.g. stiffness to compliance).

    Raises
    ------
    SingularTensorError
        If the Kelvin condition number exceeds ``cond_cap``.
    """
    k = as_kelvin(c)
    s = np.linalg.svd(k, compute_uv=False)
    if s[-1] <= s[0] / cond_cap or s[0] == 0.0:
        raise SingularTensorError(
            f"tensor is singular or ill-conditioned (smallest singular value {s[-1]:.3e})",
            s[-1],
        )
    inv = np.linalg.inv(k)
    return ElasticityTensor(0.5 * (inv + inv.T))


def spectrum(c):
    """Kelvin eigenvalues in ascending order."""
    return jacobi_eigh(as_kelvin(c))[0]


def is_positive_definite(c, tol=EPS_NUM):
    """True if the smallest eigenvalue exceeds ``tol * ||C||_F``."""
    k = as_kelvin(c)
    return bool(spectrum(k)[0] > tol * np.linalg.norm(k))
