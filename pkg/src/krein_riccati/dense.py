"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  The
eigensolver is our own Hessenberg + shifted QR (see ``_kernels``); rank,
null spaces and linear solves go through LAPACK via numpy.
"""
from collections import namedtuple

import numpy as np

from . import _kernels
from .config import resolve
from .errors import (
    ConvergenceFailure,
    DimensionCapError,
    NonSquareError,
    SingularError,
)

RankInfo = namedtuple("RankInfo", "rank range_basis null_basis singular_values")


def as_matrix(m):
    """Coerce to a finite 2-D complex array (copy)."""
    a = np.array(m, dtype=np.complex128)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    elif a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def _square(m, tols):
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise NonSquareError(f"matrix is {a.shape[0]}x{a.shape[1]}")
    if a.shape[0] > tols.max_dim:
        raise DimensionCapError(f"dimension {a.shape[0]} exceeds cap {tols.max_dim}")
    return a


def norm2(m):
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def herm(m):
    """Hermitian part ``(m + m^*)/2``."""
    return 0.5 * (m + m.conj().T)


def schur(m, tols=None):
    """Complex Schur form ``m = z @ r @ z^H``; returns ``(r, z)``."""
    tols = resolve(tols)
    a = _square(m, tols)
    n = a.shape[0]
    if n == 0:
        return a.copy(), a.copy()
    # shift by the mean diagonal so the QR sweeps act on a smaller matrix
    tau = np.trace(a) / n
    h, q = _kernels.hessenberg(a - tau * np.eye(n))
    info = _kernels.schur_qr(h, q, 30 * max(n, 2))
    if info < 0:
        raise ConvergenceFailure(f"QR iteration cap hit (n={n})")
    r = np.triu(h) + tau * np.eye(n)
    return r, q


def eig(m, tols=None):
    """All eigenvalues (with repetition) and unit eigenvectors of ``m``.

    Returns ``(w, v)`` with ``m @ v[:, k] ~ w[k] * v[:, k]``.  Each
    eigenvector's phase is fixed so its largest entry is real positive.
    """
    tols = resolve(tols)
    a = _square(m, tols)
    n = a.shape[0]
    if n == 0:
        return np.zeros(0, complex), np.zeros((0, 0), complex)
    r, z = schur(a, tols)
    y = _kernels.triangular_eigvecs(np.ascontiguousarray(r))
    v = z @ y
    v /= np.linalg.norm(v, axis=0)
    for k in range(n):
        j = np.argmax(np.abs(v[:, k]))
        v[:, k] *= abs(v[j, k]) / v[j, k]
    return np.diag(r).copy(), v


def eig_residuals(m, w, v):
    """``|m v_k - w_k v_k|`` for each returned pair."""
    m = as_matrix(m)
    return np.linalg.norm(m @ v - v * w[None, :], axis=0)


def rank(m, tol=None):
    """Numerical rank with orthonormal range and null-space bases.

    ``tol`` is relative to the largest singular value.
    """
    a = as_matrix(m)
    if tol is None:
        tol = resolve(None).rank_tol
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    rows, cols = a.shape
    if a.size == 0:
        return RankInfo(0, np.zeros((rows, 0), complex), np.eye(cols, dtype=complex), np.zeros(0))
    u, s, vh = np.linalg.svd(a)
    smax = s[0] if s.size else 0.0
    r = int(np.sum(s > tol * smax)) if smax > 0 else 0
    return RankInfo(r, u[:, :r], vh[r:].conj().T, s)


def smallest_right_singular(m, k):
    """Orthonormal basis of the ``k`` right singular directions with smallest singular values."""
    a = as_matrix(m)
    _, _, vh = np.linalg.svd(a)
    return vh[vh.shape[0] - k:].conj().T


def nullity(m, tol=None):
    return rank(m, tol).null_basis.shape[1]


def solve(m, rhs, tols=None):
    """Solve ``m @ y = rhs``; returns ``(y, cond)``.

    Raises :class:`SingularError` when the smallest singular value is at
    rounding level relative to the largest.
    """
    tols = resolve(tols)
    a = _square(m, tols)
    b = as_matrix(rhs)
    if b.shape[0] != a.shape[0]:
        raise ValueError("right-hand side has wrong number of rows")
    s = np.linalg.svd(a, compute_uv=False)
    n = a.shape[0]
    if n == 0:
        return b.copy(), 1.0
    if s[-1] <= n * np.finfo(float).eps * s[0] or s[0] == 0.0:
        raise SingularError("matrix is numerically singular", s[-1], np.inf)
    cond = float(s[0] / s[-1])
    return np.linalg.solve(a, b), cond


def orthonormalize(z, tol=1e-12):
    """Orthonormal basis for the column span of ``z`` (rank-revealing)."""
    z = as_matrix(z)
    if z.shape[1] == 0:
        return z.copy()
    info = rank(z, tol)
    return info.range_basis


def principal_angles(u, v):
    """Principal angles (ascending) between the column spans of ``u`` and ``v``."""
    qu = orthonormalize(u)
    qv = orthonormalize(v)
    if qu.shape[1] == 0 or qv.shape[1] == 0:
        return np.zeros(0)
    cross = qu.conj().T @ qv
    cos = np.linalg.svd(cross, compute_uv=False)
    # arccos is ill-conditioned near 0, so small angles come from sines
    sin = np.sort(np.linalg.svd(qv - qu @ cross, compute_uv=False))[: cos.size]
    big = np.arccos(np.clip(cos, -1.0, 1.0))
    small = np.arcsin(np.clip(sin, 0.0, 1.0))
    return np.where(cos ** 2 < 0.5, big, small)


def same_subspace(u, v, angle_tol=1e-8):
    qu = orthonormalize(u)
    qv = orthonormalize(v)
    if qu.shape[1] != qv.shape[1]:
        return False
    if qu.shape[1] == 0:
        return True
    return float(np.max(principal_angles(qu, qv))) <= angle_tol


def random_unitary(n, rng):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))[None, :]


def random_complex(shape, rng):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def make_rng(seed):
    return np.random.default_rng(np.random.SeedSequence(seed))


def spawn_rngs(seed, count):
    """``count`` independent generators derived from one seed."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


# -- matrix JSON --------------------------------------------------------------

def matrix_to_json(m):
    a = as_matrix(m)
    flat = a.reshape(-1)
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "re": [float(x) for x in flat.real],
        "im": [float(x) for x in flat.imag],
    }


def matrix_from_json(obj):
    try:
        rows = int(obj["rows"])
        cols = int(obj["cols"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", [0.0] * (rows * cols)), dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix JSON: {exc}") from exc
    if re.size != rows * cols or im.size != rows * cols:
        raise ValueError("matrix JSON entry count does not match rows*cols")
    return as_matrix((re + 1j * im).reshape(rows, cols))
