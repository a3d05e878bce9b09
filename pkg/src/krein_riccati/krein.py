"""Indefinite inner products on the doubled space and subspace classification.

``J1 = [[0, -iI], [iI, 0]]`` and ``J2 = [[0, I], [I, 0]]``; the Gram matrix
of a basis ``Z`` is ``Z^* J Z``.
"""
from dataclasses import dataclass, field

import numpy as np

from .config import resolve
from .dense import as_matrix, norm2, orthonormalize, principal_angles
from .errors import DegenerateError, DimensionMismatchError

NEUTRAL = "NEUTRAL"
NONNEG = "NONNEG"
NONPOS = "NONPOS"
UNIFORM_POS = "UNIFORM_POS"
UNIFORM_NEG = "UNIFORM_NEG"
INDEFINITE = "INDEFINITE"


@dataclass(frozen=True)
class KreinForm:
    kind: str
    matrix: np.ndarray

    @property
    def dimension(self):
        return self.matrix.shape[0]


def j1(n):
    z = np.zeros((n, n), complex)
    eye = np.eye(n, dtype=complex)
    return KreinForm("J1", np.block([[z, -1j * eye], [1j * eye, z]]))


def j2(n):
    z = np.zeros((n, n), complex)
    eye = np.eye(n, dtype=complex)
    return KreinForm("J2", np.block([[z, eye], [eye, z]]))


@dataclass
class SubspaceBasis:
    """Orthonormal column basis of a subspace plus check results.

    ``certificates`` only holds entries for checks that actually ran; each
    entry stores its residual.
    """

    basis: np.ndarray
    certificates: dict = field(default_factory=dict)

    @classmethod
    def from_columns(cls, z, tol=1e-12):
        return cls(orthonormalize(z, tol))

    @property
    def ambient_dim(self):
        return self.basis.shape[0]

    @property
    def dim(self):
        return self.basis.shape[1]


def _basis(u):
    return u.basis if isinstance(u, SubspaceBasis) else as_matrix(u)


def gram(form, u):
    z = _basis(u)
    if z.shape[0] != form.dimension:
        raise DimensionMismatchError(
            f"subspace lives in dimension {z.shape[0]}, form in {form.dimension}"
        )
    g = z.conj().T @ form.matrix @ z
    return 0.5 * (g + g.conj().T)


@dataclass(frozen=True)
class Classification:
    kind: str
    alpha: float = None
    eigenvalues: tuple = ()

    def __str__(self):
        return self.kind if self.alpha is None else f"{self.kind}({self.alpha:.6g})"


def classify_gram(g, tol):
    mu = np.linalg.eigvalsh(g) if g.size else np.zeros(0)
    ev = tuple(float(x) for x in mu)
    if mu.size == 0 or np.all(np.abs(mu) <= tol):
        return Classification(NEUTRAL, None, ev)
    lo, hi = float(mu[0]), float(mu[-1])
    if lo > tol:
        return Classification(UNIFORM_POS, lo, ev)
    if lo >= -tol:
        return Classification(NONNEG, None, ev)
    if hi < -tol:
        return Classification(UNIFORM_NEG, -hi, ev)
    if hi <= tol:
        return Classification(NONPOS, None, ev)
    return Classification(INDEFINITE, None, ev)


def classify(form, u, tol=None):
    """Sign character of the form restricted to ``u``, from the Gram eigenvalues."""
    if tol is None:
        tol = resolve(None).neutral_tol
    return classify_gram(gram(form, orthonormalize(_basis(u))), tol)


def is_hypermaximal_neutral(form, u, tol=None):
    """Neutral and of half the ambient dimension (equivalent to ``U = U^[perp]`` here)."""
    if tol is None:
        tol = resolve(None).neutral_tol
    z = orthonormalize(_basis(u))
    if form.dimension % 2:
        return False
    if z.shape[1] != form.dimension // 2:
        return False
    return classify_gram(gram(form, z), tol).kind == NEUTRAL


def orthogonal_companion(form, u):
    """The form-orthogonal complement ``{y : [y|x] = 0 for all x in u}``."""
    z = orthonormalize(_basis(u))
    a = z.conj().T @ form.matrix
    if a.shape[0] == 0:
        return np.eye(form.dimension, dtype=complex)
    _, s, vh = np.linalg.svd(a)
    r = int(np.sum(s > 1e-12 * max(s[0], 1e-300)))
    return vh[r:].conj().T


def is_self_orthogonal(form, u, angle_tol=None):
    """Direct check ``U = U^[perp]`` by principal angles."""
    if angle_tol is None:
        angle_tol = resolve(None).angle_tol
    z = orthonormalize(_basis(u))
    comp = orthogonal_companion(form, z)
    if comp.shape[1] != z.shape[1]:
        return False
    return float(np.max(principal_angles(z, comp), initial=0.0)) <= angle_tol


def neutral_split(g, tol=None):
    """Split the space carrying Hermitian Gram ``g`` into two neutral halves.

    Returns ``(M, N)`` as coordinate bases (columns in ``C^m``), or ``None``
    when the signature is unbalanced.  Raises :class:`DegenerateError` if
    ``g`` is numerically singular.

    Pairs each positive eigendirection ``p`` with a negative one ``q`` and
    takes ``p/sqrt(mu) +- q/sqrt(|nu|)``.
    """
    if tol is None:
        tol = resolve(None).neutral_tol
    g = as_matrix(g)
    g = 0.5 * (g + g.conj().T)
    mu, vecs = np.linalg.eigh(g)
    if mu.size and np.min(np.abs(mu)) <= tol * max(1.0, norm2(g)):
        raise DegenerateError("Gram matrix is numerically singular")
    pos = np.where(mu > 0)[0]
    neg = np.where(mu < 0)[0][::-1]
    if len(pos) != len(neg):
        return None
    p = vecs[:, pos] / np.sqrt(mu[pos])[None, :]
    q = vecs[:, neg] / np.sqrt(-mu[neg])[None, :]
    m_basis = orthonormalize(p + q)
    n_basis = orthonormalize(p - q)
    return m_basis, n_basis


def neutral_complement(g, m_basis):
    """A neutral complement ``N`` of the neutral subspace ``M`` (coordinates).

    Starts from ``W = g M`` (so ``M^* g W`` is invertible) and corrects
    ``W -> W + M K`` until ``W`` is neutral.
    """
    g = as_matrix(g)
    w = g @ m_basis
    f = m_basis.conj().T @ g @ w
    gw = w.conj().T @ g @ w
    k = -0.5 * np.linalg.solve(f.conj().T, gw)
    return orthonormalize(w + m_basis @ k)
