"""Riccati solutions from graph subspaces, the canonical pair, ordering and
projection certificates, and a brute-force oracle."""
import itertools
from dataclasses import dataclass, field

import numpy as np

from .config import resolve
from .dense import as_matrix, herm, matrix_to_json, norm2
from .errors import (
    AxisEigenvalueError,
    DefectiveError,
    DimensionMismatchError,
    NotAGraphError,
    NotUniformError,
    SingularGapError,
)
from .krein import classify_gram


@dataclass
class RiccatiSolution:
    X: np.ndarray
    source: object = "EXTERNAL"
    residual: float = None
    weak_residual: float = None
    asymmetry: float = 0.0
    definiteness: object = None
    closed_loop: np.ndarray = None
    invertibility: float = None
    extra: dict = field(default_factory=dict)

    def to_json(self):
        src = self.source if isinstance(self.source, str) else self.source.key
        return {
            "scset": src,
            "X": matrix_to_json(self.X),
            "residual": self.residual,
            "weak_residual": self.weak_residual,
            "asymmetry": self.asymmetry,
            "definiteness": str(self.definiteness) if self.definiteness is not None else None,
            "closed_loop": [[float(z.real), float(z.imag)] for z in (self.closed_loop if self.closed_loop is not None else [])],
            "invertibility": self.invertibility,
        }


def _basis(u):
    return u.basis if hasattr(u, "basis") else as_matrix(u)


def extract_graph(u, tols=None, source="EXTERNAL"):
    """``X = Z2 Z1^{-1}`` for ``U = span [Z1; Z2]``, symmetrised.

    Raises :class:`NotAGraphError` when ``Z1`` is singular or worse
    conditioned than ``graph_cond_cap``.
    """
    tols = resolve(tols)
    z = _basis(u)
    n2, m = z.shape
    n = n2 // 2
    if m != n or n2 != 2 * n:
        raise DimensionMismatchError(f"basis is {n2}x{m}, need {2 * n}x{n}")
    z1, z2 = z[:n], z[n:]
    s = np.linalg.svd(z1, compute_uv=False)
    if s[-1] == 0.0 or s[0] / s[-1] > tols.graph_cond_cap:
        raise NotAGraphError("upper block is (numerically) singular", float(s[-1]))
    # X Z1 = Z2  <=>  Z1^* X^* = Z2^*
    x = np.linalg.solve(z1.conj().T, z2.conj().T).conj().T
    asym = norm2(x - x.conj().T)
    return RiccatiSolution(herm(x), source, asymmetry=float(asym))


def riccati_matrix(h, x):
    return h.A.conj().T @ x + x @ h.A + x @ h.B @ x - h.C


def riccati_residual(h, x):
    """Frobenius and spectral norms of ``A^*X + XA + XBX - C``.

    The spectral norm equals the sup of the weak form over unit ``u, v``.
    """
    r = riccati_matrix(h, as_matrix(x))
    return float(np.linalg.norm(r)), norm2(r)


def residual_scale(h, x):
    nx = norm2(x)
    return norm2(h.A) * nx + norm2(h.C) + norm2(h.B) * nx * nx


def complete_solution(h, sol, tols=None):
    """Fill residuals, definiteness, closed-loop spectrum and invertibility."""
    from .dense import eig

    tols = resolve(tols)
    x = sol.X
    sol.residual, sol.weak_residual = riccati_residual(h, x)
    sol.definiteness = classify_gram(2.0 * x, tols.neutral_tol * max(1.0, norm2(x)))
    sol.closed_loop = eig(h.A + h.B @ x, tols)[0]
    sol.invertibility = float(np.linalg.svd(x, compute_uv=False)[-1])
    ev = np.linalg.eigvalsh(x)
    sol.extra["min_eig"] = float(ev[0])
    sol.extra["max_eig"] = float(ev[-1])
    return sol


def accepted(h, sol, tols=None):
    tols = resolve(tols)
    scale = max(1.0, residual_scale(h, sol.X))
    return (sol.residual <= tols.ricc_tol * scale
            and sol.asymmetry <= tols.sym_tol * max(1.0, norm2(sol.X)))


def solution_for(h, s, sigma, tols=None):
    """Build ``U_sigma`` and extract its graph as a completed solution."""
    from .subspaces import build_subspace

    u = build_subspace(h.T, s, sigma, tols)
    sol = extract_graph(u, tols, source=sigma)
    sol.extra["subspace"] = u
    return complete_solution(h, sol, tols)


def canonical_pair(h, s, tols=None):
    """``(X+, X-)`` from the RIGHT and LEFT halves of the spectrum."""
    from .subspaces import scset_from_signs

    if s.pairing.imaginary:
        raise AxisEigenvalueError("spectrum meets the imaginary axis")
    npairs = len(s.pairing.pairs)
    xp = solution_for(h, s, scset_from_signs(s, "+" * npairs), tols)
    xm = solution_for(h, s, scset_from_signs(s, "-" * npairs), tols)
    for sol in (xp, xm):
        if sol.invertibility > 0:
            sol.extra["inverse_norm"] = 1.0 / sol.invertibility
    return xp, xm


def _mat(x):
    return x.X if isinstance(x, RiccatiSolution) else as_matrix(x)


def certify_order(x_minus, x, x_plus, tols=None):
    """Loewner order ``X- <= X <= X+`` and, when invertible, of the inverses."""
    tols = resolve(tols)
    xm, xx, xp = _mat(x_minus), _mat(x), _mat(x_plus)
    upper = float(np.linalg.eigvalsh(herm(xp - xx))[0])
    lower = float(np.linalg.eigvalsh(herm(xx - xm))[0])
    report = {
        "upper_min_eig": upper,
        "lower_min_eig": lower,
        "passed": upper >= -tols.order_tol and lower >= -tols.order_tol,
    }
    smins = [np.linalg.svd(m, compute_uv=False)[-1] for m in (xm, xx, xp)]
    if min(smins) > 1e-12 * max(1.0, max(norm2(m) for m in (xm, xx, xp))):
        im, ix, ip = (np.linalg.inv(m) for m in (xm, xx, xp))
        inv_upper = float(np.linalg.eigvalsh(herm(ip - ix))[0])
        inv_lower = float(np.linalg.eigvalsh(herm(ix - im))[0])
        report["inverse_upper_min_eig"] = inv_upper
        report["inverse_lower_min_eig"] = inv_lower
        report["inverse_passed"] = inv_upper >= -tols.order_tol and inv_lower >= -tols.order_tol
    return report


def projection_representation(x, x_plus, x_minus, tols=None):
    """``P = (X+ - X-)^{-1} (X - X-)`` with idempotency and reconstruction residuals."""
    tols = resolve(tols)
    xx, xp, xm = _mat(x), _mat(x_plus), _mat(x_minus)
    gap = xp - xm
    s = np.linalg.svd(gap, compute_uv=False)
    if s[-1] <= 1e-13 * max(1.0, s[0]):
        raise SingularGapError("X+ - X- is not invertible")
    p = np.linalg.solve(gap, xx - xm)
    eye = np.eye(p.shape[0])
    idem = norm2(p @ p - p)
    recon = float(np.linalg.norm(xx - xp @ p - xm @ (eye - p)))
    return p, {
        "idempotency": idem,
        "reconstruction": recon,
        "passed": idem <= tols.proj_tol and recon <= tols.ricc_tol * max(1.0, norm2(xx)),
    }


def match_spectra(a, b, tol):
    """Greedy one-to-one matching by distance; returns ``(passed, max_distance)``."""
    a = list(np.asarray(a, dtype=complex))
    b = list(np.asarray(b, dtype=complex))
    if len(a) != len(b):
        return False, np.inf
    pairs = sorted((abs(x - y), i, j) for i, x in enumerate(a) for j, y in enumerate(b))
    ua, ub, worst = set(), set(), 0.0
    for d, i, j in pairs:
        if i in ua or j in ub:
            continue
        ua.add(i)
        ub.add(j)
        worst = max(worst, d)
    return worst <= tol, float(worst)


def closed_loop_spectrum(h, x, sigma, s, tols=None):
    """Match ``eig(A + BX)`` against the eigenvalues chosen by ``sigma``."""
    from .dense import eig

    tols = resolve(tols)
    xx = _mat(x)
    cl = eig(h.A + h.B @ xx, tols)[0]
    target = []
    for i in sigma.chosen:
        target += [s.eigenvalues[i].value] * s.eigenvalues[i].alg_mult
    for idx, half in sorted(sigma.imaginary.items()):
        target += [s.eigenvalues[idx].value] * half.dim
    ok, worst = match_spectra(cl, target, tols.match_tol * max(1.0, s.scale))
    return {"closed_loop": cl, "target": np.array(target), "max_distance": worst, "passed": ok}


def split_bound(x_plus, x_minus, gamma_pos=None):
    """``sqrt(2/delta) max(|X+|, |X-|)`` with ``delta = (gamma/(|X+| + |X-|))^2 / 2``."""
    xp, xm = _mat(x_plus), _mat(x_minus)
    if gamma_pos is None:
        gamma_pos = float(np.linalg.eigvalsh(herm(xp))[0])
    if gamma_pos <= 0:
        raise NotUniformError("X+ is not uniformly positive")
    npl, nmi = norm2(xp), norm2(xm)
    delta = 0.5 * (gamma_pos / (npl + nmi)) ** 2
    return float(np.sqrt(2.0 / delta) * max(npl, nmi))


def brute_force_solutions(h, tols=None):
    """Every Hermitian solution from ``n``-subsets of eigenvectors of ``T``.

    Independent of the sc-set route: eigenvectors come from LAPACK.
    """
    tols = resolve(tols)
    t = h.T
    if t.shape[0] > 12:
        raise ValueError("brute force limited to 2n <= 12")
    w, v = np.linalg.eig(t)
    scale = max(1.0, norm2(t))
    gaps = [abs(a - b) for a, b in itertools.combinations(w, 2)]
    if gaps and min(gaps) <= tols.cluster_rel * scale:
        raise DefectiveError("repeated eigenvalues; brute force needs a simple spectrum")
    n = h.n
    found = []
    for subset in itertools.combinations(range(2 * n), n):
        z = v[:, subset]
        z1, z2 = z[:n], z[n:]
        s = np.linalg.svd(z1, compute_uv=False)
        if s[-1] == 0.0 or s[0] / s[-1] > tols.graph_cond_cap:
            continue
        x = np.linalg.solve(z1.T, z2.T).T
        if norm2(x - x.conj().T) > tols.sym_tol * max(1.0, norm2(x)):
            continue
        x = herm(x)
        res = float(np.linalg.norm(riccati_matrix(h, x)))
        if res > tols.ricc_tol * max(1.0, residual_scale(h, x)):
            continue
        if any(np.linalg.norm(x - y) <= tols.dedup_rel * max(1.0, np.linalg.norm(y)) for y in found):
            continue
        found.append(x)
    return found


def same_solution_sets(xs, ys, tol):
    """Set equality of two lists of matrices under Frobenius distance ``tol``."""
    if len(xs) != len(ys):
        return False
    left = list(range(len(ys)))
    for x in xs:
        hit = next((j for j in left if np.linalg.norm(x - ys[j]) <= tol), None)
        if hit is None:
            return False
        left.remove(hit)
    return True
