"""Hamiltonian matrices ``T = [[A, B], [C, -A^*]]`` and their structural checks."""
from dataclasses import dataclass

import numpy as np

from .config import resolve
from .dense import as_matrix, eig, herm, norm2, rank
from .errors import (
    GammaUnsetError,
    NotHermitianError,
    RaySpectrumCollision,
    SizeMismatchError,
    ZeroDenominatorError,
)
from .krein import j1, j2


@dataclass
class HamiltonianMatrix:
    n: int
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    T: np.ndarray
    G: np.ndarray
    S: np.ndarray
    gamma: float = None
    b_norm: float = None
    nonnegative: bool = False
    asymmetry: tuple = (0.0, 0.0)


def _block(a, b, c):
    return np.block([[a, b], [c, -a.conj().T]])


def assemble(A, B, C, tols=None, gamma=None):
    """Build and validate a Hamiltonian matrix.

    ``B`` and ``C`` must be Hermitian within ``herm_tol`` (relative); they
    are stored exactly Hermitian.  ``gamma`` defaults to the smallest
    eigenvalue of ``B`` and ``C`` when that is positive.
    """
    tols = resolve(tols)
    a, b, c = as_matrix(A), as_matrix(B), as_matrix(C)
    n = a.shape[0]
    for name, m in (("A", a), ("B", b), ("C", c)):
        if m.shape != (n, n):
            raise SizeMismatchError(f"{name} has shape {m.shape}, expected {(n, n)}")
    asym = []
    for name, m in (("B", b), ("C", c)):
        d = norm2(m - m.conj().T)
        asym.append(d)
        if d > tols.herm_tol * max(1.0, norm2(m)):
            raise NotHermitianError(f"{name} is not Hermitian (|{name}-{name}*| = {d:.3e})", name, d)
    b, c = herm(b), herm(c)
    z = np.zeros((n, n), complex)
    t = _block(a, b, c)
    g = np.block([[a, z], [z, -a.conj().T]])
    s = np.block([[z, b], [c, z]])
    lb = float(np.linalg.eigvalsh(b)[0]) if n else 0.0
    lc = float(np.linalg.eigvalsh(c)[0]) if n else 0.0
    nonneg = min(lb, lc) >= -tols.herm_tol
    if gamma is None and min(lb, lc) > tols.herm_tol:
        gamma = min(lb, lc)
    return HamiltonianMatrix(
        n, a, b, c, t, g, s, gamma, max(norm2(b), norm2(c)), nonneg, tuple(asym)
    )


def _t_of(h):
    return h.T if isinstance(h, HamiltonianMatrix) else as_matrix(h)


def check_j1_skew(h):
    """``|J1 T + T^* J1| / |T|`` for a Hamiltonian (or any even-sized matrix)."""
    t = _t_of(h)
    nt = norm2(t)
    if nt == 0.0:
        return 0.0
    j = j1(t.shape[0] // 2).matrix
    return norm2(j @ t + t.conj().T @ j) / nt


def check_j2_accretive(h, tols=None):
    """Hermitian part of ``J2 T`` and its smallest eigenvalue.

    Returns ``(herm_part, min_eig, block_residual)``; the last entry is the
    distance of ``herm_part`` from ``diag(C, B)``.
    """
    tols = resolve(tols)
    t = _t_of(h)
    j = j2(t.shape[0] // 2).matrix
    hp = 0.5 * (j @ t + t.conj().T @ j)
    min_eig = float(np.linalg.eigvalsh(hp)[0])
    resid = 0.0
    if isinstance(h, HamiltonianMatrix):
        z = np.zeros((h.n, h.n), complex)
        resid = norm2(hp - np.block([[h.C, z], [z, h.B]]))
    return hp, min_eig, resid


def check_spectral_symmetry(h, s, tols=None):
    """Report on skew-conjugate pairing of the spectrum ``s`` of ``h.T``."""
    from .spectral import pair_skew_conjugate

    pairing = pair_skew_conjugate(s, tols, strict=False)
    return {
        "pairs": [
            {
                "indices": [i, j],
                "values": [complex(s.eigenvalues[i].value), complex(s.eigenvalues[j].value)],
                "mult": [s.eigenvalues[i].alg_mult, s.eigenvalues[j].alg_mult],
            }
            for i, j in pairing.pairs
        ],
        "imaginary": pairing.imaginary,
        "violations": pairing.violations,
        "passed": not pairing.violations,
    }


def check_gap_strip(h, s, tols=None):
    """``(gap_ok, strip_ok)``: eigenvalues obey ``gamma <= |Re| (<= b_norm)``."""
    tols = resolve(tols)
    if h.gamma is None:
        raise GammaUnsetError("gamma is not set for this Hamiltonian")
    axis = tols.axis_rel * s.scale
    re = np.abs(s.values().real)
    gap_ok = bool(np.all(re >= h.gamma - axis))
    strip_ok = gap_ok and bool(np.all(re <= h.b_norm + axis))
    return gap_ok, strip_ok


def check_imaginary_kernels(h, s=None, tols=None):
    """Values ``t`` where ``ker(A - it) ∩ ker C`` or ``ker(A^* + it) ∩ ker B`` is nontrivial."""
    tols = resolve(tols)
    w, _ = eig(h.A, tols)
    scale = max(1.0, norm2(h.A))
    ts = []
    for lam in w:
        if abs(lam.real) > tols.axis_rel * scale:
            continue
        t = float(lam.imag)
        if any(abs(t - u) <= tols.cluster_rel * scale for u in ts):
            continue
        ts.append(t)
    bad = []
    eye = np.eye(h.n)
    for t in ts:
        m1 = np.vstack([h.A - 1j * t * eye, h.C])
        m2 = np.vstack([h.A.conj().T + 1j * t * eye, h.B])
        null1 = h.n - rank(m1, 1e-10).rank
        null2 = h.n - rank(m2, 1e-10).rank
        if null1 or null2:
            bad.append(t)
    return bad


def _dominance_values(blocks, zs):
    out = []
    for z in zs:
        worst = 0.0
        for g, s in blocks:
            shifted = g - z * np.eye(g.shape[0])
            d = np.linalg.svd(shifted, compute_uv=False)[-1]
            if d <= 1e-12 * max(1.0, abs(z)):
                raise RaySpectrumCollision(f"sample z={z} hits the spectrum of G")
            worst = max(worst, norm2(s @ np.linalg.inv(shifted)))
        out.append(worst)
    return out


def check_r0_dominance(h, direction=1.0, samples=(10.0, 100.0, 1000.0), tols=None):
    """Decay table of ``|S (G - z)^{-1}|`` along the ray ``z = s * direction``.

    ``h`` may be a :class:`HamiltonianMatrix` or a modal model (anything
    with a ``modes`` list); for the latter the supremum over modes is taken.
    """
    tols = resolve(tols)
    direction = complex(direction) / abs(direction)
    if hasattr(h, "modes"):
        blocks = [(m.G, m.S) for m in h.modes]
    else:
        blocks = [(h.G, h.S)]
    zs = [s * direction for s in samples]
    values = _dominance_values(blocks, zs)
    half = len(values) // 2
    tail = values[half:]
    decreasing = all(b <= a * (1 + 1e-12) for a, b in zip(tail, tail[1:]))
    return {
        "table": [[float(abs(z)), float(v)] for z, v in zip(zs, values)],
        "passed": bool(values[-1] <= tols.dominance_tol and decreasing),
    }


def subordination_estimate(probes, p):
    """``max ‖Su‖ / (‖u‖^{1-p} ‖Gu‖^p)`` over probe triples ``(‖Su‖, ‖u‖, ‖Gu‖)``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    best = 0.0
    for su, u, gu in probes:
        den = u ** (1.0 - p) * gu ** p
        if den == 0.0:
            raise ZeroDenominatorError("probe in the kernel of G (or zero probe)")
        best = max(best, su / den)
    return best


def basis_probes(g, s):
    """Probe triples from the standard basis vectors outside ``ker G``."""
    out = []
    for j in range(g.shape[1]):
        gu = float(np.linalg.norm(g[:, j]))
        if gu == 0.0:
            continue
        out.append((float(np.linalg.norm(s[:, j])), 1.0, gu))
    return out


def modal_probes(model):
    """Probe triples per mode: ``{k: [(‖Su‖, ‖u‖, ‖Gu‖), ...]}``."""
    return {k: basis_probes(m.G, m.S) for k, m in zip(model.labels, model.modes)}


def subordination_profile(model, p):
    """``b_p`` restricted to each mode, keyed by mode label."""
    return {k: subordination_estimate(pr, p) for k, pr in modal_probes(model).items()}


def subordination_exponent(model_factory, ladder=(64, 128, 256, 512, 1024), iters=30, rel=0.05):
    """Smallest ``p`` for which ``b_p`` looks bounded along a ``kmax`` ladder.

    ``model_factory(kmax)`` builds the truncated model.  ``b_p`` counts as
    bounded when its last two ladder values differ by less than ``rel``.
    """
    probes = modal_probes(model_factory(max(ladder)))
    labels = sorted(probes)

    def bounded(p):
        vals = []
        for kmax in ladder:
            sel = [t for k in labels if k <= kmax for t in probes[k]]
            vals.append(subordination_estimate(sel, p))
        return abs(vals[-1] - vals[-2]) <= rel * max(abs(vals[-2]), 1e-300)

    if not bounded(1.0):
        return None
    lo, hi = 0.0, 1.0
    if bounded(0.0):
        return 0.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if bounded(mid):
            hi = mid
        else:
            lo = mid
    return hi
