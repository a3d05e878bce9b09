"""Invariant subspaces selected by sc-sets, and the resolvent integrals that
control their sign character."""
import itertools
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .config import resolve
from .dense import as_matrix, eig, make_rng, matrix_to_json, norm2, orthonormalize
from .errors import (
    AxisEigenvalueError,
    DimensionMismatchError,
    ImaginaryObstruction,
    NotFoundError,
    StripViolationError,
)
from .krein import (
    SubspaceBasis,
    UNIFORM_NEG,
    UNIFORM_POS,
    classify,
    gram,
    is_hypermaximal_neutral,
    j1,
    j2,
    neutral_complement,
    neutral_split,
)
from .spectral import IMAGINARY, LEFT, RIGHT


@dataclass
class ScSet:
    """One eigenvalue index from each skew-conjugate pair, plus the neutral
    invariant halves chosen inside imaginary root subspaces."""

    chosen: tuple
    signs: str
    imaginary: dict = field(default_factory=dict)
    usable: bool = True

    @property
    def key(self):
        return self.signs

    def to_json(self, spectral=None):
        imag = []
        for idx in sorted(self.imaginary):
            m = self.imaginary[idx]
            if m is None:
                imag.append(None)
            else:
                t = float(spectral.eigenvalues[idx].value.imag) if spectral is not None else None
                imag.append({"t": t, "M_basis": matrix_to_json(m.basis)})
        return {"chosen": list(self.chosen), "imaginary": imag}


def invariance_residual(t, basis):
    """``|(I - P_U) T P_U|_2`` with ``P_U`` the orthogonal projector onto ``U``."""
    q = orthonormalize(basis)
    if q.shape[1] == 0:
        return 0.0
    tq = t @ q
    return norm2(tq - q @ (q.conj().T @ tq))


def _invariant_closure(nil, vectors):
    cols = []
    for v in vectors:
        x = v
        for _ in range(nil.shape[0]):
            if np.linalg.norm(x) <= 1e-13:
                break
            cols.append(x)
            x = nil @ x
    if not cols:
        return np.zeros((nil.shape[0], 0), complex)
    return orthonormalize(np.column_stack(cols), 1e-9)


def neutral_invariant_split(t, lbasis, chains=None, tols=None, seed=0, trials=1000):
    """Half-dimensional ``T``-invariant J1-neutral subspace of ``L(it)``.

    ``lbasis`` spans the root subspace (orthonormal columns).  Candidates:
    prefixes of the Jordan chains, then invariant closures of seeded random
    vectors, then a plain neutral split when ``T`` acts as a scalar.
    Returns a :class:`SubspaceBasis` (ambient coordinates) whose
    certificates include the complementary neutral ``N_it``.
    """
    tols = resolve(tols)
    t = as_matrix(t)
    lb = orthonormalize(lbasis)
    m = lb.shape[1]
    form = j1(t.shape[0] // 2)
    g = gram(form, lb)
    mu = np.linalg.eigvalsh(g)
    signature = (int(np.sum(mu > 0)), int(np.sum(mu < 0)))
    scale = max(1.0, norm2(t))
    tol = tols.neutral_tol * scale
    if m % 2 or signature[0] != signature[1]:
        raise NotFoundError("root subspace has unbalanced J1 signature", signature)
    h = m // 2
    tl = lb.conj().T @ t @ lb
    lam = np.trace(tl) / m
    nil = tl - lam * np.eye(m)

    def accept(coords):
        if coords.shape[1] != h:
            return None
        if norm2(coords.conj().T @ g @ coords) > tol:
            return None
        if invariance_residual(tl, coords) > tols.inv_tol * scale:
            return None
        return coords

    found = None
    if norm2(nil) <= tols.cluster_rel * scale * 10:
        split = neutral_split(g, tols.neutral_tol)
        if split is not None:
            found = split[0]
    if found is None and chains:
        local = [lb.conj().T @ c for c in chains]
        ranges = [range(c.shape[1] + 1) for c in local]
        for prefix in itertools.product(*ranges):
            if sum(prefix) != h:
                continue
            cols = [c[:, :p] for c, p in zip(local, prefix) if p]
            found = accept(orthonormalize(np.hstack(cols)))
            if found is not None:
                break
    if found is None:
        rng = make_rng(seed)
        for _ in range(trials):
            k = int(rng.integers(1, h + 1))
            vecs = [rng.standard_normal(m) + 1j * rng.standard_normal(m) for _ in range(k)]
            found = accept(_invariant_closure(nil, vecs))
            if found is not None:
                break
    if found is None:
        raise NotFoundError("no invariant neutral half found", signature)
    comp = neutral_complement(g, found)
    sub = SubspaceBasis(lb @ found)
    sub.certificates["j1_neutral"] = norm2(gram(form, sub))
    sub.certificates["invariant_under"] = ("T", invariance_residual(t, sub.basis))
    sub.certificates["complement"] = lb @ comp
    sub.certificates["complement_neutral"] = norm2(gram(form, lb @ comp))
    return sub


def _imaginary_halves(t, s, tols, seed):
    halves, obstructed = {}, []
    for idx in s.indices(IMAGINARY):
        try:
            halves[idx] = neutral_invariant_split(t, s.root_bases[idx], s.chains[idx], tols, seed)
        except NotFoundError:
            halves[idx] = None
            obstructed.append(idx)
    return halves, obstructed


def scset_from_signs(s, signs, halves=None):
    """sc-set choosing the RIGHT member where ``signs[j] == '+'`` for pair ``j``."""
    pairs = s.pairing.pairs
    if len(signs) != len(pairs):
        raise ValueError("one sign per skew-conjugate pair required")
    chosen = tuple(sorted(r if c == "+" else l for c, (r, l) in zip(signs, pairs)))
    halves = halves or {}
    usable = all(v is not None for v in halves.values())
    return ScSet(chosen, signs, dict(halves), usable)


def enumerate_scsets(s, limit=64, tols=None, seed=0, strict=False):
    """All sc-sets, or the canonical two plus seeded random ones past ``limit``.

    sc-sets whose imaginary root subspaces admit no neutral invariant half
    come back with ``usable=False``; with ``strict`` that raises
    :class:`ImaginaryObstruction` instead.
    """
    tols = resolve(tols)
    npairs = len(s.pairing.pairs)
    halves, obstructed = _imaginary_halves(s.matrix, s, tols, seed)
    if obstructed and strict:
        raise ImaginaryObstruction(f"no neutral invariant split at indices {obstructed}")
    if 2 ** npairs <= limit:
        patterns = ["".join(p) for p in itertools.product("+-", repeat=npairs)]
    else:
        patterns = ["+" * npairs, "-" * npairs]
        seen = set(patterns)
        rng = make_rng(seed)
        budget = 50 * limit
        while len(patterns) < limit and budget:
            budget -= 1
            p = "".join("+" if b else "-" for b in rng.integers(0, 2, npairs))
            if p not in seen:
                seen.add(p)
                patterns.append(p)
    return [scset_from_signs(s, p, halves) for p in patterns]


def build_subspace(t, s, sigma, tols=None):
    """``U_sigma``: root subspaces of the chosen eigenvalues plus the imaginary halves."""
    tols = resolve(tols)
    t = as_matrix(t)
    cols = [s.root_bases[i] for i in sigma.chosen]
    for idx in sorted(sigma.imaginary):
        half = sigma.imaginary[idx]
        if half is None:
            raise ImaginaryObstruction(f"sc-set {sigma.key} is unusable (index {idx})")
        cols.append(half.basis)
    n2 = t.shape[0]
    z = np.hstack(cols) if cols else np.zeros((n2, 0), complex)
    q = orthonormalize(z, 1e-10)
    if q.shape[1] != n2 // 2:
        raise DimensionMismatchError(f"U_sigma has dimension {q.shape[1]}, expected {n2 // 2}")
    u = SubspaceBasis(q)
    form = j1(n2 // 2)
    u.certificates["invariant_under"] = ("T", invariance_residual(t, q))
    u.certificates["j1_neutral"] = norm2(gram(form, u))
    u.certificates["hypermaximal"] = is_hypermaximal_neutral(
        form, u, tols.neutral_tol * max(1.0, s.scale)
    )
    return u


def _axis_poles(t):
    w, _ = eig(t)
    return w


def _panels(poles, lo, hi, factor=0.5, min_width=1e-3):
    """Panel breakpoints on ``[lo, hi]`` sized by distance to ``i*t``-poles."""
    pts = [lo]
    x = lo
    while x < hi:
        d = float(np.min(np.abs(poles - 1j * x))) if poles.size else hi - lo
        step = max(factor * d, min_width)
        x = min(hi, x + step)
        pts.append(x)
    return np.array(pts)


_GL_CACHE = {}


def _gauss_nodes(edges, order=16):
    if order not in _GL_CACHE:
        _GL_CACHE[order] = np.polynomial.legendre.leggauss(order)
    x, w = _GL_CACHE[order]
    a = edges[:-1, None]
    b = edges[1:, None]
    half = 0.5 * (b - a)
    nodes = (0.5 * (a + b) + half * x[None, :]).ravel()
    weights = (half * w[None, :]).ravel()
    return nodes, weights


def _check_axis(t, poles, tols):
    ring = tols.ring_tol * max(1.0, norm2(t))
    if poles.size and np.min(np.abs(poles.real)) <= ring:
        raise AxisEigenvalueError("eigenvalue on (or too close to) the imaginary axis")


def pv_resolvent_diff(t, x, r, order=16, tols=None):
    """``(1/(i pi)) ∫_{-ir}^{ir} (T - z)^{-1} x dz`` by graded Gauss-Legendre panels.

    Tends to ``(P+ - P-) x`` as ``r`` grows, with error of order ``1/r``.
    """
    tols = resolve(tols)
    t = as_matrix(t)
    xs = as_matrix(x)
    poles = _axis_poles(t)
    _check_axis(t, poles, tols)
    nodes, weights = _gauss_nodes(_panels(poles, -r, r), order)
    # z = i s, dz = i ds  ->  (1/pi) ∫ (T - i s)^{-1} x ds
    acc = _kernels.weighted_resolvent_sum(
        t, xs, (1j * nodes).astype(complex), (weights / np.pi).astype(complex)
    )
    return acc.ravel() if np.ndim(x) == 1 else acc


def half_plane_projections(s):
    """Algebraic projections ``(P+, P-)`` onto the RIGHT/LEFT root subspaces."""
    right = [s.root_bases[i] for i in s.indices(RIGHT)]
    left = [s.root_bases[i] for i in s.indices(LEFT)]
    if s.indices(IMAGINARY):
        raise AxisEigenvalueError("spectrum meets the imaginary axis")
    n = s.dim
    wp = np.hstack(right) if right else np.zeros((n, 0), complex)
    wm = np.hstack(left) if left else np.zeros((n, 0), complex)
    v = np.hstack([wp, wm])
    vinv = np.linalg.inv(v)
    k = wp.shape[1]
    return v[:, :k] @ vinv[:k], v[:, k:] @ vinv[k:]


def pv_convergence(t, x, radii=(250.0, 500.0, 1000.0, 2000.0), tols=None):
    """Errors of :func:`pv_resolvent_diff` against ``(P+ - P-) x`` per radius.

    Returns ``{"radii", "errors", "ratios", "constant"}`` where ``constant``
    is the empirical ``max(r * error)``.
    """
    from .spectral import analyze_spectrum

    t = as_matrix(t)
    xv = np.asarray(x, dtype=complex).ravel()
    pp, pm = half_plane_projections(analyze_spectrum(t, tols))
    exact = (pp - pm) @ xv
    errs = [float(np.linalg.norm(pv_resolvent_diff(t, xv, r, tols=tols) - exact)) for r in radii]
    ratios = [a / b if b > 0 else np.inf for a, b in zip(errs, errs[1:])]
    return {
        "radii": list(map(float, radii)),
        "errors": errs,
        "ratios": ratios,
        "constant": max(r * e for r, e in zip(radii, errs)),
    }


def resolvent_l2_lowerbound(t, m=1.0, M=1.0, a=None, probes=None, R=None, order=16,
                            tols=None, seed=0):
    """Empirical and proof constants for ``∫ |(T - it)^{-1} x|^2 dt >= c |x|^2``.

    ``c_emp`` uses the integral truncated to ``[-R, R]`` (a lower bound of
    the full integral); the neglected tail is at most ``2 |x|^2 / R`` once
    ``|(T - it)^{-1}| <= 2/|t|``.  ``c_formula = m pi / (2 M sqrt(1 + a^2))``.
    """
    tols = resolve(tols)
    t = as_matrix(t)
    poles = _axis_poles(t)
    _check_axis(t, poles, tols)
    width = float(np.max(np.abs(poles.real)))
    if a is None:
        a = width
    if width > a * (1 + 1e-12):
        raise StripViolationError(f"spectrum reaches |Re| = {width:.6g} > a = {a:.6g}")
    if probes is None:
        rng = make_rng(seed)
        n = t.shape[0]
        probes = np.hstack([np.eye(n), rng.standard_normal((n, 8)) + 1j * rng.standard_normal((n, 8))])
    probes = as_matrix(probes)
    if R is None:
        R = 2000.0 * max(1.0, norm2(t))
    nodes, weights = _gauss_nodes(_panels(poles, -R, R), order)
    vals = _kernels.weighted_resolvent_sqnorm(
        t, probes, (1j * nodes).astype(complex), weights.astype(float)
    )
    ratios = vals / np.sum(np.abs(probes) ** 2, axis=0)
    c_emp = float(np.min(ratios))
    c_formula = m * np.pi / (2.0 * M * np.sqrt(1.0 + a * a))
    return {
        "c_emp": c_emp,
        "c_formula": float(c_formula),
        "tail_bound": 2.0 / R,
        "passed": bool(c_emp >= c_formula * (1 - tols.qtol)),
    }


def classify_Upm(t, s, tols=None):
    """J2 sign character of ``U+`` and ``U-`` built from the RIGHT/LEFT spectrum."""
    tols = resolve(tols)
    t = as_matrix(t)
    if s.indices(IMAGINARY):
        raise AxisEigenvalueError("spectrum meets the imaginary axis")
    n2 = t.shape[0]
    form = j2(n2 // 2)
    out = {}
    for name, cls in (("plus", RIGHT), ("minus", LEFT)):
        idx = s.indices(cls)
        z = np.hstack([s.root_bases[i] for i in idx]) if idx else np.zeros((n2, 0), complex)
        c = classify(form, SubspaceBasis.from_columns(z), tols.neutral_tol)
        out[name] = c
    out["uniform"] = out["plus"].kind == UNIFORM_POS and out["minus"].kind == UNIFORM_NEG
    return out
