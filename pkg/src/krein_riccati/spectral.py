"""Eigenstructure: clustered eigenvalues, Jordan chains, root subspaces,
Riesz projections, skew-conjugate pairing and counting functions."""
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .config import resolve
from .dense import as_matrix, eig, matrix_to_json, norm2, smallest_right_singular, orthonormalize
from .errors import (
    EigenvalueOnContourError,
    NonSquareError,
    QuadratureDivergence,
    SymmetryViolation,
)

LEFT = "LEFT"
RIGHT = "RIGHT"
IMAGINARY = "IMAGINARY"


@dataclass
class Eigenvalue:
    value: complex
    alg_mult: int
    geo_mult: int
    cls: str


@dataclass
class Pairing:
    pairs: list  # (right_index, left_index)
    imaginary: list
    violations: list = field(default_factory=list)


@dataclass
class SpectralData:
    """Eigenvalues of ``matrix`` with their root subspaces and Jordan chains.

    ``chains[i]`` is a list of ``dim x length`` arrays whose columns
    ``x_1 .. x_m`` satisfy ``(T - lambda) x_1 = 0`` and
    ``(T - lambda) x_k = x_{k-1}``.
    """

    matrix: np.ndarray
    eigenvalues: list
    root_bases: list
    chains: list
    pairing: Pairing
    scale: float
    ambiguities: list = field(default_factory=list)
    chain_residual: float = 0.0

    @property
    def dim(self):
        return self.matrix.shape[0]

    def values(self):
        return np.array([e.value for e in self.eigenvalues], dtype=complex)

    def with_multiplicity(self):
        """Eigenvalues repeated by algebraic multiplicity."""
        return np.concatenate(
            [np.full(e.alg_mult, e.value, dtype=complex) for e in self.eigenvalues]
        ) if self.eigenvalues else np.zeros(0, complex)

    def indices(self, cls):
        return [i for i, e in enumerate(self.eigenvalues) if e.cls == cls]

    def to_json(self):
        return {
            "eigenvalues": [
                {
                    "value_re": float(e.value.real),
                    "value_im": float(e.value.imag),
                    "alg_mult": e.alg_mult,
                    "geo_mult": e.geo_mult,
                    "class": e.cls,
                }
                for e in self.eigenvalues
            ],
            "chains": [
                [[matrix_to_json(c[:, j]) for j in range(c.shape[1])] for c in chains]
                for chains in self.chains
            ],
            "pairing": {
                "pairs": [list(p) for p in self.pairing.pairs],
                "imaginary": list(self.pairing.imaginary),
                "violations": list(self.pairing.violations),
            },
            "ambiguities": [list(a) for a in self.ambiguities],
            "chain_residual": float(self.chain_residual),
        }


def _cluster(w, tol):
    """Single-linkage clusters of ``w`` with link distance ``tol``."""
    n = len(w)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(w[i] - w[j]) <= tol:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _complement_columns(candidates, existing, tol):
    """Columns spanning ``span(candidates)`` modulo ``span(existing)``."""
    c = candidates
    if existing.shape[1]:
        q = orthonormalize(existing)
        c = c - q @ (q.conj().T @ c)
    if c.shape[1] == 0:
        return c
    u, s, _ = np.linalg.svd(c, full_matrices=False)
    return u[:, s > tol]


def jordan_chains(nil, tol):
    """Jordan chains of a (numerically) nilpotent matrix ``nil``.

    Staircase: kernels of ascending powers until the dimension stabilises,
    chain tops picked from the highest level down.
    """
    m = nil.shape[0]
    scale = max(norm2(nil), tol)
    kernels = [np.zeros((m, 0), complex)]
    power = np.eye(m, dtype=complex)
    for level in range(1, m + 1):
        power = power @ nil
        s = np.linalg.svd(power, compute_uv=False)
        nullity = int(np.sum(s <= tol * scale ** (level - 1) * level))
        if level == m:
            nullity = m
        nullity = max(nullity, kernels[-1].shape[1])
        kernels.append(smallest_right_singular(power, nullity) if nullity else np.zeros((m, 0), complex))
        if nullity == m:
            break
    depth = len(kernels) - 1
    tops = []  # (level, vector)
    for level in range(depth, 0, -1):
        existing = [kernels[level - 1]]
        for top_level, x in tops:
            existing.append((np.linalg.matrix_power(nil, top_level - level) @ x).reshape(-1, 1))
        existing = np.hstack(existing)
        new = _complement_columns(kernels[level], existing, 1e-8)
        for j in range(new.shape[1]):
            tops.append((level, new[:, j]))
    chains = []
    for level, x in tops:
        cols = [np.linalg.matrix_power(nil, level - j) @ x for j in range(1, level + 1)]
        chains.append(np.column_stack(cols))
    return chains


def analyze_spectrum(t, tols=None):
    """Cluster the eigenvalues of ``t`` and compute root subspaces and chains."""
    tols = resolve(tols)
    t = as_matrix(t)
    if t.shape[0] != t.shape[1]:
        raise NonSquareError("analyze_spectrum needs a square matrix")
    n = t.shape[0]
    scale = norm2(t) or 1.0
    w, v = eig(t, tols)
    cluster_tol = tols.cluster_rel * scale
    axis_tol = tols.axis_rel * scale
    groups = _cluster(w, cluster_tol)
    # order by real part (ties within cluster_tol broken by imaginary part)
    groups.sort(key=lambda g: (round(float(np.mean(w[g]).real) / cluster_tol),
                               float(np.mean(w[g]).imag)))
    ambiguities = []
    for a in range(len(groups)):
        for b in range(a + 1, len(groups)):
            d = min(abs(w[i] - w[j]) for i in groups[a] for j in groups[b])
            if d < 10 * cluster_tol:
                ambiguities.append((a, b, float(d)))

    eigenvalues, roots, chains = [], [], []
    worst = 0.0
    for g in groups:
        m = len(g)
        mu = complex(np.mean(w[g]))
        shifted = t - mu * np.eye(n)
        if m == 1:
            basis = v[:, g].copy()
            chain_list = [basis.copy()]
            geo = 1
        else:
            basis = smallest_right_singular(np.linalg.matrix_power(shifted, m), m)
            nil = basis.conj().T @ shifted @ basis
            local = jordan_chains(nil, max(cluster_tol, 1e-12 * scale) * 10)
            chain_list = [basis @ c for c in local]
            geo = len(local)
        for c in chain_list:
            r = shifted @ c
            r[:, 1:] -= c[:, :-1]
            worst = max(worst, float(np.max(np.linalg.norm(r, axis=0))))
        re = mu.real
        cls = IMAGINARY if abs(re) <= axis_tol else (RIGHT if re > 0 else LEFT)
        eigenvalues.append(Eigenvalue(mu, m, geo, cls))
        roots.append(basis)
        chains.append(chain_list)
    data = SpectralData(t, eigenvalues, roots, chains, Pairing([], []), scale, ambiguities, worst)
    data.pairing = pair_skew_conjugate(data, tols, strict=False)
    return data


def pair_skew_conjugate(s, tols=None, strict=True):
    """Match each eigenvalue ``l`` off the axis with ``-conj(l)``.

    Greedy by distance ``|l + conj(mu)|``.  With ``strict`` an unmatched
    eigenvalue or a multiplicity mismatch raises :class:`SymmetryViolation`.
    """
    tols = resolve(tols)
    pair_tol = tols.pair_rel * s.scale
    right = s.indices(RIGHT)
    left = s.indices(LEFT)
    cands = []
    for i in right:
        for j in left:
            d = abs(s.eigenvalues[i].value + np.conj(s.eigenvalues[j].value))
            if d <= pair_tol:
                cands.append((d, i, j))
    cands.sort()
    used_r, used_l, pairs, violations = set(), set(), [], []
    for d, i, j in cands:
        if i in used_r or j in used_l:
            continue
        used_r.add(i)
        used_l.add(j)
        if s.eigenvalues[i].alg_mult != s.eigenvalues[j].alg_mult:
            violations.append({"kind": "multiplicity", "indices": [i, j]})
        pairs.append((i, j))
    for i in right:
        if i not in used_r:
            violations.append({"kind": "unmatched", "indices": [i]})
    for j in left:
        if j not in used_l:
            violations.append({"kind": "unmatched", "indices": [j]})
    pairs.sort()
    result = Pairing(pairs, s.indices(IMAGINARY), violations)
    if strict and violations:
        raise SymmetryViolation(f"{len(violations)} skew-conjugate violations", violations)
    return result


def riesz_projection(t, center, radius, quad_points=128, tols=None, max_points=4096):
    """Spectral projection for the eigenvalues inside ``|z - center| < radius``.

    Trapezoidal rule for ``(i/2pi) ∮ (T - z)^{-1} dz``; the node count is
    doubled until the result is idempotent to ``proj_tol``.
    """
    tols = resolve(tols)
    t = as_matrix(t)
    n = t.shape[0]
    w, _ = eig(t, tols)
    ring = tols.ring_tol * max(1.0, norm2(t))
    if w.size and np.min(np.abs(np.abs(w - center) - radius)) <= ring:
        raise EigenvalueOnContourError("eigenvalue within ring_tol of the contour")
    k = int(quad_points)
    ident = np.eye(n, dtype=complex)
    while True:
        theta = 2 * np.pi * np.arange(k) / k
        e = np.exp(1j * theta)
        zs = center + radius * e
        ws = -(radius / k) * e
        p = _kernels.weighted_resolvent_sum(t, ident, zs.astype(complex), ws.astype(complex))
        defect = norm2(p @ p - p)
        if defect <= tols.proj_tol * max(1.0, norm2(p)) ** 2:
            return p
        if k >= max_points:
            raise QuadratureDivergence(f"|P^2 - P| = {defect:.3e} with {k} nodes")
        k *= 2


def counting_function(eigenvalues, r, multiplicities=None):
    """Number of eigenvalues (with multiplicity) of modulus at most ``r``."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    lam = np.asarray(eigenvalues, dtype=complex)
    mult = np.ones(lam.shape, int) if multiplicities is None else np.asarray(multiplicities)
    return int(np.sum(mult[np.abs(lam) <= r]))
