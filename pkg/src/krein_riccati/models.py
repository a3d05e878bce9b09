"""Model generators: the diagonal modal family with unbounded solutions, a
cubic-growth modal family, the periodic transport model in a Fourier basis,
and randomized uniformly positive instances."""
from dataclasses import dataclass, field

import numpy as np

from .config import resolve
from .dense import as_matrix, make_rng, norm2, random_complex
from .errors import NotPositiveError, NotRealError
from .hamiltonian import HamiltonianMatrix, assemble
from .riccati import riccati_matrix


@dataclass
class ModalModel:
    """Indexed family of small Hamiltonian blocks, one per mode."""

    modes: list
    labels: list
    closed_forms: dict = field(default_factory=dict)
    name: str = ""

    def to_hamiltonian(self, tols=None):
        """All modes as one block-diagonal Hamiltonian (mode ``k`` on ``u_k, v_k``)."""
        a, b, c = (_block_diag([getattr(m, f) for m in self.modes]) for f in "ABC")
        return assemble(a, b, c, tols)

    def truncate(self, kmax):
        keep = [i for i, k in enumerate(self.labels) if k <= kmax]
        return ModalModel(
            [self.modes[i] for i in keep],
            [self.labels[i] for i in keep],
            {k: v for k, v in self.closed_forms.items() if k <= kmax},
            self.name,
        )


def _block_diag(blocks):
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n), complex)
    i = 0
    for b in blocks:
        k = b.shape[0]
        out[i:i + k, i:i + k] = b
        i += k
    return out


@dataclass(frozen=True)
class StepFunction:
    """``chi(t) = 1`` for ``t < 0`` and ``alpha`` for ``t >= 0`` on ``[-1, 1]``."""

    alpha: float

    def __post_init__(self):
        if self.alpha in (0.0, 1.0):
            raise ValueError("alpha must differ from 0 and 1")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.where(t < 0, 1.0, self.alpha)

    def coefficient(self, m):
        """Fourier coefficient for ``e^{i pi m t}`` (period 2)."""
        if m == 0:
            return (1.0 + self.alpha) / 2.0 + 0j
        return (1.0 - self.alpha) * (1 - (-1) ** m) / (2j * np.pi * m)


def gen_example_diag(kmax, tols=None):
    """Modes ``A_k = i k^2``, ``B_k = 1``, ``C_k = k`` for ``k = 1..kmax``."""
    if kmax < 1:
        raise ValueError("kmax must be at least 1")
    modes, labels, closed = [], [], {}
    for k in range(1, kmax + 1):
        modes.append(assemble([[1j * k * k]], [[1.0]], [[float(k)]], tols))
        labels.append(k)
        rk = np.sqrt(k)
        closed[k] = {
            "eigenvalues": (1j * k * k + rk, 1j * k * k - rk),
            "eigenvectors": (np.array([1.0, rk]) / np.sqrt(1 + k), np.array([1.0, -rk]) / np.sqrt(1 + k)),
            "solutions": (rk, -rk),
        }
    return ModalModel(modes, labels, closed, "diag8_1")


def gen_cubic_modal(kmax, c1=1.0, tols=None):
    """Modes ``A_k = i c1 k^3``, ``B_k = C_k = k^2``: cubic eigenvalue growth."""
    if c1 == 0:
        raise ValueError("c1 must be nonzero")
    modes, labels, closed = [], [], {}
    for k in range(1, kmax + 1):
        modes.append(assemble([[1j * c1 * k ** 3]], [[float(k * k)]], [[float(k * k)]], tols))
        labels.append(k)
        closed[k] = {"eigenvalues": (1j * c1 * k ** 3 + k * k, 1j * c1 * k ** 3 - k * k)}
    return ModalModel(modes, labels, closed, "cubic8_2")


# -- Fourier / Toeplitz transport model ---------------------------------------

def parse_coefficients(spec):
    """``{m: complex}`` from a dict, a number, or ``[[m, re, im], ...]``."""
    if isinstance(spec, (int, float, complex)):
        return {0: complex(spec)}
    if isinstance(spec, dict):
        return {int(m): complex(v) for m, v in spec.items()}
    out = {}
    for row in spec:
        m, re = int(row[0]), float(row[1])
        im = float(row[2]) if len(row) > 2 else 0.0
        out[m] = complex(re, im)
    return out


def check_real(coeffs, tol=1e-12):
    for m, v in coeffs.items():
        partner = coeffs.get(-m, 0.0)
        if abs(np.conj(v) - partner) > tol * max(1.0, abs(v)):
            raise NotRealError(f"coefficient {m} violates conjugate symmetry")


def lower_bound(coeffs):
    """Certified lower bound ``Re f(0) - sum_{m != 0} |f(m)|`` of the real function."""
    return float(coeffs.get(0, 0).real - sum(abs(v) for m, v in coeffs.items() if m != 0))


def sup_bound(coeffs):
    return float(sum(abs(v) for v in coeffs.values()))


def toeplitz(coeffs, N):
    """``M[j, k] = f(j - k)`` on indices ``-N..N``."""
    idx = np.arange(-N, N + 1)
    diff = idx[:, None] - idx[None, :]
    out = np.zeros(diff.shape, complex)
    for m, v in coeffs.items():
        out[diff == m] = v
    return out


def evaluate(coeffs, t):
    t = np.asarray(t, dtype=float)
    return sum(v * np.exp(1j * np.pi * m * t) for m, v in coeffs.items())


def gen_fourier_transport(N, b_spec, c_spec, tols=None):
    """``A = diag(i pi k)``, ``B, C`` Toeplitz in the basis ``e^{i pi k t}``, ``|k| <= N``.

    Returns ``(H, info)``.  ``info["riesz_hypotheses"]`` is ``False`` when
    the sup bound of ``b`` or ``c`` reaches ``pi/2``.
    """
    tols = resolve(tols)
    bc, cc = parse_coefficients(b_spec), parse_coefficients(c_spec)
    for coeffs in (bc, cc):
        check_real(coeffs)
        if coeffs and max(abs(m) for m in coeffs) > 2 * N:
            raise ValueError("truncation N too small for the coefficient degree")
    gb, gc = lower_bound(bc), lower_bound(cc)
    if gb <= 0 or gc <= 0:
        raise NotPositiveError(f"certified lower bounds b >= {gb:.4g}, c >= {gc:.4g}")
    k = np.arange(-N, N + 1)
    a = np.diag(1j * np.pi * k)
    b, c = toeplitz(bc, N), toeplitz(cc, N)
    h = assemble(a, b, c, tols, gamma=min(gb, gc))
    eig_min = min(np.linalg.eigvalsh(h.B)[0], np.linalg.eigvalsh(h.C)[0])
    info = {
        "gamma_certified": min(gb, gc),
        "toeplitz_min_eig": float(eig_min),
        "positivity_verified": bool(eig_min >= min(gb, gc) - 1e-12),
        "sup_bound": max(sup_bound(bc), sup_bound(cc)),
        "riesz_hypotheses": max(sup_bound(bc), sup_bound(cc)) < np.pi / 2,
    }
    return h, info


def convolve(f, g):
    out = {}
    for m, a in f.items():
        for j, b in g.items():
            out[m + j] = out.get(m + j, 0) + a * b
    return out


def step_chi_coefficients(alpha, N):
    chi = StepFunction(alpha)
    return {m: chi.coefficient(m) for m in range(-N, N + 1)}


def step_c_coefficients(alpha, b_spec, N):
    """Coefficients of ``chi^2 b`` for ``|m| <= N`` (exact, finitely many terms each)."""
    bc = parse_coefficients(b_spec)
    deg = max(abs(m) for m in bc)
    sq = StepFunction(alpha * alpha) if alpha * alpha != 1.0 else None
    span = range(-N - deg, N + deg + 1)
    chi2 = {m: (sq.coefficient(m) if sq is not None else (1.0 if m == 0 else 0.0)) for m in span}
    full = convolve(chi2, bc)
    return {m: full.get(m, 0) for m in range(-N, N + 1)}


def step_chi_solution(alpha, b_spec, N, grid=4001):
    """Toeplitz matrix of the step function and the truncation error of ``c = chi^2 b``.

    The pointwise identity ``chi^2 b - c = 0`` is exact before truncation;
    ``pointwise_residual`` measures only the Fourier truncation of ``c``.
    """
    chi = StepFunction(alpha)
    x_chi = toeplitz(step_chi_coefficients(alpha, 2 * N), N)
    bc = parse_coefficients(b_spec)
    cc = step_c_coefficients(alpha, b_spec, N)
    # avoid the jump points themselves
    t = np.linspace(-1, 1, grid)[1:-1] + 0.5 / grid
    exact = chi(t) ** 2 * evaluate(bc, t).real
    trunc = evaluate(cc, t).real
    return x_chi, float(np.max(np.abs(exact - trunc)))


def step_chi_riccati_residual(alpha, b_spec, N):
    """Frobenius Riccati residual of the step-function matrix on the truncated model.

    Exploratory: the value does not decay with ``N``, reflecting that the
    graph of ``chi`` is invariant only at the function level.
    """
    x_chi, _ = step_chi_solution(alpha, b_spec, N)
    k = np.arange(-N, N + 1)
    a = np.diag(1j * np.pi * k)
    b = toeplitz(parse_coefficients(b_spec), N)
    c = toeplitz(step_c_coefficients(alpha, b_spec, N), N)
    proxy = HamiltonianMatrix(2 * N + 1, a, b, c, None, None, None)
    r = riccati_matrix(proxy, x_chi)
    return float(np.linalg.norm(r)), float(np.linalg.norm(r) / np.sqrt(2 * N + 1))


# -- modal diagnostics --------------------------------------------------------

def modal_solution(model, signs="+", tols=None):
    """Per-mode solutions for a sign pattern and a growth report.

    ``signs`` is a string: ``"+"`` or ``"-"`` applies to every mode,
    ``"alt"`` alternates starting with ``+``; otherwise one character per mode.
    """
    from .riccati import solution_for
    from .spectral import analyze_spectrum
    from .subspaces import scset_from_signs

    tols = resolve(tols)
    nmodes = len(model.modes)
    if signs in ("+", "-"):
        pattern = signs * nmodes
    elif signs == "alt":
        pattern = "".join("+-"[i % 2] for i in range(nmodes))
    else:
        pattern = signs
    if len(pattern) != nmodes:
        raise ValueError("sign pattern length must match the number of modes")
    sols = []
    for mode, sign in zip(model.modes, pattern):
        s = analyze_spectrum(mode.T, tols)
        sigma = scset_from_signs(s, sign * len(s.pairing.pairs))
        sols.append(solution_for(mode, s, sigma, tols))
    mags = np.array([norm2(sol.X) for sol in sols])
    ks = np.array(model.labels, dtype=float)
    slope = float(np.polyfit(np.log(ks), np.log(mags), 1)[0]) if nmodes > 1 else 0.0
    inv = np.array([sol.invertibility for sol in sols])
    report = {
        "sup_norm": float(np.max(mags)),
        "slope": slope,
        "min_norm": float(np.min(mags)),
        "min_invertibility": float(np.min(inv)),
        "verdict": "UNBOUNDED" if slope > tols.slope_tol else "BOUNDED",
        "series": [[float(k), float(v)] for k, v in zip(ks, mags)],
    }
    return sols, report


def dichotomy_witness(model, k, tols=None):
    """Per-mode witnesses that the eigenvector family is not a Riesz basis.

    Decomposes ``x_k = (2/sqrt(k) e_k, 0)`` along the two eigenvectors of
    mode ``k`` and measures their angle.  Returns
    ``(|x_k|, |x_k^+|, |x_k^-|, cos theta_k, riesz_lower_k)``.
    """
    from .spectral import analyze_spectrum

    mode = model.modes[model.labels.index(k)]
    s = analyze_spectrum(mode.T, tols)
    (ip, im), = s.pairing.pairs
    vp = s.root_bases[ip][:, 0]
    vm = s.root_bases[im][:, 0]
    x = np.array([2.0 / np.sqrt(k), 0.0], dtype=complex)
    coef = np.linalg.solve(np.column_stack([vp, vm]), x)
    g = np.array([[1.0, np.vdot(vp, vm)], [np.vdot(vm, vp), 1.0]])
    lower = float(np.linalg.eigvalsh(g)[0])
    return (
        float(np.linalg.norm(x)),
        float(abs(coef[0]) * np.linalg.norm(vp)),
        float(abs(coef[1]) * np.linalg.norm(vm)),
        float(abs(np.vdot(vp, vm))),
        lower,
    )


def upm_alpha_trend(model, ladder, tols=None):
    """Uniform-positivity level of ``U+`` for growing truncations.

    Flags non-uniformity when the level decays like a power of ``kmax``.
    """
    from .spectral import analyze_spectrum
    from .subspaces import classify_Upm

    tols = resolve(tols)
    alphas = []
    for kmax in ladder:
        h = model.truncate(kmax).to_hamiltonian(tols)
        rep = classify_Upm(h.T, analyze_spectrum(h.T, tols), tols)
        alphas.append(rep["plus"].alpha if rep["plus"].alpha is not None else 0.0)
    slope = float(np.polyfit(np.log(ladder), np.log(np.maximum(alphas, 1e-300)), 1)[0])
    return {"ladder": list(ladder), "alpha": alphas, "slope": slope,
            "uniform": slope > -tols.slope_tol}


def random_hamiltonian(n, seed, gamma=0.5, skew_A=False, scale=1.0, tols=None):
    """Uniformly positive instance: ``B = M1 M1^* + gamma I``, ``C = M2 M2^* + gamma I``.

    With ``skew_A`` the drift ``A`` is skew-Hermitian, so the spectrum sits
    in the strip ``gamma <= |Re| <= max(|B|, |C|)``.
    """
    rng = make_rng(seed)
    a = scale * random_complex((n, n), rng) / np.sqrt(n)
    if skew_A:
        a = 0.5 * (a - a.conj().T)
    m1 = random_complex((n, n), rng) / np.sqrt(2 * n)
    m2 = random_complex((n, n), rng) / np.sqrt(2 * n)
    b = m1 @ m1.conj().T + gamma * np.eye(n)
    c = m2 @ m2.conj().T + gamma * np.eye(n)
    return assemble(a, b, c, tols)


def build_model(spec, tols=None):
    """Model from a JSON-style description; returns ``(kind, object)``.

    ``kind`` is ``"modal"`` (a :class:`ModalModel`) or ``"hamiltonian"``.
    """
    name = spec.get("model")
    if name == "diag8_1":
        return "modal", gen_example_diag(int(spec.get("kmax", 3)), tols)
    if name == "cubic8_2":
        return "modal", gen_cubic_modal(int(spec.get("kmax", 8)), float(spec.get("c1", 1.0)), tols)
    if name == "fourier8_3":
        h, _ = gen_fourier_transport(int(spec.get("N", 4)), spec.get("b", 1.0), spec.get("c", 1.0), tols)
        return "hamiltonian", h
    if name == "random":
        return "hamiltonian", random_hamiltonian(
            int(spec.get("n", 2)), int(spec.get("seed", 0)), float(spec.get("gamma", 0.5)),
            bool(spec.get("skew_A", False)), tols=tols,
        )
    if name == "matrices":
        from .dense import matrix_from_json

        return "hamiltonian", assemble(
            matrix_from_json(spec["A"]), matrix_from_json(spec["B"]), matrix_from_json(spec["C"]), tols
        )
    raise ValueError(f"unknown model {name!r}")


def unbalanced_imaginary_instance():
    """``4x4`` matrix with spectrum ``{1, -1, 2i (Jordan block of size 2)}``
    whose root subspace at ``2i`` is J1-positive (signature ``(2, 0)``).

    Not a Hamiltonian: a J1-skew matrix always has balanced signature on
    a defective imaginary root subspace of even size, so this is built as
    ``V diag(1, -1, J_2(2i)) V^*`` with a unitary V.
    """
    s = 1.0 / np.sqrt(2.0)
    n1 = s * np.array([1, 0, -1j, 0])
    n2 = s * np.array([0, 1, 0, -1j])
    p1 = s * np.array([1, 0, 1j, 0])
    p2 = s * np.array([0, 1, 0, 1j])
    v = np.column_stack([n1, n2, p1, p2])
    core = np.diag([1.0, -1.0, 2j, 2j]).astype(complex)
    core[2, 3] = 1.0
    return v @ core @ v.conj().T
