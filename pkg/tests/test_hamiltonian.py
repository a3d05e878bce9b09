import numpy as np
import pytest

from krein_riccati.config import DEFAULT
from krein_riccati.dense import make_rng, random_complex
from krein_riccati.errors import (
    GammaUnsetError,
    NotHermitianError,
    RaySpectrumCollision,
    SizeMismatchError,
    ZeroDenominatorError,
)
from krein_riccati.hamiltonian import (
    assemble,
    basis_probes,
    check_gap_strip,
    check_imaginary_kernels,
    check_j1_skew,
    check_j2_accretive,
    check_r0_dominance,
    check_spectral_symmetry,
    subordination_estimate,
    subordination_exponent,
    subordination_profile,
)
from krein_riccati.models import gen_cubic_modal, gen_example_diag, random_hamiltonian
from krein_riccati.spectral import analyze_spectrum


def test_assemble_examples():
    h = assemble([[0]], [[1]], [[1]])
    assert np.array_equal(h.T, [[0, 1], [1, 0]])
    assert np.array_equal(h.T, h.G + h.S)
    for k in (1, 3):
        h = assemble([[1j * k * k]], [[1]], [[k]])
        assert np.array_equal(h.T, [[1j * k * k, 1], [k, 1j * k * k]])
        assert h.gamma == 1.0 and h.b_norm == k and h.nonnegative
    with pytest.raises(NotHermitianError) as info:
        assemble(np.zeros((2, 2)), [[1, 1], [0, 1]], np.eye(2))
    assert info.value.which == "B"
    with pytest.raises(SizeMismatchError):
        assemble([[0]], np.eye(2), [[1]])


def test_assemble_gamma_unset_for_semidefinite():
    h = assemble([[0]], [[0]], [[1]])
    assert h.gamma is None and h.nonnegative
    s = analyze_spectrum(h.T)
    with pytest.raises(GammaUnsetError):
        check_gap_strip(h, s)


def test_j1_skew(rng):
    assert check_j1_skew(assemble([[0]], [[1]], [[1]])) == 0.0
    for _ in range(5):
        h = random_hamiltonian(4, int(rng.integers(1 << 30)))
        assert check_j1_skew(h) <= 1e-14
    h = random_hamiltonian(3, 1)
    t = h.T.copy()
    t[3:, :3] += 1j * np.eye(3)
    assert check_j1_skew(t) > 0.1 / np.linalg.norm(t, 2)


def test_j2_accretive_examples():
    for k in (1, 2, 5):
        h = assemble([[1j * k * k]], [[1]], [[k]])
        hp, mn, res = check_j2_accretive(h)
        assert np.allclose(hp, np.diag([k, 1])) and mn == pytest.approx(1.0) and res == 0.0
    assert check_j2_accretive(assemble(np.eye(2) * 1j, np.zeros((2, 2)), np.zeros((2, 2))))[1] == 0.0
    h = assemble(np.zeros((2, 2)), np.eye(2), np.diag([1.0, -1.0]))
    assert check_j2_accretive(h)[1] == pytest.approx(-1.0)


def test_spectral_symmetry_examples(rng):
    h = assemble([[4j]], [[1]], [[2]])
    rep = check_spectral_symmetry(h, analyze_spectrum(h.T))
    assert rep["passed"] and len(rep["pairs"]) == 1
    vals = sorted(rep["pairs"][0]["values"], key=lambda z: z.real)
    assert np.allclose(vals, [4j - np.sqrt(2), 4j + np.sqrt(2)], atol=1e-12)
    h = assemble([[0]], [[1]], [[1]])
    assert check_spectral_symmetry(h, analyze_spectrum(h.T))["passed"]
    t = random_complex((4, 4), rng)
    rep = check_spectral_symmetry(None, analyze_spectrum(t))
    assert not rep["passed"] and rep["violations"]


def test_gap_strip_examples():
    h = assemble([[0]], [[0.7]], [[0.7]])
    assert check_gap_strip(h, analyze_spectrum(h.T)) == (True, True)
    h = assemble(np.zeros((2, 2)), np.eye(2), 4 * np.eye(2))
    s = analyze_spectrum(h.T)
    assert np.allclose(sorted(s.values().real), [-2, 2])
    assert check_gap_strip(h, s) == (True, True)


def test_gap_holds_for_random_positive_instances():
    for seed in range(25):
        n = 1 + seed % 4
        h = random_hamiltonian(n, seed, gamma=0.3)
        s = analyze_spectrum(h.T)
        assert np.all(np.abs(s.values().real) >= h.gamma - 1e-8)


def test_imaginary_kernels():
    assert check_imaginary_kernels(assemble([[1j]], [[1]], [[0]])) == [pytest.approx(1.0)]
    assert check_imaginary_kernels(assemble([[1j]], [[1]], [[1]])) == []
    h = gen_example_diag(6).to_hamiltonian()
    assert check_imaginary_kernels(h) == []


def test_r0_dominance():
    h = random_hamiltonian(3, 2)
    rep = check_r0_dominance(h)
    v = [row[1] for row in rep["table"]]
    assert rep["passed"]
    for a, b in zip(v, v[1:]):
        assert 10 / 3 <= a / b <= 30
    m = gen_example_diag(100)
    rep = check_r0_dominance(m, samples=(10.0, 100.0, 1e4))
    assert rep["table"][-1][1] <= 0.01
    for s, val in rep["table"]:
        assert val == pytest.approx(max(k / np.sqrt(k ** 4 + s * s) for k in range(1, 101)), rel=1e-10)
    h = assemble(np.eye(2), np.zeros((2, 2)), np.zeros((2, 2)))
    assert all(row[1] == 0.0 for row in check_r0_dominance(h)["table"])
    with pytest.raises(RaySpectrumCollision):
        check_r0_dominance(assemble([[10.0]], [[1]], [[1]]), samples=(10.0,))


def test_subordination_examples():
    m = gen_example_diag(1024)
    prof = subordination_profile(m, 0.5)
    assert max(abs(v - 1.0) for v in prof.values()) <= 1e-12
    prof = subordination_profile(m, 0.4)
    assert prof[1024] == pytest.approx(4.0, rel=1e-12)
    c = gen_cubic_modal(64, 2.0)
    prof = subordination_profile(c, 2.0 / 3.0)
    assert max(prof.values()) - min(prof.values()) <= 1e-12
    assert prof[1] == pytest.approx(2.0 ** (-2.0 / 3.0), rel=1e-12)
    prof = subordination_profile(c, 0.5)
    assert prof[64] / prof[16] == pytest.approx(2.0, rel=1e-12)
    with pytest.raises(ZeroDenominatorError):
        subordination_estimate([(1.0, 1.0, 0.0)], 0.5)
    with pytest.raises(ValueError):
        subordination_estimate([(1.0, 1.0, 1.0)], 1.5)
    assert basis_probes(np.zeros((2, 2)), np.eye(2)) == []


def test_subordination_exponent_detector():
    # b_p grows by 2^(slope) per ladder step; the 5% rule accepts slope < log2(1.05)
    slack = np.log2(1.05)
    p = subordination_exponent(gen_example_diag, ladder=(64, 128, 256, 512))
    assert p == pytest.approx(0.5 - slack / 2, abs=1e-6)
    p = subordination_exponent(lambda k: gen_cubic_modal(k, 1.0), ladder=(64, 128, 256, 512))
    assert p == pytest.approx(2.0 / 3.0 - slack / 3, abs=1e-6)
