import numpy as np
import pytest

from robust_relay import (
    InvalidConfigError,
    InvalidInputError,
    SystemConfig,
    reconstruct_covariance,
    sample_channel,
    spectrum,
)
from conftest import random_complex


def test_config_validation():
    with pytest.raises(InvalidConfigError):
        SystemConfig(M=0, Kt=1, Kr=1, N=1, Ps=1, Pr=1)
    with pytest.raises(InvalidConfigError):
        SystemConfig(M=1, Kt=1, Kr=1, N=1, Ps=-1, Pr=1)
    with pytest.raises(InvalidConfigError):
        SystemConfig(M=1, Kt=1, Kr=1, N=1, Ps=1, Pr=1, T=float("nan"))
    cfg = SystemConfig(M=4, Kt=3, Kr=7, N=4, Ps=5, Pr=5)
    assert cfg.source_streams == 4
    assert cfg.relay_streams == 3


def test_sampling_shapes_and_determinism():
    cfg = SystemConfig(M=4, Kt=5, Kr=3, N=2, Ps=1, Pr=1)
    ch = sample_channel(cfg, 7)
    assert ch.H1.shape == (3, 4)
    assert ch.H2.shape == (2, 5)
    again = sample_channel(cfg, 7)
    np.testing.assert_array_equal(ch.H1, again.H1)
    np.testing.assert_array_equal(ch.H2, again.H2)
    other = sample_channel(cfg, 8)
    assert not np.array_equal(ch.H1, other.H1)


def test_entry_variance_unit():
    # Sample-moment oracle: per-entry variance over >= 1e5 entries.
    cfg = SystemConfig(M=250, Kt=200, Kr=200, N=250, Ps=1, Pr=1)
    ch = sample_channel(cfg, 3)
    entries = np.concatenate([ch.H1.ravel(), ch.H2.ravel()])
    assert entries.size >= 100_000
    var = np.mean(np.abs(entries) ** 2)
    assert 0.97 <= var <= 1.03
    # Real and imaginary parts carry half the variance each.
    assert 0.45 <= np.var(entries.real) <= 0.55
    assert 0.45 <= np.var(entries.imag) <= 0.55


def test_scalar_channel_is_exponential():
    # |h|^2 of a unit-variance complex Gaussian is Exp(1): check the mean.
    cfg = SystemConfig(M=1, Kt=1, Kr=1, N=1, Ps=1, Pr=1)
    draws = np.empty(100_000)
    for k in range(50_000):
        ch = sample_channel(cfg, k)
        draws[2 * k] = np.abs(ch.H1[0, 0]) ** 2
        draws[2 * k + 1] = np.abs(ch.H2[0, 0]) ** 2
    assert 0.97 <= draws.mean() <= 1.03


def test_spectrum_trivial_cases():
    sp = spectrum(np.eye(2))
    np.testing.assert_allclose(sp.values, [1.0, 1.0])
    sp = spectrum(np.diag([3.0, 2.0]))
    np.testing.assert_allclose(sp.values, [9.0, 4.0])
    assert sp.source_rank == 2


def test_spectrum_matches_independent_eigensolver(rng):
    H = random_complex(rng, (3, 4))
    sp = spectrum(H)
    eigs = np.sort(np.linalg.eigvalsh(H @ H.conj().T))[::-1]
    np.testing.assert_allclose(sp.values, eigs, atol=1e-8)
    assert sp.values.size == 3
    assert abs(sp.values.sum() - np.linalg.norm(H, "fro") ** 2) <= 1e-9 * sp.values.sum()


def test_spectrum_unitary_invariance(rng):
    H = random_complex(rng, (4, 4))
    q1, _ = np.linalg.qr(random_complex(rng, (4, 4)))
    q2, _ = np.linalg.qr(random_complex(rng, (4, 4)))
    np.testing.assert_allclose(spectrum(q1 @ H @ q2).values, spectrum(H).values, atol=1e-8)


def test_spectrum_rejects_nonfinite():
    H = np.array([[1.0, np.inf], [0.0, 1.0]])
    with pytest.raises(InvalidInputError):
        spectrum(H)


def test_spectrum_clamps_tiny_values(rng):
    # A rank-1 matrix has exactly one positive squared singular value.
    u = random_complex(rng, (4, 1))
    v = random_complex(rng, (1, 3))
    sp = spectrum(u @ v)
    assert sp.source_rank == 1
    assert np.all(sp.values[1:] == 0.0)


def test_reconstruct_covariance_trace():
    design = reconstruct_covariance(np.eye(2), np.array([2.0, 3.0]))
    assert abs(np.trace(design.matrix).real - 5.0) <= 1e-9
    zero = reconstruct_covariance(np.eye(2), np.zeros(2))
    np.testing.assert_allclose(zero.matrix, np.zeros((2, 2)), atol=1e-12)


def test_reconstruct_covariance_rejects_length_mismatch(rng):
    with pytest.raises(InvalidInputError):
        reconstruct_covariance(random_complex(rng, (3, 4)), np.ones(4))


def test_reconstructed_covariance_reproduces_diagonal_rate(rng):
    # Direct determinant evaluation equals the stream-sum formula when the
    # covariance lives on the channel's right singular basis.
    from robust_relay import water_fill

    H = random_complex(rng, (4, 4))
    sp = spectrum(H)
    alloc = water_fill(sp.values, 5.0)
    design = reconstruct_covariance(H, alloc.powers)
    gram = H @ design.matrix @ H.conj().T
    _, logdet = np.linalg.slogdet(np.eye(4) + gram)
    direct = logdet / np.log(2.0)
    diagonal = np.sum(np.log2(1.0 + sp.values * alloc.powers))
    assert abs(direct - diagonal) <= 1e-8


def test_covariance_basis_is_orthonormal(rng):
    H = random_complex(rng, (5, 3))
    design = reconstruct_covariance(H, np.array([1.0, 2.0, 0.5]))
    gram = design.eigvecs.conj().T @ design.eigvecs
    np.testing.assert_allclose(gram, np.eye(3), atol=1e-9)
