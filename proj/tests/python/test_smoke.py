import math

import numpy as np
import pytest

import kicked_top as kt

ALPHA = 4 * math.pi / 7


def test_version():
    assert kt.__version__


def test_spin_algebra():
    jx, jy, jz = (kt.angular_momentum(5, a) for a in "xyz")
    assert np.allclose(jx @ jy - jy @ jx, 1j * jz, atol=1e-12)
    assert np.allclose(np.diag(jz).real, np.arange(-5, 6))


def test_coherent_state():
    psi = kt.coherent_state(10, math.pi / 3, 1.2)
    assert abs(np.vdot(psi, psi) - 1) < 1e-12
    jz = kt.angular_momentum(10, "z")
    assert abs(np.vdot(psi, jz @ psi).real / 10 - 0.5) < 1e-10


def test_floquet_unitary_and_parity():
    params = kt.KickedTopParams(alpha=ALPHA, kappa=3.0, j=20)
    f = kt.build_floquet(params)
    p = kt.parity_operator(20)
    assert np.abs(f.conj().T @ f - np.eye(41)).max() < 1e-10
    assert np.abs(f @ p - p @ f).max() < 1e-10


def test_eigensystem():
    params = kt.KickedTopParams(alpha=ALPHA, kappa=7.0, j=30)
    eig = kt.solve_floquet(params, kt.DiagonalizationMethod.sector)
    assert len(eig) == 61
    assert eig.count(kt.Parity.even) == 31
    assert eig.count(kt.Parity.odd) == 30
    f = kt.build_floquet(params)
    v = eig.eigenvectors
    assert np.abs(f @ v - v * np.exp(1j * eig.quasienergies)).max() < 1e-8
    full = kt.solve_floquet(params)
    assert np.allclose(full.quasienergies, eig.quasienergies, atol=1e-10)


def test_invalid_parameters():
    with pytest.raises(ValueError):
        kt.KickedTopParams(alpha=0.1, kappa=-1.0, j=3)
    with pytest.raises(ValueError):
        kt.coherent_state(0.3, 0.0, 0.0)


def test_classical():
    params = kt.KickedTopParams(alpha=math.pi / 2, kappa=0.0, j=1)
    assert np.allclose(kt.classical_step(np.array([0.0, 0.0, 1.0]), params), [0, -1, 0], atol=1e-15)
    lam, err = kt.lyapunov_exponent(1.0, 2.0, kt.KickedTopParams(alpha=ALPHA, kappa=7.0, j=1), 2000)
    assert 0.5 < lam < 1.5
    avg = kt.averaged_lyapunov(kt.KickedTopParams(alpha=math.pi / 2, kappa=30.0, j=1), 1000, 500)
    assert abs(avg["mean"] - (math.log(30) - 1)) < 0.1 * (math.log(30) - 1)
    field = kt.lyapunov_field(kt.KickedTopParams(alpha=ALPHA, kappa=0.4, j=1), 8, 6, 500)
    assert field.shape == (6, 8)


def test_spectral():
    eig = kt.solve_floquet(kt.KickedTopParams(alpha=ALPHA, kappa=7.0, j=200), kt.DiagonalizationMethod.sector)
    even = eig.sector_quasienergies(kt.Parity.even)
    assert kt.fit_brody(kt.spacings(even)) > 0.7
    assert 0.45 < kt.ratio_stats(even) < 0.6


def test_multifractal_and_coefficients():
    assert np.allclose(kt.fractal_dimensions([0.25] * 4, [1.0, 2.0, math.inf]), 1.0)
    eig = kt.solve_floquet(kt.KickedTopParams(alpha=ALPHA, kappa=7.0, j=40))
    w = kt.expansion_weights(eig, [(1.0, 2.0), (2.0, 4.0)])
    assert w.shape == (81, 2)
    assert np.allclose(w.sum(axis=0), 1.0)
    mean, err = kt.averaged_dq(eig, 100, [1.0, 2.0])
    assert 0.5 < mean[1] < mean[0] < 1.0
    x = kt.pool_rescaled_coefficients(eig, 50)
    assert abs(np.mean(x) - 1.0) < 1e-12
    report = kt.distance_report(x, 2.0)
    assert report["skld"] >= 0 and report["rmse"] >= 0
    assert abs(kt.chisq_cdf(math.log(2), 2.0) - 0.5) < 1e-14
    dims = [201, 401, 801, 1601]
    fit = kt.scaling_fit(dims, [1 - 0.5 / math.log(n) for n in dims])
    assert abs(fit["intercept"] - 1) < 1e-12 and abs(fit["slope"] - 0.5) < 1e-12
