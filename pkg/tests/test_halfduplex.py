import numpy as np

from robust_relay import (
    ChannelRealization,
    SystemConfig,
    hd_rate,
    reconstruct_covariance,
    sample_channel,
    spectrum,
)


def scalar_channel(h1, h2):
    return ChannelRealization(H1=np.array([[h1]], dtype=complex),
                              H2=np.array([[h2]], dtype=complex))


def test_symmetric_scalar_case():
    cfg = SystemConfig(M=1, Kt=1, Kr=1, N=1, Ps=3.0, Pr=3.0)
    res = hd_rate(scalar_channel(1.0, 1.0), cfg)
    assert abs(res.r_sr - 2.0) <= 1e-12
    assert abs(res.r_rd - 2.0) <= 1e-12
    assert abs(res.rate - 1.0) <= 1e-12
    assert abs(res.alpha - 0.5) <= 1e-12


def test_zero_source_power():
    cfg = SystemConfig(M=1, Kt=1, Kr=1, N=1, Ps=0.0, Pr=3.0)
    res = hd_rate(scalar_channel(1.0, 1.0), cfg)
    assert res.r_sr == 0.0
    assert res.rate == 0.0


def test_rate_matches_determinant_oracle(rng):
    cfg = SystemConfig(M=4, Kt=4, Kr=4, N=4, Ps=5.0, Pr=7.0)
    ch = sample_channel(cfg, 11)
    res = hd_rate(ch, cfg)

    def logdet_rate(H, powers):
        Q = reconstruct_covariance(H, powers).matrix
        _, logdet = np.linalg.slogdet(np.eye(H.shape[0]) + H @ Q @ H.conj().T)
        return logdet / np.log(2.0)

    r_sr = logdet_rate(ch.H1, res.source_alloc.powers)
    r_rd = logdet_rate(ch.H2, res.relay_alloc.powers)
    assert abs(r_sr - res.r_sr) <= 1e-8
    assert abs(r_rd - res.r_rd) <= 1e-8
    combined = r_sr * r_rd / (r_sr + r_rd)
    assert abs(combined - res.rate) <= 1e-8


def test_time_share_balances_the_hops(rng):
    cfg = SystemConfig(M=3, Kt=2, Kr=4, N=3, Ps=4.0, Pr=2.0)
    ch = sample_channel(cfg, 5)
    res = hd_rate(ch, cfg)
    assert abs(res.alpha * res.r_sr - (1 - res.alpha) * res.r_rd) <= 1e-9
    # No point on a fine time-share grid does better.
    grid = np.linspace(0.0, 1.0, 1001)
    rates = np.minimum(grid * res.r_sr, (1.0 - grid) * res.r_rd)
    assert res.rate >= rates.max() - 1e-9
    assert res.rate <= min(res.r_sr, res.r_rd) + 1e-12


def test_uncertainty_bound_is_ignored():
    base = dict(M=3, Kt=3, Kr=3, N=3, Ps=5.0, Pr=5.0)
    ch = sample_channel(SystemConfig(**base), 21)
    r0 = hd_rate(ch, SystemConfig(**base, T=0.0))
    r1 = hd_rate(ch, SystemConfig(**base, T=50.0))
    assert r0.rate == r1.rate


def test_both_hops_zero_power():
    cfg = SystemConfig(M=1, Kt=1, Kr=1, N=1, Ps=0.0, Pr=0.0)
    res = hd_rate(scalar_channel(1.0, 1.0), cfg)
    assert res.rate == 0.0
    assert res.alpha == 0.5
