"""Euler-Maruyama ensembles: reproducibility, exits, exclusions, conservation tests."""

import math

import numpy as np
import pytest

from sdefi import systems
from sdefi.algebra import LaurentPoly, PoleError, VField, parse_poly_text
from sdefi.ito import SdeSystem
from sdefi.mc import SimConfig, conservation_test, simulate_paths


def _scalar(drift_text, diff_texts=()):
    names = ("x1",)
    drift = VField((parse_poly_text(drift_text, names),))
    diffs = tuple(VField((parse_poly_text(t, names),)) for t in diff_texts)
    return SdeSystem(drift, diffs, names)


X = LaurentPoly.monomial(1, (1,))
X_INV = LaurentPoly.monomial(1, (-1,))


# -- config validation -----------------------------------------------------------------


def test_config_validation():
    good = dict(x0=(1.0,), h=0.1, T=1.0, N=4, seed=0)
    SimConfig(**good)
    for bad in (dict(h=0.0), dict(T=-1.0), dict(N=0), dict(seed=-1), dict(center="there")):
        with pytest.raises(ValueError):
            SimConfig(**{**good, **bad})


def test_config_step_rounding():
    cfg = SimConfig(x0=(1.0,), h=0.3, T=1.0, N=1, seed=0)
    assert cfg.n_steps == 3
    assert cfg.t_end == pytest.approx(0.9)


def test_x0_dimension_checked():
    with pytest.raises(ValueError):
        simulate_paths(systems.gbm(), SimConfig(x0=(1.0, 2.0), h=0.1, T=1.0, N=1, seed=0))


# -- determinism -----------------------------------------------------------------------


def test_frozen_system_conserves_exactly():
    sys = _scalar("0")
    ens = simulate_paths(sys, SimConfig(x0=(2.0,), h=0.1, T=1.0, N=16, seed=1))
    rep = conservation_test(ens, X, "weak")
    assert rep.passed and rep.delta == 0.0
    rep = conservation_test(ens, X, "strong")
    assert rep.passed and rep.max_dev == 0.0


def test_bit_reproducibility_and_seed_sensitivity():
    sys = systems.scalar_martingale()
    cfg = lambda seed, workers=1: SimConfig(x0=(1.0,), h=1e-2, T=0.2, N=9000,
                                            seed=seed, max_workers=workers)
    a = simulate_paths(sys, cfg(7))
    b = simulate_paths(sys, cfg(7))
    assert np.array_equal(a.final, b.final)
    c = simulate_paths(sys, cfg(8))
    assert not np.array_equal(a.final, c.final)
    # per-path keyed streams: worker count and chunking cannot change the draw
    d = simulate_paths(sys, cfg(7, workers=3))
    assert np.array_equal(a.final, d.final)


# -- statistical conservation checks ---------------------------------------------------


def test_martingale_weak_pass():
    ens = simulate_paths(systems.scalar_martingale(),
                         SimConfig(x0=(1.0,), h=1e-2, T=1.0, N=4000, seed=11))
    rep = conservation_test(ens, X, "weak")
    assert rep.passed
    assert rep.delta < rep.threshold
    assert rep.n_used == 4000


def test_gbm_mean_growth_fails_weak():
    # E[X_T] = e^T != X_0, and 3 stderr + bias cannot absorb e - 1
    ens = simulate_paths(systems.gbm(),
                         SimConfig(x0=(1.0,), h=1e-3, T=1.0, N=2000, seed=5))
    rep = conservation_test(ens, X, "weak")
    assert not rep.passed
    assert rep.delta > 1.0


def test_gbm_reciprocal_weak_pass():
    ens = simulate_paths(systems.gbm(),
                         SimConfig(x0=(1.0,), h=1e-3, T=1.0, N=2000, seed=5))
    rep = conservation_test(ens, X_INV, "weak")
    assert rep.passed


def test_euler_bias_halves_with_h():
    # no noise: the radius error of the explicit scheme is O(h), so halving h
    # should halve the deviation (ratio ~ 2)
    sys = systems.harmonic_oscillator()
    phi = parse_poly_text("x1^2 + x2^2", ("x1", "x2"))
    devs = []
    for h in (1e-2, 5e-3):
        ens = simulate_paths(sys, SimConfig(x0=(1.0, 0.0), h=h, T=0.5, N=1, seed=0))
        devs.append(conservation_test(ens, phi, "weak").delta)
    assert 1.8 < devs[0] / devs[1] < 2.2


def test_two_body_momentum_passes_energy_drifts():
    sys = systems.two_body()
    cfg = SimConfig(x0=(1.0, 0.0, 0.0, 1.0), h=1e-3, T=0.5, N=2000, seed=3)
    ens = simulate_paths(sys, cfg)
    assert ens.n_pole == 0 and ens.n_overflow == 0

    rep_m = conservation_test(ens, systems.two_body_momentum(), "weak")
    assert rep_m.passed

    rep_e = conservation_test(ens, systems.two_body_energy(), "weak")
    assert not rep_e.passed
    # the generator adds (sigma_r^2 r^2 + sigma_phi^2)/2 > 0: the drift is upward
    assert rep_e.mean - rep_e.phi0 > 3.0 * rep_e.stderr


def test_strong_mode_uses_pathwise_deviation():
    ens = simulate_paths(systems.scalar_martingale(),
                         SimConfig(x0=(1.0,), h=1e-2, T=1.0, N=500, seed=11))
    rep = conservation_test(ens, X, "strong")
    assert not rep.passed  # individual paths wander even though the mean holds
    assert rep.max_dev > rep.threshold
    with pytest.raises(ValueError):
        conservation_test(ens, X, "sideways")


# -- exits and exclusions --------------------------------------------------------------


def test_exit_radius_freezes_path():
    sys = _scalar("x1")  # X_t = 2 e^t, crosses R = 3 at t = ln 1.5 ~ 0.405
    ens = simulate_paths(sys, SimConfig(x0=(2.0,), h=1e-3, T=1.0, N=1, seed=0, R=3.0))
    assert bool(ens.exited[0])
    assert 0.40 < float(ens.exit_time[0]) < 0.42
    assert 3.0 <= float(ens.final[0, 0]) < 3.1  # frozen at exit, not advanced to e^1


def test_overflow_paths_are_excluded():
    sys = _scalar("x1^3")
    ens = simulate_paths(sys, SimConfig(x0=(10.0,), h=0.1, T=1.0, N=8, seed=0,
                                        R=math.inf))
    assert ens.n_overflow == 8
    assert ens.excluded.all()
    with pytest.raises(PoleError):
        conservation_test(ens, X, "weak")


def test_pole_start_is_excluded():
    sys = _scalar("x1^-1")
    ens = simulate_paths(sys, SimConfig(x0=(0.0,), h=0.1, T=0.5, N=4, seed=0))
    assert ens.n_pole == 4
    assert ens.excluded.all()


def test_excluded_paths_leave_statistics():
    # mix one overflowing path family with a tame one via radius: kept paths only
    sys = systems.scalar_martingale()
    ens = simulate_paths(sys, SimConfig(x0=(1.0,), h=1e-2, T=1.0, N=64, seed=2))
    rep = conservation_test(ens, X, "weak")
    assert rep.n_used + rep.n_excluded == 64


# -- thinning --------------------------------------------------------------------------


def test_thinning_snapshots():
    sys = _scalar("x1")
    ens = simulate_paths(sys, SimConfig(x0=(1.0,), h=0.1, T=1.0, N=3, seed=0, thin=5))
    assert ens.trajectories.shape == (3, 3, 1)  # t = 0, 0.5, 1.0
    assert np.allclose(ens.snapshot_times, [0.0, 0.5, 1.0])
    assert np.allclose(ens.trajectories[:, 0, 0], 1.0)
    assert np.allclose(ens.trajectories[:, -1, :], ens.final)


def test_report_dict_shape():
    ens = simulate_paths(systems.gbm(), SimConfig(x0=(1.0,), h=0.1, T=0.5, N=8, seed=0))
    d = conservation_test(ens, X_INV, "weak").to_dict()
    assert {"mode", "passed", "phi0", "mean", "stderr", "delta", "max_dev",
            "threshold", "c_bias", "c_path", "h", "seed"} <= set(d)
