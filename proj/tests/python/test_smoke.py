import math

import pytest

import flowlab as fl

TWO_PI = 2.0 * math.pi


def conformal(grid, amp=0.1):
    u = fl.FourierSeries(modes=[(1, amp, 0.0)])
    return fl.conformal_metric(fl.sample(grid, u))


def test_flat_volume_and_curvature():
    g = fl.make_grid(64, TWO_PI, TWO_PI)
    m = fl.flat_metric(g)
    assert fl.volume(m) == pytest.approx(4.0 * math.pi**2, rel=1e-14)
    assert max(abs(k) for k in fl.gauss_curvature(m).values) == 0.0


def test_total_curvature_vanishes():
    g = fl.make_grid(128, TWO_PI, TWO_PI)
    m = conformal(g, 0.3)
    assert abs(fl.integrate(m, fl.gauss_curvature(m))) < 1e-12


def test_flow_heat_entropy_pipeline():
    g = fl.make_grid(64, TWO_PI, TWO_PI)
    s0 = fl.make_flow_state(fl.FlowKind.ricci(), 0.0, conformal(g))
    dt = fl.auto_dt(fl.stable_dt(s0, 0.1), 0.1)
    traj = fl.evolve(s0, dt, 0.1)
    terminal = fl.ScalarField(g, [math.exp(0.3 * math.cos(x)) for x in fl.grid_points(g)])
    heat = fl.solve_backward(traj, terminal)
    for j in range(traj.full_count()):
        mass = fl.integrate(traj.full(j).metric, heat.u[j])
        assert mass == pytest.approx(heat.mass, rel=1e-9)
    spec = fl.SeriesSpec()
    spec.stride = 8
    series = fl.build_series(traj, heat, spec)
    assert all(b >= a - 1e-9 for a, b in zip(series.E1, series.E1[1:]))
    assert min(series.min_theta) > -1e-9


def test_eigensolver_against_flat_and_sphere():
    g = fl.make_grid(64, TWO_PI, TWO_PI)
    flat = fl.flat_metric(g)
    zero = fl.ScalarField(g, [0.0] * 64)
    assert abs(fl.lowest_eigenpair(flat, zero, 0.25).lam) < 1e-12
    st = fl.sphere_flow(1.0, 2, fl.unit_sphere_volume(2), 0.0)
    rep = fl.sphere_reports(st, 0.0, 0.25, 2.0, 0.5)
    assert rep.lam == pytest.approx(0.5, abs=1e-12)
    assert rep.lam_prime == pytest.approx(1.0, abs=1e-12)
    assert rep.W == pytest.approx(math.log(2.0) - 1.0, abs=1e-12)
    assert rep.dW == pytest.approx(0.0, abs=1e-12)


def test_run_experiment_and_reports():
    cfg = fl.parse_config(
        "flow.kind = ricci\n"
        "metric.preset = conformal\n"
        "metric.u = 1:0.1:0\n"
        "terminal.u = 1:0.3:0\n"
        "grid.n = 64\n"
        "time.t_end = 0.1\n"
    )
    rep = fl.run_experiment(cfg)
    assert rep.passed()
    assert rep.header[0] == "t"
    assert rep.rows() == len(rep.column("E"))
    csv = fl.render_csv(rep)
    assert csv.splitlines()[0].startswith("t, vol, E, E1_formula")
    assert fl.render_csv(fl.run_experiment(cfg)) == csv
    names = {v.name for v in rep.verdicts}
    assert "mass_conservation" in names and "E1_nondecreasing" in names


def test_invalid_config_raises():
    with pytest.raises(ValueError):
        fl.parse_config("grid.n = 17\n")
    cfg = fl.ExperimentConfig()
    fl.apply_override(cfg, "flow.kind=rh")
    fl.apply_override(cfg, "flow.decay=99")
    with pytest.raises(ValueError):
        fl.validate_config(cfg)


def test_verify_suite_runs_clean():
    results = fl.run_checks("geometry")
    assert results and all(r.pass_ for r in results)
