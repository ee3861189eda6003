import math

import numpy as np
import pytest

import _wassbern as wb


def test_gaussian_w2_scalar_closed_form():
    w = wb.gaussian_w2_sq(
        np.array([0.0]), np.array([[1.0]]), np.array([3.0]), np.array([[4.0]])
    )
    assert w == pytest.approx(10.0, rel=1e-10)


def test_isotropic_fast_path_matches_general():
    rng = np.random.default_rng(0)
    for _ in range(20):
        d = rng.integers(2, 4)
        mu = rng.normal(size=d)
        y = rng.normal(size=d)
        a = rng.normal(size=(d, d))
        cov = a @ a.T + 0.1 * np.eye(d)
        eps = float(rng.uniform(1e-3, 1.0))
        fast = wb.gaussian_w2_sq_isotropic_target(mu, cov, y, eps)
        general = wb.gaussian_w2_sq(mu, cov, y, eps * np.eye(d))
        assert fast == pytest.approx(general, abs=1e-9)


def test_psd_sqrt():
    r = wb.psd_sqrt(np.diag([4.0, 9.0]))
    assert np.allclose(r, np.diag([2.0, 3.0]))


def test_bernstein_basis_partition_of_unity():
    w = wb.bernstein_basis(7, 0.3)
    assert w.sum() == pytest.approx(1.0, abs=1e-12)
    assert (w >= 0).all()


def test_generate_deterministic():
    xs1, ys1 = wb.generate("ellipse", n=100, noise=0.03, seed=5)
    xs2, ys2 = wb.generate("ellipse", n=100, noise=0.03, seed=5)
    assert np.array_equal(ys1, ys2)
    assert xs1[0] == 0.0 and xs1[-1] == 1.0
    assert set(wb.dataset_families()) == {
        "spiral",
        "ellipse",
        "figure_eight",
        "lissajous",
        "torus_knot",
    }


def test_train_eval_roundtrip(tmp_path):
    xs, ys = wb.generate("ellipse", n=120, noise=0.02, seed=3)
    model, history = wb.train(xs, ys, degree=6, epochs=150, lr=2e-2, seed=3)
    assert len(history) == 150
    assert history[-1] < history[0]

    report = wb.evaluate(model, xs, ys, seed=3)
    assert report["rmse"] < 0.5
    assert math.isfinite(report["nll"])

    path = tmp_path / "model.json"
    model.save(str(path))
    back = wb.MixtureModel.load(str(path))
    assert np.array_equal(back.flatten_params(), model.flatten_params())
    assert np.allclose(back.mean(0.5), model.mean(0.5))


def test_baselines_share_the_metric_interface():
    xs, ys = wb.generate("ellipse", n=80, noise=0.02, seed=2)
    poly = wb.PolyModel.fit(xs, ys, degree=8)
    gpr = wb.GprModel.fit(xs, ys)
    for m in (poly, gpr):
        report = wb.evaluate(m, xs, ys)
        assert report["rmse"] < 0.5
        mix = m.predict(0.5)
        assert len(mix.means) == 1
        assert mix.covs[0].shape == (2, 2)


def test_errors_surface_as_python_exceptions():
    with pytest.raises(Exception):
        wb.bernstein_basis(3, 1.5)
    with pytest.raises(Exception):
        wb.generate("no_such_family")
