import json
import math

import numpy as np
import pytest
from scipy import stats

from lattice_moduli import verify
from lattice_moduli.closed_forms import cdf_square_distance
from lattice_moduli.verify import Check, EmpiricalCdf, UpperCheck, ks_distance, ks_two_sample, run_verification


def test_empirical_cdf():
    e = EmpiricalCdf([3.0, 1.0, 2.0, 2.0])
    assert list(e.values) == [1.0, 2.0, 2.0, 3.0]
    assert e.count == 4
    assert e(0.5) == 0.0
    assert e(1.0) == 0.25  # right-continuous
    assert e(2.0) == 0.75
    assert e(10.0) == 1.0
    with pytest.raises(ValueError):
        EmpiricalCdf([])


def test_ks_examples():
    norm = stats.norm.cdf
    assert ks_distance(EmpiricalCdf([0.0]), norm) == pytest.approx(0.5)
    c = 0.7
    d = ks_distance(EmpiricalCdf(np.full(10, c)), norm)
    assert d == pytest.approx(max(norm(c), 1 - norm(c)))


def test_ks_matches_scipy():
    rng = np.random.default_rng(0)
    for n in (1, 7, 1000):
        x = rng.normal(size=n)
        assert ks_distance(EmpiricalCdf(x), stats.norm.cdf) == pytest.approx(stats.kstest(x, "norm").statistic, abs=1e-15)
        y = rng.normal(0.1, 1, n + 3)
        assert ks_two_sample(EmpiricalCdf(x), EmpiricalCdf(y)) == pytest.approx(stats.ks_2samp(x, y).statistic, abs=1e-15)


def test_ks_of_exact_samples_below_critical_value():
    n = 10 ** 6
    u = np.random.default_rng(4).uniform(size=n)
    assert ks_distance(EmpiricalCdf(u), lambda t: np.clip(t, 0, 1)) < 1.63 / math.sqrt(n)


def test_checks():
    assert Check("a", 1.0, 1.0 + 1e-6, 1e-5, "published").passed
    assert not Check("a", 1.0, 1.1, 1e-5, "published").passed
    assert not Check("a", 1.0, math.nan, 1.0, "published").passed
    assert UpperCheck("b", 0.0, -5.0, 1e-3, "oracle").passed
    assert not UpperCheck("b", 0.0, 2e-3, 1e-3, "oracle").passed


@pytest.fixture(scope="module")
def small_reports():
    return run_verification(seed=3, n=10 ** 4), run_verification(seed=3, n=10 ** 4)


def test_small_run_is_deterministic_and_passes(small_reports):
    a, b = small_reports
    assert a.to_json() == b.to_json()
    assert a.passed, a.table()
    assert all(c.provenance in ("published", "oracle") for c in a.checks)


def test_tolerances_scale_with_n(small_reports):
    a, _ = small_reports
    ks = {c.name: c.tol for c in a.checks}
    assert ks["KS d_square vs cdf_square"] == pytest.approx(10 * 0.0025)
    assert ks["rejection acceptance rate"] == pytest.approx(10 * 0.001)


def test_report_serialisation(small_reports):
    a, _ = small_reports
    doc = json.loads(a.dumps())
    assert doc["seed"] == 3 and doc["n"] == 10 ** 4
    assert set(doc["checks"][0]) == {"name", "target", "value", "tol", "pass", "provenance"}
    assert "all checks passed" in a.table()


def test_corrupted_constant_fails(monkeypatch):
    monkeypatch.setitem(verify.PUBLISHED_VALUES, "mean_square", 1.1)
    rep = run_verification(seed=3, n=10 ** 4)
    assert not rep.passed
    # both the quadrature and the Monte Carlo mean are checked against it
    assert [c.name for c in rep.failures()] == ["mean square distance", "sample mean d_square"]


def test_rejects_small_n():
    with pytest.raises(ValueError):
        run_verification(n=999)


def test_sample_fraction_matches_normalised_area():
    from lattice_moduli.sampler import SamplerConfig, sample_uniform

    n = 10 ** 6
    d = sample_uniform(SamplerConfig(8, n)).d_square
    for r in (0.3, 0.5, 1.0, 2.0):
        p = cdf_square_distance(r)
        assert abs((d <= r).mean() - p) <= 3 * math.sqrt(p * (1 - p) / n)
