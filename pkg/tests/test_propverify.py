import json

import numpy as np
import pytest

from sendov.errors import DomainError
from sendov.polycore import load_complex_list
from sendov import propverify
from sendov.propverify import SUITES, SuiteSpec, run_suite, sample_config, trial_stream


def test_trial_stream_reproducible():
    a = trial_stream(42, 7).uniform(size=4)
    b = trial_stream(42, 7).uniform(size=4)
    c = trial_stream(42, 8).uniform(size=4)
    assert (a == b).all() and not (a == c).all()


@pytest.mark.parametrize("kind, kw", [("unit_disk", {}), ("lens_complement", {}),
                                      ("annulus_moebius", {"c": 0.6, "r": 0.2})])
def test_sample_config_satisfies_region(kind, kw):
    rng = trial_stream(1, 0)
    pts = sample_config(kind, 40, 0.8, rng, **kw)
    assert pts.size == 40
    assert (np.abs(pts) <= 1 + 1e-12).all()
    if kind == "lens_complement":
        assert (np.abs(pts - 0.8) >= 1 - 1e-12).all()
        assert (pts.real <= 0.4 + 1e-12).all()
    if kind == "annulus_moebius":
        assert (np.abs((0.6 - pts) / (1 - 0.6 * pts)) >= 0.2 * (1 - 1e-12)).all()


def test_lens_contains_minus_one():
    assert propverify._in_region("lens_complement", np.array([-1 + 0j]), 0.999, None, None)[0]


def test_sampler_acceptance_reproducible():
    def stats(seed):
        rng = trial_stream(seed, 0)
        return [sample_config("lens_complement", 5, 0.3, rng, boundary=0.0) for _ in range(200)]

    first, second = stats(11), stats(11)
    assert all((x == y).all() for x, y in zip(first, second))


def test_sampler_budget():
    rng = trial_stream(3, 0)
    with pytest.raises(propverify.RejectionBudgetError):
        sample_config("annulus_moebius", 3, 0.5, rng, c=0.01, r=0.999999, boundary=0.0)


def test_suite_spec_validation():
    with pytest.raises(DomainError):
        SuiteSpec("nope", 10)
    with pytest.raises(DomainError):
        SuiteSpec("sym", 0)
    with pytest.raises(DomainError):
        SuiteSpec("sym", 10, max_degree=40)
    with pytest.raises(DomainError):
        SuiteSpec("sym", 10, seed=-1)


@pytest.mark.parametrize("suite", sorted(SUITES))
def test_every_suite_small_run(suite):
    rep = run_suite(SuiteSpec(suite, 150, seed=5, max_degree=10))
    assert rep.violations == 0 and rep.errors == 0
    assert rep.worst_margin >= -SUITES[suite].tolerance


def test_parallel_matches_serial():
    spec = SuiteSpec("min_deri", 400, seed=9)
    assert run_suite(spec, jobs=1).to_json() == run_suite(spec, jobs=3).to_json()


def test_report_json_excludes_timing():
    rep = run_suite(SuiteSpec("sym", 20, seed=1))
    assert "elapsed" not in json.loads(rep.to_json())
    assert "elapsed" in json.loads(rep.to_json(timing=True))


def test_violations_are_counted_and_dumped(tmp_path, monkeypatch):
    def always_bad(rng, max_degree):
        return -1.0, np.array([0.5 + 0.5j]), {"note": "forced"}

    monkeypatch.setitem(SUITES, "sym", propverify.Suite(always_bad, 1e-12, "forced"))
    rep = run_suite(SuiteSpec("sym", 3, seed=2), dump_failures=tmp_path)
    assert rep.violations == 3 and rep.worst_margin == -1.0 and not rep.passed
    assert [f[0] for f in rep.failures] == [0, 1, 2]
    dumped = tmp_path / "sym-1.json"
    assert load_complex_list(dumped.read_text()) == [0.5 + 0.5j]
    meta = json.loads((tmp_path / "sym-1.params.json").read_text())
    assert meta["params"] == {"note": "forced"}


def test_errors_counted_separately(monkeypatch):
    def broken(rng, max_degree):
        raise propverify.TrialError("no sample")

    monkeypatch.setitem(SUITES, "sym", propverify.Suite(broken, 1e-12, "forced"))
    rep = run_suite(SuiteSpec("sym", 4, seed=2))
    assert rep.errors == 4 and rep.violations == 0 and rep.worst_margin is None
