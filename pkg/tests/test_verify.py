import pytest

from parosc import preset, run_suite
from parosc.verify import GROUPS, parallel_map, thread_count


@pytest.mark.parametrize("name", ["tanh_step", "free_particle", "constant"])
def test_all_checks_pass(name):
    reports = run_suite(preset(name))
    failed = [r.to_dict() for r in reports if not r.passed]
    assert not failed
    groups = {r.check.split(".")[0] for r in reports}
    assert {"classical", "ermakov", "states", "coherent", "tdse"} <= groups


def test_tolerance_override():
    reports = run_suite(preset("constant"), groups=["ermakov"], tol=1e-30)
    assert any(not r.passed for r in reports)
    assert all(r.tolerance in (0.0, 1e-30) for r in reports)


def test_group_names():
    assert set(GROUPS) == {"classical", "ermakov", "states", "operators", "coherent", "tdse"}


def test_thread_cap(monkeypatch):
    monkeypatch.setenv("PAROSC_THREADS", "3")
    assert thread_count() == 3
    monkeypatch.setenv("PAROSC_THREADS", "junk")
    assert thread_count() == 1
    assert parallel_map(lambda v: v * v, range(10)) == [v * v for v in range(10)]
