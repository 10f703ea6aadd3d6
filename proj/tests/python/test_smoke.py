import math

import pytest

import echolab


def test_hbar():
    assert echolab.hbar(2048) == pytest.approx(2 * math.pi / 2048)


def test_null_echo_stays_at_one():
    d = echolab.rotor_echo(256, sigma=0.0, members=8, T=5)
    for key in ("coherent", "incoherent", "peres"):
        assert all(abs(v - 1.0) < 1e-10 for v in d[key])


def test_coherent_below_incoherent():
    d = echolab.rotor_echo(1024, members=16, T=6)
    assert all(c <= i + 1e-14 for c, i in zip(d["coherent"], d["incoherent"]))


def test_fit_recovers_rate():
    t = list(range(11))
    fit = echolab.fit_decay_rate(t, [math.exp(-1.1 * x) for x in t])
    assert fit["rate"] == pytest.approx(1.1)


def test_poisson_populations():
    p = echolab.populations("ring", 0.1, 30, i0=0.4, width=4e-7)
    assert p[4] == pytest.approx(4**4 * math.exp(-4) / 24, rel=1e-6)


def test_run_preset():
    summary, series = echolab.run("preset:glauber-ring")
    assert summary["schema_version"] == 1
    assert list(summary)[:3] == ["schema_version", "code_version", "experiment"]
    assert "populations" in series


def test_errors_map_to_python():
    with pytest.raises(echolab.ConfigError):
        echolab.run("[experiment]\nkind = nothing\n", is_text=True)
    with pytest.raises(echolab.NumericalError):
        echolab.run("[experiment]\nkind = glauber-populations\n[glauber]\nweight = gaussian\n"
                    "delta = 1\nhbar = 0.1\nn_max = 5\n", is_text=True)
    with pytest.raises(echolab.InvalidArgument):
        echolab.populations("cubic", 0.1, 5)
