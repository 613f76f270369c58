import json

import numpy as np
import numpy.testing as npt
import pytest

from helpers import spec_for
from sfc_lab import (
    ConfigError,
    NumericalFailureError,
    cosine,
)
from sfc_lab.experiment import (
    CSV_HEADER,
    ExperimentConfig,
    config_from_jsonable,
    config_hash,
    config_jsonable,
    fit_decay,
    fit_loglog,
    resolve_threads,
    run_convergence,
)


def small_config(**over):
    base = dict(
        spec=spec_for("CONST"),
        n_list=(4, 8, 16),
        M=1,
        m=256,
        paths=120,
        master_seed=90,
        block_size=32,
    )
    base.update(over)
    return ExperimentConfig(**base)


def test_config_validation():
    small_config()
    with pytest.raises(ConfigError):
        small_config(n_list=())
    with pytest.raises(ConfigError):
        small_config(n_list=(8, 4))
    with pytest.raises(ConfigError):
        small_config(n_list=(0, 4))
    with pytest.raises(ConfigError):
        small_config(M=-1)
    with pytest.raises(ConfigError):
        small_config(m=100)  # below 8 (16 + 1)
    with pytest.raises(ConfigError):
        small_config(paths=99)
    with pytest.raises(ConfigError):
        small_config(p_exponent=0.5)
    with pytest.raises(ConfigError):
        small_config(block_size=0)


def test_config_round_trip_and_hash():
    spec = spec_for("DET", {"f": cosine(2), "g": cosine(), "drift": "w1"})
    cfg = ExperimentConfig(spec=spec, n_list=(4, 8, 16), M=1, m=256, paths=150, master_seed=7)
    data = config_jsonable(cfg)
    rebuilt = config_from_jsonable(json.loads(json.dumps(data)))
    assert config_hash(rebuilt) == config_hash(cfg)
    assert rebuilt.spec.kind == "DET"
    assert rebuilt.spec.f.coeff(2) == 0.5
    # hash reacts to content, not dict ordering
    assert config_hash(small_config()) != config_hash(small_config(master_seed=91))
    shuffled = dict(reversed(list(data.items())))
    assert config_hash(config_from_jsonable(shuffled)) == config_hash(cfg)


def test_config_from_jsonable_rejects_strays():
    data = config_jsonable(small_config())
    data["typo_key"] = 1
    with pytest.raises(ConfigError):
        config_from_jsonable(data)
    with pytest.raises(ConfigError):
        config_from_jsonable({"N_list": [4]})  # no process block


def test_config_array_table_round_trip():
    f = np.linspace(1.0, 2.0, 256)
    spec = spec_for("DET", {"f": f})
    cfg = ExperimentConfig(spec=spec, n_list=(4,), M=0, m=256, paths=100, master_seed=1)
    rebuilt = config_from_jsonable(config_jsonable(cfg))
    npt.assert_allclose(rebuilt.spec.f, f, atol=0)


def test_fit_loglog_recovers_synthetic_slope():
    widths = np.array([2 * N + 1 for N in (4, 8, 16, 32, 64)], dtype=float)
    errors = 3.7 * widths**-0.5
    fit = fit_loglog(widths, errors)
    assert fit.slope == pytest.approx(-0.5, abs=1e-12)
    assert fit.half_width == pytest.approx(0.0, abs=1e-12)
    assert np.exp(fit.intercept) == pytest.approx(3.7, abs=1e-9)


def test_fit_loglog_validation():
    with pytest.raises(ValueError):
        fit_loglog(np.array([1.0]), np.array([1.0]))
    with pytest.raises(ValueError):
        fit_loglog(np.array([1.0, 2.0]), np.array([1.0, 0.0]))


def test_fit_decay_order_bound():
    res = run_convergence(small_config())
    with pytest.raises(ValueError):
        fit_decay(res, 2)  # M = 1


def test_run_shapes_and_determinism():
    cfg = small_config()
    res1 = run_convergence(cfg)
    res2 = run_convergence(cfg)
    assert res1.abs_errors.shape == (120, 3, 3)
    assert res1.estimates.shape == (120, 3, 3)
    assert np.array_equal(res1.abs_errors, res2.abs_errors)
    assert res1.csv_text() == res2.csv_text()
    assert res1.runtime_seconds > 0.0
    # runtime and per-path tensors stay out of the serialization
    payload = res1.json_dict()
    assert "runtime_seconds" not in json.dumps(payload)
    assert set(payload) == {"version", "config_hash", "config", "rows", "decay"}


def test_thread_count_does_not_change_bytes(monkeypatch):
    cfg = small_config()
    monkeypatch.setenv("SFC_LAB_THREADS", "1")
    seq = run_convergence(cfg)
    monkeypatch.setenv("SFC_LAB_THREADS", "3")
    par = run_convergence(cfg)
    assert np.array_equal(seq.abs_errors, par.abs_errors)
    assert seq.csv_text() == par.csv_text()
    assert seq.json_text() == par.json_text()


def test_prefix_property():
    short = run_convergence(small_config(paths=100))
    longer = run_convergence(small_config(paths=160))
    assert np.array_equal(short.abs_errors, longer.abs_errors[:100])
    assert np.array_equal(short.estimates, longer.estimates[:100])


def test_block_size_does_not_change_estimates():
    # partitioning is an implementation detail of scheduling; the per-path
    # substreams make path content independent of it.  Block size does join
    # the config hash, so artifacts declare it.
    a = run_convergence(small_config(block_size=32))
    b = run_convergence(small_config(block_size=50))
    npt.assert_allclose(a.abs_errors, b.abs_errors, rtol=0, atol=1e-12)


def test_csv_schema_and_round_trip():
    res = run_convergence(small_config())
    lines = res.csv_text().strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == 1 + 3 * 3
    row = lines[1].split(",")
    assert row[0] == "CONST"
    # repr round trip: parsing the printed floats reproduces the numbers
    parsed = float(row[6])
    assert parsed == res.mean_abs_err[0, 0]
    payload = res.json_dict()
    assert payload["rows"][0]["mean_abs_err"] == res.mean_abs_err[0, 0]
    assert payload["config_hash"] == config_hash(res.config)


def test_wick_variance_oracles():
    # frozen oracles: E|B_N(0) - 1|^2 = 2/(2N+1) for CONST and
    # E|B_N(0) - W_1|^2 = (4N+7)/(2N+1)^2 for NONCAUSAL_W1.
    cfg = ExperimentConfig(
        spec=spec_for("CONST"), n_list=(4, 16), M=0, m=256, paths=3000, master_seed=17,
    )
    res = run_convergence(cfg)
    for wi, N in enumerate(cfg.n_list):
        emp = res.lp_err[0, wi] ** 2
        oracle = 2.0 / (2 * N + 1)
        assert abs(emp / oracle - 1.0) < 0.12, N
    cfg = ExperimentConfig(
        spec=spec_for("NONCAUSAL_W1"), n_list=(4, 16), M=0, m=256, paths=3000, master_seed=17,
    )
    res = run_convergence(cfg)
    for wi, N in enumerate(cfg.n_list):
        emp = res.lp_err[0, wi] ** 2
        oracle = (4 * N + 7) / (2 * N + 1) ** 2
        assert abs(emp / oracle - 1.0) < 0.2, N


def test_slope_negative_for_every_kind():
    # the catalog-wide monotone decay property at reduced size
    for kind in ("DET", "ADAPTED_W", "NONCAUSAL_BRIDGE", "NONCAUSAL_MIDPOINT"):
        cfg = ExperimentConfig(
            spec=spec_for(kind),
            n_list=(4, 8, 16, 32, 64),
            M=0,
            m=512,
            paths=300,
            master_seed=23,
        )
        fit = fit_decay(run_convergence(cfg), 0)
        assert fit.slope < 0.0, kind
        assert fit.slope + 2 * fit.half_width < 0.0, kind


def test_nonfinite_estimate_names_the_path(monkeypatch):
    import sfc_lab.experiment as exp

    real = exp.block_functionals

    def poisoned(spec, w_block, grid):
        a, b, x = real(spec, w_block, grid)
        x = x.copy()
        x[3, -1] = np.nan  # path index 3 of the first block
        return a, b, x

    monkeypatch.setattr(exp, "block_functionals", poisoned)
    with pytest.raises(NumericalFailureError, match="path 3"):
        run_convergence(small_config())


def test_resolve_threads(monkeypatch):
    monkeypatch.delenv("SFC_LAB_THREADS", raising=False)
    assert resolve_threads() == 1
    monkeypatch.setenv("SFC_LAB_THREADS", "4")
    assert resolve_threads() == 4
    monkeypatch.setenv("SFC_LAB_THREADS", "0")
    with pytest.raises(ConfigError):
        resolve_threads()
    monkeypatch.setenv("SFC_LAB_THREADS", "four")
    with pytest.raises(ConfigError):
        resolve_threads()
