import io
import math

import pytest

from photodevice.errors import ConfigurationError, InvalidParameterError
from photodevice.model import DeviceParams
from photodevice.sweep import (
    CSV_HEADER,
    UNDEF,
    SweepConfig,
    evaluate_many,
    evaluate_point,
    load_config,
    parse_assignments,
    parse_grid,
    parse_row,
    read_csv,
    run_sweep,
    write_csv,
)


def test_default_config():
    cfg = load_config()
    p = cfg.base
    assert (p.eps_H, p.eps_L, p.beta, p.beta_gamma, p.Gamma, p.mu) == (-1, 2, 39.2, 2, 1, 0)
    assert cfg.axis is None and cfg.points() == [p]


def test_config_file_and_overrides(tmp_path):
    f = tmp_path / "run.cfg"
    f.write_text("# a comment\nU = 0.5\nnu = 10   # trailing\naxis = U\ngrid = 0:1:0.5\n")
    cfg = load_config(f, ["nu=20"])
    assert cfg.base.nu == 20 and cfg.grid == (0.0, 0.5, 1.0)
    assert [p.U for p in cfg.points()] == [0.0, 0.5, 1.0]


def test_out_of_range_rejected():
    with pytest.raises(InvalidParameterError, match="z"):
        load_config(overrides=["z=1.5"])


def test_grid_values_validated():
    with pytest.raises(InvalidParameterError):
        load_config(overrides=["axis=z", "grid=0,0.5,1.5"])


def test_grid_inclusive():
    g = parse_grid("0:2.5:0.01")
    assert len(g) == 251 and g[0] == 0 and g[-1] == 2.5
    assert parse_grid("1, 2,3") == (1.0, 2.0, 3.0)


@pytest.mark.parametrize("bad", ["0:1", "0:1:0", "1:0:0.1", ""])
def test_bad_grids(bad):
    with pytest.raises(ConfigurationError):
        parse_grid(bad)


def test_non_monotone_grid():
    with pytest.raises(ConfigurationError, match="monotone"):
        load_config(overrides=["axis=U", "grid=0,1,0.5"])


def test_unknown_key_reports_line():
    with pytest.raises(ConfigurationError, match=r"cfg:2: unknown key 'bogus'"):
        parse_assignments(["U = 1", "bogus = 2"], "cfg")


def test_bad_value_reports_line():
    with pytest.raises(ConfigurationError, match=r"cfg:1: bad value"):
        parse_assignments(["U = one"], "cfg")


def test_axis_requires_grid():
    with pytest.raises(ConfigurationError):
        load_config(overrides=["axis=U"])


def test_header_exact():
    buf = io.StringIO()
    write_csv([evaluate_point(DeviceParams(nu=10, V=1))], buf)
    assert buf.getvalue().splitlines()[0] == ",".join(CSV_HEADER)


def test_empty_rows_rejected():
    with pytest.raises(ValueError):
        write_csv([], io.StringIO())


def test_roundtrip_bit_exact(tmp_path):
    cfg = SweepConfig(base=DeviceParams(nu=50, V=1), axis="U", grid=parse_grid("0:2:0.5"),
                      outputs=frozenset({"J", "Q", "G", "D", "SNR", "JQ_gamma"}))
    rows = run_sweep(cfg, jobs=1)
    path = tmp_path / "out.csv"
    write_csv(rows, path, comments=["note"])
    back = [parse_row(r) for r in read_csv(path)]
    assert back == rows
    assert path.read_text().startswith("# note\n")


def test_unrequested_outputs_empty(tmp_path):
    rows = [evaluate_point(DeviceParams(nu=10, V=1), frozenset({"J"}))]
    path = tmp_path / "o.csv"
    write_csv(rows, path)
    rec = read_csv(path)[0]
    assert rec["J"] != "" and rec["G"] == "" and rec["D"] == ""


def test_undefined_performance_sentinel(tmp_path):
    # dark device: no photon heat to normalise by
    row = evaluate_point(DeviceParams(z=1.0, nu=0.0, V=1.0))
    assert row.Q == UNDEF
    path = tmp_path / "u.csv"
    write_csv([row], path)
    rec = read_csv(path)[0]
    assert rec["Q"] == UNDEF and parse_row(rec) == row


def test_parallel_matches_serial():
    pts = [DeviceParams(U=u, nu=25, V=1) for u in (0.0, 0.7, 1.4, 2.1)]
    assert evaluate_many(pts, jobs=2) == evaluate_many(pts, jobs=1)


def test_residual_column_certifies(presets):
    for res in presets.values():
        assert all(r.residual < 1e-10 for r in res.rows)


def test_fig1b_columns(presets):
    res = presets["fig1b"]
    assert len(res.rows) == 3 * 51
    assert all(r.G is not None and r.D is None and r.V == 0 for r in res.rows)
    assert any("G/G0" in c for c in res.comments)


def test_bias_comment_records_boundaries(presets):
    assert "regime boundaries V = 2.0, 4.0" in presets["bias"].comments


def test_fig3_grid(presets):
    zs = sorted({r.z for r in presets["fig3"].rows})
    assert len(zs) == 51 and zs[0] == 0 and zs[-1] == 1
    assert all(math.isclose(r.nu, 100) for r in presets["fig3"].rows)
