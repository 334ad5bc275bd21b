import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stdqbose.cli import main
from stdqbose.errors import ConfigError
from stdqbose.qkernel import Phase, Real
from stdqbose.sweep import (
    FIELDS,
    Quantity,
    SweepRow,
    SweepSpec,
    emit,
    format_rows,
    parse_grid,
    parse_orders,
    parse_rows,
    run_sweep,
)

HEADER = "q_repr,x,r,quantity,value,oracle_value,abs_diff,status"


# -- run_sweep -------------------------------------------------------------


def test_asymptote_at_q_one():
    rows = run_sweep(SweepSpec([Real(1.0)], [], [1, 2, 3, 4], Quantity.ASYMPTOTE))
    assert [row.value for row in rows] == [0.0, 1.0, 5.0, 23.0]
    assert all(row.x is None and row.ok for row in rows)


def test_intercept_column_at_q_one():
    xs = [0.2, 0.9, 2.5, 7.0]
    rows = run_sweep(SweepSpec([Real(1.0)], xs, [2], Quantity.INTERCEPT))
    assert [row.value for row in rows] == pytest.approx([1.0] * len(xs), rel=1e-12)


def test_oracle_column():
    (row,) = run_sweep(SweepSpec([Real(1.3)], [3.0], [3], Quantity.DIST, series_tolerance=1e-12))
    assert row.ok and row.oracle_value is not None
    assert row.abs_diff < 1e-10 * abs(row.value)


@pytest.mark.parametrize("quantity", [Quantity.MEAN, Quantity.INTERCEPT])
def test_oracle_column_other_quantities(quantity):
    (row,) = run_sweep(SweepSpec([Phase(1.0)], [0.8], [2], quantity, series_tolerance=1e-12))
    assert row.abs_diff < 1e-9 * abs(row.value)


def test_error_rows_do_not_abort():
    rows = run_sweep(SweepSpec([Real(2.0)], [1.0, 3.0], [1, 3]))
    status = {(row.x, row.r): row.status for row in rows}
    assert status == {(1.0, 1): "ok", (1.0, 3): "domain_error", (3.0, 1): "ok", (3.0, 3): "ok"}
    bad = [row for row in rows if not row.ok]
    assert all(row.value is None for row in bad)


def test_zero_denominator_row():
    x0 = math.log(math.sin(0.7) + math.cos(0.7))
    (row,) = run_sweep(SweepSpec([Phase(0.7)], [x0], [2], Quantity.INTERCEPT))
    assert row.status == "zero_denominator" and row.value is None


def test_rows_sorted():
    spec = SweepSpec([Real(1.2), Real(0.8), Real(1.0)], [3.0, 1.0], [2, 1])
    keys = [(row.q_repr, row.x, row.r) for row in run_sweep(spec)]
    assert keys == sorted(keys)
    assert len(keys) == 12


def test_parallel_matches_serial():
    spec = SweepSpec([Real(q) for q in (0.8, 1.1, 1.4)] + [Phase(t) for t in (0.3, 2.0)], [0.7, 2.0, 5.0], [1, 2, 3, 4])
    assert format_rows(run_sweep(spec, jobs=4), "csv") == format_rows(run_sweep(spec), "csv")


@pytest.mark.parametrize(
    "spec",
    [
        SweepSpec([], [1.0], [1]),
        SweepSpec([Real(1.0)], [], [1]),
        SweepSpec([Real(1.0)], [1.0], []),
        SweepSpec([Real(1.0)], [-1.0], [1]),
        SweepSpec([Real(1.0)], [1.0], [0]),
        SweepSpec([Real(1.0)], [1.0], [1], output_format="xml"),
        SweepSpec([Real(1.0)], [1.0], [1], series_tolerance=2.0),
    ],
)
def test_invalid_specs(spec):
    with pytest.raises(ConfigError):
        run_sweep(spec)


@pytest.mark.parametrize("quantity", [Quantity.DIST, Quantity.INTERCEPT, Quantity.MEAN])
def test_q_inversion_columns(quantity):
    pairs = [(Real(q), Real(1 / q)) for q in (0.6, 0.85, 1.3)] + [(Phase(t), Phase(-t)) for t in (0.4, 1.9)]
    xs, orders = [1.8, 4.0], [1, 2, 3]
    for a, b in pairs:
        ra = run_sweep(SweepSpec([a], xs, orders, quantity))
        rb = run_sweep(SweepSpec([b], xs, orders, quantity))
        for u, v in zip(ra, rb):
            assert u.status == v.status
            if u.ok:
                assert abs(u.value - v.value) <= 1e-12 * abs(u.value)


# -- parsing ---------------------------------------------------------------


def test_parse_grid():
    assert parse_grid("1,2.5") == [1.0, 2.5]
    assert parse_grid("0:1:3") == [0.0, 0.5, 1.0]
    assert parse_grid("1:100:3:log") == pytest.approx([1.0, 10.0, 100.0])


@pytest.mark.parametrize("token", ["a,b", "1:2", "1:2:0", "1:2:3:lin", "0:1:3:log"])
def test_parse_grid_rejects(token):
    with pytest.raises(ConfigError):
        parse_grid(token)


def test_parse_orders():
    assert parse_orders("1,3") == [1, 3]
    assert parse_orders("2-4") == [2, 3, 4]
    with pytest.raises(ConfigError):
        parse_orders("x")


# -- emission --------------------------------------------------------------


def test_empty_csv_is_header_only():
    assert format_rows([], "csv") == HEADER + "\r\n"


def test_json_null_oracle_fields():
    rows = run_sweep(SweepSpec([Real(1.1)], [2.0], [2]))
    (obj,) = json.loads(format_rows(rows, "json"))
    assert list(obj) == list(FIELDS)
    assert obj["oracle_value"] is None and obj["abs_diff"] is None


def test_csv_quoting():
    row = SweepRow('q="1,2"', 1.0, 1, "dist", 0.1, status="ok")
    text = format_rows([row], "csv")
    assert '"q=""1,2"""' in text
    assert parse_rows(text, "csv") == [row]


finite = st.floats(allow_nan=False, allow_infinity=False)
rows_strategy = st.lists(
    st.builds(
        SweepRow,
        q_repr=st.sampled_from(["q=1.5", "theta=0.25"]),
        x=st.none() | st.floats(min_value=1e-6, max_value=1e3),
        r=st.integers(1, 64),
        quantity=st.sampled_from([q.value for q in Quantity]),
        value=st.none() | finite,
        oracle_value=st.none() | finite,
        abs_diff=st.none() | finite,
        status=st.sampled_from(["ok", "domain_error", "zero_denominator", "non_convergent"]),
    ),
    max_size=6,
)


@given(rows_strategy, st.sampled_from(["csv", "json"]))
def test_round_trip(rows, fmt):
    assert parse_rows(format_rows(rows, fmt), fmt) == rows


def test_emit_to_file(tmp_path):
    rows = run_sweep(SweepSpec([Real(0.9)], [1.0, 2.0], [2]))
    target = tmp_path / "out.csv"
    emit(rows, "csv", str(target))
    assert target.read_bytes() == format_rows(rows, "csv").encode()


# -- command line ----------------------------------------------------------


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cli_asymptote(capsys):
    code, out, _ = run_cli(capsys, "asymptote", "--q", "1", "--format", "json")
    assert code == 0
    assert [row["value"] for row in json.loads(out)] == [0.0, 1.0, 5.0, 23.0]


def test_cli_sweep_csv(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--q", "1.3", "--x", "3", "--r", "3", "--oracle-tol", "1e-12")
    assert code == 0
    header, line = out.strip().split("\r\n")
    assert header == HEADER
    row = parse_rows(out, "csv")[0]
    assert row.abs_diff < 1e-10 * row.value


def test_cli_theta_ranges(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--theta", "0.1:0.5:3", "--theta", "2", "--x", "0.5,1", "--quantity", "mean")
    assert code == 0
    assert len(parse_rows(out, "csv")) == 8


def test_cli_error_rows_exit_one(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--q", "2", "--x", "1,3", "--r", "3")
    assert code == 1
    assert [row.status for row in parse_rows(out, "csv")] == ["domain_error", "ok"]


@pytest.mark.parametrize(
    "argv",
    [
        ["sweep", "--q", "1", "--theta", "1", "--x", "1"],
        ["sweep", "--q", "-1", "--x", "1"],
        ["sweep", "--q", "1"],
        ["sweep", "--q", "1", "--x", "1", "--r", "0"],
        ["sweep", "--q", "1", "--x", "nope"],
        ["frobnicate"],
        [],
    ],
)
def test_cli_config_errors(capsys, argv):
    code, _, err = run_cli(capsys, *argv)
    assert code == 2
    assert "configuration error" in err


def test_cli_io_error(capsys, tmp_path):
    code, _, err = run_cli(capsys, "asymptote", "--q", "1", "--out", str(tmp_path / "missing" / "out.csv"))
    assert code == 3
    assert "I/O error" in err


def test_cli_output_is_deterministic(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p, jobs in zip(paths, ("1", "3")):
        argv = ["sweep", "--theta=-1:1:5", "--x", "0.5:3:4", "--r", "1-3", "--format", "json", "--jobs", jobs, "--out", str(p)]
        assert main(argv) in (0, 1)
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_cli_verify_json(capsys):
    code, out, _ = run_cli(capsys, "verify", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["passed"] and payload["preset"] == "quick"
