import json
import math

import pytest

from smoothkit import reporting
from smoothkit.harness import make_report


def _rows():
    return [
        make_report("demo", "case-a", {"k": 1, "n": 4, "h": 0.25}, 1.0, 2.0, 1e-8),
        make_report("demo", "case-b", {"k": 2, "alpha": 1.5}, 3.0, 1.0, 1e-8, empirical_constant=3.0),
    ]


def test_header_and_column_order():
    text = reporting.rows_to_csv(_rows())
    lines = text.splitlines()
    assert lines[0] == "suite,case_id,k,n,alpha,h,lhs,rhs,margin,empirical_constant,pass"
    assert len(lines) == 3


def test_cells_render_types():
    lines = reporting.rows_to_csv(_rows()).splitlines()
    first = lines[1].split(",")
    assert first[0] == "demo" and first[1] == "case-a"
    assert first[2] == "1" and first[3] == "4"
    assert first[4] == ""
    assert first[-1] == "True"
    second = lines[2].split(",")
    assert second[3] == "" and second[4] == "1.5"
    assert second[-2] == "3" and second[-1] == "False"


@pytest.mark.parametrize("value", [1.0 / 3.0, math.pi, 1e-17, -0.1, 123456789.123456789])
def test_float_format_roundtrips(value):
    assert float(reporting.format_float(value)) == value


def test_json_records_carry_params(tmp_path):
    path = tmp_path / "rows.json"
    reporting.write_json(_rows(), str(path))
    payload = json.loads(path.read_text())
    assert payload[0]["params"] == {"k": 1, "n": 4, "h": 0.25}
    assert payload[1]["params"]["alpha"] == 1.5
    assert payload[0]["pass"] is True and payload[1]["pass"] is False
    assert payload[0]["margin"] == 1.0


def test_summary_counts():
    lines = reporting.summary_lines({"demo": _rows(), "empty": []})
    assert lines[0].startswith("demo: rows=2 failures=1 worst_margin=-2")
    assert lines[1].startswith("empty: rows=0 failures=0")
    assert lines[-1] == "total: rows=2 failures=1"


def test_series_layout():
    text = reporting.series_to_csv("x", [0.0, 1.0], {"a": [1.0, 2.0], "b": [3.0, 4.0]})
    lines = text.splitlines()
    assert lines[0] == "x,a,b"
    assert lines[1] == "0,1,3"


def test_render_report_data_only(tmp_path):
    written = reporting.render_report(str(tmp_path), ["constants"], figures=False)
    assert written == [str(tmp_path / "constants.csv")]
    header = (tmp_path / "constants.csv").read_text().splitlines()[0]
    assert header == "k,b0,b1,lambda_l1,K_2k"
    with pytest.raises(ValueError):
        reporting.render_report(str(tmp_path), ["pie_chart"])
