import json
import math

import numpy as np
import pytest

from mdprolate import (CubicBandUnion, OperatorSpec, SamplingGrid, build_psi,
                       dpss)
from mdprolate.reports import (ReportRow, export_dictionary, format_float,
                               report_rows_csv, write_csv, write_json,
                               write_spectrum_csv, write_eigenvectors_csv)


def test_format_float_round_trip():
    for x in (0.1, 1 / 3, 51.2, -1e-300, 2**-52, 1.7976931348623157e308):
        assert float(format_float(x)) == x


def test_format_float_rejects_non_finite():
    for bad in (math.nan, math.inf, -math.inf):
        with pytest.raises(ValueError):
            format_float(bad)


def test_write_csv_deterministic(tmp_path):
    rows = [(0, 0.1), (1, 2 / 3)]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_csv(a, ("index", "value"), rows)
    write_csv(b, ("index", "value"), rows)
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text()
    assert text.startswith("index,value\n")
    assert "\r" not in text


def test_write_csv_rejects_nan(tmp_path):
    with pytest.raises(ValueError):
        write_csv(tmp_path / "bad.csv", ("x",), [(float("nan"),)])
    assert not (tmp_path / "bad.csv").exists()


def test_write_json_sorted_and_finite(tmp_path):
    path = tmp_path / "o.json"
    write_json(path, {"b": 1, "a": np.float64(0.5)})
    assert path.read_text() == '{\n  "a": 0.5,\n  "b": 1\n}\n'
    with pytest.raises(ValueError):
        write_json(tmp_path / "bad.json", {"x": float("inf")})


def test_report_rows_sorted(tmp_path):
    rows = [
        ReportRow("z", "p=1", "m", 1.0, None, True),
        ReportRow("a", "p=2", "m", 2.0, 0.5, False),
        ReportRow("a", "p=1", "m", 3.0, None, True),
    ]
    path = tmp_path / "r.csv"
    report_rows_csv(path, rows)
    lines = path.read_text().splitlines()
    assert lines[0] == "experiment,params,metric,value,tolerance,passed"
    assert [ln.split(",")[0] for ln in lines[1:]] == ["a", "a", "z"]
    assert lines[2].endswith("false")


def test_spectrum_csv_rows(tmp_path):
    path = tmp_path / "s.csv"
    write_spectrum_csv(path, np.array([1.0, 0.5, 0.0]))
    lines = path.read_text().splitlines()
    assert len(lines) == 4
    assert lines[1] == "0,1"


def test_eigenvector_csv_interleaving(tmp_path):
    sp = dpss(6, 0.2)
    path = tmp_path / "v.csv"
    write_eigenvectors_csv(path, sp.eigenvectors[:, :2])
    lines = path.read_text().splitlines()
    assert lines[0] == "index,v000_re,v000_im,v001_re,v001_im"
    assert len(lines) == 7
    first = lines[1].split(",")
    assert float(first[1]) == pytest.approx(sp.eigenvectors[0, 0])
    assert float(first[2]) == 0.0


def test_export_dictionary(tmp_path):
    bands = CubicBandUnion(centers=[[0.0, 0.0]], half_widths=[[0.1, 0.1]])
    spec = OperatorSpec(grid=SamplingGrid((6, 6)), bands=bands)
    d = build_psi(spec, 3)
    out = export_dictionary(d, tmp_path / "psi")
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["atom_count"] == 3
    assert manifest["atoms"][0]["file"] == "atom_0000.csv"
    assert (out / "atom_0002.csv").exists()
    header = (out / "atom_0000.csv").read_text().splitlines()[0]
    assert header.startswith("c000_re,c000_im")
    assert manifest["atoms"][0]["dpss_indices"] == [0, 0]
