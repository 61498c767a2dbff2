import json

import numpy as np
import pytest

from povline import ValidationError
from povline.reports import SCHEMA, dumps, file_digest, make_report, read_incomes, read_report


def test_plain_column(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("3.5\n1\n\n2e3\n")
    np.testing.assert_array_equal(read_incomes(p), [3.5, 1, 2000])


def test_header_and_column(tmp_path):
    p = tmp_path / "b.csv"
    p.write_text("id,income\n1,10.5\n2,7\n")
    np.testing.assert_array_equal(read_incomes(p, 1), [10.5, 7])
    np.testing.assert_array_equal(read_incomes(p, "income"), [10.5, 7])
    with pytest.raises(ValidationError, match="no column named"):
        read_incomes(p, "wage")


@pytest.mark.parametrize("body,line", [("1\n2\nx\n", 3), ("inc\n4\n-1\n", 3), ("1\n0\n", 2)])
def test_bad_rows_named(tmp_path, body, line):
    p = tmp_path / "c.csv"
    p.write_text(body)
    with pytest.raises(ValidationError, match=f"line {line}"):
        read_incomes(p)


def test_round_trip():
    rep = make_report("estimate", {"a": np.float64(1.5), "b": np.int64(3), "c": float("nan"),
                                   "d": np.array([1.0, 2.0]), "e": np.bool_(True)}, {"seed": 1})
    text = dumps(rep)
    back = read_report(text)
    assert back["schema"] == SCHEMA
    assert back["result"] == {"a": 1.5, "b": 3, "c": None, "d": [1.0, 2.0], "e": True}
    assert dumps(back) == text


def test_rejects_foreign_json(tmp_path):
    with pytest.raises(ValidationError):
        read_report(json.dumps({"schema": "other/1"}))
    with pytest.raises(ValidationError):
        read_report("{not json")


def test_digest(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("1\n")
    assert file_digest(p).startswith("sha256:") and len(file_digest(p)) == 71
