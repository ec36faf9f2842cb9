import copy
import csv
import io
import json
import re

import jsonschema
import pytest

from coxcess import build_system
from coxcess.conjugacy import class_of
from coxcess.errors import BudgetExceeded, WordError
from coxcess.report import (
    DOCUMENT_SCHEMA,
    ReportDocument,
    compare_report,
    cuspidal_report,
    format_word,
    load_expected,
    out_of_scope_checks,
    parse_word,
    profile_budget,
    render,
    table1_report,
    validate_rep,
)

# (x, y, L(x)+L(y), l(x)+l(y)) transcribed from the worked example
TABLE1 = [
    ("(14)(23)", "(15)(26)", 4, 18),
    ("(14)(36)", "(15)(23)", 4, 16),
    ("(14)(26)", "(15)(36)", 4, 20),
    ("(15)(23)", "(45)(26)", 4, 16),
    ("(15)(36)", "(45)(23)", 4, 12),
    ("(15)(26)", "(45)(36)", 4, 18),
    ("(45)(23)", "(14)(26)", 4, 12),
    ("(45)(36)", "(14)(23)", 4, 12),
    ("(45)(26)", "(14)(36)", 4, 16),
    ("(12)(46)(35)", "(13)(24)(56)", 6, 10),
    ("(13)(24)(56)", "(16)(25)(34)", 6, 20),
    ("(16)(25)(34)", "(12)(35)(46)", 6, 20),
]

F4_ROWS = [(8, 2, "1324"), (14, 2, "124323"), (16, 16, "12132343"), (8, 6, "1232343234"), (8, 6, "1213213234"),
           (12, 12, "121321343234"), (16, 12, "12132132343234"), (16, 16, "1213213432132343"), (1, 1, "w0")]


def _transpositions(s):
    return frozenset(frozenset(int(c) for c in re.sub(r"\s", "", m)) for m in re.findall(r"\(([^)]*)\)", s))


def test_parse_word():
    assert parse_word("1324") == [1, 3, 2, 4]
    assert parse_word("") == []
    assert parse_word("1 3,2.4") == [1, 3, 2, 4]
    assert format_word([1, 3, 2, 4]) == "1324"
    assert format_word([]) == ""
    with pytest.raises(WordError):
        parse_word("9", rank=4)
    with pytest.raises(WordError):
        parse_word("102")
    with pytest.raises(WordError):
        parse_word("1a")
    with pytest.raises(ValueError):
        parse_word("x")


def test_profiles():
    assert profile_budget("default") < profile_budget("extended")
    with pytest.raises(ValueError):
        profile_budget("huge")


def test_table1_pairs():
    doc = table1_report()
    assert doc["checks_passed"]
    assert (doc["length"], doc["reflection_length"], doc["e"], doc["E"]) == (10, 4, 0, 2)
    ours = {(_transpositions(r["x"]), _transpositions(r["y"]), r["L_sum"], r["l_sum"]) for r in doc["rows"]}
    theirs = {(_transpositions(x), _transpositions(y), L, l) for x, y, L, l in TABLE1}
    assert len(ours) == doc["factorizations"] == 12
    assert ours == theirs


def test_f4_report_matches_transcription():
    doc = cuspidal_report("F4")
    assert doc.runtime_ms is None
    got = sorted((r.x_min, r.x0_min, r.l_min) for r in doc.rows)
    want = sorted((a, b, 24 if w == "w0" else len(w)) for a, b, w in F4_ROWS)
    assert got == want
    for r in doc.rows:
        assert r.x0_min <= r.x_min <= r.size
        assert len(parse_word(r.rep)) == r.l_min
    assert compare_report(doc, load_expected("F4")).ok


def test_h3_report():
    doc = cuspidal_report("H3")
    assert sorted(r.l_min for r in doc.rows) == [3, 5, 9, 15]
    assert compare_report(doc, load_expected("H3")).ok


@pytest.mark.parametrize("name", ["E6", "H4"])
def test_bigger_reports(name):
    diff = compare_report(cuspidal_report(name), load_expected(name))
    assert diff.ok, diff.as_dict()
    assert all(c["rep_check"] == "ok" for c in diff.rep_checks)


def test_h4_null_x0_min_means_at_least_one():
    expected = load_expected("H4")
    nulls = [r for r in expected["rows"] if r["x0_min"] is None]
    assert len(nulls) == 1 and nulls[0]["rep"] == "w0"
    doc = cuspidal_report("H4")
    assert compare_report(doc, expected, validate_reps=False).ok
    strict = copy.deepcopy(expected)
    for r in strict["rows"]:
        if r["x0_min"] is None:
            r["x0_min"] = 2
    assert len(compare_report(doc, strict, validate_reps=False).row_diffs) == 1


def test_tampered_table_gives_one_row_diff():
    expected = load_expected("F4")
    doc = cuspidal_report("F4")
    tampered = copy.deepcopy(expected)
    row = next(r for r in tampered["rows"] if r["rep"] == "124323")
    row["x_min"] = 8
    row["x0_min"] = 3
    diff = compare_report(doc, tampered)
    assert not diff.ok
    assert len(diff.row_diffs) == 1
    assert set(diff.row_diffs[0].fields) >= {"x_min", "x0_min"}
    check = next(c for c in diff.rep_checks if c["rep"] == "124323")
    assert check["rep_check"] != "ok"
    assert diff.as_dict()["ok"] is False


def test_validate_rep_flags_bad_words():
    f4 = build_system("F4")
    assert validate_rep(f4, "1324") == "ok"
    assert "not reduced" in validate_rep(f4, "132411")
    assert "not cuspidal" in validate_rep(f4, "12")
    assert validate_rep(f4, "19").startswith("unparsable")
    # a non-minimal element of the Coxeter class
    cls = class_of(f4.element("1324"))
    longer = next(w for w in cls.elements if w.length() > cls.l_min)
    assert "exceeds class minimum" in validate_rep(f4, format_word(longer.reduced_word()))


def test_schema_and_formats():
    doc = cuspidal_report("H3").as_dict()
    jsonschema.validate(doc, DOCUMENT_SCHEMA)
    assert doc["schema"] == 1 and doc["type"] == "H3" and doc["runtime_ms"] is None
    assert set(doc["rows"][0]) == {"size", "l_min", "x_min", "x0_min", "rep", "order", "charpoly"}
    as_json = json.loads(render(doc, "json"))
    assert as_json == doc
    rows = list(csv.DictReader(io.StringIO(render(doc, "csv"))))
    assert len(rows) == len(doc["rows"])
    for a, b in zip(rows, doc["rows"]):
        assert int(a["size"]) == b["size"] and int(a["x0_min"]) == b["x0_min"]
        assert a["rep"] == b["rep"] and a["charpoly"].split(";") == b["charpoly"]
    text = render(doc, "text")
    assert "type: H3" in text and all(r["rep"] in text for r in doc["rows"])
    with pytest.raises(ValueError):
        render(doc, "xml")
    again = ReportDocument.from_dict(as_json)
    assert again.as_dict() == doc
    with pytest.raises(jsonschema.ValidationError):
        ReportDocument.from_dict({**doc, "schema": 2})


def test_timing_flag():
    assert isinstance(cuspidal_report("H3", timing=True).runtime_ms, int)


def test_deterministic_across_threads():
    a = render(cuspidal_report("F4", threads=1).as_dict())
    b = render(cuspidal_report("F4", threads=4).as_dict())
    c = render(cuspidal_report("F4", threads=1).as_dict())
    assert a == b == c


def test_e8_is_refused_but_words_are_checked():
    with pytest.raises(BudgetExceeded):
        cuspidal_report("E8")
    expected = load_expected("E8")
    assert expected["runnable"] is False
    checks = out_of_scope_checks(expected)
    assert len(checks) == len(expected["rows"])
    assert all(c["rep_check"].startswith(("parsed, reduced", "ok")) for c in checks)
    assert checks[0]["rep"] == "14682357"
    assert checks[0]["rep_check"].endswith("; bicolored Coxeter element")


def test_load_expected_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_expected("Q9")
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"schema": 1, "type": "F4", "rows": [{"rep": "1"}]}))
    with pytest.raises(jsonschema.ValidationError):
        load_expected(bad)
    good = tmp_path / "good.json"
    good.write_text(json.dumps(load_expected("H3")))
    assert load_expected(str(good))["type"] == "H3"
