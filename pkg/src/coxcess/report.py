"""Cuspidal-class reports, rendering, and comparison against bundled tables."""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import BudgetExceeded, WordError

SCHEMA_VERSION = 1

PROFILES = {"default": 10**6, "extended": 4 * 10**6}

#: types whose tables are bundled but far beyond desk-scale enumeration
OUT_OF_SCOPE = {"E8"}

_ROW_SCHEMA = {
    "type": "object",
    "properties": {
        "label": {"type": ["string", "null"]},
        "size": {"type": ["integer", "null"], "minimum": 1},
        "l_min": {"type": ["integer", "null"], "minimum": 0},
        "x_min": {"type": ["integer", "null"], "minimum": 1},
        "x0_min": {"type": ["integer", "null"], "minimum": 0},
        "rep": {"type": "string"},
        "order": {"type": ["integer", "null"], "minimum": 1},
        "charpoly": {"type": ["array", "null"], "items": {"type": "string"}},
    },
    "required": ["x_min", "x0_min", "rep"],
}

DOCUMENT_SCHEMA = {
    "type": "object",
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "type": {"type": "string"},
        "profile": {"type": ["string", "null"]},
        "rows": {"type": "array", "items": _ROW_SCHEMA},
        "runtime_ms": {"type": ["integer", "null"]},
    },
    "required": ["schema", "type", "rows"],
}


# -- words -------------------------------------------------------------------


def parse_word(s: str, rank: int | None = None) -> list[int]:
    """``"1324"`` -> ``[1, 3, 2, 4]``; the empty string is the identity.

    Separators (spaces, commas, dots) are ignored.
    """
    out = []
    for ch in s:
        if ch in " ,.·":
            continue
        if not ch.isdigit() or ch == "0":
            raise WordError(f"invalid generator {ch!r} in word {s!r}")
        g = int(ch)
        if rank is not None and g > rank:
            raise WordError(f"generator {g} out of range 1..{rank} in word {s!r}")
        out.append(g)
    return out


def format_word(word) -> str:
    word = [int(g) for g in word]
    if any(g > 9 for g in word):
        return ",".join(map(str, word))
    return "".join(map(str, word))


# -- documents ---------------------------------------------------------------


@dataclass(frozen=True)
class TableRow:
    size: int | None
    l_min: int | None
    x_min: int | None
    x0_min: int | None
    rep: str
    order: int | None = None
    charpoly: tuple[str, ...] | None = None
    label: str | None = None

    def as_dict(self) -> dict:
        d = {
            "size": self.size,
            "l_min": self.l_min,
            "x_min": self.x_min,
            "x0_min": self.x0_min,
            "rep": self.rep,
            "order": self.order,
            "charpoly": list(self.charpoly) if self.charpoly is not None else None,
        }
        if self.label is not None:
            d = {"label": self.label, **d}
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "TableRow":
        cp = d.get("charpoly")
        return cls(
            d.get("size"),
            d.get("l_min"),
            d.get("x_min"),
            d.get("x0_min"),
            d.get("rep", ""),
            d.get("order"),
            tuple(cp) if cp is not None else None,
            d.get("label"),
        )


@dataclass
class ReportDocument:
    type: str
    profile: str | None
    rows: list[TableRow]
    runtime_ms: int | None = None
    engine: str = field(default="")

    def as_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "engine": self.engine,
            "type": self.type,
            "profile": self.profile,
            "rows": [r.as_dict() for r in self.rows],
            "runtime_ms": self.runtime_ms,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ReportDocument":
        jsonschema.validate(d, DOCUMENT_SCHEMA)
        return cls(d["type"], d.get("profile"), [TableRow.from_dict(r) for r in d["rows"]], d.get("runtime_ms"), d.get("engine", ""))


def profile_budget(profile: str) -> int:
    try:
        return PROFILES[profile]
    except KeyError:
        raise ValueError(f"unknown profile {profile!r}; choose from {sorted(PROFILES)}") from None


def _engine_version() -> str:
    from . import __version__

    return __version__


def cuspidal_report(type_, profile: str = "default", threads: int = 1, cache_dir=None, timing: bool = False) -> ReportDocument:
    from .conjugacy import structure
    from .coxeter import build_system
    from .excess import x0_min

    system = build_system(type_)
    if system.descriptor in OUT_OF_SCOPE:
        raise BudgetExceeded(
            f"{system.descriptor} (|W| = {system.group_order}) is out of scope at desk scale; "
            "only its bundled table words can be checked (verify-table)"
        )
    start = time.perf_counter()
    cs = structure(system, profile_budget(profile), cache_dir=cache_dir)
    rows = []
    for c in cs.classes:
        if not cs.is_cuspidal(c):
            continue
        res = x0_min(c, threads=threads)
        least = res.least()
        fp = c.fingerprint
        rows.append(
            TableRow(
                c.size,
                c.l_min,
                res.x_min_count,
                res.count,
                format_word(least.reduced_word()) if least is not None else "",
                fp.order,
                fp.charpoly,
            )
        )
    runtime = int(round((time.perf_counter() - start) * 1000)) if timing else None
    return ReportDocument(system.descriptor, profile, rows, runtime, _engine_version())


# -- rendering -----------------------------------------------------------------


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (list, tuple)):
        sep = " | " if any(isinstance(x, (list, tuple)) for x in v) else ";"
        return sep.join(_cell(x) for x in v)
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def render(doc: dict, fmt: str = "json") -> str:
    """Render a document dict; ``rows`` (list of dicts) become the CSV/text table."""
    if fmt == "json":
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    rows = doc.get("rows") or []
    cols = list(rows[0].keys()) if rows else []
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([_cell(r.get(c)) for c in cols])
        return buf.getvalue()
    if fmt == "text":
        lines = [f"{k}: {_cell(v)}" for k, v in doc.items() if k != "rows"]
        if cols:
            table = [cols] + [[_cell(r.get(c)) for c in cols] for r in rows]
            widths = [max(len(row[i]) for row in table) for i in range(len(cols))]
            lines.append("")
            for row in table:
                lines.append("  ".join(cell.ljust(wd) for cell, wd in zip(row, widths)).rstrip())
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


# -- expected data and comparison ---------------------------------------------------


def load_expected(source) -> dict:
    """Bundled table by type descriptor (``"F4"``) or a JSON file path."""
    path = Path(str(source))
    if path.suffix == ".json" or path.exists():
        text = path.read_text()
    else:
        try:
            text = resources.files("coxcess").joinpath("data", f"{source}.json").read_text()
        except FileNotFoundError:
            raise FileNotFoundError(f"no bundled table for {source}") from None
    doc = json.loads(text)
    jsonschema.validate(doc, DOCUMENT_SCHEMA)
    return doc


def _expected_l_min(row: TableRow, npos: int) -> int | None:
    if row.l_min is not None:
        return row.l_min
    if row.rep == "w0":
        return npos
    return len(parse_word(row.rep)) if row.rep else None


_FIELDS = ("size", "l_min", "x_min", "x0_min")


def _row_mismatches(exp: dict, act: TableRow) -> list[str]:
    bad = []
    for f in _FIELDS:
        want = exp[f]
        got = getattr(act, f)
        if f == "x0_min" and want is None:
            if got is None or got < 1:
                bad.append(f)
        elif want is not None and want != got:
            bad.append(f)
    return bad


@dataclass
class RowDiff:
    expected: dict
    actual: TableRow | None
    fields: list[str]

    def describe(self) -> str:
        label = self.expected.get("label") or "?"
        if self.actual is None:
            return f"row {label}: no computed row left to match {self._fmt(self.expected)}"
        parts = [f"{f} expected {self._want(f)} got {getattr(self.actual, f)}" for f in self.fields]
        return f"row {label}: " + ", ".join(parts)

    def _want(self, f):
        v = self.expected[f]
        return ">= 1" if (f == "x0_min" and v is None) else v

    @staticmethod
    def _fmt(d):
        return "(" + ", ".join(f"{f}={d[f]}" for f in _FIELDS) + ")"


@dataclass
class ReportDiff:
    type: str
    row_diffs: list[RowDiff]
    unmatched_actual: list[TableRow]
    rep_checks: list[dict]

    @property
    def ok(self) -> bool:
        return not self.row_diffs and not self.unmatched_actual

    def as_dict(self) -> dict:
        return {
            "type": self.type,
            "ok": self.ok,
            "mismatches": [d.describe() for d in self.row_diffs],
            "unmatched_actual": [r.as_dict() for r in self.unmatched_actual],
            "rows": self.rep_checks,
        }


def compare_report(actual: ReportDocument, expected: dict, validate_reps: bool = True) -> ReportDiff:
    """Label-free match of computed rows against an expected table.

    Rows are paired by a minimum-cost assignment on the number of
    disagreeing fields; null expected fields are wildcards, except that a
    null ``x0_min`` demands at least 1.
    """
    from .coxeter import build_system

    system = build_system(actual.type)
    exp_rows = []
    for d in expected["rows"]:
        r = TableRow.from_dict(d)
        exp_rows.append({"label": r.label, "size": r.size, "l_min": _expected_l_min(r, system.npos),
                         "x_min": r.x_min, "x0_min": r.x0_min, "rep": r.rep})
    act_rows = actual.rows
    cost = np.zeros((len(exp_rows), len(act_rows)), dtype=np.int64)
    for i, e in enumerate(exp_rows):
        for j, a in enumerate(act_rows):
            cost[i, j] = len(_row_mismatches(e, a))
    ri, ci = linear_sum_assignment(cost) if cost.size else (np.array([], int), np.array([], int))
    pairs = dict(zip(ri.tolist(), ci.tolist()))
    diffs = []
    for i, e in enumerate(exp_rows):
        if i not in pairs:
            diffs.append(RowDiff(e, None, list(_FIELDS)))
        elif cost[i, pairs[i]]:
            a = act_rows[pairs[i]]
            diffs.append(RowDiff(e, a, _row_mismatches(e, a)))
    used = set(pairs.values())
    extra = [a for j, a in enumerate(act_rows) if j not in used]
    checks = []
    for i, e in enumerate(exp_rows):
        entry = {"label": e["label"], "rep": e["rep"]}
        if validate_reps:
            entry["rep_check"] = validate_rep(system, e["rep"], e)
        if i in pairs:
            a = act_rows[pairs[i]]
            entry.update({"matched": not cost[i, pairs[i]], "computed_rep": a.rep})
        checks.append(entry)
    return ReportDiff(actual.type, diffs, extra, checks)


def validate_rep(system, word: str, expected: dict | None = None, budget: int | None = None) -> str:
    """Semantic check of a table word: reduced, minimal in a cuspidal class
    matching the row, with zero e and E.  Returns ``"ok"`` or the reasons.
    """
    from .conjugacy import structure
    from .excess import _excess_at, x0_min

    try:
        w = system.longest_element() if word == "w0" else system.element(parse_word(word, system.rank))
    except WordError as exc:
        return f"unparsable: {exc}"
    problems = []
    n_letters = system.npos if word == "w0" else len(parse_word(word))
    if system.length(w) != n_letters:
        problems.append(f"not reduced (length {system.length(w)} < {n_letters} letters)")
    cs = structure(system, budget or max(PROFILES.values()))
    i = cs.table.index(w)
    c = cs.class_containing(i)
    if not cs.is_cuspidal(c):
        problems.append("class is not cuspidal")
    if int(cs.table.lengths[i]) != c.l_min:
        problems.append(f"length {int(cs.table.lengths[i])} exceeds class minimum {c.l_min}")
    e, E, _, _ = _excess_at(cs, i)
    if e or E:
        problems.append(f"e = {e}, E = {E}")
    if expected is not None:
        if expected.get("x_min") is not None and expected["x_min"] != int(c.x_min.size):
            problems.append(f"class has |X_min| = {c.x_min.size}, row says {expected['x_min']}")
        if expected.get("x0_min") is not None and expected["x0_min"] != x0_min(c).count:
            problems.append(f"class has |X0_min| = {x0_min(c).count}, row says {expected['x0_min']}")
    return "ok" if not problems else "; ".join(problems)


def out_of_scope_checks(expected: dict) -> list[dict]:
    """Cheap checks on an out-of-scope table: words parse and are reduced,
    the first word is a bicolored Coxeter element, ``w0`` is central.
    """
    from .coxeter import build_system
    from .signedperm import coxeter_bicolored

    system = build_system(expected["type"])
    out = []
    for d in expected["rows"]:
        word = d["rep"]
        entry = {"label": d.get("label"), "rep": word}
        if word == "w0":
            w0 = system.longest_element()
            central = all(w0 * g == g * w0 for g in system.generators())
            entry["rep_check"] = "ok" if central and system.length(w0) == system.npos else "w0 is not central"
        else:
            try:
                w = system.element(parse_word(word, system.rank))
            except WordError as exc:
                entry["rep_check"] = f"unparsable: {exc}"
            else:
                n = len(parse_word(word))
                entry["rep_check"] = "parsed, reduced" if system.length(w) == n else "parsed, not reduced"
        out.append(entry)
    first = expected["rows"][0]
    cox = coxeter_bicolored(system).w
    w = system.element(parse_word(first["rep"], system.rank))
    out[0]["rep_check"] += (
        "; bicolored Coxeter element" if w == cox and system.length(w) == system.rank else "; NOT the bicolored Coxeter element"
    )
    return out


# -- the (145)(236) example -----------------------------------------------------------


def table1_report() -> dict:
    """Every involution factorization of ``w = (145)(236)`` in Sym(6)."""
    from .conjugacy import structure
    from .coxeter import build_system
    from .excess import _excess_at, _factorization_data, reverser_involution_indices
    from .signedperm import SignedPermutation, from_element, to_element

    system = build_system("A5")
    perm = SignedPermutation.from_cycles("(1 4 5)(2 3 6)", 6)
    w = to_element(perm, system)
    cs = structure(system)
    t = cs.table
    i = t.index(w)
    xs = reverser_involution_indices(cs, i)
    ys, lsum, additive = _factorization_data(cs, i, xs)
    L = cs.reflection_lengths
    rows = []
    for x, y, s in zip(xs, ys, lsum):
        rows.append(
            {
                "x": from_element(t.element(x)).cycle_string(signed=False),
                "y": from_element(t.element(y)).cycle_string(signed=False),
                "L_sum": int(L[x] + L[y]),
                "l_sum": int(s),
                "l_x": int(t.lengths[x]),
                "l_y": int(t.lengths[y]),
            }
        )
    rows.sort(key=lambda r: (r["L_sum"], r["l_sum"], r["x"]))
    e, E, _, _ = _excess_at(cs, i)
    doc = {
        "type": "A5",
        "w": perm.cycle_string(signed=False),
        "length": int(t.lengths[i]),
        "reflection_length": int(L[i]),
        "e": e,
        "E": E,
        "factorizations": len(rows),
        "rows": rows,
    }
    doc["checks_passed"] = (doc["length"], doc["reflection_length"], e, E) == (10, 4, 0, 2)
    return doc
