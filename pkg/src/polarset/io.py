"""The POLARSET v1 text format for point sets, and report files.

A file looks like::

    POLARSET v1
    field 2 2 1,1,1
    dim 4
    form hermitian 2
    gram 0,0,0,1
    ...
    meta {"construction": "tangent-set", ...}
    points 9
    0,0,0,1
    ...

Field elements are written as their encodings sum c_i p^i in decimal.  The
modulus lists coefficients low degree first.  Points are normalized (first
nonzero coordinate 1) and sorted, so a given set has exactly one
serialization.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

from .forms import FormError, SesquiForm
from .geom import point_index
from .gf import FieldConfigError, make_foreign_field
from .pointset import PointSet
from .verify import VerificationReport, is_partial_ovoid

MAGIC = "POLARSET v1"


class ParseError(ValueError):
    def __init__(self, msg, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


def _ints(xs) -> str:
    return ",".join(str(int(x)) for x in xs)


def _json_default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    return str(o)


def dumps(S: PointSet, form: SesquiForm) -> str:
    F = S.F
    if form.F is not F:
        raise ValueError("point set and form live over different fields")
    if S.m != form.dim:
        raise ValueError(f"points have {S.m} coordinates, the form has dimension {form.dim}")
    lines = [
        MAGIC,
        f"field {F.p} {F.k} {_ints(F.modulus)}",
        f"dim {form.dim}",
        f"form {form.kind} {form.conj_exp}",
    ]
    lines += [f"gram {_ints(row)}" for row in form.gram]
    meta = json.dumps(S.provenance, sort_keys=True, separators=(",", ":"), default=_json_default)
    lines.append(f"meta {meta}")
    lines.append(f"points {len(S)}")
    lines += [_ints(P) for P in S.points]
    return "\n".join(lines) + "\n"


def serialize(S: PointSet, form: SesquiForm, path) -> None:
    Path(path).write_text(dumps(S, form), encoding="ascii")


def _row(text: str, n: int, lineno: int, what: str):
    try:
        vals = [int(t) for t in text.split(",")]
    except ValueError:
        raise ParseError(f"malformed {what} {text!r}", lineno) from None
    if len(vals) != n:
        raise ParseError(f"{what} has {len(vals)} entries, expected {n}", lineno)
    return vals


def loads(text: str, check_absolute: bool = False) -> tuple[PointSet, SesquiForm]:
    lines = text.splitlines()
    it = iter(enumerate(lines, start=1))

    def expect(keyword):
        for lineno, line in it:
            if not line.strip():
                continue
            head, _, rest = line.partition(" ")
            if head != keyword:
                raise ParseError(f"expected {keyword!r}, found {line[:40]!r}", lineno)
            return lineno, rest.strip()
        raise ParseError(f"unexpected end of file, expected {keyword!r}", len(lines))

    first = next((i for i, l in enumerate(lines, start=1) if l.strip()), None)
    if first is None or lines[first - 1].strip() != MAGIC:
        raise ParseError(f"missing {MAGIC!r} header", first or 1)
    for _ in range(first):
        next(it)

    lineno, rest = expect("field")
    try:
        p_s, k_s, mod_s = rest.split()
        p, k = int(p_s), int(k_s)
        modulus = [int(c) for c in mod_s.split(",")]
    except ValueError:
        raise ParseError(f"malformed field line {rest!r}", lineno) from None
    if len(modulus) != k + 1 or modulus[-1] != 1:
        raise ParseError("modulus must be monic of degree k", lineno)
    try:
        F = make_foreign_field(p, k, modulus)
    except (FieldConfigError, ValueError) as e:
        raise ParseError(str(e), lineno) from None

    lineno, rest = expect("dim")
    try:
        m = int(rest)
    except ValueError:
        raise ParseError(f"malformed dimension {rest!r}", lineno) from None
    if m < 2:
        raise ParseError("dimension must be at least 2", lineno)

    lineno, rest = expect("form")
    try:
        kind, conj_s = rest.split()
        conj = int(conj_s)
    except ValueError:
        raise ParseError(f"malformed form line {rest!r}", lineno) from None

    gram = []
    for _ in range(m):
        lineno, rest = expect("gram")
        row = _row(rest, m, lineno, "gram row")
        if any(not 0 <= v < F.q for v in row):
            raise ParseError("gram entry outside the field", lineno)
        gram.append(row)
    try:
        form = SesquiForm(F, np.array(gram, dtype=np.int64), conj, kind)
    except FormError as e:
        raise ParseError(str(e), lineno) from None

    lineno, rest = expect("meta")
    try:
        meta = json.loads(rest)
    except json.JSONDecodeError as e:
        raise ParseError(f"bad metadata: {e.msg}", lineno) from None
    if not isinstance(meta, dict):
        raise ParseError("metadata must be a JSON object", lineno)

    lineno, rest = expect("points")
    try:
        count = int(rest)
    except ValueError:
        raise ParseError(f"malformed point count {rest!r}", lineno) from None

    pts = []
    prev = -1
    for lineno, line in it:
        if not line.strip():
            continue
        P = _row(line.strip(), m, lineno, "point")
        if any(not 0 <= v < F.q for v in P):
            raise ParseError("coordinate outside the field", lineno)
        nz = [v for v in P if v]
        if not nz:
            raise ParseError("zero vector", lineno)
        if nz[0] != 1:
            raise ParseError("point is not normalized (first nonzero coordinate must be 1)", lineno)
        code = int(point_index(F, np.array([P], dtype=np.int64))[0])
        if code <= prev:
            raise ParseError("points are not in canonical order or repeat", lineno)
        prev = code
        if check_absolute and not form.is_absolute(np.array([P], dtype=np.int64))[0]:
            raise ParseError("point is not absolute", lineno)
        pts.append(P)
    if len(pts) != count:
        raise ParseError(f"header announces {count} points, found {len(pts)}", len(lines))
    S = PointSet(F, np.array(pts, dtype=np.int64).reshape(len(pts), m), meta)
    return S, form


def parse(path, check_absolute: bool = False) -> tuple[PointSet, SesquiForm]:
    return loads(Path(path).read_text(encoding="ascii"), check_absolute=check_absolute)


def load_partial_ovoid(path) -> tuple[PointSet, SesquiForm]:
    """Parse a user supplied set and accept it only if it is a partial ovoid."""
    S, form = parse(path, check_absolute=True)
    rep = is_partial_ovoid(S, form)
    if not rep.passed:
        raise ParseError(f"{os.fspath(path)} is not a partial ovoid: {rep.witness}")
    return S, form


def report_json(reports, config: dict | None = None) -> str:
    if isinstance(reports, VerificationReport):
        reports = [reports]
    doc = {"reports": [r.to_json() for r in reports]}
    if config is not None:
        doc["config"] = config
    return json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n"


def write_report(reports, path, config: dict | None = None) -> None:
    Path(path).write_text(report_json(reports, config), encoding="ascii")


def strip_timing(doc):
    """Copy of a report document without wall-time fields, for byte comparisons."""
    if isinstance(doc, dict):
        return {k: strip_timing(v) for k, v in doc.items() if k != "millis"}
    if isinstance(doc, list):
        return [strip_timing(v) for v in doc]
    return doc
