"""CSV knot tables and JSON chain-complex files."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Any, Iterable

import jsonschema

from .bent import KhiProfile
from .couple import FilteredComplex
from .errors import SchemaError
from .graded import GradedSpace, Key, MapSum
from .knots import AlexanderPolynomial, KnotRecord, normalize_alexander, parse_alexander_cell
from .linalg import QQ, ExactMatrix, Field, Mod

CSV_COLUMNS = ("name", "four_ball_genus", "signature", "two_bridge", "alexander", "family", "exception_flag")
OPTIONAL_COLUMNS = ("genus", "is_composite", "nu_sharp", "table_id")

_MATRIX = {"type": "array", "items": {"type": "array", "items": {"type": ["string", "integer"]}}}

COMPLEX_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["gradings", "maps"],
    "properties": {
        "genus": {"type": "integer", "minimum": 0},
        "q": {"type": "integer", "minimum": 1},
        "gradings": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["z", "parity", "dim"],
                "properties": {
                    "z": {"type": "integer"},
                    "parity": {"enum": [0, 1]},
                    "dim": {"type": "integer", "minimum": 0},
                    "labels": {"type": "array", "items": {"type": "string"}},
                },
                "additionalProperties": False,
            },
        },
        "maps": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "z_shift", "parity_shift", "blocks"],
                "properties": {
                    "name": {"type": "string"},
                    "z_shift": {"type": "integer"},
                    "parity_shift": {"enum": [0, 1]},
                    "blocks": {"type": "object", "additionalProperties": _MATRIX},
                },
                "additionalProperties": False,
            },
        },
        "filtration": {
            "oneOf": [
                {"type": "object", "required": ["by"], "properties": {"by": {"enum": ["z", "-z"]}},
                 "additionalProperties": False},
                {"type": "object", "required": ["levels"],
                 "properties": {"levels": {"type": "object", "additionalProperties": {"type": "integer"}}},
                 "additionalProperties": False},
            ]
        },
    },
    "additionalProperties": False,
}


# ---------------------------------------------------------------- values

def parse_scalar(x: "str | int", field: Field):
    if isinstance(x, bool):
        raise SchemaError("booleans are not matrix entries")
    try:
        return field(Fraction(x))
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad matrix entry {x!r}") from exc


def format_scalar(x) -> str:
    if isinstance(x, Mod):
        return str(x.v)
    return str(Fraction(x))


def matrix_to_json(m: ExactMatrix) -> list[list[str]]:
    return [[format_scalar(v) for v in row] for row in m.to_rows()]


def dump_json(obj: Any, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(obj, indent=2, sort_keys=False) + "\n"
    return json.dumps(obj, separators=(",", ":")) + "\n"


# ---------------------------------------------------------------- CSV

@dataclass(frozen=True)
class RowError:
    line: int
    name: str
    message: str


def _int_or_none(s: str | None) -> int | None:
    s = (s or "").strip()
    return int(s) if s else None


def record_from_row(row: dict[str, str]) -> KnotRecord:
    name = (row.get("name") or "").strip()
    if not name:
        raise ValueError("missing name")
    delta = normalize_alexander(parse_alexander_cell(row.get("alexander") or ""))
    fam = tuple(f.strip() for f in (row.get("family") or "").split(";") if f.strip())
    exc = tuple(f.strip() for f in (row.get("exception_flag") or "").split(";") if f.strip())
    composite = (row.get("is_composite") or "").strip().lower()
    if composite not in ("", "0", "1", "true", "false"):
        raise ValueError(f"is_composite must be a boolean, got {composite!r}")
    return KnotRecord(
        name=name,
        alexander=delta,
        four_ball_genus=_int_or_none(row.get("four_ball_genus")),
        signature=_int_or_none(row.get("signature")),
        two_bridge=(row.get("two_bridge") or "").strip() or None,
        families=fam,
        exceptions=exc,
        genus=_int_or_none(row.get("genus")),
        is_composite=composite in ("1", "true"),
        nu_sharp=_int_or_none(row.get("nu_sharp")),
        table_id=(row.get("table_id") or "").strip() or None,
    )


def read_knot_csv(text: str) -> tuple[list[KnotRecord], list[RowError]]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        raise SchemaError("CSV has no header row")
    missing = [c for c in CSV_COLUMNS if c not in reader.fieldnames]
    if missing:
        raise SchemaError(f"CSV is missing columns {missing}")
    records, errors = [], []
    for row in reader:
        try:
            records.append(record_from_row(row))
        except Exception as exc:   # every row failure is reported, not fatal
            errors.append(RowError(reader.line_num, (row.get("name") or "").strip(), f"{type(exc).__name__}: {exc}"))
    return records, errors


def write_knot_csv(records: Iterable[KnotRecord]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(CSV_COLUMNS), lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow({
            "name": r.name,
            "four_ball_genus": "" if r.four_ball_genus is None else r.four_ball_genus,
            "signature": "" if r.signature is None else r.signature,
            "two_bridge": r.two_bridge or "",
            "alexander": r.alexander.to_cell(),
            "family": ";".join(r.families),
            "exception_flag": ";".join(r.exceptions),
        })
    return buf.getvalue()


def shipped_text(name: str) -> str:
    return resources.files("bentkit").joinpath("data", name).read_text(encoding="utf-8")


def table1_records() -> list[KnotRecord]:
    recs, errs = read_knot_csv(shipped_text("table1.csv"))
    if errs:
        raise SchemaError(f"shipped table has bad rows: {errs}")
    return recs


# ---------------------------------------------------------------- complexes

def _parse_key(s: str) -> Key | int:
    parts = [p.strip() for p in s.split(",")]
    try:
        if len(parts) == 1:
            return int(parts[0])
        if len(parts) == 2:
            return (int(parts[0]), int(parts[1]))
    except ValueError:
        pass
    raise SchemaError(f"block key {s!r} must be 'z' or 'z,parity'")


@dataclass(frozen=True)
class ComplexFile:
    space: GradedSpace
    maps: dict[str, MapSum]
    genus: int | None
    q: int
    filtration: dict | None
    field: Field

    def map(self, name: str) -> MapSum:
        if name not in self.maps:
            raise SchemaError(f"no map named {name!r}; have {sorted(self.maps)}")
        return self.maps[name]

    def profile(self) -> KhiProfile:
        g = self.genus
        if g is None:
            g = max((abs(z) for z, _ in self.space.keys), default=0)
        zero = MapSum.zero(self.space, self.space, self.field)
        return KhiProfile(g, self.q, self.space, self.maps.get("d_plus", zero), self.maps.get("d_minus", zero),
                          self.field)

    def filtered(self, name: str = "d") -> FilteredComplex:
        d = self.map(name).to_matrix()
        f = self.filtration or {"by": "z"}
        if "by" in f:
            sign = 1 if f["by"] == "z" else -1
            levels = [sign * k[0] for k in self.space.key_of_index]
        else:
            lv = f["levels"]
            levels = []
            for k in self.space.key_of_index:
                key = f"{k[0]},{k[1]}"
                if key in lv:
                    levels.append(lv[key])
                elif str(k[0]) in lv:
                    levels.append(lv[str(k[0])])
                else:
                    raise SchemaError(f"no filtration level for piece {k}")
        return FilteredComplex.build(d, levels)


def complex_from_json(obj: Any, field: Field = QQ) -> ComplexFile:
    try:
        jsonschema.validate(obj, COMPLEX_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise SchemaError(f"complex JSON: {exc.message}") from exc
    dims: dict[Key, int] = {}
    labels: dict[Key, list[str]] = {}
    for g in obj["gradings"]:
        k = (g["z"], g["parity"])
        if k in dims:
            raise SchemaError(f"piece {k} listed twice")
        dims[k] = g["dim"]
        if "labels" in g:
            if len(g["labels"]) != g["dim"]:
                raise SchemaError(f"piece {k}: {len(g['labels'])} labels for dim {g['dim']}")
            labels[k] = g["labels"]
    space = GradedSpace.of(dims, {k: v for k, v in labels.items() if dims[k]})
    sums: dict[str, MapSum] = {}
    for m in obj["maps"]:
        blocks: dict[tuple[Key, Key], ExactMatrix] = {}
        for raw_key, rows in m["blocks"].items():
            key = _parse_key(raw_key)
            srcs = [key] if isinstance(key, tuple) else [k for k in space.keys if k[0] == key]
            if not srcs:
                raise SchemaError(f"map {m['name']}: no piece at {raw_key}")
            if len(srcs) > 1:
                raise SchemaError(f"map {m['name']}: key {raw_key!r} is ambiguous, use 'z,parity'")
            sk = srcs[0]
            tk = (sk[0] + m["z_shift"], (sk[1] + m["parity_shift"]) % 2)
            nr, nc = space.dim_at(tk), space.dim_at(sk)
            if nc == 0:
                raise SchemaError(f"map {m['name']}: no piece at {sk}")
            if len(rows) != nr or any(len(r) != nc for r in rows):
                raise SchemaError(f"map {m['name']} block {raw_key}: expected {nr}x{nc}")
            blocks[(sk, tk)] = ExactMatrix.from_rows([[parse_scalar(x, field) for x in r] for r in rows],
                                                     field, cols=nc)
        part = MapSum.from_blocks(space, space, blocks, field)
        sums[m["name"]] = sums[m["name"]] + part if m["name"] in sums else part
    return ComplexFile(space, sums, obj.get("genus"), obj.get("q", 1), obj.get("filtration"), field)


def load_complex(path: str, field: Field = QQ) -> ComplexFile:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not JSON ({exc})") from exc
    return complex_from_json(obj, field)


def profile_to_json(p: KhiProfile) -> dict:
    """Serialize a profile in the shared complex format (maps named d_plus and d_minus)."""
    lab = dict(p.space.labels)
    grads = []
    for k, d in p.space.pieces:
        g = {"z": k[0], "parity": k[1], "dim": d}
        if k in lab:
            g["labels"] = list(lab[k])
        grads.append(g)
    maps = []
    for name, ms in (("d_plus", p.d_plus), ("d_minus", p.d_minus)):
        for part in ms.parts:
            maps.append({"name": name, "z_shift": part.z_shift, "parity_shift": part.parity_shift,
                         "blocks": {f"{k[0]},{k[1]}": matrix_to_json(m) for k, m in part.blocks}})
        if not ms.parts:
            maps.append({"name": name, "z_shift": 1 if name == "d_plus" else -1, "parity_shift": 1, "blocks": {}})
    return {"genus": p.genus, "q": p.q, "gradings": grads, "maps": maps}
