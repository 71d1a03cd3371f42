"""JSON configuration documents: parsing with field-path diagnostics and echo.

Layout::

    {"algebra": {"type": "A", "rank": 1},
     "points": [{"label": "0", "pole_order": 2,
                 "coefficients": [["1/3"], ["1"]]}],
     "options": {"grade_bound": 4, "samples": 20, "seed": 0,
                 "epsilons": {"0": ["0", "1"]}}}

coefficients[i] is A_i in simple-coroot coordinates (A_0 is the residue).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple

from .errors import ValidationError, WildredError
from .liealg import algebra_of
from .orbitflat import WildConfig
from .rootdata import build_root_datum
from .tcla import PrincipalPart

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")

DEFAULT_OPTIONS = {"grade_bound": 4, "samples": 20, "seed": 0}


@dataclass(frozen=True)
class ConfigDocument:
    config: WildConfig
    grade_bound: int = 4
    samples: int = 20
    seed: int = 0
    epsilons: Dict[str, Tuple[Fraction, ...]] = field(default_factory=dict)


def fmt_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(value: Any, path: str) -> Fraction:
    if isinstance(value, bool):
        raise ValidationError(f"{path}: expected a rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str) or not _RATIONAL.match(value.strip()):
        raise ValidationError(f"{path}: malformed rational {value!r}")
    num, _, den = value.strip().partition("/")
    if den and int(den) == 0:
        raise ValidationError(f"{path}: zero denominator in {value!r}")
    return Fraction(int(num), int(den) if den else 1)


def _int(value: Any, path: str, low: Optional[int] = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{path}: expected an integer, got {value!r}")
    if low is not None and value < low:
        raise ValidationError(f"{path}: must be ≥ {low}, got {value}")
    return value


def _obj(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise ValidationError(f"{path}: expected an object")
    return value


def _list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise ValidationError(f"{path}: expected a list")
    return value


def _point(alg, raw: Any, path: str) -> Tuple[str, PrincipalPart]:
    raw = _obj(raw, path)
    label = raw.get("label")
    if not isinstance(label, str) or not label:
        raise ValidationError(f"{path}.label: expected a non-empty string")
    s = _int(raw.get("pole_order"), f"{path}.pole_order", 1)
    coeffs = _list(raw.get("coefficients"), f"{path}.coefficients")
    if len(coeffs) != s:
        raise ValidationError(f"{path}.coefficients: expected {s} Cartan vectors, got {len(coeffs)}")
    elems = []
    for i, vec in enumerate(coeffs):
        vpath = f"{path}.coefficients[{i}]"
        vec = _list(vec, vpath)
        if len(vec) != alg.rank:
            raise ValidationError(f"{vpath}: expected {alg.rank} entries, got {len(vec)}")
        elems.append(alg.cartan([parse_rational(x, f"{vpath}[{j}]") for j, x in enumerate(vec)]))
    return label, PrincipalPart(alg, s, elems)


def parse_document(data: Any) -> ConfigDocument:
    data = _obj(data, "$")
    unknown = set(data) - {"algebra", "points", "options"}
    if unknown:
        raise ValidationError(f"$: unknown keys {sorted(unknown)}")
    algebra = _obj(data.get("algebra"), "algebra")
    ctype = algebra.get("type")
    if not isinstance(ctype, str):
        raise ValidationError("algebra.type: expected a string")
    rank = _int(algebra.get("rank"), "algebra.rank", 1)
    rd = build_root_datum(ctype, rank)
    alg = algebra_of(rd)
    points = [_point(alg, p, f"points[{i}]") for i, p in enumerate(_list(data.get("points", []), "points"))]
    try:
        config = WildConfig(rd, tuple(points))
    except ValidationError as e:
        raise ValidationError(f"points: {e}") from None
    opts = _obj(data.get("options", {}), "options")
    unknown = set(opts) - {"grade_bound", "samples", "seed", "epsilons"}
    if unknown:
        raise ValidationError(f"options: unknown keys {sorted(unknown)}")
    grade = _int(opts.get("grade_bound", DEFAULT_OPTIONS["grade_bound"]), "options.grade_bound", 0)
    samples = _int(opts.get("samples", DEFAULT_OPTIONS["samples"]), "options.samples", 1)
    seed = _int(opts.get("seed", DEFAULT_OPTIONS["seed"]), "options.seed", 0)
    eps = {}
    orders = {label: p.s for label, p in points}
    for label, vals in _obj(opts.get("epsilons", {}), "options.epsilons").items():
        path = f"options.epsilons.{label}"
        if label not in orders:
            raise ValidationError(f"{path}: no point with this label")
        vals = _list(vals, path)
        if len(vals) != orders[label]:
            raise ValidationError(f"{path}: expected {orders[label]} values, got {len(vals)}")
        eps[label] = tuple(parse_rational(v, f"{path}[{i}]") for i, v in enumerate(vals))
    return ConfigDocument(config, grade, samples, seed, eps)


def parse_text(text: str, source: str = "<config>") -> ConfigDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"{source}: line {e.lineno}, column {e.colno}: {e.msg}") from None
    return parse_document(data)


def load(path: str) -> ConfigDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ValidationError(f"{path}: {e.strerror}") from None
    except UnicodeDecodeError:
        raise ValidationError(f"{path}: not valid UTF-8") from None
    try:
        return parse_text(text, path)
    except ValidationError:
        raise
    except WildredError as e:
        raise type(e)(f"{path}: {e}") from None


def echo(doc: ConfigDocument) -> dict:
    cfg = doc.config
    points = [{"label": label, "pole_order": p.s,
               "coefficients": [[fmt_rational(x) for x in c.cartan_coords()] for c in p.coeffs]}
              for label, p in cfg.points]
    opts: Dict[str, Any] = {"grade_bound": doc.grade_bound, "samples": doc.samples, "seed": doc.seed}
    if doc.epsilons:
        opts["epsilons"] = {k: [fmt_rational(x) for x in v] for k, v in doc.epsilons.items()}
    return {"algebra": {"type": cfg.algebra.cartan_type, "rank": cfg.algebra.rank},
            "points": points, "options": opts}
