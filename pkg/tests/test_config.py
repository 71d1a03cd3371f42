import json

import pytest

from wildred.config import echo, fmt_rational, parse_document, parse_rational, parse_text
from wildred.errors import UnsupportedConfiguration, ValidationError
from helpers import F


def doc(points=None, **opts):
    d = {"algebra": {"type": "A", "rank": 1},
         "points": points if points is not None else [{"label": "0", "pole_order": 2,
                                                       "coefficients": [["1/3"], ["1"]]}]}
    if opts:
        d["options"] = opts
    return d


def test_rationals():
    assert parse_rational("-3/6", "x") == F(-1, 2) and parse_rational(4, "x") == 4
    assert fmt_rational(F(-1, 2)) == "-1/2" and fmt_rational(F(3)) == "3"
    for bad in ("1/0", "1.5", "a", True, None, "1/-2"):
        with pytest.raises(ValidationError):
            parse_rational(bad, "x")


def test_zero_denominator_names_field():
    with pytest.raises(ValidationError, match=r"points\[0\]\.coefficients\[1\]\[0\]"):
        parse_document(doc([{"label": "0", "pole_order": 2, "coefficients": [["1"], ["1/0"]]}]))


def test_defaults_and_options():
    d = parse_document(doc())
    assert (d.grade_bound, d.samples, d.seed, d.epsilons) == (4, 20, 0, {})
    d = parse_document(doc(seed=7, epsilons={"0": ["0", "1/2"]}))
    assert d.seed == 7 and d.epsilons == {"0": (F(0), F(1, 2))}


@pytest.mark.parametrize("data", [
    {"algebra": {"type": "A", "rank": 1}, "points": [], "extra": 1},
    doc([{"label": "0", "pole_order": 2, "coefficients": [["1"]]}]),
    doc([{"label": "0", "pole_order": 1, "coefficients": [["1", "2"]]}]),
    doc([{"label": "", "pole_order": 1, "coefficients": [["1"]]}]),
    doc([{"label": "0", "pole_order": 0, "coefficients": []}]),
    doc([{"label": "0", "pole_order": 1, "coefficients": [["1"]]}] * 2),
    doc(samples=0),
    doc(epsilons={"nope": ["0", "1"]}),
    doc(epsilons={"0": ["0"]}),
    doc(colour="red"),
])
def test_rejections(data):
    with pytest.raises(ValidationError):
        parse_document(data)


def test_unsupported_type():
    with pytest.raises(UnsupportedConfiguration):
        parse_document({"algebra": {"type": "E", "rank": 6}, "points": []})


def test_json_error_position():
    with pytest.raises(ValidationError, match="line 2, column"):
        parse_text('{"algebra":\n  oops}')


def test_echo_roundtrip():
    d = parse_document(doc(seed=2, epsilons={"0": ["0", "1"]}))
    again = parse_document(json.loads(json.dumps(echo(d))))
    assert again == d and again.config == d.config
