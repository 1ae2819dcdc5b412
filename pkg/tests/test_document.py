import json
from fractions import Fraction

import pytest

from fewnomial.document import document_from_dict, load_document, parse_document, parse_rational
from fewnomial.errors import ParseError


@pytest.mark.parametrize("raw,want", [(3, 3), ("-2", -2), ("19/25", Fraction(19, 25)), (" 4 / 6 ", Fraction(2, 3))])
def test_rationals(raw, want):
    assert parse_rational(raw, "x") == want


@pytest.mark.parametrize("raw", ["1.5", 1.5, "1e3", True, None, "1/0", "x"])
def test_non_rationals_refused(raw):
    with pytest.raises(ParseError, match="^coefficients\\[2\\]"):
        parse_rational(raw, "coefficients[2]")


def test_full_document():
    doc = document_from_dict(
        {
            "name": "sharp",
            "exponents": [[0, 0], [4, 0], [1, 2], [3, 2], [2, 3]],
            "coefficients": [1, 1, -1, -1, "19/25"],
            "heights": [0, 0, 1, 1, 0],
        }
    )
    poly = doc.polynomial(need_coefficients=True)
    assert poly.coeffs[-1] == Fraction(19, 25) and poly.signs == (1, 1, -1, -1, 1)
    assert poly.heights == (0, 0, 1, 1, 0)


def test_signs_only():
    doc = document_from_dict({"exponents": [0, 1, 2], "signs": ["+", "-", "+"]})
    assert doc.polynomial().coeffs == (1, -1, 1)
    with pytest.raises(ParseError, match="coefficients"):
        doc.polynomial(need_coefficients=True)


@pytest.mark.parametrize(
    "data,field",
    [
        ({"exponents": [[0, 0], [1]]}, "exponents"),
        ({"exponents": [0, 1], "coefficients": [1]}, "coefficients"),
        ({"exponents": [0, 1], "coefficients": [1, 0]}, "coefficients\\[1\\]"),
        ({"exponents": [0, 1], "signs": ["+", [1]]}, "signs\\[1\\]"),
        ({"exponents": [0, 1], "signs": ["+", True]}, "signs\\[1\\]"),
        ({"exponents": [0, 1], "coefficients": [1, 2], "signs": ["+", "-"]}, "signs"),
        ({"exponents": [0, 1], "colour": "red"}, "document"),
        ({"coefficients": [1]}, "exponents"),
        ({"exponents": [0, "0.5"]}, "exponents\\[1\\]"),
    ],
)
def test_bad_documents_name_the_field(data, field):
    with pytest.raises(ParseError, match="^" + field):
        document_from_dict(data)


def test_json_errors_have_positions(tmp_path):
    with pytest.raises(ParseError, match="line 2 column"):
        parse_document('{"exponents": [0, 1],\n "signs": [+]}')
    path = tmp_path / "doc.json"
    path.write_text(json.dumps({"exponents": [0, 1, 2], "coefficients": [1, -2, 1]}))
    assert load_document(path).coefficients == (1, -2, 1)
    with pytest.raises(ParseError, match="missing.json"):
        load_document(tmp_path / "missing.json")
