import json

import numpy as np
import pytest

from csym import io
from csym.core import validate_conjugation
from csym.errors import InvalidMatrix, InvalidParams


def test_matrix_round_trip(rng, tmp_path):
    a = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    io.save_matrix(tmp_path / "a.json", a)
    assert np.array_equal(io.load_matrix(tmp_path / "a.json"), a)


def test_schema_is_row_major():
    obj = io.matrix_to_json(np.array([[1, 2j], [3, 4]]))
    assert obj == {"rows": 2, "cols": 2, "data": [[1.0, 0.0], [0.0, 2.0], [3.0, 0.0], [4.0, 0.0]]}


def test_conjugation_round_trip(tmp_path):
    c = validate_conjugation([[0, 1], [1, 0]])
    io.save_conjugation(tmp_path / "c.json", c)
    raw = json.loads((tmp_path / "c.json").read_text())
    assert raw["kind"] == "conjugation"
    assert np.array_equal(io.load_conjugation(tmp_path / "c.json").s, c.s)


@pytest.mark.parametrize(
    "obj",
    [
        {"rows": 2, "cols": 2, "data": [[1, 0]]},
        {"rows": 1, "cols": 1, "data": [["x", 0]]},
        {"rows": -1, "cols": 1, "data": []},
        {"cols": 1, "data": []},
        [1, 2],
    ],
)
def test_bad_matrices(obj):
    with pytest.raises(InvalidMatrix):
        io.matrix_from_json(obj)


def test_complex_forms():
    assert io.complex_from_json(2) == 2
    assert io.complex_from_json([1, -2]) == 1 - 2j
    assert io.complex_from_json({"re": 0, "im": 1}) == 1j
    with pytest.raises(InvalidParams):
        io.complex_from_json("1+2j")
    with pytest.raises(InvalidParams):
        io.complex_from_json(True)


def test_digest_stable():
    a = np.eye(2)
    assert io.matrix_digest(a) == io.matrix_digest(a.copy())
    assert io.matrix_digest(a) != io.matrix_digest(2 * a)
    assert io.matrix_digest(a).startswith("sha256:")


def test_dumps_canonical():
    assert io.dumps({"b": 1, "a": 2}) == '{\n  "a": 2,\n  "b": 1\n}\n'
    with pytest.raises(ValueError):
        io.dumps({"x": float("nan")})
