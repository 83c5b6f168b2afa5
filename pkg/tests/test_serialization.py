from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bergman_lab import serialization as s

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@given(st.lists(st.tuples(finite, finite), min_size=1, max_size=5))
def test_point_round_trip(pairs):
    p = np.array([complex(a, b) for a, b in pairs])
    back = s.decode_point(json.loads(json.dumps(s.encode_point(p))))
    np.testing.assert_array_equal(back, p)


def test_csv_round_trip(tmp_path):
    pts = np.array([[0.1 + 0.2j, -0.3, 1e-17j], [0, 0.5j, 0.25]])
    text = s.points_to_csv(pts, {"member": [True, False]})
    assert text.splitlines()[0] == "re0,im0,re1,im1,re2,im2,member"
    assert text.splitlines()[1].endswith(",true")
    f = tmp_path / "pts.csv"
    f.write_text(text)
    np.testing.assert_array_equal(s.points_from_csv(f), pts)
    np.testing.assert_array_equal(s.points_from_csv(text), pts)


def test_decoding_errors():
    for bad in ([], [[1, 2, 3]], ["x"], [True]):
        with pytest.raises(ValueError):
            s.decode_point(bad)
    with pytest.raises(ValueError):
        s.points_from_csv("a,b\n1,2\n")


def test_points_shapes():
    assert s.decode_points([[0, 0], [1, 0]]).shape == (1, 2)
    assert s.decode_points([[[0, 0], [1, 0]], [[0, 1], 0]]).shape == (2, 2)


def test_dumps_numpy():
    out = json.loads(s.dumps({"a": np.float64(1.5), "b": np.bool_(True), "c": 1j,
                              "d": np.arange(2), "e": (1, 2)}))
    assert out == {"a": 1.5, "b": True, "c": [0.0, 1.0], "d": [0, 1], "e": [1, 2]}
