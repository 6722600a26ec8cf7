import json
import math

import numpy as np
import pytest

from metriclab.covers import Cover, CoverElement, ParametricBallFamily
from metriclab.io import InputError, cover_from_dict, cover_to_dict, dumps, space_from_dict
from metriclab.space import MetricError


def test_space_formats():
    a = space_from_dict({"labels": ["a", "b"], "matrix": [[0, 2], [2, 0]]})
    b = space_from_dict({"points": [[0], [2]], "metric": "l1"})
    assert a.dist.tolist() == b.dist.tolist() == [[0, 2], [2, 0]]
    assert a.labels == ("a", "b") and b.labels == ("0", "1")


def test_space_errors():
    with pytest.raises(MetricError):
        space_from_dict({"matrix": [[0, 1], [2, 0]]})
    for bad in ({}, {"matrix": [[0, 1]]}, {"points": [[0], [1, 2]]}, {"points": [[0]], "metric": "cos"},
                {"matrix": [[0]], "axiom_tol": "x"}, {"matrix": [[0, 1], [1, 0]], "labels": ["a", "a"]}):
        with pytest.raises(InputError):
            space_from_dict(bad)


def test_cover_round_trip():
    cover = Cover(
        (CoverElement.ball(0, 1.5, "b"), CoverElement.explicit([2, 1], "e"), CoverElement.complement([0], "c")),
        (ParametricBallFamily(2, (1, 2), "scaled", 0.5, "F"),), (0, 1, 2))
    again = cover_from_dict(json.loads(dumps(cover_to_dict(cover))))
    assert again == cover


def test_cover_errors():
    with pytest.raises(InputError):
        cover_from_dict({"elements": [{"kind": "hexagon"}]})
    with pytest.raises(InputError):
        cover_from_dict({"elements": [{"kind": "ball", "center": 0}]})
    with pytest.raises(InputError):
        cover_from_dict({"elements": [{"kind": "ball", "center": 0, "radius": -1}]})


def test_dumps_is_sorted_and_round_trips():
    x = 0.1 + 0.2
    text = dumps({"b": [1, x], "a": {"z": None, "y": True}, "c": np.float64(1 / 3), "d": np.int64(4)})
    assert text.index('"a"') < text.index('"b"') < text.index('"c"')
    back = json.loads(text)
    assert back["b"][1] == x and back["c"] == 1 / 3 and back["d"] == 4
    assert "0.30000000000000004" in text


def test_dumps_nonfinite_and_integral_floats():
    back = json.loads(dumps({"a": math.inf, "b": -math.inf, "c": math.nan, "d": 2.0, "e": 1e300}))
    assert back == {"a": "inf", "b": "-inf", "c": "nan", "d": 2.0, "e": 1e300}
    assert isinstance(back["d"], float)
    assert dumps({"d": 2.0}) == '{\n  "d": 2.0\n}'
