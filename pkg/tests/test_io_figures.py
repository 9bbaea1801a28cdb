import math

import numpy as np
import pytest
from hypothesis import given

from measunc.core import DichotomicPovm, DiscretePovm
from measunc.figures import FIGURES, metric_comparison, noise_comparison
from measunc.io import (
    SchemaError,
    as_symmetric_direction,
    csv_text,
    fmt,
    json_text,
    load_povm,
    povm_from_json,
    povm_to_json,
)

from conftest import dichotomic, discrete_povms


@given(discrete_povms())
def test_discrete_roundtrip(E):
    back = povm_from_json(povm_to_json(E))
    assert back.outcomes == E.outcomes
    for x, y in zip(back.effects, E.effects):
        assert x.isclose(y, 0)


@given(dichotomic())
def test_dichotomic_roundtrip(C):
    back = povm_from_json(povm_to_json(C))
    assert back.gamma == C.gamma
    np.testing.assert_array_equal(back.c, C.c)


def test_load_povm_inline_and_file(tmp_path):
    text = '{"gamma": 0, "c": [0, 0, 0.5]}'
    p = tmp_path / "c.json"
    p.write_text(text)
    for src in (text, str(p)):
        np.testing.assert_array_equal(as_symmetric_direction(load_povm(src)), [0, 0, 0.5])


@pytest.mark.parametrize(
    "bad",
    ["{not json", "no-such-file", '{"outcomes": [1], "effects": [{"alpha": 1, "vec": [0,0,0]}]}',
     '{"c": [0, 0, 2]}', '{"effects": []}', "[1, 2]"],
)
def test_load_povm_errors(bad):
    with pytest.raises(SchemaError):
        load_povm(bad) if bad != "[1, 2]" else povm_from_json([1, 2])


def test_symmetric_direction_requires_symmetric_pm1():
    with pytest.raises(SchemaError):
        as_symmetric_direction(DichotomicPovm(0.2, (0, 0, 0.5)))
    E = DiscretePovm((1, 2), DichotomicPovm.symmetric((0, 0, 1)).effects)
    with pytest.raises(SchemaError):
        as_symmetric_direction(E)
    E = DiscretePovm((-1, 1), DichotomicPovm.symmetric((0, 0, 1)).effects[::-1])
    np.testing.assert_array_equal(as_symmetric_direction(E), [0, 0, 1])


def test_csv_format():
    text = csv_text(("x", "flag", "n"), [(0.1, True, 3), (1 / 3, False, np.int64(4))])
    assert text == "x,flag,n\n0.10000000000000001,true,3\n0.33333333333333331,false,4\n"
    assert float(fmt(math.pi)) == math.pi
    assert "\r" not in text


def test_json_handles_numpy():
    assert json_text({"a": np.array([1.0, 2.0]), "b": np.float64(0.5), "c": np.bool_(True)}).startswith("{")


@pytest.mark.parametrize("fig", sorted(FIGURES))
def test_figures_pass_their_checks(fig):
    data = FIGURES[fig]()
    assert data.passed, [c for c in data.checks.assertions if not c.passed]
    assert all(len(r) == len(data.header) for r in data.rows)


def test_figure5_small_theta_endpoint_gap_vanishes():
    data = metric_comparison(n=11, thetas=(1e-3, 1e-2))
    for theta, phi, _, _, _, gap in data.rows:
        if phi == 0.0:
            assert 0 <= gap < theta
            assert gap == pytest.approx(2 * math.sin(theta / 2) - math.sin(theta), abs=1e-12)


def test_figure6_right_angle_row():
    data = noise_comparison(n=5, thetas=(math.pi / 2,))
    assert all(abs(r[-1]) < 1e-9 for r in data.rows)
