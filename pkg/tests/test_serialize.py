import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hardylab.errors import SpecParseError
from hardylab.functions import ClosedForm, Quotient, SingularInner
from hardylab.serialize import (
    dump_function,
    dumps,
    format_float,
    load_function,
    parse_function,
    read_function_artifact,
    read_samples,
)

finite = st.floats(allow_nan=False, allow_infinity=False)
small = st.floats(-0.7, 0.7)
point = st.tuples(small, small).map(list)
schur = st.one_of(
    st.builds(lambda r: {"kind": "scale", "r": r}, st.floats(0.01, 0.99)),
    st.builds(lambda a, t: {"kind": "automorphism", "a": a, "angle": t}, point, finite),
    st.builds(lambda zs, t: {"kind": "blaschke", "zeros": zs, "angle": t},
              st.lists(point, min_size=1, max_size=3), st.floats(-7, 7)),
)
leaf = st.one_of(
    st.builds(lambda re, im: {"kind": "constant", "re": re, "im": im}, finite, finite),
    st.builds(lambda zs: {"kind": "blaschke", "zeros": zs}, st.lists(point, max_size=3)),
    st.builds(lambda ms: {"kind": "singular_inner", "masses": ms},
              st.lists(st.tuples(st.floats(-7, 7), st.floats(0, 5)).map(list), max_size=3)),
    st.builds(lambda n, r: {"kind": "closed_form", "name": n, "reciprocal": r},
              st.sampled_from(["one_minus_z", "exp", "exp_cayley"]), st.booleans()),
    st.builds(lambda v, c: {"kind": "outer", "c_angle": c, "log_rho": v},
              st.lists(st.floats(-50, 50), min_size=4, max_size=12), st.floats(-4, 4)),
)
specs = st.recursive(
    leaf,
    lambda inner: st.one_of(
        st.builds(lambda fs: {"kind": "product", "factors": fs}, st.lists(inner, min_size=1, max_size=3)),
        st.builds(lambda f, p: {"kind": "compose", "f": f, "psi": p}, inner, schur),
        st.builds(lambda f: {"kind": "quotient", "num": f,
                             "den": {"kind": "closed_form", "name": "exp", "reciprocal": False}}, inner),
    ),
    max_leaves=6,
)


@given(specs)
def test_dump_parse_dump_is_fixed_point(spec):
    f = parse_function(spec)
    text = dump_function(f)
    again = dump_function(read_function_artifact(text))
    assert again == text


@given(specs)
def test_round_trip_preserves_values(spec):
    f = parse_function(spec)
    g = read_function_artifact(dump_function(f))
    z = np.array([0.0, 0.2 - 0.3j])
    np.testing.assert_array_equal(f.log_abs(z), g.log_abs(z))


@given(finite)
def test_float_format_round_trips(x):
    s = format_float(x)
    assert float(s) == x
    assert json.loads(s) == x


def test_non_finite_becomes_null():
    assert json.loads(dumps({"a": float("nan"), "b": [1.0, float("inf")]})) == {"a": None, "b": [1.0, None]}


def test_dumps_shapes():
    text = dumps({"n": 3, "ok": True, "none": None, "z": 1 + 2j, "row": np.array([0.5, 2.0]),
                  "nested": [{"x": np.float64(0.1)}], "empty": [], "obj": {}})
    assert json.loads(text) == {"n": 3, "ok": True, "none": None, "z": [1.0, 2.0],
                                "row": [0.5, 2.0], "nested": [{"x": 0.1}], "empty": [], "obj": {}}
    assert "0.10000000000000001" in text
    with pytest.raises(TypeError):
        dumps({"bad": object()})


def test_reciprocal_sugar():
    f = parse_function({"kind": "reciprocal", "of": {"kind": "singular_inner", "masses": [[0, 1]]}})
    assert isinstance(f, Quotient) and isinstance(f.denominator, SingularInner)
    z = np.array([0.3 + 0.1j])
    np.testing.assert_allclose(f.value(z), ClosedForm("exp_cayley").value(z), rtol=1e-12)


def test_chain_composes_left_to_right():
    spec = {"kind": "closed_form", "name": "exp", "chain": [{"kind": "scale", "r": 0.5},
                                                             {"kind": "scale", "r": 0.5}]}
    f = parse_function(spec)
    assert f.value(np.array([0.8]))[0] == pytest.approx(np.exp(0.2))


@pytest.mark.parametrize("spec", [{"kind": "banana"}, {"re": 1}, [1, 2],
                                  {"kind": "blaschke", "zeros": [[2.0, 0.0]]},
                                  {"kind": "blaschke", "zeros": [1.0]},
                                  {"kind": "quotient", "num": {"kind": "constant"},
                                   "den": {"kind": "blaschke", "zeros": [[0.1, 0]]}},
                                  {"kind": "compose", "f": {"kind": "constant"}, "psi": {"kind": "x"}}])
def test_bad_specs(spec):
    with pytest.raises(SpecParseError):
        parse_function(spec)


def test_load_from_file_and_samples(tmp_path):
    (tmp_path / "rho.txt").write_text("modulus\n# comment\n1\n2\n\n4\n8\n")
    (tmp_path / "f.json").write_text(json.dumps({"kind": "outer", "log_rho_file": "rho.txt"}))
    f, spec = load_function(tmp_path / "f.json")
    np.testing.assert_allclose(f.log_rho, np.log([1, 2, 4, 8]))
    assert spec["log_rho_file"] == "rho.txt"
    np.testing.assert_allclose(read_samples(tmp_path / "rho.txt"), np.log([1, 2, 4, 8]))


def test_load_accepts_synth_artifact(tmp_path):
    f = ClosedForm("exp")
    (tmp_path / "function.json").write_text(dump_function(f))
    g, spec = load_function(tmp_path / "function.json")
    assert spec["kind"] == "closed_form" and spec["name"] == "exp"
    z = np.array([0.0, 0.3 + 0.2j])
    np.testing.assert_array_equal(g.value(z), f.value(z))


@pytest.mark.parametrize("text", ["", "1\nx\n", "modulus\n"])
def test_bad_sample_files(tmp_path, text):
    p = tmp_path / "d.txt"
    p.write_text(text)
    with pytest.raises(SpecParseError):
        read_samples(p)
    with pytest.raises(SpecParseError):
        read_samples(tmp_path / "missing.txt")


def test_bad_json():
    with pytest.raises(SpecParseError):
        load_function("{not json")
    with pytest.raises(SpecParseError):
        load_function("/nonexistent/spec.json")
    with pytest.raises(SpecParseError):
        read_function_artifact("[")
