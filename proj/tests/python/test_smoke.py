import json
import os
from pathlib import Path

import pytest

import topprod

FIXTURES = Path(os.environ.get("TOPPROD_FIXTURES", Path(__file__).resolve().parents[1] / "fixtures"))

Z = {"tail": {"kind": "constant", "value": 1}}
OMEGA = {"profile": Z, "blocks": [{"kind": "omega", "level": {"a": 1, "b": 0}}]}
A0 = {"profile": Z, "blocks": [{"kind": "finite", "letters": [[0, 0, 1]]}]}


def test_classify_builtins():
    assert topprod.classify("sineCurve")["type"] == "horseshoe"
    tpd = topprod.classify("builtin:omegaPlusOne")
    assert tpd["type"] == "tpd"
    assert tpd["invariantText"] == "(1, 1, ...)"


def test_iso():
    assert topprod.iso("omegaPlusOne", "doubledOmega")["isomorphic"] is True
    verdict = topprod.iso("omegaPlusOne", "discrete(4)")
    assert verdict["isomorphic"] is False
    assert verdict["failingCondition"] == 1
    with pytest.raises(topprod.NotApplicableError):
        topprod.iso("sineCurve", "omegaPlusOne")


def test_sequences():
    twos = {"tail": {"kind": "constant", "value": 2}}
    assert topprod.seq_equiv(Z, twos)["equivalent"] is True
    assert topprod.seq_sum(Z, 3) == {"fin": 4}
    assert topprod.seq_text(topprod.regroup(Z, {"repeat": [2]})) == "(2, 2, ...)"


def test_words():
    assert topprod.project(OMEGA, 1)["text"] == "[a_0][a_1]"
    assert topprod.project(topprod.phi(A0), 3)["text"] == "[a_0][a_1^-1]"
    a6 = {"profile": Z, "blocks": [{"kind": "finite", "letters": [[0, 0, 6]]}]}
    assert topprod.kth_root(a6, 3)["text"] == "[a_0^2]"
    assert topprod.divisibility_spectrum(a6, 10) == [1, 2, 3, 6]
    assert topprod.semidecide_neq(A0, {"profile": Z, "blocks": []}) == 0
    assert topprod.eq_up_to(OMEGA, OMEGA)
    inv = topprod.invert_word(OMEGA)
    assert inv["blocks"][0]["kind"] == "omegaStar"
    assert topprod.project(topprod.concat(A0, topprod.invert_word(A0)), 5)["text"] == "1"


def test_errors():
    with pytest.raises(topprod.TopprodError):
        topprod.concat(A0, {"profile": {"tail": {"kind": "constant", "value": 2}}, "blocks": []})
    with pytest.raises(topprod.TopprodError):
        topprod.builtin_model("nope")
    assert topprod.validate(json.loads((FIXTURES / "invalid_model.json").read_text()))[0]["rule"] == "census"


def test_builtin_round_trip():
    for name in topprod.builtin_names():
        model = topprod.builtin_model(name)
        code, out, _ = topprod.run_cli(["examples", name])
        assert code == 0
        assert json.loads(out) == model


def test_cli_exit_codes():
    assert topprod.run_cli(["classify", FIXTURES / "three_components.json"])[0] == 0
    assert topprod.run_cli(["classify", FIXTURES / "malformed_model.json"])[0] == 2
    assert topprod.run_cli(["iso", FIXTURES / "sine_model.json", "builtin:omegaPlusOne"])[0] == 3
