import hashlib
from pathlib import Path

import pytest

import govtree

PROGRAMS = Path(__file__).resolve().parents[2] / "programs"


def load(name):
    return (PROGRAMS / name).read_text()


def test_pure_program_has_empty_trace():
    out = govtree.run(load("pure.json"))
    assert out["status"] == "value"
    assert out["value"] == 'pair(9, "abc3")'
    assert out["trace"] == ""
    assert out["ledger"] == "GOVLEDGER v1 sha256\n"


def test_denied_call_stops_after_the_check():
    out = govtree.run(load("llm_call.json"), policy="deny")
    assert out["status"] == "denied"
    assert out["value"] is None
    assert out["trace"] == "GOV LLMCall fail\n"


def test_fuel_exhaustion():
    assert govtree.run(load("register.json"), fuel=10)["status"] == "fuel"


def test_ledger_round_trip_and_tamper():
    ledger = govtree.run(load("register.json"))["ledger"]
    assert govtree.verify_ledger(ledger) == (True, None, "")
    lines = ledger.splitlines()
    prev, digest, data = lines[3].split(" ")
    lines[3] = " ".join([prev, digest, ("B" if data[0] == "A" else "A") + data[1:]])
    valid, entry, reason = govtree.verify_ledger("\n".join(lines) + "\n")
    assert not valid and entry == 2 and reason


def test_sha256_matches_hashlib():
    for data in [b"", b"abc", bytes(range(256))]:
        assert govtree.sha256_hex(data) == hashlib.sha256(data).hexdigest()


def test_directives():
    assert govtree.canonical_directive("LLMCall{model=m,prompt=a%20b}") == "LLMCall{model=m,prompt=a%20b}"
    assert govtree.directive_capability("DBOp{query=q}") == "CapDB"
    assert govtree.directive_capability("Observability{message=x}") is None
    with pytest.raises(govtree.ParseError):
        govtree.canonical_directive("Teleport{}")


def test_program_caps():
    assert set(govtree.program_caps(load("pipeline.json"))) == {"CapMachineCall", "CapMemory"}
    assert govtree.program_caps(load("pure.json")) == []


def test_diff_and_conformance():
    clean = govtree.diff(trials=200, seed=3)
    assert clean["disagreements"] == 0
    assert govtree.diff(trials=200, seed=3)["report"] == clean["report"]
    ok, report = govtree.conformance("mashin", trials=30)
    assert ok, report
    bad, _ = govtree.conformance("no_check", trials=30)
    assert not bad
    assert "mashin" in govtree.operators()
