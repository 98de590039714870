import pytest

import dynpdr

TOGGLE = "aag 1 0 1 1 0\n2 3\n2\n"
COUNTER = "aag 5 0 2 1 3\n2 8\n4 10\n6\n6 4 2\n8 5 3\n10 5 2\n"


@pytest.mark.parametrize("strategy", dynpdr.STRATEGIES)
def test_toggle_is_unsafe(strategy):
    r = dynpdr.check(TOGGLE, strategy=strategy)
    assert r["result"] == "unsafe"
    assert r["certified"] is True
    assert len(r["trace"]) == 2
    assert r["witness"].startswith("1\nb0\n")


@pytest.mark.parametrize("strategy", dynpdr.STRATEGIES)
def test_counter_is_safe(strategy):
    r = dynpdr.check(COUNTER, strategy=strategy)
    assert r["result"] == "safe"
    assert r["certified"] is True
    assert [sorted(c) for c in r["invariant"]] == [[-2, -1]]


def test_file_input(tmp_path):
    p = tmp_path / "t.aag"
    p.write_text(TOGGLE)
    assert dynpdr.check(str(p))["result"] == "unsafe"


def test_parse_error():
    with pytest.raises(dynpdr.AigerError):
        dynpdr.check("aag 1 0 1 1 0\n2 3\n")
    with pytest.raises(ValueError):
        dynpdr.check(TOGGLE, strategy="fastest")


def test_branch_table():
    assert dynpdr.strategy_params(9)["branch"] == "standard"
    assert dynpdr.strategy_params(25) == {"branch": "ctg", "ctg_lv": 1, "ctg_max": 3, "exctg_limit": 1}
    assert dynpdr.strategy_params(72)["exctg_limit"] == 11


def test_corpus_agrees_with_reachability():
    for name, text in dynpdr.corpus(count=60, max_bits=10, seed=3)[:40]:
        truth = dynpdr.reachable(text)["result"]
        assert dynpdr.check(text, strategy="dynamic")["result"] == truth, name


def test_time_limit():
    r = dynpdr.check(dynpdr.ladder(8, 4, 177), strategy="standard", time_limit=0.05)
    assert r["result"] == "unknown"
    assert "time" in r["reason"]


def test_seeded_runs_repeat():
    a = dynpdr.check(dynpdr.ladder(4, 2, 11), seed=7)
    b = dynpdr.check(dynpdr.ladder(4, 2, 11), seed=7)
    assert a["stats"]["query_trace_hash"] == b["stats"]["query_trace_hash"]
    assert a["result"] == b["result"] == "safe"
