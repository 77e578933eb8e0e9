import json

from lvc.reports import dumps, write_report


def test_exact_text():
    assert dumps({"win_rate": 0.97}) == '{"win_rate":0.97}'


def test_sorted_keys_compact():
    assert dumps({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'


def test_nested_round_trip(tmp_path):
    report = {"stats": {"median": 0.5, "p95": 0.75}, "sizes": ["64x4x8"],
              "seed": 7}
    path = tmp_path / "r.json"
    write_report(path, report)
    assert json.loads(path.read_text("utf-8")) == report


def test_serialization_is_deterministic(tmp_path):
    report = {"z": 1.5, "a": {"y": [3, 2], "x": 0.1}}
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    write_report(p1, report)
    write_report(p2, report)
    assert p1.read_bytes() == p2.read_bytes()
