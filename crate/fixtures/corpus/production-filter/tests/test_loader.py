import pickle

from pkg.loader import load_result


def test_roundtrip(tmp_path):
    p = tmp_path / "r.pkl"
    p.write_bytes(pickle.dumps({"a": 1}))
    assert load_result(p) == pickle.load(open(p, "rb"))
