"""Smoke test for the cisforge Python extension.

Uses an installed `cisforge` module if there is one, otherwise the library
built by `cargo build -p cisforge-python --release --features extension-module`.
"""

import importlib
import json
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    try:
        return importlib.import_module("cisforge")
    except ImportError:
        pass
    for profile in ("release", "debug"):
        lib = ROOT / "target" / profile / "libcisforge.so"
        if lib.exists():
            tmp = pathlib.Path(tempfile.mkdtemp())
            shutil.copy(lib, tmp / "cisforge.so")
            sys.path.insert(0, str(tmp))
            return importlib.import_module("cisforge")
    sys.exit("cisforge extension not found; build crates/python first")


def validate(name, value):
    try:
        import jsonschema
    except ImportError:
        return
    schema = json.loads((ROOT / "schemas" / f"{name}.schema.json").read_text())
    jsonschema.validate(value, schema)


def main():
    cf = load()

    code = cf.Code(2, "x^3-1", 2, ["x"])
    assert code.is_cis() and code.is_cis_by_rank()
    assert (code.length, code.dimension, code.family) == (6, 3, "QC")
    assert code.min_distance() == 2
    assert code.encode([1, 0, 0]) == [1, 0, 0, 0, 1, 0]
    validate("code", code.to_dict())
    assert not cf.Code(2, "x^3-1", 2, ["x+1"]).is_cis()

    rec = cf.search_codes(2, 3, "x^7-1")
    validate("search_record", rec)
    assert rec["best_d"] == 8

    again = cf.search_codes(4, 2, "x^3-w", mode="random", seed=5, budget=30)
    assert again == cf.search_codes(4, 2, "x^3-w", mode="random", seed=5, budget=30)

    rows = cf.table("qt-t2", ns=[2, 3])
    for row in rows:
        validate("table_row", row)
    assert [r["d_found"] for r in rows] == [3, 3]

    rep = cf.count(2, 2, "x^5-1", oracle=True)
    validate("count_report", rep)
    assert rep["formula_count"] == "15" and rep["matches"]

    assert abs(cf.gv_delta(2, 2, 1) - 0.1100) < 1e-3
    assert abs(cf.entropy(2, 0.5) - 1.0) < 1e-12
    assert cf.factor(2, "x^7-1") == [("x+1", 1), ("x^3+x+1", 1), ("x^3+x^2+1", 1)]
    assert cf.element(4, "w+1") == 3

    z4 = cf.z4_count(3, 2)
    validate("z4_count_report", z4)
    assert (z4["unit_formula_count"], z4["crt_count"], z4["oracle_count"]) == ("56", "24", "24")
    zs = cf.z4_search(3, 2, seed=7, budget=10)
    validate("z4_search_record", zs)
    assert cf.gray_map([0, 1, 2, 3]) == [0, 0, 0, 1, 1, 1, 1, 0]
    assert cf.lee_weight([1, 2, 3]) == 4

    try:
        cf.Code(2, "x^^3", 2, ["x"])
    except ValueError as e:
        assert "parse" in str(e)
    else:
        raise AssertionError("bad polynomial accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
