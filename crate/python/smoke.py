"""Smoke test for the selfdual_py extension.

Build and install first:
    maturin develop --release -m crates/py/Cargo.toml
"""
import json
import sys

import selfdual_py as sd


def main():
    rec = json.loads(sd.construct(19, 2, [6, 15, 21], (1, 93), "(1,2,3,4)"))
    assert (rec["n"], rec["k"], rec["d"]) == (78, 39, 14), rec
    assert rec["i_2d"] == 646285
    assert rec["derived_params"]["beta"] == "0"
    print("construct C1: [78,39,14], I28 =", rec["i_2d"])

    d, proven = sd.min_distance("2 4\n03\n0c\n")
    assert (d, proven) == (2, True)

    assert sd.feasible_types(78, 14, 19) == ["19-(4;2)"]

    cert = json.loads(sd.certify(82, "extremal-near-minimal"))
    assert cert["verdict"] == "eliminated"
    assert (cert["b_value_closed_form"], cert["b_value_gleason"]) == ("1105", "1505")
    print("certify 82:", cert["verdict"], cert["clause"])

    fam = json.loads(sd.gleason(78, 14, ["B3=0", "B7=alpha", "B11=-beta-16*alpha"]))
    assert fam["a"]["14"] == "3705 + 8*beta"
    print("gleason 78: A14 =", fam["a"]["14"])

    try:
        sd.certify(7, "extremal-minimal")
    except ValueError as e:
        print("odd length rejected:", e)
    else:
        sys.exit("expected ValueError")

    plan = "p = 19\nf = 2\ntarget_d = 14\nv_pairs = 1:93\nu1 = 6\nu2 = 15\nu3 = 21\ns = (1,2,3,4)\n"
    codes = [json.loads(c) for c in sd.search(plan)]
    assert len(codes) == 1 and codes[0]["i_2d"] == 646285
    print("search: 1 code")
    print("ok")


if __name__ == "__main__":
    main()
