"""Smoke test for the flagrig_py extension module.

Build and install first, e.g.
    maturin build --release -m crates/py/Cargo.toml -o target/wheels
    pip install --force-reinstall target/wheels/flagrig_py-*.whl
"""

import json

import flagrig_py as fr


def main():
    d = fr.Diagram("D4[2,3,4]")
    assert d.graded_dims() == [4, 4, 2, 1], d.graded_dims()
    assert d.dim() == 11
    assert d.picard_number() == 3
    assert d.canonical() == "D4[1,2,3]"
    assert len(fr.Diagram("D4").positive_roots()) == 12

    g = d.nilradical()
    assert g.dims() == [4, 4, 2, 1]
    assert g.check_jacobi()
    assert len(g) == 11

    deg = fr.Algebra.model("A4_DEG")
    assert deg.bracket("v23", "v34") == "1/2 v2334"
    assert fr.Algebra.model("A4_IDEALQ").isomorphic_to(deg)
    again = fr.Algebra.from_json(deg.to_json())
    assert again.dims() == deg.dims() == [4, 2, 2, 1]

    assert fr.split("A3[1,2]", beta=1, alpha=2) == [-1]
    assert fr.split("A3[1,2]", beta=2, alpha=2) == [2, 1]
    assert sum(fr.split_fiber("A3[1,2]", [2], 1)) == -2

    rows = fr.prolong("D4[2,3,4]", 1)
    assert [(r[1], r[2]) for r in rows] == [(6, 6), (4, 4)]
    assert all(r[3] for r in rows)

    assert fr.classify_status("A3[1,2]") == "NotRigid(F^d(1,2;C^4))"
    verdict = json.loads(fr.classify_json("D4[1,3,4]"))
    assert verdict["status"] == "Rigid"
    assert verdict["trace"][0]["rule"] == "R-REDUCE"
    assert fr.classify_status("D4[2,3,4]") == "Undetermined"

    try:
        fr.classify_status("B3[1]")
    except fr.ScopeError:
        pass
    else:
        raise AssertionError("B3 should be out of scope")
    try:
        fr.Diagram("X9[1]")
    except ValueError:
        pass
    else:
        raise AssertionError("bad spec should raise ValueError")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
