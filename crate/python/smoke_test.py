"""Smoke test for the pslpoly extension module.

Build and install first:
    maturin build --release -m crates/pslpoly-py/Cargo.toml
    pip install target/wheels/pslpoly-*.whl
"""

import pslpoly


def main():
    f2 = pslpoly.Field("GF(2^1|g)")
    assert f2.order == 2 and f2.characteristic == 2

    poly, meta = pslpoly.family("char2", f2, q=8, n=9, alpha="1")
    assert str(poly) == "GF(2^1|g){ X^28 + X^10 + X }", str(poly)
    assert meta["degree"] == 28
    assert pslpoly.Poly(str(poly)) == poly

    bits = pslpoly.permutation_profile(poly, 5)
    assert bits == [True, True, False, True, True], bits

    ind7, _ = pslpoly.family("ind7", pslpoly.Field.make(7, 1), alpha="3")
    assert pslpoly.decompose(ind7, 3) is None
    g, h = pslpoly.decompose(ind7, 3, field=pslpoly.Field.make(7, 2))
    assert g.compose(h) == ind7.embed_into(pslpoly.Field.make(7, 2))

    x3 = pslpoly.Poly("GF(5^1|g){ X^3 }")
    assert x3.derivative() == pslpoly.Poly("GF(5^1|g){ 3*X^2 }")
    assert pslpoly.permutation_profile(x3, 3) == [True, False, True]

    genus, inertia = pslpoly.ramification_profile(8, 9, 7)
    assert genus >= 0 and inertia

    rows = pslpoly.fixed_point_table(7, "pgammal")
    assert all(obs == {pred: cnt} for (_, _, _, _, cnt, obs, pred) in rows if pred is not None)

    checks = pslpoly.verify_paper("group")
    assert checks and all(ok for (_, ok, _) in checks), checks

    stats = pslpoly.cycle_stats(poly, field=pslpoly.Field.make(2, 3))
    assert sum(stats.values()) == 8, stats

    try:
        pslpoly.Poly("GF(2^1|g){X^3 +}")
    except ValueError:
        pass
    else:
        raise AssertionError("parse error not raised")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
