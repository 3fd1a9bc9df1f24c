"""Smoke test for the `hvir` extension module.

Build and install it first, e.g.

    pip install maturin
    maturin develop -m crates/python/Cargo.toml
"""

from fractions import Fraction

import hvir


def main():
    x, y = hvir.Element("d(2)"), hvir.Element("d(-2)")
    assert str(x.bracket(y)) == "-4*d(0) + 1/2*CD"
    assert str(hvir.apply_phi(hvir.Element("d(0)"), 2)) == "2*d(0) + 1/16*CD"
    assert hvir.jacobiator(hvir.Element("d(1/2)"), hvir.Element("I(1/3)"), hvir.Element("d(-5/6)")).is_zero()
    assert str(Fraction(1, 2) * hvir.Element("I(1)")) == "1/2*I(1)"

    q3 = hvir.Group("qk:3")
    assert Fraction(1, 6) in q3 and Fraction(1, 7) not in q3
    assert str(q3.intersect(hvir.Group("sn:2^inf"))) == "cyclic:1/2"
    assert hvir.Group("Q").rank() == 1 and not hvir.Group("Q").finitely_generated()

    m = hvir.Module("1/7,2,3@qk:3")
    assert (m.alpha, m.beta, m.F) == (Fraction(1, 7), 2, 3)
    assert m.act(hvir.Element("I(1/3)"), "1/6") == [(Fraction(1, 2), 3)]
    assert str(m.pullback(3)) == "6/7,2,18@cyclic:1"

    assert hvir.Module("0,1,0@Q").classify() == "ReducibleCodimOne"
    assert hvir.Module("0,0,0@Z").closure_dim(8, [0]) == 1
    assert hvir.Module("0,1,0@Z").closure_dim(8, [1]) == 16
    verdict, dims = hvir.Module("1/2,0,0@Z").reducibility_scan(8)
    assert verdict == "Irreducible" and set(dims) == {17}

    assert hvir.iso_check(hvir.Module("1/2,1,2@Z"), hvir.Module("5/2,1,2@Z")) == ("shift", 2)
    assert hvir.iso_check(hvir.Module("0,0,0@Z"), hvir.Module("0,1,0@Z")) == ("swap", None)
    assert hvir.iso_check(hvir.Module("1/3,0,0@Z"), hvir.Module("4/3,1,0@Z")) == ("density", 1)
    assert hvir.iso_check(hvir.Module("1/2,1,2@Z"), hvir.Module("1/3,1,2@Z")) is None

    params, scales = hvir.recover(hvir.Module("1/3,1/2,5@Z").table(4))
    assert str(params) == "1/3,1/2,5@cyclic:1" and all(c == 1 for _, c in scales)

    try:
        hvir.Element("d(1/2")
    except ValueError as e:
        assert "offset 6" in str(e)
    else:
        raise AssertionError("expected a parse error")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
