"""Smoke test for the invforge Python module.

Build and install first, e.g. `maturin develop --release -m crates/py/Cargo.toml`.
"""

import json

import invforge


def main():
    f9 = invforge.Field(3, 2)
    assert (f9.q, f9.modulus) == (9, [1, 0, 1])
    x = 3  # the code of the basis element x
    assert f9.mul(x, x) == 2

    try:
        invforge.Field(2)
    except ValueError as e:
        assert "characteristic 2" in str(e)
    else:
        raise AssertionError("F_2 accepted")

    f3 = invforge.Field(3)
    inv = invforge.Invariants(f3)
    assert str(inv.Delta) == "a1^2 + 2*a0*a2"
    assert inv.B.degree() == 6 and inv.Gamma.lead_monomial() == (0, 0, 3)

    for g in [invforge.GroupElem.sigma(f3, c) for c in f3.elements()] + [invforge.GroupElem.tau(f3)]:
        for name in ("Delta", "J", "Gamma", "B"):
            f = getattr(inv, name)
            assert g.apply(f) == f, name
    assert invforge.GroupElem.tau(f3).apply(inv.beta) != inv.beta

    phi = inv.phi()
    assert phi["text"] == "Delta^4 + Delta^2*J + J^2" and not phi["uses_gamma"]

    gens = [("Delta", inv.Delta), ("J", inv.J), ("Gamma", inv.Gamma), ("B", inv.B)]
    remainder, expr = invforge.subduct(inv.B ** 2, gens)
    assert remainder.is_zero(), expr
    assert invforge.Poly.from_json(f3, inv.B.to_json()) == inv.B
    assert json.loads(inv.B.to_json())

    rows = invforge.hilbert(f3, "SL2", 12)
    assert all(obs == pred for _, obs, pred in rows)

    report = invforge.verify(3)
    assert report["pass"], [c for c in report["checks"] if not c["pass"]]
    print(f"smoke test ok: {len(report['checks'])} checks passed at q=3, Phi = {phi['text']}")


if __name__ == "__main__":
    main()
