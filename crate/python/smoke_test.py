"""Smoke test for the gkverify extension module.

Build it first:

    cargo build -p gkverify-python --release --features extension-module
    cp target/release/libgkverify.so python/gkverify.so
    python3 python/smoke_test.py
"""

import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import gkverify as gk  # noqa: E402


def arithmetic():
    a = gk.GaussianRational(Fraction(1, 2), 3)
    b = gk.GaussianRational(-2, Fraction(1, 3))
    assert a * b == b * a
    assert (a / b) * b == a
    assert a * a.inv() == gk.GaussianRational(1)
    assert gk.GaussianRational.i() ** 2 == gk.GaussianRational(-1)
    assert a.conj().im == Fraction(-3)
    try:
        a / gk.GaussianRational()
    except ZeroDivisionError:
        pass
    else:
        raise AssertionError("division by zero went through")


def polynomials():
    x0, x1 = gk.MultiPoly.x(2, 2, 0), gk.MultiPoly.x(2, 2, 1)
    h = x0 * x1
    assert h.is_harmonic("x")
    assert not (x0 * x0).is_harmonic("x")
    assert (x0 * x0).dagger("x").is_harmonic("x")
    rho = gk.MultiPoly.rho(2, 2, "x")
    assert rho.laplacian("x") == gk.MultiPoly.constant(2, 2, gk.GaussianRational(2))
    basis = gk.MultiPoly.harmonic_basis(4, 4, "y", 2)
    assert len(basis) == 9 and all(b.is_harmonic("y") for b in basis)


def module():
    params = gk.ModuleParams(4, 4, 1)
    assert params.default_validity() == 14
    assert params.lambda_(1, 0) == gk.GaussianRational(3)
    assert params.lambda_(0, 1) == gk.GaussianRational(-3)
    assert not params.admits(0, 0)
    r = gk.check_typical_element(params, 1, 0)
    m = r["membership"]
    assert m["h_eigenvalue"] and m["annihilated"] and m["power_annihilated"]
    assert all(e["passed"] for e in r["eigenvalues"]), r
    try:
        gk.ModuleParams(3, 4, 0)
    except ValueError:
        pass
    else:
        raise AssertionError("odd p + q accepted")


def dichotomy():
    for (p, q, m), expected in [((2, 4, 0), True), ((4, 4, 1), False)]:
        g = gk.garfinkle(gk.ModuleParams(p, q, m))
        assert g["exists"] is expected, (p, q, m, g)
        t = gk.theorem_ingredients(gk.ModuleParams(p, q, m))
        assert t["joseph_consistent"] is expected
    assert [d for _, d in gk.decomposition(6)["dims"]] == [1, 15, 20, 84]


def suites():
    checks = gk.list_checks()
    assert len(checks) >= 25
    report = gk.run(p=2, q=2, m=0, suites="lie,weyl")
    s = report["summary"]
    assert s["total"] > 0 and s["passed"] == s["total"], s


if __name__ == "__main__":
    for test in (arithmetic, polynomials, module, dichotomy, suites):
        test()
        print(f"ok  {test.__name__}")
    print("all smoke tests passed")
