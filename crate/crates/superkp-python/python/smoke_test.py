"""Smoke test for the pysuperkp extension module.

Run with `python3 smoke_test.py` after `pip install -e crates/superkp-python --no-build-isolation`.
"""

import cmath
import json

import pysuperkp as sk


def check(cond, message):
    if not cond:
        raise AssertionError(message)
    print("ok:", message)


def grassmann_arithmetic():
    b1 = sk.GrassmannScalar.generator(2, 0)
    b2 = sk.GrassmannScalar.generator(2, 1)
    check((b1 * b2 + b2 * b1).max_abs() == 0.0, "generators anticommute")
    check((b1 * b1).max_abs() == 0.0, "generators square to zero")
    x = 2.0 + b1 * b2
    check(x.invert().approx_eq(0.5 - 0.25 * b1 * b2), "inverse of 2 + b1 b2")
    back = sk.GrassmannScalar.from_json(x.to_json())
    check(back == x, "JSON round trip")


def berezinian():
    one = sk.GrassmannScalar.one(2)
    b1 = sk.GrassmannScalar.generator(2, 0)
    b2 = sk.GrassmannScalar.generator(2, 1)
    a = sk.SuperMatrix((1, 1), (1, 1), [[one, b1], [b2, one]])
    check(a.ber().approx_eq(one - b1 * b2), "ber of the (1|1) example is 1 - b1 b2")
    check((a.ber() * a.ber_star()).approx_eq(one), "ber * ber* = 1")
    x = a.solve([one, b2])
    lhs = [x[0] * a.get(0, 0) + x[1] * a.get(1, 0), x[0] * a.get(0, 1) + x[1] * a.get(1, 1)]
    check(lhs[0].approx_eq(one) and lhs[1].approx_eq(b2), "Cramer solution satisfies x A = y")


def theta():
    tau = 1.3j
    z = 0.2 + 0.1j
    direct = sum(cmath.exp(1j * cmath.pi * n * n * tau + 2j * cmath.pi * n * z) for n in range(-30, 31))
    value = sk.theta_value([[tau]], [z])
    check(abs(value - direct) < 1e-12, "genus-one theta against a direct sum")
    check(abs(sk.theta_value([[tau]], [0.0], characteristic="11")) < 1e-12, "odd theta vanishes at 0")


def periods_and_rr():
    check(sk.riemann_roch(3, 2, 0) == (2, 2), "Riemann-Roch example (2|2)")
    n = 2
    ze = [[sk.GrassmannScalar.scalar(n, 1.1j), sk.GrassmannScalar.scalar(n, 0.2)],
          [sk.GrassmannScalar.scalar(n, 0.2), sk.GrassmannScalar.scalar(n, 0.9j)]]
    zo = [[sk.GrassmannScalar.generator(n, 0)], [sk.GrassmannScalar.zero(n)]]
    pd = sk.PeriodData(ze, zo)
    report = pd.dual_cohomology()
    check(report["rank_nullity"] and not report["ker_zo"]["free"], "single-generator odd period is not free")
    bilinear, pair = pd.relation_residuals()
    check(bilinear < 1e-10 and pair < 1e-10, "bilinear and pair relations")


def tau_functions():
    frame = json.dumps({"kind": "generic", "n": 2, "seed": 3})
    flows = json.dumps({"n": 2, "times": [{"index": "1", "value": {"n": 0, "terms": [{"mask": [], "re": 0.2, "im": 0.0}]}}]})
    out = sk.sgr_tau(6, frame, flows)
    check("finite" in out["tau"] and not out["diagnostics"]["truncated"], "finite tau on a generic frame")
    report = sk.tau_elliptic(0.21 + 0.3j, 0.05 + 0.02j)
    check(report["ber_check_residual"] < 1e-6, "genus-one Berezinian check")


def acceptance():
    results = sk.run_acceptance(7)
    for r in results:
        print("  criterion %02d %s %s" % (r["id"], "PASS" if r["passed"] else "FAIL", r["name"]))
    check(all(r["passed"] for r in results), "acceptance suite")


if __name__ == "__main__":
    grassmann_arithmetic()
    berezinian()
    theta()
    periods_and_rr()
    tau_functions()
    acceptance()
    print("all smoke tests passed")
