import os
import random
import sys

import pytest

from isojac.curve import Genus2Curve

sys.path.insert(0, os.path.dirname(__file__))

import oracles  # noqa: E402
import toy  # noqa: E402


def to_pair(x):
    """A library class over F_p as an oracle Mumford pair."""
    return tuple(int(c) for c in x.a), tuple(int(c) for c in x.b)


def oracle_sum(p, h, classes):
    """Sum of classes by coprime additions only; None when some step is not coprime."""
    acc = classes[0]
    for D in classes[1:]:
        if not oracles.coprime(p, acc[0], D[0]):
            return None
        acc = oracles.add_classes(p, h, acc, D)
    return acc


def oracle_double(p, h, D, pool, rng):
    """2D as (D + r1) + (D + r2) + (-(r1 + r2)) for random classes r1, r2 of the pool."""
    while True:
        r1, r2 = rng.sample(pool, 2)
        s = oracle_sum(p, h, [r1, r2])
        x = oracle_sum(p, h, [D, r1])
        y = oracle_sum(p, h, [D, r2])
        if None in (s, x, y):
            continue
        out = oracle_sum(p, h, [x, y, (s[0], tuple(oracles.pneg(p, s[1])))])
        if out is not None:
            return out


def three_torsion(C, classes, rng):
    """J(F_p)[3] from the enumeration.

    Candidates come from the library's scalar multiplication; each one is
    confirmed by 2D = -D with oracle additions, and the list is complete once
    its size equals the 3-part of the enumerated group order.
    """
    p = C.field.p
    h = [int(c) for c in C.h]
    pool = sorted(classes)
    out = []
    for D in pool:
        if len(D[0]) == 1:
            out.append(D)
        elif (C.jacobian_point(list(D[0]), list(D[1])) * 3).is_zero():
            neg = (D[0], tuple(oracles.trim(oracles.pneg(p, D[1]))))
            assert oracle_double(p, h, D, pool, rng) == neg
            out.append(D)
    n = len(classes)
    part = 1
    while n % 3 == 0:
        n //= 3
        part *= 3
    assert len(out) == part
    return out


@pytest.fixture(scope="session")
def toy_curve():
    return toy.curve()


@pytest.fixture(scope="session")
def toy_ext():
    return toy.ext()


@pytest.fixture(scope="session")
def toy_kernel(toy_curve):
    return toy.kernel_points(toy_curve)


@pytest.fixture(scope="session")
def toy_h():
    return oracles.from_roots(toy.P, toy.ROOTS)


@pytest.fixture(scope="session")
def toy_classes(toy_h):
    return oracles.enumerate_classes(toy.P, toy_h)


@pytest.fixture(scope="session")
def torsion_oracle(toy_curve, toy_ext, toy_h, toy_classes):
    """J[3] split as the rational part and the Frobenius-anti-invariant part.

    The second part is the rational 3-torsion of the quadratic twist
    d v^2 = h(u), moved to C over F_p^2 by u = U / d, v = sqrt(d) V / d^3.
    """
    p, C, L = toy.P, toy_curve, toy_ext
    rng = random.Random(3)
    rational = three_torsion(C, toy_classes, rng)
    d = oracles.least_nonresidue(p)
    H = oracles.from_roots(p, oracles.twist_roots(p, toy.ROOTS, d))
    twisted = three_torsion(Genus2Curve(C.field, H), oracles.enumerate_classes(p, H), rng)
    s = L.sqrt(L.from_int(d))
    di = pow(d, -1, p)
    minus = []
    for a, b in twisted:
        # a(d u) made monic, b(d u) * s / d^3
        n = len(a) - 1
        aC = [a[k] * pow(d, k, p) * pow(di, n, p) % p for k in range(len(a))]
        bC = [L.mul(s, L.from_int(b[k] * pow(d, k, p) * pow(di, 3, p))) for k in range(len(b))]
        minus.append(C.jacobian_point([L.from_int(c) for c in aC], bC, L))
    plus = [C.jacobian_point(list(a), list(b)).change_ring(L) for a, b in rational]
    return plus, minus


# ---------------------------------------------------------------------------
# the F_1009 example and command line runs


def run_cli(argv):
    """Run the command line in-process; returns (exit code, stdout text)."""
    import contextlib
    import io

    from isojac.cli import main

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


@pytest.fixture(scope="session")
def example_run():
    """Checkpoints and pipeline of the example with its published choices."""
    from isojac import example

    return example.reproduce()


@pytest.fixture(scope="session")
def example_files(tmp_path_factory):
    import json

    from isojac import example

    d = tmp_path_factory.mktemp("example")
    C = example.curve_c()
    g1, g2 = example.kernel_points(C)
    (d / "curve.json").write_text(json.dumps(C.to_json()))
    (d / "kernel.json").write_text(json.dumps({"l": 3, "gen1": g1.to_json(), "gen2": g2.to_json()}))
    return d


@pytest.fixture(scope="session")
def isogeny_runs(example_files):
    """Raw --out bytes of isogeny runs on the example, keyed by (seed, sign)."""
    os.environ.pop("ISOJAC_SEED", None)
    d = example_files
    out = {}
    for tag, seed, sign in (("a", 0, 1), ("b", 0, 1), ("c", 7, 1), ("d", 0, -1)):
        path = d / ("iso_%s.json" % tag)
        code, _ = run_cli(["--seed", str(seed), "--out", str(path), "isogeny",
                           "--curve", str(d / "curve.json"), "--kernel", str(d / "kernel.json"),
                           "--sign", str(sign)])
        assert code == 0
        out[tag] = path.read_bytes()
    return out


@pytest.fixture(scope="session")
def toy_pipeline(toy_kernel):
    from isojac.isogeny import Pipeline

    pipe = Pipeline(*toy_kernel, 3, seed=0)
    pipe.run()
    return pipe


# ---------------------------------------------------------------------------
# acceptance summary

_criteria = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1][len("test_criterion_"):]
        _criteria[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria):
        num, _, label = name.partition("_")
        terminalreporter.write_line("criterion %2d  %-28s %s" % (
            int(num), label.replace("_", " "), "PASS" if _criteria[name] == "passed" else "FAIL"))
