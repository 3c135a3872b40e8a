import json
import random

import pytest

from isojac import example
from isojac.algebra.rings import PrimeField
from isojac.curve import Genus2Curve
from isojac.errors import CharacteristicTooSmall, DivisorMeetsSupport, NotTwoPoints
from isojac.isogeny import Pipeline


def _docs(isogeny_runs):
    return {k: json.loads(v) for k, v in isogeny_runs.items()}


def test_same_seed_is_byte_identical(isogeny_runs):
    assert isogeny_runs["a"] == isogeny_runs["b"]


def test_other_seed_same_isogeny(isogeny_runs):
    a, c = _docs(isogeny_runs)["a"], _docs(isogeny_runs)["c"]
    for k in ("D", "S", "P", "Q", "M", "R", "T", "sign_flag"):
        assert a[k] == c[k]
    assert a["provenance"]["seed"] == 0 and c["provenance"]["seed"] == 7


def test_sign_flag_negates_r_t_m(isogeny_runs):
    docs = _docs(isogeny_runs)
    a, d = docs["a"], docs["d"]
    p = a["D"]["p"]
    for k in ("D", "S", "P", "Q"):
        assert a[k] == d[k]
    for k in ("R", "T"):
        assert a[k]["num"] == d[k]["num"] and a[k]["den"] == d[k]["den"]
        assert (int(a[k]["scalar"]) + int(d[k]["scalar"])) % p == 0
    assert [[(int(x) + int(y)) % p for x, y in zip(r, s)] for r, s in zip(a["M"], d["M"])] == [[0, 0], [0, 0]]
    assert (a["sign_flag"], d["sign_flag"]) == (1, -1)


def test_default_sign_convention(isogeny_runs):
    doc = _docs(isogeny_runs)["a"]
    assert int(doc["R"]["scalar"]) <= (doc["D"]["p"] - 1) // 2


def test_default_codomain_is_a_rescaling(isogeny_runs):
    """Without the published b the branch points differ from the example's by one scalar."""
    from isojac.algebra.poly import poly_roots

    doc = _docs(isogeny_runs)["a"]
    F = PrimeField(doc["D"]["p"])
    got = sorted(int(r) for r in poly_roots(F, [int(c) for c in doc["D"]["h"]]) if r)
    want = [r for r in example.ROOTS_D if r]
    scales = [s for s in range(1, F.p) if sorted(r * s % F.p for r in want) == got]
    assert len(scales) == 1


def test_example_degree_bounds(example_run):
    _, pipe = example_run
    desc = pipe.description
    desc.check_degree_bounds()
    degs = {k: f.degree() for k, f in desc.fractions.items()}
    assert degs["S"] <= 6 and degs["P"] <= 6 and degs["Q"] <= 18 and degs["R"] <= 15


def test_negated_description(example_run):
    _, pipe = example_run
    desc = pipe.description
    neg = desc.negated()
    neg.check_identities()
    rng = random.Random(70)
    C = desc.C
    for _ in range(5):
        x = C.random_jacobian_point(rng)
        try:
            assert neg.image(x) == -desc.image(x)
        except (NotTwoPoints, DivisorMeetsSupport):
            continue


def test_homomorphism_on_example_curve(example_run):
    _, pipe = example_run
    desc = pipe.description
    C = desc.C
    rng = random.Random(71)
    done = 0
    while done < 10:
        x, y = C.random_jacobian_point(rng), C.random_jacobian_point(rng)
        try:
            assert desc.image(x + y) == desc.image(x) + desc.image(y)
        except (NotTwoPoints, DivisorMeetsSupport):
            continue
        done += 1


def test_small_characteristic_is_rejected():
    F = PrimeField(31)
    C = Genus2Curve(F, [0, 4, 0, 0, 0, 1])
    g = C.random_jacobian_point(random.Random(0))
    with pytest.raises(CharacteristicTooSmall):
        Pipeline(g, g, 3).run()


def test_toy_isogeny_kills_kernel(toy_pipeline, toy_kernel):
    """End to end on F_131, where half of the kernel lives over F_131^2."""
    desc = toy_pipeline.description
    desc.check_degree_bounds()
    desc.check_identities()
    t1, t2 = toy_kernel
    assert desc.image(t1).is_zero()
    assert desc.image(t2).is_zero()
    assert desc.image(t1.change_ring(t2.ring) * 2 + t2).is_zero()


def test_toy_isogeny_is_a_homomorphism_over_extension(toy_pipeline, toy_curve, toy_ext):
    desc = toy_pipeline.description
    rng = random.Random(72)
    done = 0
    while done < 10:
        x, y = toy_curve.random_jacobian_point(rng, toy_ext), toy_curve.random_jacobian_point(rng, toy_ext)
        try:
            assert desc.image(x + y) == desc.image(x) + desc.image(y)
        except (NotTwoPoints, DivisorMeetsSupport):
            continue
        done += 1


def test_toy_isogeny_is_not_trivial(toy_pipeline, toy_curve):
    desc = toy_pipeline.description
    rng = random.Random(73)
    images = set()
    while len(images) < 3:
        x = toy_curve.random_jacobian_point(rng)
        try:
            images.add(desc.image(x).key())
        except (NotTwoPoints, DivisorMeetsSupport):
            continue
    assert len(images) == 3
