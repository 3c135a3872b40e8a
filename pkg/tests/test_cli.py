import json
import random
import subprocess
import sys

import pytest

from isojac import example
from isojac.curve import ZeroCycle
from isojac.eta import eta

from conftest import run_cli

CURVE = json.dumps(example.curve_c().to_json())


@pytest.fixture(autouse=True)
def _no_env_seed(monkeypatch):
    monkeypatch.delenv("ISOJAC_SEED", raising=False)


def _pt(x):
    return json.dumps(x.to_json())


def _cycle(C, rng):
    return ZeroCycle([(e, C.random_jacobian_point(rng)) for e in (2, -1, 3)])


def test_eta_at_base_point_is_one(tmp_path):
    C = example.curve_c()
    rng = random.Random(1)
    cyc = _cycle(C, rng)
    x = C.random_jacobian_point(rng)
    out = tmp_path / "v.json"
    for route in ([], ["--fast"]):
        code, text = run_cli(["--out", str(out), "eval-eta", "--curve", CURVE,
                              "--cycle", json.dumps(cyc.to_json()), "--x", _pt(x), "--y", _pt(x)] + route)
        assert code == 0
        assert "value: \"1\"" in text and "time:" in text
        assert json.loads(out.read_text())["value"] == "1"


def test_eta_routes_agree():
    C = example.curve_c()
    rng = random.Random(2)
    cyc = _cycle(C, rng)
    x, y = C.random_jacobian_point(rng), C.random_jacobian_point(rng)
    want = '"%d"' % eta(cyc, y, x)
    args = ["eval-eta", "--curve", CURVE, "--cycle", json.dumps(cyc.to_json()), "--x", _pt(x), "--y", _pt(y)]
    for extra in ([], ["--fast"], ["--fast", "--no-fallback"]):
        code, text = run_cli(args + extra)
        assert code == 0 and want in text


def test_input_from_file(tmp_path):
    C = example.curve_c()
    (tmp_path / "c.json").write_text(CURVE)
    T1, T2 = example.kernel_points(C)
    code, text = run_cli(["pairing", "--curve", str(tmp_path / "c.json"), "--u", _pt(T1), "--v", _pt(T2),
                          "--l", "3"])
    assert code == 0 and 'value: "1"' in text


def test_theta_value():
    C = example.curve_c()
    T1, _ = example.kernel_points(C)
    x = C.random_jacobian_point(random.Random(3))
    code, text = run_cli(["eval-theta", "--curve", CURVE, "--u", _pt(T1), "--l", "3", "--x", _pt(x)])
    assert code == 0 and text.startswith("value:")


@pytest.mark.parametrize("argv", [
    ["eval-eta", "--curve", "{not json", "--cycle", "[]", "--x", "{}", "--y", "{}"],
    ["eval-eta", "--curve", '{"p": 1009, "h": [0, 0, 0, 0, 0, 1]}', "--cycle", "[]", "--x", "{}", "--y", "{}"],
    ["eval-eta", "--curve", '{"p": 1008, "h": [1, 0, 0, 0, 0, 1]}', "--cycle", "[]", "--x", "{}", "--y", "{}"],
    ["pairing", "--curve", CURVE, "--u", '{"a": [1, 2, 1], "b": [5, 7]}', "--v", '{"a": [1], "b": []}', "--l", "3"],
    ["pairing", "--curve", CURVE, "--u", '{"a": "x"}', "--v", "{}", "--l", "3"],
])
def test_malformed_input_exits_3(argv, capsys):
    code, _ = run_cli(argv)
    assert code == 3
    assert "error" in capsys.readouterr().err


def test_bad_env_seed(monkeypatch):
    monkeypatch.setenv("ISOJAC_SEED", "twelve")
    code, _ = run_cli(["eval-eta", "--curve", CURVE, "--cycle", "[]", "--x", "{}", "--y", "{}"])
    assert code == 3


def test_on_divisor_exits_2():
    C = example.curve_c()
    rng = random.Random(4)
    u = C.random_jacobian_point(rng)
    x = u + C.random_point(rng).to_jacobian()
    cyc = json.dumps(ZeroCycle([(2, u)]).to_json())
    code, _ = run_cli(["eval-eta", "--curve", CURVE, "--cycle", cyc, "--x", _pt(x),
                       "--y", _pt(C.random_jacobian_point(rng))])
    assert code == 2


def test_non_torsion_kernel_exits_4(example_files, capsys):
    C = example.curve_c()
    T1, _ = example.kernel_points(C)
    bad = C.random_jacobian_point(random.Random(5))
    kernel = json.dumps({"l": 3, "gen1": T1.to_json(), "gen2": bad.to_json()})
    code, _ = run_cli(["isogeny", "--curve", str(example_files / "curve.json"), "--kernel", kernel])
    assert code == 4
    err = capsys.readouterr().err
    assert "NotTorsion" in err and "'kernel'" in err


def test_non_isotropic_kernel_exits_4(toy_curve, toy_ext, torsion_oracle, capsys):
    """A tampered kernel: one rational and one anti-invariant 3-torsion point that pair nontrivially."""
    from isojac.theta import pairing

    plus, minus = torsion_oracle
    p1 = next(x for x in plus if not x.is_zero())
    m1 = next(x for x in minus if pairing(p1, x, 3) != toy_ext.one)
    kernel = {"l": 3, "modulus": [int(c) for c in toy_ext.modulus],
              "gen1": p1.to_json(), "gen2": m1.to_json()}
    code, _ = run_cli(["isogeny", "--curve", json.dumps(toy_curve.to_json()), "--kernel", json.dumps(kernel)])
    assert code == 4
    assert "NotIsotropic" in capsys.readouterr().err


def test_extension_point_input(toy_curve, toy_kernel, toy_ext):
    t1, t2 = toy_kernel
    doc = dict(t2.to_json(), modulus=[int(c) for c in toy_ext.modulus])
    code, text = run_cli(["pairing", "--curve", json.dumps(toy_curve.to_json()), "--u", _pt(t1),
                          "--v", json.dumps(doc), "--l", "3"])
    assert code == 0 and 'value: ["1", "0"]' in text


def test_isogeny_with_published_choices(example_files, tmp_path):
    """The example's b and formal point give the published outputs literally."""
    b = _pt(example.base_point())
    out = tmp_path / "iso.json"
    code, _ = run_cli(["--out", str(out), "isogeny", "--curve", str(example_files / "curve.json"),
                       "--kernel", str(example_files / "kernel.json"), "--base-point", b,
                       "--formal-point", "[832, 361]", "--emit-intermediates", str(tmp_path / "dump")])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["M"] == [["186", "864"], ["853", "640"]]
    for name, (scalar, num, den) in example.FRACTIONS.items():
        assert doc[name] == {"scalar": str(scalar), "num": [str(c) for c in num], "den": [str(c) for c in den]}
    got = sorted(p.name for p in (tmp_path / "dump").iterdir())
    assert got == ["b.json", "branch.json", "conic.json", "formal_image.json", "kummer.json",
                   "restriction.json"]


def test_reproduce_clean():
    code, text = run_cli(["reproduce-paper-example"])
    assert code == 0
    assert text.count("PASS") == len(example.STAGES)
    assert "time:" in text


@pytest.mark.parametrize("stage", example.FAULTS)
def test_injected_fault_is_located(stage, tmp_path):
    out = tmp_path / "r.json"
    code, text = run_cli(["--out", str(out), "reproduce-paper-example", "--inject-fault", stage])
    assert code == 6
    doc = json.loads(out.read_text())
    assert doc["first_failure"] == stage
    assert "first divergent checkpoint: %s" % stage in text
    # everything before the fault still passes
    names = [c["name"] for c in doc["checkpoints"]]
    assert all(c["ok"] for c in doc["checkpoints"][:names.index(stage)])


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "isojac", "--help"], capture_output=True, text=True)
    assert r.returncode == 0
    assert "reproduce-paper-example" in r.stdout
