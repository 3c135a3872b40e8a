"""Command line front end.

Inputs are JSON, given inline or as a path to a file.  A curve is
``{"p": 1009, "h": [...]}`` with ascending coefficients.  A Jacobian point is
``{"a": [...], "b": [...]}``, the Mumford pair of its reduced divisor.  Points
over F_p^d carry ``"modulus"`` (a monic irreducible polynomial over F_p);
their coefficients are then lists of d integers.  A cycle is a list of
``{"e": int, "point": point}`` and a kernel file is
``{"l": 3, "gen1": point, "gen2": point}`` (``"modulus"`` allowed at top level).

Human-readable text goes to stdout, the machine document only to ``--out``.
Exit codes: 0 success, 2 point on a divisor, 3 malformed input, 4 bad kernel,
5 pipeline failure, 6 checkpoint mismatch, 1 anything else.
"""

import argparse
import json
import logging
import os
import random
import sys
import time

from . import example
from .algebra.poly import is_irreducible
from .algebra.rings import FIELD_EXTENSION, PrimeField, QuotientAlgebra
from .curve import Genus2Curve, ZeroCycle
from .errors import IsojacError, MalformedInput
from .eta import RETRIES, EtaFunction, eta, eta_eval, joint_ring
from .isogeny import Pipeline
from .quotient import EtaX, build_kernel, build_phi
from .theta import ThetaFunction, pairing

log = logging.getLogger("isojac")

EXIT_MISMATCH = 6


# ---------------------------------------------------------------------------
# input documents


def load_json(text, what):
    """Parse inline JSON, or read it from a file when ``text`` names one."""
    if text is None:
        raise MalformedInput("missing --%s" % what)
    if os.path.isfile(text):
        with open(text) as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput("--%s is not valid JSON: %s" % (what, exc)) from exc


def _int(value):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise MalformedInput("expected an integer, got %r" % (value,))
    try:
        return int(value)
    except ValueError as exc:
        raise MalformedInput("expected an integer, got %r" % (value,)) from exc


def ring_for(curve, doc):
    """F_p, or the extension named by ``doc["modulus"]``."""
    K = curve.field
    if not isinstance(doc, dict) or "modulus" not in doc:
        return K
    mod = doc["modulus"]
    if not isinstance(mod, list):
        raise MalformedInput("modulus must be a coefficient list")
    mod = [K.from_int(_int(c)) for c in mod]
    if len(mod) < 3 or mod[-1] != K.one or not is_irreducible(K, mod):
        raise MalformedInput("modulus must be monic irreducible of degree >= 2")
    return QuotientAlgebra(K, mod, FIELD_EXTENSION)


def element(R, value):
    if isinstance(R, PrimeField):
        return R.from_int(_int(value))
    if not isinstance(value, list):
        return R.from_int(_int(value))
    if len(value) > R.degree:
        raise MalformedInput("too many coefficients for an element of degree %d" % R.degree)
    return R.from_coeffs([R.base.from_int(_int(c)) for c in value])


def parse_curve(doc):
    if not isinstance(doc, dict):
        raise MalformedInput("a curve is an object {p, h}")
    return Genus2Curve.from_json(doc)


def parse_point(C, doc, R=None):
    if not isinstance(doc, dict) or not isinstance(doc.get("a"), list) or not isinstance(doc.get("b"), list):
        raise MalformedInput("a point is an object {a, b} of coefficient lists")
    R = R or ring_for(C, doc)
    return C.jacobian_point([element(R, c) for c in doc["a"]],
                            [element(R, c) for c in doc["b"]], R)


def parse_cycle(C, doc, R=None):
    if not isinstance(doc, list) or not doc:
        raise MalformedInput("a cycle is a nonempty list of {e, point}")
    terms = []
    for t in doc:
        if not isinstance(t, dict) or "e" not in t or "point" not in t:
            raise MalformedInput("cycle terms are objects {e, point}")
        terms.append((_int(t["e"]), parse_point(C, t["point"], R)))
    return ZeroCycle(terms)


def parse_kernel(C, doc):
    if not isinstance(doc, dict) or not {"l", "gen1", "gen2"} <= set(doc):
        raise MalformedInput("a kernel is an object {l, gen1, gen2}")
    l = _int(doc["l"])
    if l < 3 or l % 2 == 0:
        raise MalformedInput("l must be an odd prime")
    R = ring_for(C, doc)
    g1 = parse_point(C, doc["gen1"], R if "modulus" in doc else None)
    g2 = parse_point(C, doc["gen2"], R if "modulus" in doc else None)
    return l, g1, g2


# ---------------------------------------------------------------------------
# subcommands


def cmd_eval_eta(args, seed):
    C = parse_curve(load_json(args.curve, "curve"))
    cycle = parse_cycle(C, load_json(args.cycle, "cycle"))
    x = parse_point(C, load_json(args.x, "x"))
    y = parse_point(C, load_json(args.y, "y"))
    rng = random.Random(seed)
    if not args.fast:
        route, value = "slow", eta_eval(cycle, y, x, rng)
    elif args.no_fallback:
        f = EtaFunction(cycle, x.curve.zero(x.ring), retries=RETRIES)
        route, value = "fast", f(x, y)
    else:
        route, value = "fast+fallback", eta(cycle, y, x, rng)
    return {"value": x.ring.to_json(value), "route": route}


def cmd_eval_theta(args, seed):
    C = parse_curve(load_json(args.curve, "curve"))
    u = parse_point(C, load_json(args.u, "u"))
    x = parse_point(C, load_json(args.x, "x"))
    th = ThetaFunction(u, args.l)
    value = th(x, random.Random(seed))
    return {"value": joint_ring(x.ring, u.ring).to_json(value)}


def cmd_eval_quotient(args, seed):
    C = parse_curve(load_json(args.curve, "curve"))
    l, g1, g2 = parse_kernel(C, load_json(args.kernel, "kernel"))
    cycle = parse_cycle(C, load_json(args.cycle, "cycle"))
    x = parse_point(C, load_json(args.x, "x"))
    y = parse_point(C, load_json(args.y, "y"))
    rng = random.Random(seed)
    phi = build_phi(build_kernel(g1, g2, l, rng), rng)
    value = EtaX(cycle, y, phi)(x)
    return {"value": x.ring.to_json(value)}


def cmd_pairing(args, seed):
    C = parse_curve(load_json(args.curve, "curve"))
    u = parse_point(C, load_json(args.u, "u"))
    v = parse_point(C, load_json(args.v, "v"))
    e = pairing(u, v, args.l, random.Random(seed))
    return {"value": joint_ring(u.ring, v.ring).to_json(e)}


def cmd_isogeny(args, seed):
    C = parse_curve(load_json(args.curve, "curve"))
    l, g1, g2 = parse_kernel(C, load_json(args.kernel, "kernel"))
    options = {"sign": args.sign, "pairs": args.pairs}
    if args.N is not None:
        options["N"] = args.N
    if args.base_point:
        options["b"] = parse_point(C, load_json(args.base_point, "base-point"))
    if args.formal_point:
        uv = load_json(args.formal_point, "formal-point")
        if not isinstance(uv, list) or len(uv) != 2:
            raise MalformedInput("--formal-point is a pair [u, v]")
        options["P0"] = C.point(_int(uv[0]), _int(uv[1]))
    pipe = Pipeline(g1, g2, l, seed, **options)
    try:
        desc = pipe.run()
    except IsojacError as exc:
        exc.stage = pipe.stage
        raise
    if args.emit_intermediates:
        os.makedirs(args.emit_intermediates, exist_ok=True)
        for name, doc in pipe.intermediates().items():
            with open(os.path.join(args.emit_intermediates, name + ".json"), "w") as fh:
                json.dump(doc, fh, indent=1, sort_keys=True)
                fh.write("\n")
    return desc.to_json()


def _show_isogeny(doc):
    lines = ["D: h = %s" % doc["D"]["h"], "M: %s" % doc["M"]]
    for k in "SPQRT":
        f = doc[k]
        lines.append("%s: %s * %s / %s" % (k, f["scalar"], f["num"], f["den"]))
    lines.append("sign flag: %d" % doc["sign_flag"])
    return "\n".join(lines)


def cmd_reproduce(args, seed):
    checks, _ = example.reproduce(seed, args.inject_fault)
    doc = {"checkpoints": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in checks]}
    doc["passed"] = all(c.ok for c in checks)
    first = next((c.name for c in checks if not c.ok), None)
    doc["first_failure"] = first
    return doc


def _show_reproduce(doc):
    width = max(len(c["name"]) for c in doc["checkpoints"])
    rows = ["%-*s  %s  %s" % (width, c["name"], "PASS" if c["ok"] else "FAIL", c["detail"])
            for c in doc["checkpoints"]]
    if doc["first_failure"]:
        rows.append("first divergent checkpoint: %s" % doc["first_failure"])
    return "\n".join(rows)


COMMANDS = {
    "eval-eta": (cmd_eval_eta, None),
    "eval-theta": (cmd_eval_theta, None),
    "eval-quotient": (cmd_eval_quotient, None),
    "pairing": (cmd_pairing, None),
    "isogeny": (cmd_isogeny, _show_isogeny),
    "reproduce-paper-example": (cmd_reproduce, _show_reproduce),
}


def build_parser():
    ap = argparse.ArgumentParser(prog="isojac", description=__doc__.split("\n\n")[0])
    ap.add_argument("--seed", type=int, default=0,
                    help="seed of every random choice (ISOJAC_SEED takes precedence)")
    ap.add_argument("--out", help="write the machine-readable JSON result here")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval-eta", help="eta[cycle, y](x)")
    p.add_argument("--curve", required=True)
    p.add_argument("--cycle", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--fast", action="store_true", help="Miller-style route, slow route as fallback")
    p.add_argument("--no-fallback", action="store_true", help="with --fast, fail instead of falling back")

    p = sub.add_parser("eval-theta", help="theta_u(x) for an l-torsion u")
    p.add_argument("--curve", required=True)
    p.add_argument("--u", required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--x", required=True)

    p = sub.add_parser("eval-quotient", help="eta_X[cycle, y](x) for the kernel's descent")
    p.add_argument("--curve", required=True)
    p.add_argument("--kernel", required=True)
    p.add_argument("--cycle", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)

    p = sub.add_parser("pairing", help="commutator pairing e_l(u, v)")
    p.add_argument("--curve", required=True)
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--l", type=int, required=True)

    p = sub.add_parser("isogeny", help="the (l,l)-isogeny with the given kernel")
    p.add_argument("--curve", required=True)
    p.add_argument("--kernel", required=True)
    p.add_argument("--sign", type=int, choices=(1, -1), default=1)
    p.add_argument("--N", type=int, help="series accuracy (default 8l + 10)")
    p.add_argument("--pairs", type=int, default=8, help="X-point pairs for the restriction fit")
    p.add_argument("--base-point", help="normalization point b of the descended functions")
    p.add_argument("--formal-point", help="center [u, v] of the formal arc")
    p.add_argument("--emit-intermediates", metavar="DIR")

    p = sub.add_parser("reproduce-paper-example", help="rerun the F_1009 example and diff checkpoints")
    p.add_argument("--inject-fault", choices=example.FAULTS, metavar="STAGE",
                   help="corrupt one stage (one of %s)" % ", ".join(example.FAULTS))
    return ap


def resolve_seed(args):
    env = os.environ.get("ISOJAC_SEED")
    if env is None:
        return args.seed
    try:
        return int(env, 0)
    except ValueError as exc:
        raise MalformedInput("ISOJAC_SEED is not an integer: %r" % env) from exc


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(message)s")
    func, show = COMMANDS[args.command]
    start = time.perf_counter()
    try:
        seed = resolve_seed(args)
        log.info("%s with seed %d", args.command, seed)
        doc = func(args, seed)
    except IsojacError as exc:
        stage = getattr(exc, "stage", None)
        where = " in stage %r" % stage if stage else ""
        print("error%s: %s: %s" % (where, type(exc).__name__, exc), file=sys.stderr)
        return exc.exit_code
    except Exception as exc:  # no tracebacks for users
        print("internal error: %s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        log.debug("traceback", exc_info=True)
        return 1
    elapsed = time.perf_counter() - start
    if isinstance(doc, dict) and args.command != "isogeny":
        doc["seed"] = seed
    print(show(doc) if show else "value: %s" % json.dumps(doc["value"]))
    print("time: %.3f s" % elapsed)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(doc, fh, indent=1, sort_keys=True)
            fh.write("\n")
    if args.command == "reproduce-paper-example" and not doc["passed"]:
        return EXIT_MISMATCH
    return 0


if __name__ == "__main__":
    sys.exit(main())
