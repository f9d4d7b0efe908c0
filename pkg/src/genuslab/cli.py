"""Command-line front end: element parsing, dispatch, JSON reports.

Grammar, shared across all verbs:

  elements    rationals ``-3/7``; function-field expressions over t such
              as ``t^3 - 2*t + 1`` or ``t*(t-3)/(t+1)`` with a field tag
              ``Q(t)`` or ``Fp(5)``; quadratic elements ``1 + 2*w`` with
              a tag ``d=-5`` (``i`` is accepted for ``w`` when d = -1)
  places      ``p:5``, ``poly:t^2+1@Fp(3)``, ``inf@Q(t)``,
              ``qprime:(2,1+w)@d=-5``
  rings       ``Z``, ``Z[1/6]``, ``Q[t]``, ``F5[t]``, ``O(-5)``,
              ``O(-5)[1/2]``
  matrices    ``[[1,w],[0,1]]``; a bare element is a 1 x 1 matrix

Every run prints a report; ``--json`` switches to the full versioned
envelope {schema, verb, inputs, result, certificates, assumptions,
timing} and ``--stable`` drops the timing block so fixture files replay
byte-identically.  Exit codes: 0 success, 2 mathematical obstruction
(reported as a structured result, not a traceback), 1 parse or I/O
error.  The environment variable GENUSLAB_BUDGET scales all search
budgets; reports stay deterministic for a fixed value.
"""

import argparse
import json
import re
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

from .brauer import (
    CyclicAlgebra,
    hilbert_symbol,
    is_unramified,
    ramification_set,
    reduce_to_unit_rep,
)
from .class_sets import (
    CechCocycle,
    CechCover,
    CoordinateRing,
    cech_to_double_coset,
    class_set_gln,
    cocycle_from_json,
    diagram_check,
)
from .descent import (
    DescentCocycle,
    QuadGaloisRing,
    check_galois_ring_conditions,
    trivialize_cocycle,
)
from .divisors import pic_group, torus_h1, unit_group
from .errors import (
    GenusLabError,
    MathObstruction,
    ParseError,
    PicNontrivial,
)
from .fields import FunctionField, QuadField, RationalField
from .intarith import factor_integer
from .milnor import SymbolFamily, reduce_to_units
from .places import DivisorialSet, Place
from .poly import Poly
from .quadfield import QuadElem, QuadIdeal, quad_prime_splitting
from .ratfunc import RatFunc


# ---------------------------------------------------------------------------
# field tags


_FP_TAG = re.compile(r"^F(?:p\((\d+)\)|(\d+)\(t\))$")
_D_TAG = re.compile(r"^d=(-?\d+)$")


def parse_field(tag: str):
    """Field from its tag: Q, Q(t), Fp(5) (or F5(t)), d=-5."""
    tag = tag.strip()
    if tag == "Q":
        return RationalField()
    if tag == "Q(t)":
        return FunctionField(None)
    m = _FP_TAG.match(tag)
    if m:
        return FunctionField(int(m.group(1) or m.group(2)))
    m = _D_TAG.match(tag)
    if m:
        return QuadField(int(m.group(1)))
    raise ParseError(f"unrecognized field tag {tag!r}")


def _field_tag(K) -> str:
    if isinstance(K, RationalField):
        return "Q"
    if isinstance(K, FunctionField):
        return "Q(t)" if K.p is None else f"Fp({K.p})"
    return f"d={K.d}"


# ---------------------------------------------------------------------------
# element expressions


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z]+)|([-+*/^()]))")


def _tokenize(text: str):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:]
            if not rest.strip():
                break
            raise ParseError(
                "unexpected character", text, pos + len(rest) - len(rest.lstrip())
            )
        if m.group(1):
            out.append(("num", int(m.group(1)), m.start(1)))
        elif m.group(2):
            out.append(("name", m.group(2), m.start(2)))
        elif m.group(3):
            out.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    return out


def _variable(K, name: str, text: str, pos: int):
    if isinstance(K, FunctionField) and name == "t":
        return K.coerce(RatFunc.make(Poly.x(K.p)))
    if isinstance(K, QuadField):
        if name == "w" or (name == "i" and K.d == -1):
            return K.coerce(QuadElem.omega(K.d))
    raise ParseError(f"unknown symbol {name!r} over {K.label()}", text, pos)


class _ExprParser:
    """Elementary recursive descent over +, -, *, /, ^ and parentheses."""

    def __init__(self, text: str, K):
        self.text = text
        self.K = K
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.text, len(self.text))
        self.i += 1
        return tok

    def parse(self):
        val = self.expr()
        if self.i != len(self.toks):
            raise ParseError("trailing input", self.text, self.toks[self.i][2])
        return val

    def expr(self):
        tok = self.peek()
        if tok and tok[:2] == ("op", "-"):
            self.take()
            val = -self.term()
        else:
            val = self.term()
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] in "+-":
                self.take()
                rhs = self.term()
                val = val + rhs if tok[1] == "+" else val - rhs
            else:
                return val

    def term(self):
        val = self.power()
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] in "*/":
                self.take()
                rhs = self.power()
                if tok[1] == "*":
                    val = val * rhs
                else:
                    if rhs == self.K.zero():
                        raise ParseError("division by zero", self.text, tok[2])
                    val = val / rhs
            else:
                return val

    def power(self):
        val = self.atom()
        tok = self.peek()
        if tok and tok[:2] == ("op", "^"):
            self.take()
            sign = 1
            nxt = self.peek()
            if nxt and nxt[:2] == ("op", "-"):
                self.take()
                sign = -1
            nxt = self.take()
            if nxt[0] != "num":
                raise ParseError("exponent must be an integer", self.text, nxt[2])
            e = sign * nxt[1]
            if e < 0 and val == self.K.zero():
                raise ParseError("division by zero", self.text, nxt[2])
            return val ** e if e >= 0 else (self.K.one() / val) ** (-e)
        return val

    def atom(self):
        tok = self.take()
        kind, value, pos = tok
        if kind == "num":
            return self.K.coerce(Fraction(value))
        if kind == "name":
            return _variable(self.K, value, self.text, pos)
        if value == "(":
            val = self.expr()
            closing = self.take()
            if closing[:2] != ("op", ")"):
                raise ParseError("expected ')'", self.text, closing[2])
            return val
        if value == "-":
            return -self.atom()
        raise ParseError(f"unexpected {value!r}", self.text, pos)


def parse_element(text: str, K):
    """Parse an element of K; print/parse round trips to equality."""
    if "@" in text:
        body, tag = text.split("@", 1)
        tagged = parse_field(tag)
        if tagged != K and K is not None:
            raise ParseError(
                f"element tagged {tag.strip()!r} used over {K.label()}", text,
                text.index("@"),
            )
        K = tagged
        text = body
    if not text.strip():
        raise ParseError("empty element", text, 0)
    return _ExprParser(text, K).parse()


def _split_top(text: str, sep: str = ","):
    """Split at top level, ignoring separators inside (), []."""
    parts = []
    depth = 0
    cur = []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def parse_matrix(text: str, K):
    """[[a,b],[c,d]] with element entries; a bare element is 1 x 1."""
    s = text.strip()
    if not s.startswith("["):
        return ((parse_element(s, K),),)
    if not (s.startswith("[[") and s.endswith("]]")):
        raise ParseError("matrix literal must look like [[...],[...]]", text, 0)
    rows = []
    for row_text in _split_top(s[1:-1]):
        if not (row_text.startswith("[") and row_text.endswith("]")):
            raise ParseError("matrix row must be bracketed", text, 0)
        rows.append(
            tuple(parse_element(e, K) for e in _split_top(row_text[1:-1]))
        )
    if len({len(r) for r in rows}) != 1:
        raise ParseError("ragged matrix rows", text, 0)
    return tuple(rows)


# ---------------------------------------------------------------------------
# places and rings


def parse_place(text: str) -> Place:
    text = text.strip()
    if "@" in text:
        body, tag = (s.strip() for s in text.split("@", 1))
        K = parse_field(tag)
    else:
        body, K = text, None
    if body.startswith("p:"):
        return Place.rational(int(body[2:]))
    if body.startswith("poly:"):
        if not isinstance(K, FunctionField):
            raise ParseError("poly places need a tag Q(t) or Fp(p)", text, 0)
        f = parse_element(body[5:], K)
        if f.den != Poly.one(K.p):
            raise ParseError("place polynomial must have denominator 1", text, 0)
        return Place.finite_poly(f.num)
    if body == "inf":
        if not isinstance(K, FunctionField):
            raise ParseError(
                "only function fields carry a divisorial infinite place", text, 0
            )
        return Place.infinite(K.p)
    if body.startswith("qprime:"):
        if not isinstance(K, QuadField):
            raise ParseError("qprime places need a d=... tag", text, 0)
        inner = body[len("qprime:"):].strip()
        if not (inner.startswith("(") and inner.endswith(")")):
            raise ParseError("qprime expects (p, generator)", text, 0)
        gens = []
        for part in _split_top(inner[1:-1]):
            g = parse_element(part, K)
            if not g.is_integral():
                raise ParseError(f"ideal generator {part!r} is not integral", text, 0)
            gens.append(g)
        return Place.quadratic(QuadIdeal.from_generators(K.d, gens))
    raise ParseError(f"unrecognized place {text!r}")


_RING_Z = re.compile(r"^Z(?:\[1/(\d+)\])?$")
_RING_POLY = re.compile(r"^(?:Q|F(\d+))\[t\]$")
_RING_QUAD = re.compile(r"^O\((-?\d+)\)(?:\[1/(\d+)\])?$")


def _prime_factors(n: int):
    return tuple(p for p, _e in factor_integer(n))


def parse_ring(text: str) -> CoordinateRing:
    text = text.strip()
    m = _RING_Z.match(text)
    if m:
        invert = _prime_factors(int(m.group(1))) if m.group(1) else ()
        return CoordinateRing.integers(invert)
    m = _RING_POLY.match(text)
    if m:
        return CoordinateRing.poly_ring(int(m.group(1)) if m.group(1) else None)
    m = _RING_QUAD.match(text)
    if m:
        invert = _prime_factors(int(m.group(2))) if m.group(2) else ()
        return CoordinateRing.quad_order(int(m.group(1)), invert)
    raise ParseError(f"unrecognized ring {text!r}")


def _parse_excluded(text, K) -> tuple:
    """Comma list of places of K; bare tokens are integers (expanded to
    every place above, for quadratic K) or finite polynomials."""
    if not text:
        return ()
    out = []
    for token in _split_top(text):
        if ":" in token or "@" in token or token == "inf":
            P = parse_place(token)
            if P.field() != K:
                raise ParseError(f"place {token!r} lives over {P.field()}, not {K.label()}")
            out.append(P)
        elif isinstance(K, RationalField):
            out.append(Place.rational(int(token)))
        elif isinstance(K, QuadField):
            for P, _e, _f in quad_prime_splitting(int(token), K.d).primes:
                out.append(Place.quadratic(P))
        else:
            f = parse_element(token, K)
            if f.den != Poly.one(K.p):
                raise ParseError(f"place polynomial {token!r} must be integral")
            out.append(Place.finite_poly(f.num))
    return tuple(sorted(set(out), key=lambda P: P.sort_key()))


def _parse_int_list(text) -> tuple:
    if not text:
        return ()
    return tuple(int(tok) for tok in _split_top(str(text)))


# ---------------------------------------------------------------------------
# verb runners: each returns (result, certificates, assumptions, exit code)


def _cmd_brauer(args):
    if args.action == "ramify":
        K = parse_field(args.field)
        a = parse_element(args.a, K)
        b = parse_element(args.b, K)
        data = ramification_set(a, b)
        certs = [
            {"place": str(P), "hilbert": hilbert_symbol(a, b, P)}
            for P in data.finite
        ]
        result = {
            "finite": [str(P) for P in data.finite],
            "real": data.real,
            "count": data.count(),
            "split": data.is_split(),
        }
        return result, certs, [], 0

    m = _D_TAG.match(args.L.strip())
    if not m:
        raise ParseError(f"--L expects d=<int>, got {args.L!r}")
    K = RationalField()
    alg = CyclicAlgebra(K, int(m.group(1)), parse_element(args.c, K))
    res = reduce_to_unit_rep(alg)
    result = {"u": str(res.u), "d_value": str(res.d_value)}
    if args.exclude:
        V = DivisorialSet(K, excluded=_parse_excluded(args.exclude, K))
        ok, offending = is_unramified(alg, V)
        result["unramified_on_V"] = ok
        result["offending"] = [str(P) for P in offending]
    cert = {
        "norm_certificate": {
            "d": str(alg.radicand),
            "pi_w": [
                {"place": str(v), "generator": str(pi), "exponent": e}
                for v, pi, e in res.certificate
            ],
        }
    }
    return result, [cert], [], 0


def _cmd_pic(args):
    K = parse_field(args.field)
    S = _parse_excluded(args.exclude, K)
    result = {"pic": pic_group(K, S).to_json()}
    try:
        result["units"] = unit_group(K, S).to_json()
    except PicNontrivial as e:
        if args.verb == "units":
            raise  # asked for units directly: that IS the obstruction
        result["units"] = {"unavailable": str(e)}
    return result, [], [], 0


def _cmd_milnor(args):
    K = parse_field(args.field)
    V = DivisorialSet(K, excluded=_parse_excluded(args.exclude, K))
    fam = SymbolFamily(
        K,
        parse_element(args.a, K),
        tuple(parse_element(b, K) for b in args.b),
        tuple(parse_element(c, K) for c in args.c),
        V,
    )
    res = reduce_to_units(fam)
    log = res.to_json()
    result = {
        "initial_c": [str(c) for c in fam.cs],
        "final_c": log["final_c"],
        "condition_T_used_at": log["condition_T_used_at"],
    }
    assumptions = [f"condition T consumed at {v}" for v in res.condition_T_used_at]
    return result, log["steps"], assumptions, 0


def _cmd_classset(args):
    ring = parse_ring(args.ring)
    return class_set_gln(ring, args.n).to_json(), [], [], 0


def _build_cech_cocycle(args) -> CechCocycle:
    ring = parse_ring(args.ring)
    K = ring.field

    def parse(s):
        return parse_element(s, K)

    if args.fixture:
        data = json.loads(Path(args.fixture).read_text())
        return cocycle_from_json(ring, data, parse=parse)
    if not args.cover:
        raise ParseError("need --cover a,b,... or --fixture file.json")
    cover = CechCover.make(ring, [parse(s) for s in _split_top(args.cover)])
    entries = {}
    for (i, j), flag in (((0, 1), args.g12), ((0, 2), args.g13), ((1, 2), args.g23)):
        if flag is not None:
            entries[(i, j)] = parse_matrix(flag, K)
    return CechCocycle.make(cover, args.n, entries)


def _cmd_cech(args):
    cocycle = _build_cech_cocycle(args)
    if args.action == "push":
        adele = cech_to_double_coset(cocycle)
        return adele.to_json(), [cocycle.to_json()], [], 0
    report = diagram_check(cocycle)
    return report.to_json(), [cocycle.to_json()], [], 0


def _galois_ring(ring_text: str, d: int) -> QuadGaloisRing:
    base = parse_ring(ring_text)
    if not isinstance(base.field, RationalField):
        raise ParseError(f"--R expects Z or Z[1/N], got {ring_text!r}")
    return QuadGaloisRing(base, d)


def _cmd_descent(args):
    if args.action == "check":
        rep = check_galois_ring_conditions(_galois_ring(args.R, args.d))
        return rep.to_json(), [], [], 0
    ring = QuadGaloisRing.make(args.d, invert=_parse_int_list(args.S))
    rows = parse_matrix(args.xi, ring.field())
    t = trivialize_cocycle(DescentCocycle.make(ring, rows))
    data = t.to_json()
    result = {"cocycle": data["cocycle"], "c": data["c"]}
    return result, [{"c": data["c"], "c_inv": data["c_inv"]}], [], 0


def _cmd_torus(args):
    res = torus_h1(args.d, list(_parse_int_list(args.S)))
    return res.to_json(), [], [], 0


def _cmd_selftest(args):
    here = Path(__file__).resolve()
    candidates = [
        Path.cwd() / "tests" / "test_acceptance.py",
        here.parents[2] / "tests" / "test_acceptance.py",
    ]
    target = next((p for p in candidates if p.exists()), None)
    if target is None:
        raise ParseError("cannot locate tests/test_acceptance.py from here")
    code = subprocess.call(
        [sys.executable, "-m", "pytest", str(target), "-q"],
        cwd=str(target.parent.parent),
    )
    return {"pytest_exit": code}, [], [], 0 if code == 0 else 1


# ---------------------------------------------------------------------------
# argument plumbing


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; 2 is reserved for obstructions here
    def error(self, message):
        raise _UsageError(message)


def build_parser() -> _Parser:
    top = _Parser(prog="genuslab", description=__doc__.splitlines()[0])
    top.add_argument("--json", action="store_true", help="emit the full report envelope")
    top.add_argument(
        "--stable",
        action="store_true",
        help="omit timing so output replays byte-identically",
    )
    sub = top.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("brauer", help="quaternion ramification and unit representatives")
    ps = p.add_subparsers(dest="action", required=True)
    q = ps.add_parser("ramify")
    q.add_argument("--a", required=True)
    q.add_argument("--b", required=True)
    q.add_argument("--field", default="Q")
    q = ps.add_parser("reduce")
    q.add_argument("--L", required=True, help="splitting field tag, d=<int>")
    q.add_argument("--c", required=True)
    q.add_argument("--exclude", default="")

    for verb in ("pic", "units"):
        q = sub.add_parser(verb, help="Picard and unit data of S-integers")
        q.add_argument("--field", required=True)
        q.add_argument("--exclude", default="")

    p = sub.add_parser("milnor", help="symbol-family reduction to units")
    ps = p.add_subparsers(dest="action", required=True)
    q = ps.add_parser("reduce")
    q.add_argument("--a", required=True)
    q.add_argument("--b", action="append", required=True)
    q.add_argument("--c", action="append", required=True)
    q.add_argument("--field", default="Q(t)")
    q.add_argument("--exclude", default="")

    p = sub.add_parser("classset", help="class sets of rank-n lattices")
    ps = p.add_subparsers(dest="action", required=True)
    q = ps.add_parser("gln")
    q.add_argument("--ring", required=True)
    q.add_argument("--n", type=int, default=1)

    p = sub.add_parser("cech", help="principal-open cocycles")
    ps = p.add_subparsers(dest="action", required=True)
    for name in ("push", "diagram"):
        q = ps.add_parser(name)
        q.add_argument("--ring", default="Z")
        q.add_argument("--cover", default="")
        q.add_argument("--n", type=int, default=1)
        q.add_argument("--g12")
        q.add_argument("--g13")
        q.add_argument("--g23")
        q.add_argument("--fixture")

    p = sub.add_parser("descent", help="quadratic Galois descent")
    ps = p.add_subparsers(dest="action", required=True)
    q = ps.add_parser("check")
    q.add_argument("--R", required=True, help="base ring, Z or Z[1/N]")
    q.add_argument("--d", type=int, required=True)
    q = ps.add_parser("trivialize")
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--S", default="", help="comma list of inverted primes")
    q.add_argument("--xi", required=True, help="cocycle matrix, e.g. [[i]]")

    p = sub.add_parser("torus", help="norm-one torus H^1 over S-integers")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--S", default="")

    sub.add_parser("selftest", help="run the acceptance suite")
    return top


_RUNNERS = {
    "brauer": _cmd_brauer,
    "pic": _cmd_pic,
    "units": _cmd_pic,
    "milnor": _cmd_milnor,
    "classset": _cmd_classset,
    "cech": _cmd_cech,
    "descent": _cmd_descent,
    "torus": _cmd_torus,
    "selftest": _cmd_selftest,
}

_SKIP_ECHO = {"verb", "action", "json", "stable"}


def _echo_inputs(args) -> dict:
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in _SKIP_ECHO or value in (None, "", False):
            continue
        if isinstance(value, list):
            out[key] = [str(v) for v in value]
        else:
            out[key] = str(value)
    return out


def _obstruction_payload(e: MathObstruction) -> dict:
    payload = {"kind": type(e).__name__, "message": str(e)}
    for attr in ("steinitz", "ideal_class", "place", "offending", "group", "residue"):
        value = getattr(e, attr, None)
        if value is not None:
            payload[attr] = str(value)
    return payload


def run_report(argv=None) -> int:
    """Parse argv, dispatch, print a report; return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    started = time.perf_counter()
    try:
        result, certificates, assumptions, code = _RUNNERS[args.verb](args)
    except MathObstruction as e:
        result = {"obstruction": _obstruction_payload(e)}
        certificates, assumptions, code = [], [], 2
    except (GenusLabError, OSError, ValueError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    report = {
        "schema": 1,
        "verb": args.verb,
        "inputs": _echo_inputs(args),
        "result": result,
        "certificates": certificates,
        "assumptions": assumptions,
    }
    action = getattr(args, "action", None)
    if action:
        report["subcommand"] = action
    if not args.stable:
        report["timing"] = {"seconds": round(time.perf_counter() - started, 6)}
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        head = args.verb + (f" {action}" if action else "")
        status = "obstruction" if "obstruction" in result else "ok"
        print(f"{head}: {status}")
        print(json.dumps(result, indent=2, sort_keys=True))
        for line in assumptions:
            print(f"assumption: {line}")
    return code


def main(argv=None):
    sys.exit(run_report(argv))


if __name__ == "__main__":
    main()
