"""Command line front end.

    cosetva build DESCRIPTOR [-o HANDLE]
    cosetva verify SUITE HANDLE [--window W]
    cosetva character HANDLE --max-degree N [--coset]
    cosetva product HANDLE --u VEC --v VEC --mode N [--coset]
    cosetva export HANDLE [--what omega|manifest]

Descriptors and handles are JSON files, or ``-`` for stdin.  Reports go to
stdout as JSON.  Exit status is 0 on pass, 1 on an identity violation and 2
on an input error.  COSETVA_WORKERS sets the number of worker processes.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

import jsonschema

from .affvoa import GENERATORS, AffineVOA, simple_quotient
from .coset import (
    CosetAlgebra,
    CosetView,
    LatticeEmbedding,
    OmegaQuotient,
    ShiftLattice,
    SigmaFamily,
    check_deformation,
    check_ideal_closure,
    check_quotient_jacobi,
    check_reconstruction,
    check_section_round_trip,
    check_sigma_suite,
    check_z_relation,
    commutant_check,
    coset_virasoro,
    export_omega,
    psi_embed_check,
)
from .exactnum import ELL, RatFunc, ScalarError, format_scalar, parse_exponent, parse_level, parse_scalar
from .heis import HeisenbergSpace
from .latvoa import Lattice, LatticeVOA
from .linalg import axpy
from .voacore import (
    AlgebraHandle,
    CheckReport,
    PlainView,
    TruncationError,
    _vec_json,
    check_jacobi,
    check_skew_symmetry,
    check_virasoro,
    check_weak_associativity,
    check_weak_commutativity,
    sweep,
)

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
DEFAULT_TRUNCATION = 6

SUITES = ("jacobi", "commutativity", "associativity", "skew", "virasoro", "zalgebra", "coset-jacobi", "quotient",
          "psi-embed", "commutant", "sigma", "deformation", "reconstruction")

_SCALAR = {"anyOf": [{"type": "string"}, {"type": "integer"}]}
_MATRIX = {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1, "items": _SCALAR}}
_TRUNC = {"type": "integer", "minimum": 0, "maximum": 40}

SCHEMAS = {
    "heisenberg": {
        "type": "object",
        "properties": {"type": {"const": "heisenberg"}, "d": {"type": "integer", "minimum": 1, "maximum": 8},
                       "gram": _MATRIX, "level": _SCALAR, "truncation": _TRUNC},
        "required": ["type", "level"],
        "additionalProperties": False,
    },
    "lattice": {
        "type": "object",
        "properties": {"type": {"const": "lattice"}, "gram": _MATRIX, "truncation": _TRUNC,
                       "offset": {"type": "array", "items": _SCALAR}},
        "required": ["type", "gram"],
        "additionalProperties": False,
    },
    "affine-sl2": {
        "type": "object",
        "properties": {"type": {"const": "affine-sl2"}, "level": _SCALAR, "quotient": {"type": "boolean"},
                       "truncation": _TRUNC, "top": {"type": "integer", "minimum": 0}},
        "required": ["type", "level"],
        "additionalProperties": False,
    },
}

HANDLE_SCHEMA = {
    "type": "object",
    "properties": {"kind": {"type": "string"}, "descriptor": {"type": "object"}, "rank": {"type": "string"},
                   "manifest": {"type": "array"}},
    "required": ["kind", "descriptor"],
    "additionalProperties": False,
}

VECTOR_SCHEMA = {
    "type": "array",
    "items": {
        "type": "object",
        "properties": {
            "coeff": _SCALAR,
            "charge": {"type": "array", "items": _SCALAR},
            "modes": {"type": "array",
                      "items": {"type": "array", "prefixItems": [_SCALAR, {"type": "integer"}], "minItems": 2,
                                "maxItems": 2}},
        },
        "additionalProperties": False,
    },
}


class InputError(Exception):
    """Bad descriptor, handle or parameter; reported with exit status 2."""


# ---------------------------------------------------------------------------
# JSON with line numbers

def _line(text: str, idx: int) -> int:
    return text.count("\n", 0, idx) + 1


def _skip_ws(text: str, idx: int) -> int:
    while idx < len(text) and text[idx] in " \t\r\n":
        idx += 1
    return idx


def _locate(text: str, path: Sequence) -> int:
    """Line of the value at ``path`` inside the JSON document ``text``."""
    dec = json.JSONDecoder()
    idx = _skip_ws(text, 0)
    for step in path:
        if idx >= len(text):
            break
        if text[idx] == "{":
            idx = _skip_ws(text, idx + 1)
            found = False
            while idx < len(text) and text[idx] != "}":
                key, idx = dec.raw_decode(text, idx)
                idx = _skip_ws(text, idx)
                idx = _skip_ws(text, idx + 1)  # past ':'
                if key == step:
                    found = True
                    break
                _, idx = dec.raw_decode(text, idx)
                idx = _skip_ws(text, idx)
                if idx < len(text) and text[idx] == ",":
                    idx = _skip_ws(text, idx + 1)
            if not found:
                break
        elif text[idx] == "[":
            idx = _skip_ws(text, idx + 1)
            for _ in range(int(step)):
                _, idx = dec.raw_decode(text, idx)
                idx = _skip_ws(text, idx)
                idx = _skip_ws(text, idx + 1)  # past ','
        else:
            break
    return _line(text, idx)


class Source:
    """A JSON document together with its name and raw text."""

    def __init__(self, name: str, text: str):
        self.name = name
        self.text = text
        try:
            self.data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"{name}:{exc.lineno}: invalid JSON: {exc.msg}") from None

    def error(self, path: Sequence, msg: str) -> InputError:
        return InputError(f"{self.name}:{_locate(self.text, list(path))}: {msg}")

    def validate(self, schema: dict, prefix: Sequence = ()):
        data = self.data
        for p in prefix:
            data = data[p]
        errors = sorted(jsonschema.Draft202012Validator(schema).iter_errors(data), key=lambda e: list(e.path))
        if errors:
            e = errors[0]
            path = list(prefix) + list(e.path)
            if e.validator == "additionalProperties":
                extra = sorted(set(e.instance) - set(e.schema.get("properties", {})))
                path += extra[:1]
            raise self.error(path, f"schema error: {e.message}")


def read_source(path: str) -> Source:
    if path == "-":
        return Source("<stdin>", sys.stdin.read())
    try:
        with open(path, encoding="utf-8") as fh:
            return Source(path, fh.read())
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def parse_json_arg(text: str, name: str, schema: dict | None = None):
    src = Source(name, text)
    if schema is not None:
        src.validate(schema)
    return src.data


# ---------------------------------------------------------------------------
# building

def _scalar(x):
    return Fraction(x) if isinstance(x, int) else parse_scalar(x)


def _level(src: Source, prefix, raw, scalars: str):
    if scalars == "formal":
        if raw not in ("formal", None):
            raise src.error(list(prefix) + ["level"], "--scalars formal needs \"level\": \"formal\"")
        return ELL
    if raw == "formal":
        raise src.error(list(prefix) + ["level"], "a formal level needs --scalars formal")
    try:
        return parse_level(str(raw))
    except (ScalarError, ValueError, ZeroDivisionError) as exc:
        raise src.error(list(prefix) + ["level"], str(exc)) from None


def build_from_source(src: Source, truncation: int | None = None, scalars: str = "rational"):
    """(algebra, module, normalized descriptor) from a descriptor or a handle document."""
    data = src.data
    prefix: list = []
    if isinstance(data, dict) and "kind" in data:
        src.validate(HANDLE_SCHEMA)
        prefix = ["descriptor"]
        data = data["descriptor"]
    if not isinstance(data, dict) or data.get("type") not in SCHEMAS:
        raise src.error(prefix + (["type"] if isinstance(data, dict) and "type" in data else []),
                        f"schema error: type must be one of {sorted(SCHEMAS)}")
    src.validate(SCHEMAS[data["type"]], prefix)
    N = truncation if truncation is not None else data.get("truncation", DEFAULT_TRUNCATION)
    kind = data["type"]
    desc = dict(data)
    desc["truncation"] = N
    try:
        if kind == "heisenberg":
            ell = _level(src, prefix, data.get("level"), scalars)
            if "gram" in data:
                gram = [[_scalar(x) for x in row] for row in data["gram"]]
                if "d" in data and data["d"] != len(gram):
                    raise src.error(prefix + ["d"], "d disagrees with the gram matrix")
            else:
                d = data.get("d", 1)
                gram = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
            try:
                V = HeisenbergSpace(gram, ell, N)
            except (ScalarError, ValueError, ZeroDivisionError) as exc:
                raise src.error(prefix + ["gram"], str(exc)) from None
            return V, V, desc
        if kind == "lattice":
            if scalars == "formal":
                raise src.error(prefix + ["type"], "lattice algebras have level 1; --scalars formal does not apply")
            gram = [[_scalar(x) for x in row] for row in data["gram"]]
            try:
                V = LatticeVOA(Lattice(gram), N)
            except (ScalarError, ValueError, ZeroDivisionError) as exc:
                raise src.error(prefix + ["gram"], str(exc)) from None
            W = V
            if "offset" in data:
                off = tuple(_scalar(x) for x in data["offset"])
                if len(off) != V.hdim:
                    raise src.error(prefix + ["offset"], "offset has the wrong number of coordinates")
                W = V.module(off)
            return V, W, desc
        ell = _level(src, prefix, data.get("level"), scalars)
        if data.get("quotient"):
            try:
                V = simple_quotient(ell, N)
            except ScalarError as exc:
                raise src.error(prefix + ["level"], str(exc)) from None
            if data.get("top"):
                raise src.error(prefix + ["top"], "modules of the simple quotient are not supported")
            return V, V, desc
        try:
            V = AffineVOA(ell, N)
        except (ScalarError, ValueError) as exc:
            raise src.error(prefix + ["level"], str(exc)) from None
        W = V.module(data["top"]) if data.get("top") else V
        return V, W, desc
    except ValueError as exc:
        raise src.error(prefix, str(exc)) from None


def make_handle(V, desc) -> AlgebraHandle:
    return AlgebraHandle(desc["type"], V, desc)


# ---------------------------------------------------------------------------
# vectors

def _generator_index(V, name):
    if isinstance(V, AffineVOA) or hasattr(V, "M"):
        if name in GENERATORS:
            return ("g", GENERATORS.index(name))
        raise InputError(f"unknown generator {name!r}; use one of {list(GENERATORS)}")
    if isinstance(name, int) and 1 <= name <= V.hdim:
        return ("h", name - 1)
    if isinstance(name, str) and name.startswith("h") and name[1:].isdigit() and 1 <= int(name[1:]) <= V.hdim:
        return ("h", int(name[1:]) - 1)
    raise InputError(f"unknown Heisenberg direction {name!r}; use h1..h{V.hdim}")


def parse_vector(V, terms) -> dict:
    """Vector from terms {coeff, charge, modes}; modes [[x, n], ...] apply right to left to e^charge or 1."""
    out: dict = {}
    for t in terms:
        if "charge" in t:
            if not isinstance(V, LatticeVOA):
                raise InputError("charge only applies to lattice algebras")
            ch = tuple(_scalar(x) for x in t["charge"])
            if len(ch) != V.hdim:
                raise InputError("charge has the wrong number of coordinates")
            vec = dict(V.e(ch))
        else:
            vec = dict(V.vacuum)
        for name, n in reversed(t.get("modes", [])):
            kind, i = _generator_index(V, name)
            if kind == "g":
                vec = V.gmode_vec(i, n, vec)
            else:
                vec = V.hmode_vec(tuple(Fraction(int(j == i)) for j in range(V.hdim)), n, vec)
        axpy(out, vec, _scalar(t.get("coeff", 1)))
    return out


# ---------------------------------------------------------------------------
# verification suites

def merge(name: str, reports: Sequence[CheckReport], window, result: dict | None = None) -> CheckReport:
    out = CheckReport(name, True, window, {"parts": len(reports)})
    for r in reports:
        out.checked += r.checked
        out.skipped += r.skipped
        if not r.passed and out.passed:
            out.passed = False
            out.witness = {"part": r.check, "inputs": r.inputs}
            if r.witness is not None:
                out.witness["witness"] = r.witness
    if result:
        out.result.update(result)
    return out


def _unit(d, i):
    return tuple(Fraction(int(j == i)) for j in range(d))


def small_generators(V) -> list:
    """Weight-one generators, plus e^{+-a_i} for lattice algebras."""
    gens = [dict(V.gen_vector(g)) for g in V.generators]
    if isinstance(V, LatticeVOA):
        for i in range(V.hdim):
            for s in (1, -1):
                gens.append(dict(V.e(tuple(s * c for c in _unit(V.hdim, i)))))
    return gens


def low_basis(W, extra: int = 1) -> list:
    lo = min(W.weights_upto(W.truncation + getattr(W, "top_weight", 0)))
    out = []
    for w in W.weights_upto(lo + extra):
        for c in W.charges_at(w):
            out.extend({k: Fraction(1)} for k in W.basis(w, c))
    return out


def omega_vectors(C, top) -> list:
    return [v for s in C.slots(top) for v in C.vacuum_basis(*s)]


def default_shift(V, C) -> list:
    ell = C.ell
    if isinstance(ell, RatFunc):
        raise InputError("this suite needs a concrete level")
    if isinstance(V, LatticeVOA):
        return [tuple(ell * c for c in _unit(V.hdim, i)) for i in range(V.hdim)]
    if V.hdim == 1 and V.generators and any(V.gen_charge(g) != (0,) for g in V.generators):
        return [(Fraction(ell),)]
    raise InputError("no default shift lattice for this algebra; pass --shift")


def root_pairs(V, gens) -> list:
    charged = [u for u in gens if any(V.vector_charge(u))]
    return [(u, v) for u in charged for v in charged]


def run_suite(suite: str, V, W, args) -> CheckReport:
    window = args.window
    if suite in ("jacobi", "commutativity", "associativity", "skew"):
        view = PlainView(W)
        gens = small_generators(V)
        ws = low_basis(W, args.top if args.top is not None else 1)
        if suite == "jacobi":
            reps = sweep(lambda t: check_jacobi(view, t[0], t[1], t[2], window),
                         [(u, v, w) for u in gens for v in gens for w in ws])
        elif suite == "commutativity":
            reps = sweep(lambda t: check_weak_commutativity(view, t[0], t[1], ws, window, args.max_order),
                         [(u, v) for u in gens for v in gens])
        elif suite == "associativity":
            reps = sweep(lambda t: check_weak_associativity(view, t[0], gens, t[1], window, args.max_order),
                         [(u, w) for u in gens for w in ws])
        else:
            aview = PlainView(V)
            reps = sweep(lambda t: check_skew_symmetry(aview, t[0], t[1], window, args.scalars == "cyclotomic"),
                         [(u, v) for u in gens for v in gens])
        return merge(suite, reps, {"exponent_abs_max": window})
    C = CosetAlgebra(V)
    M = C if W is V else C.module(W)
    if suite == "virasoro":
        top = max(0, V.truncation - 4) if args.top is None else args.top
        vecs = low_basis(V, top)
        amb = check_virasoro(lambda m, x: V.lmode(m, x), vecs, V.rank, (-2, 2), name="virasoro")
        cos = coset_virasoro(C, top)
        return merge("virasoro", [amb, cos], {"modes": [-2, 2]},
                     {"central_charge": format_scalar(V.rank), "coset_central_charge": format_scalar(C.rank)})
    if suite == "zalgebra":
        top = min(3, V.truncation - 2) if args.top is None else args.top
        ws = omega_vectors(M, top)
        reps = []
        for u, v in root_pairs(V, small_generators(V)):
            bracket = V.ymode_vec(u, 0, v)
            ell = C.ell
            form = V.ymode_vec(u, 1, v).get(V.vacuum_key, Fraction(0)) / ell
            reps.append(check_z_relation(M, u, v, bracket, form, ws, (-window, window)))
        if not reps:
            raise InputError("zalgebra needs charged weight-one generators")
        return merge("zalgebra", reps, {"modes": [-window, window]})
    if suite == "coset-jacobi":
        top = 2 if args.top is None else args.top
        us = omega_vectors(C, top)
        ws = omega_vectors(M, top)
        view = CosetView(M)
        reps = sweep(lambda t: check_jacobi(view, t[0], t[1], t[2], window, name="coset-jacobi"),
                     [(u, v, w) for u in us for v in us for w in ws])
        return merge("coset-jacobi", reps, {"exponent_abs_max": window})
    shift = [tuple(_scalar(x) for x in b) for b in args.shift] if args.shift else default_shift(V, C)
    if suite == "quotient":
        top = 3 if args.top is None else args.top
        QV = OmegaQuotient(C, ShiftLattice(C, shift), top)
        QW = QV if M is C else OmegaQuotient(M, QV.A, top)
        us = omega_vectors(C, 1)
        reps = [check_ideal_closure(QV, QW, us, min(window, 2)), check_section_round_trip(QW, us, min(window, 2))]
        reps += check_quotient_jacobi(QV, QW, min(window, 3))
        return merge("quotient", reps, {"exponent_abs_max": window},
                     {"classes": len(QW.graded_dims())})
    if suite in ("psi-embed", "commutant"):
        top = 2 if args.top is None else args.top
        E = LatticeEmbedding(C, shift)
        if suite == "psi-embed":
            return psi_embed_check(E, top=top)
        return commutant_check(C, E, top=top)
    if suite == "sigma":
        F = SigmaFamily(C, shift)
        ws = omega_vectors(M, 1)
        vs = omega_vectors(C, 1)
        return merge("sigma", check_sigma_suite(F, M, ws, vs, bound=1, window=min(window, 3)),
                     {"exponent_abs_max": window})
    if suite == "deformation":
        if not args.beta:
            raise InputError("deformation needs --beta")
        beta = tuple(_scalar(x) for x in args.beta)
        us = omega_vectors(C, 1)
        return merge("deformation", check_deformation(M, beta, beta, us, 2, min(window, 3)),
                     {"exponent_abs_max": window})
    if suite == "reconstruction":
        top = 3 if args.top is None else args.top
        us = omega_vectors(C, 1)
        return merge("reconstruction", check_reconstruction(M, top, us), {"weight_max": top})
    raise InputError(f"unknown suite {suite!r}")


# ---------------------------------------------------------------------------
# commands

def _emit(obj, path: str | None):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path and path != "-":
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_build(args) -> int:
    V, W, desc = build_from_source(read_source(args.descriptor), args.truncation, args.scalars)
    handle = make_handle(V, desc).to_json()
    if W is not V:
        handle["module_manifest"] = AlgebraHandle(desc["type"], W, desc).manifest()
    _emit(handle, args.output)
    return EXIT_PASS


def cmd_verify(args) -> int:
    V, W, desc = build_from_source(read_source(args.handle), args.truncation, args.scalars)
    report = run_suite(args.suite, V, W, args).to_json()
    report["inputs"]["descriptor"] = desc
    _emit(report, args.output)
    return EXIT_PASS if report["result"]["status"] == "pass" else EXIT_FAIL


def character_table(space, max_degree) -> list:
    """Rows {charge, weights, dims}; ``space`` needs basis, charges_at and weights_upto."""
    weights = space.weights_upto(max_degree)
    charges = sorted({c for w in weights for c in space.charges_at(w)})
    rows = []
    for c in charges:
        rows.append({"charge": [format_scalar(x) for x in c], "weights": [format_scalar(w) for w in weights],
                     "dims": [len(space.basis(w, c)) if c in space.charges_at(w) else 0 for w in weights]})
    return rows


class _VacuumSpace:
    """Omega_W viewed as a graded space by ambient weight and charge."""

    def __init__(self, M):
        self.M = M
        self.W = M.W

    def weights_upto(self, top):
        return self.W.weights_upto(top)

    def charges_at(self, w):
        return self.W.charges_at(w)

    def basis(self, w, c):
        return self.M.vacuum_basis(w, c)


def cmd_character(args) -> int:
    V, W, desc = build_from_source(read_source(args.handle), args.truncation, args.scalars)
    top = args.max_degree
    if top > W.truncation + getattr(W, "top_weight", 0):
        raise InputError(f"--max-degree {top} exceeds the truncation {W.truncation}")
    space = W
    if args.coset:
        C = CosetAlgebra(V)
        space = _VacuumSpace(C if W is V else C.module(W))
    rows = character_table(space, top)
    if args.charge is not None:
        want = [format_scalar(_scalar(x)) for x in args.charge]
        rows = [r for r in rows if r["charge"] == want]
    _emit({"descriptor": desc, "coset": bool(args.coset), "max_degree": top, "table": rows}, args.output)
    return EXIT_PASS


def cmd_product(args) -> int:
    V, W, desc = build_from_source(read_source(args.handle), args.truncation, args.scalars)
    u = parse_vector(V, parse_json_arg(args.u, "--u", VECTOR_SCHEMA))
    v = parse_vector(V, parse_json_arg(args.v, "--v", VECTOR_SCHEMA))
    if args.coset:
        C = CosetAlgebra(V)
        for name, x in (("--u", u), ("--v", v)):
            if not C.is_vacuum(x):
                raise InputError(f"{name} is not a vacuum vector")
        try:
            p = parse_exponent(args.mode)
        except (ScalarError, ValueError) as exc:
            raise InputError(f"--mode: {exc}") from None
        out = C.y_coeff(u, p, v)
        op = "Y_Omega coefficient of z^p"
    else:
        try:
            n = int(args.mode)
        except ValueError:
            raise InputError("--mode must be an integer for the ambient product") from None
        out = V.ymode_vec(u, n, v)
        op = "u_n v"
    res = {"descriptor": desc, "operation": op, "mode": args.mode, "u": _vec_json(u), "v": _vec_json(v),
           "result": _vec_json(out)}
    _emit(res, args.output)
    return EXIT_PASS


def cmd_export(args) -> int:
    V, W, desc = build_from_source(read_source(args.handle), args.truncation, args.scalars)
    if args.what == "manifest":
        obj = make_handle(V, desc).to_json()
    else:
        C = CosetAlgebra(V)
        M = C if W is V else C.module(W)
        obj = export_omega(M, args.top).to_json()
    _emit(obj, args.output)
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cosetva", description="Exact abelian coset computations for truncated vertex algebras.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--truncation", type=int, default=None, help="override the descriptor truncation")
    common.add_argument("--scalars", choices=("rational", "formal", "cyclotomic"), default="rational")
    common.add_argument("--window", type=int, default=4, help="exponent window |exp| <= W")
    common.add_argument("-o", "--output", default=None, help="output file (default stdout)")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", parents=[common], help="construct an algebra and write its handle")
    b.add_argument("descriptor", nargs="?", default="-")
    b.set_defaults(fn=cmd_build)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("handle", nargs="?", default="-")
    v.add_argument("--top", type=int, default=None, help="weight bound for test vectors")
    v.add_argument("--shift", type=json.loads, default=None, help="shift lattice basis as a JSON list of charges")
    v.add_argument("--beta", type=json.loads, default=None, help="deformation charge as a JSON list")
    v.add_argument("--max-order", type=int, default=None,
                   help="largest k (commutativity) or l (associativity) to try; default twice the truncation")
    v.set_defaults(fn=cmd_verify)

    c = sub.add_parser("character", parents=[common], help="graded dimensions per charge")
    c.add_argument("handle", nargs="?", default="-")
    c.add_argument("--max-degree", type=int, required=True)
    c.add_argument("--coset", action="store_true", help="dimensions of the vacuum space instead")
    c.add_argument("--charge", type=json.loads, default=None, help="restrict to one charge (JSON list)")
    c.set_defaults(fn=cmd_character)

    pr = sub.add_parser("product", parents=[common], help="u_n v, or a Y_Omega coefficient with --coset")
    pr.add_argument("handle", nargs="?", default="-")
    pr.add_argument("--u", required=True, help="JSON list of terms {coeff, charge, modes}")
    pr.add_argument("--v", required=True)
    pr.add_argument("--mode", required=True, help="n for u_n v, or the exponent p with --coset")
    pr.add_argument("--coset", action="store_true")
    pr.set_defaults(fn=cmd_product)

    e = sub.add_parser("export", parents=[common], help="export the vacuum space data or the basis manifest")
    e.add_argument("handle", nargs="?", default="-")
    e.add_argument("--what", choices=("omega", "manifest"), default="omega")
    e.add_argument("--top", type=int, default=None)
    e.set_defaults(fn=cmd_export)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_PASS
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ScalarError, TruncationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
