"""Batch JSON frontend: one subcommand per library operation.

Inputs come from --in (file) or stdin; every result is a single line of
canonically serialized JSON, so identical inputs give byte-identical
outputs.  Exit codes: 0 success, 1 malformed input, 2 a library error (the
error object carries the error name and its witness).
"""

import argparse
import json
import os
import sys
from fractions import Fraction

from .errors import IsolabError, MalformedInput
from .padic import FieldSpec, PadicScalar
from .isocrystal import (Isocrystal, internal_hom, newton_slopes, slope_split)
from .dieudonne import DieudonneLie, dla_validate, lower_central_series
from .bch import bch_series, denominator_profile, group_mul, \
    lattice_closure_check
from .roots import (RootDatumWithCochar, coxeter_gate, leaf_dimension,
                    slope_multiset_from_roots, unipotent_nilpotency)
from .perfseries import (PerfectedSeries, RestrictedParams, membership_ECd,
                         membership_restricted, rigidity_check,
                         slope_exponents)

DEFAULT_PRECISION = 32


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else str(x.numerator)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, PadicScalar):
        return x.to_json()
    return x


def _emit(obj):
    sys.stdout.write(json.dumps(_jsonable(obj), sort_keys=True,
                                separators=(",", ":")) + "\n")


def _read_input(args):
    try:
        if args.infile and args.infile != "-":
            with open(args.infile, "r", encoding="utf-8") as fh:
                text = fh.read()
        else:
            text = sys.stdin.read()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedInput("unreadable input", witness=str(exc)) from exc


def _default_n(args):
    if args.precision is not None:
        return args.precision
    env = os.environ.get("ISOLAB_PRECISION")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise MalformedInput("bad ISOLAB_PRECISION", witness=env) from exc
    return DEFAULT_PRECISION


def _frac(v):
    try:
        return Fraction(str(v))
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedInput("bad rational", witness=v) from exc


def _load_spec(obj, args):
    try:
        p = int(obj["p"])
        f = int(obj.get("f", 1))
        N = int(obj["N"]) if "N" in obj else _default_n(args)
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput("bad ring parameters", witness=obj) from exc
    return FieldSpec(p, f, N)


def _load_isocrystal(obj, args):
    if not isinstance(obj, dict):
        raise MalformedInput("expected an object", witness=obj)
    if "spec" in obj:
        return Isocrystal.from_json(obj)
    spec = _load_spec(obj, args)
    try:
        rows = obj["frobenius"]
    except KeyError as exc:
        raise MalformedInput("missing frobenius", witness=obj) from exc
    return Isocrystal.from_rationals(spec,
                                     [[_frac(c) for c in row] for row in rows])


def _load_dla(obj, args):
    if not isinstance(obj, dict):
        raise MalformedInput("expected an object", witness=obj)
    if "iso" in obj:
        return DieudonneLie.from_json(obj)
    spec = _load_spec(obj, args)
    try:
        frob = obj["frobenius"]
        bracket = obj["bracket"]
    except KeyError as exc:
        raise MalformedInput("missing frobenius or bracket",
                             witness=sorted(obj)) from exc
    lat = obj.get("lattice")
    lat_cols = None
    if lat is not None:
        # row-major in JSON, columns generate (same as the full schema)
        lat_cols = [[_frac(lat[i][j]) for i in range(len(lat))]
                    for j in range(len(lat[0]))]
    return DieudonneLie.from_rationals(
        spec, [[_frac(c) for c in row] for row in frob],
        [[[_frac(c) for c in cell] for cell in row] for row in bracket],
        lattice_cols=lat_cols)


def _load_vector(obj, spec):
    return [PadicScalar.from_fraction(spec, _frac(v)) for v in obj]


def _load_datum(args, payload=None):
    if payload is None and (args.type or args.nu):
        if not (args.type and args.n and args.nu):
            raise MalformedInput("need --type, --n and --nu together",
                                 witness=None)
        nu = [_frac(v) for v in args.nu.split(",")]
    else:
        obj = payload if payload is not None else _read_input(args)
        try:
            args.type, nu = obj["type"], [_frac(v) for v in obj["nu"]]
            args.n = int(obj["n"])
        except (KeyError, TypeError) as exc:
            raise MalformedInput("bad root datum", witness=obj) from exc
    if args.classical:
        nu = [-v for v in reversed(nu)]
    return RootDatumWithCochar(args.type, args.n, nu)


def _slope_str(v, classical):
    v = -v if classical else v
    return str(v)


def _slope_list(pairs, classical):
    out = [[_slope_str(s, classical), m] for s, m in pairs]
    out.sort(key=lambda t: Fraction(t[0]))
    return out


# --------------------------------------------------------------------------
# subcommand bodies
# --------------------------------------------------------------------------

def _cmd_slopes(args):
    iso = _load_isocrystal(_read_input(args), args)
    _emit({"slopes": _slope_list(newton_slopes(iso), args.classical)})


def _cmd_split(args):
    iso = _load_isocrystal(_read_input(args), args)
    blocks = slope_split(iso, fine=args.fine)
    out = []
    for lam, basis, sub in blocks:
        out.append({"slope": _slope_str(lam, args.classical),
                    "rank": sub.rank,
                    "basis": [[c.to_json() for c in col] for col in basis],
                    "frobenius": [[c.to_json() for c in row]
                                  for row in sub.F]})
    _emit({"blocks": out})


def _cmd_hom(args):
    obj = _read_input(args)
    try:
        y, z = obj["source"], obj["target"]
    except (KeyError, TypeError) as exc:
        raise MalformedInput("need source and target", witness=obj) from exc
    hom = internal_hom(_load_isocrystal(y, args), _load_isocrystal(z, args))
    _emit(hom.to_json())


def _cmd_dla_check(args):
    a = _load_dla(_read_input(args), args)
    _emit(dla_validate(a))


def _cmd_lcs(args):
    a = _load_dla(_read_input(args), args)
    chain, n_class = lower_central_series(a)
    _emit({"dims": [len(term) for term in chain], "n_class": n_class})


def _cmd_bch_table(args):
    fle = bch_series(args.nilpotency_class)
    primes = sorted(denominator_profile(args.nilpotency_class))
    _emit({"series": fle.to_json(), "denominator_primes": primes})


def _cmd_bch_mul(args):
    obj = _read_input(args)
    try:
        alg, xs, ys = obj["algebra"], obj["x"], obj["y"]
    except (KeyError, TypeError) as exc:
        raise MalformedInput("need algebra, x, y", witness=obj) from exc
    a = _load_dla(alg, args)
    x = _load_vector(xs, a.spec)
    y = _load_vector(ys, a.spec)
    _emit({"product": [c.to_json() for c in group_mul(a, x, y)]})


def _cmd_lattice_closure(args):
    a = _load_dla(_read_input(args), args)
    ok, wit = lattice_closure_check(a, samples=args.samples, seed=args.seed)
    _emit({"closed": ok, "witness": wit})


def _cmd_leafdim(args):
    d = _load_datum(args)
    _emit({"dim": leaf_dimension(d)})


def _cmd_slope_roots(args):
    d = _load_datum(args)
    _emit({"slopes": _slope_list(slope_multiset_from_roots(d),
                                 args.classical)})


def _cmd_nilclass(args):
    d = _load_datum(args)
    _emit({"n_class": unipotent_nilpotency(d)})


def _cmd_coxeter_gate(args):
    d = _load_datum(args)
    _emit(coxeter_gate(d, args.p))


def _cmd_perf_member(args):
    series = PerfectedSeries.from_json(_read_input(args))
    try:
        s, r, n0 = (int(v) for v in args.params.split(","))
    except ValueError as exc:
        raise MalformedInput("params must be s,r,n0",
                             witness=args.params) from exc
    ok, wit = membership_restricted(series, RestrictedParams(r, s, n0),
                                    method=args.method)
    _emit({"member": ok, "witness": wit})


def _cmd_perf_ecd(args):
    series = PerfectedSeries.from_json(_read_input(args))
    ok, wit = membership_ECd(series, _frac(args.E), _frac(args.C),
                             _frac(args.d))
    _emit({"member": ok, "witness": wit})


def _cmd_rigidity(args):
    obj = _read_input(args)
    try:
        f = PerfectedSeries.from_json(obj["f"])
        g = [PerfectedSeries.from_json(o) for o in obj["g"]]
        h = [PerfectedSeries.from_json(o) for o in obj.get("h", [])]
        r = int(obj["r"])
        d_seq = [int(v) for v in obj["d_seq"]]
        block = obj.get("powered_block", "h")
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput("bad rigidity request", witness=obj) from exc
    _emit(rigidity_check(f, g, h, r, d_seq, powered_block=block))


def _cmd_slope_exponents(args):
    a, r, s = slope_exponents(_frac(args.mu1), _frac(args.mu0))
    _emit({"a": a, "r": r, "s": s})


# --------------------------------------------------------------------------

def _build_parser():
    top = argparse.ArgumentParser(prog="isolab", description=__doc__)
    top.add_argument("--classical", action="store_true",
                     help="negate all slope signs in inputs and outputs")
    top.add_argument("--precision", type=int, default=None,
                     help="working precision N (default ISOLAB_PRECISION)")
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, fn, **extra):
        p = sub.add_parser(name)
        p.add_argument("--in", dest="infile", default=None)
        # SUPPRESS keeps a pre-subcommand --classical/--precision from being
        # clobbered by the subparser's defaults
        p.add_argument("--classical", action="store_true",
                       default=argparse.SUPPRESS)
        p.add_argument("--precision", type=int, default=argparse.SUPPRESS)
        p.set_defaults(fn=fn, type=None, n=None, nu=None)
        for flag, kw in extra.items():
            p.add_argument("--" + flag.replace("_", "-"), **kw)
        return p

    add("slopes", _cmd_slopes)
    add("split", _cmd_split, fine={"action": "store_true"})
    add("hom", _cmd_hom)
    add("dla-check", _cmd_dla_check)
    add("lcs", _cmd_lcs)
    p = add("bch-table", _cmd_bch_table)
    p.add_argument("--class", dest="nilpotency_class", type=int, required=True)
    add("bch-mul", _cmd_bch_mul)
    add("lattice-closure", _cmd_lattice_closure,
        samples={"type": int, "default": 100},
        seed={"type": int, "default": 0})
    for name, fn in [("leafdim", _cmd_leafdim),
                     ("slope-roots", _cmd_slope_roots),
                     ("nilclass", _cmd_nilclass)]:
        p = add(name, fn)
        p.add_argument("--type", dest="type")
        p.add_argument("--n", dest="n", type=int)
        p.add_argument("--nu", dest="nu")
    p = add("coxeter-gate", _cmd_coxeter_gate, p={"type": int,
                                                  "required": True})
    p.add_argument("--type", dest="type")
    p.add_argument("--n", dest="n", type=int)
    p.add_argument("--nu", dest="nu")
    add("perf-member", _cmd_perf_member,
        params={"required": True}, method={"default": "both"})
    add("perf-ecd", _cmd_perf_ecd, E={"required": True}, C={"required": True},
        d={"required": True})
    add("rigidity", _cmd_rigidity)
    add("slope-exponents", _cmd_slope_exponents,
        mu1={"required": True}, mu0={"required": True})
    return top


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if not exc.code else 1
    try:
        args.fn(args)
        return 0
    except MalformedInput as exc:
        _emit(exc.to_json())
        return 1
    except IsolabError as exc:
        _emit(exc.to_json())
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
