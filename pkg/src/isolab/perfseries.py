"""Truncated perfected power series over F_{p^k}.

Exponents are nonnegative rationals with p-power denominators; a series is
always the class of an element modulo terms of sup-degree above its bound D,
and every operation states what survives.  On top of the ring structure this
module provides the Frobenius operators, ideal truncations, composition, two
membership tests for restricted-perfection subrings, the rigidity-criterion
checker, and the slope-to-exponent bookkeeping (a, r, s).
"""

from fractions import Fraction
from math import gcd

from .errors import (DegreeBoundTooSmall, MalformedInput, NonzeroConstantTerm,
                     ParameterMismatch, SequenceTooShort, SlopeOrderViolated)
from .padic import FieldSpec


# --------------------------------------------------------------------------
# coefficient field F_{p^k}, tuples of length k over F_p
# --------------------------------------------------------------------------

def _ff_spec(p, k):
    return FieldSpec(p, k, 1)


def ff_add(a, b, p):
    return tuple((x + y) % p for x, y in zip(a, b))


def ff_neg(a, p):
    return tuple((-x) % p for x in a)


def ff_mul(spec, a, b):
    return spec.raw_mul(a, b, spec.p)


def ff_pow(spec, a, e):
    out = (1,) + (0,) * (spec.f - 1)
    base = a
    while e:
        if e & 1:
            out = ff_mul(spec, out, base)
        base = ff_mul(spec, base, base)
        e >>= 1
    return out


def ff_is_zero(a):
    return all(x == 0 for x in a)


def ff_one(k):
    return (1,) + (0,) * (k - 1)


# --------------------------------------------------------------------------
# the series type
# --------------------------------------------------------------------------

def _validate_exponent(p, v):
    v = Fraction(v)
    if v < 0:
        raise MalformedInput("negative exponent", witness=str(v))
    d = v.denominator
    while d % p == 0:
        d //= p
    if d != 1:
        raise MalformedInput("exponent denominator is not a power of p",
                             witness=str(v))
    return v


class PerfectedSeries:
    """Finite term map exponent-vector -> F_{p^k} coefficient, sup-degree <= D."""

    __slots__ = ("p", "nvars", "k", "D", "terms")

    def __init__(self, p, nvars, k, D, terms):
        if D < 1:
            raise MalformedInput("degree bound must be at least 1",
                                 witness={"D": D})
        self.p = p
        self.nvars = nvars
        self.k = k
        self.D = D
        clean = {}
        for exp, coeff in terms.items():
            exp = tuple(_validate_exponent(p, v) for v in exp)
            if len(exp) != nvars:
                raise MalformedInput("exponent arity mismatch",
                                     witness=[str(v) for v in exp])
            coeff = tuple(int(c) % p for c in coeff)
            if len(coeff) != k:
                raise MalformedInput("coefficient length mismatch",
                                     witness=list(coeff))
            if ff_is_zero(coeff):
                continue
            if exp and max(exp) > D:
                continue
            clean[exp] = coeff
        self.terms = clean

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero(p, nvars, k, D):
        return PerfectedSeries(p, nvars, k, D, {})

    @staticmethod
    def monomial(p, nvars, k, D, exp, coeff=None):
        if coeff is None:
            coeff = ff_one(k)
        return PerfectedSeries(p, nvars, k, D, {tuple(exp): tuple(coeff)})

    def same_shape(self, other):
        return (self.p == other.p and self.nvars == other.nvars
                and self.k == other.k)

    def is_zero(self):
        return not self.terms

    def sorted_terms(self):
        return sorted(self.terms.items())

    # -- serialization ----------------------------------------------------

    def to_json(self):
        out = []
        for exp, coeff in self.sorted_terms():
            ej = []
            for v in exp:
                den = v.denominator
                e = 0
                while den > 1:
                    den //= self.p
                    e += 1
                ej.append({"num": v.numerator, "pexp": e})
            out.append({"exp": ej, "coeff": list(coeff)})
        return {"p": self.p, "nvars": self.nvars,
                "field": {"p": self.p, "k": self.k},
                "D": self.D, "terms": out}

    @staticmethod
    def from_json(obj):
        try:
            p = int(obj["p"])
            nvars = int(obj["nvars"])
            k = int(obj["field"]["k"])
            if int(obj["field"]["p"]) != p:
                raise MalformedInput("field characteristic mismatch",
                                     witness=obj["field"])
            D = int(obj["D"])
            terms = {}
            for t in obj["terms"]:
                exp = tuple(Fraction(int(e["num"]), p ** int(e["pexp"]))
                            for e in t["exp"])
                coeff = tuple(int(c) for c in t["coeff"])
                if exp in terms:
                    raise MalformedInput("duplicate exponent", witness=t)
                terms[exp] = coeff
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput("bad series object", witness=obj) from exc
        return PerfectedSeries(p, nvars, k, D, terms)


def _require_match(a, b):
    if not a.same_shape(b):
        raise ParameterMismatch("series parameters differ",
                                witness={"left": [a.p, a.nvars, a.k],
                                         "right": [b.p, b.nvars, b.k]})


def ps_add(a, b):
    _require_match(a, b)
    D = min(a.D, b.D)
    terms = dict(a.terms)
    for exp, c in b.terms.items():
        if exp in terms:
            s = ff_add(terms[exp], c, a.p)
            if ff_is_zero(s):
                del terms[exp]
            else:
                terms[exp] = s
        else:
            terms[exp] = c
    return PerfectedSeries(a.p, a.nvars, a.k, D, terms)


def ps_neg(a):
    return PerfectedSeries(a.p, a.nvars, a.k, a.D,
                           {e: ff_neg(c, a.p) for e, c in a.terms.items()})


def ps_scale(a, coeff):
    spec = _ff_spec(a.p, a.k)
    coeff = tuple(int(c) % a.p for c in coeff)
    return PerfectedSeries(a.p, a.nvars, a.k, a.D,
                           {e: ff_mul(spec, c, coeff)
                            for e, c in a.terms.items()})


def ps_mul(a, b):
    _require_match(a, b)
    D = min(a.D, b.D)
    spec = _ff_spec(a.p, a.k)
    out = {}
    for e1, c1 in a.terms.items():
        for e2, c2 in b.terms.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            if e and max(e) > D:
                continue
            c = ff_mul(spec, c1, c2)
            if e in out:
                s = ff_add(out[e], c, a.p)
                if ff_is_zero(s):
                    del out[e]
                else:
                    out[e] = s
            elif not ff_is_zero(c):
                out[e] = c
    return PerfectedSeries(a.p, a.nvars, a.k, D, out)


def ps_arith(op, a, b):
    if op == "add":
        return ps_add(a, b)
    if op == "mul":
        return ps_mul(a, b)
    if op == "scalar":
        return ps_scale(a, b)
    raise MalformedInput("unknown arithmetic op", witness=op)


def ps_pow(a, e):
    out = PerfectedSeries.monomial(a.p, a.nvars, a.k, a.D, (Fraction(0),) * a.nvars)
    base = a
    while e:
        if e & 1:
            out = ps_mul(out, base)
        base = ps_mul(base, base)
        e >>= 1
    return out


def ps_frobenius(a, direction="forward", flavor="relative"):
    """X^I -> X^{pI} (forward) or X^{I/p} (inverse); absolute also moves
    coefficients by x -> x^p (resp. the p-th root, which exists here)."""
    p = a.p
    spec = _ff_spec(p, a.k)
    if direction == "forward":
        fe = lambda v: v * p
    elif direction == "inverse":
        fe = lambda v: v / p
    else:
        raise MalformedInput("direction must be forward or inverse",
                             witness=direction)
    if flavor == "relative":
        fc = lambda c: c
    elif flavor == "absolute":
        # x -> x^p, whose inverse on F_{p^k} is x -> x^{p^{k-1}}
        e = p if direction == "forward" else p ** (a.k - 1)
        fc = lambda c: ff_pow(spec, c, e)
    else:
        raise MalformedInput("flavor must be relative or absolute",
                             witness=flavor)
    out = {}
    for exp, c in a.terms.items():
        ne = tuple(fe(v) for v in exp)
        if ne and max(ne) > a.D:
            continue
        nc = fc(c)
        if not ff_is_zero(nc):
            out[ne] = nc
    return PerfectedSeries(p, a.nvars, a.k, a.D, out)


def ps_truncate_ideal(a, kind, m):
    """Class modulo an ideal: kind="frobenius" is (X_1^{p^m},..,X_n^{p^m}),
    kind="power" is (X_1,..,X_n)^m, perfected-monomial membership by floors."""
    if m < 0:
        raise MalformedInput("truncation order must be nonnegative",
                             witness={"m": m})
    if kind == "frobenius":
        bound = Fraction(a.p) ** m
        keep = lambda exp: all(v < bound for v in exp)
    elif kind == "power":
        keep = lambda exp: sum(int(v) for v in exp) < m
    else:
        raise MalformedInput("unknown ideal kind", witness=kind)
    return PerfectedSeries(a.p, a.nvars, a.k, a.D,
                           {e: c for e, c in a.terms.items() if keep(e)})


def ps_embed(a, total_nvars, offset):
    """The same series over a larger variable set, variables shifted."""
    if offset < 0 or offset + a.nvars > total_nvars:
        raise MalformedInput("embedding out of range",
                             witness={"offset": offset, "total": total_nvars})
    pad_l = (Fraction(0),) * offset
    pad_r = (Fraction(0),) * (total_nvars - a.nvars - offset)
    return PerfectedSeries(a.p, total_nvars, a.k, a.D,
                           {pad_l + e + pad_r: c
                            for e, c in a.terms.items()})


def ps_compose(f, g, h=()):
    """Substitute the series g_1..g_a, h_1..h_b into an ordinary series f.

    f must have integer exponents in a+b variables; all substituted series
    share parameters and have zero constant term.
    """
    args = list(g) + list(h)
    if f.nvars != len(args):
        raise MalformedInput("arity mismatch",
                             witness={"f_vars": f.nvars, "args": len(args)})
    if not args:
        raise MalformedInput("nothing to substitute into", witness=None)
    base = args[0]
    for s in args:
        _require_match(base, s)
        zero_exp = (Fraction(0),) * s.nvars
        if zero_exp in s.terms:
            raise NonzeroConstantTerm("substituted series has a constant term",
                                      witness=s.to_json()["terms"][0])
    for exp in f.terms:
        if any(v.denominator != 1 for v in exp):
            raise MalformedInput("outer series must have integer exponents",
                                 witness=[str(v) for v in exp])
    D = min(s.D for s in args)
    spec = _ff_spec(base.p, base.k)
    out = PerfectedSeries.zero(base.p, base.nvars, base.k, D)
    pow_cache = [{} for _ in args]

    def arg_power(i, e):
        if e == 0:
            return None
        if e not in pow_cache[i]:
            pow_cache[i][e] = ps_pow(args[i], e)
        return pow_cache[i][e]

    for exp, coeff in sorted(f.terms.items()):
        prod = None
        for i, e in enumerate(int(v) for v in exp):
            q = arg_power(i, e)
            if q is None:
                continue
            prod = q if prod is None else ps_mul(prod, q)
        if prod is None:  # constant term of f
            prod = PerfectedSeries.monomial(base.p, base.nvars, base.k, D,
                                            (Fraction(0),) * base.nvars)
        out = ps_add(out, ps_scale(prod, coeff))
    return out


# --------------------------------------------------------------------------
# restricted-perfection membership
# --------------------------------------------------------------------------

class RestrictedParams:
    __slots__ = ("r", "s", "n0")

    def __init__(self, r, s, n0):
        if not (0 < r < s) or n0 < 0:
            raise MalformedInput("need 0 < r < s and n0 >= 0",
                                 witness={"r": r, "s": s, "n0": n0})
        self.r = int(r)
        self.s = int(s)
        self.n0 = int(n0)


def _ord_exponent(p, exp):
    """Largest power of p among the component denominators."""
    v = 0
    for x in exp:
        den = x.denominator
        e = 0
        while den > 1:
            den //= p
            e += 1
        v = max(v, e)
    return v


def _min_surviving_n(p, m, smr, n0, strict=True):
    """Smallest n >= n0 whose window p^{n(s-r)} exceeds (or reaches) m."""
    n = n0
    while True:
        w = Fraction(p) ** (n * smr)
        if (w > m) if strict else (w >= m):
            return n
        n += 1


def _exp_json(p, exp):
    out = []
    for v in exp:
        den = v.denominator
        e = 0
        while den > 1:
            den //= p
            e += 1
        out.append({"num": v.numerator, "pexp": e})
    return out


def membership_restricted(a, params, method="both"):
    """Is the class in the restricted perfection for (r, s, n0)?

    definitional: for each n from n0 up to the last window meeting degree D,
    every term surviving the n-th Frobenius ideal must have p^{nr} I integral.
    closed_form: per-term inequality ord <= r * n_first(term).  The two are
    equivalent by construction of n_first; "both" runs and compares them.
    Returns (bool, first failing witness in canonical term order or None).
    """
    if method not in ("definitional", "closed_form", "both"):
        raise MalformedInput("unknown method", witness=method)
    p, r, s, n0 = a.p, params.r, params.s, params.n0
    smr = s - r
    n_max = _min_surviving_n(p, Fraction(a.D), smr, n0, strict=True)

    def definitional():
        for exp in sorted(a.terms):
            v = _ord_exponent(p, exp)
            if v == 0:
                continue
            m = max(exp)
            for n in range(n0, n_max + 1):
                if m * p ** (n * r) < Fraction(p) ** (n * s) and n * r < v:
                    return False, _witness(exp, v, n)
        return True, None

    def closed_form():
        for exp in sorted(a.terms):
            v = _ord_exponent(p, exp)
            if v == 0:
                continue
            n_first = _min_surviving_n(p, max(exp), smr, n0, strict=True)
            if v > r * n_first:
                return False, _witness(exp, v, n_first)
        return True, None

    def _witness(exp, v, n):
        n_le = _min_surviving_n(p, max(exp), smr, n0, strict=False)
        w = {"exp": _exp_json(p, exp), "ord": v, "n": n, "allowed": r * n}
        if n_le != _min_surviving_n(p, max(exp), smr, n0, strict=True):
            w["boundary"] = True
        return w

    if method == "definitional":
        return definitional()
    if method == "closed_form":
        return closed_form()
    vd, wd = definitional()
    vc, wc = closed_form()
    assert vd == vc, (wd, wc)
    return vc, wc


def membership_ECd(a, E, C, d):
    """Per-term growth bound p^ord <= max(C * (|I|_inf + d)^E, 1)."""
    E, C, d = Fraction(E), Fraction(C), Fraction(d)
    if E <= 0 or C <= 0 or d < 0:
        raise MalformedInput("need E, C > 0 and d >= 0",
                             witness={"E": str(E), "C": str(C), "d": str(d)})
    p = a.p
    for exp in sorted(a.terms):
        v = _ord_exponent(p, exp)
        if v == 0:
            continue
        m = max(exp)
        # p^v <= C (m+d)^E  <=>  p^{v q} <= C^q (m+d)^{a0} with E = a0/q
        a0, q = E.numerator, E.denominator
        lhs = Fraction(p) ** (v * q)
        rhs = (C ** q) * ((m + d) ** a0)
        if lhs > rhs:
            return False, {"exp": _exp_json(p, exp), "ord": v,
                           "bound": f"{rhs.numerator}/{rhs.denominator}"}
    return True, None


# --------------------------------------------------------------------------
# rigidity checker
# --------------------------------------------------------------------------

def rigidity_check(f, g, h, r, d_seq, powered_block="h"):
    """Congruence ladder + doubled-variable evaluation for the rigidity test.

    For each n (from 0), the powered block is raised to q^n = p^{rn} and the
    composite must vanish modulo the n-th power ideal (X)^{d_n}; ratio_ok
    reports strict decrease of q^n / d_n over the given finite sequence;
    evaluation_zero substitutes the blocks over disjoint variable copies and
    tests identical vanishing mod degree D.
    """
    if not d_seq:
        raise SequenceTooShort("empty exponent sequence")
    if powered_block not in ("g", "h"):
        raise MalformedInput("powered_block must be g or h",
                             witness=powered_block)
    args = list(g) + list(h)
    if not args:
        raise MalformedInput("no substituted series", witness=None)
    base = args[0]
    p = base.p
    q = p ** r
    D = min(s.D for s in args)
    for n, d_n in enumerate(d_seq):
        if d_n < 1:
            raise MalformedInput("d_seq entries must be positive",
                                 witness={"n": n, "d_n": d_n})
        if d_n > D:
            raise DegreeBoundTooSmall(
                "cannot certify this power ideal at the working bound",
                witness={"n": n, "d_n": d_n, "D": D})
    ratio_ok = all(Fraction(q ** n, d_seq[n]) > Fraction(q ** (n + 1),
                                                         d_seq[n + 1])
                   for n in range(len(d_seq) - 1))
    congruences = []
    for n, d_n in enumerate(d_seq):
        qa = q ** n
        gs = [ps_pow(x, qa) for x in g] if powered_block == "g" else list(g)
        hs = [ps_pow(x, qa) for x in h] if powered_block == "h" else list(h)
        comp = ps_compose(f, gs, hs)
        congruences.append(ps_truncate_ideal(comp, "power", d_n).is_zero())
    nv = base.nvars
    g2 = [ps_embed(x, 2 * nv, 0) for x in g]
    h2 = [ps_embed(x, 2 * nv, nv) for x in h]
    evaluation_zero = ps_compose(f, g2, h2).is_zero()
    return {"congruences": congruences, "ratio_ok": ratio_ok,
            "evaluation_zero": evaluation_zero}


# --------------------------------------------------------------------------
# slope bookkeeping
# --------------------------------------------------------------------------

def slope_exponents(mu1, mu0):
    """Smallest (a, r, s) with a/r = mu1 and a/s = mu0; 0 < mu0 < mu1 <= 1."""
    mu1, mu0 = Fraction(mu1), Fraction(mu0)
    if not (0 < mu1 <= 1) or mu0 <= 0:
        raise MalformedInput("slope magnitudes must lie in (0, 1]",
                             witness={"mu1": str(mu1), "mu0": str(mu0)})
    if mu0 >= mu1:
        raise SlopeOrderViolated("need mu0 strictly below mu1",
                                 witness={"mu1": str(mu1), "mu0": str(mu0)})
    a = mu1.numerator * mu0.numerator // gcd(mu1.numerator, mu0.numerator)
    r = a // mu1.numerator * mu1.denominator
    s = a // mu0.numerator * mu0.denominator
    assert Fraction(a, r) == mu1 and Fraction(a, s) == mu0 and s > r
    return a, r, s
