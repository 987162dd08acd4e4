"""Exact arithmetic in unramified extensions Z_q / p^N and their fraction fields.

The coefficient ring is (Z/p^N)[t]/(g) where g is the canonical degree-f
modulus: the monic irreducible polynomial over F_p whose coefficient
vector (a_0, .., a_{f-1}), read as the integer sum(a_i p^i), is smallest.
Scalars are stored in valuation-unit form with explicit relative
precision, so every operation propagates exactly how many p-adic digits
remain certified.  Division by certified units is exact; division that
would leave no digits raises instead of silently degrading.
"""

from fractions import Fraction
from functools import lru_cache

from . import _speedups as _k
from .errors import (DivisionByZero, FrobeniusLiftFailure, MalformedInput,
                     PrecisionExhausted)


# --------------------------------------------------------------------------
# polynomials over F_p (little-endian int lists), used only for setup
# --------------------------------------------------------------------------

def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod(a, b, g, p):
    res = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    return _poly_rem(res, g, p)


def _poly_rem(a, g, p):
    a = a[:]
    dg = len(g) - 1
    inv_lead = pow(g[-1], p - 2, p)
    for k in range(len(a) - 1, dg - 1, -1):
        c = (a[k] * inv_lead) % p
        if c:
            for j in range(dg + 1):
                a[k - dg + j] = (a[k - dg + j] - c * g[j]) % p
    del a[dg:]
    return _poly_trim(a)


def _poly_powmod(a, e, g, p):
    result = [1]
    base = _poly_rem(a[:], g, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, g, p)
        base = _poly_mulmod(base, base, g, p)
        e >>= 1
    return result


def _poly_gcd(a, b, p):
    a, b = _poly_trim(a[:]), _poly_trim(b[:])
    while b:
        a = _poly_rem(a, b, p)
        a, b = b, a
    return a


def _prime_factors(n):
    out, d = set(), 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def _poly_sub(a, b, p):
    n = max(len(a), len(b))
    return _poly_trim([((a[i] if i < len(a) else 0)
                        - (b[i] if i < len(b) else 0)) % p
                       for i in range(n)])


def _is_irreducible(g, p):
    """Rabin test for a monic g over F_p."""
    f = len(g) - 1
    x = [0, 1]
    xq = _poly_powmod(x, p ** f, g, p)
    if _poly_sub(xq, x, p):
        return False
    for q in _prime_factors(f):
        xe = _poly_powmod(x, p ** (f // q), g, p)
        d = _poly_gcd(_poly_sub(xe, x, p), g[:], p)
        if len(d) != 1:
            return False
    return True


def _is_prime(n):
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % small == 0:
            return n == small
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = (x * x) % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=None)
def canonical_modulus(p, f):
    """Coefficients (a_0, .., a_{f-1}) of the canonical monic irreducible.

    Candidates t^f + sum a_i t^i are scanned in increasing order of the
    integer sum(a_i p^i); the first irreducible one wins.  Degree 1 gives
    plain t, so f = 1 collapses to Z/p^N.
    """
    if f == 1:
        return (0,)
    for enc in range(p ** f):
        a, e = [], enc
        for _ in range(f):
            a.append(e % p)
            e //= p
        g = a + [1]
        if _is_irreducible(g, p):
            return tuple(a)
    raise FrobeniusLiftFailure("no irreducible modulus found",  # pragma: no cover
                               witness={"p": p, "f": f})


# --------------------------------------------------------------------------
# the coefficient ring
# --------------------------------------------------------------------------

_SPEC_CACHE = {}


class FieldSpec:
    """Unramified ring Z_q/p^N, q = p^f, with its Frobenius lift.

    Instances are interned by (p, f, N): equality is identity.
    """

    __slots__ = ("p", "f", "N", "pN", "g_low", "_red", "_sigma_mats",
                 "_inv_cache")

    def __new__(cls, p, f, N):
        key = (p, f, N)
        hit = _SPEC_CACHE.get(key)
        if hit is not None:
            return hit
        if f < 1 or N < 1:
            raise MalformedInput("need prime p >= 2, f >= 1, N >= 1",
                                 witness={"p": p, "f": f, "N": N})
        if not _is_prime(p):
            raise MalformedInput("p must be prime", witness={"p": p})
        self = object.__new__(cls)
        self.p, self.f, self.N = p, f, N
        self.pN = p ** N
        self.g_low = canonical_modulus(p, f)
        self._red = {}
        self._inv_cache = {}
        self._sigma_mats = None
        _SPEC_CACHE[key] = self
        return self

    # -- reduction data ----------------------------------------------------

    def red_rows(self, pM):
        """Rows for t^(f+k), k = 0..f-2, mod (g, pM)."""
        rows = self._red.get(pM)
        if rows is None:
            f = self.f
            row = tuple((-c) % pM for c in self.g_low)  # t^f
            out = []
            prev = row
            for _ in range(f - 1):
                out.append(prev)
                # multiply by t: shift, then fold the overflow back in
                top = prev[f - 1]
                nxt = [0] + list(prev[:f - 1])
                if top:
                    for j in range(f):
                        nxt[j] = (nxt[j] + top * row[j]) % pM
                prev = tuple(v % pM for v in nxt)
            rows = tuple(out)
            self._red[pM] = rows
        return rows

    # -- raw ring helpers (coefficient tuples) -------------------------------

    def raw_mul(self, a, b, pM):
        return _k.zq_mul(a, b, self.red_rows(pM), self.f, pM)

    def raw_pow(self, a, e, pM):
        res = (1,) + (0,) * (self.f - 1)
        while e:
            if e & 1:
                res = self.raw_mul(res, a, pM)
            a = self.raw_mul(a, a, pM)
            e >>= 1
        return res

    def raw_val(self, a, pM):
        """min_i val_p(a_i), or None if a == 0 mod pM."""
        best = None
        for c in a:
            c %= pM
            if c == 0:
                continue
            v = 0
            while c % self.p == 0:
                c //= self.p
                v += 1
            if best is None or v < best:
                best = v
                if v == 0:
                    break
        return best

    def raw_inv_unit(self, u, pM):
        """Inverse of a unit coefficient tuple mod (g, pM)."""
        p, f = self.p, self.f
        if f == 1:
            return (pow(u[0], -1, pM),)
        # inverse mod p by extended euclid over F_p[t]
        g = list(self.g_low) + [1]
        r0, r1 = g[:], _poly_trim([c % p for c in u])
        s0, s1 = [], [1]
        while len(r1) > 1:
            # divide r0 by r1
            q = [0] * (len(r0) - len(r1) + 1)
            r = r0[:]
            inv_lead = pow(r1[-1], p - 2, p)
            for k in range(len(r) - 1, len(r1) - 2, -1):
                c = (r[k] * inv_lead) % p
                q[k - len(r1) + 1] = c
                if c:
                    for j in range(len(r1)):
                        r[k - len(r1) + 1 + j] = (
                            r[k - len(r1) + 1 + j] - c * r1[j]) % p
            r = _poly_trim(r)
            # s0 - q*s1
            qs = [0] * (len(q) + len(s1) - 1) if q and s1 else []
            for i, qi in enumerate(q):
                if qi:
                    for j, sj in enumerate(s1):
                        qs[i + j] = (qs[i + j] + qi * sj) % p
            news = [( (s0[i] if i < len(s0) else 0) -
                      (qs[i] if i < len(qs) else 0)) % p
                    for i in range(max(len(s0), len(qs), 1))]
            r0, r1 = r1, r
            s0, s1 = s1, _poly_trim(news)
        if not r1:
            raise DivisionByZero("not a unit", witness=list(u))
        c = pow(r1[0], p - 2, p)
        y = [0] * f
        for i, si in enumerate(s1):
            y[i] = (si * c) % p
        y = tuple(y)
        # quadratic lift y <- y (2 - u y)
        prec, target = 1, pM
        pw = p
        while pw < target:
            pw = min(pw * pw, target)
            uy = self.raw_mul(u, y, pw)
            two_minus = tuple((-c) % pw if i else (2 - c) % pw
                              for i, c in enumerate(uy))
            y = self.raw_mul(y, two_minus, pw)
        return tuple(c % pM for c in y)

    # -- Frobenius ----------------------------------------------------------

    def _build_sigma(self):
        p, f, N, pN = self.p, self.f, self.N, self.pN
        if f == 1:
            self._sigma_mats = ()
            return
        # Hensel-lift the residue root t^p of g to Z_q/p^N
        g_full = list(self.g_low) + [1]
        x = self.raw_pow((0, 1) + (0,) * (f - 2), p, p)

        def g_at(x, pM):
            acc = (0,) * f
            for c in reversed(g_full):
                acc = self.raw_mul(acc, x, pM)
                acc = tuple((a + (c if i == 0 else 0)) % pM
                            for i, a in enumerate(acc))
            return acc

        def gprime_at(x, pM):
            acc = (0,) * f
            for k in range(f, 0, -1):
                c = k * g_full[k]
                acc = self.raw_mul(acc, x, pM)
                acc = tuple((a + (c if i == 0 else 0)) % pM
                            for i, a in enumerate(acc))
            return acc

        prec = 1
        while prec < N:
            prec = min(2 * prec, N)
            pM = p ** prec
            gx = g_at(x, pM)
            gpx = gprime_at(x, pM)
            if self.raw_val(gpx, pM) != 0:
                raise FrobeniusLiftFailure("derivative not a unit",
                                           witness=list(gpx))
            corr = self.raw_mul(gx, self.raw_inv_unit(gpx, pM), pM)
            x = tuple((a - b) % pM for a, b in zip(x, corr))
        if self.raw_val(g_at(x, pN), pN) is not None:
            raise FrobeniusLiftFailure("lift does not kill the modulus",
                                       witness=list(g_at(x, pN)))
        # powers sigma^k(t), then the f x f application matrices
        mats = []
        xk = x
        for k in range(1, f):
            cols = []
            pw = (1,) + (0,) * (f - 1)
            for _ in range(f):
                cols.append(pw)
                pw = self.raw_mul(pw, xk, pN)
            mats.append(tuple(cols))
            # sigma^{k+1}(t) = sum x_j sigma^k(t)^j  with x = sigma(t)
            nxt = (0,) * f
            pwk = (1,) + (0,) * (f - 1)
            for j in range(f):
                if x[j]:
                    nxt = tuple((a + x[j] * b) % pN for a, b in zip(nxt, pwk))
                pwk = self.raw_mul(pwk, xk, pN)
            xk = nxt
        if xk != (0, 1) + (0,) * (f - 2):
            raise FrobeniusLiftFailure("sigma^f is not the identity",
                                       witness=list(xk))
        self._sigma_mats = tuple(mats)

    def apply_sigma_raw(self, a, k, pM):
        """sigma^k on a coefficient tuple; needs pM <= p^N when f > 1."""
        k %= self.f
        if k == 0 or self.f == 1:
            return tuple(c % pM for c in a)
        if self._sigma_mats is None:
            self._build_sigma()
        cols = self._sigma_mats[k - 1]
        f = self.f
        out = [0] * f
        for j in range(f):
            cj = a[j]
            if cj:
                col = cols[j]
                for i in range(f):
                    out[i] += cj * col[i]
        return tuple(v % pM for v in out)

    # -- serialization -------------------------------------------------------

    def to_json(self):
        return {"p": self.p, "f": self.f, "N": self.N}

    @staticmethod
    def from_json(obj):
        try:
            return FieldSpec(int(obj["p"]), int(obj["f"]), int(obj["N"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput("bad field spec", witness=obj) from exc

    def __repr__(self):
        return f"FieldSpec(p={self.p}, f={self.f}, N={self.N})"


class ValuationAtLeast:
    """Marker returned for zero-to-precision values: 'valuation >= bound'."""

    __slots__ = ("bound",)

    def __init__(self, bound):
        self.bound = bound

    def __eq__(self, other):
        return isinstance(other, ValuationAtLeast) and self.bound == other.bound

    def __repr__(self):
        return f">= {self.bound}"


class PadicScalar:
    """An element of Q_q known to finite precision.

    Nonzero: value p^v * unit with the unit coefficient tuple certified
    mod p^rel (1 <= rel <= N), so the absolute precision is v + rel.
    Zero-to-precision: only the absolute bound survives (valuation >= rel,
    with v = unit = None).
    """

    __slots__ = ("spec", "v", "unit", "rel")

    def __init__(self, spec, v, unit, rel):
        self.spec = spec
        self.v = v
        self.unit = unit
        self.rel = rel

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(spec, bound=None):
        return PadicScalar(spec, None, None,
                           spec.N if bound is None else bound)

    @staticmethod
    def from_raw(spec, coeffs, shift, abs_prec):
        """Normalize p^shift * (coefficient tuple known mod p^(abs_prec - shift))."""
        rel_mod = abs_prec - shift
        if rel_mod <= 0:
            raise PrecisionExhausted("no certified digits",
                                     witness={"abs": abs_prec, "shift": shift})
        pM = spec.p ** rel_mod
        coeffs = tuple(c % pM for c in coeffs)
        d = spec.raw_val(coeffs, pM)
        if d is None:
            return PadicScalar.zero(spec, abs_prec)
        v = shift + d
        rel = min(abs_prec - v, spec.N)
        pw = spec.p ** d
        unit = tuple((c // pw) % spec.p ** rel for c in coeffs)
        return PadicScalar(spec, v, unit, rel)

    @staticmethod
    def from_int(spec, n):
        if n == 0:
            return PadicScalar.zero(spec)
        v = 0
        while n % spec.p == 0:
            n //= spec.p
            v += 1
        unit = (n % spec.pN,) + (0,) * (spec.f - 1)
        return PadicScalar(spec, v, unit, spec.N)

    @staticmethod
    def from_fraction(spec, fr):
        fr = Fraction(fr)
        if fr == 0:
            return PadicScalar.zero(spec)
        num, den = fr.numerator, fr.denominator
        v = 0
        while num % spec.p == 0:
            num //= spec.p
            v += 1
        while den % spec.p == 0:
            den //= spec.p
            v -= 1
        u = (num * pow(den, -1, spec.pN)) % spec.pN
        return PadicScalar(spec, v, (u,) + (0,) * (spec.f - 1), spec.N)

    @staticmethod
    def from_coeffs(spec, coeffs, valuation=0):
        """p^valuation * (integer coefficient tuple), exact input."""
        if len(coeffs) != spec.f:
            raise MalformedInput("coefficient tuple has wrong length",
                                 witness=list(coeffs))
        return PadicScalar.from_raw(spec, tuple(int(c) for c in coeffs),
                                    valuation, valuation + spec.N)

    # -- predicates ----------------------------------------------------------

    @property
    def is_zero(self):
        return self.unit is None

    def valuation(self):
        return ValuationAtLeast(self.rel) if self.is_zero else self.v

    @property
    def abs_prec(self):
        return self.rel if self.is_zero else self.v + self.rel

    # -- arithmetic ----------------------------------------------------------

    def _same(self, other):
        if self.spec is not other.spec:
            from .errors import FieldSpecMismatch
            raise FieldSpecMismatch("operands over different rings",
                                    witness={"left": self.spec.to_json(),
                                             "right": other.spec.to_json()})

    def __neg__(self):
        if self.is_zero:
            return self
        pM = self.spec.p ** self.rel
        return PadicScalar(self.spec, self.v,
                           tuple((-c) % pM for c in self.unit), self.rel)

    def __add__(self, other):
        self._same(other)
        spec = self.spec
        if self.is_zero and other.is_zero:
            return PadicScalar.zero(spec, min(self.rel, other.rel))
        if self.is_zero or other.is_zero:
            z, x = (self, other) if self.is_zero else (other, self)
            b = z.rel
            if x.v >= b:
                return PadicScalar.zero(spec, b)
            abs_out = min(b, x.abs_prec)
            rel = abs_out - x.v
            pM = spec.p ** rel
            return PadicScalar(spec, x.v,
                               tuple(c % pM for c in x.unit), rel)
        w = min(self.v, other.v)
        abs_out = min(self.abs_prec, other.abs_prec)
        mod = spec.p ** (abs_out - w)
        pa, pb = spec.p ** (self.v - w), spec.p ** (other.v - w)
        coeffs = tuple((pa * a + pb * b) % mod
                       for a, b in zip(self.unit, other.unit))
        return PadicScalar.from_raw(spec, coeffs, w, abs_out)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._same(other)
        spec = self.spec
        if self.is_zero or other.is_zero:
            b1 = self.rel if self.is_zero else self.v
            b2 = other.rel if other.is_zero else other.v
            return PadicScalar.zero(spec, b1 + b2)
        rel = min(self.rel, other.rel)
        pM = spec.p ** rel
        unit = spec.raw_mul(tuple(c % pM for c in self.unit),
                            tuple(c % pM for c in other.unit), pM)
        return PadicScalar(spec, self.v + other.v, unit, rel)

    def invert(self):
        if self.is_zero:
            raise DivisionByZero("inversion of zero-to-precision value",
                                 witness={"bound": self.rel})
        if self.rel <= 0:
            raise PrecisionExhausted("no digits left to invert")
        pM = self.spec.p ** self.rel
        inv = self.spec.raw_inv_unit(tuple(c % pM for c in self.unit), pM)
        return PadicScalar(self.spec, -self.v, inv, self.rel)

    def __truediv__(self, other):
        return self * other.invert()

    def sigma(self, k=1):
        """Frobenius lift, k-fold."""
        if self.is_zero or self.spec.f == 1:
            return self
        pM = self.spec.p ** self.rel
        img = self.spec.apply_sigma_raw(self.unit, k, pM)
        # an automorphism fixes valuations; the image of a unit is a unit
        return PadicScalar(self.spec, self.v, img, self.rel)

    def scale_p(self, k):
        """Multiply by p^k (exact)."""
        if self.is_zero:
            return PadicScalar.zero(self.spec, self.rel + k)
        return PadicScalar(self.spec, self.v + k, self.unit, self.rel)

    def mul_fraction(self, fr):
        return self * PadicScalar.from_fraction(self.spec, fr)

    def pow(self, e):
        if e < 0:
            return self.invert().pow(-e)
        out = PadicScalar.from_int(self.spec, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # -- comparisons ---------------------------------------------------------

    def is_zero_to_common_prec(self, other):
        d = self - other
        return d.is_zero

    def residue(self):
        """Image in the residue field as a coefficient tuple mod p."""
        if self.is_zero or self.v > 0:
            return (0,) * self.spec.f
        if self.v < 0:
            raise PrecisionExhausted("negative valuation has no residue",
                                     witness=self.v)
        return tuple(c % self.spec.p for c in self.unit)

    # -- conversion ----------------------------------------------------------

    def qp_components(self):
        """Coordinates on the power basis as scalars over FieldSpec(p, 1, N)."""
        spec = self.spec
        base = FieldSpec(spec.p, 1, spec.N)
        if self.is_zero:
            return [PadicScalar.zero(base, self.rel)] * spec.f
        return [PadicScalar.from_raw(base, (c,), self.v, self.abs_prec)
                for c in self.unit]

    def to_json(self):
        if self.is_zero:
            return {"valuation": None, "unit": None, "zero_precision": self.rel}
        pN = self.spec.pN
        u = list(self.unit)
        if self.rel < self.spec.N:
            pR = self.spec.p ** self.rel
            u = [c % pR for c in u]
        return {"valuation": self.v, "unit": [c % pN for c in u]}

    @staticmethod
    def from_json(spec, obj):
        try:
            if obj.get("unit") is None:
                b = obj.get("zero_precision", spec.N)
                return PadicScalar.zero(spec, int(b))
            v = int(obj["valuation"])
            unit = [int(c) for c in obj["unit"]]
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise MalformedInput("bad scalar", witness=obj) from exc
        return PadicScalar.from_coeffs(spec, unit, v)

    def __repr__(self):
        if self.is_zero:
            return f"O(p^{self.rel})"
        terms = []
        for i, c in enumerate(self.unit):
            if c:
                terms.append(f"{c}" if i == 0 else
                             (f"{c}*t" if i == 1 else f"{c}*t^{i}"))
        body = " + ".join(terms) or "0"
        return f"p^{self.v}*({body}) + O(p^{self.abs_prec})"


def scalar_eq_exact(a, b):
    """Units and valuations agree on the nose (same certified digits)."""
    if a.is_zero or b.is_zero:
        return a.is_zero and b.is_zero and a.rel == b.rel
    if a.v != b.v:
        return False
    rel = min(a.rel, b.rel)
    pM = a.spec.p ** rel
    return all((x - y) % pM == 0 for x, y in zip(a.unit, b.unit))
