"""F-isocrystals over Q_q at finite precision.

An isocrystal is a free module with an invertible sigma-semilinear
operator, stored as the matrix F of that operator on a fixed basis.
Slopes are valuations of Frobenius eigenvalues normalized by the inertia
degree; for p-divisible groups they land in [-1, 0] with 0 etale and -1
multiplicative.

Slope decomposition runs entirely in exact arithmetic: linearize by the
twisted f-fold product, take a division-free characteristic polynomial,
pass to the d-th power to clear slope denominators, peel one integral
slope at a time by quadratic Hensel lifting, and cut the module along
kernels of the resulting factors.
"""

from fractions import Fraction
from math import gcd

from .errors import (FieldSpecMismatch, InsufficientPrecision, MalformedInput,
                     NonInvertible, ResidueFieldTooSmall)
from .linalg import (charpoly, coords_in_column_span, kernel_basis,
                     mat_identity, mat_inverse, mat_mul, mat_sigma, mat_vec,
                     newton_root_valuations, twisted_power)
from .padic import FieldSpec, PadicScalar


class Isocrystal:
    """Frobenius matrix on a fixed basis of a free Q_q-module."""

    __slots__ = ("spec", "rank", "F")

    def __init__(self, spec, F):
        self.spec = spec
        self.rank = len(F)
        for row in F:
            if len(row) != self.rank:
                raise MalformedInput("frobenius matrix must be square",
                                     witness={"rank": self.rank})
        self.F = F

    @staticmethod
    def from_rationals(spec, rows):
        return Isocrystal(spec, [[PadicScalar.from_fraction(spec, c)
                                  for c in row] for row in rows])

    def to_json(self):
        return {"spec": self.spec.to_json(), "rank": self.rank,
                "frobenius": [[a.to_json() for a in row] for row in self.F]}

    @staticmethod
    def from_json(obj):
        try:
            spec = FieldSpec.from_json(obj["spec"])
            rank = int(obj["rank"])
            rows = obj["frobenius"]
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput("bad isocrystal", witness=obj) from exc
        if len(rows) != rank or any(len(r) != rank for r in rows):
            raise MalformedInput("frobenius shape disagrees with rank",
                                 witness={"rank": rank})
        F = [[PadicScalar.from_json(spec, c) for c in row] for row in rows]
        return Isocrystal(spec, F)

    def apply(self, x):
        """The semilinear operator: F . sigma(coordinates)."""
        return mat_vec(self.F, [c.sigma() for c in x])


def _linearize(M):
    return twisted_power(M.F, M.spec)


def _qp_charpoly(coeffs, spec):
    """Project charpoly coefficients to Q_p, checking sigma-invariance.

    The twisted product is conjugated into itself by Frobenius, so its
    characteristic polynomial has coefficients fixed by sigma; any
    certified t-component here means a real bug upstream.
    """
    spec_p = FieldSpec(spec.p, 1, spec.N)
    out = []
    for c in coeffs:
        comps = c.qp_components()
        for extra in comps[1:]:
            assert extra.is_zero, "charpoly coefficient escaped Q_p"
        base = comps[0]
        out.append(PadicScalar.from_raw(spec_p, (0,), 0, base.rel)
                   if base.is_zero else base)
    return out


def newton_slopes(M):
    """Sorted list of (slope, multiplicity); slopes are exact Fractions."""
    L = _linearize(M)
    coeffs = charpoly(L, M.spec)
    vals = newton_root_valuations(coeffs, M.spec)
    out = []
    for m, w in vals:
        out.append((m / M.spec.f, w))
    out.sort(key=lambda t: t[0])
    return out


# --------------------------------------------------------------------------
# slope factorization of an integral-polygon polynomial over Z_p
# --------------------------------------------------------------------------

def _ip_trim(a, pM):
    a = [c % pM for c in a]
    while a and a[-1] == 0:
        a.pop()
    return a


def _ip_mul(a, b, pM):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _ip_trim(out, pM)


def _ip_add(a, b, pM):
    n = max(len(a), len(b))
    return _ip_trim([((a[i] if i < len(a) else 0)
                      + (b[i] if i < len(b) else 0)) for i in range(n)], pM)


def _ip_sub(a, b, pM):
    n = max(len(a), len(b))
    return _ip_trim([((a[i] if i < len(a) else 0)
                      - (b[i] if i < len(b) else 0)) for i in range(n)], pM)


def _ip_divmod_monic(a, b, pM):
    """Quotient and remainder by a monic divisor, exact mod pM."""
    assert b and b[-1] % pM == 1 % pM
    a = [c % pM for c in a]
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], _ip_trim(a, pM)
    q = [0] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k] % pM
        if c:
            q[k - db] = c
            for j in range(db + 1):
                a[k - db + j] = (a[k - db + j] - c * b[j]) % pM
    return _ip_trim(q, pM), _ip_trim(a[:db], pM)


def _ext_gcd_fp(a, b, p):
    """(s, t) with s a + t b = 1 over F_p for coprime a, b."""
    from .padic import _poly_trim

    def divmod_fp(x, y):
        x = x[:]
        dy = len(y) - 1
        inv = pow(y[-1], p - 2, p)
        q = [0] * max(len(x) - dy, 0)
        for k in range(len(x) - 1, dy - 1, -1):
            c = (x[k] * inv) % p
            if c:
                q[k - dy] = c
                for j in range(dy + 1):
                    x[k - dy + j] = (x[k - dy + j] - c * y[j]) % p
        return _poly_trim(q), _poly_trim(x[:dy] if dy else [])

    r0, r1 = _poly_trim([c % p for c in a]), _poly_trim([c % p for c in b])
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = divmod_fp(r0, r1)

        def comb(u0, u1):
            qu = []
            if q and u1:
                qu = [0] * (len(q) + len(u1) - 1)
                for i, qi in enumerate(q):
                    if qi:
                        for j, uj in enumerate(u1):
                            qu[i + j] = (qu[i + j] + qi * uj) % p
            n = max(len(u0), len(qu), 1)
            return _poly_trim([((u0[i] if i < len(u0) else 0)
                                - (qu[i] if i < len(qu) else 0)) % p
                               for i in range(n)])

        r0, r1 = r1, r
        s0, s1 = s1, comb(s0, s1)
        t0, t1 = t1, comb(t0, t1)
    assert len(r0) == 1, "inputs were not coprime"
    inv = pow(r0[0], p - 2, p)
    s = [(c * inv) % p for c in s0]
    t = [(c * inv) % p for c in t0]
    return s, t


def _hensel_split(fpoly, g0, h0, p, M):
    """Lift f = g0 h0 (mod p) to mod p^M; all monic, f monic integral."""
    s, t = _ext_gcd_fp(g0, h0, p)
    g = [c % p for c in g0]
    h = [c % p for c in h0]
    prec = 1
    while prec < M:
        prec = min(2 * prec, M)
        pM = p ** prec
        e = _ip_sub(fpoly, _ip_mul(g, h, pM), pM)
        _, r = _ip_divmod_monic(_ip_mul(s, e, pM), h, pM)
        h = _ip_add(h, r, pM)
        if not h or h[-1] != 1:
            h = h + [0] * (len(h0) - len(h))
            h[-1] = 1  # monic by construction; re-pad trimmed zeros
        g, rem = _ip_divmod_monic(fpoly, h, pM)
        assert not rem, "hensel step lost divisibility"
        b = _ip_sub(_ip_add(_ip_mul(s, g, pM), _ip_mul(t, h, pM), pM),
                    [1], pM)
        c, d = _ip_divmod_monic(_ip_mul(s, b, pM), h, pM)
        s = _ip_sub(s, d, pM)
        num = _ip_sub([1], _ip_mul(s, g, pM), pM)
        t, rr = _ip_divmod_monic(num, h, pM)
        assert not rr, "bezout update lost divisibility"
    return g, h


def _peel_slope_factors(coeffs, vals, spec_p):
    """Split a monic Q_p polynomial along its (integer) root valuations.

    coeffs: c_0..c_n PadicScalar over Q_p, monic.  vals: ascending list of
    (root valuation m, width w), all m integral.  Returns one monic factor
    (list of PadicScalar) per valuation.
    """
    p = spec_p.p
    factors = []
    cur = coeffs
    rest_vals = list(vals)
    while len(rest_vals) > 1:
        m, w = rest_vals[0]
        n = len(cur) - 1
        scaled = [c.scale_p(-m * (n - i)) for i, c in enumerate(cur)]
        M = min(c.abs_prec if not c.is_zero else c.rel for c in scaled)
        if M < 1:
            raise InsufficientPrecision(
                "slope transform exhausts precision",
                witness={"valuation": m})
        pM = p ** M
        ints = []
        for c in scaled:
            if c.is_zero:
                ints.append(0)
            else:
                assert c.v >= 0, "transformed polynomial not integral"
                ints.append((c.unit[0] * p ** c.v) % pM)
        a = n - w
        assert all(ints[i] % p == 0 for i in range(a)), \
            "polygon does not match the claimed minimal valuation"
        hbar = [ints[a + j] % p for j in range(w)] + [1]
        assert hbar[0] % p != 0
        g0 = [0] * a + [1]
        A_fac, B_fac = _hensel_split(ints, g0, hbar, p, M)
        # untransform: factor with roots of valuation m
        factors.append(_untransform(B_fac, m, w, M, spec_p))
        cur = _untransform(A_fac, m, a, M, spec_p)
        rest_vals = [(mk, wk) for mk, wk in rest_vals[1:]]
    factors.append(cur)
    return factors


def _untransform(ip, m, deg, M, spec_p):
    """p^(m*deg) * B(T / p^m) for an integer-list monic B known mod p^M."""
    out = []
    ip = ip + [0] * (deg + 1 - len(ip))
    for i in range(deg + 1):
        shift = m * (deg - i)
        out.append(PadicScalar.from_raw(spec_p, (ip[i],), shift, M + shift))
    return out


def _poly_at_matrix(coeffs_qp, A, spec):
    """Evaluate a Q_p polynomial at a Q_q matrix (Horner)."""
    n = len(A)
    ident = mat_identity(spec, n)

    def lift(c):
        if c.is_zero:
            return PadicScalar.zero(spec, c.rel)
        return PadicScalar.from_raw(
            spec, (c.unit[0],) + (0,) * (spec.f - 1), c.v, c.abs_prec)

    out = [[lift(coeffs_qp[-1]) * e for e in row] for row in ident]
    for c in reversed(coeffs_qp[:-1]):
        out = mat_mul(out, A)
        cl = lift(c)
        for i in range(n):
            out[i][i] = out[i][i] + cl
    return out


def slope_split(M, fine=False):
    """Decompose into isoclinic blocks: list of (slope, basis, block).

    basis is a list of column vectors in the ambient coordinates; block is
    the restricted isocrystal on that basis.  Blocks come back with slopes
    strictly increasing and their direct sum is certified to fill the
    ambient module.

    With fine=True, isoclinic blocks of slope a/r (reduced) and rank > r
    must break into rank-r pieces; when that needs a residue extension
    (r does not divide f) the required degree is reported via
    ResidueFieldTooSmall and the base is never extended silently.
    """
    spec = M.spec
    slopes = newton_slopes(M)
    if fine:
        for lam, w in slopes:
            r = lam.denominator
            if w > r and spec.f % r != 0:
                need = spec.f * r // gcd(spec.f, r)
                raise ResidueFieldTooSmall(
                    "fine splitting this block needs a residue extension",
                    witness={"slope": str(lam), "rank": w,
                             "required_degree": need})
            if w > r and spec.f % r == 0:
                raise InsufficientPrecision(
                    "fine splitting inside one slope is not certified here",
                    witness={"slope": str(lam), "rank": w})
    L = _linearize(M)
    if len(slopes) == 1:
        lam, _ = slopes[0]
        basis = [[row[j] for row in mat_identity(spec, M.rank)]
                 for j in range(M.rank)]
        return [(lam, basis, M)]
    d = 1
    for lam, _ in slopes:
        d = d // gcd(d, (lam * spec.f).denominator) \
            * (lam * spec.f).denominator
    A = L
    for _ in range(d - 1):
        A = mat_mul(A, L)
    coeffs = charpoly(A, spec)
    vals = newton_root_valuations(coeffs, spec)
    expect = sorted((d * lam * spec.f, w) for lam, w in slopes)
    assert [(Fraction(m), w) for m, w in vals] == \
        [(Fraction(m), w) for m, w in expect], "power trick changed the polygon"
    int_vals = [(int(m), w) for m, w in vals]
    spec_p = FieldSpec(spec.p, 1, spec.N)
    qp_coeffs = _qp_charpoly(coeffs, spec)
    factors = _peel_slope_factors(qp_coeffs, int_vals, spec_p)
    blocks = []
    for (m, w), G in zip(int_vals, factors):
        GA = _poly_at_matrix(G, A, spec)
        basis = kernel_basis(GA, spec, expected_dim=w)
        targets = [M.apply(b) for b in basis]
        X = coords_in_column_span(basis, targets, spec)
        sub = Isocrystal(spec, X)
        lam = Fraction(m, d * spec.f)
        blocks.append((lam, basis, sub))
    blocks.sort(key=lambda t: t[0])
    # the blocks must fill the ambient space
    all_cols = [b for _, basis, _ in blocks for b in basis]
    try:
        mat_inverse([[all_cols[j][i] for j in range(len(all_cols))]
                     for i in range(M.rank)], spec)
    except NonInvertible as exc:
        raise InsufficientPrecision(
            "slope blocks do not certifiably span", witness=exc.witness)
    for (lam, _, sub), (lam0, w0) in zip(blocks, slopes):
        assert lam == lam0 and sub.rank == w0
    return blocks


def internal_hom(Y, Z):
    """Hom-isocrystal on matrix coordinates: g -> F_Z sigma(g) F_Y^{-1}."""
    if Y.spec is not Z.spec:
        raise FieldSpecMismatch("operands over different rings",
                                witness={"left": Y.spec.to_json(),
                                         "right": Z.spec.to_json()})
    spec = Y.spec
    FYinv = mat_inverse(Y.F, spec)
    nY, nZ = Y.rank, Z.rank
    n = nY * nZ
    F = [[None] * n for _ in range(n)]
    for i in range(nZ):
        for k in range(nY):
            for j in range(nZ):
                for l in range(nY):
                    F[i * nY + k][j * nY + l] = Z.F[i][j] * FYinv[l][k]
    return Isocrystal(spec, F)


def slope_part(M, which):
    """Sub-isocrystal cut by a slope predicate, with its embedding.

    which: "leq0" (slopes <= 0), "lt0" (slopes < 0) or ("eq", value).
    Returns (part, columns); the part can have rank 0.
    """
    if which == "leq0":
        keep = lambda lam: lam <= 0
    elif which == "lt0":
        keep = lambda lam: lam < 0
    elif isinstance(which, tuple) and len(which) == 2 and which[0] == "eq":
        target = Fraction(which[1])
        keep = lambda lam: lam == target
    else:
        raise MalformedInput("unknown slope predicate", witness=which)
    blocks = slope_split(M)
    chosen = [(lam, basis, sub) for lam, basis, sub in blocks if keep(lam)]
    cols = [b for _, basis, _ in chosen for b in basis]
    total = sum(sub.rank for _, _, sub in chosen)
    spec = M.spec
    zero = PadicScalar.zero(spec)
    F = [[zero] * total for _ in range(total)]
    off = 0
    for _, _, sub in chosen:
        for i in range(sub.rank):
            for j in range(sub.rank):
                F[off + i][off + j] = sub.F[i][j]
        off += sub.rank
    return Isocrystal(spec, F), cols


def standard_simple(spec, a, r):
    """The rank-r cyclic model with slope a/r: e_i -> e_i+1, e_r -> p^a e_1."""
    zero = PadicScalar.zero(spec)
    F = [[zero] * r for _ in range(r)]
    for i in range(r - 1):
        F[i + 1][i] = PadicScalar.from_int(spec, 1)
    F[0][r - 1] = PadicScalar.from_fraction(spec, Fraction(spec.p) ** a)
    return Isocrystal(spec, F)
