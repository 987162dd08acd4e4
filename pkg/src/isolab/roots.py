"""Root data with a rational cocharacter: slope multisets, leaf dimensions,
nilpotency of the attached unipotent algebra, and the prime-size gate.

Everything is done in matrix coordinates of the standard representation, so
the cocharacter pairs with roots by plain coordinate differences and the
unipotent algebras are honest matrix algebras over Q.
"""

from fractions import Fraction

from .errors import MalformedInput, UnsupportedType
from .dieudonne import pdiv_dimension
from .isocrystal import Isocrystal, newton_slopes, slope_part
from .linalg import rat_mat_mul, rat_rank, rat_solve

_TYPES = ("GL", "GSp", "SO")


def _positive_root_positions(group_type, n):
    """Upper-triangular matrix positions carrying one root vector each."""
    if group_type == "GL":
        return [(i, j) for i in range(n) for j in range(i + 1, n)]
    if group_type == "GSp":
        g = n // 2
        short = [(i, j) for i in range(n) for j in range(i + 1, n)
                 if (i + 1) + (j + 1) <= n]
        longs = [(i, n - 1 - i) for i in range(g)]
        return short + longs
    if group_type == "SO":
        return [(i, j) for i in range(n) for j in range(i + 1, n)
                if (i + 1) + (j + 1) < n + 1]
    raise UnsupportedType("no root table for this type",
                          witness={"type": group_type})


class RootDatumWithCochar:
    """Split classical root datum plus a dominant rational cocharacter.

    nu is given in matrix coordinates (length n); for SO a length-floor(n/2)
    vector is also accepted and expanded antisymmetrically.
    """

    __slots__ = ("group_type", "n", "positive_roots", "two_rho", "nu")

    def __init__(self, group_type, n, nu):
        if group_type not in _TYPES:
            raise UnsupportedType("supported types: GL, GSp, SO",
                                  witness={"type": group_type})
        if group_type == "GSp" and n % 2:
            raise MalformedInput("GSp needs even matrix size",
                                 witness={"n": n})
        if n < 2:
            raise MalformedInput("matrix size must be at least 2",
                                 witness={"n": n})
        nu = [Fraction(v) for v in nu]
        if group_type == "SO" and len(nu) == n // 2:
            mid = [Fraction(0)] if n % 2 else []
            nu = nu + mid + [-v for v in reversed(nu)]
        if len(nu) != n:
            raise MalformedInput("cocharacter length must match matrix size",
                                 witness={"n": n, "len": len(nu)})
        roots = []
        for i, j in _positive_root_positions(group_type, n):
            alpha = [0] * n
            alpha[i] += 1
            alpha[j] -= 1
            roots.append(tuple(alpha))
        two_rho = tuple(sum(a[k] for a in roots) for k in range(n))
        assert all(sum(a[k] for a in roots) == two_rho[k] for k in range(n))
        for alpha in roots:
            if _pair(alpha, nu) < 0:
                raise MalformedInput(
                    "cocharacter is not dominant",
                    witness={"root": list(alpha),
                             "pairing": str(_pair(alpha, nu))})
        self.group_type = group_type
        self.n = n
        self.positive_roots = roots
        self.two_rho = two_rho
        self.nu = tuple(nu)

    @staticmethod
    def from_json(obj):
        try:
            return RootDatumWithCochar(obj["type"], int(obj["n"]),
                                       [Fraction(v) for v in obj["nu"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput("bad root datum", witness=obj) from exc

    def to_json(self):
        return {"type": self.group_type, "n": self.n,
                "nu": [str(v) for v in self.nu]}


def _pair(alpha, nu):
    return sum(a * v for a, v in zip(alpha, nu))


def slope_multiset_from_roots(d):
    """{(-<alpha,nu>, mult)} over positive roots pairing strictly positively."""
    counts = {}
    for alpha in d.positive_roots:
        t = _pair(alpha, d.nu)
        if t > 0:
            counts[-t] = counts.get(-t, 0) + 1
    return sorted(counts.items())


def leaf_dimension(d):
    """<2 rho, nu>; cross-checked against the p-divisible dimension sum."""
    dim = _pair(d.two_rho, d.nu)
    assert dim == pdiv_dimension(slope_multiset_from_roots(d),
                                 check_range=False)
    return int(dim) if dim.denominator == 1 else dim


# --------------------------------------------------------------------------
# matrix realizations
# --------------------------------------------------------------------------

def _form_sign(group_type, n, i):
    # antidiagonal form: symplectic flips sign on the lower half
    if group_type == "GSp":
        return 1 if i < n // 2 else -1
    return 1


def _root_vector(group_type, n, i, j):
    """Matrix of the root vector at upper position (i, j)."""
    X = [[Fraction(0)] * n for _ in range(n)]
    X[i][j] = Fraction(1)
    if group_type == "GL":
        return X
    mi, mj = n - 1 - j, n - 1 - i
    if (mi, mj) == (i, j):  # symplectic long root
        return X
    X[mi][mj] = -Fraction(_form_sign(group_type, n, i)
                          * _form_sign(group_type, n, j))
    return X


def _mat_bracket(A, B):
    n = len(A)
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for k in range(n):
            a = A[i][k]
            b = B[i][k]
            if a == 0 and b == 0:
                continue
            for j in range(n):
                out[i][j] += a * B[k][j] - b * A[k][j]
    return out


def _flatten(X):
    return [x for row in X for x in row]


def _span_rank(mats):
    rows = [_flatten(X) for X in mats]
    rows = [r for r in rows if any(x != 0 for x in r)]
    return rat_rank(rows) if rows else 0


def unipotent_nilpotency(d):
    """Lower-central length of the strictly-positive-pairing root algebra."""
    basis = [_root_vector(d.group_type, d.n, i, j)
             for (i, j) in _positive_root_positions(d.group_type, d.n)
             if _pair_pos(d, i, j) > 0]
    if not basis:
        return 0
    layer = basis
    n_class = 0
    prev_rank = _span_rank(layer)
    while layer and prev_rank > 0:
        n_class += 1
        nxt = [_mat_bracket(g, h) for g in basis for h in layer]
        nxt = [X for X in nxt if any(x != 0 for row in X for x in row)]
        rank = _span_rank(nxt)
        assert rank < prev_rank or rank == 0, "central series stalled"
        layer = nxt
        prev_rank = rank
        if rank == 0:
            return n_class
    return n_class


def _pair_pos(d, i, j):
    alpha = [0] * d.n
    alpha[i] += 1
    alpha[j] -= 1
    return _pair(alpha, d.nu)


def coxeter_gate(d, p):
    """Size gate {h, h_weyl, n_class, p_ge_h, p_gt_n}.

    h is the bound actually used downstream (for SO the stated orthogonal
    bound 2(m-1), which is smaller than the Weyl-group Coxeter number in
    the odd case); h_weyl is the classical invariant.  Both are reported
    so the discrepancy stays visible.  n_class <= h_weyl - 1 is asserted.
    """
    m = d.n // 2
    if d.group_type == "GL":
        h = h_weyl = d.n
    elif d.group_type == "GSp":
        h = h_weyl = d.n
    elif d.group_type == "SO":
        h = 2 * (m - 1)
        h_weyl = 2 * m if d.n % 2 else 2 * m - 2
    else:  # pragma: no cover
        raise UnsupportedType("no Coxeter number for this type",
                              witness={"type": d.group_type})
    n_class = unipotent_nilpotency(d)
    assert n_class <= h_weyl - 1
    return {"h": h, "h_weyl": h_weyl, "n_class": n_class,
            "p_ge_h": p >= h, "p_gt_n": p > n_class}


# --------------------------------------------------------------------------
# the adjoint isocrystal
# --------------------------------------------------------------------------

def _lie_algebra_basis(group_type, n):
    """Rational basis of the Lie algebra in the standard representation."""
    if group_type == "GL":
        basis = []
        for i in range(n):
            for j in range(n):
                X = [[Fraction(0)] * n for _ in range(n)]
                X[i][j] = Fraction(1)
                basis.append(X)
        return basis
    ups = _positive_root_positions(group_type, n)
    basis = [_root_vector(group_type, n, i, j) for (i, j) in ups]
    basis += [[[r[j][i] for j in range(n)] for i in range(n)]
              for r in basis]  # opposite root spaces by transposition
    # torus part: diagonal matrices compatible with the form
    m = n // 2
    if group_type == "GSp":
        diag_dim = m + 1
        for k in range(m):
            X = [[Fraction(0)] * n for _ in range(n)]
            X[k][k] = Fraction(1)
            X[n - 1 - k][n - 1 - k] = Fraction(-1)
            basis.append(X)
        basis.append([[Fraction(1 if i == j else 0) for j in range(n)]
                      for i in range(n)])  # similitude center
    else:
        diag_dim = m
        for k in range(m):
            X = [[Fraction(0)] * n for _ in range(n)]
            X[k][k] = Fraction(1)
            X[n - 1 - k][n - 1 - k] = Fraction(-1)
            basis.append(X)
    assert _span_rank(basis) == len(basis)
    return basis


def _rat_inv(B):
    n = len(B)
    cols = []
    for j in range(n):
        e = [Fraction(1 if i == j else 0) for i in range(n)]
        x = rat_solve(B, e)
        assert x is not None, "matrix is singular"
        cols.append(x)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def adjoint_isocrystal(d, b, spec):
    """Isocrystal on the Lie algebra with Frobenius X -> b sigma(X) b^-1.

    b is a rational invertible matrix; sigma fixes rational entries, so in
    the flattened basis the Frobenius matrix is the conjugation action.
    """
    n = d.n
    if len(b) != n or any(len(r) != n for r in b):
        raise MalformedInput("group element size mismatch",
                             witness={"n": n})
    b = [[Fraction(x) for x in row] for row in b]
    binv = _rat_inv(b)
    basis = _lie_algebra_basis(d.group_type, n)
    dim = len(basis)
    cols = [_flatten(X) for X in basis]
    A = [[cols[k][e] for k in range(dim)] for e in range(n * n)]
    F = [[Fraction(0)] * dim for _ in range(dim)]
    for k, X in enumerate(basis):
        img = rat_mat_mul(rat_mat_mul(b, X), binv)
        sol = rat_solve(A, _flatten(img))
        assert sol is not None, "conjugation left the Lie algebra"
        for l in range(dim):
            F[l][k] = sol[l]
    return Isocrystal.from_rationals(spec, F)


def adjoint_slope_cross_check(d, spec):
    """Negative slopes of the adjoint action of diag(p^-nu) vs the root side.

    Requires integral nu; returns the common multiset.
    """
    p = spec.p
    for v in d.nu:
        if v.denominator != 1:
            raise MalformedInput("cross-check needs an integral cocharacter",
                                 witness={"nu": [str(x) for x in d.nu]})
    b = [[Fraction(0)] * d.n for _ in range(d.n)]
    for i, v in enumerate(d.nu):
        b[i][i] = Fraction(p) ** int(-v)
    iso = adjoint_isocrystal(d, b, spec)
    part, _ = slope_part(iso, "lt0")
    got = newton_slopes(part) if part.rank else []
    want = slope_multiset_from_roots(d)
    assert [(s, m) for s, m in got] == [(Fraction(s), m) for s, m in want], \
        (got, want)
    return want
