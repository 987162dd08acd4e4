"""Linear algebra over Q_q at finite precision, plus exact rational helpers.

Matrices are plain lists of lists of PadicScalar (row major).  The hot
paths (characteristic polynomials, twisted products) integralize to raw
coefficient tuples and run on the _speedups kernel; everything else does
row reduction with valuation pivoting so precision loss stays explicit.
"""

from fractions import Fraction

from . import _speedups as _k
from .errors import InsufficientPrecision, NonInvertible
from .padic import FieldSpec, PadicScalar


# --------------------------------------------------------------------------
# basic PadicScalar matrix ops
# --------------------------------------------------------------------------

def mat_identity(spec, n):
    one = PadicScalar.from_int(spec, 1)
    zero = PadicScalar.zero(spec)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    m, k = len(A), len(B)
    n = len(B[0])
    out = []
    for i in range(m):
        row = []
        for j in range(n):
            acc = A[i][0] * B[0][j]
            for s in range(1, k):
                acc = acc + A[i][s] * B[s][j]
            row.append(acc)
        out.append(row)
    return out


def mat_vec(A, x):
    out = []
    for row in A:
        acc = row[0] * x[0]
        for s in range(1, len(x)):
            acc = acc + row[s] * x[s]
        out.append(acc)
    return out


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(c, A):
    return [[c * a for a in row] for row in A]


def mat_sigma(A, k=1):
    return [[a.sigma(k) for a in row] for row in A]


def mat_transpose(A):
    return [list(col) for col in zip(*A)]


def mat_from_rationals(spec, rows):
    return [[PadicScalar.from_fraction(spec, c) for c in row] for row in rows]


def vec_add(u, v):
    return [a + b for a, b in zip(u, v)]


def vec_sub(u, v):
    return [a - b for a, b in zip(u, v)]


def vec_scale(c, u):
    return [c * a for a in u]


# --------------------------------------------------------------------------
# twisted product and characteristic polynomial
# --------------------------------------------------------------------------

def twisted_power(F, spec):
    """F * sigma(F) * .. * sigma^(f-1)(F): a genuinely linear operator.

    The result commutes with the semilinear structure because sigma^f is
    the identity on the coefficient ring.
    """
    L = F
    for k in range(1, spec.f):
        L = mat_mul(L, mat_sigma(F, k))
    return L


def _integralize(A, spec):
    """Return (raw rows, e, W): A = p^-e * raw with raw known mod p^W."""
    e = 0
    W = None
    for row in A:
        for a in row:
            if not a.is_zero and a.v < -e:
                e = -a.v
            ap = a.abs_prec
            if W is None or ap < W:
                W = ap
    W = (W if W is not None else spec.N) + e
    if W < 1:
        raise InsufficientPrecision("matrix entries carry no certified digits",
                                    witness={"working_precision": W})
    pW = spec.p ** W
    raw = []
    for row in A:
        rrow = []
        for a in row:
            if a.is_zero:
                rrow.append((0,) * spec.f)
            else:
                pv = spec.p ** (a.v + e)
                rrow.append(tuple((pv * c) % pW for c in a.unit))
        raw.append(rrow)
    return raw, e, W


def charpoly(A, spec):
    """Coefficients c_0..c_n of det(T - A) = sum c_j T^j, c_n = 1.

    Division-free (Berkowitz) on integralized raw tuples, then descaled;
    per-coefficient precision reflects the descaling honestly.
    """
    n = len(A)
    raw, e, W = _integralize(A, spec)
    pW = spec.p ** W
    red = spec.red_rows(pW)
    f = spec.f
    one = (1,) + (0,) * (f - 1)
    p_vec = [one]
    for r in range(1, n + 1):
        Mp = [raw[i][:r - 1] for i in range(r - 1)]
        C = [raw[i][r - 1] for i in range(r - 1)]
        R = [raw[r - 1][j] for j in range(r - 1)]
        a_rr = raw[r - 1][r - 1]
        col = [one, tuple((-c) % pW for c in a_rr)]
        u = C
        for _ in range(r - 1):
            dot = _k.zq_vec_dot(R, u, red, f, pW)
            col.append(tuple((-c) % pW for c in dot))
            if len(col) == r + 1:
                break
            u = _k.zq_mat_vec(Mp, u, red, f, pW)
        # Toeplitz multiply: new[i] = sum_k col[i-k] * old[k]
        zero_t = (0,) * f
        new = []
        for i in range(r + 1):
            acc = [0] * f
            for k in range(len(p_vec)):
                d = i - k
                if d < 0 or d >= len(col):
                    continue
                ck, pk = col[d], p_vec[k]
                if ck == zero_t or pk == zero_t:
                    continue
                prod = _k.zq_mul(ck, pk, red, f, pW)
                for c in range(f):
                    acc[c] += prod[c]
            new.append(tuple(v % pW for v in acc))
        p_vec = new
    # p_vec[k] multiplies T^(n-k); descale
    coeffs = []
    for j in range(n + 1):
        rawc = p_vec[n - j]
        shift = -e * (n - j)
        coeffs.append(PadicScalar.from_raw(spec, rawc, shift, W + shift))
    return coeffs


# --------------------------------------------------------------------------
# Newton polygons
# --------------------------------------------------------------------------

def lower_hull(points):
    """Lower convex hull of (x, y) pairs sorted by x; returns vertex list."""
    pts = sorted(points)
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop if pt makes hull[-1] non-convex (not strictly below chord)
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def newton_root_valuations(coeffs, spec):
    """Root valuations (as Fractions) with multiplicities, from c_0..c_n.

    Certified points are hull candidates; zero-to-precision coefficients
    are only tolerated when their bound keeps them on or above the hull,
    otherwise the polygon itself is uncertain and we refuse.
    """
    n = len(coeffs) - 1
    certified, bounded = [], []
    for i, c in enumerate(coeffs):
        if c.is_zero:
            bounded.append((i, c.rel))
        else:
            certified.append((i, c.v))
    if not certified or certified[0][0] != 0:
        raise NonInvertible("constant coefficient is zero to precision",
                            witness={"bound": coeffs[0].rel})
    if certified[-1][0] != n:
        raise InsufficientPrecision("leading coefficient uncertified")
    hull = lower_hull(certified)

    def hull_height(x):
        for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
            if x1 <= x <= x2:
                return Fraction(y1) + Fraction(y2 - y1, x2 - x1) * (x - x1)
        return None

    for i, b in bounded:
        h = hull_height(i)
        if h is not None and Fraction(b) < h:
            raise InsufficientPrecision(
                "interior coefficient bound dips below the certified hull",
                witness={"index": i, "bound": b, "needed": str(h)})
    out = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slope = Fraction(y2 - y1, x2 - x1)
        out.append((-slope, x2 - x1))
    out.sort(key=lambda t: t[0])
    return out


# --------------------------------------------------------------------------
# row reduction with valuation pivoting
# --------------------------------------------------------------------------

def _pivot_row(rows, col, start):
    best, best_v = None, None
    for i in range(start, len(rows)):
        a = rows[i][col]
        if a.is_zero:
            continue
        if best_v is None or a.v < best_v:
            best, best_v = i, a.v
    return best


def row_echelon(M):
    """In-place echelon on a copy; returns (rows, pivot (row,col) list)."""
    rows = [list(r) for r in M]
    m = len(rows)
    n = len(rows[0]) if m else 0
    pivots = []
    pr = 0
    for pc in range(n):
        if pr >= m:
            break
        i = _pivot_row(rows, pc, pr)
        if i is None:
            continue
        rows[pr], rows[i] = rows[i], rows[pr]
        inv = rows[pr][pc].invert()
        rows[pr] = [a * inv for a in rows[pr]]
        for r in range(m):
            if r != pr:
                c = rows[r][pc]
                if not c.is_zero:
                    rows[r] = [a - c * b for a, b in zip(rows[r], rows[pr])]
        pivots.append((pr, pc))
        pr += 1
    return rows, pivots


def kernel_basis(M, spec, expected_dim=None):
    """Columns spanning ker(M); certification via expected_dim when known."""
    if not M:
        return []
    n = len(M[0])
    rows, pivots = row_echelon(M)
    pivot_cols = {pc for _, pc in pivots}
    free_cols = [j for j in range(n) if j not in pivot_cols]
    if expected_dim is not None and len(free_cols) != expected_dim:
        raise InsufficientPrecision(
            "kernel dimension could not be certified",
            witness={"expected": expected_dim, "found": len(free_cols)})
    basis = []
    zero = PadicScalar.zero(spec)
    one = PadicScalar.from_int(spec, 1)
    for j in free_cols:
        vec = [zero] * n
        vec[j] = one
        for (pr, pc) in pivots:
            vec[pc] = -rows[pr][j]
        basis.append(vec)
    return basis


def solve_columns(A, B, spec):
    """X with A X = B (A square invertible); raises NonInvertible."""
    n = len(A)
    k = len(B[0])
    aug = [list(A[i]) + list(B[i]) for i in range(n)]
    rows, pivots = row_echelon(aug)
    pivot_cols = [pc for _, pc in pivots if pc < n]
    if len(pivot_cols) != n:
        raise NonInvertible("matrix is singular to working precision",
                            witness={"rank": len(pivot_cols), "size": n})
    X = [[None] * k for _ in range(n)]
    for (pr, pc) in pivots:
        if pc < n:
            for j in range(k):
                X[pc][j] = rows[pr][n + j]
    return X


def mat_inverse(A, spec):
    return solve_columns(A, mat_identity(spec, len(A)), spec)


def coords_in_column_span(basis_cols, targets, spec):
    """Solve basis * X = targets where basis is n x r of full column rank.

    Overdetermined: solved via pivoting rows of the basis; consistency of
    the remaining rows is checked to available precision.
    """
    n = len(basis_cols[0])
    r = len(basis_cols)
    k = len(targets)
    A = [[basis_cols[j][i] for j in range(r)] for i in range(n)]
    T = [[targets[j][i] for j in range(k)] for i in range(n)]
    aug = [A[i] + T[i] for i in range(n)]
    rows, pivots = row_echelon(aug)
    pivot_cols = [pc for _, pc in pivots if pc < r]
    if len(pivot_cols) != r:
        raise NonInvertible("columns are dependent to working precision",
                            witness={"rank": len(pivot_cols), "cols": r})
    X = [[None] * k for _ in range(r)]
    used_rows = set()
    for (pr, pc) in pivots:
        if pc < r:
            used_rows.add(pr)
            for j in range(k):
                X[pc][j] = rows[pr][r + j]
    for i in range(len(rows)):
        if i in used_rows:
            continue
        for j in range(k):
            resid = rows[i][r + j]
            if not resid.is_zero:
                raise InsufficientPrecision(
                    "target is outside the span to certified precision",
                    witness={"row": i, "col": j,
                             "residual_valuation": resid.v})
    return X


def saturate_columns(cols, spec):
    """Basis of (Q-span of cols) intersected with the standard lattice.

    Column reduction over the local ring: repeatedly pick the globally
    minimal-valuation entry, normalize its column to a unit pivot, clear
    its row from the other columns.  The result is triangular with unit
    pivots, hence generates the saturation.
    """
    work = [list(c) for c in cols]
    n = len(work[0]) if work else 0
    out = []
    used_rows = set()
    while work:
        best = None
        for j, col in enumerate(work):
            for i in range(n):
                if i in used_rows:
                    continue
                a = col[i]
                if a.is_zero:
                    continue
                if best is None or a.v < best[2]:
                    best = (j, i, a.v)
        if best is None:
            raise InsufficientPrecision(
                "dependent columns while saturating a lattice",
                witness={"remaining": len(work)})
        j, i, _ = best
        inv = work[j][i].invert()
        piv = [a * inv for a in work[j]]
        del work[j]
        for col in work:
            c = col[i]
            if not c.is_zero:
                for s in range(n):
                    col[s] = col[s] - c * piv[s]
        out.append(piv)
        used_rows.add(i)
    return out


# --------------------------------------------------------------------------
# exact rational linear algebra (for root data and series oracles)
# --------------------------------------------------------------------------

def rat_mat_mul(A, B):
    m, k = len(A), len(B)
    n = len(B[0])
    return [[sum((A[i][s] * B[s][j] for s in range(k)), Fraction(0))
             for j in range(n)] for i in range(m)]


def rat_rref(M):
    """Reduced row echelon form over Q; returns (rows, pivot cols)."""
    rows = [[Fraction(x) for x in r] for r in M]
    m = len(rows)
    n = len(rows[0]) if m else 0
    pivots = []
    pr = 0
    for pc in range(n):
        if pr >= m:
            break
        sel = None
        for i in range(pr, m):
            if rows[i][pc] != 0:
                sel = i
                break
        if sel is None:
            continue
        rows[pr], rows[sel] = rows[sel], rows[pr]
        inv = 1 / rows[pr][pc]
        rows[pr] = [a * inv for a in rows[pr]]
        for r in range(m):
            if r != pr and rows[r][pc] != 0:
                c = rows[r][pc]
                rows[r] = [a - c * b for a, b in zip(rows[r], rows[pr])]
        pivots.append(pc)
        pr += 1
    return rows, pivots


def rat_nullspace(M):
    """Basis of the rational kernel, as column vectors."""
    if not M:
        return []
    n = len(M[0])
    rows, pivots = rat_rref(M)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for j in free:
        vec = [Fraction(0)] * n
        vec[j] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -rows[r][j]
        basis.append(vec)
    return basis


def rat_solve(A, b):
    """One solution of A x = b over Q, or None if inconsistent."""
    m = len(A)
    n = len(A[0]) if m else 0
    aug = [list(map(Fraction, A[i])) + [Fraction(b[i])] for i in range(m)]
    rows, pivots = rat_rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for r, pc in enumerate(pivots):
        x[pc] = rows[r][n]
    return x


def rat_rank(M):
    return len(rat_rref(M)[1]) if M else 0
