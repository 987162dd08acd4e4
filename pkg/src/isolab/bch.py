"""Group laws on nilpotent Lie algebras via the log(exp X exp Y) series.

The series is computed in the free associative algebra with exact
rationals, then projected onto the Lyndon basis of the free Lie algebra
by triangular elimination; the projection fails loudly if the input were
not a Lie element, so Lie-ness is certified rather than assumed.  Two
independent oracles (matrix logarithms of unipotent products, and the
classical double-sum formula for low degree) guard the coefficient table.
"""

import random
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .errors import (DegreeTooLarge, InsufficientPrecision, MalformedInput,
                     SplitUnavailable)
from .dieudonne import (lattice_intersect_subspace, lower_central_series,
                        span_basis)
from .isocrystal import slope_split
from .linalg import coords_in_column_span, rat_solve, solve_columns
from .padic import PadicScalar

MAX_CLASS = 8


# --------------------------------------------------------------------------
# truncated free associative algebra: dict word -> Fraction
# --------------------------------------------------------------------------

def _am_add(a, b):
    out = dict(a)
    for w, c in b.items():
        v = out.get(w, Fraction(0)) + c
        if v:
            out[w] = v
        elif w in out:
            del out[w]
    return out


def _am_scale(c, a):
    if not c:
        return {}
    return {w: c * v for w, v in a.items()}


def _am_mul(a, b, cap):
    out = {}
    for w1, c1 in a.items():
        for w2, c2 in b.items():
            if len(w1) + len(w2) <= cap:
                w = w1 + w2
                v = out.get(w, Fraction(0)) + c1 * c2
                if v:
                    out[w] = v
                elif w in out:
                    del out[w]
    return out


def _am_exp(a, cap):
    out = {"": Fraction(1)}
    term = {"": Fraction(1)}
    for k in range(1, cap + 1):
        term = _am_scale(Fraction(1, k), _am_mul(term, a, cap))
        if not term:
            break
        out = _am_add(out, term)
    return out


def _am_log(a, cap):
    z = dict(a)
    z.pop("", None)
    out = {}
    zk = {"": Fraction(1)}
    for k in range(1, cap + 1):
        zk = _am_mul(zk, z, cap)
        if not zk:
            break
        out = _am_add(out, _am_scale(Fraction((-1) ** (k + 1), k), zk))
    return out


# --------------------------------------------------------------------------
# Lyndon words and their standard bracketings
# --------------------------------------------------------------------------

def lyndon_words(max_len, alphabet="XY"):
    """Duval's generation, lexicographic within each run."""
    out = []
    k = len(alphabet)
    w = [0]
    while w:
        out.append("".join(alphabet[i] for i in w))
        last = w
        w = last[:]
        while len(w) < max_len:
            w.append(w[len(w) % len(last)])
        while w and w[-1] == k - 1:
            w.pop()
        if w:
            w[-1] += 1
            last = w
        else:
            break
        w = w[:]
    out.sort(key=lambda s: (len(s), s))
    return [s for s in out if len(s) <= max_len]


def is_lyndon(w):
    return all(w < w[i:] for i in range(1, len(w)))


@lru_cache(maxsize=None)
def standard_factorization(w):
    """(u, v) with v the lexicographically least proper suffix."""
    assert len(w) >= 2
    v = min(w[i:] for i in range(1, len(w)))
    u = w[:len(w) - len(v)]
    return u, v


@lru_cache(maxsize=None)
def _expand_bracket(w, cap):
    """Associative expansion of the standard bracketing of a Lyndon word."""
    if len(w) == 1:
        return {w: Fraction(1)}
    u, v = standard_factorization(w)
    eu = _expand_bracket(u, cap)
    ev = _expand_bracket(v, cap)
    return _am_add(_am_mul(eu, ev, cap),
                   _am_scale(Fraction(-1), _am_mul(ev, eu, cap)))


class FreeLieElement:
    """Rational combination of standard Lyndon brackets, graded degree <= degree."""

    __slots__ = ("degree", "terms")

    def __init__(self, degree, terms):
        self.degree = degree
        self.terms = {w: Fraction(c) for w, c in terms.items() if c}

    def to_json(self):
        return [{"word": w, "coeff": f"{c.numerator}/{c.denominator}"
                 if c.denominator != 1 else str(c.numerator)}
                for w, c in sorted(self.terms.items(),
                                   key=lambda t: (len(t[0]), t[0]))]

    @staticmethod
    def from_json(obj):
        try:
            terms = {e["word"]: Fraction(e["coeff"]) for e in obj}
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput("bad series element", witness=obj) from exc
        deg = max((len(w) for w in terms), default=1)
        for w in terms:
            if not (w and set(w) <= {"X", "Y"} and is_lyndon(w)):
                raise MalformedInput("words must be Lyndon over {X,Y}",
                                     witness=w)
        return FreeLieElement(deg, terms)

    def associative(self):
        out = {}
        for w, c in self.terms.items():
            out = _am_add(out, _am_scale(c, _expand_bracket(w, self.degree)))
        return out


def lie_project(assoc, cap):
    """Lyndon coefficients of a Lie element given associatively.

    Works degree by degree: the smallest surviving word must be Lyndon and
    is the leading word of its standard bracket, so greedy elimination is
    triangular; any residue certifies the input was not a Lie element.
    """
    terms = {}
    for d in range(1, cap + 1):
        rest = {w: c for w, c in assoc.items() if len(w) == d and c}
        while rest:
            w = min(rest)
            assert is_lyndon(w), f"non-Lie input: leading word {w}"
            lam = rest[w]
            terms[w] = lam
            for ww, vv in _expand_bracket(w, cap).items():
                if len(ww) != d:
                    continue
                nv = rest.get(ww, Fraction(0)) - lam * vv
                if nv:
                    rest[ww] = nv
                elif ww in rest:
                    del rest[ww]
    return terms


@lru_cache(maxsize=None)
def bch_series(c):
    """log(exp X exp Y) truncated beyond degree c, on the Lyndon basis."""
    if not (1 <= c <= MAX_CLASS):
        raise DegreeTooLarge("class bound is 1..%d" % MAX_CLASS,
                             witness={"requested": c})
    X = {"X": Fraction(1)}
    Y = {"Y": Fraction(1)}
    prod = _am_mul(_am_exp(X, c), _am_exp(Y, c), c)
    series = _am_log(prod, c)
    return FreeLieElement(c, lie_project(series, c))


def denominator_profile(c):
    """Primes dividing any coefficient denominator up to degree c."""
    primes = set()
    for coeff in bch_series(c).terms.values():
        d = coeff.denominator
        q = 2
        while q * q <= d:
            while d % q == 0:
                primes.add(q)
                d //= q
            q += 1
        if d > 1:
            primes.add(d)
    assert all(q <= c for q in primes), "denominator prime exceeds the class"
    return primes


# --------------------------------------------------------------------------
# oracles
# --------------------------------------------------------------------------

def _mat_rat_mul(A, B):
    n = len(A)
    return [[sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)]


def _mat_rat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def _mat_rat_scale(c, A):
    return [[c * a for a in row] for row in A]


def _mat_exp_nilpotent(A, cap):
    n = len(A)
    out = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    term = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for k in range(1, cap + 1):
        term = _mat_rat_scale(Fraction(1, k), _mat_rat_mul(term, A))
        out = _mat_rat_add(out, term)
    return out


def _mat_log_unipotent(U, cap):
    n = len(U)
    Z = [[U[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    out = [[Fraction(0)] * n for _ in range(n)]
    Zk = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for k in range(1, cap + 1):
        Zk = _mat_rat_mul(Zk, Z)
        out = _mat_rat_add(out, _mat_rat_scale(Fraction((-1) ** (k + 1), k),
                                               Zk))
    return out


def _eval_word_matrices(w, A, B, memo):
    if w in memo:
        return memo[w]
    if w == "X":
        memo[w] = A
        return A
    if w == "Y":
        memo[w] = B
        return B
    u, v = standard_factorization(w)
    Mu = _eval_word_matrices(u, A, B, memo)
    Mv = _eval_word_matrices(v, A, B, memo)
    out = _mat_rat_add(_mat_rat_mul(Mu, Mv),
                       _mat_rat_scale(Fraction(-1), _mat_rat_mul(Mv, Mu)))
    memo[w] = out
    return out


def oracle_check(c, trials=3, seed=20240901):
    """Degreewise agreement with log(exp tA exp tB) on nilpotent matrices.

    The two-parameter trick: evaluating at c distinct t isolates each
    graded piece by a Vandermonde solve, which is then compared exactly
    with the evaluated series.  Returns the first mismatch or None.
    """
    rng = random.Random(seed)
    fle = bch_series(c)
    n = c + 1
    for trial in range(trials):
        A = [[Fraction(0)] * n for _ in range(n)]
        B = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                A[i][j] = Fraction(rng.randrange(-9, 10))
                B[i][j] = Fraction(rng.randrange(-9, 10))
        ts = [Fraction(k) for k in range(1, c + 1)]
        logs = []
        for t in ts:
            Ut = _mat_rat_mul(_mat_exp_nilpotent(_mat_rat_scale(t, A), c),
                              _mat_exp_nilpotent(_mat_rat_scale(t, B), c))
            logs.append(_mat_log_unipotent(Ut, c))
        # solve sum_d t^d C_d = log(t) entrywise
        pieces = [[[Fraction(0)] * n for _ in range(n)] for _ in range(c)]
        V = [[t ** d for d in range(1, c + 1)] for t in ts]
        for i in range(n):
            for j in range(n):
                rhs = [logs[k][i][j] for k in range(c)]
                if all(v == 0 for v in rhs):
                    continue
                sol = rat_solve(V, rhs)
                for d in range(c):
                    pieces[d][i][j] = sol[d]
        memo = {}
        for d in range(1, c + 1):
            S = [[Fraction(0)] * n for _ in range(n)]
            for w, coeff in fle.terms.items():
                if len(w) == d:
                    S = _mat_rat_add(S, _mat_rat_scale(
                        coeff, _eval_word_matrices(w, A, B, memo)))
            if S != pieces[d - 1]:
                return {"trial": trial, "degree": d}
    return None


def double_sum_series(c):
    """The classical double-sum expansion, as an independent low-degree check.

    Sum over k of (-1)^(k-1)/k times words X^p1 Y^q1 .. X^pk Y^qk weighted
    by 1/((sum p+q) * prod p! q!), right-nested bracketing.  Exponential
    cost; intended for c <= 4.
    """
    if c > 5:
        raise DegreeTooLarge("double-sum route is for low degree only",
                             witness={"requested": c})

    def nested(word):
        if len(word) == 1:
            return {word: Fraction(1)}
        head = {word[0]: Fraction(1)}
        tail = nested(word[1:])
        return _am_add(_am_mul(head, tail, c),
                       _am_scale(Fraction(-1), _am_mul(tail, head, c)))

    total = {}
    # compositions: k blocks (p_i, q_i), p_i + q_i >= 1, total length <= c
    def blocks(remaining, k_so_far, word, weight):
        nonlocal total
        if word:
            m = len(word)
            sign = Fraction((-1) ** (k_so_far - 1), k_so_far)
            contrib = _am_scale(sign * weight / m, nested(word))
            total = _am_add(total, contrib)
        if remaining == 0:
            return
        for p in range(remaining + 1):
            for q in range(remaining - p + 1):
                if p + q == 0:
                    continue
                blocks(remaining - p - q, k_so_far + 1,
                       word + "X" * p + "Y" * q,
                       weight / (factorial(p) * factorial(q)))

    blocks(c, 0, "", Fraction(1))
    return FreeLieElement(c, lie_project(total, c))


# --------------------------------------------------------------------------
# group law on nilpotent algebras
# --------------------------------------------------------------------------

def group_mul(a, x, y, n_class=None):
    """x * y via the truncated series; exact because the bracket is nilpotent."""
    if n_class is None:
        _, n_class = lower_central_series(a)
    fle = bch_series(max(1, n_class))
    memo = {}

    def ev(w):
        if w in memo:
            return memo[w]
        if w == "X":
            return x
        if w == "Y":
            return y
        u, v = standard_factorization(w)
        out = a.bracket_vec(ev(u), ev(v))
        memo[w] = out
        return out

    spec = a.spec
    acc = [PadicScalar.zero(spec) for _ in range(a.rank)]
    for w, coeff in fle.terms.items():
        vec = ev(w)
        for i in range(a.rank):
            if not vec[i].is_zero:
                acc[i] = acc[i] + vec[i].mul_fraction(coeff)
    return acc


def lattice_closure_check(a, samples=100, seed=0, n_class=None):
    """Whether the group law maps lattice x lattice into the lattice.

    For p > class this must hold (series coefficients are p-integral) and
    is asserted over the samples; for p <= class a witness is searched for
    and returned when found.
    """
    if a.lattice is None:
        raise MalformedInput("no lattice on this algebra")
    if n_class is None:
        _, n_class = lower_central_series(a)
    spec = a.spec
    Lat = [[a.lattice[j][i] for j in range(len(a.lattice))]
           for i in range(a.rank)]
    rng = random.Random(seed)

    def in_lattice(v):
        coords = solve_columns(Lat, [[c] for c in v], spec)
        for row in coords:
            c = row[0]
            if not c.is_zero and c.v < 0:
                return False
        return True

    def sample_pairs():
        m = len(a.lattice)
        for i in range(m):
            for j in range(m):
                yield ([1 if s == i else 0 for s in range(m)],
                       [1 if s == j else 0 for s in range(m)])
        for _ in range(samples):
            yield ([rng.randrange(-3, 4) for _ in range(m)],
                   [rng.randrange(-3, 4) for _ in range(m)])

    for cx, cy in sample_pairs():
        x = [PadicScalar.zero(spec) for _ in range(a.rank)]
        y = [PadicScalar.zero(spec) for _ in range(a.rank)]
        for s, k in enumerate(cx):
            if k:
                x = [xi + li.mul_fraction(k)
                     for xi, li in zip(x, a.lattice[s])]
        for s, k in enumerate(cy):
            if k:
                y = [yi + li.mul_fraction(k)
                     for yi, li in zip(y, a.lattice[s])]
        prod = group_mul(a, x, y, n_class=n_class)
        if not in_lattice(prod):
            assert spec.p <= n_class, \
                "closure must hold for p above the class"
            return False, {"x": cx, "y": cy}
    return True, None


# --------------------------------------------------------------------------
# projection defect onto the minimal-slope center
# --------------------------------------------------------------------------

def rho_defect(a, xprime, x, n):
    """d = rho(x' * x) - rho(x') - rho(x), with lattice membership report.

    rho projects onto the minimal-slope part along the direct sum of the
    remaining slope blocks (an F-equivariant complement).  For x' in the
    lattice and x with complement-part denominators bounded by p^n, the
    defect lands in p^-n times the minimal-slope part of the lattice.
    """
    spec = a.spec
    try:
        blocks = slope_split(a.iso)
    except InsufficientPrecision as exc:
        raise SplitUnavailable("no certified slope complement",
                               witness=exc.witness)
    mu1 = min(lam for lam, _, _ in blocks)
    b_cols = [c for lam, basis, _ in blocks for c in basis if lam == mu1]
    c_cols = [c for lam, basis, _ in blocks for c in basis if lam != mu1]
    P_cols = b_cols + c_cols
    nb = len(b_cols)

    def rho(v):
        coords = coords_in_column_span([list(c) for c in P_cols],
                                       [list(v)], spec)
        out = [PadicScalar.zero(spec) for _ in range(a.rank)]
        for s in range(nb):
            cs = coords[s][0]
            if cs.is_zero:
                continue
            for i in range(a.rank):
                if not b_cols[s][i].is_zero:
                    out[i] = out[i] + cs * b_cols[s][i]
        return out

    prod = group_mul(a, xprime, x)
    d = [pm - px - pxp for pm, px, pxp in
         zip(rho(prod), rho(x), rho(xprime))]
    report = {"n": n, "member": None, "witness": None}
    if a.lattice is not None:
        bplus = lattice_intersect_subspace(a.lattice,
                                           span_basis(b_cols, spec), spec)
        if all(c.is_zero for c in d):
            report["member"] = True
        elif not bplus:
            report["member"] = False
            report["witness"] = {"reason": "zero minimal-slope lattice"}
        else:
            try:
                coords = coords_in_column_span(
                    [list(c) for c in bplus], [list(d)], spec)
                ok = all(row[0].is_zero or row[0].v >= -n for row in coords)
                report["member"] = ok
                if not ok:
                    report["witness"] = {
                        "valuations": [str(row[0].valuation())
                                       for row in coords]}
            except (InsufficientPrecision,) as exc:
                report["member"] = False
                report["witness"] = exc.witness
    return d, report
