"""Lie algebras with a compatible semilinear Frobenius and optional lattice.

The objects here pair an isocrystal with structure constants for a Lie
bracket the Frobenius acts on by automorphisms, plus optionally a lattice
pinched between its Frobenius image and 1/p times itself and closed under
the bracket.  All validation is reported with witnesses instead of being
assumed.
"""

from fractions import Fraction

from .errors import (InsufficientPrecision, MalformedInput, NonInvertible,
                     NotNilpotent, SlopeNotStrictlyNegative, SlopeOutOfRange,
                     SplitUnavailable)
from .isocrystal import Isocrystal, newton_slopes, slope_part, slope_split
from .linalg import (coords_in_column_span, kernel_basis, mat_identity,
                     mat_inverse, mat_mul, mat_sigma, mat_transpose, mat_vec,
                     row_echelon, saturate_columns, solve_columns)
from .padic import FieldSpec, PadicScalar


class DieudonneLie:
    """iso: the (module, Frobenius) pair; bracket: c[i][j][k]; lattice: columns."""

    __slots__ = ("iso", "bracket", "lattice")

    def __init__(self, iso, bracket, lattice=None):
        n = iso.rank
        if len(bracket) != n or any(len(row) != n for row in bracket) or \
                any(len(c) != n for row in bracket for c in row):
            raise MalformedInput("structure constants must be n x n x n",
                                 witness={"rank": n})
        if lattice is not None:
            if len(lattice) != n or any(len(col) != n for col in lattice):
                raise MalformedInput("lattice needs n independent columns",
                                     witness={"rank": n})
        self.iso = iso
        self.bracket = bracket
        self.lattice = lattice

    @property
    def spec(self):
        return self.iso.spec

    @property
    def rank(self):
        return self.iso.rank

    def bracket_vec(self, x, y):
        """[x, y] for coordinate vectors of PadicScalar."""
        n = self.rank
        spec = self.spec
        out = [PadicScalar.zero(spec) for _ in range(n)]
        for i in range(n):
            xi = x[i]
            if xi.is_zero:
                continue
            for j in range(n):
                yj = y[j]
                if yj.is_zero:
                    continue
                cij = self.bracket[i][j]
                w = xi * yj
                for k in range(n):
                    if not cij[k].is_zero:
                        out[k] = out[k] + w * cij[k]
        return out

    def basis_vector(self, i):
        spec = self.spec
        return [PadicScalar.from_int(spec, 1) if j == i
                else PadicScalar.zero(spec) for j in range(self.rank)]

    def apply_phi(self, x):
        return self.iso.apply(x)

    def apply_phi_inverse(self, x):
        Finv = mat_inverse(self.iso.F, self.spec)
        y = mat_vec(Finv, x)
        back = self.spec.f - 1 if self.spec.f > 1 else 0
        return [c.sigma(back) for c in y]

    # -- serialization -------------------------------------------------------

    def to_json(self):
        lat = None
        if self.lattice is not None:
            lat = [[self.lattice[j][i].to_json()
                    for j in range(len(self.lattice))]
                   for i in range(self.rank)]
        return {"iso": self.iso.to_json(),
                "bracket": [[[c.to_json() for c in cell] for cell in row]
                            for row in self.bracket],
                "lattice": lat}

    @staticmethod
    def from_json(obj):
        try:
            iso = Isocrystal.from_json(obj["iso"])
            braw = obj["bracket"]
            lraw = obj.get("lattice")
        except (KeyError, TypeError) as exc:
            raise MalformedInput("bad algebra object", witness=obj) from exc
        spec = iso.spec
        bracket = [[[PadicScalar.from_json(spec, c) for c in cell]
                    for cell in row] for row in braw]
        lattice = None
        if lraw is not None:
            # JSON carries the matrix row-major; columns generate
            lattice = [[PadicScalar.from_json(spec, lraw[i][j])
                        for i in range(len(lraw))]
                       for j in range(len(lraw[0]))]
        return DieudonneLie(iso, bracket, lattice)

    @staticmethod
    def from_rationals(spec, frob_rows, bracket_rows, lattice_cols=None):
        iso = Isocrystal.from_rationals(spec, frob_rows)
        br = [[[PadicScalar.from_fraction(spec, c) for c in cell]
               for cell in row] for row in bracket_rows]
        lat = None
        if lattice_cols is not None:
            lat = [[PadicScalar.from_fraction(spec, c) for c in col]
                   for col in lattice_cols]
        return DieudonneLie(iso, br, lat)


# --------------------------------------------------------------------------
# validation
# --------------------------------------------------------------------------

def _vec_is_zero(v):
    return all(c.is_zero for c in v)


def _lattice_matrix(a):
    return [[a.lattice[j][i] for j in range(len(a.lattice))]
            for i in range(a.rank)]


def dla_validate(a):
    """Check every structural law; flags plus witnesses, never silent."""
    n = a.rank
    report = {"antisymmetry": True, "jacobi": True, "f_equivariance": True,
              "lattice_dieudonne": None, "lattice_bracket_closure": None,
              "witnesses": {}}
    for i in range(n):
        for j in range(i, n):
            for k in range(n):
                s = a.bracket[i][j][k] + a.bracket[j][i][k]
                if not s.is_zero:
                    report["antisymmetry"] = False
                    report["witnesses"].setdefault("antisymmetry", (i, j, k))
    basis = [a.basis_vector(i) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                t1 = a.bracket_vec(basis[i], a.bracket_vec(basis[j], basis[k]))
                t2 = a.bracket_vec(basis[j], a.bracket_vec(basis[k], basis[i]))
                t3 = a.bracket_vec(basis[k], a.bracket_vec(basis[i], basis[j]))
                s = [x + y + z for x, y, z in zip(t1, t2, t3)]
                if not _vec_is_zero(s):
                    report["jacobi"] = False
                    report["witnesses"].setdefault("jacobi", (i, j, k))
    F = a.iso.F
    for i in range(n):
        for j in range(i + 1, n):
            lhs = a.apply_phi(a.bracket[i][j])
            rhs = a.bracket_vec([F[r][i] for r in range(n)],
                                [F[r][j] for r in range(n)])
            if not _vec_is_zero([x - y for x, y in zip(lhs, rhs)]):
                report["f_equivariance"] = False
                report["witnesses"].setdefault("f_equivariance", (i, j))
    if a.lattice is not None:
        spec = a.spec
        Lat = _lattice_matrix(a)
        phi_lat = mat_mul(F, mat_sigma(Lat))
        try:
            B = solve_columns(Lat, phi_lat, spec)
            Binv = mat_inverse(B, spec)
        except NonInvertible as exc:
            raise InsufficientPrecision("lattice comparison indeterminate",
                                        witness=exc.witness)
        ok = True
        wit = None
        for i in range(n):
            for j in range(n):
                e = B[i][j]
                if not e.is_zero and e.v < -1:
                    ok, wit = False, ("phi_image_exceeds", j)
                e = Binv[i][j]
                if not e.is_zero and e.v < 0:
                    ok, wit = False, ("lattice_not_inside_phi_image", j)
        report["lattice_dieudonne"] = ok
        if wit:
            report["witnesses"]["lattice_dieudonne"] = wit
        ok = True
        for i in range(len(a.lattice)):
            for j in range(i + 1, len(a.lattice)):
                v = a.bracket_vec(a.lattice[i], a.lattice[j])
                if _vec_is_zero(v):
                    continue
                coords = solve_columns(Lat, [[c] for c in v], spec)
                for r in range(n):
                    c = coords[r][0]
                    if not c.is_zero and c.v < 0:
                        ok = False
                        report["witnesses"].setdefault(
                            "lattice_bracket_closure", (i, j))
        report["lattice_bracket_closure"] = ok
    return report


def require_valid_bracket(a):
    rep = dla_validate(a)
    for key in ("antisymmetry", "jacobi", "f_equivariance"):
        if not rep[key]:
            raise MalformedInput(f"bracket law violated: {key}",
                                 witness=rep["witnesses"].get(key))
    return rep


# --------------------------------------------------------------------------
# subspace helpers (row-span form)
# --------------------------------------------------------------------------

def span_basis(vectors, spec):
    """Echelon basis of the span of the given coordinate vectors."""
    vecs = [v for v in vectors if not _vec_is_zero(v)]
    if not vecs:
        return []
    rows, pivots = row_echelon(vecs)
    return [rows[r] for r, _ in pivots]


def in_span(basis, v, spec):
    if _vec_is_zero(v):
        return True
    if not basis:
        return False
    try:
        coords_in_column_span([list(b) for b in basis], [list(v)], spec)
        return True
    except (InsufficientPrecision, NonInvertible):
        return False


# --------------------------------------------------------------------------
# lower central series and lattice filtration
# --------------------------------------------------------------------------

def lower_central_series(a):
    """Chain of spans [full, [a,a], [a,[a,a]], ..], empty last; plus class."""
    require_valid_bracket(a)
    n = a.rank
    spec = a.spec
    basis = [a.basis_vector(i) for i in range(n)]
    chain = [span_basis(basis, spec)]
    while chain[-1]:
        cur = chain[-1]
        nxt_vecs = []
        for b in basis:
            for w in cur:
                nxt_vecs.append(a.bracket_vec(b, w))
        nxt = span_basis(nxt_vecs, spec)
        if len(nxt) >= len(cur):
            raise NotNilpotent("lower central series stabilized",
                               witness={"dimension": len(nxt)})
        for w in nxt:
            phi_w = a.apply_phi(w)
            assert in_span(nxt, phi_w, spec), "series term not F-stable"
        chain.append(nxt)
    n_class = len(chain) - 1
    return chain, n_class


def lattice_intersect_subspace(lattice_cols, subspace_basis, spec):
    """Basis (ambient coordinates) of lattice ∩ span(subspace_basis).

    The membership conditions are rows annihilating the subspace; their
    composite with the lattice matrix has kernel of known dimension, which
    certifies the elimination; the kernel is then saturated to unit pivots
    over the valuation ring.
    """
    n = len(lattice_cols[0])
    w = len(subspace_basis)
    if w == 0:
        return []
    # rows annihilating the span: q with <b_i, q> = 0 for every basis vector
    W_T = [list(b) for b in subspace_basis]
    ann = kernel_basis(W_T, spec, expected_dim=n - w)
    if not ann:
        sat = saturate_columns([list(c) for c in lattice_cols], spec)
        return sat
    Lat = [[lattice_cols[j][i] for j in range(len(lattice_cols))]
           for i in range(n)]
    QL = mat_mul([list(q) for q in ann], Lat)
    K = kernel_basis(QL, spec, expected_dim=w)
    sat = saturate_columns(K, spec)
    return [mat_vec(Lat, c) for c in sat]


def lattice_filtration(a, chain=None):
    """Lattices cut out by the lower central series, plus bracket-closure."""
    if a.lattice is None:
        raise MalformedInput("no lattice on this algebra")
    spec = a.spec
    if chain is None:
        chain, _ = lower_central_series(a)
    lattices = [list(a.lattice)]
    for sub in chain[1:]:
        lattices.append(lattice_intersect_subspace(a.lattice, sub, spec))
    ok = True
    witnesses = []
    Lat0 = _lattice_matrix(a)
    for i in range(len(lattices) - 1):
        nxt = lattices[i + 1]
        for g in a.lattice:
            for h in lattices[i]:
                v = a.bracket_vec(g, h)
                if _vec_is_zero(v):
                    continue
                if not nxt:
                    ok = False
                    witnesses.append(("nonzero_into_zero", i))
                    continue
                try:
                    coords = coords_in_column_span(
                        [list(c) for c in nxt], [list(v)], spec)
                except (InsufficientPrecision, NonInvertible):
                    ok = False
                    witnesses.append(("outside_span", i))
                    continue
                for row in coords:
                    c = row[0]
                    if not c.is_zero and c.v < 0:
                        ok = False
                        witnesses.append(("non_integral", i))
    return lattices, ok, witnesses


# --------------------------------------------------------------------------
# dimensions and centrality
# --------------------------------------------------------------------------

def pdiv_dimension(slopes, check_range=True):
    """Sum of (-slope) * multiplicity over a slope multiset.

    check_range=False skips the [-1, 0] window (used by the root-datum
    cross-check, where the same additive formula applies to wider windows).
    """
    total = Fraction(0)
    for lam, mult in slopes:
        lam = Fraction(lam)
        if check_range and not (-1 <= lam <= 0):
            raise SlopeOutOfRange("slope outside [-1, 0]",
                                  witness={"slope": str(lam)})
        total += -lam * mult
    if total.denominator == 1:
        return int(total)
    return total


def minimal_slope_center_check(a):
    """True iff the minimal-slope part commutes with everything.

    Precondition: all slopes strictly negative.  For every input passing
    dla_validate this must return true; false indicates an internal bug.
    """
    slopes = newton_slopes(a.iso)
    for lam, _ in slopes:
        if lam >= 0:
            raise SlopeNotStrictlyNegative("nonnegative slope present",
                                           witness={"slope": str(lam)})
    require_valid_bracket(a)
    mu1 = min(lam for lam, _ in slopes)
    try:
        _, cols = slope_part(a.iso, ("eq", mu1))
    except InsufficientPrecision as exc:
        raise SplitUnavailable("minimal-slope part not computable",
                               witness=exc.witness)
    n = a.rank
    for b in cols:
        for i in range(n):
            v = a.bracket_vec(b, a.basis_vector(i))
            if not _vec_is_zero(v):
                return False, {"witness_basis_index": i}
    return True, None


# --------------------------------------------------------------------------
# automorphism Lie algebra
# --------------------------------------------------------------------------

def aut_lie_algebra(a, mode="derivation"):
    """Solve for endomorphisms commuting with Frobenius and the bracket law.

    mode="derivation": g[x,y] = [gx,y] + [x,gy] (the Lie-algebra condition).
    mode="literal": [gx,y] + [x,gy] = 0 with the quadratic term dropped;
    the report flags the exclusion instead of substituting silently.
    """
    if mode not in ("derivation", "literal"):
        raise MalformedInput("unknown mode", witness=mode)
    require_valid_bracket(a)
    spec = a.spec
    n = a.rank
    f = spec.f
    spec_p = FieldSpec(spec.p, 1, spec.N)
    basis = [a.basis_vector(i) for i in range(n)]
    tpow = [PadicScalar.from_coeffs(spec, tuple(1 if s == m else 0
                                                for s in range(f)))
            for m in range(f)]

    def equations(g):
        eqs = []
        gF = mat_mul(g, a.iso.F)
        Fsg = mat_mul(a.iso.F, mat_sigma(g))
        for i in range(n):
            for j in range(n):
                eqs.append(gF[i][j] - Fsg[i][j])
        for i in range(n):
            for j in range(i + 1, n):
                gei = [g[r][i] for r in range(n)]
                gej = [g[r][j] for r in range(n)]
                t1 = a.bracket_vec(gei, basis[j])
                t2 = a.bracket_vec(basis[i], gej)
                if mode == "derivation":
                    gc = mat_vec(g, a.bracket[i][j])
                    eqs.extend(gc[r] - t1[r] - t2[r] for r in range(n))
                else:
                    eqs.extend(t1[r] + t2[r] for r in range(n))
        return eqs

    zero = PadicScalar.zero(spec)
    unknowns = []
    columns = []
    for r in range(n):
        for c in range(n):
            for m in range(f):
                g = [[zero] * n for _ in range(n)]
                g[r][c] = tpow[m]
                col = equations(g)
                comps = []
                for e in col:
                    comps.extend(e.qp_components())
                columns.append(comps)
                unknowns.append((r, c, m))
    rows = [[columns[u][e] for u in range(len(unknowns))]
            for e in range(len(columns[0]))]
    sol = kernel_basis(rows, spec_p)
    out = []
    for gamma in sol:
        g = [[zero] * n for _ in range(n)]
        for idx, (r, c, m) in enumerate(unknowns):
            coef = gamma[idx]
            if coef.is_zero:
                continue
            lifted = PadicScalar.from_raw(
                spec, (coef.unit[0],) + (0,) * (f - 1), coef.v,
                coef.abs_prec)
            g[r][c] = g[r][c] + lifted * tpow[m]
        out.append(g)
    return {"dimension": len(out), "basis": out, "mode": mode,
            "quadratic_term_dropped": mode == "literal"}


def smallest_f_stable_subalgebra(a, generators):
    """Closure of the generators under Phi, Phi^-1 and the bracket."""
    require_valid_bracket(a)
    spec = a.spec
    cur = span_basis(generators, spec)
    while True:
        new_vecs = list(cur)
        for w in cur:
            new_vecs.append(a.apply_phi(w))
            new_vecs.append(a.apply_phi_inverse(w))
        for i in range(len(cur)):
            for j in range(i + 1, len(cur)):
                new_vecs.append(a.bracket_vec(cur[i], cur[j]))
        nxt = span_basis(new_vecs, spec)
        if len(nxt) == len(cur):
            cur = nxt
            break
        cur = nxt
    for w in cur:
        assert in_span(cur, a.apply_phi(w), spec)
    for i in range(len(cur)):
        for j in range(i + 1, len(cur)):
            assert in_span(cur, a.bracket_vec(cur[i], cur[j]), spec)
    return cur
