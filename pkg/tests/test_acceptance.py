"""The twelve gate checks, one test each; run with -v for per-line results.

Each test prints one `criterion NN: PASS` line (visible under -s) with the
scale it ran at; a failure shows up as the test's FAILED line.
"""

import itertools
import json
import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from isolab import (DieudonneLie, FieldSpec, Isocrystal, PadicScalar,
                    PerfectedSeries, RestrictedParams, RootDatumWithCochar,
                    adjoint_slope_cross_check, denominator_profile,
                    lattice_closure_check, leaf_dimension,
                    membership_restricted, minimal_slope_center_check,
                    newton_slopes, oracle_check, ps_add, rho_defect,
                    rigidity_check, slope_multiset_from_roots, slope_split)
from isolab.dieudonne import dla_validate, pdiv_dimension
from isolab.errors import MalformedInput
from isolab.linalg import rat_nullspace
from isolab.roots import coxeter_gate

F = Fraction


def _report(num, detail):
    print(f"criterion {num:02d}: PASS ({detail})")


def _iso(rows, spec):
    return Isocrystal.from_rationals(
        spec, [[F(str(c)) for c in row] for row in rows])


def test_criterion_01_slope_normalization():
    t0 = time.time()
    spec = FieldSpec(5, 1, 16)
    assert newton_slopes(_iso([[1]], spec)) == [(F(0), 1)]
    assert newton_slopes(_iso([["1/5"]], spec)) == [(F(-1), 1)]
    _report(1, f"exact, {time.time() - t0:.2f}s")


def test_criterion_02_supersingular_block():
    t0 = time.time()
    spec = FieldSpec(5, 1, 16)
    M = _iso([[0, "1/5"], [1, 0]], spec)
    assert newton_slopes(M) == [(F(-1, 2), 2)]
    blocks = slope_split(M)
    assert len(blocks) == 1
    lam, _, sub = blocks[0]
    assert lam == F(-1, 2) and sub.rank == 2
    _report(2, f"exact, {time.time() - t0:.2f}s")


def _dominant_tuples(length, coords=(0, -1, -2)):
    for nu in itertools.combinations_with_replacement(
            sorted(coords, reverse=True), length):
        yield nu


def test_criterion_03_dimension_identity():
    t0 = time.time()
    cases = 0
    data = [("GL", 2), ("GL", 3), ("GL", 4), ("GSp", 2), ("GSp", 4),
            ("GSp", 6), ("SO", 4), ("SO", 5), ("SO", 6), ("SO", 7)]
    for typ, n in data:
        for nu in _dominant_tuples(n):
            try:
                d = RootDatumWithCochar(typ, n, [F(v) for v in nu])
            except MalformedInput:
                continue
            cases += 1
            dim = leaf_dimension(d)
            assert dim == pdiv_dimension(slope_multiset_from_roots(d),
                                         check_range=False)
    assert cases <= 200
    assert leaf_dimension(
        RootDatumWithCochar("GSp", 4, [F(0), F(0), F(-1), F(-1)])) == 3
    assert leaf_dimension(RootDatumWithCochar("GL", 2, [F(0), F(-1)])) == 1
    _report(3, f"{cases} root data, {time.time() - t0:.2f}s")


def test_criterion_04_adjoint_cross_check():
    t0 = time.time()
    spec = FieldSpec(5, 1, 48)
    cases = 0
    for n in (2, 3, 4):
        for nu in _dominant_tuples(n):
            d = RootDatumWithCochar("GL", n, [F(v) for v in nu])
            got = adjoint_slope_cross_check(d, spec)
            assert got == slope_multiset_from_roots(d)
            cases += 1
    _report(4, f"{cases} diagonal classes, {time.time() - t0:.2f}s")


def test_criterion_05_bch_oracle():
    t0 = time.time()
    for c in range(1, 6):
        assert oracle_check(c) is None, f"oracle disagrees at degree {c}"
    for c in range(1, 9):
        primes = denominator_profile(c)
        assert all(q <= c for q in primes), (c, primes)
    _report(5, f"degrees 1-5 exact + profiles 1-8, {time.time() - t0:.2f}s")


def _heisenberg(p):
    spec = FieldSpec(p, 1, 16)
    c = [[[F(0)] * 3 for _ in range(3)] for _ in range(3)]
    c[0][1][2], c[1][0][2] = F(1), F(-1)
    frob = [[F(1, p), 0, 0], [0, F(1), 0], [0, 0, F(1, p)]]
    eye = [[F(1), 0, 0], [F(0), 1, 0], [F(0), 0, 1]]
    return DieudonneLie.from_rationals(spec, frob, c, lattice_cols=eye)


def test_criterion_06_lattice_closure_gate():
    t0 = time.time()
    ok, wit = lattice_closure_check(_heisenberg(5), samples=100, seed=0)
    assert ok and wit is None
    bad, wit2 = lattice_closure_check(_heisenberg(2), samples=100, seed=0)
    assert not bad and wit2 is not None
    _report(6, f"p=5 closed 100/100, p=2 witness {wit2}, "
               f"{time.time() - t0:.2f}s")


def test_criterion_07_rho_defect_containment():
    t0 = time.time()
    spec = FieldSpec(5, 1, 24)
    c = [[[F(0)] * 3 for _ in range(3)] for _ in range(3)]
    c[0][1][2], c[1][0][2] = F(1), F(-1)
    frob = [[F(0), F(-1, 5), 0], [F(1), 0, 0], [0, 0, F(1, 5)]]
    eye = [[F(1), 0, 0], [F(0), 1, 0], [F(0), 0, 1]]
    a = DieudonneLie.from_rationals(spec, frob, c, lattice_cols=eye)
    rng = random.Random(20240907)
    checked = 0
    for n in range(4):
        for _ in range(50):
            xp = [PadicScalar.from_int(spec, rng.randrange(-9, 10))
                  for _ in range(3)]
            x = [PadicScalar.from_fraction(
                    spec, F(rng.randrange(-9, 10), 5 ** n)),
                 PadicScalar.from_fraction(
                    spec, F(rng.randrange(-9, 10), 5 ** n)),
                 PadicScalar.from_int(spec, rng.randrange(-9, 10))]
            _, rep = rho_defect(a, xp, x, n)
            assert rep["member"] is True, (n, rep)
            checked += 1
    _report(7, f"{checked} pairs over n in 0..3, {time.time() - t0:.2f}s")


# -- criterion 8: random valid strictly-negative Dieudonne-Lie algebras ----

_SHAPES = [
    # (kind, params) blocks: scaled lines and companion blocks, plus
    # sign-twisted variants so the equivariance kernel is not always zero
    [("line", (-1, 1))] * 2,
    [("line", (-1, 1))] * 3,
    [("line", (-1, 1))] * 4,
    [("simple", (-1, 2, 1))],
    [("simple", (-1, 2, 1)), ("line", (-1, 1))],
    [("simple", (-1, 2, -1)), ("line", (-1, 1))],
    [("simple", (-1, 2, -1)), ("line", (-1, 1)), ("line", (-1, 1))],
    [("simple", (-1, 2, -1)), ("line", (-1, 1)), ("line", (-1, -1))],
    [("simple", (-1, 2, -1)), ("simple", (-1, 2, 1))],
    [("simple", (-1, 3, 1))],
    [("simple", (-1, 3, -1)), ("line", (-1, 1))],
    [("simple", (-2, 3, 1)), ("line", (-1, 1))],
    [("simple", (-1, 4, 1))],
    [("simple", (-3, 4, -1))],
]


def _frob_for_shape(shape):
    """Block-diagonal rational Frobenius with strictly negative slopes."""
    blocks = []
    for kind, param in shape:
        if kind == "line":
            a, sign = param
            blocks.append([[sign * F(5) ** a]])
        else:
            a, r, sign = param
            B = [[F(0)] * r for _ in range(r)]
            for i in range(1, r):
                B[i][i - 1] = F(1)
            B[0][r - 1] = sign * F(5) ** a
            blocks.append(B)
    n = sum(len(b) for b in blocks)
    out = [[F(0)] * n for _ in range(n)]
    ofs = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, v in enumerate(row):
                out[ofs + i][ofs + j] = v
        ofs += len(b)
    return out


def _equivariance_kernel(frob):
    """Rational basis of brackets c with [Fx, Fy] = F[x, y] built in."""
    n = len(frob)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    unknowns = [(ab, m) for ab in range(len(pairs)) for m in range(n)]
    rows = []
    for (i, j) in pairs:
        for m in range(n):
            row = [F(0)] * len(unknowns)
            for ab, (aa, bb) in enumerate(pairs):
                coef = frob[aa][i] * frob[bb][j] - frob[bb][i] * frob[aa][j]
                if coef:
                    row[ab * n + m] += coef
            for k in range(n):
                if frob[m][k]:
                    row[pairs.index((i, j)) * n + k] -= frob[m][k]
            rows.append(row)
    return pairs, rat_nullspace(rows)


def _bracket_from_coords(pairs, kernel, coeffs, n):
    c = [[[F(0)] * n for _ in range(n)] for _ in range(n)]
    for vec, lam in zip(kernel, coeffs):
        if not lam:
            continue
        for ab, (i, j) in enumerate(pairs):
            for m in range(n):
                v = lam * vec[ab * n + m]
                if v:
                    c[i][j][m] += v
                    c[j][i][m] -= v
    return c


def test_criterion_08_minimal_slope_centrality():
    t0 = time.time()
    rng = random.Random(20240908)
    spec = FieldSpec(5, 1, 24)
    kernels = {i: _equivariance_kernel(_frob_for_shape(s))
               for i, s in enumerate(_SHAPES)}
    tested = 0
    attempts = 0
    while tested < 500:
        attempts += 1
        assert attempts < 20000, "generator stalled"
        si = rng.randrange(len(_SHAPES))
        frob = _frob_for_shape(_SHAPES[si])
        n = len(frob)
        pairs, kernel = kernels[si]
        coeffs = [F(rng.randrange(-3, 4)) for _ in kernel]
        bracket = _bracket_from_coords(pairs, kernel, coeffs, n)
        a = DieudonneLie.from_rationals(spec, frob, bracket)
        rep = dla_validate(a)
        assert rep["antisymmetry"] and rep["f_equivariance"]
        if not rep["jacobi"]:
            continue  # the kernel is linear; Jacobi is the one filter
        ok, wit = minimal_slope_center_check(a)
        assert ok, (si, coeffs, wit)
        tested += 1
    _report(8, f"{tested} algebras from {attempts} samples, "
               f"{time.time() - t0:.2f}s")


def test_criterion_09_restricted_membership():
    t0 = time.time()
    rng = random.Random(20240909)
    agreed = 0
    while agreed < 1000:
        p = rng.choice([2, 3])
        terms = {}
        for _ in range(rng.randrange(1, 7)):
            e = F(rng.randrange(0, 8 * p ** 3 + 1), p ** rng.randrange(0, 4))
            if e <= 8:
                terms[(e,)] = (1,)
        if not terms:
            continue
        a = PerfectedSeries(p, 1, 1, 8, terms)
        r = rng.randrange(1, 3)
        s = r + rng.randrange(1, 3)
        params = RestrictedParams(r, s, rng.randrange(0, 3))
        okd, witd = membership_restricted(a, params, method="definitional")
        okc, witc = membership_restricted(a, params, method="closed_form")
        assert okd == okc, (a.to_json(), params.r, params.s, params.n0)
        # method="both" asserts agreement internally as well
        okb, _ = membership_restricted(a, params, method="both")
        assert okb == okd
        agreed += 1

    bad = PerfectedSeries(
        2, 1, 1, 16,
        {(F(i) + F(1, 2 ** i),): (1,) for i in range(1, 17)})
    for method in ("definitional", "closed_form"):
        ok, wit = membership_restricted(bad, RestrictedParams(1, 2, 0),
                                        method=method)
        assert not ok and wit is not None

    for _ in range(50):
        terms = {(F(rng.randrange(0, 9)),): (1,) for _ in range(3)}
        ordinary = PerfectedSeries(2, 1, 1, 8, terms)
        ok, _ = membership_restricted(ordinary, RestrictedParams(1, 2, 0))
        assert ok
    _report(9, f"1000 random series + corpus checks, {time.time() - t0:.2f}s")


def _xvar(nvars, slot, D):
    exp = tuple(F(1) if i == slot else F(0) for i in range(nvars))
    return PerfectedSeries(2, nvars, 1, D, {exp: (1,)})


def test_criterion_10_rigidity_checker():
    t0 = time.time()
    u, v = _xvar(2, 0, 16), _xvar(2, 1, 16)
    from isolab import ps_add
    f = ps_add(u, v)          # u - v in characteristic 2
    g = _xvar(1, 0, 16)
    pos = rigidity_check(f, [g, g], [], 1, [1, 3, 9], powered_block="g")
    assert pos["congruences"] == [True, True, True]
    assert pos["ratio_ok"] and pos["evaluation_zero"]

    neg = rigidity_check(_xvar(1, 0, 24), [_xvar(1, 0, 24)], [], 2,
                         [1, 5, 21], powered_block="g")
    q = 4
    first_over = next(n for n, d in enumerate([1, 5, 21]) if d > q ** n)
    assert neg["congruences"][first_over] is False
    assert all(neg["congruences"][:first_over])
    assert neg["ratio_ok"] and not neg["evaluation_zero"]

    viol = rigidity_check(f, [g, g], [], 1, [2, 4, 8], powered_block="g")
    assert viol["ratio_ok"] is False
    _report(10, f"positive/negative/hypothesis instances, "
                f"{time.time() - t0:.2f}s")


def test_criterion_11_coxeter_gate():
    t0 = time.time()
    cases = 0
    for n in (2, 3, 4, 5):
        for nu in _dominant_tuples(n, (0, -1, -2, -3)):
            rep = coxeter_gate(
                RootDatumWithCochar("GL", n, [F(v) for v in nu]), 7)
            assert rep["n_class"] <= rep["h"] - 1
            cases += 1
    for g in (1, 2, 3):
        for nu in _dominant_tuples(2 * g, (0, -1, -2, -3)):
            try:
                d = RootDatumWithCochar("GSp", 2 * g, [F(v) for v in nu])
            except MalformedInput:
                continue
            rep = coxeter_gate(d, 7)
            assert rep["n_class"] <= rep["h"] - 1
            cases += 1
    _report(11, f"{cases} exhaustive cochars, {time.time() - t0:.2f}s")


CLI_COMMANDS = [
    ["slopes", "--in", "corpus/ordinary2x2.json"],
    ["split", "--in", "corpus/supersingular2x2.json"],
    ["split", "--fine", "--in", "corpus/ordinary2x2.json"],
    ["hom", "--in", "corpus/hom_pair.json"],
    ["dla-check", "--in", "corpus/heisenberg.json"],
    ["lcs", "--in", "corpus/heisenberg.json"],
    ["bch-table", "--class", "4"],
    ["bch-mul", "--in", "corpus/bch_mul.json"],
    ["lattice-closure", "--in", "corpus/heisenberg.json"],
    ["leafdim", "--in", "corpus/gsp4_ordinary.json"],
    ["--classical", "leafdim", "--type", "GSp", "--n", "4",
     "--nu", "1,1,0,0"],
    ["slope-roots", "--in", "corpus/gsp4_ordinary.json"],
    ["--classical", "slope-roots", "--in", "corpus/gsp4_ordinary.json"],
    ["nilclass", "--in", "corpus/gsp4_ordinary.json"],
    ["coxeter-gate", "--p", "5", "--in", "corpus/gsp4_ordinary.json"],
    ["perf-member", "--params", "2,1,0", "--in", "corpus/badseries.json"],
    ["perf-member", "--params", "2,1,0", "--in", "corpus/ordseries.json"],
    ["perf-ecd", "--E", "1", "--C", "2", "--d", "0",
     "--in", "corpus/badseries.json"],
    ["rigidity", "--in", "corpus/rigidity_pos.json"],
    ["slope-exponents", "--mu1", "1/2", "--mu0", "1/3"],
]


def test_criterion_12_cli_determinism(corpus_dir):
    t0 = time.time()
    root = corpus_dir.parent
    for argv in CLI_COMMANDS:
        outs = []
        for _ in range(2):
            r = subprocess.run([sys.executable, "-m", "isolab.cli"] + argv,
                               capture_output=True, cwd=root)
            outs.append((r.returncode, r.stdout))
        assert outs[0] == outs[1], argv
        assert outs[0][1].endswith(b"\n")
        json.loads(outs[0][1])  # every output re-parses
    _report(12, f"{len(CLI_COMMANDS)} commands x2 runs, "
                f"{time.time() - t0:.2f}s")
