# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels for coefficient-vector arithmetic in Z_q / p^M.

Same contract as zqcore_py.py.  Coefficients are arbitrary-precision
Python ints (moduli routinely exceed 64 bits), so the win over the pure
version comes from loop overhead, not machine words.
"""

BACKEND = "compiled"


def zq_mul(tuple a, tuple b, tuple red, Py_ssize_t f, pM):
    cdef Py_ssize_t i, j, k
    if f == 1:
        return ((a[0] * b[0]) % pM,)
    cdef list conv = [0] * (2 * f - 1)
    for i in range(f):
        ai = a[i]
        if ai:
            for j in range(f):
                conv[i + j] = conv[i + j] + ai * b[j]
    cdef list out = conv[:f]
    for k in range(2 * f - 2, f - 1, -1):
        c = conv[k]
        if c:
            row = red[k - f]
            for j in range(f):
                out[j] = out[j] + c * row[j]
    return tuple([v % pM for v in out])


def zq_add(tuple a, tuple b, Py_ssize_t f, pM):
    cdef Py_ssize_t i
    return tuple([(a[i] + b[i]) % pM for i in range(f)])


def zq_sub(tuple a, tuple b, Py_ssize_t f, pM):
    cdef Py_ssize_t i
    return tuple([(a[i] - b[i]) % pM for i in range(f)])


def zq_scal(c, tuple a, Py_ssize_t f, pM):
    cdef Py_ssize_t i
    return tuple([(c * a[i]) % pM for i in range(f)])


def zq_mat_mul(list A, list B, tuple red, Py_ssize_t f, pM):
    cdef Py_ssize_t m = len(A), k = len(B), n
    n = len(<list>B[0]) if k else 0
    cdef Py_ssize_t i, j, s, c
    cdef tuple zero = (0,) * f
    cdef list out = [], row, acc
    for i in range(m):
        Ai = <list>A[i]
        row = []
        for j in range(n):
            acc = [0] * f
            for s in range(k):
                x = <tuple>Ai[s]
                if x == zero:
                    continue
                y = <tuple>(<list>B[s])[j]
                if y == zero:
                    continue
                prod = zq_mul(x, y, red, f, pM)
                for c in range(f):
                    acc[c] = acc[c] + prod[c]
            row.append(tuple([v % pM for v in acc]))
        out.append(row)
    return out


def zq_mat_vec(list A, list v, tuple red, Py_ssize_t f, pM):
    cdef Py_ssize_t i, s, c, m = len(A), k = len(v)
    cdef tuple zero = (0,) * f
    cdef list out = [], acc
    for i in range(m):
        Ai = <list>A[i]
        acc = [0] * f
        for s in range(k):
            x = <tuple>Ai[s]
            if x == zero or <tuple>v[s] == zero:
                continue
            prod = zq_mul(x, <tuple>v[s], red, f, pM)
            for c in range(f):
                acc[c] = acc[c] + prod[c]
        out.append(tuple([t % pM for t in acc]))
    return out


def zq_vec_dot(list u, list v, tuple red, Py_ssize_t f, pM):
    cdef Py_ssize_t s, c, k = len(u)
    cdef tuple zero = (0,) * f
    cdef list acc = [0] * f
    for s in range(k):
        if <tuple>u[s] == zero or <tuple>v[s] == zero:
            continue
        prod = zq_mul(<tuple>u[s], <tuple>v[s], red, f, pM)
        for c in range(f):
            acc[c] = acc[c] + prod[c]
    return tuple([t % pM for t in acc])
