# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=False
"""Compiled versions of the hot loops in ``_kernels_py``.

Every function has the same signature and returns the same values as its
pure-Python twin.  Integer data that may exceed machine words stays in
Python objects; ``cd_minimal`` runs on C arrays and hands inputs that could
overflow them back to the pure-Python version.
"""

from libc.stdlib cimport free, malloc, realloc
from libc.string cimport memcpy

from . import _kernels_py

# Column entries and partial sums stay below these magnitudes on the fast
# path, which keeps every dot product well inside 64 bits.
cdef long long COL_LIMIT = 1 << 24
cdef long long VAL_LIMIT = 1 << 30
cdef long long COUNT_LIMIT = 1 << 62


def eval_circuit(gates, bits):
    """Forward sweep over ``(t, j, k)`` gates; returns the trace as a list of 0/1."""
    cdef Py_ssize_t r = len(gates)
    cdef Py_ssize_t i
    cdef int t
    cdef Py_ssize_t j, k
    cdef unsigned char *trace = <unsigned char *> malloc(r if r > 0 else 1)
    if trace == NULL:
        raise MemoryError()
    try:
        for i in range(r):
            t, j, k = gates[i]
            if t == 0:
                trace[i] = trace[j] & trace[k]
            elif t == 1:
                trace[i] = trace[j] | trace[k]
            elif t == 2:
                trace[i] = 1 - trace[j]
            elif t == 3:
                trace[i] = 1 if bits[i] else 0
            else:
                trace[i] = 1
        return [trace[i] for i in range(r)]
    finally:
        free(trace)


def eval_circuit_packed(gates, columns, mask):
    """Bit-parallel evaluation; ``columns[i]`` packs input ``i`` across vectors."""
    cdef Py_ssize_t r = len(gates)
    cdef Py_ssize_t i, j, k
    cdef int t
    cdef list val = [0] * r
    for i in range(r):
        t, j, k = gates[i]
        if t == 0:
            val[i] = val[j] & val[k]
        elif t == 1:
            val[i] = val[j] | val[k]
        elif t == 2:
            val[i] = mask ^ val[j]
        elif t == 3:
            val[i] = columns[i]
        else:
            val[i] = mask
    return val[r - 1]


def propagate_rows(rows, lo, hi, max_rounds):
    """Tighten ``lo``/``hi`` in place against rows ``(coeffs, b)`` meaning ``a.x >= b``.

    ``hi`` entries may be None (unbounded).  Returns False on an empty box.
    """
    cdef Py_ssize_t n = len(lo)
    cdef Py_ssize_t j, rounds
    cdef int inf
    cdef bint changed
    cdef object a, b, h, total, rest, new, row
    for rounds in range(max_rounds):
        changed = False
        for row, b in rows:
            total = 0
            inf = 0
            for j in range(n):
                a = row[j]
                if a > 0:
                    h = hi[j]
                    if h is None:
                        inf += 1
                    else:
                        total += a * h
                elif a < 0:
                    total += a * lo[j]
            if inf == 0 and total < b:
                return False
            if inf > 1:
                continue
            for j in range(n):
                a = row[j]
                if a > 0:
                    h = hi[j]
                    if h is None:
                        rest = total
                    elif inf:
                        continue
                    else:
                        rest = total - a * h
                    new = -((rest - b) // a)
                    if new > lo[j]:
                        if h is not None and new > h:
                            return False
                        lo[j] = new
                        changed = True
                elif a < 0:
                    if inf:
                        continue
                    rest = total - a * lo[j]
                    new = (b - rest) // a
                    h = hi[j]
                    if new < lo[j]:
                        return False
                    if h is None or new < h:
                        hi[j] = new
                        changed = True
        if not changed:
            return True
    return True


cdef struct Rows:
    long long *data
    Py_ssize_t count
    Py_ssize_t capacity
    Py_ssize_t width


cdef int rows_init(Rows *rs, Py_ssize_t width) except -1:
    rs.width = width if width > 0 else 1
    rs.count = 0
    rs.capacity = 16
    rs.data = <long long *> malloc(rs.capacity * rs.width * sizeof(long long))
    if rs.data == NULL:
        raise MemoryError()
    return 0


cdef long long *rows_push(Rows *rs) except NULL:
    cdef long long *grown
    if rs.count == rs.capacity:
        grown = <long long *> realloc(rs.data, 2 * rs.capacity * rs.width * sizeof(long long))
        if grown == NULL:
            raise MemoryError()
        rs.data = grown
        rs.capacity *= 2
    rs.count += 1
    return rs.data + (rs.count - 1) * rs.width


cdef inline long long *rows_at(Rows *rs, Py_ssize_t i):
    return rs.data + i * rs.width


def cd_minimal(cols, ncols, cap_col, cap, bound, bound_cols):
    """Minimal nonzero natural solutions of ``sum_j y_j cols[j] = 0``.

    Same frontier search, visiting order and output as the pure-Python
    version.
    """
    cdef Py_ssize_t nc = ncols
    cdef Py_ssize_t m = len(cols[0]) if nc else 0
    for col in cols:
        for a in col:
            if a > COL_LIMIT or a < -COL_LIMIT:
                return _kernels_py.cd_minimal(cols, ncols, cap_col, cap, bound, bound_cols)
    out = _cd_fast(cols, nc, m, cap_col, min(cap, COUNT_LIMIT), min(bound, COUNT_LIMIT), bound_cols)
    if out is None:
        return _kernels_py.cd_minimal(cols, ncols, cap_col, cap, bound, bound_cols)
    return out


cdef object _cd_fast(cols, Py_ssize_t nc, Py_ssize_t m, Py_ssize_t cap_col, long long cap, long long bound,
                     Py_ssize_t bound_cols):
    cdef long long *C = <long long *> malloc((nc * m + 1) * sizeof(long long))
    cdef Rows cur_v, cur_val, nxt_v, nxt_val, sols, level
    cdef Py_ssize_t i, j, r, idx, s, nlevel
    cdef long long dot, x
    cdef long long *v
    cdef long long *val
    cdef long long *w
    cdef long long *wv
    cdef long long *sol
    cdef bint nonzero, dominated, overflow = False
    if C == NULL:
        raise MemoryError()
    rows_init(&cur_v, nc)
    rows_init(&cur_val, m)
    rows_init(&nxt_v, nc)
    rows_init(&nxt_val, m)
    rows_init(&sols, nc)
    rows_init(&level, 1)
    result = []
    try:
        for j in range(nc):
            for r in range(m):
                C[j * m + r] = cols[j][r]
        for j in range(nc):
            if j == cap_col and cap < 1:
                continue
            v = rows_push(&cur_v)
            for i in range(nc):
                v[i] = 0
            v[j] = 1
            val = rows_push(&cur_val)
            for r in range(m):
                val[r] = C[j * m + r]
        while cur_v.count:
            level.count = 0
            for idx in range(cur_v.count):
                val = rows_at(&cur_val, idx)
                nonzero = False
                for r in range(m):
                    if val[r] != 0:
                        nonzero = True
                        break
                if nonzero:
                    rows_push(&level)[0] = idx
                else:
                    v = rows_at(&cur_v, idx)
                    memcpy(rows_push(&sols), v, nc * sizeof(long long))
                    result.append(tuple([v[i] for i in range(nc)]))
            nxt_v.count = 0
            nxt_val.count = 0
            seen = set()
            nlevel = level.count
            for s in range(nlevel):
                idx = rows_at(&level, s)[0]
                for j in range(nc):
                    v = rows_at(&cur_v, idx)
                    val = rows_at(&cur_val, idx)
                    dot = 0
                    for r in range(m):
                        dot += val[r] * C[j * m + r]
                    if dot >= 0:
                        continue
                    x = v[j] + 1
                    if j == cap_col and x > cap:
                        continue
                    if bound and j < bound_cols and x > bound:
                        continue
                    w = rows_push(&nxt_v)
                    memcpy(w, v, nc * sizeof(long long))
                    w[j] = x
                    key = (<char *> w)[: nc * sizeof(long long)]
                    if key in seen:
                        nxt_v.count -= 1
                        continue
                    dominated = False
                    for i in range(sols.count):
                        sol = rows_at(&sols, i)
                        dominated = True
                        for r in range(nc):
                            if w[r] < sol[r]:
                                dominated = False
                                break
                        if dominated:
                            break
                    if dominated:
                        nxt_v.count -= 1
                        continue
                    seen.add(key)
                    wv = rows_push(&nxt_val)
                    val = rows_at(&cur_val, idx)
                    for r in range(m):
                        wv[r] = val[r] + C[j * m + r]
                        if wv[r] > VAL_LIMIT or wv[r] < -VAL_LIMIT:
                            overflow = True
                    if overflow:
                        return None
            cur_v, nxt_v = nxt_v, cur_v
            cur_val, nxt_val = nxt_val, cur_val
        return result
    finally:
        free(C)
        free(cur_v.data)
        free(cur_val.data)
        free(nxt_v.data)
        free(nxt_val.data)
        free(sols.data)
        free(level.data)
