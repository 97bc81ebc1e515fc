"""Pure-Python implementations of the hot loops.

The compiled extension ``_kernels`` mirrors every function here with the
same signature and results; ``kernels`` picks one at import time.
"""

from __future__ import annotations


def eval_circuit(gates, bits):
    """Forward sweep over ``(t, j, k)`` gates; returns the trace as a list of 0/1."""
    trace = [0] * len(gates)
    for i, (t, j, k) in enumerate(gates):
        if t == 0:
            trace[i] = trace[j] & trace[k]
        elif t == 1:
            trace[i] = trace[j] | trace[k]
        elif t == 2:
            trace[i] = 1 - trace[j]
        elif t == 3:
            trace[i] = bits[i]
        else:
            trace[i] = 1
    return trace


def eval_circuit_packed(gates, columns, mask):
    """Bit-parallel evaluation; ``columns[i]`` packs input ``i`` across vectors."""
    val = [0] * len(gates)
    for i, (t, j, k) in enumerate(gates):
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
    return val[-1]


def propagate_rows(rows, lo, hi, max_rounds):
    """Tighten ``lo``/``hi`` in place against rows ``(coeffs, b)`` meaning ``a.x >= b``.

    ``hi`` entries may be None (unbounded).  Returns False on an empty box.
    """
    n = len(lo)
    for _ in range(max_rounds):
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


def cd_minimal(cols, ncols, cap_col, cap, bound, bound_cols):
    """Minimal nonzero natural solutions of ``sum_j y_j cols[j] = 0``.

    Contejean-Devie frontier search: a non-solution ``v`` is extended by
    ``e_j`` only when ``<Mv, M e_j> < 0``, and candidates dominating a known
    solution are discarded.  Column ``cap_col`` is limited to ``cap``;
    columns below ``bound_cols`` are limited to ``bound`` when it is nonzero.
    """
    sols = []
    frontier = {}
    for j in range(ncols):
        if j == cap_col and cap < 1:
            continue
        v = [0] * ncols
        v[j] = 1
        frontier[tuple(v)] = tuple(cols[j])
    while frontier:
        level = []
        for v, val in frontier.items():
            if any(val):
                level.append((v, val))
            else:
                sols.append(v)
        nxt = {}
        for v, val in level:
            for j in range(ncols):
                cj = cols[j]
                dot = 0
                for a, b in zip(val, cj):
                    dot += a * b
                if dot >= 0:
                    continue
                w = list(v)
                w[j] += 1
                if j == cap_col and w[j] > cap:
                    continue
                if bound and j < bound_cols and w[j] > bound:
                    continue
                w = tuple(w)
                if w in nxt:
                    continue
                dominated = False
                for s in sols:
                    for wi, si in zip(w, s):
                        if wi < si:
                            break
                    else:
                        dominated = True
                        break
                if dominated:
                    continue
                nxt[w] = tuple(a + b for a, b in zip(val, cj))
        frontier = nxt
    return sols
