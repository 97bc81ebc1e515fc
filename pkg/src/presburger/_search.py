"""Clause enumeration for quantifier-free matrices.

The matrix is put in negation normal form over literals ``sum c_i x_i >= b``
and explored depth first.  Every root-to-leaf path asserts a set of
literals, i.e. one DNF clause.  Along the way the literals tighten an
interval box ``lo <= x <= hi`` over the naturals, which both prunes
unsatisfiable paths and collapses disjunctions that the box already decides.
Disjunctions that stay open are branched on last, preferring a cheap value
split on a 0/1 variable.
"""

from __future__ import annotations

from typing import Iterator, Sequence

from .errors import DnfSizeExceeded
from .formula import GE, And, Atom, Formula, Not, Or, _Quantifier

# Node encoding: (tag, payload) with tags below.
T, F, LIT, AND, OR = range(5)

TRUE_NODE = (T, None)
FALSE_NODE = (F, None)

FAIL, LEAF, BRANCH = range(3)

CREEP_LIMIT = 64


class Matrix:
    """NNF of a quantifier-free formula with interned literals."""

    def __init__(self, phi: Formula, order: Sequence[str] = ()):
        self.names: list[str] = []
        self.index: dict[str, int] = {}
        for v in order:
            self._var(v)
        self.lits: list[tuple[tuple[int, ...], tuple[int, ...], int]] = []
        self._lit_ids: dict[tuple, int] = {}
        self.root = self._nnf(phi, False)

    def _var(self, name: str) -> int:
        got = self.index.get(name)
        if got is None:
            got = self.index[name] = len(self.names)
            self.names.append(name)
        return got

    def lit(self, pairs: Sequence[tuple[int, int]], b: int):
        """Intern ``sum c x >= b`` (pairs of variable index and coefficient)."""
        pairs = tuple(sorted((v, c) for v, c in pairs if c))
        if not pairs:
            return TRUE_NODE if 0 >= b else FALSE_NODE
        key = (pairs, b)
        got = self._lit_ids.get(key)
        if got is None:
            got = self._lit_ids[key] = len(self.lits)
            self.lits.append((tuple(v for v, _ in pairs), tuple(c for _, c in pairs), b))
        return (LIT, got)

    def _nnf(self, f: Formula, neg: bool):
        if isinstance(f, Atom):
            pairs = [(self._var(v), c) for v, c in f.term.coeffs]
            strict = f.rel != GE
            if strict != neg:
                # p < b  becomes  -p >= -b + 1
                return self.lit([(v, -c) for v, c in pairs], -f.bound + 1)
            return self.lit(pairs, f.bound)
        if isinstance(f, Not):
            return self._nnf(f.arg, not neg)
        if isinstance(f, (And, Or)):
            conj = isinstance(f, And) != neg
            unit, zero = (T, F) if conj else (F, T)
            tag = AND if conj else OR
            parts = []
            for a in f.args:
                node = self._nnf(a, neg)
                if node[0] == zero:
                    return (zero, None)
                if node[0] == unit:
                    continue
                if node[0] == tag:
                    parts.extend(node[1])
                else:
                    parts.append(node)
            if not parts:
                return (unit, None)
            return parts[0] if len(parts) == 1 else (tag, tuple(parts))
        if isinstance(f, _Quantifier):
            raise ValueError("matrix must be quantifier-free")
        raise TypeError(f"not a formula: {f!r}")


class Search:
    """Depth-first clause enumeration with interval propagation."""

    def __init__(self, matrix: Matrix, fixed: dict[int, int] | None = None, max_leaves: int = 1 << 20,
                 max_steps: int = 200_000):
        self.m = matrix
        n = len(matrix.names)
        self.lo = [0] * n
        self.hi: list[int | None] = [None] * n
        for v, val in (fixed or {}).items():
            self.lo[v] = val
            self.hi[v] = val
        self.trail: list[tuple] = []
        self.watch: list[list[int]] = [[] for _ in range(n)]
        self.max_leaves = max_leaves
        self.max_steps = max_steps
        self.leaf_count = 0
        # Trail length at which every deferred node was last found open.
        self.checked = 0
        self._node_vars: dict[int, frozenset[int]] = {}

    # -- box helpers -------------------------------------------------------

    def _grow(self) -> None:
        n = len(self.m.names)
        while len(self.lo) < n:
            self.lo.append(0)
            self.hi.append(None)
            self.watch.append([])

    def lit_status(self, lid: int) -> int:
        """1 if entailed by the box, 0 if refuted, -1 if undecided."""
        vs, cs, b = self.m.lits[lid]
        lo, hi = self.lo, self.hi
        mn = 0
        mx = 0
        mn_inf = mx_inf = False
        for v, c in zip(vs, cs):
            h = hi[v]
            if c > 0:
                mn += c * lo[v]
                if h is None:
                    mx_inf = True
                else:
                    mx += c * h
            else:
                mx += c * lo[v]
                if h is None:
                    mn_inf = True
                else:
                    mn += c * h
        if not mn_inf and mn >= b:
            return 1
        if not mx_inf and mx < b:
            return 0
        return -1

    def eval3(self, node) -> int:
        tag = node[0]
        if tag == LIT:
            return self.lit_status(node[1])
        if tag == T:
            return 1
        if tag == F:
            return 0
        if tag == AND:
            res = 1
            for ch in node[1]:
                s = self.eval3(ch)
                if s == 0:
                    return 0
                if s < 0:
                    res = -1
            return res
        res = 0
        for ch in node[1]:
            s = self.eval3(ch)
            if s == 1:
                return 1
            if s < 0:
                res = -1
        return res

    def _set(self, v: int, lo: int, hi) -> None:
        self.trail.append((0, v, self.lo[v], self.hi[v]))
        self.lo[v] = lo
        self.hi[v] = hi

    def undo(self, mark: int) -> None:
        trail = self.trail
        lo, hi, watch = self.lo, self.hi, self.watch
        while len(trail) > mark:
            kind, v, a, b = trail.pop()
            if kind == 0:
                lo[v] = a
                hi[v] = b
            else:
                watch[v].pop()

    def assert_lit(self, lid: int) -> bool:
        """Add literal ``lid`` to the path and propagate; False on conflict."""
        vs = self.m.lits[lid][0]
        for v in vs:
            self.watch[v].append(lid)
            self.trail.append((1, v, None, None))
        return self._propagate([lid])

    def _propagate(self, queue: list[int]) -> bool:
        lits = self.m.lits
        lo, hi, watch = self.lo, self.hi, self.watch
        steps = 0
        # Tightenings per variable; runaway counts mean bounds creep towards
        # infinity between conflicting rows, which the exact leaf check settles.
        touched: dict[int, int] = {}
        queued = set(queue)
        while queue:
            lid = queue.pop()
            queued.discard(lid)
            vs, cs, b = lits[lid]
            # Maximum of the left-hand side, counting unbounded contributions.
            total = 0
            inf = 0
            for v, c in zip(vs, cs):
                if c > 0:
                    h = hi[v]
                    if h is None:
                        inf += 1
                    else:
                        total += c * h
                else:
                    total += c * lo[v]
            if inf == 0 and total < b:
                return False
            if inf > 1:
                continue
            for v, c in zip(vs, cs):
                if c > 0:
                    h = hi[v]
                    if h is None:
                        rest = total
                    elif inf:
                        continue
                    else:
                        rest = total - c * h
                    need = b - rest
                    new = -((-need) // c)
                    if new > lo[v]:
                        if hi[v] is not None and new > hi[v]:
                            return False
                        self._set(v, new, hi[v])
                        steps += 1
                        touched[v] = touched.get(v, 0) + 1
                        if touched[v] > CREEP_LIMIT:
                            return True
                        for w in watch[v]:
                            if w not in queued:
                                queued.add(w)
                                queue.append(w)
                else:
                    if inf:
                        continue
                    rest = total - c * lo[v]
                    new = (b - rest) // c
                    if new < 0:
                        return False
                    h = hi[v]
                    if h is None or new < h:
                        if new < lo[v]:
                            return False
                        self._set(v, lo[v], new)
                        steps += 1
                        touched[v] = touched.get(v, 0) + 1
                        if touched[v] > CREEP_LIMIT:
                            return True
                        for w in watch[v]:
                            if w not in queued:
                                queued.add(w)
                                queue.append(w)
            if steps > self.max_steps:
                # Give up tightening; the leaf check stays exact.
                return True
        return True

    # -- search ------------------------------------------------------------

    def _viable(self, node):
        """Open alternatives of an OR node, or None if it is already satisfied."""
        alts = []
        for ch in node[1]:
            s = self.eval3(ch)
            if s == 1:
                return None
            if s < 0:
                alts.append(ch)
        return alts

    def node_vars(self, node) -> frozenset[int]:
        got = self._node_vars.get(id(node))
        if got is None:
            out = set()
            stack = [node]
            lits = self.m.lits
            while stack:
                nd = stack.pop()
                if nd[0] == LIT:
                    out.update(lits[nd[1]][0])
                elif nd[0] in (AND, OR):
                    stack.extend(nd[1])
            got = self._node_vars[id(node)] = frozenset(out)
        return got

    def _settle(self, goals: list, deferred: list, clause: list[int]) -> int:
        while True:
            while goals:
                node = goals.pop()
                tag = node[0]
                if tag == LIT:
                    s = self.lit_status(node[1])
                    if s == 1:
                        continue
                    if s == 0:
                        return FAIL
                    clause.append(node[1])
                    if not self.assert_lit(node[1]):
                        return FAIL
                elif tag == AND:
                    goals.extend(reversed(node[1]))
                elif tag == OR:
                    alts = self._viable(node)
                    if alts is None:
                        continue
                    if not alts:
                        return FAIL
                    if len(alts) == 1:
                        goals.append(alts[0])
                    else:
                        deferred.append((node, self.node_vars(node)))
                elif tag == F:
                    return FAIL
            keep = []
            trail = self.trail
            changed = {e[1] for e in trail[self.checked :] if e[0] == 0}
            self.checked = len(trail)
            if not changed:
                return BRANCH if deferred else LEAF
            for entry in deferred:
                # Nodes over untouched variables keep their open status.
                if changed.isdisjoint(entry[1]):
                    keep.append(entry)
                    continue
                node = entry[0]
                alts = self._viable(node)
                if alts is None:
                    continue
                if not alts:
                    return FAIL
                if len(alts) == 1:
                    goals.append(alts[0])
                else:
                    keep.append(entry)
            deferred[:] = keep
            if not goals:
                return BRANCH if deferred else LEAF

    def _branch_choices(self, deferred: list) -> tuple[list[list], int | None]:
        """Alternatives for the next branch and the index of a consumed OR."""
        best_var = None
        lo, hi = self.lo, self.hi
        seen: set[int] = set()
        for _, vs in deferred:
            for v in vs - seen:
                h = hi[v]
                if h is not None and h - lo[v] == 1 and (best_var is None or v < best_var):
                    best_var = v
            seen |= vs
        if best_var is not None:
            v = best_var
            alts = []
            for val in (lo[v], hi[v]):
                alts.append([self.m.lit([(v, 1)], val), self.m.lit([(v, -1)], -val)])
            return alts, None
        best = None
        for idx, (node, _) in enumerate(deferred):
            alts = self._viable(node)
            if best is None or len(alts) < len(best[0]):
                best = (alts, idx)
        alts, idx = best
        return [[a] for a in alts], idx

    def leaves(self) -> Iterator[list[int]]:
        """Yield the asserted literal ids of every consistent leaf.

        While a leaf is being consumed the box describes that leaf.
        """
        goals = [self.m.root]
        deferred: list = []
        clause: list[int] = []
        stack: list[tuple] = []
        while True:
            status = self._settle(goals, deferred, clause)
            if status == BRANCH:
                alts, used = self._branch_choices(deferred)
                self._grow()
                if used is not None:
                    deferred = deferred[:used] + deferred[used + 1 :]
                stack.append([len(self.trail), len(clause), list(deferred), alts, 0])
                goals = list(reversed(alts[0]))
                continue
            if status == LEAF:
                self.leaf_count += 1
                if self.leaf_count > self.max_leaves:
                    raise DnfSizeExceeded(self.max_leaves)
                yield clause
            # Backtrack to the next untried alternative.
            while stack:
                frame = stack[-1]
                mark, clen, saved, alts, pos = frame
                self.undo(mark)
                self.checked = mark
                del clause[clen:]
                pos += 1
                if pos < len(alts):
                    frame[4] = pos
                    deferred = list(saved)
                    goals = list(reversed(alts[pos]))
                    break
                stack.pop()
            else:
                return

    def residual(self, clause: Sequence[int]):
        """Literals of ``clause`` not yet entailed, with fixed variables folded.

        Returns ``(rows, free)`` where rows are ``({var: coef}, bound)`` over
        the unfixed variables ``free``; None if some literal is refuted.
        Literals entailed by the box are replaced by the box bounds of their
        variables, which the clause implies.
        """
        lo, hi = self.lo, self.hi
        rows = []
        free: set[int] = set()
        boxed: set[int] = set()
        for lid in clause:
            s = self.lit_status(lid)
            if s == 0:
                return None
            vs, cs, b = self.m.lits[lid]
            if s == 1:
                boxed.update(v for v in vs if hi[v] is None or hi[v] != lo[v])
                continue
            row = {}
            for v, c in zip(vs, cs):
                if hi[v] is not None and hi[v] == lo[v]:
                    b -= c * lo[v]
                else:
                    row[v] = c
                    free.add(v)
            rows.append((row, b))
        for v in sorted(boxed | free):
            free.add(v)
            if lo[v] > 0:
                rows.append(({v: 1}, lo[v]))
            if hi[v] is not None:
                rows.append(({v: -1}, -hi[v]))
        return rows, sorted(free)
