"""Boolean circuits given as gate-indexed functions, plus succinct encodings.

A circuit of size ``r`` with ``n`` inputs maps every gate index ``i`` to a
triple ``(type, j, k)``.  Operands always have smaller indices, so index
order is a topological order and evaluation is a single forward sweep.
Numbers are fed to circuits least-significant bit first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from . import kernels
from .errors import (
    IllFormedDescriber,
    InvalidCircuit,
    SizeExceeded,
    WidthCapExceeded,
    WidthOverflow,
)

AND, OR, NOT, INPUT, CONST1 = range(5)
TYPE_NAMES = ("AND", "OR", "NOT", "INPUT", "CONST1")
TYPE_CODES = {name: code for code, name in enumerate(TYPE_NAMES)}

Gate = tuple[int, int, int]


def gate_violation(i: int, gate: Gate, n: int) -> str | None:
    """Return the violated circuit-definition constraint for gate ``i``, if any."""
    t, j, k = gate
    if t not in range(5):
        return f"gate type must be one of {', '.join(TYPE_NAMES)}"
    if i < n and t != INPUT:
        return "the first n gates are input gates"
    if t == INPUT:
        if i >= n:
            return "input gates must be among the first n gates"
        if j or k:
            return "input gates take operands 0 0"
        return None
    if t == CONST1:
        if j or k:
            return "constant gates take operands 0 0"
        return None
    if not (0 <= j < i and 0 <= k < i):
        return "j,k<i are inputs of the gate"
    if t == NOT and j != k:
        return "a not gate requires j=k"
    return None


@dataclass(frozen=True)
class Circuit:
    """Circuit of ``r`` gates, the first ``n`` of which are inputs.

    ``gates[i] = (t, j, k)`` with type codes AND=0, OR=1, NOT=2, INPUT=3,
    CONST1=4.  The output is gate ``r - 1``.
    """

    r: int
    n: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(tuple(g) for g in self.gates))

    def validate(self) -> "Circuit":
        if self.r < 1:
            raise InvalidCircuit("a circuit needs at least one gate (the output)")
        if len(self.gates) != self.r:
            raise InvalidCircuit(f"expected {self.r} gates, got {len(self.gates)}")
        if not 0 <= self.n <= self.r:
            raise InvalidCircuit("the number of inputs must satisfy n <= r")
        for i, g in enumerate(self.gates):
            msg = gate_violation(i, g, self.n)
            if msg:
                raise InvalidCircuit(f"gate {i}: {msg}")
        return self

    @property
    def is_valid(self) -> bool:
        try:
            self.validate()
        except InvalidCircuit:
            return False
        return True


def _bits(w) -> list[int]:
    if isinstance(w, str):
        if set(w) - {"0", "1"}:
            raise ValueError(f"input {w!r} is not a bit string")
        return [int(ch) for ch in w]
    return [1 if b else 0 for b in w]


def evaluate(c: Circuit, w) -> tuple[int, list[int]]:
    """Evaluate ``c`` on the bit string ``w`` (``w[i]`` feeds gate ``i``).

    Returns the output bit and the full evaluation trace.
    """
    c.validate()
    bits = _bits(w)
    if len(bits) != c.n:
        raise InvalidCircuit(f"circuit has {c.n} inputs, got {len(bits)} bits")
    trace = kernels.eval_circuit(c.gates, bits)
    return trace[-1], trace


def evaluate_batch(c: Circuit, columns: Sequence[int], count: int) -> int:
    """Evaluate ``count`` inputs at once.

    ``columns[i]`` packs the value of input ``i`` for every input vector as
    one integer (bit ``s`` belongs to vector ``s``).  Returns the packed
    outputs.
    """
    c.validate()
    if len(columns) != c.n:
        raise InvalidCircuit(f"circuit has {c.n} inputs, got {len(columns)} columns")
    return kernels.eval_circuit_packed(c.gates, list(columns), (1 << count) - 1)


def number_bits(value: int, width: int) -> list[int]:
    """Least-significant-first bits of ``value`` padded to ``width``."""
    return [(value >> i) & 1 for i in range(width)]


def evaluate_numbers(c: Circuit, ms: Sequence[int], widths: Sequence[int]) -> int:
    """Feed the padded binary expansions of ``ms`` (LSB first) to ``c``."""
    if len(ms) != len(widths):
        raise ValueError("one width per argument is required")
    w: list[int] = []
    for idx, (m, width) in enumerate(zip(ms, widths)):
        if m < 0 or m >> width:
            raise WidthOverflow(f"argument {idx} = {m} does not fit in {width} bits")
        w.extend(number_bits(m, width))
    return evaluate(c, w)[0]


def truth_table(c: Circuit) -> int:
    """Packed outputs on all ``2**n`` inputs; bit ``a`` is ``C(a)`` (LSB-first ``a``)."""
    count = 1 << c.n
    cols = []
    for i in range(c.n):
        col = 0
        for a in range(count):
            if (a >> i) & 1:
                col |= 1 << a
        cols.append(col)
    return evaluate_batch(c, cols, count)


# ---------------------------------------------------------------------------
# Building circuits


class CircuitBuilder:
    """Incremental construction with hash-consing of identical gates."""

    def __init__(self, n: int):
        self.n = n
        self.gates: list[Gate] = [(INPUT, 0, 0)] * n
        self._memo: dict[Gate, int] = {}
        self._one: int | None = None
        self._zero: int | None = None

    def inputs(self) -> list[int]:
        return list(range(self.n))

    def _add(self, gate: Gate) -> int:
        t, j, k = gate
        if t in (AND, OR) and j > k:
            gate = (t, k, j)
        got = self._memo.get(gate)
        if got is None:
            got = len(self.gates)
            self.gates.append(gate)
            self._memo[gate] = got
        return got

    def one(self) -> int:
        if self._one is None:
            self._one = self._add((CONST1, 0, 0))
        return self._one

    def zero(self) -> int:
        if self._zero is None:
            self._zero = self.not_(self.one())
        return self._zero

    def not_(self, a: int) -> int:
        return self._add((NOT, a, a))

    def and_(self, a: int, b: int) -> int:
        if a == b:
            return a
        return self._add((AND, a, b))

    def or_(self, a: int, b: int) -> int:
        if a == b:
            return a
        return self._add((OR, a, b))

    def and_all(self, xs: Iterable[int]) -> int:
        xs = list(xs)
        if not xs:
            return self.one()
        while len(xs) > 1:
            xs = [self.and_(xs[i], xs[i + 1]) if i + 1 < len(xs) else xs[i] for i in range(0, len(xs), 2)]
        return xs[0]

    def or_all(self, xs: Iterable[int]) -> int:
        xs = list(xs)
        if not xs:
            return self.zero()
        while len(xs) > 1:
            xs = [self.or_(xs[i], xs[i + 1]) if i + 1 < len(xs) else xs[i] for i in range(0, len(xs), 2)]
        return xs[0]

    def xnor(self, a: int, b: int) -> int:
        return self.or_(self.and_(a, b), self.and_(self.not_(a), self.not_(b)))

    def eq_const(self, bits: Sequence[int], value: int) -> int:
        """``bits`` (LSB first) spell out ``value``."""
        if value >> len(bits):
            return self.zero()
        lits = [b if (value >> i) & 1 else self.not_(b) for i, b in enumerate(bits)]
        return self.and_all(lits)

    def ge_const(self, bits: Sequence[int], value: int) -> int:
        """Unsigned ``bits >= value``."""
        if value <= 0:
            return self.one()
        if value >> len(bits):
            return self.zero()
        # Scan from the least significant bit: ge_i means bits[0..i] >= value[0..i].
        acc = None
        for i, b in enumerate(bits):
            if (value >> i) & 1:
                acc = b if acc is None else self.and_(b, acc)
            else:
                acc = None if acc is None else self.or_(b, acc)
        return self.one() if acc is None else acc

    def lt_const(self, bits: Sequence[int], value: int) -> int:
        return self.not_(self.ge_const(bits, value))

    def finish(self, out: int) -> Circuit:
        """Close the circuit so that ``out`` becomes the last gate."""
        gates = list(self.gates)
        if out != len(gates) - 1 or out < self.n:
            gates.append((OR, out, out))
        return Circuit(len(gates), self.n, tuple(gates)).validate()


def random_circuit(rng, max_gates: int = 8, max_inputs: int = 4) -> Circuit:
    """Seeded random valid circuit for property tests."""
    n = rng.randint(0, max_inputs)
    r = rng.randint(max(n, 1), max(max_gates, n, 1))
    gates: list[Gate] = [(INPUT, 0, 0)] * n
    for i in range(n, r):
        choices = [CONST1] if i == 0 else [AND, OR, NOT, CONST1]
        t = rng.choice(choices)
        if t == CONST1:
            gates.append((CONST1, 0, 0))
        elif t == NOT:
            j = rng.randrange(i)
            gates.append((NOT, j, j))
        else:
            gates.append((t, rng.randrange(i), rng.randrange(i)))
    return Circuit(r, n, tuple(gates)).validate()


# ---------------------------------------------------------------------------
# Primality test circuit


PRIME_WIDTH_CAP = 4


def primes_below(limit: int) -> list[int]:
    if limit < 3:
        return [] if limit < 3 else [2]
    sieve = bytearray([1]) * limit
    sieve[0:2] = b"\x00\x00"
    for p in range(2, int(limit ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytes(len(range(p * p, limit, p)))
    return [i for i in range(limit) if sieve[i]]


def _divisible_by(cb: CircuitBuilder, bits: Sequence[int], d: int) -> int:
    """Gate that is 1 iff the number spelled by ``bits`` is a multiple of ``d``.

    Runs a one-hot residue automaton from the most significant bit down.
    """
    state = {0: cb.one()}
    for b in reversed(bits):
        nb = cb.not_(b)
        nxt: dict[int, list[int]] = {}
        for r, g in state.items():
            nxt.setdefault((2 * r) % d, []).append(cb.and_(g, nb))
            nxt.setdefault((2 * r + 1) % d, []).append(cb.and_(g, b))
        state = {r: cb.or_all(gs) for r, gs in nxt.items()}
    return state.get(0, cb.zero())


def prime_circuit(n: int, cap: int = PRIME_WIDTH_CAP) -> Circuit:
    """Circuit with ``3(n+1) + n`` inputs testing ``a`` prime and ``b**3 <= a < (b+1)**3``.

    The first ``3(n+1)`` inputs carry ``a`` and the last ``n`` carry ``b``,
    both least-significant bit first.  Primality is decided by trial division
    over every prime whose square can still be at most ``a``.
    """
    if n < 0 or n > cap:
        raise WidthCapExceeded(f"prime circuit width {n} exceeds the cap {cap}")
    m = 3 * (n + 1)
    cb = CircuitBuilder(m + n)
    a = list(range(m))
    b = list(range(m, m + n))
    # Only values below 2**(3n) can lie in an admissible interval, since b < 2**n.
    low = a[: 3 * n]
    high_zero = cb.and_all(cb.not_(x) for x in a[3 * n :])
    interval = cb.or_all(
        cb.and_all([cb.eq_const(b, v), cb.ge_const(low, v ** 3), cb.lt_const(low, (v + 1) ** 3)])
        for v in range(1 << n)
    )
    tests = [cb.ge_const(low, 2)]
    limit = 1 << (3 * n)
    for d in primes_below(int((limit - 1) ** 0.5) + 2):
        if d * d >= limit:
            break
        tests.append(cb.or_(cb.not_(_divisible_by(cb, low, d)), cb.eq_const(low, d)))
    return cb.finish(cb.and_all([high_zero, interval] + tests))


# ---------------------------------------------------------------------------
# Succinct circuits


@dataclass(frozen=True)
class SuccinctCircuit:
    """A describer circuit ``D`` with ``3s + 3`` inputs for a circuit of ``2**s`` gates.

    ``D`` reads ``t`` (3 bits), then ``i``, ``j``, ``k`` (``s`` bits each),
    all least-significant bit first, and outputs 1 iff gate ``i`` of the
    described circuit is ``(t, j, k)``.  ``inputs`` is the input count of the
    described circuit.
    """

    describer: Circuit
    s: int
    inputs: int = 0

    def __post_init__(self):
        if self.describer.n != 3 * self.s + 3:
            raise InvalidCircuit(f"describer needs {3 * self.s + 3} inputs, has {self.describer.n}")

    @property
    def described_size(self) -> int:
        return 1 << self.s

    @property
    def widths(self) -> list[int]:
        return [3, self.s, self.s, self.s]

    def query(self, t: int, i: int, j: int, k: int) -> int:
        return evaluate_numbers(self.describer, [t, i, j, k], self.widths)


def describer_from_circuit(c: Circuit, s: int | None = None) -> SuccinctCircuit:
    """Lookup-table describer for an explicit circuit.

    The circuit is padded to ``2**s`` gates by repeating its output as OR
    gates so that gate ``2**s - 1`` is still the output.
    """
    c.validate()
    if s is None:
        s = max(1, (c.r - 1).bit_length())
    size = 1 << s
    if c.r > size:
        raise SizeExceeded(f"circuit of {c.r} gates does not fit in 2**{s}")
    gates = list(c.gates)
    while len(gates) < size:
        last = len(gates) - 1
        gates.append((OR, last, last))
    cb = CircuitBuilder(3 * s + 3)
    t_bits = list(range(3))
    i_bits = list(range(3, 3 + s))
    j_bits = list(range(3 + s, 3 + 2 * s))
    k_bits = list(range(3 + 2 * s, 3 + 3 * s))
    rows = []
    for i, (t, j, k) in enumerate(gates):
        rows.append(
            cb.and_all(
                [cb.eq_const(i_bits, i), cb.eq_const(t_bits, t), cb.eq_const(j_bits, j), cb.eq_const(k_bits, k)]
            )
        )
    return SuccinctCircuit(cb.finish(cb.or_all(rows)), s, c.n)


def described_gates(sc: SuccinctCircuit, max_size: int) -> list[Gate]:
    """Query ``sc`` for the unique ``(t, j, k)`` of every gate, without validating."""
    size = sc.described_size
    if size > max_size:
        raise SizeExceeded(f"described circuit has {size} gates, more than {max_size}")
    s = sc.s
    # Evaluate D on every (t, i, j, k) at once; slot index is the packed argument.
    total = 1 << (3 * s + 3)
    if total > 1 << 24:
        raise SizeExceeded(f"describer input space 2**{3 * s + 3} is too large to enumerate")
    cols = []
    for bit in range(3 * s + 3):
        period = 1 << bit
        col = ((1 << period) - 1) << period
        width = 2 * period
        while width < total:
            col |= col << width
            width *= 2
        cols.append(col & ((1 << total) - 1))
    packed = evaluate_batch(sc.describer, cols, total)
    gates: list[Gate] = []
    for i in range(size):
        found = []
        for t in range(5):
            for j in range(size):
                base = t | (i << 3) | (j << (3 + s))
                for k in range(size):
                    if (packed >> (base | (k << (3 + 2 * s)))) & 1:
                        found.append((t, j, k))
        if len(found) != 1:
            raise IllFormedDescriber(i, len(found))
        gates.append(found[0])
    return gates


def expand_succinct(sc: SuccinctCircuit, max_size: int) -> Circuit:
    """Materialize the circuit described by ``sc`` by querying every triple."""
    gates = described_gates(sc, max_size)
    return Circuit(len(gates), sc.inputs, tuple(gates)).validate()


def all_inputs(n: int) -> Iterable[tuple[int, ...]]:
    return itertools.product((0, 1), repeat=n)


def circuit_function(c: Circuit) -> Callable[[int], int]:
    table = truth_table(c)
    return lambda a: (table >> a) & 1
