"""Formula families for bounded arithmetic, circuits and bit-string encodings.

Most families come as *neutral* pairs: an existential and a universal
formula that define the same relation.  Picking the right member whenever a
family is used inside a larger formula keeps the quantifier alternation of
the result under control.  Both members of every pair carry the same domain
guards, so they agree on all arguments, not only on the intended ones.

Numbers are split into bits least-significant first, matching the circuit
module.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .circuits import (
    AND,
    CONST1,
    INPUT,
    NOT,
    OR,
    PRIME_WIDTH_CAP,
    Circuit,
    SuccinctCircuit,
    expand_succinct,
    prime_circuit,
    primes_below,
)
from .errors import PreconditionViolated, WidthCapExceeded
from .formula import (
    Expr,
    ExprLike,
    Formula,
    Not,
    conj,
    disj,
    eq,
    exists,
    forall,
    ge,
    gt,
    le,
    linsum,
    lt,
)
from .formula import implies as _implies

SIGMA = "sigma"
PI = "pi"

# Widest describer whose gate table is still checked by full expansion.
DESCRIBER_CHECK_BITS = 24


@dataclass(frozen=True)
class GeneratorParams:
    n: int
    variant: str = SIGMA

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        _check_variant(self.variant)


@dataclass(frozen=True)
class ReductionParams:
    """Alternation count ``i`` and the exponents standing for ``q(n)`` and ``r(n)``.

    The described circuit has ``2**r_exp`` gates; each of the first ``i - 1``
    encoded strings carries ``2**q_exp`` of them.
    """

    i: int
    q_exp: int
    r_exp: int

    def __post_init__(self):
        if self.i < 1:
            raise ValueError("i must be at least 1")
        if self.q_exp < 0 or self.r_exp < self.q_exp:
            raise ValueError("need 0 <= q_exp <= r_exp")


def _check_variant(variant: str) -> str:
    if variant not in (SIGMA, PI):
        raise ValueError(f"variant must be {SIGMA!r} or {PI!r}, not {variant!r}")
    return variant


class Neutral:
    """An existential and a universal formula for the same relation."""

    __slots__ = ("sigma", "pi")

    def __init__(self, sigma: Formula, pi: Formula):
        self.sigma = sigma
        self.pi = pi

    @staticmethod
    def plain(f: Formula) -> "Neutral":
        """A quantifier-free formula serves as both members."""
        return Neutral(f, f)

    def variant(self, v: str) -> Formula:
        return self.sigma if _check_variant(v) == SIGMA else self.pi

    def __invert__(self) -> "Neutral":
        return Neutral(Not(self.pi), Not(self.sigma))

    def __and__(self, other: "Neutral") -> "Neutral":
        return Neutral(conj(self.sigma, other.sigma), conj(self.pi, other.pi))

    def __or__(self, other: "Neutral") -> "Neutral":
        return Neutral(disj(self.sigma, other.sigma), disj(self.pi, other.pi))

    def implies(self, other: "Neutral") -> "Neutral":
        return ~self | other

    def iff(self, other: "Neutral") -> "Neutral":
        return self.implies(other) & other.implies(self)


def n_all(parts: Sequence[Neutral]) -> Neutral:
    return Neutral(conj(*(p.sigma for p in parts)), conj(*(p.pi for p in parts)))


class Names:
    """Supply of fresh bound-variable names, deterministic per generator call."""

    def __init__(self):
        self.count = 0

    def fresh(self, stem: str) -> str:
        self.count += 1
        return f"{stem}_{self.count}"

    def many(self, stem: str, k: int) -> list[str]:
        return [self.fresh(stem) for _ in range(k)]


def _bits_value(bits: Sequence[str], shift: int = 0) -> Expr:
    return linsum((1 << (i + shift), b) for i, b in enumerate(bits))


# ---------------------------------------------------------------------------
# Binary decomposition and bounded divisibility


def bin_formula(bits: Sequence[str], x: ExprLike) -> Formula:
    """Every bit is 0 or 1 and ``x`` is their weighted sum (so ``x < 2**len(bits)``)."""
    return conj(*(le(b, 1) for b in bits), eq(x, _bits_value(bits)))


def dig_formula(xs: Sequence[str], ys: Sequence[str], k: ExprLike) -> Formula:
    """``x_i = k * y_i`` for 0/1 digits ``y_i``."""
    parts = []
    for xi, yi in zip(xs, ys):
        parts.append(disj(Not(lt(yi, 1)), lt(xi, 1)))
        parts.append(disj(lt(yi, 1), eq(xi, k)))
    return conj(*parts)


def mod_pair(names: Names, n: int, a: ExprLike, b: ExprLike) -> Neutral:
    """``b < 2**n`` and ``b`` divides ``a`` (for ``b = 0``: ``a = 0``).

    The existential member guesses the quotient; the universal member
    requires every division of ``a`` by ``b`` with remainder below ``b`` to
    leave remainder 0.
    """
    xs = names.many("d", n)
    ys = names.many("e", n)
    k = names.fresh("k")
    sigma = exists(
        xs + ys + [k],
        conj(bin_formula(ys, b), dig_formula(xs, ys, k), eq(a, _bits_value(xs))),
    )
    xs2 = names.many("d", n)
    ys2 = names.many("e", n)
    q = names.fresh("q")
    r = names.fresh("r")
    premise = conj(
        bin_formula(ys2, b),
        dig_formula(xs2, ys2, q),
        eq(a, _bits_value(xs2) + Expr.lift(r)),
        disj(lt(r, b), lt(b, 1)),
    )
    pi = conj(lt(b, 1 << n), forall(xs2 + ys2 + [q, r], _implies(premise, lt(r, 1))))
    return Neutral(sigma, pi)


def gen_bin(n: int) -> Formula:
    """Quantifier-free formula over ``x0 .. x{n-1}`` and ``x``: the bits of ``x``."""
    if n < 1:
        raise PreconditionViolated("n must be at least 1")
    return bin_formula([f"x{i}" for i in range(n)], "x")


def gen_mod(n: int, variant: str = SIGMA) -> Formula:
    """Formula over ``x, y`` holding iff ``y < 2**n`` and ``y`` divides ``x``."""
    if n < 1:
        raise PreconditionViolated("n must be at least 1")
    return mod_pair(Names(), n, "x", "y").variant(variant)


# ---------------------------------------------------------------------------
# Circuits


def _gate_formula(c: Circuit, xs: Sequence[str], ys: Sequence[str]) -> Formula:
    """Gate values ``ys`` (each 0 or 1) follow the gate functions of ``c``."""
    # Atoms are shared between the clauses that mention the same gate.
    on = [ge(y, 1) for y in ys]
    off = [lt(y, 1) for y in ys]
    parts = [le(y, 1) for y in ys]
    for i, (t, j, k) in enumerate(c.gates):
        if t == AND:
            parts.append(conj(disj(off[i], on[j]), disj(off[i], on[k]), disj(on[i], off[j], off[k])))
        elif t == OR:
            parts.append(conj(disj(off[i], on[j], on[k]), disj(on[i], off[j]), disj(on[i], off[k])))
        elif t == NOT:
            parts.append(conj(disj(off[i], off[j]), disj(on[i], on[j])))
        elif t == INPUT:
            parts.append(eq(ys[i], xs[i]))
        else:
            parts.append(on[i])
    return conj(*parts)


def circuit_pair(names: Names, c: Circuit, arg: ExprLike) -> Neutral:
    """``arg < 2**n`` and the circuit accepts the bits of ``arg``."""
    c.validate()
    xs = names.many("i", c.n)
    ys = names.many("g", c.r)
    body = [bin_formula(xs, arg), _gate_formula(c, xs, ys)]
    sigma = exists(xs + ys, conj(*body, ge(ys[-1], 1)))
    xs2 = names.many("i", c.n)
    ys2 = names.many("g", c.r)
    premise = conj(bin_formula(xs2, arg), _gate_formula(c, xs2, ys2))
    pi = conj(lt(arg, 1 << c.n), forall(xs2 + ys2, _implies(premise, ge(ys2[-1], 1))))
    return Neutral(sigma, pi)


def gen_circuit_formula(c: Circuit, variant: str = SIGMA) -> Formula:
    """Formula over ``x`` holding iff ``x < 2**n`` and ``c`` accepts the bits of ``x``."""
    return circuit_pair(Names(), c, "x").variant(variant)


def packed_circuit_pair(names: Names, c: Circuit, args: Sequence[ExprLike], widths: Sequence[int]) -> Neutral:
    """The circuit applied to the concatenated bits of several arguments.

    Argument ``a`` occupies ``widths[a]`` consecutive inputs, lowest bits first.
    """
    if sum(widths) != c.n:
        raise PreconditionViolated(f"widths {list(widths)} do not add up to {c.n} inputs")

    def make(mode: str) -> Formula:
        fields = [names.many("f", w) for w in widths]
        z = names.fresh("z")
        shift = 0
        total = Expr()
        for bits in fields:
            total = total + _bits_value(bits, shift)
            shift += len(bits)
        parts = [bin_formula(bits, a) for bits, a in zip(fields, args)]
        parts.append(eq(z, total))
        inner = circuit_pair(names, c, z).variant(mode)
        block = [b for bits in fields for b in bits] + [z]
        if mode == SIGMA:
            return exists(block, conj(*parts, inner))
        guard = conj(*(lt(a, 1 << w) for a, w in zip(args, widths)))
        return conj(guard, forall(block, _implies(conj(*parts), inner)))

    return Neutral(make(SIGMA), make(PI))


def prime_pair(names: Names, n: int, a: ExprLike, b: ExprLike) -> Neutral:
    """``a`` is a prime in ``[b**3, (b+1)**3)`` with ``b < 2**n`` and ``a < 2**(3(n+1))``."""
    c = prime_circuit(n)
    m = 3 * (n + 1)
    return packed_circuit_pair(names, c, [a, b], [m, n])


def gen_prime(n: int, variant: str = SIGMA) -> Formula:
    """Formula over ``x, y``: ``x`` is prime and ``y**3 <= x < (y+1)**3``."""
    if n < 1:
        raise PreconditionViolated("n must be at least 1")
    if n > PRIME_WIDTH_CAP:
        raise WidthCapExceeded(f"prime width {n} exceeds the cap {PRIME_WIDTH_CAP}")
    return prime_pair(Names(), n, "x", "y").variant(variant)


# ---------------------------------------------------------------------------
# Encodings of bit strings


def valid_formula(names: Names, n: int, x: ExprLike) -> Formula:
    """Universal formula: ``x`` has uniform residues 0 or 1 on the primes of
    every interval ``[b**3, (b+1)**3)`` with ``1 <= b <= 2**n``."""
    y = names.fresh("y")
    p1 = names.fresh("p")
    p2 = names.fresh("p")
    width = 3 * (n + 2)
    premise = conj(
        le(1, y),
        le(y, 1 << n),
        prime_pair(names, n + 1, p1, y).sigma,
        prime_pair(names, n + 1, p2, y).sigma,
    )
    x1 = Expr.lift(x) - 1
    zero = conj(mod_pair(names, width, x, p1).pi, mod_pair(names, width, x, p2).pi)
    one = conj(mod_pair(names, width, x1, p1).pi, mod_pair(names, width, x1, p2).pi)
    return forall([y, p1, p2], _implies(premise, disj(zero, one)))


def gen_valid(n: int) -> Formula:
    """Universal formula over ``x``: ``x`` validly encodes a string of ``2**n`` bits."""
    if n < 1:
        raise PreconditionViolated("n must be at least 1")
    if n + 1 > PRIME_WIDTH_CAP:
        raise WidthCapExceeded(f"prime width {n + 1} exceeds the cap {PRIME_WIDTH_CAP}")
    return valid_formula(Names(), n, "x")


def crt_encode(bits: Sequence[int]) -> int:
    """Least valid encoding of ``bits``: residue ``bits[g]`` modulo every prime in
    ``[(g+1)**3, (g+2)**3)``."""
    modulus = 1
    value = 0
    ps = primes_below((len(bits) + 1) ** 3)
    for g, bit in enumerate(bits):
        for p in ps:
            if (g + 1) ** 3 <= p < (g + 2) ** 3:
                # Combine value (mod modulus) with bit (mod p).
                k = ((bit - value) * pow(modulus, -1, p)) % p
                value += modulus * k
                modulus *= p
    return value


def bit_zero_pair(names: Names, r1: int, x: ExprLike, y: ExprLike) -> Neutral:
    """Bit ``y`` of the valid encoding ``x`` is 0.

    Bit ``y`` is read from the primes of ``[(y+1)**3, (y+2)**3)``; the
    existential member asks for one such prime dividing ``x``, the universal
    member for all of them.  Both require ``y + 1 < 2**r1``.
    """
    width = 3 * (r1 + 1)
    y1 = Expr.lift(y) + 1
    p = names.fresh("p")
    sigma = exists([p], conj(prime_pair(names, r1, p, y1).sigma, mod_pair(names, width, x, p).sigma))
    q = names.fresh("p")
    pi = conj(
        lt(y1, 1 << r1),
        forall([q], _implies(prime_pair(names, r1, q, y1).sigma, mod_pair(names, width, x, q).pi)),
    )
    return Neutral(sigma, pi)


@dataclass(frozen=True)
class BitPredicates:
    zero: Neutral
    one: Neutral


def gen_bit_predicates(params: ReductionParams) -> BitPredicates:
    """Neutral pairs over ``x, y`` reading bit ``y`` of an encoding ``x`` as 0, resp. 1."""
    r1 = params.r_exp + 1
    if r1 > PRIME_WIDTH_CAP:
        raise WidthCapExceeded(f"prime width {r1} exceeds the cap {PRIME_WIDTH_CAP}")
    zero = bit_zero_pair(Names(), r1, "x", "y")
    return BitPredicates(zero, ~bit_zero_pair(Names(), r1, "x", "y"))


# ---------------------------------------------------------------------------
# Succinctly described circuits


def _xs(i: int) -> list[str]:
    return [f"x{j}" for j in range(1, i + 1)]


def top_pair(names: Names, params: ReductionParams, xs: Sequence[str], y: ExprLike) -> Neutral:
    """Gate ``y`` is true under the encodings ``xs``.

    Gates ``2**q (j-1) .. 2**q j - 1`` live in ``xs[j-1]`` for ``j < i``;
    every later gate lives in ``xs[i-1]``.
    """
    i = params.i
    r1 = params.r_exp + 1
    block = 1 << params.q_exp
    parts = []
    for j in range(1, i):
        guard = conj(le(block * (j - 1), y), lt(y, block * j))
        parts.append(Neutral.plain(guard).implies(~bit_zero_pair(names, r1, xs[j - 1], y)))
    guard = le(block * (i - 1), y)
    parts.append(Neutral.plain(guard).implies(~bit_zero_pair(names, r1, xs[i - 1], y)))
    return n_all(parts)


@dataclass(frozen=True)
class SuccinctSuite:
    """Gate-value tests and connective checks over ``x1 .. xi`` and ``y, z1, z2``."""

    top: Neutral
    bot: Neutral
    and_: Neutral
    or_: Neutral
    not_: Neutral
    const: Neutral
    describer: Neutral
    gates: Formula


def _check_describer(d: SuccinctCircuit, params: ReductionParams) -> None:
    d.describer.validate()
    if d.s != params.r_exp:
        raise PreconditionViolated(f"describer addresses 2**{d.s} gates but r_exp is {params.r_exp}")
    if 3 * d.s + 3 <= DESCRIBER_CHECK_BITS:
        # Raises IllFormedDescriber for a gate without a unique description.
        expand_succinct(d, d.described_size)


def _suite(names: Names, d: SuccinctCircuit, params: ReductionParams, xs: Sequence[str]) -> SuccinctSuite:
    def top(v):
        return top_pair(names, params, xs, v)

    y, z1, z2 = "y", "z1", "z2"
    and_ = top(y).iff(top(z1) & top(z2))
    or_ = top(y).iff(top(z1) | top(z2))
    not_ = top(y).iff(~top(z1))
    const = top(y)
    widths = [3, d.s, d.s, d.s]
    desc = packed_circuit_pair(names, d.describer, ["t", y, z1, z2], widths)
    gates = _gates_formula(names, d, params, xs)
    return SuccinctSuite(top(y), ~top(y), and_, or_, not_, const, desc, gates)


def _gates_formula(names: Names, d: SuccinctCircuit, params: ReductionParams, xs: Sequence[str]) -> Formula:
    """Universal formula: the encoded gate values are consistent with ``d``."""
    t, y, z1, z2 = (names.fresh(s) for s in ("t", "y", "z", "z"))

    def top(v):
        return top_pair(names, params, xs, v)

    cases = [
        (AND, top(y).iff(top(z1) & top(z2))),
        (OR, top(y).iff(top(z1) | top(z2))),
        (NOT, top(y).iff(~top(z1))),
        (CONST1, top(y)),
    ]
    consequent = conj(*(_implies(eq(t, code), f.pi) for code, f in cases))
    desc = packed_circuit_pair(names, d.describer, [t, y, z1, z2], [3, d.s, d.s, d.s])
    return forall([t, y, z1, z2], _implies(desc.sigma, consequent))


def gen_succinct_suite(d: SuccinctCircuit, params: ReductionParams) -> SuccinctSuite:
    _check_describer(d, params)
    return _suite(Names(), d, params, _xs(params.i))


def gen_reduction(d: SuccinctCircuit, params: ReductionParams) -> Formula:
    """Closed formula with ``i + 1`` alternating blocks, true iff some encodings of
    the odd-indexed strings beat all valid encodings of the even-indexed ones,
    in the sense that the described circuit then has a consistent evaluation
    with output 1 (odd ``i``) or every consistent evaluation outputs 1 (even ``i``)."""
    _check_describer(d, params)
    names = Names()
    i = params.i
    xs = _xs(i)
    r = params.r_exp
    if r + 1 > PRIME_WIDTH_CAP:
        raise WidthCapExceeded(f"prime width {r + 1} exceeds the cap {PRIME_WIDTH_CAP}")
    gates = _gates_formula(names, d, params, xs)
    out = top_pair(names, params, xs, (1 << r) - 1)
    if i % 2:
        psi = conj(gates, out.pi)
    else:
        psi = _implies(gates, out.sigma)
    odd = [valid_formula(names, r, xs[j - 1]) for j in range(1, i + 1, 2)]
    even = [valid_formula(names, r, xs[j - 1]) for j in range(2, i + 1, 2)]
    body = conj(*odd, _implies(conj(*even), psi)) if even else conj(*odd, psi)
    for j in range(i, 0, -1):
        body = exists([xs[j - 1]], body) if j % 2 else forall([xs[j - 1]], body)
    return body


# ---------------------------------------------------------------------------
# The hard family for one-variable existential formulas


def gen_hard_family(n: int) -> Formula:
    """``exists y. y > 1 /\\ y < 2**n /\\ y | x``: multiples of some ``1 < m < 2**n``."""
    if n < 1:
        raise PreconditionViolated("n must be at least 1")
    names = Names()
    y = names.fresh("y")
    return exists([y], conj(mod_pair(names, n, "x", y).sigma, gt(y, 1)))
