"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class PresburgerError(Exception):
    """Base class for all errors raised by this package."""


class SubstitutionOfBoundVariable(PresburgerError):
    pass


class NotPrenex(PresburgerError):
    pass


class NotSigmaOne(PresburgerError):
    pass


class ParseError(PresburgerError):
    """Syntax error in a ``.pa`` formula file.

    ``span`` locates the offending token; ``expected`` lists what the parser
    would have accepted at that point.
    """

    def __init__(self, message, span, expected=()):
        self.span = span
        self.expected = frozenset(expected)
        detail = message
        if self.expected:
            detail += " (expected one of: " + ", ".join(sorted(self.expected)) + ")"
        super().__init__(f"{span.line}:{span.column}: {detail}")


class CircuitFormatError(PresburgerError):
    def __init__(self, message, line=None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class InvalidCircuit(PresburgerError):
    pass


class WidthOverflow(PresburgerError):
    pass


class SizeExceeded(PresburgerError):
    pass


class IllFormedDescriber(PresburgerError):
    def __init__(self, gate, matches):
        self.gate = gate
        self.matches = matches
        super().__init__(f"gate {gate} is described by {matches} (t, j, k) triples, expected exactly 1")


class WidthCapExceeded(PresburgerError):
    pass


class DnfSizeExceeded(PresburgerError):
    def __init__(self, cap):
        self.cap = cap
        super().__init__(f"DNF would exceed the configured cap of {cap} clauses")


class GeneratorBoundExceeded(PresburgerError):
    """A semilinear generator broke the Pottier norm bound (always a bug)."""


class PreconditionViolated(PresburgerError):
    pass


class BoundTooLarge(PresburgerError):
    """The default quantifier bound ``2^bits`` is too large to enumerate.

    ``bits`` is None when even the exponent is too large to compute, in which
    case ``expression`` spells it out symbolically.
    """

    def __init__(self, bits, cap, expression=None):
        self.bits = bits
        self.cap = cap
        self.expression = expression
        need = bits if bits is not None else expression
        super().__init__(
            f"quantifier bound needs {need} bits (cap {cap}); pass an explicit bound override"
        )
