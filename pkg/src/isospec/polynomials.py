"""Dense integer polynomials, constant term first."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients constant term first, no trailing zeros."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        c = [int(x) for x in self.coefficients]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coefficients", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __str__(self) -> str:
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coefficients[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{'*' if mono else ''}{mono}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        head = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        return head + "".join(f" {s} {b}" for s, b in terms[1:])


def parse_polynomial(text: str) -> IntPolynomial:
    """One line of integer coefficients, constant term first."""
    lines = [(k, raw.split("#", 1)[0].strip()) for k, raw in enumerate(text.splitlines(), start=1)]
    lines = [(k, line) for k, line in lines if line]
    if len(lines) != 1:
        raise ParseError(f"expected one line of coefficients, found {len(lines)}")
    k, line = lines[0]
    coeffs = []
    for tok in line.replace(",", " ").split():
        try:
            coeffs.append(int(tok))
        except ValueError:
            raise ParseError(f"bad coefficient {tok!r}", k, tok) from None
    f = IntPolynomial(tuple(coeffs))
    if not f.coefficients:
        raise ParseError("the zero polynomial defines no field", k, line)
    return f
