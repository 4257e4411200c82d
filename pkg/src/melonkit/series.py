"""Truncated Laurent series with exact rational coefficients.

A :class:`LaurentSeries` stores the coefficients of ``x**valuation`` through
``x**order``; everything from ``x**(order + 1)`` on is unknown.  An ``order``
of ``None`` marks an exact Laurent polynomial (nothing is unknown).

Arithmetic keeps this bookkeeping pessimistic: a result never claims more
known coefficients than its operands justify, and reading a coefficient past
``order`` raises :class:`PrecisionError` instead of returning a silent zero.

Coefficients live in a ``flint.fmpq_poly`` (shifted by the valuation) so the
quadratic inner loops run in C; the public surface hands out
:class:`fractions.Fraction` values.
"""

from __future__ import annotations

import json
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

import flint

__all__ = [
    "LaurentSeries",
    "SeriesError",
    "PrecisionError",
    "ZeroLeadingCoefficient",
    "NonUnitConstantTerm",
    "BadInnerValuation",
    "ls_arith",
    "ls_inv",
    "ls_deriv",
    "ls_pow_rat",
    "ls_compose",
    "rf_expand",
    "to_fraction",
    "x",
]


class SeriesError(ArithmeticError):
    pass


class PrecisionError(SeriesError):
    """A coefficient beyond the known truncation order was requested."""


class ZeroLeadingCoefficient(SeriesError, ZeroDivisionError):
    pass


class NonUnitConstantTerm(SeriesError):
    pass


class BadInnerValuation(SeriesError):
    pass


Scalar = Union[int, Fraction, Rational]


def to_fraction(c) -> Fraction:
    """Convert an int, Fraction, fmpq/fmpz or ``"num/den"`` string to Fraction."""
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, flint.fmpq):
        return Fraction(int(c.p), int(c.q))
    if isinstance(c, flint.fmpz):
        return Fraction(int(c))
    if isinstance(c, str):
        return Fraction(c)
    if isinstance(c, Rational):
        return Fraction(c.numerator, c.denominator)
    raise TypeError(f"not an exact rational: {c!r}")


def _fmpq(c) -> flint.fmpq:
    if isinstance(c, flint.fmpq):
        return c
    f = to_fraction(c)
    return flint.fmpq(f.numerator, f.denominator)


def _min_order(*orders):
    known = [o for o in orders if o is not None]
    return min(known) if known else None


def _add_order(order, k):
    return None if order is None else order + k


class LaurentSeries:
    """``x**valuation * (c0 + c1 x + ...) + O(x**(order + 1))``.

    Parameters
    ----------
    coeffs:
        Coefficients of ``x**valuation, x**(valuation+1), ...``.
    valuation:
        Exponent of the first entry of ``coeffs``.
    order:
        Highest known exponent, or ``None`` for an exact Laurent polynomial.
        When given, ``coeffs`` is padded with zeros or truncated to fit.

    Leading zeros are stripped on construction, so ``valuation`` is the true
    valuation of the known part.  A series that is zero through ``order``
    has ``valuation == order + 1`` and no coefficients.
    """

    __slots__ = ("_p", "valuation", "order")

    def __init__(self, coeffs: Iterable = (), valuation: int = 0, order: int | None = None):
        p = flint.fmpq_poly([_fmpq(c) for c in coeffs])
        self._set(p, int(valuation), order)

    @classmethod
    def _raw(cls, p: flint.fmpq_poly, valuation: int, order: int | None) -> "LaurentSeries":
        s = cls.__new__(cls)
        s._set(p, valuation, order)
        return s

    def _set(self, p, valuation, order):
        if order is not None:
            order = int(order)
            n = order - valuation + 1
            if n <= 0:
                p = flint.fmpq_poly()
            elif p.length() > n:
                p = p.truncate(n)
        if p.is_zero():
            valuation = order + 1 if order is not None else 0
        elif p[0] == 0:
            k = 1
            while p[k] == 0:
                k += 1
            p = p.right_shift(k)
            valuation += k
        self._p = p
        self.valuation = valuation
        self.order = order

    # -- construction helpers -------------------------------------------

    @classmethod
    def monomial(cls, k: int, c: Scalar = 1) -> "LaurentSeries":
        return cls([c], valuation=k)

    @classmethod
    def constant(cls, c: Scalar, order: int | None = None) -> "LaurentSeries":
        return cls([c], 0, order)

    @classmethod
    def from_poly(cls, coeffs: Sequence, order: int | None = None) -> "LaurentSeries":
        """Polynomial ``sum(coeffs[i] x**i)``, optionally truncated at ``order``."""
        return cls(coeffs, 0, order)

    @classmethod
    def zero(cls, order: int | None = None) -> "LaurentSeries":
        return cls((), 0, order)

    # -- inspection -----------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.order is None

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        """Stored coefficients from ``valuation`` to ``order`` (or the degree)."""
        n = self._p.length() if self.order is None else self.order - self.valuation + 1
        return tuple(to_fraction(self._p[i]) for i in range(max(n, 0)))

    @property
    def degree(self) -> int | None:
        """Highest exponent with a nonzero stored coefficient."""
        if self._p.is_zero():
            return None
        return self.valuation + self._p.degree()

    def __getitem__(self, n: int) -> Fraction:
        if self.order is not None and n > self.order:
            raise PrecisionError(f"coefficient x^{n} requested, series known to x^{self.order}")
        if n < self.valuation:
            return Fraction(0)
        return to_fraction(self._p[n - self.valuation])

    def coefficient_list(self, start: int = 0, stop: int | None = None) -> list[Fraction]:
        """Coefficients of ``x**start .. x**stop`` inclusive (default: to ``order``)."""
        if stop is None:
            stop = self.order if self.order is not None else self.degree
            if stop is None:
                return []
        return [self[n] for n in range(start, stop + 1)]

    def is_zero(self) -> bool:
        """True if every known coefficient vanishes."""
        return self._p.is_zero()

    def first_nonzero(self) -> int | None:
        """Exponent of the first nonzero known coefficient, or None."""
        return None if self._p.is_zero() else self.valuation

    def require_order(self, n: int) -> "LaurentSeries":
        """Raise PrecisionError unless coefficients through ``x**n`` are known."""
        if self.order is not None and self.order < n:
            raise PrecisionError(f"series known to x^{self.order}, need x^{n}")
        return self

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs[:8]):
            if c:
                terms.append(f"{c}*x^{self.valuation + i}")
        more = " + ..." if len(self.coeffs) > 8 else ""
        tail = "" if self.order is None else f" + O(x^{self.order + 1})"
        return f"LaurentSeries({' + '.join(terms) or '0'}{more}{tail})"

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentSeries.constant(other)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.valuation == other.valuation
            and self.order == other.order
            and self._p == other._p
        )

    def __hash__(self):
        return hash((self.valuation, self.order, self.coeffs))

    # -- arithmetic -----------------------------------------------------

    @staticmethod
    def _coerce(other) -> "LaurentSeries":
        if isinstance(other, LaurentSeries):
            return other
        if isinstance(other, (int, Fraction, flint.fmpq, flint.fmpz)) or isinstance(other, Rational):
            return LaurentSeries.constant(other)
        raise TypeError(f"cannot combine LaurentSeries with {type(other).__name__}")

    def __add__(self, other):
        try:
            b = self._coerce(other)
        except TypeError:
            return NotImplemented
        a = self
        order = _min_order(a.order, b.order)
        v = min(a.valuation, b.valuation)
        p = a._p.left_shift(a.valuation - v) + b._p.left_shift(b.valuation - v)
        return LaurentSeries._raw(p, v, order)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries._raw(-self._p, self.valuation, self.order)

    def __sub__(self, other):
        try:
            b = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, flint.fmpq)):
            if other == 0:
                return LaurentSeries.zero(self.order)
            return LaurentSeries._raw(self._p * _fmpq(other), self.valuation, self.order)
        try:
            b = self._coerce(other)
        except TypeError:
            return NotImplemented
        a = self
        # unknown tails: a*b is known up to min(Na + vb, Nb + va)
        oa = None if a.order is None else a.order + b.valuation
        ob = None if b.order is None else b.order + a.valuation
        order = _min_order(oa, ob)
        v = a.valuation + b.valuation
        if order is None:
            p = a._p * b._p
        else:
            n = order - v + 1
            if n <= 0:
                return LaurentSeries.zero(order)
            p = a._p.mul_low(b._p, n)
        return LaurentSeries._raw(p, v, order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, flint.fmpq)):
            if other == 0:
                raise ZeroDivisionError("division of a series by zero")
            return LaurentSeries._raw(self._p / _fmpq(other), self.valuation, self.order)
        b = self._coerce(other)
        if not b.is_exact:
            return self * b.inv()
        if self.is_exact:
            raise PrecisionError("exact/exact division needs an explicit order; use rf_expand")
        # 1/b just precise enough that the quotient is known to order - val(b)
        return self * b.inv(order=self.order - b.valuation - self.valuation)

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inv()

    def __pow__(self, e):
        if isinstance(e, int):
            if e < 0:
                return self.inv() ** (-e)
            if self.order is None:
                return LaurentSeries._raw(self._p ** e, self.valuation * e, None)
            result = LaurentSeries.constant(1)
            base = self
            while e:
                if e & 1:
                    result = result * base
                e >>= 1
                if e:
                    base = base * base
            return result
        return self.pow_rat(e)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by ``x**k`` (exact, precision moves along)."""
        return LaurentSeries._raw(self._p, self.valuation + k, _add_order(self.order, k))

    def truncate(self, order: int) -> "LaurentSeries":
        """Forget every coefficient above ``x**order``."""
        if self.order is not None and order > self.order:
            raise PrecisionError(f"cannot truncate to x^{order}; known only to x^{self.order}")
        return LaurentSeries._raw(self._p, self.valuation, order)

    # -- calculus -------------------------------------------------------

    def deriv(self, k: int = 1) -> "LaurentSeries":
        """k-th derivative; the truncation order drops by k."""
        s = self
        for _ in range(k):
            s = s._deriv1()
        return s

    def _deriv1(self):
        v = self.valuation
        # d/dx x^v g = x^(v-1) (v g + x g')
        p = self._p * v + self._p.derivative().left_shift(1)
        return LaurentSeries._raw(p, v - 1, _add_order(self.order, -1))

    def inv(self, order: int | None = None) -> "LaurentSeries":
        """Reciprocal series.

        For a truncated series the order follows from the known relative
        precision; an exact polynomial needs ``order``.
        """
        if self._p.is_zero():
            raise ZeroLeadingCoefficient("series vanishes to its known order; reciprocal undefined")
        v = self.valuation
        if self.order is None:
            if order is None:
                raise PrecisionError("reciprocal of an exact polynomial needs an explicit order")
            n = order + v + 1
        else:
            n = self.order - v + 1
            if order is not None:
                n = min(n, order + v + 1)
        if n <= 0:
            return LaurentSeries.zero(-v + n - 1)
        return LaurentSeries._raw(_inv_poly(self._p, n), -v, -v + n - 1)

    def pow_rat(self, e: Scalar, order: int | None = None) -> "LaurentSeries":
        """``self ** e`` for rational e via the principal branch (value 1 at x=0).

        Requires valuation 0 and constant term 1; factor monomials and
        scalars out first.
        """
        e = to_fraction(e)
        if self._p.is_zero() or self.valuation != 0 or self._p[0] != 1:
            raise NonUnitConstantTerm("fractional powers need valuation 0 and constant term 1")
        if e.denominator == 1 and e >= 0 and self.order is None:
            return self ** int(e)
        n = self.order + 1 if self.order is not None else None
        if order is not None:
            n = order + 1 if n is None else min(n, order + 1)
        if n is None:
            raise PrecisionError("fractional power of an exact polynomial needs an explicit order")
        return LaurentSeries._raw(_pow_rat_poly(self._p, e, n), 0, n - 1)

    def compose(self, inner: "LaurentSeries") -> "LaurentSeries":
        """``self(inner(x))``; inner must have valuation >= 1, self valuation >= 0."""
        return ls_compose(self, inner)

    __call__ = compose

    # -- serialization --------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "valuation": self.valuation,
            "order": self.order,
            "coeffs": [_frac_str(c) for c in self.coeffs],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> "LaurentSeries":
        return cls([Fraction(c) for c in obj["coeffs"]], int(obj["valuation"]), obj.get("order"))

    @classmethod
    def from_json(cls, text: str) -> "LaurentSeries":
        return cls.from_json_obj(json.loads(text))

    def to_text(self) -> str:
        """One coefficient per line, from ``x**valuation``; a header line keeps the offsets."""
        lines = [f"# valuation {self.valuation} order {self.order}"]
        lines += [_frac_str(c) for c in self.coeffs]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "LaurentSeries":
        valuation, order = 0, None
        coeffs = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if "valuation" in parts:
                    valuation = int(parts[parts.index("valuation") + 1])
                if "order" in parts:
                    o = parts[parts.index("order") + 1]
                    order = None if o == "None" else int(o)
                continue
            coeffs.append(Fraction(line))
        if order is None and not text.lstrip().startswith("#"):
            order = valuation + len(coeffs) - 1
        return cls(coeffs, valuation, order)


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _inv_poly(p: flint.fmpq_poly, n: int) -> flint.fmpq_poly:
    """1/p mod x^n by Newton iteration; p[0] != 0."""
    g = flint.fmpq_poly([1 / p[0]])
    k = 1
    while k < n:
        k = min(2 * k, n)
        e = p.mul_low(g, k)
        e = -e
        e = e + 2
        g = g.mul_low(e, k)
    return g.truncate(n)


def _pow_rat_poly(p: flint.fmpq_poly, e: Fraction, n: int) -> flint.fmpq_poly:
    """p**e mod x^n for p(0) = 1, principal branch."""
    num, den = e.numerator, e.denominator
    if den == 1:
        base = p.truncate(n)
    else:
        # h = p^(-1/den) by Newton: h <- h + h (1 - p h^den) / den
        h = flint.fmpq_poly([1])
        k = 1
        while k < n:
            k = min(2 * k, n)
            t = p.mul_low(h.pow_trunc(den, k), k)
            h = h + h.mul_low(1 - t, k) / den
        base = p.mul_low(h.pow_trunc(den - 1, n), n) if den > 1 else p
        # base = p^(1/den)
    if num >= 0:
        return base.pow_trunc(num, n)
    return _inv_poly(base.pow_trunc(-num, n), n)


# -- functional forms -------------------------------------------------------


def ls_arith(a: LaurentSeries, b, kind: str) -> LaurentSeries:
    """Dispatch ``add | sub | mul | scale`` (scale: b is a rational scalar)."""
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "scale":
        return a * to_fraction(b)
    raise ValueError(f"unknown arithmetic kind {kind!r}")


def ls_inv(a: LaurentSeries, order: int | None = None) -> LaurentSeries:
    return a.inv(order)


def ls_deriv(a: LaurentSeries, k: int = 1) -> LaurentSeries:
    return a.deriv(k)


def ls_pow_rat(a: LaurentSeries, e: Scalar, order: int | None = None) -> LaurentSeries:
    return a.pow_rat(e, order)


def ls_compose(outer: LaurentSeries, inner: LaurentSeries) -> LaurentSeries:
    """Substitute ``inner`` into ``outer`` by Horner's rule with truncation."""
    if inner.valuation < 1:
        raise BadInnerValuation(f"inner valuation must be >= 1, got {inner.valuation}")
    if outer.valuation < 0 and not outer.is_zero():
        raise BadInnerValuation("outer series must have valuation >= 0")
    v = inner.valuation
    if outer.order is None:
        m = outer.degree if outer.degree is not None else 0
        order = inner.order
    else:
        m = outer.order
        order = (m + 1) * v - 1
        if inner.order is not None:
            order = min(order, inner.order)
    if order is not None:
        m = min(m, order // v)
    if order is None:
        q = inner._p.left_shift(v)
        acc = flint.fmpq_poly()
        for k in range(m, -1, -1):
            c = outer._p[k - outer.valuation] if k >= outer.valuation else 0
            acc = acc * q + c
        return LaurentSeries._raw(acc, 0, None)
    n = order + 1
    q = inner._p.left_shift(v).truncate(n)
    acc = flint.fmpq_poly()
    for k in range(m, -1, -1):
        c = outer._p[k - outer.valuation] if k >= outer.valuation else 0
        # x-degree needed at this Horner depth: terms of acc get multiplied by q^k
        need = n - k * v
        if not acc.is_zero():
            acc = acc.mul_low(q, need)
        acc = acc + c
    return LaurentSeries._raw(acc, 0, order)


def rf_expand(num: Sequence, den: Sequence, N: int) -> LaurentSeries:
    """Laurent expansion of ``num(x)/den(x)`` at 0, known through ``x**N``."""
    a = LaurentSeries.from_poly(num)
    b = LaurentSeries.from_poly(den)
    if b.is_zero():
        raise ZeroDivisionError("denominator polynomial is identically zero")
    if a.is_zero():
        return LaurentSeries.zero(N)
    # 1/b known to N - val(a) makes the product known to N
    return (a * b.inv(order=N - a.valuation)).truncate(N)


x = LaurentSeries.monomial(1)
