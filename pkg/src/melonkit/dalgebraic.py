"""Nonlinear differential polynomials evaluated on truncated series.

A :class:`DiffPoly` is a sum of monomials ``c(x) * f^(k1) * f^(k2) * ...``
where ``c`` is a polynomial and the multiset ``(k1, k2, ...)`` lists
derivative orders; ``(0, 0, 2)`` stands for ``f * f * f''``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from melonkit import catalog as _cat
from melonkit.dfinite import InhomODE, InsufficientOrder, apply_op
from melonkit.series import LaurentSeries, to_fraction

__all__ = [
    "DiffPoly",
    "Monomial",
    "eval_diffpoly",
    "substitute_check",
    "reciprocal_negate",
    "affine_shift",
    "identity",
    "EQ13",
    "THM3",
    "DALGEBRAIC",
    "SUBSTITUTE_SEED",
]

SUBSTITUTE_SEED = 20161


@dataclass(frozen=True)
class Monomial:
    coeff: tuple
    factors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeff", tuple(self.coeff))
        object.__setattr__(self, "factors", tuple(sorted(self.factors)))


@dataclass(frozen=True)
class DiffPoly:
    monomials: tuple[Monomial, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "monomials", tuple(m if isinstance(m, Monomial) else Monomial(*m) for m in self.monomials)
        )

    @property
    def max_derivative(self) -> int:
        return max((max(m.factors, default=0) for m in self.monomials), default=0)

    @property
    def max_coeff_degree(self) -> int:
        return max(len(m.coeff) - 1 for m in self.monomials)

    @property
    def degree(self) -> int:
        """Total degree in ``f`` and its derivatives."""
        return max(len(m.factors) for m in self.monomials)

    def __len__(self):
        return len(self.monomials)


def eval_diffpoly(dp: DiffPoly, f: LaurentSeries) -> LaurentSeries:
    """``sum c(x) prod f^(k)`` exactly, with order bookkeeping from the series arithmetic."""
    if f.order is not None and f.order < dp.max_derivative + dp.max_coeff_degree:
        raise InsufficientOrder(
            f"series known to x^{f.order}; need at least x^{dp.max_derivative + dp.max_coeff_degree}"
        )
    derivs = [f]
    for _ in range(dp.max_derivative):
        derivs.append(derivs[-1].deriv())
    powers: dict[tuple[int, ...], LaurentSeries] = {}
    total = LaurentSeries.zero()
    for m in dp.monomials:
        term = powers.get(m.factors)
        if term is None:
            term = LaurentSeries.constant(1)
            for k in m.factors:
                term = term * derivs[k]
            powers[m.factors] = term
        total = total + LaurentSeries.from_poly(m.coeff) * term
    return total


# -- stored equations ------------------------------------------------------------

_LHQ2 = _cat.LH_Q2  # x^2 (1+x)(1-8x)

EQ13 = DiffPoly(
    (
        (_LHQ2, (0, 2)),
        (_cat.pscale(-2, _LHQ2), (1, 1)),
        (_cat.pmul((0, 2), (4, -21, -16)), (0, 1)),
        (_cat.pscale(-1, _cat.LH_Q0), (0, 0)),
        # the cubic term carries -12: with +12, -1/V3 is no solution
        ((-12,), (0, 0, 0)),
    )
)

THM3 = DiffPoly(
    (
        (_LHQ2, (0, 2)),
        (_cat.pscale(-2, _cat.pmul(_cat.xpow(2), (1, 0, -1), _cat.ONE_MINUS_8X)), (2,)),
        (_cat.pscale(-2, _LHQ2), (1, 1)),
        (_cat.pmul((0, 2), (4, -21, -16)), (0, 1)),
        (_cat.pmul((0, -4), (4, -23, -9)), (1,)),
        ((-12,), (0, 0, 0)),
        ((60, -32, 16), (0, 0)),
        ((-96, 96, -132), (0,)),
        ((48, -64, 176, -48), ()),
    )
)

DALGEBRAIC = {"eq13": EQ13, "thm3": THM3}


# -- substitutions -------------------------------------------------------------------

Transform = tuple[Callable[[LaurentSeries], LaurentSeries], Callable[[LaurentSeries], LaurentSeries], str]


def reciprocal_negate() -> Transform:
    """``g -> -1/g``; the base residual is multiplied by ``(-1/g)**3``."""

    def t(g):
        return -g.inv()

    def mult(g):
        r = t(g)
        return r * r * r

    return t, mult, "reciprocal_negate"


def affine_shift(a, b) -> Transform:
    """``g -> g + a + b x`` with unit multiplier."""
    a, b = to_fraction(a), to_fraction(b)

    def t(g):
        return g + LaurentSeries.from_poly((a, b))

    return t, (lambda g: LaurentSeries.constant(1)), f"affine_shift({a},{b})"


def identity() -> Transform:
    return (lambda g: g), (lambda g: LaurentSeries.constant(1)), "identity"


def random_series(N: int, seed: int = SUBSTITUTE_SEED) -> LaurentSeries:
    """Reproducible test series with small rational coefficients and unit constant term."""
    rng = random.Random(seed)
    coeffs = [Fraction(1)] + [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(N)]
    return LaurentSeries(coeffs, 0, N)


def _residual(base, g: LaurentSeries) -> LaurentSeries:
    if isinstance(base, DiffPoly):
        return eval_diffpoly(base, g)
    return apply_op(base, g)


def substitute_check(
    base: "InhomODE | DiffPoly",
    transform: Transform,
    dp: DiffPoly,
    N: int = 60,
    seed: int = SUBSTITUTE_SEED,
) -> bool:
    """True iff ``dp(T(g)) == mult(g) * base(g)`` through ``x**N`` for a random ``g``.

    The series ``g`` has arbitrary coefficients, so agreement is an identity
    between the two differential expressions rather than a property of any
    particular solution.
    """
    t, mult, _ = transform
    g = random_series(N + 4, seed)
    left = eval_diffpoly(dp, t(g))
    right = mult(g) * _residual(base, g)
    diff = left - right
    reach = min(o for o in (left.order, right.order) if o is not None)
    return reach >= N and diff.truncate(N).is_zero()
