"""Hypergeometric and Heun series, and the closed-form identities built on them.

Every identity is checked as a residual series ``left - right``.  Inputs are
built with a few dozen extra terms so that the residual is known through
``x**N`` even after the valuation losses of the Laurent prefactors; a
residual that is shorter than requested raises instead of passing vacuously.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import flint

from melonkit import catalog as _cat
from melonkit.dfinite import catalog, solve_series
from melonkit.series import LaurentSeries, PrecisionError, ls_compose, rf_expand, to_fraction

__all__ = [
    "HyperSpec",
    "HeunSpec",
    "IdentityId",
    "InvalidLowerParameter",
    "InvalidGamma",
    "InvalidPullback",
    "hyper_series",
    "heun_series",
    "build_named",
    "verify_identity",
    "PAD",
]

# extra working terms; covers the x^-11 prefactors of the S_1 identity
PAD = 40


class InvalidLowerParameter(ValueError):
    pass


class InvalidGamma(ValueError):
    pass


class InvalidPullback(ValueError):
    pass


def _nonpositive_integer(v: Fraction) -> bool:
    return v.denominator == 1 and v <= 0


@dataclass(frozen=True)
class HyperSpec:
    """``pFq(upper; lower; num(x)/den(x))`` with rational parameters."""

    upper: tuple
    lower: tuple
    pullback: tuple = ((0, 1), (1,))

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(to_fraction(a) for a in self.upper))
        object.__setattr__(self, "lower", tuple(to_fraction(b) for b in self.lower))
        num, den = self.pullback
        object.__setattr__(self, "pullback", (tuple(num), tuple(den)))
        for b in self.lower:
            if _nonpositive_integer(b):
                raise InvalidLowerParameter(f"lower parameter {b} is a nonpositive integer")
        if not any(to_fraction(c) for c in den):
            raise InvalidPullback("pullback denominator is zero")
        if any(to_fraction(c) for c in num):
            vn = next(i for i, c in enumerate(num) if to_fraction(c))
            vd = next(i for i, c in enumerate(den) if to_fraction(c))
            if vn - vd < 1:
                raise InvalidPullback("pullback must vanish at x = 0")


def _fq(v) -> flint.fmpq:
    f = to_fraction(v)
    return flint.fmpq(f.numerator, f.denominator)


def _to_series(c: list, order: int) -> LaurentSeries:
    return LaurentSeries([Fraction(int(v.p), int(v.q)) for v in c], 0, order)


def maclaurin_pfq(upper: Sequence, lower: Sequence, N: int) -> LaurentSeries:
    """``pFq(upper; lower; z)`` through ``z**N`` from the term ratio."""
    up = [_fq(a) for a in upper]
    lo = [_fq(b) for b in lower]
    t = flint.fmpq(1)
    out = [t]
    for n in range(N):
        num = flint.fmpq(1)
        for a in up:
            num *= a + n
        den = flint.fmpq(n + 1)
        for b in lo:
            den *= b + n
        t = t * num / den
        out.append(t)
    return _to_series(out, N)


def hyper_series(spec: HyperSpec, N: int) -> LaurentSeries:
    """Maclaurin series of the hypergeometric function at its pullback, to ``x**N``."""
    num, den = spec.pullback
    z = rf_expand(num, den, N)
    if z.is_zero():
        return LaurentSeries.constant(1, N)
    v = z.valuation
    base = maclaurin_pfq(spec.upper, spec.lower, N // v)
    return ls_compose(base, z).truncate(N)


@dataclass(frozen=True)
class HeunSpec:
    """General Heun function ``Heun(a, q; alpha, beta, gamma, delta; scale * x)``.

    Parameters follow the Maple convention; ``epsilon`` is derived from the
    Fuchs relation.
    """

    a: Fraction
    q: Fraction
    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    delta: Fraction
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("a", "q", "alpha", "beta", "gamma", "delta", "scale"):
            object.__setattr__(self, name, to_fraction(getattr(self, name)))
        if _nonpositive_integer(self.gamma):
            raise InvalidGamma(f"gamma = {self.gamma} admits no analytic local solution at 0")
        if self.a == 0:
            raise ValueError("the Heun singular point a must be nonzero")

    @property
    def epsilon(self) -> Fraction:
        return self.alpha + self.beta - self.gamma - self.delta + 1


def heun_series(spec: HeunSpec, N: int) -> LaurentSeries:
    """Local Heun solution normalised to 1 at the origin, through ``x**N``."""
    a, q, al, be, ga, de = (_fq(v) for v in (spec.a, spec.q, spec.alpha, spec.beta, spec.gamma, spec.delta))
    ep = _fq(spec.epsilon)
    lin = ga * (1 + a) + de * a + ep
    c = [flint.fmpq(1)]
    prev = flint.fmpq(0)
    for n in range(N):
        rhs = ((1 + a) * n * (n - 1) + lin * n + q) * c[n]
        if n:
            rhs -= (n - 1 + al) * (n - 1 + be) * prev
        prev = c[n]
        c.append(rhs / (a * (n + 1) * (n + ga)))
    s = _fq(spec.scale)
    sp = flint.fmpq(1)
    for j in range(N + 1):
        c[j] *= sp
        sp *= s
    return _to_series(c, N)


# -- the objects of the 3-watermelon problem ----------------------------------

THIRD = Fraction(1, 3)
A_PULLBACK = (_cat.pscale(27, _cat.xpow(2)), _cat.ppow(_cat.ONE_MINUS_2X, 3))
B_PULLBACK = (_cat.pscale(27, _cat.xpow(1)), _cat.ppow(_cat.ONE_PLUS_4X, 3))
KUMMER_PULLBACK = (_cat.pscale(-27, _cat.xpow(2)), _cat.pmul(_cat.ONE_MINUS_8X, _cat.ppow(_cat.ONE_PLUS_X, 2)))
S1_PULLBACK = (_cat.pscale(-64, _cat.pmul(_cat.X, _cat.ppow(_cat.ONE_PLUS_X, 3))), _cat.ppow(_cat.ONE_MINUS_8X, 3))

HEUN_V3 = HeunSpec(-8, 2, -1, -2, 2, -2, 8)
HEUN_V3_ALT = HeunSpec(Fraction(-1, 8), Fraction(-1, 4), -1, -2, 2, -2, -1)
HYP_H = HyperSpec((THIRD, 2 * THIRD), (1,), A_PULLBACK)


def _poly(coeffs, order=None) -> LaurentSeries:
    return LaurentSeries.from_poly(coeffs, order)


def _rat(num, den, N) -> LaurentSeries:
    return rf_expand(num, den, N)


def build_named(name: str, N: int) -> LaurentSeries:
    """``H``, ``R``, ``S1``, ``S2`` or ``SP`` known through ``x**N``."""
    key = name.upper()
    if key == "H":
        return hyper_series(HYP_H, N)
    if key == "R":
        return _rat(_cat.pmul(_cat.ONE_MINUS_8X, _cat.ppow(_cat.ONE_PLUS_X, 2)), _cat.ppow(_cat.ONE_MINUS_2X, 2), N)
    if key == "S1":
        M = N + 9
        f = hyper_series(HyperSpec((Fraction(1, 2), Fraction(3, 2), Fraction(9, 2)), (3, 4), S1_PULLBACK), M)
        pre = _poly(_cat.ppow(_cat.ONE_PLUS_X, 9)) * _poly(_cat.ONE_MINUS_8X, M).pow_rat(Fraction(-3, 2), M)
        return (pre * f).shift(-9).truncate(N)
    if key == "S2":
        M = N + 12
        H = hyper_series(HYP_H, M + 1)
        dH = H.deriv()
        br = _poly(_cat.pmul(_cat.X, _cat.ONE_PLUS_X, _cat.S2_P1)) * H
        br = br + _poly(_cat.pmul(_cat.ONE_MINUS_2X, _cat.S2_P2)) * dH * Fraction(1, 12)
        pre = _rat(_cat.pmul(_cat.ONE_MINUS_8X, _cat.ONE_PLUS_X), _cat.ppow(_cat.ONE_MINUS_2X, 2), M)
        return (pre * br).shift(-10).truncate(N)
    if key == "SP":
        return (_poly(_cat.SP_NUM) * Fraction(1, 9)).shift(-9).truncate(N)
    raise KeyError(f"unknown named series {name!r}")


# -- identities -----------------------------------------------------------------


class IdentityId(enum.Enum):
    V3_HEUN = "v3-heun"
    V3_HEUN_ALT = "v3-heun-alt"
    HEUN_AS_2F1 = "heun-2f1"
    RH_DERIV_FORM = "rh-deriv"
    CONTIGUOUS_FORM = "contiguous"
    PULLBACK_SWAP = "pullback"
    MODULAR_CURVE = "modular-curve"
    KUMMER_FORM = "kummer"
    F3_HEUN = "f3-heun"
    H_DECOMP = "h-decomp"
    S1_AS_H_SQUARED = "s1-square"

    @classmethod
    def parse(cls, name: "str | IdentityId") -> "IdentityId":
        if isinstance(name, IdentityId):
            return name
        for m in cls:
            if name.lower() in (m.value, m.name.lower()):
                return m
        raise KeyError(f"unknown identity {name!r}")


@dataclass
class _Ctx:
    N: int
    M: int
    provider: Callable[[str, int], LaurentSeries] | None = None
    memo: dict = field(default_factory=dict)

    def get(self, key: str, builder):
        if key not in self.memo:
            self.memo[key] = builder()
        return self.memo[key]

    def heun(self):
        return self.get("heun", lambda: heun_series(HEUN_V3, self.M))

    def H(self):
        return self.get("H", lambda: hyper_series(HYP_H, self.M))

    def A(self):
        return self.get("A", lambda: _rat(*A_PULLBACK, self.M))

    def v3(self):
        return self.get("v3", lambda: solve_series(catalog("V3_ODE"), (), self.M))

    def enumerated(self, which: str) -> LaurentSeries:
        if self.provider is not None:
            return self.provider(which, self.N)
        from melonkit.walkers import Rule, WalkerModel, enumerate_series

        rule = {"F3": Rule.FRIENDLY_TERMINAL, "F3inf": Rule.INFINITY_FRIENDLY, "V3": Rule.VICIOUS}[which]
        return enumerate_series(WalkerModel(3, rule), self.N)


def _hyp_at_A(ctx: _Ctx, upper, lower) -> LaurentSeries:
    return hyper_series(HyperSpec(upper, lower, A_PULLBACK), ctx.M)


def _res_v3_heun(ctx: _Ctx, spec: HeunSpec) -> LaurentSeries:
    heun = heun_series(spec, ctx.M)
    return ctx.v3().shift(3) * 3 - (_poly((-1, 1, -3)) + heun)


def _res_heun_2f1(ctx: _Ctx) -> LaurentSeries:
    M = ctx.M
    R = build_named("R", M)
    second = _rat(
        _cat.pmul(_cat.X, _cat.ONE_MINUS_8X, _cat.ppow(_cat.ONE_PLUS_X, 2), (1, 20, -8)),
        _cat.ppow(_cat.ONE_MINUS_2X, 5),
        M,
    )
    rhs = R * ctx.H() + second * _hyp_at_A(ctx, (Fraction(4, 3), Fraction(5, 3)), (2,))
    return ctx.heun() - rhs


def _res_rh_deriv(ctx: _Ctx) -> LaurentSeries:
    M = ctx.M
    R = build_named("R", M + 1)
    H = hyper_series(HYP_H, M + 1)
    corr = _poly(_cat.pmul(_cat.ONE_MINUS_8X, _cat.ppow(_cat.ONE_MINUS_2X, 2))) * R.deriv() * H.deriv()
    return ctx.heun() - (R * H - corr * Fraction(1, 24))


def _res_contiguous(ctx: _Ctx) -> LaurentSeries:
    M = ctx.M
    R = build_named("R", M)
    second = _rat(_cat.pmul(_cat.X, (1, 20, -8)), _cat.ppow(_cat.ONE_MINUS_2X, 2), M)
    rhs = R * ctx.H() + second * _hyp_at_A(ctx, (THIRD, 2 * THIRD), (2,))
    return ctx.heun() - rhs


def _res_pullback(ctx: _Ctx) -> LaurentSeries:
    M = ctx.M
    left = ctx.H() * _rat((1,), _cat.ONE_MINUS_2X, M)
    HB = hyper_series(HyperSpec((THIRD, 2 * THIRD), (1,), B_PULLBACK), M)
    return left - HB * _rat((1,), _cat.ONE_PLUS_4X, M)


def _res_modular(ctx: _Ctx) -> LaurentSeries:
    M = ctx.M
    A = ctx.A()
    B = _rat(*B_PULLBACK, M)
    Ap = [LaurentSeries.constant(1, M)]
    Bp = [LaurentSeries.constant(1, M)]
    for _ in range(3):
        Ap.append(Ap[-1] * A)
        Bp.append(Bp[-1] * B)
    tot = LaurentSeries.zero(M)
    for c, i, j in _cat.MODULAR_CURVE_TERMS:
        tot = tot + Ap[i] * Bp[j] * c
    return tot


def _res_kummer(ctx: _Ctx) -> LaurentSeries:
    M = ctx.M
    one8 = _poly(_cat.ONE_MINUS_8X, M)
    one1 = _poly(_cat.ONE_PLUS_X, M)
    f1 = hyper_series(HyperSpec((2 * THIRD, 2 * THIRD), (1,), KUMMER_PULLBACK), M)
    f2 = hyper_series(HyperSpec((2 * THIRD, Fraction(5, 3)), (2,), KUMMER_PULLBACK), M)
    t1 = one8.pow_rat(THIRD) * one1.pow_rat(2 * THIRD) * f1
    t2 = _poly(_cat.pmul(_cat.X, (1, 20, -8))) * one8.pow_rat(-2 * THIRD) * one1.pow_rat(-4 * THIRD) * f2
    return ctx.heun() - (t1 + t2)


def _res_f3_heun(ctx: _Ctx) -> LaurentSeries:
    heun = ctx.heun()
    num = _poly((2, -4, 8, -3)) - _poly((2, -2)) * heun
    den = _poly((1, -1, 3)) - heun
    return ctx.enumerated("F3") - num / den


def _res_h_decomp(ctx: _Ctx) -> LaurentSeries:
    M = ctx.M
    rhs = build_named("S1", M) * Fraction(1, 9) - build_named("S2", M) * Fraction(1, 630) + build_named("SP", M)
    return ctx.enumerated("F3inf") * ctx.enumerated("V3") - rhs


def _r_series(spec, M) -> LaurentSeries:
    scale, num, dx, d2 = spec
    return (_rat(num, _cat.ppow(_cat.ONE_MINUS_2X, d2), M + dx) * scale).shift(-dx)


def _res_s1_square(ctx: _Ctx) -> LaurentSeries:
    M = ctx.M
    H = hyper_series(HYP_H, M + 14)
    dH = H.deriv()
    HdH = H * dH
    rhs = (
        _r_series(_cat.R1_SPEC, M) * H * H
        + _r_series(_cat.R2_SPEC, M) * HdH
        + _r_series(_cat.R3_SPEC, M) * HdH.deriv()
    )
    return build_named("S1", M) * 6300 - rhs


_BUILDERS = {
    IdentityId.V3_HEUN: lambda c: _res_v3_heun(c, HEUN_V3),
    IdentityId.V3_HEUN_ALT: lambda c: _res_v3_heun(c, HEUN_V3_ALT),
    IdentityId.HEUN_AS_2F1: _res_heun_2f1,
    IdentityId.RH_DERIV_FORM: _res_rh_deriv,
    IdentityId.CONTIGUOUS_FORM: _res_contiguous,
    IdentityId.PULLBACK_SWAP: _res_pullback,
    IdentityId.MODULAR_CURVE: _res_modular,
    IdentityId.KUMMER_FORM: _res_kummer,
    IdentityId.F3_HEUN: _res_f3_heun,
    IdentityId.H_DECOMP: _res_h_decomp,
    IdentityId.S1_AS_H_SQUARED: _res_s1_square,
}


def verify_identity(
    ident: "IdentityId | str",
    N: int,
    provider: Callable[[str, int], LaurentSeries] | None = None,
) -> LaurentSeries:
    """Residual ``left - right`` of an identity, known exactly through ``x**N``.

    ``provider(which, N)`` may supply the enumerated series ``"F3"``,
    ``"F3inf"`` and ``"V3"`` (for example from a cache); by default they are
    enumerated on the spot.
    """
    ident = IdentityId.parse(ident)
    ctx = _Ctx(N, N + PAD, provider)
    res = _BUILDERS[ident](ctx)
    if res.order is not None and res.order < N:
        raise PrecisionError(f"{ident.value}: residual known only to x^{res.order} < x^{N}")
    return res.truncate(N)
