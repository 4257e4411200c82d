"""Linear differential operators with polynomial coefficients.

An operator ``L = sum_k Q_k(x) D^k`` acts on truncated Laurent series.  Its
coefficient recurrence is obtained by collecting ``x^n`` in
``sum_k Q_k f^(k)``: the monomial ``q x^j D^k`` carries ``c_m x^m`` to
``q m(m-1)...(m-k+1) c_m x^(m-k+j)``, so it contributes to the relation at
index ``n = m + s`` with shift ``s = j - k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import flint

from melonkit import catalog as _cat
from melonkit.series import LaurentSeries, PrecisionError, to_fraction

__all__ = [
    "DiffOp",
    "InhomODE",
    "PRecurrence",
    "InsufficientOrder",
    "UnderdeterminedAtIndex",
    "InconsistentSeed",
    "NotSingular",
    "UnknownName",
    "apply_op",
    "to_recurrence",
    "solve_series",
    "indicial_exponents",
    "indicial_polynomial",
    "catalog",
    "CATALOG_NAMES",
]


class InsufficientOrder(PrecisionError):
    pass


class UnderdeterminedAtIndex(ValueError):
    def __init__(self, n: int):
        super().__init__(f"coefficient c_{n} is not determined by the recurrence; supply a seed")
        self.n = n


class InconsistentSeed(ValueError):
    pass


class NotSingular(ValueError):
    pass


class UnknownName(KeyError):
    pass


def _norm_poly(coeffs: Iterable) -> tuple:
    out = [to_fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(int(c) if c.denominator == 1 else c for c in out)


def _qpoly(coeffs: Sequence) -> flint.fmpq_poly:
    return flint.fmpq_poly([flint.fmpq(to_fraction(c).numerator, to_fraction(c).denominator) for c in coeffs])


def _falling(k: int) -> flint.fmpq_poly:
    """m(m-1)...(m-k+1) as a polynomial in m."""
    p = flint.fmpq_poly([1])
    for i in range(k):
        p *= flint.fmpq_poly([-i, 1])
    return p


@dataclass(frozen=True)
class DiffOp:
    """``sum_k Q_k D^k`` with ``Q_k`` given constant term first."""

    coeffs: tuple[tuple, ...]

    def __post_init__(self):
        qs = tuple(_norm_poly(q) for q in self.coeffs)
        if not qs or not qs[-1]:
            raise ValueError("leading polynomial Q_K must be nonzero")
        object.__setattr__(self, "coeffs", qs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> tuple:
        return self.coeffs[-1]

    @property
    def max_degree(self) -> int:
        return max((len(q) - 1 for q in self.coeffs if q), default=0)


@dataclass(frozen=True)
class InhomODE:
    """``op(f) = rhs``; an empty ``rhs`` is the homogeneous equation."""

    op: DiffOp
    rhs: tuple = ()

    def __post_init__(self):
        if not isinstance(self.op, DiffOp):
            object.__setattr__(self, "op", DiffOp(tuple(self.op)))
        object.__setattr__(self, "rhs", _norm_poly(self.rhs))

    @property
    def order(self) -> int:
        return self.op.order

    @property
    def homogeneous(self) -> bool:
        return not self.rhs


def _as_ode(ode) -> InhomODE:
    if isinstance(ode, InhomODE):
        return ode
    if isinstance(ode, DiffOp):
        return InhomODE(ode)
    raise TypeError("expected InhomODE or DiffOp")


def apply_op(ode: "InhomODE | DiffOp", f: LaurentSeries, need: int | None = None) -> LaurentSeries:
    """``sum_k Q_k f^(k) - rhs`` computed exactly.

    Precision is tracked term by term, so the result order is
    ``min_k (f.order - k + val Q_k)``.  Raises :class:`InsufficientOrder`
    when no coefficient of the result is known, or when ``need`` is given and
    the result is known only below ``x**need``.
    """
    ode = _as_ode(ode)
    K = ode.order
    if f.order is not None and not f.is_zero() and f.order < f.valuation + K:
        raise InsufficientOrder(f"series known to x^{f.order} is too short for an order-{K} operator")
    total = LaurentSeries.zero()
    g = f
    for k, q in enumerate(ode.op.coeffs):
        if k:
            g = g.deriv()
        if q:
            total = total + LaurentSeries.from_poly(q) * g
    if ode.rhs:
        total = total - LaurentSeries.from_poly(ode.rhs)
    if need is not None and total.order is not None and total.order < need:
        raise InsufficientOrder(f"result known only to x^{total.order}, need x^{need}")
    return total


@dataclass(frozen=True)
class PRecurrence:
    """``sum_s P_s(n - s) c_{n-s} = r_n`` for every integer ``n``.

    ``polys`` maps the shift ``s`` to the coefficients (in ``m``) of
    ``P_s(m)``.  The relation at index ``n`` determines ``c_{n - s0}`` with
    ``s0 = min_shift`` unless ``P_{s0}(n - s0) = 0``; those nonnegative
    indices are listed in ``free_indices``.
    """

    polys: dict
    rhs: tuple
    min_shift: int
    free_indices: tuple[int, ...]

    @property
    def max_shift(self) -> int:
        return max(self.polys)

    def poly(self, s: int) -> flint.fmpq_poly:
        return _qpoly(self.polys.get(s, ()))

    def relation_residual(self, coeffs: dict | Sequence, n: int) -> Fraction:
        """Left minus right side of the relation at ``n`` for coefficients ``c_m``."""
        get = coeffs.get if isinstance(coeffs, dict) else (lambda m, d=0: coeffs[m] if 0 <= m < len(coeffs) else d)
        tot = Fraction(0)
        for s, pc in self.polys.items():
            m = n - s
            c = get(m, 0)
            if c:
                tot += to_fraction(_horner(pc, m)) * to_fraction(c)
        r = self.rhs[n] if 0 <= n < len(self.rhs) else 0
        return tot - r


def _horner(coeffs: Sequence, m: int):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * m + c
    return acc


def to_recurrence(ode: "InhomODE | DiffOp") -> PRecurrence:
    ode = _as_ode(ode)
    acc: dict[int, flint.fmpq_poly] = {}
    for k, q in enumerate(ode.op.coeffs):
        ff = _falling(k)
        for j, c in enumerate(q):
            if c:
                s = j - k
                acc[s] = acc.get(s, flint.fmpq_poly([])) + ff * flint.fmpq(to_fraction(c).numerator, to_fraction(c).denominator)
    polys = {}
    for s in sorted(acc):
        if acc[s] != 0:
            coeffs = [Fraction(int(c.p), int(c.q)) for c in acc[s].coeffs()]
            polys[s] = tuple(int(c) if c.denominator == 1 else c for c in coeffs)
    s0 = min(polys)
    lead = _qpoly(polys[s0])
    free = sorted(
        {int(r) for r, _ in _rational_roots(lead) if r.denominator == 1 and r >= 0}
    )
    return PRecurrence(polys, tuple(ode.rhs), s0, tuple(free))


def _rational_roots(p: flint.fmpq_poly) -> list[tuple[Fraction, int]]:
    if p.degree() < 1:
        return []
    _, facs = p.factor()
    out = []
    for fac, mult in facs:
        if fac.degree() == 1:
            c0, c1 = fac.coeffs()
            r = -c0 / c1
            out.append((Fraction(int(r.p), int(r.q)), mult))
    return out


def solve_series(
    ode: "InhomODE | DiffOp",
    seeds: Iterable[tuple[int, object]] | dict = (),
    N: int = 10,
) -> LaurentSeries:
    """Power-series solution known through ``x**N``.

    Seeds are ``(index, value)`` pairs.  They are required exactly at the
    indices where the leading recurrence coefficient vanishes; seeds at other
    indices are checked against the recurrence.
    """
    ode = _as_ode(ode)
    rec = to_recurrence(ode)
    seeds = dict(seeds.items() if isinstance(seeds, dict) else seeds)
    seeds = {int(k): to_fraction(v) for k, v in seeds.items()}
    s0 = rec.min_shift
    rhs = rec.rhs
    polys = [(s, pc) for s, pc in rec.polys.items() if s != s0]
    lead = rec.polys[s0]

    def r(n):
        return rhs[n] if 0 <= n < len(rhs) else 0

    # relations below the first one that involves c_0 have no unknowns
    for n in range(min(0, s0), s0):
        if r(n) != 0:
            raise InconsistentSeed(f"relation at x^{n} reads 0 = {r(n)}: no power-series solution")

    c: list[flint.fmpq] = []
    for m in range(N + 1):
        n = m + s0
        tot = flint.fmpq(to_fraction(r(n)).numerator, to_fraction(r(n)).denominator)
        for s, pc in polys:
            j = n - s
            if 0 <= j < m and c[j] != 0:
                tot -= _fq(_horner(pc, j)) * c[j]
        a = _fq(_horner(lead, m))
        if a == 0:
            if tot != 0:
                raise InconsistentSeed(f"relation at x^{n} cannot be met for any value of c_{m}")
            if m not in seeds:
                raise UnderdeterminedAtIndex(m)
            val = _fq(seeds[m])
        else:
            val = tot / a
            if m in seeds and _fq(seeds[m]) != val:
                raise InconsistentSeed(f"seed c_{m} = {seeds[m]} contradicts the recurrence value {val}")
        c.append(val)
    return LaurentSeries([Fraction(int(v.p), int(v.q)) for v in c], 0, N)


def _fq(v) -> flint.fmpq:
    if isinstance(v, flint.fmpq):
        return v
    f = to_fraction(v)
    return flint.fmpq(f.numerator, f.denominator)


# -- local exponents -----------------------------------------------------------


def _taylor_exact(q: Sequence, x0: Fraction) -> list[flint.fmpq]:
    if not q:
        return []
    p = _qpoly(q)(flint.fmpq_poly([_fq(x0), 1]))
    return list(p.coeffs())


def _taylor_numeric(q: Sequence, x0: flint.acb, terms: int) -> list[flint.acb]:
    if not q:
        return []
    p = flint.acb_poly([flint.acb(to_fraction(c).numerator) / to_fraction(c).denominator for c in q])
    out = []
    fact = flint.acb(1)
    for j in range(terms):
        out.append(p(x0) / fact)
        p = p.derivative()
        fact *= j + 1
    return out


def _multiplicity(tay: list, zero) -> int:
    m = 0
    while m < len(tay) and zero(tay[m]):
        m += 1
    return m


def indicial_polynomial(op: DiffOp, x0, *, regular: bool = False, tol: float | None = None):
    """Indicial polynomial of ``op`` at ``x0`` as a list of coefficients in ``theta``.

    Default rule: among the ``k`` with minimal ``m_k - k`` (``m_k`` the
    multiplicity of ``x0`` in ``Q_k``) sum ``q_k(x0) theta^(k)`` (falling
    factorial).  With ``regular=True`` the point is treated as a regular
    singularity whose order equals the multiplicity ``m`` of ``x0`` in
    ``Q_K``: the coefficient of ``(x - x0)^(k - K + m)`` in ``Q_k`` is used for
    every ``k >= K - m``, so that noise in lower coefficients of a fitted
    operator does not change the degree of the polynomial.

    ``x0`` may be rational (exact) or an ``acb``/complex number, in which case
    Taylor coefficients of magnitude below ``tol`` count as zero.
    """
    K = op.order
    exact = isinstance(x0, (int, Fraction, flint.fmpq))
    if exact:
        x0 = to_fraction(x0) if not isinstance(x0, flint.fmpq) else Fraction(int(x0.p), int(x0.q))
        tays = [_taylor_exact(q, x0) for q in op.coeffs]

        def zero(v):
            return v == 0

        to_acb = lambda v: flint.acb(flint.arb(v))  # noqa: E731
    else:
        x0 = flint.acb(x0)
        if tol is None:
            tol = 2.0 ** (-flint.ctx.prec // 3)
        n_tay = max(len(q) for q in op.coeffs)
        tays = [_taylor_numeric(q, x0, n_tay) for q in op.coeffs]
        scale = max((abs(complex(t[0].mid())) if t else 0.0) for t in tays) or 1.0

        def zero(v):
            return abs(complex(v.mid())) <= tol * scale

        to_acb = lambda v: v  # noqa: E731

    if not tays[K] or not zero(tays[K][0]):
        raise NotSingular(f"Q_{K} does not vanish at {x0}")

    mults = [_multiplicity(t, zero) if t else None for t in tays]
    terms: list[tuple[int, object]] = []
    if regular:
        m = mults[K]
        for k in range(max(0, K - m), K + 1):
            j = k - K + m
            t = tays[k]
            if t and j < len(t):
                terms.append((k, t[j]))
    else:
        best = min(mk - k for k, mk in enumerate(mults) if mk is not None)
        for k, mk in enumerate(mults):
            if mk is not None and mk - k == best:
                terms.append((k, tays[k][mk]))

    if exact:
        poly = flint.fmpq_poly([])
        for k, v in terms:
            poly += _falling(k) * v
        return poly
    poly = flint.acb_poly([])
    for k, v in terms:
        ff = _falling(k)
        poly += flint.acb_poly([flint.acb(flint.arb(c)) for c in ff.coeffs()]) * to_acb(v)
    return poly


def indicial_exponents(op: "DiffOp | InhomODE", x0, *, regular: bool = False, tol: float | None = None) -> list:
    """Roots of the indicial polynomial at the singular point ``x0``, with multiplicity.

    Rational roots come back as ``Fraction``; other roots, and every root
    when ``x0`` is not rational, as ``flint.acb`` balls at the current
    ``flint.ctx.prec``.  Rational roots are listed first, in increasing order.
    """
    if isinstance(op, InhomODE):
        op = op.op
    poly = indicial_polynomial(op, x0, regular=regular, tol=tol)
    if isinstance(poly, flint.fmpq_poly):
        if poly.degree() < 1:
            return []
        _, facs = poly.factor()
        rational: list[Fraction] = []
        other: list = []
        for fac, mult in facs:
            if fac.degree() == 1:
                c0, c1 = fac.coeffs()
                r = -c0 / c1
                rational += [Fraction(int(r.p), int(r.q))] * mult
            else:
                num = flint.fmpz_poly([int((c * fac.denom()).p) for c in fac.coeffs()])
                for root, rm in num.complex_roots():
                    other += [root] * (rm * mult)
        return sorted(rational) + other
    return _acb_poly_roots(poly)


def _acb_poly_roots(poly: flint.acb_poly) -> list:
    coeffs = list(poly.coeffs())
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) < 2:
        return []
    p = flint.acb_poly(coeffs)
    try:
        roots = p.roots(tol=2.0 ** (-0.45 * flint.ctx.prec))
    except ValueError:
        roots = p.roots()
    # order by real part for reproducible output
    return sorted(roots, key=lambda z: (float(z.real.mid()), float(z.imag.mid())))


# -- catalog -------------------------------------------------------------------

CATALOG_NAMES = tuple(_cat.OPERATORS)


def catalog(name: str) -> InhomODE:
    """Stored operator ``V3_ODE``, ``L_HEUN``, ``L_HYP``, ``L5``, ``L2`` or ``L3``."""
    key = name if name in _cat.OPERATORS else _cat.ALIASES.get(name.lower())
    if key is None:
        raise UnknownName(name)
    qs, rhs = _cat.OPERATORS[key]
    return InhomODE(DiffOp(qs), rhs)
