"""Differential approximants and local singularity analysis.

A differential approximant of order ``K`` for a series ``f`` is an
inhomogeneous linear ODE ``sum_k Q_k f^(k) = P_I`` with polynomial
coefficients of prescribed degrees, chosen so that the equation holds on a
window of low-order coefficients.  Biasing fixes known factors
``(x - x0)^m`` of the leading polynomial ``Q_K``.

Roots of ``Q_K`` estimate the singularities of ``f`` and the indicial
polynomial at each root estimates the local exponents.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import flint

from melonkit.dfinite import (
    DiffOp,
    InhomODE,
    NotSingular,
    _falling,
    indicial_polynomial,
    to_recurrence,
)
from melonkit.series import LaurentSeries, to_fraction

__all__ = [
    "DAConfig",
    "ApproximantFit",
    "Singularity",
    "SingularityReport",
    "ScanEntry",
    "RankDeficient",
    "WindowTooSmall",
    "RootFindingFailure",
    "fit",
    "report",
    "scan",
    "scan_spread",
    "parse_bias",
]


class RankDeficient(ArithmeticError):
    pass


class WindowTooSmall(ValueError):
    pass


class RootFindingFailure(ArithmeticError):
    pass


def parse_bias(text: str) -> tuple[tuple[Fraction, int], ...]:
    """``"1/8:3,-1:3"`` -> ``((1/8, 3), (-1, 3))``."""
    out = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        loc, _, mult = part.partition(":")
        out.append((Fraction(loc), int(mult or 1)))
    return tuple(out)


@dataclass(frozen=True)
class DAConfig:
    """Shape of a differential approximant.

    ``degrees`` gives the degree of each ``Q_k`` (an int means the same for
    all), including the bias factors in ``Q_K``.  ``window`` is the number of
    coefficient equations; ``None`` uses one fewer than the number of unknowns,
    ``"all"`` every equation the series supports.
    """

    order: int
    degrees: tuple[int, ...] | int
    inhom: int = -1
    bias: tuple[tuple[Fraction, int], ...] = ()
    mode: str = "exact"
    precision: int = 256
    window: int | str | None = None

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("approximant order must be >= 1")
        degs = self.degrees
        if isinstance(degs, int):
            degs = (degs,) * (self.order + 1)
        degs = tuple(int(d) for d in degs)
        if len(degs) != self.order + 1:
            raise ValueError(f"need {self.order + 1} degrees, got {len(degs)}")
        object.__setattr__(self, "degrees", degs)
        bias = self.bias if not isinstance(self.bias, str) else parse_bias(self.bias)
        object.__setattr__(self, "bias", tuple((to_fraction(a), int(m)) for a, m in bias))
        if self.inhom < -1:
            raise ValueError("inhomogeneous degree must be >= -1")
        if self.mode not in ("exact", "float"):
            raise ValueError("mode must be 'exact' or 'float'")
        if self.free_leading_degree < 0:
            raise ValueError("leading degree is smaller than the bias degree")

    @property
    def bias_degree(self) -> int:
        return sum(m for _, m in self.bias)

    @property
    def free_leading_degree(self) -> int:
        return self.degrees[-1] - self.bias_degree

    @property
    def unknowns(self) -> int:
        degs = list(self.degrees[:-1]) + [self.free_leading_degree]
        return sum(d + 1 for d in degs) + self.inhom + 1

    def bias_poly(self) -> flint.fmpz_poly:
        """Product of ``(den*x - num)^m``, primitive with positive leading coefficient."""
        B = flint.fmpz_poly([1])
        for a, m in self.bias:
            B *= flint.fmpz_poly([-a.numerator, a.denominator]) ** m
        return B

    def label(self) -> str:
        b = ",".join(f"{a}:{m}" for a, m in self.bias) or "none"
        return f"K={self.order} d={list(self.degrees)} dI={self.inhom} bias={b} {self.mode}"


@dataclass
class ApproximantFit:
    config: DAConfig
    qpolys: list  # Q_0..Q_K: fmpz_poly (exact) or arb coefficient lists (float)
    inhom: list
    window: int
    used: int
    consistent: bool
    nullity: int | None = None
    lead_free: object = None  # Q_K with the bias factors removed

    @property
    def exact(self) -> bool:
        return self.config.mode == "exact"

    @property
    def ode(self) -> InhomODE:
        if not self.exact:
            raise TypeError("float fits carry no exact operator")
        qs = tuple(tuple(int(c) for c in q.coeffs()) or (0,) for q in self.qpolys)
        return InhomODE(DiffOp(qs), tuple(int(c) for c in self.inhom))

    def leading(self):
        return self.qpolys[-1]


def _deriv_coeffs(f: list, k: int, n_max: int) -> list:
    """Coefficients 0..n_max of the k-th derivative of the coefficient list f."""
    out = []
    for e in range(n_max + 1):
        v = f[e + k]
        for i in range(1, k + 1):
            v *= e + i
        out.append(v)
    return out


def _series_coeffs(series: LaurentSeries) -> tuple[list, int]:
    if series.valuation < 0:
        raise ValueError("approximants need a power series (valuation >= 0)")
    if series.order is None:
        raise ValueError("approximants need a truncated series")
    return series.coefficient_list(0, series.order), series.order


def _build_matrix(coeffs: list[Fraction], top: int, cfg: DAConfig):
    """Integer equation matrix; returns (rows, column map, window)."""
    K = cfg.order
    U = cfg.unknowns
    avail = top - K + 1  # equations at x^0 .. x^(top-K)
    if cfg.window is None:
        W = U - 1
    elif cfg.window == "all":
        W = avail
    else:
        W = int(cfg.window)
    if W < U - 1:
        raise WindowTooSmall(f"window of {W} equations cannot fix {U} unknowns up to scale")
    if W > avail:
        raise WindowTooSmall(f"series known to x^{top} supports {avail} equations, {W} requested")
    den = 1
    for c in coeffs[: W + K]:
        den = den * c.denominator // math.gcd(den, c.denominator)
    f = [int(c * den) for c in coeffs[: W + K]]
    derivs = [_deriv_coeffs(f, k, W - 1) for k in range(K + 1)]
    B = cfg.bias_poly()
    if cfg.bias:
        gB = (flint.fmpz_poly(derivs[K]) * B).coeffs()[:W]
        gB = [int(c) for c in gB] + [0] * (W - len(gB))
        derivs[K] = gB
    cols: list[tuple] = []
    for k in range(K + 1):
        d = cfg.degrees[k] if k < K else cfg.free_leading_degree
        cols += [(k, j) for j in range(d + 1)]
    cols += [("I", j) for j in range(cfg.inhom + 1)]
    rows = []
    for n in range(W):
        row = []
        for k, j in cols:
            if k == "I":
                row.append(-den if n == j else 0)
            else:
                row.append(derivs[k][n - j] if n >= j else 0)
        rows.append(row)
    return rows, cols, W


def _normalise_index(cols, cfg: DAConfig, vec) -> int:
    lead0 = cols.index((cfg.order, 0))
    if vec[lead0] != 0:
        return lead0
    for i, v in enumerate(vec):
        if v != 0:
            return i
    raise RankDeficient("only the zero operator fits")


def fit(series: LaurentSeries, cfg: DAConfig) -> ApproximantFit:
    """Fit a differential approximant of shape ``cfg`` to ``series``.

    Normalisation is on the constant term of ``Q_K`` with the bias removed,
    falling back to the first nonzero unknown: float fits set it to 1, exact
    fits return the primitive integer solution with that entry positive.
    """
    coeffs, top = _series_coeffs(series)
    if all(c == 0 for c in coeffs):
        raise RankDeficient("every operator annihilates the zero series")
    rows, cols, W = _build_matrix(coeffs, top, cfg)
    if cfg.mode == "exact":
        return _fit_exact(rows, cols, W, cfg, top)
    return _fit_float(rows, cols, W, cfg, top)


def _assemble(vec, cols, cfg: DAConfig, conv):
    K = cfg.order
    qs = [[] for _ in range(K + 1)]
    inh = []
    for (k, j), v in zip(cols, vec):
        (inh if k == "I" else qs[k]).append(conv(v))
    return qs, inh


def _fit_exact(rows, cols, W, cfg, top) -> ApproximantFit:
    A = flint.fmpz_mat(rows)
    X, nullity = A.nullspace()
    if nullity != 1:
        raise RankDeficient(f"solution space has dimension {nullity} (window {W}, {len(cols)} unknowns)")
    vec = [X[i, 0] for i in range(len(cols))]
    piv = _normalise_index(cols, cfg, vec)
    if vec[piv] < 0:
        vec = [-v for v in vec]
    g = 0
    for v in vec:
        g = math.gcd(g, int(v))
    vec = [int(v) // g for v in vec]
    qs, inh = _assemble(vec, cols, cfg, int)
    polys = [flint.fmpz_poly(q) for q in qs]
    free = polys[-1]
    polys[-1] = free * cfg.bias_poly()
    # exact by construction; asserted so that a broken matrix cannot slip through
    assert all(sum(r * v for r, v in zip(row, vec)) == 0 for row in rows)
    return ApproximantFit(cfg, polys, inh, W, W + cfg.order, True, nullity, free)


def _fit_float(rows, cols, W, cfg, top) -> ApproximantFit:
    prec = cfg.precision
    old = flint.ctx.prec
    flint.ctx.prec = prec
    try:
        lead0 = cols.index((cfg.order, 0))
        rest = [i for i in range(len(cols)) if i != lead0]
        # equilibrate rows, then columns; both are undone below
        rscale = [max((abs(v) for v in row), default=1) or 1 for row in rows]
        cscale = [max((abs(row[i]) / s for row, s in zip(rows, rscale)), default=1) or 1 for i in range(len(cols))]
        Ar = [[flint.arb(row[i]) / s / cscale[i] for i in rest] for row, s in zip(rows, rscale)]
        b = [[-flint.arb(row[lead0]) / s / cscale[lead0]] for row, s in zip(rows, rscale)]
        A = flint.arb_mat(Ar)
        bm = flint.arb_mat(b)
        # the leading square block determines the fit; extra rows only verify it
        n = len(rest)
        M = flint.arb_mat([[A[i, j] for j in range(n)] for i in range(n)])
        rhs = flint.arb_mat([[bm[i, 0]] for i in range(n)])
        try:
            y = M.solve(rhs)
        except ZeroDivisionError:
            # not certifiably nonsingular at this precision: take the floating
            # point solution and let the residual decide consistency
            y = M.solve(rhs, algorithm="approx")
            if any(not y[i, 0].is_finite() for i in range(y.nrows())):
                raise RankDeficient(f"float system is singular at {prec} bits") from None
        # residual per row relative to the size of the terms that cancel in it
        resid = A * y - bm
        ymag = [abs(float(y[i, 0].mid())) for i in range(n)]
        worst = 0.0
        for i in range(W):
            mag = abs(float(bm[i, 0].mid())) + sum(abs(float(A[i, j].mid())) * ymag[j] for j in range(n))
            worst = max(worst, abs(float(resid[i, 0].mid())) / (mag or 1.0))
        consistent = worst <= 2.0 ** (-prec // 2)
        vec = []
        it = iter(range(len(rest)))
        for i in range(len(cols)):
            vec.append(flint.arb(1) if i == lead0 else y[next(it), 0] * cscale[lead0] / cscale[i])
        qs, inh = _assemble(vec, cols, cfg, lambda v: v)
        free = list(qs[-1])
        B = [flint.arb(int(c)) for c in cfg.bias_poly().coeffs()]
        qs[-1] = list((flint.arb_poly(free) * flint.arb_poly(B)).coeffs())
        return ApproximantFit(cfg, qs, inh, W, W + cfg.order, consistent, None, free)
    finally:
        flint.ctx.prec = old


# -- singularity report ------------------------------------------------------------


@dataclass
class Singularity:
    location: object  # Fraction for exact locations, flint.acb otherwise
    multiplicity: int
    exponents: list
    nontrivial: list
    classification: str
    method: str
    biased: bool = False

    # flint balls do not pickle; ship them as exact (mantissa, exponent) pairs
    def __getstate__(self):
        state = dict(self.__dict__)
        state["location"] = _pack(self.location)
        state["exponents"] = [_pack(e) for e in self.exponents]
        state["nontrivial"] = [_pack(e) for e in self.nontrivial]
        return state

    def __setstate__(self, state):
        state = dict(state)
        state["location"] = _unpack(state["location"])
        state["exponents"] = [_unpack(e) for e in state["exponents"]]
        state["nontrivial"] = [_unpack(e) for e in state["nontrivial"]]
        self.__dict__.update(state)

    def location_float(self) -> complex:
        if isinstance(self.location, Fraction):
            return complex(float(self.location))
        return complex(self.location.mid())

    def exponent_floats(self, nontrivial: bool = True) -> list[complex]:
        return [_to_complex(e) for e in (self.nontrivial if nontrivial else self.exponents)]


@dataclass
class SingularityReport:
    config: DAConfig
    singularities: list[Singularity]
    precision: int

    def nearest(self, x: complex) -> Singularity:
        return min(self.singularities, key=lambda s: abs(s.location_float() - x))

    def to_json_obj(self) -> dict:
        return {
            "config": self.config.label(),
            "precision_bits": self.precision,
            "singularities": [
                {
                    "location": _num_json(s.location),
                    "multiplicity": s.multiplicity,
                    "biased": s.biased,
                    "exponents": [_num_json(e) for e in s.exponents],
                    "nontrivial_exponents": [_num_json(e) for e in s.nontrivial],
                    "classification": s.classification,
                    "classification_method": s.method,
                }
                for s in self.singularities
            ],
        }


def _pack_arb(v: flint.arb) -> tuple:
    (m, e), (rm, re) = v.mid().man_exp(), v.rad().man_exp()
    return int(m), int(e), int(rm), int(re)


def _unpack_arb(t: tuple) -> flint.arb:
    m, e, rm, re = t
    return flint.arb((m, e), (rm, re))


def _pack(v):
    if isinstance(v, flint.arb):
        return ("arb", _pack_arb(v))
    if isinstance(v, flint.acb):
        return ("acb", _pack_arb(v.real), _pack_arb(v.imag))
    return v


def _unpack(v):
    if isinstance(v, tuple) and v and v[0] == "arb":
        return _unpack_arb(v[1])
    if isinstance(v, tuple) and v and v[0] == "acb":
        return flint.acb(_unpack_arb(v[1]), _unpack_arb(v[2]))
    return v


def _to_complex(v) -> complex:
    if isinstance(v, Fraction):
        return complex(float(v))
    if isinstance(v, flint.arb):
        return complex(float(v.mid()))
    return complex(v.mid())


def _num_json(v) -> dict:
    if isinstance(v, Fraction):
        return {"exact": str(v), "value": _dec(v), "radius": "0"}
    if isinstance(v, flint.arb):
        v = flint.acb(v)
    digits = max(10, int(flint.ctx.prec * 0.30103) - 2)
    out = {"value": v.real.mid().str(digits, radius=False), "radius": v.real.rad().str(3, radius=False)}
    if not v.imag.contains(0) or abs(float(v.imag.mid())) > 0:
        out["imag"] = v.imag.mid().str(digits, radius=False)
        out["imag_radius"] = v.imag.rad().str(3, radius=False)
    return out


def _dec(q: Fraction, digits: int = 30) -> str:
    return flint.arb(flint.fmpq(q.numerator, q.denominator)).str(digits, radius=False)


def _is_nonneg_int(v, tol: float) -> bool:
    if isinstance(v, Fraction):
        return v.denominator == 1 and v >= 0
    z = _to_complex(v)
    r = round(z.real)
    return r >= 0 and abs(z - r) <= tol


def _log_free(op: DiffOp, x0: Fraction, exps: list[Fraction]) -> bool:
    """True iff the homogeneous operator has ``K`` log-free local solutions at ``x0``.

    The operator is moved to ``t = x - x0`` and truncated power-series
    solutions in ``t`` through the largest exponent are counted by exact
    linear algebra: every later coefficient is forced by the recurrence.
    """
    K = op.order
    shift = flint.fmpq_poly([flint.fmpq(x0.numerator, x0.denominator), 1])
    qs = []
    for q in op.coeffs:
        p = flint.fmpq_poly([flint.fmpq(to_fraction(c).numerator, to_fraction(c).denominator) for c in q])(shift)
        qs.append(tuple(Fraction(int(c.p), int(c.q)) for c in p.coeffs()) or (0,))
    rec = to_recurrence(DiffOp(tuple(qs)))
    T = int(max(exps))
    s0 = rec.min_shift
    rows = []
    for n in range(s0, T + s0 + 1):
        row = [Fraction(0)] * (T + 1)
        for s, pc in rec.polys.items():
            m = n - s
            if 0 <= m <= T:
                row[m] += to_fraction(sum(Fraction(c) * m**i for i, c in enumerate(pc)))
        rows.append(row)
    den = 1
    for row in rows:
        for v in row:
            den = den * v.denominator // math.gcd(den, v.denominator)
    M = flint.fmpz_mat([[int(v * den) for v in row] for row in rows])
    _, nullity = M.nullspace()
    return nullity == K


def _exponents_at(op_polys, K: int, x0, m: int, exact: bool, tol: float):
    """All exponents (regular-singular rule) and the ``m`` nontrivial ones."""
    if exact:
        op = DiffOp(tuple(tuple(int(c) for c in q.coeffs()) or (0,) for q in op_polys))
        poly = indicial_polynomial(op, x0, regular=True)
        # theta^(K-m) divides exactly; its roots 0..K-m-1 carry no information
        quo, rem = divmod(poly, _falling(K - m))
        assert rem == 0
        trivial = [Fraction(i) for i in range(K - m)]
        nontriv = _roots_exact(quo)
        return op, trivial + nontriv, nontriv
    coeff_lists = op_polys
    poly = _indicial_float(coeff_lists, K, x0, m)
    roots = _acb_roots(poly)
    trivial = [Fraction(i) for i in range(K - m)]
    return None, trivial + roots, roots


def _indicial_float(qs, K, x0, m):
    """Nontrivial indicial polynomial ``sum_k q_k (theta - K + m)^(k - K + m)``."""
    out = flint.acb_poly([])
    for k in range(K - m, K + 1):
        j = k - K + m
        p = flint.acb_poly([flint.acb(c) for c in qs[k]])
        for _ in range(j):
            p = p.derivative()
        val = p(x0) / math.factorial(j)
        ff = flint.acb_poly([1])
        for i in range(j):
            ff *= flint.acb_poly([-(K - m) - i, 1])
        out += ff * val
    return out


def _roots_exact(p: flint.fmpq_poly) -> list:
    if p.degree() < 1:
        return []
    _, facs = p.factor()
    rational, other = [], []
    for fac, mult in facs:
        if fac.degree() == 1:
            c0, c1 = fac.coeffs()
            r = -c0 / c1
            rational += [Fraction(int(r.p), int(r.q))] * mult
        else:
            num = flint.fmpz_poly([int((c * fac.denom()).p) for c in fac.coeffs()])
            for root, rm in num.complex_roots():
                other += [root] * (rm * mult)
    other.sort(key=lambda z: (float(z.real.mid()), float(z.imag.mid())))
    return sorted(rational) + other


def _acb_roots(p: flint.acb_poly) -> list:
    coeffs = list(p.coeffs())
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) < 2:
        return []
    p = flint.acb_poly(coeffs)
    try:
        roots = p.roots(tol=2.0 ** (-0.45 * flint.ctx.prec))
    except ValueError:
        try:
            roots = p.roots()
        except ValueError as exc:
            raise RootFindingFailure(str(exc)) from exc
    return sorted(roots, key=lambda z: (float(z.real.mid()), float(z.imag.mid())))


def _cluster(roots: list, tol: float) -> list[tuple[object, int]]:
    out: list[list] = []
    for r in roots:
        z = complex(r.mid())
        for c in out:
            if abs(c[2] - z) <= tol:
                c[1] += 1
                c[3].append(z)
                break
        else:
            out.append([r, 1, z, [z]])
    res = []
    for r, m, _, zs in out:
        if m > 1:
            cz = sum(zs) / m
            r = flint.acb(cz.real, cz.imag)
        res.append((r, m))
    return res


def _leading_factorisation(fit_: ApproximantFit):
    """Leading polynomial split into (exact rational roots, numeric roots) with multiplicity."""
    cfg = fit_.config
    if fit_.exact:
        lead = fit_.qpolys[-1]
        content, facs = lead.factor()
        rational = {}
        numeric = []
        for fac, mult in facs:
            if fac.degree() == 1:
                c0, c1 = (int(c) for c in fac.coeffs())
                rational[Fraction(-c0, c1)] = rational.get(Fraction(-c0, c1), 0) + mult
            else:
                for root, rm in fac.complex_roots():
                    numeric.append((root, rm * mult))
        return rational, numeric
    # bias roots are known exactly; only the free part is located numerically
    roots = _acb_roots(flint.acb_poly([flint.acb(c) for c in fit_.lead_free]))
    tol = 2.0 ** (-cfg.precision / 4)
    rational = {a: m for a, m in cfg.bias}
    return rational, _cluster(roots, tol)


def report(fit_: ApproximantFit, precision_bits: int = 256) -> SingularityReport:
    """Locate the roots of ``Q_K`` and estimate the local exponents at each.

    Exponents use the regular-singular rule: at a root of multiplicity
    ``m`` the indicial polynomial has the trivial roots ``0..K-m-1`` and
    ``m`` informative ones (``nontrivial``).  Exact rational locations are
    classified by a log-free solution count; other locations heuristically
    (nonnegative integer exponent spectrum).
    """
    cfg = fit_.config
    K = cfg.order
    old = flint.ctx.prec
    flint.ctx.prec = precision_bits
    try:
        rational, numeric = _leading_factorisation(fit_)
        bias_locs = {a for a, _ in cfg.bias}
        tol = 2.0 ** (-precision_bits / 4)
        sings: list[Singularity] = []
        for x0 in sorted(rational):
            m = rational[x0]
            if fit_.exact:
                op, exps, nontriv = _exponents_at(fit_.qpolys, K, x0, m, True, tol)
                if all(isinstance(e, Fraction) and e.denominator == 1 and e >= 0 for e in exps):
                    apparent = _log_free(op, x0, exps) and len(set(exps)) == len(exps)
                    method = "log-free local solution count"
                else:
                    apparent, method = False, "exponents not all nonnegative integers"
            else:
                x0a = flint.acb(flint.arb(flint.fmpq(x0.numerator, x0.denominator)))
                _, exps, nontriv = _exponents_at(fit_.qpolys, K, x0a, m, False, tol)
                apparent = all(_is_nonneg_int(e, 1e-6) for e in exps) and len(exps) == K
                method = "heuristic: nonnegative integer exponents"
            sings.append(
                Singularity(x0, m, exps, nontriv, "apparent" if apparent else "physical", method, x0 in bias_locs)
            )
        for root, m in numeric:
            qs = fit_.qpolys
            if fit_.exact:
                qs = [[flint.arb(int(c)) for c in q.coeffs()] for q in fit_.qpolys]
            try:
                _, exps, nontriv = _exponents_at(qs, K, root, m, False, tol)
            except RootFindingFailure:
                exps, nontriv = [], []
            apparent = bool(exps) and all(_is_nonneg_int(e, 1e-6) for e in exps)
            sings.append(
                Singularity(root, m, exps, nontriv, "apparent" if apparent else "physical",
                            "heuristic: nonnegative integer exponents")
            )
        return SingularityReport(cfg, sings, precision_bits)
    finally:
        flint.ctx.prec = old


# -- batch analysis --------------------------------------------------------------


@dataclass
class ScanEntry:
    config: DAConfig
    report: SingularityReport | None = None
    error: str | None = None


def _scan_one(args) -> ScanEntry:
    text, cfg, prec = args
    series = LaurentSeries.from_json(text) if isinstance(text, str) else text
    try:
        return ScanEntry(cfg, report(fit(series, cfg), prec))
    except (RankDeficient, WindowTooSmall, RootFindingFailure, NotSingular, ValueError, ArithmeticError) as exc:
        return ScanEntry(cfg, None, f"{type(exc).__name__}: {exc}")


def scan(
    series: LaurentSeries,
    grid: Sequence[DAConfig],
    precision_bits: int = 256,
    workers: int | None = None,
) -> list[ScanEntry]:
    """Fit and report every configuration; failures are recorded per entry."""
    if not grid:
        return []
    if workers and workers > 1:
        text = series.to_json()
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(_scan_one, [(text, cfg, precision_bits) for cfg in grid]))
    return [_scan_one((series, cfg, precision_bits)) for cfg in grid]


def scan_spread(entries: Sequence[ScanEntry], target: complex) -> dict:
    """Spread of the location nearest ``target`` over successful entries."""
    locs = [e.report.nearest(target).location_float() for e in entries if e.report and e.report.singularities]
    if not locs:
        return {"count": 0}
    reals = [z.real for z in locs]
    return {
        "count": len(locs),
        "min": min(reals),
        "max": max(reals),
        "spread": max(reals) - min(reals),
        "max_error": max(abs(z - target) for z in locs),
    }
