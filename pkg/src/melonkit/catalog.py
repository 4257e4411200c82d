"""Stored operators, polynomials and rational functions.

Every polynomial is a tuple of integer coefficients, constant term first.
Factored forms are kept as factor lists and multiplied out on demand, so
each table stays close to the factorised form it encodes.

:func:`catalog_fingerprint` hashes the canonical multiplied-out data; the
CLI refuses to report identity results if it does not match
``CATALOG_SHA256``.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from functools import reduce

import flint

ONE_PLUS_X = (1, 1)
ONE_MINUS_8X = (1, -8)
ONE_MINUS_2X = (1, -2)
ONE_PLUS_4X = (1, 4)
X = (0, 1)


def pmul(*factors) -> tuple[int, ...]:
    """Multiply integer polynomials given as coefficient tuples."""
    p = reduce(lambda a, b: a * flint.fmpz_poly(list(b)), factors, flint.fmpz_poly([1]))
    return tuple(int(c) for c in p.coeffs()) or (0,)


def ppow(f, k: int) -> tuple[int, ...]:
    return pmul(*([f] * k))


def pscale(c: int, f) -> tuple[int, ...]:
    return tuple(c * a for a in f)


def xpow(k: int) -> tuple[int, ...]:
    return (0,) * k + (1,)


# -- vicious 3-watermelon ODE and the Heun operator ------------------------

LH_Q2 = pmul(xpow(2), ONE_PLUS_X, ONE_MINUS_8X)
LH_Q1 = pmul(X, (8, -42, -32))
LH_Q0 = (12, -40, -16)
V3_RHS = (12,)

# -- operator annihilating the 2F1 with pullback 27x^2/(1-2x)^3 ------------

LHYP_Q2 = pmul(X, ONE_PLUS_X, ONE_MINUS_8X, ppow(ONE_MINUS_2X, 2))
LHYP_Q1 = pmul(ONE_MINUS_2X, (1, -12, -24, 16))
LHYP_Q0 = pmul((0, -24), ONE_PLUS_X)

# -- order-5 inhomogeneous operator for H = F3inf * V3 ---------------------

L5_Q11 = (
    135, 3090, -629150, 6460390, -12243595, -23887460, 80746754,
    -237602788, 126388752, -37648256, 49950720, -3932160,
)
L5_P4_CORE = (
    1512, 25377, -6996060, 106670412, -475126952, 96806673, 2849916588,
    -5502399670, 9780453960, 5163320784, -3881744768, -715819008,
    -2127396864, 176160768,
)
L5_P3_CORE = (
    2556, 26826, -11567683, 233974966, -1637367768, 3360935670, 7477700913,
    -32228461430, 34977529870, -25080039056, -116505203984, -8874755584,
    28975368704, 19194212352, 12468813824, -1082130432,
)
L5_P2_CORE = (
    23202, 90978, -100800276, 2549503575, -24306318922, 92736064438,
    -17068101752, -721796620433, 1283420436692, -234713753182,
    -1300729277808, 5133789454480, 4644548941696, -650017517056,
    -1489831145472, -997241585664, -347227553792, 31406948352,
)
L5_P1_CORE = (
    46413, 179592, -187096284, 4466152164, -39943265629, 141983346692,
    -22051491630, -971304694080, 1699523699010, -484362312312,
    -1466116591440, 5048804828832, 3936877957248, -755770852864,
    -1163160506368, -758766698496, -242406653952, 20937965568,
)
L5_P0 = (
    7698240, 22725360, -28148670720, 634241959920, -5287126603680,
    17277689362320, -2119806466560, -100097290614960, 170295740442720,
    -54843096571200, -96884451388800, 336731369667840, 207092810926080,
    -60618583019520, -56969296773120, -36179450265600, -10663262945280,
    869730877440,
)
L5_PI = (
    7698240, 75796560, -27539133120, 437080734720, -2263546745280,
    2634702988560, 9929567400000, -19831186297440, 17858393541120,
    2280869253120, -8302341242880, 1735690813440, 669914234880,
)

L5_P5 = pmul(xpow(5), ppow(ONE_MINUS_8X, 3), ppow(ONE_PLUS_X, 3), L5_Q11)
L5_P4 = pscale(5, pmul(xpow(4), ppow(ONE_MINUS_8X, 2), ppow(ONE_PLUS_X, 2), L5_P4_CORE))
L5_P3 = pscale(60, pmul(xpow(3), ONE_MINUS_8X, ONE_PLUS_X, L5_P3_CORE))
L5_P2 = pscale(60, pmul(xpow(2), L5_P2_CORE))
L5_P1 = pscale(120, pmul(X, L5_P1_CORE))

# -- direct-sum pieces L5 = L2 (+) L3 ------------------------------------

L3_Q3 = pmul(xpow(3), ppow(ONE_PLUS_X, 2), ppow(ONE_MINUS_8X, 2))
L3_Q2 = pmul(xpow(2), ONE_PLUS_X, ONE_MINUS_8X, (35, -158, -112))
L3_Q1 = pscale(6, pmul(X, (62, -571, 687, 1616, 512)))
L3_Q0 = (1188, -8460, 5712, 10752, 2304)

L2_Q2_CORE = (4, 128, 816, 3455, 3386, 10331, -19058, 36333, -30148, 23970, -4608)
L2_Q1_CORE = (
    42, 1014, -584, -25649, -213659, -288597, -825226, 625582, -883396,
    -148802, 221034, -621888, 129024,
)
L2_Q0 = (
    396, 9216, -816, -165294, -1435806, -1616220, -4745172, 3588030,
    -4730706, 200916, 457740, -1540800, 294912,
)
L2_Q2 = pmul(xpow(2), ONE_PLUS_X, ONE_MINUS_8X, L2_Q2_CORE)
L2_Q1 = pscale(2, pmul(X, L2_Q1_CORE))

# -- solutions of L2, L3 and the particular solution ----------------------

S2_P1 = (137, 595, -867, 1646, 298, -768)
S2_P2 = (3, 87, 3701, 7198, -5956, 18962, -13544, 3248, -6144)
SP_NUM = (1, 3, -6, 19, 6, 27, -27)  # S_P = SP_NUM / (9 x^9)

# -- rational functions expressing S1 through H^2 -------------------------
#
# The sign in front of 750144 x^5 is minus; with plus the S1 identity
# fails at x^-5.

R1_Q = (1, -1106, 6228, 360782, 574808, -750144, -909056, -444416, 24576)
R2_Q = (
    1, 1072, -852, 345228, -3348324, -20398920, -8922816, 40454016,
    31497216, 8126464, -4653056, 393216,
)
R3_Q = (1, 904, 5544, 254312, 423416, -641856, -648704, -339968, 24576)

# (scale, numerator factors, power of x in the denominator, power of (1-2x))
R1_SPEC = (Fraction(-3), pmul(ONE_MINUS_8X, ppow(ONE_PLUS_X, 2), R1_Q), 10, 4)
R2_SPEC = (Fraction(1, 8), pmul(ONE_MINUS_8X, ONE_PLUS_X, R2_Q), 11, 3)
R3_SPEC = (Fraction(1, 8), pmul(ppow(ONE_MINUS_8X, 2), ppow(ONE_PLUS_X, 2), R3_Q), 10, 2)

# -- modular curve linking the pullbacks 27x^2/(1-2x)^3 and 27x/(1+4x)^3 --

# terms (coefficient, power of A, power of B) of the expanded curve polynomial
MODULAR_CURVE_TERMS = (
    (8, 3, 3),
    (-12, 3, 2), (-12, 2, 3),
    (6, 3, 1), (39, 2, 2), (6, 1, 3),
    (-1, 3, 0), (-30, 2, 1), (-30, 1, 2), (-1, 0, 3),
    (27, 1, 1),
)

OPERATORS = {
    "V3_ODE": ((LH_Q0, LH_Q1, LH_Q2), V3_RHS),
    "L_HEUN": ((LH_Q0, LH_Q1, LH_Q2), ()),
    "L_HYP": ((LHYP_Q0, LHYP_Q1, LHYP_Q2), ()),
    "L5": ((L5_P0, L5_P1, L5_P2, L5_P3, L5_P4, L5_P5), L5_PI),
    "L3": ((L3_Q0, L3_Q1, L3_Q2, L3_Q3), ()),
    "L2": ((L2_Q0, L2_Q1, L2_Q2), ()),
}

ALIASES = {
    "v3": "V3_ODE",
    "v3_ode": "V3_ODE",
    "lh": "L_HEUN",
    "l_heun": "L_HEUN",
    "heun": "L_HEUN",
    "lhyp": "L_HYP",
    "l_hyp": "L_HYP",
    "hyp": "L_HYP",
    "l5": "L5",
    "l3": "L3",
    "l2": "L2",
}


def canonical_data() -> dict:
    data = {name: {"Q": [list(q) for q in qs], "rhs": list(rhs)} for name, (qs, rhs) in OPERATORS.items()}
    data["S2"] = {"P1": list(S2_P1), "P2": list(S2_P2)}
    data["SP"] = list(SP_NUM)
    data["R"] = [[str(s), list(num), dx, d2] for s, num, dx, d2 in (R1_SPEC, R2_SPEC, R3_SPEC)]
    data["C"] = [list(t) for t in MODULAR_CURVE_TERMS]
    return data


def catalog_fingerprint() -> str:
    blob = json.dumps(canonical_data(), sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


CATALOG_SHA256 = "5930b91f375832a8ea9e4f78b11b44b1105d02b9be82545445306803377b3ac6"
