"""Complex special functions: Gamma, upper incomplete Gamma, K-Bessel with
complex order, Hurwitz zeta with s-derivative.

Everything is double precision with compensated summation where it matters.
gamma_complex is Lanczos (g=7, n=9) with reflection; bessel_k integrates the
cosh representation K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt by the
trapezoid rule with step refinement; hurwitz_zeta is Euler-Maclaurin.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


class PoleError(ArithmeticError):
    """Evaluation requested at a pole; .index carries the non-positive integer."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class ConvergenceError(ArithmeticError):
    """An iteration failed to meet its target; .branch tags the algorithm."""

    def __init__(self, message: str, branch: str = ""):
        super().__init__(message)
        self.branch = branch


@dataclass(frozen=True)
class PrecisionPolicy:
    target_abs_error: float = 1e-10
    target_rel_error: float = 1e-9
    max_terms: int = 1 << 16

    def __post_init__(self):
        if self.target_abs_error <= 0 or self.target_rel_error <= 0:
            raise ValueError("target errors must be positive")
        if self.max_terms < 64:
            raise ValueError("max_terms must be at least 64")


DEFAULT_POLICY = PrecisionPolicy()

# Lanczos g=7, n=9 coefficients.
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _near_nonpositive_integer(s: complex, tol: float = 1e-12) -> int | None:
    if abs(s.imag) > tol:
        return None
    r = round(s.real)
    if r <= 0 and abs(s.real - r) <= tol:
        return int(r)
    return None


def gamma_complex(s: complex, policy: PrecisionPolicy = DEFAULT_POLICY) -> complex:
    """Gamma(s) by Lanczos approximation, reflection for Re(s) < 1/2."""
    s = complex(s)
    k = _near_nonpositive_integer(s)
    if k is not None:
        raise PoleError(f"Gamma pole at s = {k}", index=k)
    if s.real < 0.5:
        # Gamma(s) Gamma(1-s) = pi / sin(pi s)
        return math.pi / (cmath.sin(math.pi * s) * gamma_complex(1.0 - s, policy))
    z = s - 1.0
    x = _LANCZOS[0]
    for i, c in enumerate(_LANCZOS[1:], start=1):
        x += c / (z + i)
    t = z + 7.5
    return SQRT_TWO_PI * t ** (z + 0.5) * cmath.exp(-t) * x


def reciprocal_gamma(s: complex) -> complex:
    """1/Gamma(s); entire, returns exactly 0 at non-positive integers."""
    if _near_nonpositive_integer(complex(s)) is not None:
        return 0.0 + 0.0j
    return 1.0 / gamma_complex(s)


def log_gamma_real(x: float) -> float:
    return math.lgamma(x)


# ---------------------------------------------------------------------------
# Upper incomplete gamma
# ---------------------------------------------------------------------------


def _gamma_upper_cf(s: complex, x: float, policy: PrecisionPolicy) -> complex:
    """Continued fraction (modified Lentz), good for x >= |s| + 1."""
    tiny = 1e-290
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b if b != 0 else 1.0 / tiny
    h = d
    for i in range(1, policy.max_terms):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return cmath.exp(-x + s * cmath.log(x)) * h
    raise ConvergenceError("incomplete gamma continued fraction stalled", branch="cf")


def _gamma_upper_via_series(s: complex, x: float, policy: PrecisionPolicy) -> complex:
    """Series branch for x < |s| + 1.

    Start at a shifted order a0 = s + K with Re(a0) comfortably above x, where
    Gamma(a0, x) = Gamma(a0)(1 - P) has P tiny and cancellation-free; then walk
    down with Gamma(a-1, x) = (Gamma(a, x) - x^(a-1) e^(-x)) / (a - 1).
    """
    K = int(math.ceil(max(0.0, abs(s) + 8.0 - s.real)))
    a0 = s + K
    # gamma_lower(a0, x) = x^a0 e^-x * sum_k x^k / (a0 (a0+1) ... (a0+k))
    term = 1.0 / a0
    total = term
    for k in range(1, policy.max_terms):
        term *= x / (a0 + k)
        total += term
        if abs(term) < 1e-18 * abs(total):
            break
    else:
        raise ConvergenceError("lower-gamma series stalled", branch="series")
    gam_a0 = gamma_complex(a0)
    upper = gam_a0 - cmath.exp(a0 * cmath.log(x) - x) * total
    # Downward recursion to order s.
    a = a0
    pw = cmath.exp((a0 - 1.0) * cmath.log(x) - x)  # x^(a-1) e^-x, updated per step
    for _ in range(K):
        am1 = a - 1.0
        if abs(am1) < 1e-9:
            upper = _gamma_upper_cf(am1, x, policy) if x >= 0.9 else _e1_series(x)
        else:
            upper = (upper - pw) / am1
        a = am1
        pw /= x
    return upper


def _e1_series(x: float) -> complex:
    """Gamma(0, x) = E1(x) by the alternating series, for small real x."""
    total = -0.5772156649015329 - math.log(x)
    term = 1.0
    for k in range(1, 400):
        term *= -x / k
        total -= term / k
        if abs(term) < 1e-18:
            break
    return complex(total)


def incomplete_gamma_upper(s: complex, x: float, policy: PrecisionPolicy = DEFAULT_POLICY) -> complex:
    """Gamma(s, x) = int_x^inf t^(s-1) e^(-t) dt for x > 0, complex s."""
    if x <= 0:
        raise ValueError(f"need x > 0, got {x}")
    s = complex(s)
    if x >= abs(s) + 1.0:
        return _gamma_upper_cf(s, x, policy)
    return _gamma_upper_via_series(s, x, policy)


# ---------------------------------------------------------------------------
# K-Bessel, complex order
# ---------------------------------------------------------------------------


def _bessel_k_trapezoid(nu: complex, x: float, h: float) -> complex:
    # Integrand e^(-x cosh t) cosh(nu t) is even; integrate [0, tmax].
    ra, ia = abs(nu.real), abs(nu.imag)
    # tmax: e^(-x(cosh t - 1)) e^(ra t) below 1e-19 relative to the t=0 scale.
    tmax = 1.0
    for _ in range(40):
        need = (44.0 + ra * tmax) / x + 1.0
        tmax_new = math.acosh(need) if need > 1.0 else 1.0
        if abs(tmax_new - tmax) < 1e-3:
            tmax = tmax_new
            break
        tmax = tmax_new
    n = int(tmax / h) + 1
    t = np.arange(n + 1) * h
    vals = np.exp(-x * np.cosh(t)) * np.cosh(nu * t)
    vals[0] *= 0.5
    return complex(np.sum(vals) * h)


def bessel_k(nu: complex, x: float, policy: PrecisionPolicy = DEFAULT_POLICY) -> complex:
    """K_nu(x) for x > 0 via the cosh integral representation.

    Validated for |Im nu| <= ~120 and x >= ~0.25 (the e^(-x cosh t) damping
    is what keeps the oscillatory cosh(nu t) factor integrable in practice).
    """
    if x <= 0:
        raise ValueError(f"need x > 0, got {x}")
    nu = complex(nu)
    h = min(0.2, math.pi / (8.0 * (1.0 + abs(nu.imag))))
    prev = _bessel_k_trapezoid(nu, x, h)
    for _ in range(12):
        h *= 0.5
        cur = _bessel_k_trapezoid(nu, x, h)
        if abs(cur - prev) <= policy.target_abs_error + policy.target_rel_error * abs(cur):
            return cur
        prev = cur
    raise ConvergenceError(f"K-Bessel quadrature did not settle (nu={nu}, x={x})", branch="trapezoid")


# ---------------------------------------------------------------------------
# Hurwitz zeta (Euler-Maclaurin), with optional s-derivative
# ---------------------------------------------------------------------------

# B_2, B_4, ..., B_24
_BERNOULLI = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
)

_EM_ORDER = 12  # correction terms actually used


def _expm1_over(u: complex) -> complex:
    """(e^u - 1)/u, stable near u = 0."""
    if abs(u) < 1e-4:
        return 1.0 + u / 2.0 + u * u / 6.0 + u * u * u / 24.0
    return (cmath.exp(u) - 1.0) / u


def _em_cutoff(s: complex) -> int:
    return max(30, int(math.ceil(1.3 * abs(s))))


def hurwitz_zeta(
    s: complex,
    a: float,
    want_derivative: bool = False,
    deflated: bool = False,
    policy: PrecisionPolicy = DEFAULT_POLICY,
):
    """zeta(s, a) = sum_(k>=0) (k+a)^(-s) continued by Euler-Maclaurin.

    deflated=True returns zeta(s, a) - 1/(s-1), which is entire in s and is
    what character combinations with sum(chi) = 0 actually consume.
    With want_derivative=True returns (value, d/ds value), both deflated if
    requested.
    """
    if not 0.0 < a <= 1.0:
        raise ValueError(f"need a in (0, 1], got {a}")
    s = complex(s)
    if not deflated and abs(s - 1.0) < 1e-12:
        raise PoleError("Hurwitz zeta pole at s = 1", index=1)
    if abs(s.imag) > 120.0 + 1e-9:
        raise ConvergenceError("outside validated strip |Im s| <= 120", branch="euler-maclaurin")
    vals = _hurwitz_zeta_array(s, np.array([a]), want_derivative, deflated)
    if want_derivative:
        return complex(vals[0][0]), complex(vals[1][0])
    return complex(vals[0])


def _hurwitz_zeta_array(s: complex, a: np.ndarray, want_derivative: bool, deflated: bool):
    """Vectorized over the parameter a; core of hurwitz_zeta and the L-values."""
    M = _em_cutoff(s)
    k = np.arange(M)[:, None]
    base = k + a[None, :]          # (M, n)
    logb = np.log(base)
    pows = np.exp(-s * logb)
    head = pows.sum(axis=0)
    Ma = M + a                     # (n,)
    logMa = np.log(Ma)
    MaPs = np.exp(-s * logMa)      # (M+a)^-s

    if deflated:
        # (M+a)^(1-s)/(s-1) - 1/(s-1) = -log(M+a) * (e^u - 1)/u, u = (1-s)log(M+a)
        u = (1.0 - s) * logMa
        tail_pole = -logMa * np.array([_expm1_over(complex(x)) for x in u])
    else:
        tail_pole = np.exp((1.0 - s) * logMa) / (s - 1.0)

    # Euler-Maclaurin corrections: sum_j B_2j/(2j)! * (s)_(2j-1) * (M+a)^(-s-2j+1)
    corr = np.zeros_like(head)
    dcorr = np.zeros_like(head) if want_derivative else None
    rising = 1.0 + 0.0j            # (s)_(2j-1) built incrementally
    drising = 0.0 + 0.0j           # its s-derivative
    fact = 1.0
    for j in range(1, _EM_ORDER + 1):
        # extend (s)_(2j-3) -> (s)_(2j-1): multiply by (s+2j-3)(s+2j-2)
        for i in (2 * j - 3, 2 * j - 2):
            if i >= 0:
                drising = drising * (s + i) + rising
                rising = rising * (s + i)
        fact *= (2 * j) * (2 * j - 1) if j > 1 else 2
        coef = _BERNOULLI[j - 1] / fact
        decay = np.exp((-s - 2 * j + 1) * logMa)
        corr += coef * rising * decay
        if want_derivative:
            dcorr += coef * (drising - rising * logMa) * decay

    value = head + tail_pole + 0.5 * MaPs + corr
    if not want_derivative:
        return value

    dhead = -(logb * pows).sum(axis=0)
    if deflated:
        # d/ds [ ((M+a)^(1-s) - 1)/(s-1) ]
        u = (1.0 - s) * logMa
        eu = np.exp(u)
        dtail = np.empty_like(value)
        for i in range(len(a)):
            um = complex(u[i])
            L = logMa[i]
            if abs(s - 1.0) > 1e-4:
                dtail[i] = (-L * eu[i] * (s - 1.0) - (eu[i] - 1.0)) / (s - 1.0) ** 2
            else:
                # series of ((e^u - 1)/(s-1))' with u = (1-s)L around s=1
                w = s - 1.0
                dtail[i] = L * L * (0.5 - w * L / 3.0 + w * w * L * L / 8.0)
        tail_deriv = dtail
    else:
        tail_deriv = (-logMa * np.exp((1.0 - s) * logMa) * (s - 1.0) - np.exp((1.0 - s) * logMa)) / (s - 1.0) ** 2
    dvalue = dhead + tail_deriv - 0.5 * logMa * MaPs + dcorr
    return value, dvalue
