"""Weight-2 newform data from elliptic-curve point counting.

A CuspForm carries integer Fourier coefficients a_n built from counting
points of the attached curve over F_p plus the Hecke recursion, the period
antiderivative A(z) = sum a_n/n e^(2 pi i n z) (so dA/dz = 2 pi i f), the
entire L-function through an incomplete-gamma smoothed series, and twisted
values including the central value via a finite modular-symbol sum.
"""

from __future__ import annotations

import cmath
import json
import math
from importlib import resources
from pathlib import Path

import numpy as np

from .characters import DirichletCharacter, gauss_sum
from .lfunctions import cauchy_derivative
from .special import incomplete_gamma_upper, reciprocal_gamma

TWO_PI = 2.0 * math.pi


def curve_registry() -> dict:
    """Shipped label -> {level, weierstrass} table."""
    data = resources.files("symtwist.data").joinpath("curves.json").read_text()
    return json.loads(data)


def _curve_invariants(coeffs):
    a1, a2, a3, a4, a6 = coeffs
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -b2 ** 3 + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return c4, c6, disc


_ARANGE_CACHE = np.arange(0, dtype=np.int64)


def _arange_buffer(n: int) -> np.ndarray:
    global _ARANGE_CACHE
    if len(_ARANGE_CACHE) < n:
        _ARANGE_CACHE = np.arange(max(n, 2 * len(_ARANGE_CACHE)), dtype=np.int64)
    return _ARANGE_CACHE[:n]


def _count_points_small(coeffs, p: int) -> int:
    a1, a2, a3, a4, a6 = (c % p for c in coeffs)
    n = 1  # point at infinity
    for x in range(p):
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - (x ** 3 + a2 * x * x + a4 * x + a6)) % p == 0:
                n += 1
    return n


def ap_point_count(coeffs, p: int) -> int:
    """a_p = p + 1 - #E(F_p) by direct counting; reduction rule at bad p.

    Good primes use the quadratic-character table over the short form (p >= 5)
    or a tiny brute count (p = 2, 3).  At a prime of multiplicative reduction,
    a_p = +1 (split) or -1 (nonsplit); additive reduction gives 0.  Bad primes
    are detected from the discriminant.
    """
    c4, c6, disc = _curve_invariants(coeffs)
    if disc % p != 0:
        if p < 5:
            ap = p + 1 - _count_points_small(coeffs, p)
        else:
            A = (-27 * c4) % p
            B = (-54 * c6) % p
            x = _arange_buffer(p)
            sq = (x * x) % p
            qr = np.zeros(p, dtype=bool)
            qr[sq] = True  # squares including 0
            sq *= x
            sq += A * x + B
            sq %= p
            # sum of the quadratic character over f(x) = x^3 + Ax + B
            zeros = int(np.count_nonzero(sq == 0))
            squares = int(np.count_nonzero(qr[sq]))
            ap = p + zeros - 2 * squares
        if ap * ap > 4 * p:
            raise ArithmeticError(f"Hasse bound violated at p={p}: a_p={ap}")
        return ap
    if c4 % p != 0:
        # multiplicative reduction: split iff -c6 is a square mod p
        if p < 5:
            raise ValueError(f"bad reduction at tiny prime {p} not supported")
        return 1 if pow((-c6) % p, (p - 1) // 2, p) == 1 else -1
    return 0  # additive


def _smallest_prime_factors(n_max: int) -> np.ndarray:
    spf = np.zeros(n_max + 1, dtype=np.int64)
    for i in range(2, n_max + 1):
        if spf[i] == 0:
            spf[i : n_max + 1 : i] = np.where(spf[i : n_max + 1 : i] == 0, i, spf[i : n_max + 1 : i])
    return spf


class CuspForm:
    """Weight-2 newform of prime level N attached to an elliptic curve."""

    def __init__(self, label: str, level: int, weierstrass, cache_dir: Path | None = None):
        self.label = label
        self.level = int(level)
        self.weierstrass = tuple(int(c) for c in weierstrass)
        self.cache_dir = Path(cache_dir) if cache_dir else None
        self._a = [0, 1]  # a_0 unused, a_1 = 1
        self._a_np = None
        self._sign_eps = None
        self._central_cache: dict = {}
        c4, c6, disc = _curve_invariants(self.weierstrass)
        if abs(disc) % self.level != 0:
            raise ValueError(f"{label}: discriminant {disc} not divisible by level {level}")

    @classmethod
    def from_label(cls, label: str, cache_dir: Path | None = None) -> "CuspForm":
        reg = curve_registry()
        if label not in reg:
            raise KeyError(f"unknown curve label {label!r}; registry has {sorted(reg)}")
        entry = reg[label]
        return cls(label, entry["level"], entry["weierstrass"], cache_dir)

    # -- coefficients ---------------------------------------------------------

    def _coeff_cache_path(self) -> Path | None:
        if self.cache_dir is None:
            return None
        return self.cache_dir / f"coeffs_{self.label}.txt"

    def _load_coeff_cache(self, n_max: int) -> bool:
        path = self._coeff_cache_path()
        if path is None or not path.exists():
            return False
        lines = path.read_text().split()
        header = lines[0]
        if not header.startswith("n_max="):
            return False
        stored = int(header.split("=")[1])
        if stored < n_max:
            return False
        self._a = [0] + [int(v) for v in lines[1 : stored + 1]]
        self._a_np = None
        return True

    def _save_coeff_cache(self):
        path = self._coeff_cache_path()
        if path is None:
            return
        path.parent.mkdir(parents=True, exist_ok=True)
        n_max = len(self._a) - 1
        path.write_text(f"n_max={n_max}\n" + "\n".join(str(v) for v in self._a[1:]) + "\n")

    def ensure_an(self, n_max: int):
        """Extend the integer coefficient cache through a_n for n <= n_max."""
        if len(self._a) - 1 >= n_max:
            return
        if self._load_coeff_cache(n_max):
            return
        spf = _smallest_prime_factors(n_max)
        a = self._a
        start = len(a)
        a.extend([0] * (n_max + 1 - start))
        ap_cache: dict[int, int] = {}
        for n in range(2, n_max + 1):
            if n < start:
                continue
            p = int(spf[n])
            if n == p:
                ap = ap_point_count(self.weierstrass, p)
                ap_cache[p] = ap
                a[n] = ap
                continue
            m = n // p
            if m % p != 0:
                a[n] = a[p] * a[m]  # gcd(p^1, m) = 1
            else:
                # n = p^k * r with k >= 2
                pk = p * p
                r = n // pk
                while r % p == 0:
                    pk *= p
                    r //= p
                if a[pk] == 0 and pk >= start:
                    ap = a[p]
                    if self.level % p == 0:
                        a[pk] = a[pk // p] * ap
                    else:
                        a[pk] = ap * a[pk // p] - p * a[pk // (p * p)]
                a[n] = a[pk] * a[r] if r > 1 else a[pk]
        self._a_np = None
        if n_max >= 2000:
            self._save_coeff_cache()

    def an(self, n: int) -> int:
        self.ensure_an(n)
        return self._a[n]

    def a_array(self, n_max: int) -> np.ndarray:
        """a_1..a_n_max as float64 (index 0 is a_1)."""
        self.ensure_an(n_max)
        if self._a_np is None or len(self._a_np) < n_max:
            self._a_np = np.array(self._a[1:], dtype=np.float64)
        return self._a_np[:n_max]

    # -- q-expansion objects ----------------------------------------------------

    def _n_terms(self, im_z: float, tail: float = 1e-14) -> int:
        if im_z < 0.99e-4:
            raise ValueError(f"Im z = {im_z:.2e} below supported height 1e-4 "
                             f"(series length would exceed the cache policy)")
        m = (-math.log(tail) + 4.0) / (TWO_PI * im_z)
        m = (-math.log(tail) + 4.0 + 1.7 * math.log(m + 2.0)) / (TWO_PI * im_z)
        return max(8, int(math.ceil(m)))

    def f_value(self, z: complex) -> complex:
        """f(z) = sum a_n e^(2 pi i n z)."""
        m = self._n_terms(z.imag)
        a = self.a_array(m)
        n = np.arange(1, m + 1)
        return complex(np.sum(a * np.exp(2j * math.pi * n * z)))

    def period_A(self, z: complex) -> complex:
        """A(z) = sum a_n/n e^(2 pi i n z), the antiderivative with A(i inf) = 0.

        dA/dz = 2 pi i f(z); A(gamma z) - A(z) is the modular symbol of gamma.
        """
        z = complex(z)
        m = self._n_terms(z.imag)
        a = self.a_array(m)
        n = np.arange(1, m + 1)
        return complex(np.sum((a / n) * np.exp(2j * math.pi * n * z)))

    # -- entire L-function ------------------------------------------------------

    @property
    def sign_eps(self) -> int:
        """Functional-equation sign of Lambda_f, determined numerically once."""
        if self._sign_eps is None:
            direct = self._lf_direct_series(3.0)
            best = min((+1, -1), key=lambda e: abs(self._lf_value_eps(3.0, e) - direct))
            other = -best
            # demand a clear margin before freezing
            if not abs(self._lf_value_eps(3.0, other) - direct) > 10 * abs(
                self._lf_value_eps(3.0, best) - direct
            ):
                raise ArithmeticError(f"{self.label}: functional-equation sign ambiguous")
            self._sign_eps = best
        return self._sign_eps

    def _lf_direct_series(self, s: complex, n_max: int = 40000) -> complex:
        a = self.a_array(n_max)
        n = np.arange(1, n_max + 1, dtype=np.float64)
        return complex(np.sum(a * np.exp(-s * np.log(n))))

    def _lambda_eps(self, s: complex, eps: int) -> complex:
        rtN = math.sqrt(self.level)
        n_max = int(math.ceil(rtN * 7.5))
        a = self.a_array(n_max)
        total = 0.0 + 0.0j
        comp = 0.0 + 0.0j
        s = complex(s)
        for n in range(1, n_max + 1):
            x = TWO_PI * n / rtN
            base = rtN / (TWO_PI * n)
            term = a[n - 1] * (
                base ** s * incomplete_gamma_upper(s, x)
                + eps * base ** (2.0 - s) * incomplete_gamma_upper(2.0 - s, x)
            )
            y = term - comp
            t = total + y
            comp = (t - total) - y
            total = t
        return total

    def _lf_value_eps(self, s: complex, eps: int) -> complex:
        lam = self._lambda_eps(s, eps)
        return lam * (TWO_PI) ** s * self.level ** (-s / 2.0) * reciprocal_gamma(s)

    def lambda_f(self, s: complex) -> complex:
        """Completed Lambda_f(s) = N^(s/2) (2 pi)^-s Gamma(s) L_f(s); entire."""
        return self._lambda_eps(s, self.sign_eps)

    def lf_value(self, s: complex, want_derivative: bool = False):
        """Entire L_f(s) (and optionally L_f'(s)); |Im s| <= 80 supported."""
        s = complex(s)
        if abs(s.imag) > 80.0:
            raise ValueError("lf_value validated for |Im s| <= 80")
        val = self._lf_value_eps(s, self.sign_eps)
        if not want_derivative:
            return val
        dval = cauchy_derivative(lambda w: self._lf_value_eps(w, self.sign_eps), s, radius=0.25, nodes=24)
        return val, dval

    # -- twisted values -----------------------------------------------------------

    def lf_twisted(self, chi: DirichletCharacter, s: complex, mode: str = "series", n_max: int = 200000) -> complex:
        """L_f(s, chi): convergent-half-plane series, or the central value s=1.

        mode="series" needs Re s >= 1.75 and is a plain truncated sum (no
        analytic continuation of conductor-equal twists is attempted).
        mode="central" evaluates L_f(1, chi) for even chi mod N through the
        finite modular-symbol sum at denominator N.
        """
        if mode == "series":
            s = complex(s)
            if s.real < 1.75 - 1e-12:
                raise ValueError(f"twisted series restricted to Re s >= 1.75, got {s}")
            a = self.a_array(n_max)
            n = np.arange(1, n_max + 1, dtype=np.float64)
            chi_tab = chi.values_array()
            weights = chi_tab[np.arange(1, n_max + 1) % chi.modulus]
            return complex(np.sum(weights * a * np.exp(-s * np.log(n))))
        if mode == "central":
            if abs(complex(s) - 1.0) > 1e-12:
                raise ValueError("central mode is the value at s = 1")
            return self._lf_central(chi)
        raise ValueError(f"unknown mode {mode!r}")

    def _lf_central(self, chi: DirichletCharacter) -> complex:
        """L_f(1, chi) = tau(conj chi)^-1 sum_u conj(chi)(u) A(u/N) for even chi mod N."""
        key = chi.label()
        if key in self._central_cache:
            return self._central_cache[key]
        N = self.level
        if chi.modulus != N:
            raise ValueError("central symbol formula needs conductor equal to the level")
        if not chi.is_even or chi.is_trivial:
            raise ValueError("central mode implemented for nontrivial even characters")
        from .symbols import complete_double_coset, modular_symbol

        chibar = chi.conjugate()
        total = 0.0 + 0.0j
        for u in range(1, N):
            gam = complete_double_coset(N, N, pow(u, -1, N))  # top-left entry u
            total += chibar(u) * modular_symbol(self, gam)
        val = total / gauss_sum(chibar).value
        self._central_cache[key] = val
        return val

    def twisted_series_tail_bound(self, s: complex, n_max: int) -> float:
        """Deterministic tail bound sum_(n>M) d(n) sqrt(n) n^(-Re s) via the integral test."""
        sigma = complex(s).real
        if sigma <= 1.5:
            return math.inf
        x = sigma - 1.5
        return (math.log(n_max) / x + 1.0 / (x * x)) * 4.0 * n_max ** (-x)
