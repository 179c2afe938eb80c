"""Dirichlet L-functions for prime-modulus characters: values, derivatives,
completed form and root number, certified zero localization, residues of 1/L.

L(s, chi) is assembled from Hurwitz zeta values, L(s, chi) =
q^-s sum_a chi(a) zeta(s, a/q); for nontrivial chi the Hurwitz pole parts
cancel exactly, which the deflated zeta makes explicit.  Nontrivial zeros are
located as sign changes of the rotated completed function on the critical
line and the count is certified by the argument principle on a rectangle.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .characters import DirichletCharacter, gauss_sum
from .special import (
    DEFAULT_POLICY,
    PoleError,
    PrecisionPolicy,
    _hurwitz_zeta_array,
    gamma_complex,
)


class CertificationError(ArithmeticError):
    """Zero count failed argument-principle certification."""

    def __init__(self, message: str, interval=None):
        super().__init__(message)
        self.interval = interval


def l_value(
    chi: DirichletCharacter,
    s: complex,
    policy: PrecisionPolicy = DEFAULT_POLICY,
    allow_reflection: bool = True,
) -> complex:
    """L(s, chi) via Hurwitz zeta; validated for |Im s| <= 120.

    For nontrivial even chi with Re s < 1/2 the functional equation is applied
    first: the q^(-s) factor otherwise amplifies Euler-Maclaurin roundoff at
    very negative s, and reflection makes the trivial zeros exact through the
    entire reciprocal gamma.  allow_reflection=False forces the direct sum
    (used to keep functional-equation residual checks non-circular).
    """
    q = chi.modulus
    s = complex(s)
    if chi.is_trivial:
        if abs(s - 1.0) < 1e-12:
            raise PoleError("L(s, trivial chi) pole at s = 1", index=1)
        zeta = _hurwitz_zeta_array(s, np.array([1.0]), False, False)[0]
        return complex(zeta) * (1.0 - q ** (-s))
    if allow_reflection and chi.is_even and s.real < 0.5:
        # Lambda(s, chi) = eps Lambda(1-s, conj chi) unpacked for L
        from .special import reciprocal_gamma

        eps = gauss_sum(chi).value / math.sqrt(q)
        lam_ref = (q / math.pi) ** ((1.0 - s) / 2.0) * gamma_complex((1.0 - s) / 2.0) * l_value(
            chi.conjugate(), 1.0 - s, policy, allow_reflection=False
        )
        return eps * lam_ref * (q / math.pi) ** (-s / 2.0) * reciprocal_gamma(s / 2.0)
    a = np.arange(1, q) / q
    zetas = _hurwitz_zeta_array(s, a, False, True)
    weights = np.array([chi(n) for n in range(1, q)])
    return complex(q ** (-s) * np.dot(weights, zetas))


def l_derivative_direct(chi: DirichletCharacter, s: complex) -> complex:
    """L'(s, chi) by term-wise differentiated Euler-Maclaurin (oracle path)."""
    q = chi.modulus
    s = complex(s)
    if chi.is_trivial:
        raise ValueError("direct derivative implemented for nontrivial chi only")
    a = np.arange(1, q) / q
    vals, dvals = _hurwitz_zeta_array(s, a, True, True)
    weights = np.array([chi(n) for n in range(1, q)])
    lv = np.dot(weights, vals)
    dv = np.dot(weights, dvals)
    return complex(q ** (-s) * (dv - math.log(q) * lv))


def cauchy_derivative(func, s0: complex, radius: float = 0.05, nodes: int = 32) -> complex:
    """f'(s0) from a trapezoid Cauchy integral on a circle (spectral accuracy)."""
    s0 = complex(s0)
    total = 0.0 + 0.0j
    for j in range(nodes):
        th = 2.0 * math.pi * j / nodes
        w = cmath.exp(1j * th)
        total += func(s0 + radius * w) / w
    return total / (nodes * radius)


def l_derivative(chi: DirichletCharacter, s: complex, order: int = 1, radius: float = 0.05, nodes: int = 32) -> complex:
    """L'(s, chi) via a Cauchy circle of the given radius around s."""
    if order != 1:
        raise ValueError("only first derivatives are provided")
    s = complex(s)
    if chi.is_trivial and abs(s - 1.0) < radius + 1e-9:
        raise ValueError("derivative circle would cross the pole at s = 1")
    return cauchy_derivative(lambda w: l_value(chi, w), s, radius, nodes)


def completed_l(chi: DirichletCharacter, s: complex) -> complex:
    """Lambda(s, chi) = (q/pi)^(s/2) Gamma(s/2) L(s, chi) for even chi."""
    q = chi.modulus
    s = complex(s)
    return (q / math.pi) ** (s / 2.0) * gamma_complex(s / 2.0) * l_value(chi, s)


def root_number(chi: DirichletCharacter) -> complex:
    """epsilon(chi) = tau(chi)/sqrt(q) for even nontrivial primitive chi."""
    if chi.is_trivial:
        raise ValueError("root number defined here for nontrivial chi")
    if not chi.is_even:
        raise ValueError("odd characters are out of scope")
    return gauss_sum(chi).value / math.sqrt(chi.modulus)


def functional_equation_residual(chi: DirichletCharacter, s: complex) -> complex:
    """Lambda(s, chi) - epsilon(chi) Lambda(1-s, conj chi); ~0 for even chi.

    Both sides are evaluated by the direct Hurwitz sum so the residual is a
    genuine check, not a restatement of the reflection used inside l_value.
    """
    s = complex(s)
    eps = root_number(chi)
    q = chi.modulus

    def lam_direct(ch, w):
        return (q / math.pi) ** (w / 2.0) * gamma_complex(w / 2.0) * l_value(ch, w, allow_reflection=False)

    return lam_direct(chi, s) - eps * lam_direct(chi.conjugate(), 1.0 - s)


def z_function(chi: DirichletCharacter, t: float) -> float:
    """Real-valued rotation of Lambda(1/2 + it, chi); zeros <-> L-zeros on the line."""
    eps = root_number(chi)
    w = cmath.exp(-0.5j * cmath.phase(eps))
    return (w * completed_l(chi, 0.5 + 1j * t)).real


# ---------------------------------------------------------------------------
# Zero bookkeeping
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LZero:
    rho: complex
    l_prime: complex
    height_index: int
    kind: str  # "nontrivial" | "trivial"

    def is_simple(self, threshold: float = 1e-6) -> bool:
        return abs(self.l_prime) > threshold


@dataclass
class ZeroCache:
    character: dict
    T: float
    zeros: list = field(default_factory=list)
    argument_principle_count: int = 0

    def nontrivial(self) -> list:
        return [z for z in self.zeros if z.kind == "nontrivial"]

    def trivial(self) -> list:
        return [z for z in self.zeros if z.kind == "trivial"]

    def to_json(self) -> dict:
        return {
            "character": self.character,
            "T": self.T,
            "zeros": [
                {
                    "re": z.rho.real,
                    "im": z.rho.imag,
                    "lprime_re": z.l_prime.real,
                    "lprime_im": z.l_prime.imag,
                    "kind": z.kind,
                    "index": z.height_index,
                }
                for z in self.zeros
            ],
            "argument_principle_count": self.argument_principle_count,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ZeroCache":
        zeros = [
            LZero(
                complex(z["re"], z["im"]),
                complex(z["lprime_re"], z["lprime_im"]),
                int(z["index"]),
                z["kind"],
            )
            for z in data["zeros"]
        ]
        return cls(dict(data["character"]), float(data["T"]), zeros, int(data["argument_principle_count"]))

    def save(self, path: Path):
        Path(path).write_text(json.dumps(self.to_json(), indent=1))

    @classmethod
    def load(cls, path: Path) -> "ZeroCache":
        return cls.from_json(json.loads(Path(path).read_text()))

    def revalidate(self, chi: DirichletCharacter, tol: float = 1e-8):
        """Re-evaluate |L(rho)| for every stored zero; raise on drift."""
        for z in self.zeros:
            r = abs(l_value(chi, z.rho))
            if r >= tol:
                raise CertificationError(f"stored zero {z.rho} fails |L| < {tol} (got {r:.2e})")
            if abs(z.l_prime) <= 1e-6:
                raise CertificationError(f"stored zero {z.rho} has |L'| <= 1e-6; simplicity assumption broken")


def residue_inv_l(chi: DirichletCharacter, zero: LZero, scaling: str = "unit") -> complex:
    """Residue of 1/L at a simple zero: 1/L'(rho) (unit) or 1/(2 L'(rho)) (half).

    The half scaling is the residue in a variable w entering as L(2w, .).
    """
    if not zero.is_simple():
        raise ValueError(f"zero at {zero.rho} not accepted as simple (|L'| = {abs(zero.l_prime):.2e})")
    if scaling == "unit":
        return 1.0 / zero.l_prime
    if scaling == "half":
        return 0.5 / zero.l_prime
    raise ValueError(f"unknown scaling {scaling!r}")


# ---------------------------------------------------------------------------
# Zero localization
# ---------------------------------------------------------------------------


def _bisect_zero(chi: DirichletCharacter, lo: float, hi: float, flo: float, tol: float = 1e-11) -> float:
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = z_function(chi, mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _winding_count(chi: DirichletCharacter, re_lo: float, re_hi: float, im_hi: float, max_points: int = 400000) -> int:
    """Zeros of Lambda inside [re_lo, re_hi] x [-im_hi, im_hi] by boundary winding."""
    corners = [
        complex(re_lo, -im_hi),
        complex(re_hi, -im_hi),
        complex(re_hi, im_hi),
        complex(re_lo, im_hi),
        complex(re_lo, -im_hi),
    ]
    # Seed densely enough that the smooth Gamma-driven rotation cannot alias
    # by a full turn between samples; |d arg Lambda| per unit length is of
    # order log(q T).  The adaptive splitting below then only has to resolve
    # the sharp swings near boundary-adjacent zeros.
    velocity = 2.0 + 0.7 * math.log(chi.modulus * (im_hi + 3.0))
    total = 0.0
    n_eval = 0
    for p, qpt in zip(corners[:-1], corners[1:]):
        n_seed = max(8, int(math.ceil(abs(qpt - p) * velocity / 0.35)))
        seg = [j / n_seed for j in range(n_seed + 1)]
        vals = {t: completed_l(chi, p + t * (qpt - p)) for t in seg}
        i = 0
        while i < len(seg) - 1:
            t0, t1 = seg[i], seg[i + 1]
            v0, v1 = vals[t0], vals[t1]
            if v0 == 0 or v1 == 0:
                raise CertificationError("Lambda vanished on the certification boundary", (p, qpt))
            d = cmath.phase(v1 / v0)
            if abs(d) > 1.2:  # keep phase steps well under pi
                tm = 0.5 * (t0 + t1)
                vals[tm] = completed_l(chi, p + tm * (qpt - p))
                seg.insert(i + 1, tm)
                n_eval += 1
                if n_eval > max_points:
                    raise CertificationError("argument-principle walk did not refine", (p, qpt))
                continue
            total += d
            i += 1
    count = total / (2.0 * math.pi)
    rounded = round(count)
    if abs(count - rounded) > 0.1:
        raise CertificationError(f"non-integer winding {count:.4f}")
    return int(rounded)


def find_zeros(
    chi: DirichletCharacter,
    T: float,
    scan_step: float = 0.04,
    trivial_zero_floor: int = -10,
    retry: bool = True,
) -> ZeroCache:
    """All nontrivial zeros with |Im rho| <= T, certified, plus trivial zeros.

    Zeros are searched on the critical line only; the argument principle on
    [-1/2, 3/2] x [-T', T'] certifies none were missed in the strip.  On a
    count mismatch the scan is retried once at step/4, then fails hard.
    """
    if chi.is_trivial or not chi.is_even:
        raise ValueError("zero finding supports nontrivial even characters")
    if T > 120.0:
        raise ValueError("validated strip ends at T = 120")
    margin = 0.15
    ordinates: list[float] = []
    if T > 0:
        grid = np.arange(-T - margin, T + margin + scan_step, scan_step)
        vals = np.array([z_function(chi, float(t)) for t in grid])
        sign_change = np.nonzero(np.signbit(vals[:-1]) != np.signbit(vals[1:]))[0]
        for i in sign_change:
            ordinates.append(_bisect_zero(chi, float(grid[i]), float(grid[i + 1]), float(vals[i])))
    # pick a certification height T' clear of located ordinates
    t_cert = None
    for delta in (0.08, 0.05, 0.11, 0.14, 0.03):
        cand = T + delta
        if all(abs(abs(t) - cand) > 0.02 for t in ordinates):
            t_cert = cand
            break
    if t_cert is None:
        t_cert = T + 0.07
    inside = sorted([t for t in ordinates if abs(t) <= t_cert])
    count = _winding_count(chi, -0.5, 1.5, t_cert) if T > 0 else 0
    if count != len(inside):
        if retry:
            return find_zeros(chi, T, scan_step / 4.0, trivial_zero_floor, retry=False)
        gaps = [(a, b) for a, b in zip(inside[:-1], inside[1:])]
        worst = min(gaps, key=lambda ab: ab[1] - ab[0]) if gaps else (-t_cert, t_cert)
        raise CertificationError(
            f"argument principle counts {count} zeros but {len(inside)} were located", worst
        )

    zeros: list[LZero] = []
    kept = sorted((t for t in inside if abs(t) <= T), key=lambda t: (abs(t), t))
    for idx, t in enumerate(kept):
        rho = complex(0.5, t)
        lp = l_derivative(chi, rho)
        zeros.append(LZero(rho, lp, idx, "nontrivial"))
    k = 0
    idx = 0
    while -2 * k >= trivial_zero_floor:
        rho = complex(-2 * k, 0.0)
        lp = l_derivative(chi, rho)
        zeros.append(LZero(rho, lp, idx, "trivial"))
        k += 1
        idx += 1
    cache = ZeroCache(chi.to_spec(), T, zeros, count)
    cache.revalidate(chi)
    return cache
