"""Dirichlet characters of prime modulus, Gauss sums, twisted divisor sums.

Characters are stored as exact root-of-unity exponents (integers mod q-1)
attached to a fixed primitive root, so multiplicativity holds exactly in
integer arithmetic; complex values are materialized on demand.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

TWO_PI = 2.0 * math.pi


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@lru_cache(maxsize=None)
def least_primitive_root(q: int) -> int:
    """Smallest primitive root mod the odd prime q."""
    if not is_prime(q) or q == 2:
        raise ValueError(f"need an odd prime, got {q}")
    phi = q - 1
    prime_factors = []
    m = phi
    f = 2
    while f * f <= m:
        if m % f == 0:
            prime_factors.append(f)
            while m % f == 0:
                m //= f
        f += 1
    if m > 1:
        prime_factors.append(m)
    for g in range(2, q):
        if all(pow(g, phi // p, q) != 1 for p in prime_factors):
            return g
    raise RuntimeError(f"no primitive root found mod {q}")  # unreachable for prime q


@dataclass(frozen=True)
class DirichletCharacter:
    """Primitive (or trivial) character mod an odd prime q.

    chi(g) = exp(2*pi*i*k/(q-1)) for the generator g, with k the image index.
    The log table gives discrete logs base g; the value at a unit n is the
    exact exponent (k * dlog(n)) mod (q-1).
    """

    modulus: int
    generator: int
    generator_image_index: int
    _dlog: tuple = field(repr=False, compare=False, default=())

    def __post_init__(self):
        q, g, k = self.modulus, self.generator, self.generator_image_index
        if not is_prime(q):
            raise ValueError(f"modulus {q} is not prime")
        if q == 2:
            raise ValueError("modulus 2 carries no nontrivial character")
        if not 0 <= k <= q - 2:
            raise ValueError(f"image index {k} outside [0, {q - 2}]")
        dlog = [-1] * q
        x = 1
        for j in range(q - 1):
            if dlog[x] != -1:
                raise ValueError(f"{g} is not a primitive root mod {q}")
            dlog[x] = j
            x = (x * g) % q
        object.__setattr__(self, "_dlog", tuple(dlog))

    # -- exact arithmetic ----------------------------------------------------

    def value_index(self, n: int) -> int | None:
        """Exponent j with chi(n) = exp(2*pi*i*j/(q-1)), or None off the units."""
        r = n % self.modulus
        if r == 0:
            return None
        return (self.generator_image_index * self._dlog[r]) % (self.modulus - 1)

    def __call__(self, n: int) -> complex:
        j = self.value_index(n)
        if j is None:
            return 0.0 + 0.0j
        return cmath.exp(2j * math.pi * j / (self.modulus - 1))

    # -- structure -----------------------------------------------------------

    @property
    def order(self) -> int:
        return (self.modulus - 1) // math.gcd(self.generator_image_index, self.modulus - 1)

    @property
    def is_trivial(self) -> bool:
        return self.generator_image_index == 0

    @property
    def is_even(self) -> bool:
        return self.value_index(self.modulus - 1) == 0

    @property
    def is_real(self) -> bool:
        return (2 * self.generator_image_index) % (self.modulus - 1) == 0

    def conjugate(self) -> "DirichletCharacter":
        q = self.modulus
        return DirichletCharacter(q, self.generator, (-self.generator_image_index) % (q - 1))

    def values_array(self) -> np.ndarray:
        """chi(n) for n = 0..q-1 as a complex array (0 at the non-unit)."""
        q = self.modulus
        out = np.zeros(q, dtype=np.complex128)
        for n in range(1, q):
            out[n] = self(n)
        return out

    # -- serialization (CLI --character format) -------------------------------

    def to_spec(self) -> dict:
        return {
            "modulus": self.modulus,
            "generator": self.generator,
            "generator_image_index": self.generator_image_index,
        }

    @classmethod
    def from_spec(cls, spec: dict) -> "DirichletCharacter":
        return cls(int(spec["modulus"]), int(spec["generator"]), int(spec["generator_image_index"]))

    def label(self) -> str:
        return f"q{self.modulus}g{self.generator}k{self.generator_image_index}"


def make_character(q: int, generator_image_index: int, generator: int | None = None) -> DirichletCharacter:
    """Character mod prime q sending the (least) primitive root to e^(2*pi*i*k/(q-1))."""
    if generator is None:
        generator = least_primitive_root(q)
    return DirichletCharacter(q, generator, generator_image_index)


@dataclass(frozen=True)
class GaussSumValue:
    value: complex
    character: DirichletCharacter


def gauss_sum(chi: DirichletCharacter) -> GaussSumValue:
    """tau(chi) = sum_a chi(a) e^(2*pi*i*a/q) by direct summation."""
    q = chi.modulus
    total = 0.0 + 0.0j
    for a in range(1, q):
        total += chi(a) * cmath.exp(2j * math.pi * a / q)
    return GaussSumValue(total, chi)


def divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    f = 1
    while f * f <= n:
        if n % f == 0:
            small.append(f)
            if f != n // f:
                large.append(n // f)
        f += 1
    return small + large[::-1]


def twisted_divisor_sum(s: complex, n: int, chi: DirichletCharacter) -> complex:
    """sigma_s(n, chi) = sum over positive divisors d of |n| of chi(d) d^s.

    Negative n is handled through |n|; n = 0 is rejected (no divisor set).
    """
    if n == 0:
        raise ValueError("twisted divisor sum undefined at n = 0")
    total = 0.0 + 0.0j
    for d in divisors(n):
        v = chi(d)
        if v != 0:
            total += v * complex(d) ** s
    return total
