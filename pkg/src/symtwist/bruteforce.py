"""Brute-force oracles: twisted modular-symbol sums under both orderings,
symbol-twisted Kloosterman partial sums, and direct coset-sum Eisenstein
series with their quadrature Fourier coefficients.

These never use the closed forms they are meant to check: everything is a
finite lattice/coset sum at Re s well inside absolute convergence, with
explicit tail control in the translate variable and compensated prefix
accumulation over the sorted norms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .characters import DirichletCharacter
from .conventions import COSET_MULTIPLICITY
from .lfunctions import l_value
from .symbols import SymbolTable


@dataclass
class SumTrace:
    """Partial sums S(X) on an increasing X grid, with run metadata."""

    x_grid: np.ndarray
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.x_grid = np.asarray(self.x_grid, dtype=np.float64)
        self.values = np.asarray(self.values, dtype=np.complex128)
        if len(self.x_grid) != len(self.values):
            raise ValueError("grid/value length mismatch")
        if np.any(np.diff(self.x_grid) <= 0):
            raise ValueError("X grid must be strictly increasing")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("non-finite trace values")

    def to_csv(self, path: Path, extra_columns: dict | None = None):
        path = Path(path)
        lines = [f"# {k} = {v}" for k, v in sorted(self.metadata.items())]
        cols = {"X": self.x_grid, "re_S": self.values.real, "im_S": self.values.imag, "abs_S": np.abs(self.values)}
        if extra_columns:
            cols.update(extra_columns)
        lines.append(",".join(cols.keys()))
        for i in range(len(self.x_grid)):
            lines.append(",".join(f"{np.asarray(v)[i]:.12g}" for v in cols.values()))
        path.write_text("\n".join(lines) + "\n")


def _kahan_prefix(values: np.ndarray) -> np.ndarray:
    """Compensated running sum of a 1-d complex array."""
    out = np.empty_like(values)
    total = 0.0 + 0.0j
    comp = 0.0 + 0.0j
    for i, v in enumerate(values):
        y = v - comp
        t = total + y
        comp = (t - total) - y
        total = t
        out[i] = total
    return out


# ---------------------------------------------------------------------------
# Twisted sums of modular symbols
# ---------------------------------------------------------------------------


def geometric_twisted_sum(
    f,
    chi: DirichletCharacter,
    z: complex,
    X_grid,
    table: SymbolTable | None = None,
    multiplicity: int = COSET_MULTIPLICITY,
) -> SumTrace:
    """S(X) = sum of chi(d) <gamma, f> over ||gamma||_z <= Im(z) X, per grid X.

    One enumeration at the largest X serves the whole grid through sorted
    compensated prefix sums.
    """
    z = complex(z)
    y = z.imag
    if y <= 0:
        raise ValueError("need Im z > 0")
    X_grid = np.sort(np.asarray(X_grid, dtype=np.float64))
    table = table or SymbolTable(f)
    N = chi.modulus
    bound = y * float(X_grid[-1])
    chi_tab = chi.values_array()
    norms_all = []
    terms_all = []
    c = N
    while (c * y) ** 2 <= bound:
        r = math.sqrt(bound - (c * y) ** 2)
        d = np.arange(math.ceil(-c * z.real - r), math.floor(-c * z.real + r) + 1, dtype=np.int64)
        d = d[np.gcd(d, c) == 1]
        if len(d):
            w = c * z.real + d
            norms = w * w + (c * y) ** 2
            row = table.symbol_row(c)
            vals = chi_tab[d % N] * row[d % c]
            norms_all.append(norms)
            terms_all.append(vals)
        c += N
    meta = {
        "ordering": "geometric",
        "curve": f.label,
        "character": chi.label(),
        "z": str(z),
        "multiplicity": multiplicity,
    }
    if not norms_all:
        return SumTrace(X_grid, np.zeros(len(X_grid), dtype=np.complex128), meta)
    norms = np.concatenate(norms_all)
    terms = np.concatenate(terms_all)
    order = np.argsort(norms, kind="stable")
    norms = norms[order]
    prefix = _kahan_prefix(terms[order])
    idx = np.searchsorted(norms, y * X_grid, side="right")
    values = np.where(idx > 0, prefix[np.maximum(idx - 1, 0)], 0.0) * multiplicity
    return SumTrace(X_grid, values, meta)


def arithmetic_twisted_sum(
    f,
    chi: DirichletCharacter,
    X_grid,
    table: SymbolTable | None = None,
    multiplicity: int = COSET_MULTIPLICITY,
) -> SumTrace:
    """S(X) = sum over double cosets with c < sqrt(X) of chi(d) <gamma, f>."""
    X_grid = np.sort(np.asarray(X_grid, dtype=np.float64))
    N = chi.modulus
    c_lim = math.sqrt(float(X_grid[-1]))
    for X in X_grid:
        root = math.sqrt(float(X))
        if abs(root / N - round(root / N)) < 1e-9:
            raise ValueError(f"X = {X} puts sqrt(X) on a c boundary; shift the grid")
    table = table or SymbolTable(f)
    cs = np.arange(N, int(math.floor(c_lim)) + 1, N, dtype=np.int64)
    meta = {
        "ordering": "arithmetic",
        "curve": f.label,
        "character": chi.label(),
        "multiplicity": multiplicity,
    }
    if len(cs) == 0:
        return SumTrace(X_grid, np.zeros(len(X_grid), dtype=np.complex128), meta)
    blocks = np.array([table.block_sum(int(c), chi) for c in cs], dtype=np.complex128)
    prefix = _kahan_prefix(blocks)
    idx = np.searchsorted(cs.astype(np.float64), np.sqrt(X_grid), side="left")
    values = np.where(idx > 0, prefix[np.maximum(idx - 1, 0)], 0.0) * multiplicity
    return SumTrace(X_grid, values, meta)


@dataclass
class KloostermanPartial:
    """Per-c-block partial sums of the symbol-twisted Kloosterman series."""

    c_values: np.ndarray
    blocks: np.ndarray
    partial_sums: np.ndarray
    n: int
    s: complex

    @property
    def value(self) -> complex:
        return complex(self.partial_sums[-1]) if len(self.partial_sums) else 0.0 + 0.0j


def kloosterman_star_partial(
    f,
    chi: DirichletCharacter,
    n: int,
    s: complex,
    c_max: float,
    table: SymbolTable | None = None,
    multiplicity: int = COSET_MULTIPLICITY,
) -> KloostermanPartial:
    """Partial sums over c <= c_max of the twisted-symbol Kloosterman series.

    n = 0 accumulates multiplicity * sum_c c^(-2s) sum_d chi(d) <gamma_(c,d)>,
    the normalization matched by the closed form of the zeroth Fourier mode
    (see closedforms.kloosterman_zero_closed).  n != 0 carries the archimedean
    prefactor pi^s/Gamma(s) |n|^(s-1) of the full Fourier-coefficient identity.
    """
    s = complex(s)
    if s.real < 1.5:
        raise ValueError(f"partial sums need Re s >= 1.5, got {s}")
    table = table or SymbolTable(f)
    N = chi.modulus
    cs = np.arange(N, int(math.floor(c_max)) + 1, N, dtype=np.int64)
    blocks = np.empty(len(cs), dtype=np.complex128)
    for i, c in enumerate(cs):
        c = int(c)
        base = table.block_sum(c, chi) if n == 0 else table.kloosterman_block(c, chi, n)
        blocks[i] = base * c ** (-2.0 * s)
    blocks *= multiplicity
    if n != 0:
        from .special import gamma_complex

        blocks *= math.pi ** s / gamma_complex(s) * abs(n) ** (s - 1.0)
    return KloostermanPartial(cs, blocks, _kahan_prefix(blocks), n, s)


# ---------------------------------------------------------------------------
# Eisenstein series by direct coset summation
# ---------------------------------------------------------------------------


def _translate_range(scale: float, sigma: float, n_blocks: int, tail: float) -> float:
    """Half-width D of the translate window for sum_|t|>D (y^2.../(t^2+scale^2))^sigma."""
    budget = tail / max(n_blocks, 1)
    D = (2.0 / ((2.0 * sigma - 1.0) * budget)) ** (1.0 / (2.0 * sigma - 1.0))
    return max(2.0 * scale, D)


def _coset_sweep(
    x: np.ndarray,
    y: float,
    s: complex,
    c_start: int,
    c_step: int,
    c_max: float,
    weight_fn,
    tail: float,
) -> np.ndarray:
    """sum over c and translates d of w(c, d) (y/((c x + d)^2 + (c y)^2))^s, per x.

    weight_fn(c, d_array) -> complex weights (zero where excluded).
    """
    sigma = s.real
    real_s = abs(s.imag) < 1e-14
    out = np.zeros(len(x), dtype=np.complex128)
    n_blocks = int((c_max - c_start) / c_step) + 1
    c = c_start
    while c <= c_max:
        D = _translate_range(c * y, sigma, n_blocks, tail)
        lo = math.floor(-c * np.max(x) - D)
        hi = math.ceil(-c * np.min(x) + D)
        d = np.arange(lo, hi + 1, dtype=np.int64)
        w = weight_fn(c, d)
        nz = w != 0
        if np.any(nz):
            d_nz = d[nz]
            w_nz = w[nz]
            base = (c * x[:, None] + d_nz[None, :]) ** 2 + (c * y) ** 2
            if real_s:
                kern = (y / base) ** sigma
                out += kern @ w_nz
            else:
                kern = np.exp(s * (math.log(y) - np.log(base)))
                out += kern @ w_nz
        c += c_step
    return out


def eisenstein_brute(
    N: int,
    chi: DirichletCharacter,
    z: complex,
    s: complex,
    mode: str = "plain",
    cusp: str = "inf",
    c_max: float = 2000.0,
    multiplicity: int = COSET_MULTIPLICITY,
    tail: float = 1e-10,
) -> complex:
    """Truncated coset sum for the character-twisted Eisenstein series.

    cusp="inf" is sum over bottom rows chi(d) Im(gamma z)^s including the
    identity coset; cusp="zero" expands at the other cusp via the slash by
    (0,-1;N,0), i.e. sum over top rows (a, b), gcd(a, N) = 1, with weight
    chi(a) and kernel (y/(N |a z + b|^2))^s.  mode="completed" multiplies by
    L(2s, chi) (both cusps; the printed cusp-zero expansion is normalized so).
    """
    s = complex(s)
    if s.real < 1.5:
        raise ValueError(f"brute Eisenstein needs Re s >= 1.5, got {s}")
    z = complex(z)
    y = z.imag
    x = np.array([z.real])
    chi_tab = chi.values_array()
    if cusp == "inf":
        def weight(c, d):
            w = chi_tab[d % N]
            w[np.gcd(d, np.int64(c)) != 1] = 0.0
            return w

        total = _coset_sweep(x, y, s, N, N, c_max, weight, tail)[0]
        total += y ** s  # identity coset
    elif cusp == "zero":
        def weight(a, b):
            if math.gcd(a, N) != 1:
                return np.zeros(len(b), dtype=np.complex128)
            w = np.full(len(b), chi_tab[a % N], dtype=np.complex128)
            w[np.gcd(b, np.int64(a)) != 1] = 0.0
            return w

        total = _coset_sweep(x, y, s, 1, 1, c_max, weight, tail)[0]
        total *= N ** (-s)
    else:
        raise ValueError(f"unknown cusp {cusp!r}")
    total *= multiplicity
    if mode == "completed":
        total *= l_value(chi, 2.0 * s)
    elif mode != "plain":
        raise ValueError(f"unknown mode {mode!r}")
    return complex(total)


def estar_brute(
    f,
    chi: DirichletCharacter,
    z: complex,
    s: complex,
    c_max: float = 2000.0,
    table: SymbolTable | None = None,
    multiplicity: int = COSET_MULTIPLICITY,
    tail: float = 1e-10,
) -> complex:
    """Symbol-twisted Eisenstein series E*(z, s, chi) by direct coset summation."""
    s = complex(s)
    if s.real < 1.6:
        raise ValueError(f"symbol-twisted brute sum needs Re s >= 1.6, got {s}")
    z = complex(z)
    table = table or SymbolTable(f)
    N = chi.modulus
    chi_tab = chi.values_array()

    def weight(c, d):
        row = table.symbol_row(c)
        w = chi_tab[d % N] * row[d % c]
        w[np.gcd(d, np.int64(c)) != 1] = 0.0
        return w

    total = _coset_sweep(np.array([z.real]), z.imag, s, N, N, c_max, weight, tail)[0]
    return complex(total * multiplicity)


def fourier_modes_brute(evaluate_on_grid, n_list, nodes: int = 256) -> dict:
    """Fourier coefficients from a 256-node trapezoid in x (spectrally accurate).

    evaluate_on_grid(x_array) -> values of the periodic function at x_j = j/nodes.
    """
    x = np.arange(nodes) / nodes
    vals = evaluate_on_grid(x)
    hat = np.fft.fft(vals) / nodes
    return {n: complex(hat[n % nodes]) for n in n_list}


def eisenstein_fourier_brute(
    N: int,
    chi: DirichletCharacter,
    y: float,
    s: complex,
    n_list,
    mode: str = "completed",
    cusp: str = "inf",
    c_max: float = 4000.0,
    multiplicity: int = COSET_MULTIPLICITY,
    nodes: int = 256,
    tail: float = 1e-10,
) -> dict:
    """Quadrature Fourier coefficients of the brute-force Eisenstein series."""
    s = complex(s)
    chi_tab = chi.values_array()

    def on_grid(x):
        if cusp == "inf":
            def weight(c, d):
                w = chi_tab[d % N]
                w[np.gcd(d, np.int64(c)) != 1] = 0.0
                return w

            vals = _coset_sweep(x, y, s, N, N, c_max, weight, tail)
            vals += y ** s
        else:
            def weight(a, b):
                if math.gcd(a, N) != 1:
                    return np.zeros(len(b), dtype=np.complex128)
                w = np.full(len(b), chi_tab[a % N], dtype=np.complex128)
                w[np.gcd(b, np.int64(a)) != 1] = 0.0
                return w

            vals = _coset_sweep(x, y, s, 1, 1, c_max, weight, tail) * N ** (-s)
        vals *= multiplicity
        if mode == "completed":
            vals = vals * l_value(chi, 2.0 * s)
        return vals

    return fourier_modes_brute(on_grid, n_list, nodes)


def estar_fourier_brute(
    f,
    chi: DirichletCharacter,
    y: float,
    s: complex,
    n_list,
    c_max: float = 4000.0,
    table: SymbolTable | None = None,
    multiplicity: int = COSET_MULTIPLICITY,
    nodes: int = 256,
    tail: float = 1e-10,
) -> dict:
    """Quadrature Fourier coefficients of brute-force E*(z, s, chi) at height y."""
    s = complex(s)
    table = table or SymbolTable(f)
    N = chi.modulus
    chi_tab = chi.values_array()

    def on_grid(x):
        def weight(c, d):
            row = table.symbol_row(c)
            w = chi_tab[d % N] * row[d % c]
            w[np.gcd(d, np.int64(c)) != 1] = 0.0
            return w

        return _coset_sweep(x, y, s, N, N, c_max, weight, tail) * multiplicity

    return fourier_modes_brute(on_grid, n_list, nodes)


def d_function_brute(f, chi, z, s, c_max=2000.0, table=None, tail=1e-10) -> complex:
    """D(z, s, chi) = E*(z, s, chi) + A(z) E(z, s, chi), both by brute force."""
    table = table or SymbolTable(f)
    estar = estar_brute(f, chi, z, s, c_max, table, tail=tail)
    eis = eisenstein_brute(chi.modulus, chi, z, s, "plain", "inf", c_max, tail=tail)
    return estar + f.period_A(z) * eis
