"""Two-mode Fock-space oracle built from second quantization.

The beam splitter acts on creation operators as::

    a_dag -> (c_dag + s*i*d_dag) / sqrt(2)
    b_dag -> (s*i*c_dag + d_dag) / sqrt(2)

Each truncated basis state (a_dag^n1 b_dag^n2 / sqrt(n1! n2!)) |0> is expanded
as a polynomial in (c_dag, d_dag) and read back into occupation numbers, which
yields the full unitary on the truncated space. Brute force is fine: the
photon cap is at most 4.

Basis order is lexicographic in (n1 + n2, n1), e.g. for ``n_max=2``::

    (0,0) (0,1) (1,0) (0,2) (1,1) (2,0)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

import numpy as np

from .core_optics import SQRT2, BasisSign
from .errors import TruncationOverflow

MAX_PHOTONS = 4
NORM_TOL = 1e-10

Occupation = tuple[int, int]


def fock_basis(n_max: int) -> list[Occupation]:
    _check_cap(n_max)
    return sorted(((n1, n - n1) for n in range(n_max + 1) for n1 in range(n + 1)),
                  key=lambda k: (k[0] + k[1], k[0]))


def _check_cap(n_max: int) -> None:
    if not isinstance(n_max, (int, np.integer)) or not 0 <= n_max <= MAX_PHOTONS:
        raise ValueError(f"n_max must be an integer in [0, {MAX_PHOTONS}], got {n_max!r}")


@dataclass(frozen=True)
class FockState:
    """Complex amplitudes over occupation pairs with total photon number <= ``n_max``."""

    amps: Mapping[Occupation, complex] = field(default_factory=dict)
    n_max: int = 2

    def __post_init__(self):
        _check_cap(self.n_max)
        clean = {}
        for key, amp in self.amps.items():
            n1, n2 = (int(k) for k in key)
            if n1 < 0 or n2 < 0 or n1 + n2 > self.n_max:
                raise TruncationOverflow(f"occupation {key!r} outside the n_max={self.n_max} basis")
            clean[(n1, n2)] = complex(amp)
        object.__setattr__(self, "amps", clean)

    @classmethod
    def basis(cls, n1: int, n2: int, n_max: int = 2) -> "FockState":
        return cls({(n1, n2): 1.0}, n_max)

    @classmethod
    def from_vector(cls, vec, n_max: int) -> "FockState":
        return cls(dict(zip(fock_basis(n_max), (complex(x) for x in vec))), n_max)

    def amplitude(self, n1: int, n2: int) -> complex:
        return self.amps.get((n1, n2), 0j)

    def as_vector(self) -> np.ndarray:
        return np.array([self.amplitude(*k) for k in fock_basis(self.n_max)], dtype=complex)

    def norm_squared(self) -> float:
        return math.fsum(abs(a) ** 2 for a in self.amps.values())

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm_squared() - 1.0) <= tol

    def mean_occupations(self) -> tuple[float, float]:
        n1 = math.fsum(k[0] * abs(a) ** 2 for k, a in self.amps.items())
        n2 = math.fsum(k[1] * abs(a) ** 2 for k, a in self.amps.items())
        return n1, n2

    def mean_photon_number(self) -> float:
        return sum(self.mean_occupations())

    def table(self, tol: float = 0.0) -> list[tuple[int, int, complex, float]]:
        """Rows (n1, n2, amplitude, probability) in basis order."""
        rows = []
        for k in fock_basis(self.n_max):
            amp = self.amplitude(*k)
            if abs(amp) > tol:
                rows.append((k[0], k[1], amp, abs(amp) ** 2))
        return rows


def _poly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for (i, j), x in p.items():
        for (k, l), y in q.items():
            out[(i + k, j + l)] = out.get((i + k, j + l), 0) + x * y
    return out


@lru_cache(maxsize=None)
def bs_fock_unitary(n_max: int, sign) -> np.ndarray:
    """Matrix of the beam splitter on the truncated two-mode Fock basis."""
    s = int(BasisSign.coerce(sign))
    basis = fock_basis(n_max)
    index = {k: i for i, k in enumerate(basis)}
    # images of a_dag and b_dag as polynomials {(power of c_dag, power of d_dag): coeff}
    a_img = {(1, 0): 1 / SQRT2, (0, 1): s * 1j / SQRT2}
    b_img = {(1, 0): s * 1j / SQRT2, (0, 1): 1 / SQRT2}
    u = np.zeros((len(basis), len(basis)), dtype=complex)
    for col, (n1, n2) in enumerate(basis):
        poly = {(0, 0): 1.0 + 0j}
        for _ in range(n1):
            poly = _poly_mul(poly, a_img)
        for _ in range(n2):
            poly = _poly_mul(poly, b_img)
        norm_in = math.sqrt(math.factorial(n1) * math.factorial(n2))
        for (p, q), coeff in poly.items():
            if p + q > n_max:
                raise TruncationOverflow(f"beam splitter image reaches {p + q} photons > n_max={n_max}")
            # c_dag^p d_dag^q |0> = sqrt(p! q!) |p, q>
            u[index[(p, q)], col] += coeff * math.sqrt(math.factorial(p) * math.factorial(q)) / norm_in
    u.setflags(write=False)
    return u


def fock_apply_bs(state: FockState, sign) -> FockState:
    """Send a state through a 50/50 beam splitter of the given basis sign."""
    if not state.is_normalized():
        raise ValueError(f"state is not normalized: norm^2 = {state.norm_squared()!r}")
    u = bs_fock_unitary(state.n_max, BasisSign.coerce(sign))
    return FockState.from_vector(u @ state.as_vector(), state.n_max)


def coincidence_probability(state: FockState) -> float:
    """Probability that both output ports register at least one photon."""
    p = math.fsum(abs(a) ** 2 for (n1, n2), a in state.amps.items() if n1 >= 1 and n2 >= 1)
    return min(max(p, 0.0), 1.0)


def port_probabilities(state: FockState) -> tuple[float, float]:
    """Fraction of the mean photon number found in each port."""
    n1, n2 = state.mean_occupations()
    total = n1 + n2
    if total == 0:
        raise ValueError("vacuum state has no port probabilities")
    return n1 / total, n2 / total


def mzi_single_photon(sign) -> tuple[float, float]:
    """Port probabilities of one photon after two same-basis beam splitters."""
    state = FockState.basis(1, 0, n_max=1)
    for _ in range(2):
        state = fock_apply_bs(state, sign)
    return port_probabilities(state)
