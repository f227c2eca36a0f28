"""Two-mode linear optics on complex field amplitudes.

Amplitudes are in units of the single-photon field E0 and intensities in
units of I0 = |E0|^2, so neither constant is ever stored.

A lossless 50/50 beam splitter comes in two phase bases, written here as a
sign s in {+1, -1}::

    U_s = [[1, s*i], [s*i, 1]] / sqrt(2)

The equal-weight sum and difference of the two bases, each scaled by
1/sqrt(2), are the identity and ``i * swap`` respectively.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

SQRT2 = math.sqrt(2.0)


class BasisSign(enum.IntEnum):
    """Phase basis of a beam splitter; +1 <-> +pi/2, -1 <-> -pi/2."""

    PLUS = 1
    MINUS = -1

    @property
    def phi_bs(self) -> float:
        return self.value * math.pi / 2

    @classmethod
    def from_phi(cls, phi: float) -> "BasisSign":
        if math.isclose(phi, math.pi / 2):
            return cls.PLUS
        if math.isclose(phi, -math.pi / 2):
            return cls.MINUS
        raise ValueError(f"phase basis must be +pi/2 or -pi/2, got {phi!r}")

    @classmethod
    def coerce(cls, value) -> "BasisSign":
        """Accept a BasisSign, +1/-1, or the strings '+'/'-'."""
        if isinstance(value, cls):
            return value
        if isinstance(value, str):
            table = {"+": cls.PLUS, "+1": cls.PLUS, "-": cls.MINUS, "-1": cls.MINUS}
            if value.strip() in table:
                return table[value.strip()]
            raise ValueError(f"invalid basis sign {value!r}")
        if value in (1, -1):
            return cls(int(value))
        raise ValueError(f"invalid basis sign {value!r}")


class Branch(str, enum.Enum):
    """Outcome of superposing the two phase bases."""

    SYMMETRIC = "symmetric"
    ANTISYMMETRIC = "antisymmetric"

    @classmethod
    def coerce(cls, value) -> "Branch":
        if isinstance(value, cls):
            return value
        aliases = {"sym": cls.SYMMETRIC, "symmetric": cls.SYMMETRIC,
                   "anti": cls.ANTISYMMETRIC, "antisymmetric": cls.ANTISYMMETRIC}
        try:
            return aliases[str(value).strip().lower()]
        except KeyError:
            raise ValueError(f"invalid branch {value!r}") from None


def _check_finite(z: complex, what: str) -> complex:
    if not cmath.isfinite(z):
        raise ValueError(f"{what} is not finite: {z!r}")
    return z


@dataclass(frozen=True)
class ModePair:
    """Complex field amplitudes of two spatial modes.

    ``labels`` is metadata only (``("a", "b")`` at the input, ``("c", "d")``
    after one beam splitter, ``("e", "f")`` after an interferometer).
    """

    a: complex
    b: complex
    labels: tuple[str, str] = ("a", "b")

    def __post_init__(self):
        object.__setattr__(self, "a", _check_finite(complex(self.a), "first amplitude"))
        object.__setattr__(self, "b", _check_finite(complex(self.b), "second amplitude"))

    @classmethod
    def from_vector(cls, vec, labels=("a", "b")) -> "ModePair":
        return cls(complex(vec[0]), complex(vec[1]), tuple(labels))

    def as_vector(self) -> np.ndarray:
        return np.array([self.a, self.b], dtype=complex)

    def relabel(self, labels) -> "ModePair":
        return ModePair(self.a, self.b, tuple(labels))

    def intensities(self) -> tuple[float, float]:
        return intensity(self.a), intensity(self.b)

    def total_intensity(self) -> float:
        return intensity(self.a) + intensity(self.b)


@dataclass(frozen=True)
class BeamSplitter:
    sign: BasisSign = BasisSign.PLUS

    def __post_init__(self):
        object.__setattr__(self, "sign", BasisSign.coerce(self.sign))

    def matrix(self) -> np.ndarray:
        return bs_matrix(self.sign)


@dataclass(frozen=True)
class PhaseShift:
    """Multiply one mode's amplitude by exp(i*theta); ``mode`` is 1 or 2."""

    mode: int
    theta: float

    def __post_init__(self):
        if self.mode not in (1, 2):
            raise ValueError(f"phase shifter mode must be 1 or 2, got {self.mode!r}")
        if not math.isfinite(self.theta):
            raise ValueError(f"phase shifter theta is not finite: {self.theta!r}")

    def matrix(self) -> np.ndarray:
        m = np.eye(2, dtype=complex)
        m[self.mode - 1, self.mode - 1] = cmath.exp(1j * self.theta)
        return m


OpticalElement = Union[BeamSplitter, PhaseShift]


def _bs_raw(sign: BasisSign) -> np.ndarray:
    s = int(BasisSign.coerce(sign))
    return np.array([[1, s * 1j], [s * 1j, 1]], dtype=complex)


def bs_matrix(sign) -> np.ndarray:
    """Return the 2x2 transfer matrix of a 50/50 beam splitter in the given basis."""
    return _bs_raw(sign) / SQRT2


def superposed_matrix(branch) -> np.ndarray:
    """(U+ + U-)/sqrt(2) or (U+ - U-)/sqrt(2).

    The two 1/sqrt(2) factors combine to 1/2 before touching the integer-valued
    sums, which keeps the result exactly the identity or ``[[0, i], [i, 0]]``.
    """
    branch = Branch.coerce(branch)
    plus, minus = _bs_raw(BasisSign.PLUS), _bs_raw(BasisSign.MINUS)
    total = plus + minus if branch is Branch.SYMMETRIC else plus - minus
    return total / 2


def intensity(x: complex) -> float:
    """|x|^2 in units of I0."""
    x = complex(x)
    return x.real * x.real + x.imag * x.imag


def apply_element(el: OpticalElement, v: ModePair) -> ModePair:
    """Propagate a mode pair through one element."""
    if isinstance(el, BeamSplitter):
        # scale after the integer-valued product so sqrt(2) inputs stay exact
        out = (_bs_raw(el.sign) @ v.as_vector()) / SQRT2
        return ModePair.from_vector(out, v.labels)
    if isinstance(el, PhaseShift):
        phase = cmath.exp(1j * el.theta)
        if el.mode == 1:
            return ModePair(v.a * phase, v.b, v.labels)
        return ModePair(v.a, v.b * phase, v.labels)
    raise TypeError(f"not an optical element: {el!r}")


def superposed_bs(branch, v: ModePair) -> ModePair:
    """Apply the symmetric or antisymmetric basis-superposed beam splitter."""
    return ModePair.from_vector(superposed_matrix(branch) @ v.as_vector(), v.labels)


def is_unitary(m: np.ndarray, atol: float = 1e-12) -> bool:
    m = np.asarray(m)
    return bool(np.allclose(m @ m.conj().T, np.eye(m.shape[0]), rtol=0.0, atol=atol))
