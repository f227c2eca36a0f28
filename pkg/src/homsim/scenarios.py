"""The six canonical two-photon configurations.

=====  ===========================  ================================
name   topology                     basis choice
=====  ===========================  ================================
A1     one input port, one BS       same basis for both photons
A2     one input port, one BS       opposite bases (superposed)
B1     two input ports, one BS      same basis, relative phase theta
B2     two input ports, one BS      opposite bases, relative phase theta
C1     one input port, MZI          same basis on both stages
C2     one input port, MZI          opposite bases on the second stage
=====  ===========================  ================================

Every configuration carries a total input intensity of 2 (two photons of
unit intensity). The coincidence ``r_cd`` is the product of the two output
intensities.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .core_optics import (
    SQRT2,
    BasisSign,
    BeamSplitter,
    Branch,
    ModePair,
    _bs_raw,
    apply_element,
    intensity,
    superposed_bs,
    superposed_matrix,
)
from .errors import ParameterMismatch, UnknownScenario

SCENARIO_NAMES = ("A1", "A2", "B1", "B2", "C1", "C2")

# which optional parameters each scenario consumes
_PARAMS = {
    "A1": {"sign"},
    "A2": {"branch"},
    "B1": {"sign", "theta"},
    "B2": {"branch", "theta"},
    "C1": {"sign"},
    "C2": {"branch", "theta"},
}

THETA_SCENARIOS = frozenset(n for n, p in _PARAMS.items() if "theta" in p)


@dataclass(frozen=True)
class ScenarioResult:
    branch_label: str
    out: ModePair
    i_first: float
    i_second: float
    r_cd: float

    @classmethod
    def from_output(cls, label: str, out: ModePair) -> "ScenarioResult":
        i1, i2 = out.intensities()
        return cls(label, out, i1, i2, i1 * i2)

    @property
    def total_intensity(self) -> float:
        return self.i_first + self.i_second


@dataclass(frozen=True)
class ScenarioSpec:
    """A named scenario plus the parameters it needs.

    ``theta`` may be left as ``None`` on a theta-dependent scenario to form a
    template for sweeps and phase averages; :func:`run` rejects such a spec.
    """

    name: str
    sign: Optional[BasisSign] = None
    branch: Optional[Branch] = None
    theta: Optional[float] = None

    def __post_init__(self):
        name = str(self.name).upper()
        if name not in _PARAMS:
            raise UnknownScenario(f"unknown scenario {self.name!r}; expected one of {', '.join(SCENARIO_NAMES)}")
        object.__setattr__(self, "name", name)
        wanted = _PARAMS[name]
        for field in ("sign", "branch", "theta"):
            if getattr(self, field) is not None and field not in wanted:
                raise ParameterMismatch(f"scenario {name} takes no {field} parameter")
        if self.sign is not None:
            object.__setattr__(self, "sign", BasisSign.coerce(self.sign))
        if self.branch is not None:
            object.__setattr__(self, "branch", Branch.coerce(self.branch))
        if self.theta is not None:
            theta = float(self.theta)
            if not math.isfinite(theta):
                raise ParameterMismatch(f"theta must be finite, got {self.theta!r}")
            object.__setattr__(self, "theta", theta)
        if "sign" in wanted and self.sign is None:
            raise ParameterMismatch(f"scenario {name} requires a sign")
        if "branch" in wanted and self.branch is None:
            raise ParameterMismatch(f"scenario {name} requires a branch")

    @property
    def uses_theta(self) -> bool:
        return self.name in THETA_SCENARIOS

    def with_theta(self, theta: float) -> "ScenarioSpec":
        if not self.uses_theta:
            raise ParameterMismatch(f"scenario {self.name} takes no theta parameter")
        return replace(self, theta=theta)

    @property
    def tag(self) -> str:
        """Short label such as ``B1+`` or ``A2sym``."""
        if self.sign is not None:
            return f"{self.name}{'+' if self.sign > 0 else '-'}"
        return f"{self.name}{'sym' if self.branch is Branch.SYMMETRIC else 'anti'}"


def _one_port() -> ModePair:
    return ModePair(SQRT2, 0.0)


def _two_port(theta: float) -> ModePair:
    return ModePair(1.0, cmath.exp(1j * theta))


def run_a1(sign) -> ScenarioResult:
    sign = BasisSign.coerce(sign)
    out = apply_element(BeamSplitter(sign), _one_port()).relabel(("c", "d"))
    return ScenarioResult.from_output(f"A1{'+' if sign > 0 else '-'}", out)


def run_a2(branch) -> ScenarioResult:
    branch = Branch.coerce(branch)
    out = superposed_bs(branch, _one_port()).relabel(("c", "d"))
    return ScenarioResult.from_output(f"A2 {branch.value}", out)


def run_b1(sign, theta: float) -> ScenarioResult:
    sign = BasisSign.coerce(sign)
    out = apply_element(BeamSplitter(sign), _two_port(theta)).relabel(("c", "d"))
    return ScenarioResult.from_output(f"B1{'+' if sign > 0 else '-'}", out)


def run_b2(branch, theta: float) -> ScenarioResult:
    branch = Branch.coerce(branch)
    out = superposed_bs(branch, _two_port(theta)).relabel(("c", "d"))
    return ScenarioResult.from_output(f"B2 {branch.value}", out)


def run_c1(sign) -> ScenarioResult:
    sign = BasisSign.coerce(sign)
    bs = BeamSplitter(sign)
    out = apply_element(bs, apply_element(bs, _one_port())).relabel(("e", "f"))
    return ScenarioResult.from_output(f"C1{'+' if sign > 0 else '-'}", out)


def run_c2(branch, theta: float) -> ScenarioResult:
    # second-stage input is taken as (1, e^{i theta}), matching the two-port premise
    branch = Branch.coerce(branch)
    out = superposed_bs(branch, _two_port(theta)).relabel(("e", "f"))
    return ScenarioResult.from_output(f"C2 {branch.value}", out)


def run(spec: ScenarioSpec) -> ScenarioResult:
    """Dispatch a validated spec to its scenario function."""
    if not isinstance(spec, ScenarioSpec):
        raise TypeError(f"expected ScenarioSpec, got {type(spec).__name__}")
    if spec.uses_theta and spec.theta is None:
        raise ParameterMismatch(f"scenario {spec.name} requires theta")
    if spec.name == "A1":
        return run_a1(spec.sign)
    if spec.name == "A2":
        return run_a2(spec.branch)
    if spec.name == "B1":
        return run_b1(spec.sign, spec.theta)
    if spec.name == "B2":
        return run_b2(spec.branch, spec.theta)
    if spec.name == "C1":
        return run_c1(spec.sign)
    if spec.name == "C2":
        return run_c2(spec.branch, spec.theta)
    raise UnknownScenario(spec.name)  # unreachable: names are validated on construction


def intensities_over_theta(template: ScenarioSpec, thetas) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized output intensities of a theta-dependent scenario.

    Performs the same arithmetic as :func:`run` on a whole array of phases;
    used by phase averaging and Monte Carlo where per-call overhead matters.
    """
    if not template.uses_theta:
        raise ParameterMismatch(f"scenario {template.name} takes no theta parameter")
    thetas = np.asarray(thetas, dtype=float)
    inputs = np.stack([np.ones_like(thetas, dtype=complex), np.exp(1j * thetas)])
    if template.name == "B1":
        out = (_bs_raw(template.sign) @ inputs) / SQRT2
    else:
        out = superposed_matrix(template.branch) @ inputs
    amp = out.real ** 2 + out.imag ** 2
    return amp[0], amp[1]


__all__ = [
    "SCENARIO_NAMES",
    "THETA_SCENARIOS",
    "ScenarioResult",
    "ScenarioSpec",
    "intensity",
    "intensities_over_theta",
    "run",
    "run_a1",
    "run_a2",
    "run_b1",
    "run_b2",
    "run_c1",
    "run_c2",
]
