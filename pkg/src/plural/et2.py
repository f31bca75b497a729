"""Energy-time-squared (ET2) trade-off calculus.

The cost of a computation is modeled as theta = E * t**2, a quantity that
stays constant while energy is traded for execution time (via voltage
scaling, transistor sizing, and similar knobs).  This module provides the
transforms along and between ET2 curves:

* stretch_time:   slow down by a factor, energy drops by its square.
* shrink_work:    run a fraction of the work, theta shrinks by the cube.
* iso_time_energy / iso_energy_time: re-spend a work reduction while holding
  time (steeper energy saving) or holding energy (shorter time).
* parallelize:    split the work over m cores, rederiving the ensemble
  energy and power of the scaling model.
* constrain:      pick the point on a theta-curve fixed by one of energy,
  time, or power.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "Et2State",
    "Et2ParallelResult",
    "make_state",
    "stretch_time",
    "shrink_work",
    "iso_time_energy",
    "iso_energy_time",
    "parallelize",
    "constrain",
]

# Stored theta must agree with energy * time**2 to this relative tolerance.
_THETA_RTOL = 1e-12


@dataclass(frozen=True)
class Et2State:
    """A point (energy, time) with its cost theta = energy * time**2."""

    energy: float
    time: float
    theta: float

    def __post_init__(self) -> None:
        if not self.energy > 0:
            raise DomainError(f"energy must be positive, got {self.energy!r}")
        if not self.time > 0:
            raise DomainError(f"time must be positive, got {self.time!r}")
        if not self.theta > 0:
            raise DomainError(f"theta must be positive, got {self.theta!r}")
        reference = self.energy * self.time**2
        if not math.isfinite(reference):
            raise DomainError("energy * time**2 overflows a float")
        if abs(self.theta - reference) > _THETA_RTOL * reference:
            raise DomainError(
                f"theta {self.theta!r} is inconsistent with "
                f"energy * time**2 = {reference!r}"
            )

    @property
    def power(self) -> float:
        """Average power implied by this point, energy / time."""
        return self.energy / self.time


@dataclass(frozen=True)
class Et2ParallelResult:
    """Per-core and ensemble view of a parallelized computation.

    All m cores finish together, so the ensemble time equals the per-core
    time and the ensemble energy is m times the per-core energy.
    """

    per_core: Et2State
    ensemble_energy: float
    ensemble_power: float
    ensemble_time: float


def make_state(energy: float, time: float) -> Et2State:
    """Build a state from an (energy, time) point; theta is derived."""
    if not energy > 0:
        raise DomainError(f"energy must be positive, got {energy!r}")
    if not time > 0:
        raise DomainError(f"time must be positive, got {time!r}")
    return Et2State(energy=energy, time=time, theta=energy * time**2)


def stretch_time(s: Et2State, factor: float) -> Et2State:
    """Slow the computation down by ``factor``, staying on the same theta curve.

    Time grows by the factor, energy falls by its square, and power falls by
    its cube.  Factors below 1 (speeding up) are mathematically valid points
    on the same curve and are accepted with a warning.
    """
    if not factor > 0:
        raise DomainError(f"stretch factor must be positive, got {factor!r}")
    if factor < 1:
        warnings.warn(
            f"stretch factor {factor} < 1 speeds the computation up; the "
            "trade-off curve is normally ridden toward longer time",
            stacklevel=2,
        )
    return Et2State(energy=s.energy / factor**2, time=s.time * factor, theta=s.theta)


def shrink_work(s: Et2State, fraction: float) -> Et2State:
    """Run only ``fraction`` of the work with unchanged operating parameters.

    Time and energy shrink proportionally (so power is unchanged) and the
    computation lands on a new curve with theta scaled by fraction**3.
    """
    if not 0 < fraction <= 1:
        raise DomainError(f"work fraction must lie in (0, 1], got {fraction!r}")
    return Et2State(
        energy=fraction * s.energy,
        time=fraction * s.time,
        theta=fraction**3 * s.theta,
    )


def iso_time_energy(s: Et2State, fraction: float) -> Et2State:
    """Shrink the work but spend the original time; energy falls by fraction**3."""
    if not 0 < fraction <= 1:
        raise DomainError(f"work fraction must lie in (0, 1], got {fraction!r}")
    return Et2State(
        energy=fraction**3 * s.energy,
        time=s.time,
        theta=fraction**3 * s.theta,
    )


def iso_energy_time(s: Et2State, fraction: float) -> Et2State:
    """Shrink the work but spend the original energy; time falls by fraction**1.5."""
    if not 0 < fraction <= 1:
        raise DomainError(f"work fraction must lie in (0, 1], got {fraction!r}")
    return Et2State(
        energy=s.energy,
        time=fraction**1.5 * s.time,
        theta=fraction**3 * s.theta,
    )


def parallelize(s: Et2State, m: int) -> Et2ParallelResult:
    """Split the computation evenly over ``m`` cores ticking together.

    Each core runs a 1/m fraction of the work at a frequency reduced by
    sqrt(m), so per core the time is t/sqrt(m), the energy E/m**2, and theta
    theta/m**3.  Summed over the ensemble the energy is E/m and the power
    (E/t)/sqrt(m), matching the scaling model's ensemble row.
    """
    if not isinstance(m, int):
        raise DomainError(f"core count m must be an integer, got {m!r}")
    if m < 1:
        raise DomainError(f"core count m must be >= 1, got {m}")
    root_m = math.sqrt(m)
    per_core = Et2State(
        energy=s.energy / m**2,
        time=s.time / root_m,
        theta=s.theta / m**3,
    )
    return Et2ParallelResult(
        per_core=per_core,
        ensemble_energy=s.energy / m,
        ensemble_power=(s.energy / s.time) / root_m,
        ensemble_time=per_core.time,
    )


def constrain(
    s: Et2State,
    *,
    energy: float | None = None,
    time: float | None = None,
    power: float | None = None,
) -> Et2State:
    """Pick the point on this state's theta curve fixed by one constraint.

    Exactly one of ``energy``, ``time``, ``power`` must be given:

    * fixed energy E0:  time = sqrt(theta / E0)
    * fixed time T0:    energy = theta / T0**2
    * fixed power P0:   time = (theta / P0)**(1/3), energy = P0 * time
    """
    given = [v for v in (energy, time, power) if v is not None]
    if len(given) != 1:
        raise DomainError("exactly one of energy, time, power must be given")
    value = given[0]
    if not value > 0:
        raise DomainError(f"constraint value must be positive, got {value!r}")
    theta = s.theta
    if energy is not None:
        return Et2State(energy=energy, time=math.sqrt(theta / energy), theta=theta)
    if time is not None:
        return Et2State(energy=theta / time**2, time=time, theta=theta)
    new_time = (theta / power) ** (1.0 / 3.0)
    return Et2State(energy=power * new_time, time=new_time, theta=theta)
