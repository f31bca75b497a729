"""Closed-form many-core scaling model for a fixed-area chip.

A chip of area A runs a workload of W instructions either on one processor
occupying the whole area or on m processors of area A/m each.  Core frequency
follows Pollack's rule, f = area**alpha with alpha = 1/2 by default, and all
constants are taken as unity so every derived quantity is exact rather than
asymptotic.  The derived figures of merit (speedup, energydown, powerdown,
ES, ES2) compare the m-core ensemble against the single-processor baseline.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, ValidationError

__all__ = [
    "ChipSpec",
    "EnsembleMetrics",
    "single_metrics",
    "ensemble_metrics",
    "sweep",
]


@dataclass(frozen=True)
class ChipSpec:
    """Fixed chip-level parameters: total area and the workload it executes.

    Units are abstract (dimensionless model): ``area`` in area units, ``work``
    in instructions, frequencies in instructions per time unit.
    """

    area: float
    work: float
    cpi: float = 1.0
    pollack_exponent: float = 0.5
    static_power_enabled: bool = False

    def __post_init__(self) -> None:
        if not self.area > 0:
            raise ValidationError(f"area must be positive, got {self.area!r}")
        if not self.work > 0:
            raise ValidationError(f"work must be positive, got {self.work!r}")
        if not self.cpi > 0:
            raise ValidationError(f"cpi must be positive, got {self.cpi!r}")
        if not 0.0 < self.pollack_exponent < 1.0:
            raise ValidationError(
                f"pollack_exponent must lie in (0, 1), got {self.pollack_exponent!r}"
            )


@dataclass(frozen=True)
class EnsembleMetrics:
    """One row of the scaling model: an m-core ensemble next to the 1-core baseline.

    ``power * compute_time == energy`` holds by construction, and at m=1 every
    ensemble field equals its single-processor counterpart.
    """

    m: int
    core_area: float
    core_freq: float
    single_freq: float
    core_perf: float
    ensemble_perf: float
    compute_time: float
    single_time: float
    power: float
    single_power: float
    energy: float
    single_energy: float
    speedup: float
    energydown: float
    powerdown: float
    es: float
    es2: float
    perf_per_power: float


def _check_core_count(m: int) -> None:
    if not isinstance(m, int):
        raise DomainError(f"core count m must be an integer, got {m!r}")
    if m < 1:
        raise DomainError(f"core count m must be >= 1, got {m}")


def ensemble_metrics(spec: ChipSpec, m: int) -> EnsembleMetrics:
    """Evaluate the scaling model for ``m`` cores sharing ``spec.area``.

    Per core: area a = A/m, frequency a**alpha, work W/m.  The ensemble keeps
    the full area powered, so power stays proportional to A times the (lower)
    core frequency while compute time shrinks with both the split work and
    the frequency reduction.
    """
    _check_core_count(m)
    area = spec.area
    alpha = spec.pollack_exponent

    core_area = area / m
    core_freq = core_area**alpha
    single_freq = area**alpha
    core_perf = core_freq / spec.cpi
    ensemble_perf = m * core_perf

    compute_time = (spec.work / m) * spec.cpi / core_freq
    single_time = spec.work * spec.cpi / single_freq

    power = area * core_freq
    single_power = area * single_freq
    if spec.static_power_enabled:
        # Static power is proportional to the total powered area, A, for the
        # single processor and for the whole ensemble alike.
        power += area
        single_power += area
    energy = power * compute_time
    single_energy = single_power * single_time

    speedup = single_time / compute_time
    energydown = single_energy / energy

    return EnsembleMetrics(
        m=m,
        core_area=core_area,
        core_freq=core_freq,
        single_freq=single_freq,
        core_perf=core_perf,
        ensemble_perf=ensemble_perf,
        compute_time=compute_time,
        single_time=single_time,
        power=power,
        single_power=single_power,
        energy=energy,
        single_energy=single_energy,
        speedup=speedup,
        energydown=energydown,
        powerdown=single_power / power,
        es=energydown * speedup,
        es2=energydown * speedup**2,
        perf_per_power=ensemble_perf / power,
    )


def single_metrics(spec: ChipSpec) -> EnsembleMetrics:
    """Evaluate the single-processor baseline (the m=1 row)."""
    return ensemble_metrics(spec, 1)


def sweep(spec: ChipSpec, m_values: list[int]) -> list[EnsembleMetrics]:
    """Evaluate the model for each core count in ``m_values``, in input order."""
    if not m_values:
        raise DomainError("m_values must not be empty")
    return [ensemble_metrics(spec, m) for m in m_values]
