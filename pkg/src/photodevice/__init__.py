"""Steady-state thermodynamics and current noise of a two-level photoelectric device."""
from .device import DeviceSolution, solve_device
from .errors import (
    AbsorbingStateError,
    ConfigurationError,
    DomainError,
    InvalidNoiseError,
    InvalidParameterError,
    NonUniqueSteadyStateError,
    PhotodeviceError,
    SlowMixingError,
    UndefinedPerformanceError,
)
from .model import BathSpec, DeviceParams, SystemSpec, bose_einstein, build_baths, build_system, fermi_dirac
from .thermo import ThermoReport, conductance, thermo_report

__all__ = [
    "AbsorbingStateError",
    "BathSpec",
    "ConfigurationError",
    "DeviceParams",
    "DeviceSolution",
    "DomainError",
    "InvalidNoiseError",
    "InvalidParameterError",
    "NonUniqueSteadyStateError",
    "PhotodeviceError",
    "SlowMixingError",
    "SystemSpec",
    "ThermoReport",
    "UndefinedPerformanceError",
    "bose_einstein",
    "build_baths",
    "build_system",
    "conductance",
    "fermi_dirac",
    "solve_device",
    "thermo_report",
]
