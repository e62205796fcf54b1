from .energy import EnergyConfig, EnergyScenario, build_energy_community
from .illustrative import (EXACT, INEXACT, OSCILLATING, IllustrativeConfig,
                           IllustrativeScenario, Prop1Report, Regime,
                           RegimeRecord, RegimeTrace, build_illustrative,
                           check_prop1, run_regime)
from .testbed import TestbedConfig, TestbedScenario, build_monotone_testbed

__all__ = [
    "EXACT",
    "INEXACT",
    "OSCILLATING",
    "EnergyConfig",
    "EnergyScenario",
    "IllustrativeConfig",
    "IllustrativeScenario",
    "Prop1Report",
    "Regime",
    "RegimeRecord",
    "RegimeTrace",
    "TestbedConfig",
    "TestbedScenario",
    "build_energy_community",
    "build_illustrative",
    "build_monotone_testbed",
    "check_prop1",
    "run_regime",
]
