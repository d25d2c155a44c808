"""Oscillator signal systems on F_p built from the finite Weil representation."""

from .field import BruhatForm, FieldError, PrimeField, SL2Element, bruhat_decompose
from .applications import ChannelScenario, cdma_simulate, radar_simulate
from .heisenberg import HeisenbergElement, heisenberg_operator, heisenberg_system
from .io import load, save
from .metrics import ambiguity, pairwise_max, system_report
from .oscillator import ClusteringError, build_system, extended_system, oscillator_family
from .signals import SignalSystem, SystemSignal
from .weil import OutsideCayleyDomain, weil_bruhat, weil_kernel

__all__ = [
    "BruhatForm", "ChannelScenario", "ClusteringError", "FieldError", "HeisenbergElement", "OutsideCayleyDomain",
    "PrimeField", "SL2Element", "SignalSystem", "SystemSignal", "bruhat_decompose",
    "build_system", "extended_system", "heisenberg_operator", "heisenberg_system",
    "oscillator_family", "weil_bruhat", "weil_kernel", "ambiguity", "pairwise_max",
    "system_report", "load", "save", "radar_simulate", "cdma_simulate",
]
