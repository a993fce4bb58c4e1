"""Agent-based simulator of coevolving opinion polarization and network
segregation under bounded-confidence influence and discordance-driven
unfollowing, with the metrics and experiment drivers to analyze it."""

from .engine import (Params, SimState, concordant, init_simulation,
                     opinion_update, run_until, step)
from .graph import DirectedGraph, random_directed_graph
from .metrics import (count_opinion_peaks, is_echo_chamber,
                      max_opinion_distance, segregation_index)
from .presets import PRESETS, get_preset

__all__ = [
    "Params", "SimState", "concordant", "init_simulation", "opinion_update",
    "run_until", "step", "DirectedGraph", "random_directed_graph",
    "count_opinion_peaks", "is_echo_chamber", "max_opinion_distance",
    "segregation_index", "PRESETS", "get_preset",
]

__version__ = "0.1.0"
