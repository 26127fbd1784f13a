"""Discrete-event simulator of a 5G multi-connectivity downlink carrying
AR/VR video, with a deadline-based traffic balancer and baseline policies."""

__version__ = "0.1.0"

from .engine import Simulator
from .balancer import POLICIES
from .scenario import ScenarioConfig, load_config, run_scenario, run_single

__all__ = ["Simulator", "POLICIES", "ScenarioConfig", "load_config",
           "run_scenario", "run_single", "__version__"]
