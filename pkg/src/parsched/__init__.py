"""Adaptive phased-array radar dwell scheduling: synthesis priorities, pulse
interleaving under time and energy constraints, and baseline policies.
"""

from .energy import EnergyConfig, InfeasiblePulse, TransmitterState
from .model import DwellTemplate, Placement, PlacementMode, RadarTask, WorkingMode
from .priority import PriorityConfig
from .scenario import ScenarioConfig, WaitMode, generate_scenario
from .scheduler import Policy, SchedulerConfig, run_horizon, schedule_interval

__version__ = "0.1.0"
