"""ADRC leader-follower control of a tracked vehicle: models, controllers and simulation harness."""

from .adrc_continuous import ContinuousAdrc, tune_lateral, tune_longitudinal
from .adrc_discrete import DiscreteAdrc, coefficient_report, lateral_coeffs, longitudinal_coeffs
from .config import RunConfig, load_config
from .errors import CameraParams, LeaderState, TrackErrors, pixel_to_meter, true_errors
from .metrics import iae, interval_metrics, table_report
from .pid_baseline import PidController, PidGains, PidPair
from .plant import VehicleParams, VehicleState, forward_kinematics, inverse_kinematics
from .pose_command import CommandSelector, LandmarkFrame, LeaderPose, classify_pose, command_select
from .scenarios import Scenario1, Scenario2, scenario1, scenario2
from .simulation import simulate

__version__ = "0.1.0"
