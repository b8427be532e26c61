"""Model-free control toolkit.

Intelligent P/PI/PD/PID and generalized-PI controllers built on ultra-local
models, online estimators for the lumped unknown term they cancel, a set of
benchmark plants (ODE, transfer-function, delay, heat rod), a deterministic
closed-loop engine, and the exact sampled-time correspondence between classic
and intelligent controllers.
"""

from .controllers import (ClassicGains, ControllerState, IntelligentGains,
                          classic_pi2d, classic_pid, igpi, ip, ipd, ipi, ipid,
                          validate_error_dynamics)
from .correspondence import (GainMap, build_gain_map, map_ip_to_pi,
                             map_ipd_to_pid, map_ipi_to_pi2, map_ipid_to_pi2d,
                             sampled_ip, sampled_ipd, sampled_ipi,
                             sampled_ipid, sampled_pi, sampled_pi2,
                             sampled_pi2d, sampled_pid)
from .errors import ConfigError, DivergenceError, NotReadyError
from .estimation import (ClosedLoopIPEstimator, FEstimate, OneStepEstimator,
                         OpenLoopEstimator, UltraLocalConfig,
                         estimate_closedloop_ip, estimate_onestep,
                         estimate_openloop, estimate_openloop_second)
from .experiments import (build_scenario, catalog_defaults, list_scenarios,
                          run_scenario, scenario_names, verify_correspondence)
from .plants import (DelayPlant, DuffingSpring, FaultSpec, HeatRod, LTIPlant,
                     NonlinearCubic, Oscillator, TustinFriction, apply_fault,
                     delay_walk, flat_feedforward, lti_aging, lti_nominal,
                     lti_nonminimum_phase, tustin_force)
from .signals import (NoiseSource, ReferenceTrajectory, SampleWindow, TimeGrid,
                      make_reference, noise_stream, window_quadrature)
from .simulation import (ClassicController, ClosedLoopRecord, Feedforward,
                         IntelligentController, LoopConfig, Metrics,
                         compute_metrics, run_closed_loop)

__version__ = "0.1.0"
