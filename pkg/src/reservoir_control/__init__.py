"""Online-learning reservoir feedforward control with PD feedback."""

__version__ = "0.1.0"

from .errors import (ContractViolation, InitializationError, InvalidConfigError, LearnerDivergedError,
                     PlantDivergedError, ReservoirControlError, ScalingError)
from .signals import (ReferenceSignal, complex_preset, future_window, generate_complex, generate_sine,
                      generate_step)
from .plants import (BenchmarkPlant, BenchmarkPlantState, NoiseModel, SurrogateActuator,
                     SurrogateActuatorParams, SurrogateActuatorState, SurrogatePressureParams,
                     SurrogatePressureState, add_noise, benchmark_step, surrogate_actuator_step,
                     surrogate_pressure_step)
from .reservoir import (EsnParams, EsnReservoir, NullReservoir, TapDelayParams, TapDelayReservoir,
                        esn_update, init_esn, spectral_scale, tap_delay_update, washout)
from .learner import LearnerState, rls_init, rls_update, sync_weights
from .controller import (ControlFrame, ControlLoop, HistoryBuffers, PdGains, SaturationMode, combine,
                         feedforward, pd_feedback, saturate)
from .config import ScenarioConfig, load_config, parse_config_text, profile_config
from .harness import (BatchSummary, EpisodeTrace, compare_variants, rmse, run_batch, run_episode,
                      summarize)
