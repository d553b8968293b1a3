"""Single-RF-chain RIS channel estimation and tuning toolkit.

Subpackages by concern:

* :mod:`risce.channel`    multipath channels and the beamspace dictionary
* :mod:`risce.sampling`   phase alphabet, codebook, schedule, training model
* :mod:`risce.admm`       the joint low-rank plus sparse estimator
* :mod:`risce.baselines`  least squares and orthogonal matching pursuit
* :mod:`risce.tuning`     reflection-phase selection and achievable rate
* :mod:`risce.experiment` seeded Monte Carlo sweeps with CSV output
"""

from .admm import AdmmParams, EstimateResult, default_weights, nmse, run, soft_threshold, svt
from .channel import (
    BeamspaceDictionary,
    ChannelRealization,
    PathParams,
    RisGeometry,
    assemble_channel,
    dft_dictionary,
    draw_paths,
    steering_vector,
)
from .sampling import (
    ConfigCodebook,
    ObservationMatrix,
    PhaseSet,
    SamplingSchedule,
    TrainingSequence,
    constant_pilots,
    draw_codebook,
    draw_schedule,
    phase_set,
    qpsk_pilots,
    simulate_training,
)
from .baselines import StackedMeasurements, ls_estimate, omp_estimate, stack
from .tuning import (
    PhaseConfig,
    achievable_rate,
    closed_form_phases,
    effective_gain,
    exhaustive_search,
    quantize_phases,
)
from .experiment import ExperimentConfig, parse_config, run_nmse_sweep, run_rate_eval

__version__ = "0.1.0"

__all__ = [
    "AdmmParams",
    "BeamspaceDictionary",
    "ChannelRealization",
    "ConfigCodebook",
    "EstimateResult",
    "ExperimentConfig",
    "ObservationMatrix",
    "PathParams",
    "PhaseConfig",
    "PhaseSet",
    "RisGeometry",
    "SamplingSchedule",
    "StackedMeasurements",
    "TrainingSequence",
    "achievable_rate",
    "assemble_channel",
    "closed_form_phases",
    "constant_pilots",
    "default_weights",
    "dft_dictionary",
    "draw_codebook",
    "draw_paths",
    "draw_schedule",
    "effective_gain",
    "exhaustive_search",
    "ls_estimate",
    "nmse",
    "omp_estimate",
    "parse_config",
    "phase_set",
    "qpsk_pilots",
    "quantize_phases",
    "run",
    "run_nmse_sweep",
    "run_rate_eval",
    "simulate_training",
    "soft_threshold",
    "stack",
    "steering_vector",
    "svt",
]
