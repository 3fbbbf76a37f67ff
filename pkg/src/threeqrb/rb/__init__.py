"""Randomized benchmarking: sequences, simulation, fitting and predictions."""

from .experiment import RBResult, SubsetResult, fit_results, fit_subset, run_experiment, simulate_survival
from .fitting import DecayFit, FitError, RBCurve, fit_curve, fit_decay
from .metrics import (
    PredictionInputs,
    alpha_from_epc,
    coherence_limit_3q_epc,
    epc_from_alpha,
    epg_from_epc,
    epg_from_epc_compound,
    extract_2q_epg,
    predict_alpha_3q,
    predict_alpha_general,
    predict_epc_3q,
)
from .report import Comparison, Prediction, compare_prediction, predict_from_subsystems
from .sequences import DEFAULT_LENGTHS, RBPartition, RBSpec, generate_sequences, standard_suite
from .stats import SynthStats, synth_stats

__all__ = [
    "Comparison", "DEFAULT_LENGTHS", "DecayFit", "FitError", "Prediction", "PredictionInputs", "RBCurve",
    "RBPartition", "RBResult", "RBSpec", "SubsetResult", "SynthStats", "alpha_from_epc",
    "coherence_limit_3q_epc", "compare_prediction", "epc_from_alpha", "epg_from_epc", "epg_from_epc_compound",
    "extract_2q_epg", "fit_curve", "fit_decay", "fit_results", "fit_subset", "generate_sequences", "predict_alpha_3q",
    "predict_alpha_general", "predict_epc_3q", "predict_from_subsystems", "run_experiment",
    "simulate_survival", "standard_suite", "synth_stats",
]
