"""Burden-test bias under ascertained rare-variant discovery."""

from ._burdenbias import (
    ConfigError,
    EffectDistribution,
    Report,
    Scenario,
    allele_count_t_test,
    ascertainment_prob,
    burden_lor_closed_form,
    conditioned_moments,
    curve,
    fit_logistic,
    list_targets,
    load_scenario,
    phase_two_burden,
    preset,
    run_scenario,
    run_target,
)

__all__ = [
    "ConfigError",
    "EffectDistribution",
    "Report",
    "Scenario",
    "allele_count_t_test",
    "ascertainment_prob",
    "burden_lor_closed_form",
    "conditioned_moments",
    "curve",
    "fit_logistic",
    "list_targets",
    "load_scenario",
    "phase_two_burden",
    "preset",
    "run_scenario",
    "run_target",
]
