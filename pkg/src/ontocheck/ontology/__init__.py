"""Ontological models, hypothesis checkers and the psi-determination pipeline."""

from .builders import (
    build_born_model,
    build_hidden_outcome_model,
    build_incomplete_tomography_model,
    build_near_degenerate_model,
    build_no_free_choice_counterexample,
    gen_compliant_model,
    perturb_model,
)
from .checks import (
    CONDITIONS,
    HYPOTHESES,
    CheckResult,
    PsiDetermination,
    TheoremReport,
    check_completeness_eq1,
    check_consistency_eq3,
    check_free_choice,
    check_nonextendibility_eq2,
    check_qma,
    check_tomographic_completeness,
    psi_determination,
    run_theorem_check,
)
from .model import LAMBDA, OUTCOME, PSI, SETTING, OntologicalModel, full_joint
from .weather import WeatherModel, build_weather_model
