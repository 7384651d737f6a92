"""Finite ontological models of quantum measurements.

Represent prepare-and-measure experiments with hidden variables, check the
Born rule, free choice and the Markov completeness conditions, and decide
whether the ontic state determines the wave function.
"""

from .errors import (
    ArgumentError,
    CompletenessError,
    InsufficientDataError,
    NotPureError,
    OntocheckError,
    ShapeError,
    SupportError,
    UnknownVariableError,
    ValidationError,
)
from .prob import (
    JointDistribution,
    VariableSpace,
    condition,
    independence_deviation,
    is_markov_chain,
    marginal,
    markov_deviation,
    tv_distance,
)
from .quantum import Measurement, MeasurementSet, PureState, born_rule

__version__ = "0.1.0"
