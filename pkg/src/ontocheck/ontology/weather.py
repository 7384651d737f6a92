"""Classical two-forecaster weather example.

Tomorrow's weather ``X`` is a deterministic function of today's initial
conditions ``G = (today, micro)``.  The left forecaster knows ``today`` and
issues ``F = P_{X|today}``: with a cloudy day that forecast is sunny 33% /
cloudy 67%.  The right forecaster only knows the climatology and issues the
constant ``F' = P_X``.  ``Lambda`` is the list of elements of reality, here
containing tomorrow's weather itself.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..prob import DEFAULT_TOL, JointDistribution, VariableSpace, markov_deviation

GAMMA = "G"
LAMBDA = "Lambda"
WEATHER = "X"
FORECAST = "F"
FORECAST_PRIME = "F'"

MICROSTATES = 100
# percent of microstates giving a sunny tomorrow, per today's weather
SUNNY_THRESHOLD = {"sunny": 80, "cloudy": 33}
P_TODAY = {"sunny": 0.5, "cloudy": 0.5}


def _forecast_label(dist: dict) -> str:
    return f"sunny {dist['sunny']:.2f} / cloudy {dist['cloudy']:.2f}"


@dataclass(frozen=True)
class WeatherModel:
    joint: JointDistribution
    forecasts: dict  # F-label -> {"sunny": p, "cloudy": 1 - p}

    def ontic_chain_deviation(self) -> float:
        """``G <-> Lambda <-> X``."""
        return markov_deviation(self.joint, [GAMMA], [LAMBDA], [WEATHER])

    def forecast_chain_deviation(self, forecast: str = FORECAST) -> float:
        """``Lambda <-> F <-> X`` for either forecaster."""
        return markov_deviation(self.joint, [LAMBDA], [forecast], [WEATHER])

    def chains(self, tol: float = DEFAULT_TOL) -> list:
        rows = [("G <-> Lambda <-> X", self.ontic_chain_deviation()),
                ("Lambda <-> F <-> X", self.forecast_chain_deviation(FORECAST)),
                ("Lambda <-> F' <-> X", self.forecast_chain_deviation(FORECAST_PRIME))]
        return [(name, dev, dev <= tol) for name, dev in rows]


def build_weather_model() -> WeatherModel:
    weather = ("sunny", "cloudy")
    gamma_values = tuple(f"{t}/{k}" for t in weather for k in range(MICROSTATES))

    def tomorrow(today, k):
        return "sunny" if k < SUNNY_THRESHOLD[today] else "cloudy"

    left = {t: {"sunny": SUNNY_THRESHOLD[t] / MICROSTATES,
                "cloudy": 1 - SUNNY_THRESHOLD[t] / MICROSTATES} for t in weather}
    p_sunny = sum(P_TODAY[t] * left[t]["sunny"] for t in weather)
    right = {"sunny": p_sunny, "cloudy": 1 - p_sunny}
    forecasts = {_forecast_label(d): d for d in list(left.values()) + [right]}

    spaces = (VariableSpace(GAMMA, gamma_values), VariableSpace(LAMBDA, weather),
              VariableSpace(WEATHER, weather), VariableSpace(FORECAST, tuple(_forecast_label(left[t]) for t in weather)),
              VariableSpace(FORECAST_PRIME, (_forecast_label(right),)))
    weights = {}
    for t in weather:
        for k in range(MICROSTATES):
            x = tomorrow(t, k)
            key = (f"{t}/{k}", x, x, _forecast_label(left[t]), _forecast_label(right))
            weights[key] = P_TODAY[t] / MICROSTATES
    return WeatherModel(JointDistribution.from_dict(spaces, weights), forecasts)
