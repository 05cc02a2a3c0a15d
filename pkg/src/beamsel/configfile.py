"""INI experiment configs.

Three optional sections: [scenario], [aco] and [sweep]. Angles are given
in degrees and converted on load; every other key maps one-to-one onto
ScenarioConfig / AcoParams fields. Unknown sections or keys are rejected
rather than ignored so typos fail loudly.
"""

import configparser
import math

from .aco import AcoParams
from .channel import ScenarioConfig
from .exceptions import ConfigError
from .harness import SWEEP_NAMES

_SCENARIO_INT = ("n_antennas", "n_users", "n_clusters")
_SCENARIO_FLOAT = ("ring_distance", "ring_radius", "los_gain_db",
                   "nlos_gain_db", "gain_scale", "noise_variance",
                   "transmit_power_db")
_ACO_FLOAT = ("pheromone_weight", "desirability_weight", "decay",
              "feedback_weight", "ridge")


def _parse_number(section, key, text, cast):
    try:
        value = cast(text)
    except ValueError:
        kind = "an integer" if cast is int else "a number"
        raise ConfigError(
            f"[{section}] {key} = {text!r} is not {kind}") from None
    return value


def _scenario_from(section):
    kwargs = {}
    ray_lo = ray_hi = None
    for key, text in section.items():
        if key in _SCENARIO_INT:
            kwargs[key] = _parse_number("scenario", key, text, int)
        elif key in _SCENARIO_FLOAT:
            kwargs[key] = _parse_number("scenario", key, text, float)
        elif key == "angle_spread_deg":
            deg = _parse_number("scenario", key, text, float)
            kwargs["angle_spread"] = math.radians(deg)
        elif key == "ray_count_min":
            ray_lo = _parse_number("scenario", key, text, int)
        elif key == "ray_count_max":
            ray_hi = _parse_number("scenario", key, text, int)
        else:
            raise ConfigError(f"unknown [scenario] key {key!r}")
    if (ray_lo is None) != (ray_hi is None):
        raise ConfigError(
            "ray_count_min and ray_count_max must be given together")
    if ray_lo is not None:
        kwargs["ray_count_range"] = (ray_lo, ray_hi)
    return ScenarioConfig(**kwargs)


def _aco_from(section):
    kwargs = {}
    for key, text in section.items():
        if key in _ACO_FLOAT:
            kwargs[key] = _parse_number("aco", key, text, float)
        elif key == "n_iterations":
            kwargs[key] = _parse_number("aco", key, text, int)
        elif key == "n_candidates":
            parts = [p.strip() for p in text.split(",") if p.strip()]
            counts = tuple(_parse_number("aco", key, p, int) for p in parts)
            kwargs[key] = counts[0] if len(counts) == 1 else counts
        elif key == "selection":
            kwargs[key] = text.strip()
        else:
            raise ConfigError(f"unknown [aco] key {key!r}")
    return AcoParams(**kwargs)


def _sweep_from(section, scenario):
    name = None
    values = None
    for key, text in section.items():
        if key == "parameter":
            name = text.strip()
        elif key == "values":
            parts = [p.strip() for p in text.split(",") if p.strip()]
            if not parts:
                raise ConfigError("[sweep] values is empty")
            values = tuple(_parse_number("sweep", key, p, float)
                           for p in parts)
        else:
            raise ConfigError(f"unknown [sweep] key {key!r}")
    if name is None or values is None:
        raise ConfigError("[sweep] needs both 'parameter' and 'values'")
    if name not in SWEEP_NAMES:
        raise ConfigError(f"unknown sweep parameter {name!r}; expected "
                          f"one of {', '.join(SWEEP_NAMES)}")
    return tuple((name, v) for v in values)


def load_config(path):
    """Parse an INI file into (ScenarioConfig, AcoParams, sweep points).

    Missing sections fall back to defaults; a missing [sweep] becomes a
    single point at the scenario's own transmit power.
    """
    parser = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path!r}: {exc}") from None

    known = {"scenario", "aco", "sweep"}
    extra = set(parser.sections()) - known
    if extra:
        raise ConfigError(
            f"unknown config section(s): {', '.join(sorted(extra))}")

    scenario = (_scenario_from(parser["scenario"])
                if parser.has_section("scenario") else ScenarioConfig())
    aco = (_aco_from(parser["aco"])
           if parser.has_section("aco") else AcoParams())
    if parser.has_section("sweep"):
        sweep = _sweep_from(parser["sweep"], scenario)
    else:
        sweep = (("transmit_power_db", scenario.transmit_power_db),)
    return scenario, aco, sweep
