"""Model configuration files: a YAML tree with top-level ``kind`` selecting
the model family, plus optional named ``regions`` usable from formulas.

Examples are shipped under ``hypersmc/bench/data``.
"""

import yaml

from ..stats.regions import AbsDiffGE, AbsDiffLE, BoxProduct, HalfspaceConj, LowerHalfLine, UpperHalfLine
from .base import ConfigError
from .ctmc import CtmcModel
from .hybrid import HybridModel, make_template
from .queue import BackServer, Exponential, FrontServer, Mmpp, QueueModel


def build_region(spec, dimension):
    kind = spec.get("kind")
    if kind == "absdiff_le":
        return AbsDiffLE(dimension, int(spec["i"]) - 1, int(spec["j"]) - 1, float(spec["delta"]))
    if kind == "absdiff_ge":
        return AbsDiffGE(dimension, int(spec["i"]) - 1, int(spec["j"]) - 1, float(spec["delta"]))
    if kind == "box":
        return BoxProduct([(float(lo), float(hi)) for lo, hi in spec["intervals"]])
    if kind == "lower":
        return LowerHalfLine(float(spec["p"]))
    if kind == "upper":
        return UpperHalfLine(float(spec["p"]))
    if kind == "halfspaces":
        return HalfspaceConj(dimension, [(tuple(float(c) for c in cs), float(b))
                                         for cs, b in spec["constraints"]])
    raise ConfigError(f"unknown region kind {kind!r}")


class RegionDefs:
    """Named region specifications; dimension is fixed at first use."""

    def __init__(self, specs):
        self.specs = dict(specs or {})

    def resolve(self, name, dimension):
        if name not in self.specs:
            raise ConfigError(f"region {name!r} is not defined in the model configuration")
        return build_region(self.specs[name], dimension)


def _arrival_process(spec):
    kind = spec.get("dist", "exponential")
    if kind == "exponential":
        return Exponential(float(spec["rate"]))
    if kind == "mmpp":
        return Mmpp(spec["arrival_rates"], spec["transition_rates"],
                    int(spec.get("initial_mode", 0)))
    raise ConfigError(f"unknown arrival process {kind!r}")


def model_from_dict(doc):
    kind = doc.get("kind")
    if kind == "ctmc":
        labeling = {int(s): set(ls) for s, ls in (doc.get("labels") or {}).items()}
        model = CtmcModel(doc["rates"], int(doc.get("initial", 0)), labeling)
    elif kind == "hybrid":
        template = make_template(doc.get("template"), doc.get("options"))
        model = HybridModel(template, dt=float(doc.get("dt", 0.01)),
                            max_jumps_per_step=int(doc.get("max_jumps_per_step", 10)))
    elif kind == "queue":
        fronts = [FrontServer(_arrival_process(f["arrival"]),
                              float(f["service"]["rate"]),
                              int(f.get("buffer", 10 ** 9)))
                  for f in doc["front"]]
        backs = [BackServer(float(b["service"]["rate"]), int(b["buffer"]))
                 for b in doc["backs"]]
        model = QueueModel(fronts, backs)
    else:
        raise ConfigError(f"unknown model kind {kind!r}")
    regions = RegionDefs(doc.get("regions"))
    default_horizon = doc.get("horizon")
    return model, regions, (float(default_horizon) if default_horizon is not None else None)


def load_model(path):
    """Returns (model, region definitions, default horizon or None)."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"{path} does not contain a configuration mapping")
    try:
        return model_from_dict(doc)
    except KeyError as exc:
        raise ConfigError(f"{path}: missing required key {exc}") from None
