"""Hopf hypersurfaces in complex hyperbolic space from Legendrian curve pairs."""

import json

from ._hopf import (
    BranchObstructionError,
    ConfigError,
    ContactCurve,
    DalembertPatch,
    DomainError,
    HopfError,
    HopfParams,
    InputError,
    RegimeError,
    curve_preset_names,
    herm,
    real_form,
    to_ball_chart,
    to_sphere_chart,
)
from . import _hopf

__all__ = [
    "BranchObstructionError", "ConfigError", "ContactCurve", "DalembertPatch", "DomainError",
    "HopfError", "HopfParams", "InputError", "RegimeError", "build_patch", "check_curves",
    "curve", "curve_preset_names", "evaluate", "herm", "real_form", "run", "to_ball_chart",
    "to_sphere_chart",
]


def _text(config):
    return config if isinstance(config, str) else json.dumps(config)


def curve(spec):
    """Contact curve from a preset or table spec (dict or JSON text)."""
    return _hopf._curve_from_json(_text(spec))


def build_patch(config):
    return _hopf._build_patch(_text(config))


def evaluate(config, mode="verify"):
    """Samples the grid without writing files. Returns (report, csv, passed)."""
    doc, csv, passed = _hopf._evaluate(_text(config), mode)
    return json.loads(doc), csv, passed


def run(config, mode="verify"):
    """Like evaluate() but also writes the outputs named in the config."""
    doc, csv, passed = _hopf._run(_text(config), mode)
    return json.loads(doc), csv, passed


def check_curves(document, fd_step=1e-5):
    doc, passed = _hopf._check_curves(_text(document), fd_step)
    return json.loads(doc), passed
