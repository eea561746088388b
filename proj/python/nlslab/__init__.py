"""Pseudospectral NLS laboratory on R^d x T (Python front end)."""

import json as _json

from ._core import (  # noqa: F401
    BlowUp,
    Grid,
    InvalidInput,
    IoError,
    SpectralField,
    __version__,
    cauchy_table,
    cube_sup_mass,
    energy,
    evolve,
    fft_threads,
    free_evolve,
    gaussian,
    homogeneous_hs_y,
    lebesgue_norm,
    mass,
    morawetz_terms,
    plane_wave,
    pullback,
    set_fft_threads,
    sobolev_h1,
    soliton,
    strang_step,
    verify_records,
)
from . import _core


def exponents(d, alpha, mode="critical", r=None, epsilon=None, theta=None, theta_resolution="1/100"):
    """Construct and verify an exponent system; returns the JSON report as a dict.

    Rational inputs are strings such as "5" or "9/2".
    """
    def opt(v):
        return None if v is None else str(v)

    return _json.loads(
        _core._exponent_query(d, str(alpha), mode, opt(r), opt(epsilon), opt(theta), str(theta_resolution))
    )


def normalize_config(text):
    """Validate INI config text and return its canonical form."""
    return _core._check_config(text)


def run_preset(text, output_dir=None):
    """Run a preset from INI text; returns exit code, checks and flags."""
    result = _core._run_preset(text, output_dir)
    result["flags"] = _json.loads(result["flags"])
    return result
