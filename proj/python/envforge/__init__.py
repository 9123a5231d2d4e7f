"""Envelopes of hyperplane families.

Thin re-export of the compiled core: creator solve and creativity verdicts,
envelope construction and verification, neighbor-intersection estimates,
mirror optics (orthotomic, anti-orthotomic, pedal), and support-density
boundaries.
"""

from ._core import (
    E1Estimate,
    EnvelopeMap,
    Error,
    Expr,
    CreativityReport,
    CreatorField,
    CreatorSolution,
    HyperplaneFamily,
    OrthotomicMap,
    PointField,
    SampleGrid,
    VerificationReport,
    WulffShape,
    alternative_envelopes,
    anti_orthotomic,
    build_envelope,
    cahn_hoffman,
    catalog,
    catalog_describe,
    catalog_names,
    e1_envelope,
    load_scene,
    orthotomic,
    parse,
    pedal,
    random_auxiliary_point,
    rotate_family,
    solve_creator,
    verify_envelope,
)

__all__ = [
    "E1Estimate",
    "EnvelopeMap",
    "Error",
    "Expr",
    "CreativityReport",
    "CreatorField",
    "CreatorSolution",
    "HyperplaneFamily",
    "OrthotomicMap",
    "PointField",
    "SampleGrid",
    "VerificationReport",
    "WulffShape",
    "alternative_envelopes",
    "anti_orthotomic",
    "build_envelope",
    "cahn_hoffman",
    "catalog",
    "catalog_describe",
    "catalog_names",
    "e1_envelope",
    "load_scene",
    "orthotomic",
    "parse",
    "pedal",
    "random_auxiliary_point",
    "rotate_family",
    "solve_creator",
    "verify_envelope",
]

__version__ = "0.1.0"
