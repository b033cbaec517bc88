"""Closed-form solution families: catalog, construction, sampling and adjudication."""

from .build import (
    ConstraintCheck,
    ConstraintViolation,
    FamilyInstance,
    build_instance,
    build_p41,
    build_p42,
    build_t1,
    build_t2,
    component_residual,
    validate_constraints,
)
from .catalog import CATALOG, FAMILY_IDS, DegenerateParameters, FamilyParams, Template, TemplateError, get_template
from .sampling import SamplingError, hosting_carriers, sample_instance, sample_params, seeded_lambdas

__all__ = [
    "CATALOG",
    "FAMILY_IDS",
    "ConstraintCheck",
    "ConstraintViolation",
    "DegenerateParameters",
    "FamilyInstance",
    "FamilyParams",
    "SamplingError",
    "Template",
    "TemplateError",
    "build_instance",
    "build_p41",
    "build_p42",
    "build_t1",
    "build_t2",
    "component_residual",
    "get_template",
    "hosting_carriers",
    "sample_instance",
    "sample_params",
    "seeded_lambdas",
    "validate_constraints",
]
