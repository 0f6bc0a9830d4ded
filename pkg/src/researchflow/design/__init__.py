"""Method-agent pipeline: protocol design, power analysis with a
closed-form oracle check against sandbox-executed generated code, and
pre-registration construction/validation."""

from researchflow.design.power import (
    PowerAnalysisSpec,
    PowerResult,
    TestFamily,
    closed_form_required_n,
    compute_power,
    generate_power_script,
)
from researchflow.design.protocol import InstrumentRegistry, Protocol, design_protocol
from researchflow.design.prereg import (
    PreRegistration,
    build_preregistration,
    render_preregistration,
    validate_prereg,
)

__all__ = [
    "InstrumentRegistry",
    "PowerAnalysisSpec",
    "PowerResult",
    "PreRegistration",
    "Protocol",
    "TestFamily",
    "build_preregistration",
    "closed_form_required_n",
    "compute_power",
    "design_protocol",
    "generate_power_script",
    "render_preregistration",
    "validate_prereg",
]
