"""Autonomous research-workflow orchestration engine.

Sequences a research run from ideation through document construction with
pluggable model backends, mock-able external platforms, human intervention
gates, and a safety/audit layer. Every external surface (model providers,
recruitment platform, hosting repository, DOI resolver) has a deterministic
scripted/mock twin so full pipelines are testable at desk scale.
"""

__version__ = "0.1.0"
