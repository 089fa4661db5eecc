"""
Campaigns: run configurations, problem builders, the campaign runner and its artifacts.
"""

from .config import (
    CAMPAIGN_KINDS,
    CampaignSpec,
    CoefficientsSpec,
    ExactSpec,
    InclusionSpec,
    InterfaceSpec,
    OuterSpec,
    RunConfig,
    SolverSpec,
    SubdomainSpec,
    load_config,
    parse_config,
)
from .builders import ProblemAdapter
from .runner import CampaignResult, CampaignRunner, run_campaign, solver_settings

__all__ = [
    "CAMPAIGN_KINDS",
    "CampaignSpec",
    "CoefficientsSpec",
    "ExactSpec",
    "InclusionSpec",
    "InterfaceSpec",
    "OuterSpec",
    "RunConfig",
    "SolverSpec",
    "SubdomainSpec",
    "load_config",
    "parse_config",
    "ProblemAdapter",
    "CampaignResult",
    "CampaignRunner",
    "run_campaign",
    "solver_settings",
]
