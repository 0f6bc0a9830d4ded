"""Three-phase ideation: suggestion generation, formulation into draft
ideas, validation (novelty + feasibility), and the selection tournament."""

from researchflow.ideation.generate import (
    IdeaSuggestion,
    dedupe,
    generate_suggestions,
    normalize_title,
)
from researchflow.ideation.formulate import ResearchIdea, formulate
from researchflow.ideation.validate import (
    check_feasibility,
    check_novelty,
    validate_idea,
)
from researchflow.ideation.tournament import (
    Pairing,
    TournamentResult,
    tournament,
)

__all__ = [
    "IdeaSuggestion",
    "Pairing",
    "ResearchIdea",
    "TournamentResult",
    "check_feasibility",
    "check_novelty",
    "dedupe",
    "formulate",
    "generate_suggestions",
    "normalize_title",
    "tournament",
    "validate_idea",
]
