"""Troubleshooter/verifier consensus over stage execution attempts.

Acceptance requires unanimous verification votes plus a troubleshooter
majority. Anything short of that is a revise, and a stage that exhausts
its iteration budget without acceptance escalates — opening a review
gate in collaborative mode, halting in autonomous mode.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from researchflow.gateway.service import CompletionRequest, ModelGateway
from researchflow.kernel.loop import IterationPolicy

ACCEPT = "accept"
REVISE = "revise"
ESCALATE = "escalate"

DEFAULT_TROUBLESHOOTERS = ["troubleshooter", "troubleshooter",
                           "troubleshooter"]
DEFAULT_VERIFIERS = ["verifier"]


@dataclass
class ConsensusVerdict:
    troubleshooter_votes: list[str]
    verification_votes: list[str]
    decision: str  # accept | revise | escalate

    def to_dict(self) -> dict:
        return {"troubleshooter_votes": self.troubleshooter_votes,
                "verification_votes": self.verification_votes,
                "decision": self.decision}


def decide_votes(troubleshooter_votes: list[str],
                 verification_votes: list[str]) -> str:
    """Accept iff verification is unanimous and troubleshooters have an
    accepting majority; otherwise revise."""
    if not verification_votes:
        raise ValueError("at least one verification vote required")
    if len(troubleshooter_votes) < 2:
        raise ValueError("at least two troubleshooter votes required")
    unanimous = all(v == ACCEPT for v in verification_votes)
    accepting = sum(1 for v in troubleshooter_votes if v == ACCEPT)
    majority = accepting * 2 > len(troubleshooter_votes)
    return ACCEPT if unanimous and majority else REVISE


def parse_vote(text: str) -> str:
    """A vote is the first accept/revise token in a response; anything
    unparseable counts as revise (conservative default)."""
    for token in text.lower().split():
        token = token.strip(".,:;!")
        if token in (ACCEPT, REVISE):
            return token
    return REVISE


def collect_votes(gateway: ModelGateway, roles: list[str], context: str,
                  module: str = "analysis") -> list[str]:
    votes = []
    for role in roles:
        exchange = gateway.complete(CompletionRequest(
            role_key=role, module=module, context=context))
        votes.append(parse_vote(exchange.text))
    return votes


def seek_consensus(observation: str, gateway: ModelGateway,
                   troubleshooter_roles: list[str] | None = None,
                   verifier_roles: list[str] | None = None,
                   module: str = "analysis") -> ConsensusVerdict:
    """Collect one round of votes on an execution observation."""
    t_roles = (DEFAULT_TROUBLESHOOTERS if troubleshooter_roles is None
               else troubleshooter_roles)
    v_roles = DEFAULT_VERIFIERS if verifier_roles is None else verifier_roles
    if len(t_roles) < 2:
        raise ValueError("consensus requires >= 2 troubleshooter roles")
    if len(v_roles) < 1:
        raise ValueError("consensus requires >= 1 verifier role")
    t_votes = collect_votes(gateway, t_roles, observation, module)
    v_votes = collect_votes(gateway, v_roles, observation, module)
    return ConsensusVerdict(
        troubleshooter_votes=t_votes, verification_votes=v_votes,
        decision=decide_votes(t_votes, v_votes))


@dataclass
class StageResolution:
    decision: str  # accept | escalate
    rounds: list[ConsensusVerdict] = field(default_factory=list)
    escalation: str = ""  # open_gate:stage_review | halt | ""


def resolve_stage(attempt: Callable[[int], ConsensusVerdict],
                  policy: IterationPolicy | None = None,
                  mode: str = "autonomous") -> StageResolution:
    """Drive revise rounds until acceptance or iteration exhaustion.

    `attempt(round_index)` performs one execute+vote round and returns
    its verdict. Persistent rejection escalates per the operating mode.
    """
    policy = policy or IterationPolicy()
    rounds: list[ConsensusVerdict] = []
    for index in range(policy.max_iterations):
        verdict = attempt(index)
        rounds.append(verdict)
        if verdict.decision == ACCEPT:
            return StageResolution(decision=ACCEPT, rounds=rounds)
    escalation = ("halt" if mode == "autonomous"
                  else "open_gate:stage_review")
    return StageResolution(decision=ESCALATE, rounds=rounds,
                           escalation=escalation)
