"""Single-elimination idea tournament with multi-model judging.

Bracket is seeded by Phase-1 rank, padded with byes up to a power of
two so top seeds sit out the first round. Every pairing is judged by
all configured judge roles; majority wins, ties go to the higher seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from researchflow.gateway.service import CompletionRequest, ModelGateway
from researchflow.ideation.formulate import ResearchIdea

DEFAULT_JUDGE_ROLES = ["judge", "reviewer"]


@dataclass
class Pairing:
    side_a: str
    side_b: str
    votes: dict[str, list[str]] = field(default_factory=dict)
    winner: str = ""

    def to_dict(self) -> dict:
        return {"side_a": self.side_a, "side_b": self.side_b,
                "votes": self.votes, "winner": self.winner}


@dataclass
class TournamentResult:
    participants: list[str]
    rounds: list[list[Pairing]]
    final_ranking: list[str]
    champion: str

    def to_dict(self) -> dict:
        return {
            "participants": self.participants,
            "rounds": [[p.to_dict() for p in rnd] for rnd in self.rounds],
            "final_ranking": self.final_ranking,
            "champion": self.champion,
        }


def _parse_winner(text: str, id_a: str, id_b: str) -> str | None:
    """The judged winner is whichever idea id appears first."""
    pos_a = text.find(id_a)
    pos_b = text.find(id_b)
    if pos_a < 0 and pos_b < 0:
        return None
    if pos_b < 0 or (0 <= pos_a < pos_b):
        return id_a
    return id_b


def _judge_pairing(a: ResearchIdea, b: ResearchIdea,
                   gateway: ModelGateway,
                   judge_roles: list[str]) -> Pairing:
    pairing = Pairing(side_a=a.idea_id, side_b=b.idea_id)
    tally = {a.idea_id: 0, b.idea_id: 0}
    for role in judge_roles:
        exchange = gateway.complete(CompletionRequest(
            role_key=role, module="ideation",
            context=(f"pick the stronger idea: {a.idea_id} "
                     f"({a.hypothesis}) vs {b.idea_id} ({b.hypothesis})")))
        winner = _parse_winner(exchange.text, a.idea_id, b.idea_id)
        pairing.votes.setdefault(role, []).append(winner or "abstain")
        if winner:
            tally[winner] += 1
    if tally[a.idea_id] == tally[b.idea_id]:
        # tie goes to the higher seed (lower seed_rank)
        pairing.winner = (a.idea_id if a.seed_rank <= b.seed_rank
                          else b.idea_id)
    else:
        pairing.winner = max(tally, key=lambda k: tally[k])
    return pairing


def _next_power_of_two(n: int) -> int:
    size = 1
    while size < n:
        size *= 2
    return size


def tournament(ideas: list[ResearchIdea], gateway: ModelGateway,
               judge_roles: list[str] | None = None) -> TournamentResult:
    """Run the bracket and return rounds, ranking, and the champion."""
    if len(ideas) < 2:
        raise ValueError("tournament requires at least 2 ideas")
    judge_roles = judge_roles or DEFAULT_JUDGE_ROLES
    if len(judge_roles) < 2:
        raise ValueError("tournament requires at least 2 judge roles")

    seeded = sorted(ideas, key=lambda i: (i.seed_rank, i.idea_id))
    by_id = {i.idea_id: i for i in seeded}
    bracket_size = _next_power_of_two(len(seeded))
    # standard seeding: slot i pairs with slot (size-1-i); byes fill the tail
    slots: list[ResearchIdea | None] = list(seeded)
    slots += [None] * (bracket_size - len(seeded))

    rounds: list[list[Pairing]] = []
    eliminated: list[str] = []
    current = slots
    while len(current) > 1:
        pairings: list[Pairing] = []
        survivors: list[ResearchIdea | None] = []
        half = len(current) // 2
        for i in range(half):
            a, b = current[i], current[len(current) - 1 - i]
            if b is None:
                survivors.append(a)  # bye
                continue
            pairing = _judge_pairing(a, b, gateway, judge_roles)
            pairings.append(pairing)
            winner = by_id[pairing.winner]
            loser = b if winner is a else a
            eliminated.append(loser.idea_id)
            survivors.append(winner)
        if pairings:
            rounds.append(pairings)
        current = survivors

    champion = current[0].idea_id
    final_ranking = [champion] + list(reversed(eliminated))
    return TournamentResult(
        participants=[i.idea_id for i in seeded],
        rounds=rounds, final_ranking=final_ranking, champion=champion)
