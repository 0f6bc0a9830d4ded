"""Dry-run fixture generator.

Builds a complete, self-contained fixture directory for a desk-scale
end-to-end run: scripted backend responses for every role the pipeline
calls, a DOI resolver table, an instrument registry, a small external
literature corpus, the five analysis stage scripts, and a run config
pointing at all of it. Everything is deterministic so two runs of the
same fixture produce byte-identical artifact trees.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

import yaml

N_CITATIONS = 45

# --- deterministic prose -------------------------------------------------

_SUBJECTS = [
    "visual working memory capacity", "mental rotation accuracy",
    "the set-size manipulation", "response latency", "spatial imagery",
    "the retention interval", "stimulus complexity", "encoding precision",
    "maintenance load", "the rotation angle", "representational fidelity",
    "individual variability", "task accuracy", "the capacity estimate",
    "perceptual grouping", "attentional selection",
]
_VERBS = [
    "predicts", "modulates", "constrains", "tracks", "is associated with",
    "accounts for variance in", "covaries with", "is limited by",
    "scales with", "interacts with", "remains stable across",
    "declines under", "is dissociable from", "reflects",
]
_OBJECTS = [
    "performance on the rotation task", "the observed capacity limit",
    "accuracy in the change-detection block", "self-reported imagery vividness",
    "the precision of stored representations", "response times at high load",
    "transformation speed", "the number of retained items",
    "error rates at larger angular disparities", "the quality of encoding",
    "strategic chunking", "the fidelity of the maintained template",
]
_TAILS = [
    "in the present sample", "under the pre-registered exclusion protocol",
    "across both task blocks", "after controlling for mean response time",
    "at every tested set size", "beyond what chance would predict",
    "in line with the working hypothesis", "with a large standardized effect",
    "independent of questionnaire scores", "under typical viewing conditions",
    "when aggregated at the participant level", "in the retained subsample",
]


def _sentence(rng: random.Random) -> str:
    s = (f"{rng.choice(_SUBJECTS)} {rng.choice(_VERBS)} "
         f"{rng.choice(_OBJECTS)} {rng.choice(_TAILS)}.")
    return s[0].upper() + s[1:]


def _prose(rng: random.Random, n_words: int, cite_keys: list[str],
           extra_sentences: list[str] | None = None) -> str:
    """Roughly n_words of prose; citations interleaved every few
    sentences until cite_keys is exhausted."""
    sentences = list(extra_sentences or [])
    cites = list(cite_keys)
    count = sum(len(s.split()) for s in sentences)
    i = 0
    while count < n_words:
        s = _sentence(rng)
        if cites and i % 3 == 0:
            s += f" [@{cites.pop(0)}]"
        sentences.append(s)
        count += len(s.split())
        i += 1
    return " ".join(sentences)


# --- scripted responses ---------------------------------------------------

def _brainstorm_json() -> str:
    topics = [
        ("s1", "Visual working memory capacity and mental rotation",
         "Test whether change-detection capacity predicts rotation accuracy.",
         0.90),
        ("s2", "Set size effects on rotation strategies",
         "Probe strategy shifts in rotation as memory load increases.",
         0.85),
        ("s3", "Imagery vividness and maintenance precision",
         "Relate questionnaire vividness to continuous-report precision.",
         0.80),
        ("s4", "Retention interval and transformation speed",
         "Measure rotation speed as a function of maintenance duration.",
         0.75),
        ("s5", "Perceptual grouping and capacity estimates",
         "Ask whether grouping cues inflate apparent capacity.",
         0.70),
    ]
    return json.dumps({"suggestions": [
        {"id": sid, "title": title, "summary": summary, "merit": merit,
         "instruments": ["VWM", "MRT", "VVIQ2"], "practical": True}
        for sid, title, summary, merit in topics
    ]})


def _formulation_json(index: int) -> str:
    hypotheses = {
        1: "Visual working memory capacity predicts mental rotation "
           "accuracy in adults with typical vision",
        2: "Higher memory load shifts mental rotation toward piecemeal "
           "transformation strategies",
        3: "Self-reported imagery vividness tracks the precision of "
           "maintained visual representations",
        4: "Longer retention intervals slow subsequent mental "
           "transformation of the stored item",
    }
    data = {
        "hypothesis": hypotheses[index],
        "rationale": "Both abilities are argued to draw on a shared "
                     "visuospatial buffer, so individual capacity limits "
                     "should surface as accuracy differences in "
                     "transformation tasks.",
        "predicted_outcomes": [
            "a positive participant-level correlation between task "
            "accuracies across the two blocks",
            "no reliable association with questionnaire scores",
        ],
        "required_instruments": ["VWM", "MRT", "VVIQ2"],
        "variables": {
            "exclusion_criteria": [
                {"name": "incomplete_blocks", "level": "participant",
                 "field": "blocks_complete", "op": "<", "value": 3,
                 "citation": "pre-registration"},
            ],
            "analysis_plan": [
                {"name": "pearson_correlation", "dataset": "aggregates",
                 "iv": "vwm_accuracy", "dv": "mrt_accuracy"},
            ],
            "eligibility": {"min_age": 18, "max_age": 45,
                            "normal_vision": True},
            "platform": "mock-recruitment",
        },
    }
    return json.dumps(data)


def _protocol_json() -> str:
    return json.dumps({
        "tasks": ["VWM", "MRT", "VVIQ2"],
        "conditions": [
            {"name": "set_size", "task": "VWM", "levels": [2, 4, 6]},
            {"name": "rotation_angle", "task": "MRT",
             "levels": [45, 90, 135]},
        ],
        "trial_structure": {"blocks": 3, "trials_per_block": 4,
                            "order": "fixed"},
        "counterbalancing": "latin-square",
        "measurements": [
            {"name": "vwm_accuracy",
             "definition": "proportion correct in the VWM block"},
            {"name": "mrt_accuracy",
             "definition": "proportion correct in the MRT block"},
            {"name": "mean_rt",
             "definition": "mean response time in milliseconds"},
        ],
    })


def _manuscript_json(cite_keys: list[str]) -> str:
    rng = random.Random(2024)
    keys = list(cite_keys)
    # spread the citation budget over the citing sections
    intro_keys, keys = keys[:20], keys[20:]
    methods_keys, keys = keys[:10], keys[10:]
    discussion_keys = keys
    results_extra = [
        "Figure 1 presents the participant-level aggregates, while "
        "Figure 2 summarizes the cleaned dataset and Figure 3 the "
        "excluded records; Figure 4 shows the retained subsample.",
        "Table 1 reports the pre-registered statistical test and "
        "Table 2 the interpretation summary.",
        "The pre-registered correlation between block accuracies was "
        "positive and decisive under both frequentist and Bayesian "
        "criteria, with the interval estimate excluding all but "
        "trivially small effects.",
    ]
    sections = {
        "title": "Visual Working Memory Capacity Predicts Mental "
                 "Rotation Accuracy: A Pre-Registered Individual "
                 "Differences Study",
        "abstract": _prose(rng, 220, []),
        "introduction": _prose(rng, 1900, intro_keys),
        "methods": _prose(rng, 1800, methods_keys),
        "results": _prose(rng, 1500, [], extra_sentences=results_extra),
        "discussion": _prose(rng, 2150, discussion_keys),
    }
    return json.dumps(sections)


def _script(cite_keys: list[str]) -> dict:
    accept_t = ("accept: the stage executed cleanly and its outputs "
                "match the declared plan")
    accept_v = ("accept: verified the produced files against the "
                "analysis plan")
    win = ("{winner} offers the stronger theoretical grounding and the "
           "more decisive predicted outcome, and should advance.")
    return {
        "idea-agent": [
            _brainstorm_json(),
            "keep the current ordering; the merit ranking already "
            "reflects scientific promise",
            _formulation_json(1),
            _formulation_json(2),
            _formulation_json(3),
            _formulation_json(4),
        ],
        "method-agent": [_protocol_json()],
        "implementation-agent": [
            "recruitment draft configured from the approved "
            "pre-registration; sample size, eligibility window, and "
            "reward verified against the registered protocol",
        ],
        "judge": [
            win.format(winner="idea-s1"), win.format(winner="idea-s1"),
            win.format(winner="idea-s2"), win.format(winner="idea-s2"),
            win.format(winner="idea-s1"), win.format(winner="idea-s1"),
        ],
        "troubleshooter": [accept_t],
        "verifier": [accept_v],
        "re-evaluation": [
            "the evidence decisively supports the working hypothesis: "
            "the pre-registered test is significant at adequate power "
            "and the Bayes factor is far beyond the conclusive bound",
        ],
        "panel-inspection": [
            "accept: the panel is legible, the axes are labelled, and "
            "the rendering matches the underlying data",
        ],
        "manuscript-agent": [_manuscript_json(cite_keys)],
        "reviewer": [
            json.dumps({"findings": [
                {"severity": "major", "location": "discussion",
                 "recommendation": "address the generalizability limits "
                                   "of the recruited sample"},
            ]}),
            json.dumps({"findings": []}),
        ],
    }


# --- analysis stage scripts -----------------------------------------------

_CLEANING = '''\
import csv
import glob
import os

os.makedirs("derived", exist_ok=True)
rows = []
for path in sorted(glob.glob(os.path.join("raw", "*.csv"))):
    with open(path) as fh:
        data = list(csv.DictReader(fh))
    pid = os.path.splitext(os.path.basename(path))[0]
    blocks = sorted({r["block"] for r in data})

    def block_acc(name):
        sub = [r for r in data if r["block"] == name]
        if not sub:
            return ""
        return round(sum(int(r["correct"]) for r in sub) / len(sub), 6)

    n = len(data)
    rows.append({
        "participant_id": pid,
        "blocks_complete": len(blocks),
        "n_trials": n,
        "mean_rt": round(sum(float(r["rt"]) for r in data) / n, 4) if n else "",
        "vwm_accuracy": block_acc("VWM"),
        "mrt_accuracy": block_acc("MRT"),
    })

fields = ["participant_id", "blocks_complete", "n_trials", "mean_rt",
          "vwm_accuracy", "mrt_accuracy"]
with open("derived/clean.csv", "w", newline="") as fh:
    writer = csv.DictWriter(fh, fieldnames=fields)
    writer.writeheader()
    writer.writerows(rows)
'''

_EXCLUSIONS = '''\
import csv

with open("derived/clean.csv") as fh:
    rows = list(csv.DictReader(fh))

included, excluded = [], []
for row in rows:
    if int(row["blocks_complete"]) < 3:
        row["excluded_by"] = "incomplete_blocks"
        excluded.append(row)
    else:
        included.append(row)

in_fields = list(rows[0].keys()) if rows else []
in_fields = [f for f in in_fields if f != "excluded_by"]
with open("derived/included.csv", "w", newline="") as fh:
    writer = csv.DictWriter(fh, fieldnames=in_fields)
    writer.writeheader()
    writer.writerows(included)
# keep the annotation column away from the numeric tail columns
ex_fields = ["participant_id", "excluded_by"] + in_fields[1:]
with open("derived/excluded.csv", "w", newline="") as fh:
    writer = csv.DictWriter(fh, fieldnames=ex_fields)
    writer.writeheader()
    writer.writerows(excluded)
'''

_DERIVED = '''\
import csv

with open("derived/included.csv") as fh:
    rows = list(csv.DictReader(fh))

with open("derived/aggregates.csv", "w", newline="") as fh:
    writer = csv.DictWriter(fh, fieldnames=[
        "participant_id", "mean_rt", "vwm_accuracy", "mrt_accuracy"])
    writer.writeheader()
    for row in rows:
        writer.writerow({
            "participant_id": row["participant_id"],
            "mean_rt": row["mean_rt"],
            "vwm_accuracy": row["vwm_accuracy"],
            "mrt_accuracy": row["mrt_accuracy"],
        })
'''

_STATS = '''\
import csv
import json
import math
import os

with open("derived/aggregates.csv") as fh:
    rows = list(csv.DictReader(fh))

xs = [float(r["vwm_accuracy"]) for r in rows]
ys = [float(r["mrt_accuracy"]) for r in rows]
n = len(xs)
mx = sum(xs) / n
my = sum(ys) / n
sxx = sum((x - mx) ** 2 for x in xs)
syy = sum((y - my) ** 2 for y in ys)
sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
r = sxy / math.sqrt(sxx * syy) if sxx > 0 and syy > 0 else 0.0

# numeric clamps keep the degenerate |r| -> 1 case finite
r2 = min(r * r, 1 - 1e-12)
if r2 >= 1 - 1e-9:
    p = 0.0
else:
    t = abs(r) * math.sqrt((n - 2) / (1 - r2))
    p = math.erfc(t / math.sqrt(2))  # normal approximation, large n
log_bf = -(n - 2) / 2 * math.log(1 - r2)
bf10 = 1e12 if log_bf > math.log(1e12) else math.exp(log_bf)

# precision via the Fisher-z interval width at the clamped estimate
z_half_width = 1.96 / math.sqrt(max(n - 3, 1))
precision_adequate = bool(2 * z_half_width < 0.5)

os.makedirs("reports", exist_ok=True)
with open("reports/stats.json", "w") as fh:
    json.dump({
        "test": "pearson_correlation", "n": n, "r": round(r, 6),
        "p": p, "alpha": 0.05, "bf10": bf10,
        "effect_direction": ("supports_theory" if r > 0 else
                             "contradicts_theory" if r < 0 else "null"),
        "precision_adequate": precision_adequate,
    }, fh, sort_keys=True, indent=2)
    fh.write("\\n")
'''

_INTERPRETATION = '''\
import json

with open("reports/stats.json") as fh:
    stats = json.load(fh)

supported = stats["p"] < stats["alpha"] and stats["r"] > 0
with open("reports/interpretation.json", "w") as fh:
    json.dump({
        "hypothesis_supported": supported,
        "n_analysed": stats["n"],
        "summary": ("the pre-registered correlation is positive and "
                    "significant" if supported else
                    "the pre-registered test did not reach significance"),
    }, fh, sort_keys=True, indent=2)
    fh.write("\\n")
'''

_ANALYSIS_SCRIPTS = {
    "cleaning.py": _CLEANING,
    "exclusions.py": _EXCLUSIONS,
    "derived_datasets.py": _DERIVED,
    "statistical_tests.py": _STATS,
    "interpretation.py": _INTERPRETATION,
}

# --- external-resource fixtures -------------------------------------------

_VENUES = ["Journal of Vision", "Cognition", "Memory and Cognition",
           "Psychological Science", "Attention, Perception and Psychophysics"]


def _resolver_fixture() -> dict:
    records = []
    known = {}
    for i in range(1, N_CITATIONS + 1):
        key = f"ref{i:02d}"
        doi = f"10.5555/rflow.{i:04d}"
        records.append({"key": key, "doi": doi})
        known[doi] = {
            "title": f"Study {i} of visuospatial memory and imagery",
            "venue": _VENUES[i % len(_VENUES)],
            "year": 1990 + (i % 35),
        }
    return {"records": records, "known": known}


def _corpus_fixture() -> list[dict]:
    topics = [
        ("sleep-dependent consolidation of procedural skill learning",
         "Overnight gains in finger tapping speed after training."),
        ("infant statistical learning of auditory sequences",
         "Eight-month-olds segment speech streams by transition "
         "probability alone."),
        ("gut microbiome composition and dietary fibre intake",
         "Fibre-rich diets shift short-chain fatty acid production."),
        ("reinforcement learning models of foraging decisions",
         "Patch-leaving times follow marginal value predictions."),
        ("syntactic priming in bilingual sentence production",
         "Cross-language structural repetition effects in picture "
         "description."),
    ]
    return [
        {"canonical_id": f"10.5555/corpus.{i:04d}", "title": title,
         "abstract": abstract, "metadata": {"year": 2015 + i}}
        for i, (title, abstract) in enumerate(topics, start=1)
    ]


_REGISTRY = {
    "instruments": [
        {"name": "VWM", "kind": "task",
         "constraints": {"set_sizes": [2, 4, 6]}},
        {"name": "MRT", "kind": "task",
         "constraints": {"angles": [45, 90, 135]}},
        {"name": "VVIQ2", "kind": "questionnaire",
         "constraints": {"items": 32}},
    ]
}


def make_dryrun_fixture(root: Path, run_id: str = "dryrun-001",
                        mode: str = "autonomous",
                        gate_policy: str = "auto") -> Path:
    """Write the full fixture directory; returns the config path."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    analysis_dir = root / "analysis"
    analysis_dir.mkdir(exist_ok=True)
    for name, content in _ANALYSIS_SCRIPTS.items():
        (analysis_dir / name).write_text(content)

    resolver = _resolver_fixture()
    cite_keys = [r["key"] for r in resolver["records"]]
    (root / "script.json").write_text(
        json.dumps(_script(cite_keys), indent=2) + "\n")
    (root / "resolver.json").write_text(
        json.dumps(resolver, sort_keys=True, indent=2) + "\n")
    (root / "registry.json").write_text(
        json.dumps(_REGISTRY, sort_keys=True, indent=2) + "\n")
    (root / "corpus.json").write_text(
        json.dumps(_corpus_fixture(), sort_keys=True, indent=2) + "\n")

    config = {
        "run_id": run_id,
        "mode": mode,
        "seed": 7,
        "out_dir": "runs",
        "gate_policy": gate_policy,
        "n_ideas": 4,
        "seed_guidance": "visuospatial cognition with desk-scale "
                         "behavioural instruments",
        "budgets": {"max_tokens": 60_000_000, "max_cost": 250.0,
                    "max_wall_clock_s": 172_800.0},
        "fixtures": {
            "script": "script.json",
            "resolver": "resolver.json",
            "registry": "registry.json",
            "corpus": "corpus.json",
            "analysis_dir": "analysis",
        },
        "platform": {"enrolled": 288, "empty_ids": [7],
                     "incomplete_ids": list(range(20, 30)),
                     "trials_per_block": 4},
        "power": {"family": "correlation", "effect_size": 0.2,
                  "alpha": 0.05, "target_power": 0.8},
        "recruitment": {"min_age": 18, "max_age": 45,
                        "normal_vision_required": True, "reward": 9.5,
                        "experiment_url":
                            "https://experiments.example.org/vwm-mrt"},
    }
    config_path = root / "config.yaml"
    config_path.write_text(yaml.safe_dump(config, sort_keys=True))
    return config_path
