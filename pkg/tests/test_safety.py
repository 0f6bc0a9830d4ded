import json
import math
import random
import sys

import pytest
from hypothesis import given, settings, strategies as st

from researchflow.errors import LogCorrupt
from researchflow.safety import (
    AuditLog,
    ExecutionLimits,
    PackagePolicy,
    ScreenExpectations,
    Verdict,
    damerau_levenshtein,
    enforce_limits,
    screen_response,
    shannon_entropy,
    vet_package,
)

from oracles import dl_distance_bfs, dl_within_two, entropy_oracle


class TestEditDistance:
    def test_known_values(self):
        assert damerau_levenshtein("numpy", "nunpy") == 1
        assert damerau_levenshtein("numpy", "numpy") == 0
        assert damerau_levenshtein("ab", "ba") == 1
        assert damerau_levenshtein("ca", "abc") == 2  # true DL, not OSA's 3

    @settings(max_examples=200, deadline=None)
    @given(a=st.text(alphabet="abc", max_size=4), b=st.text(alphabet="abc", max_size=4))
    def test_matches_bfs_oracle(self, a, b):
        assert damerau_levenshtein(a, b) == dl_distance_bfs(a, b)

    @settings(max_examples=200, deadline=None)
    @given(a=st.text(alphabet="abcd", max_size=6),
           b=st.text(alphabet="abcd", max_size=6),
           c=st.text(alphabet="abcd", max_size=6))
    def test_metric_properties(self, a, b, c):
        assert damerau_levenshtein(a, b) == damerau_levenshtein(b, a)
        assert (damerau_levenshtein(a, b) == 0) == (a == b)
        assert damerau_levenshtein(a, c) <= (
            damerau_levenshtein(a, b) + damerau_levenshtein(b, c))

    def test_typosquat_window_matches_neighborhood_oracle(self):
        rng = random.Random(7)
        names = ["numpy", "pandas", "scipy", "requests", "flask", "django"]
        for _ in range(500):
            base = rng.choice(names)
            mutated = list(base)
            for _ in range(rng.randrange(0, 4)):
                op = rng.randrange(3)
                i = rng.randrange(len(mutated))
                if op == 0:
                    mutated[i] = rng.choice("abcdefghij")
                elif op == 1:
                    mutated.insert(i, rng.choice("abcdefghij"))
                elif len(mutated) > 1:
                    del mutated[i]
            cand = "".join(mutated)
            d = damerau_levenshtein(cand, base)
            assert (d <= 2) == dl_within_two(cand, base)


class TestScreening:
    def test_entropy_single_symbol(self):
        assert shannon_entropy("aaaa") == 0.0

    def test_entropy_uniform_two_symbol(self):
        assert shannon_entropy("abab") == pytest.approx(1.0)

    @given(st.text(max_size=300))
    def test_entropy_bounds(self, text):
        h = shannon_entropy(text)
        assert h >= 0.0
        alphabet = len(set(text)) or 1
        assert h <= math.log2(alphabet) + 1e-9
        assert h == pytest.approx(entropy_oracle(text), abs=1e-9)

    def test_url_rejected_when_disallowed(self):
        report = screen_response(
            "see http://evil.example for more",
            ScreenExpectations(urls_permitted=False, entropy_band=None))
        assert report.verdict == "reject"
        kinds = [e.kind for e in report.unexpected_elements]
        assert kinds == ["external_url"]

    def test_blacklisted_keyword(self):
        report = screen_response(
            "please run rm -rf / now",
            ScreenExpectations(blacklist=["rm -rf"], entropy_band=None))
        assert report.verdict == "reject"
        assert any(e.kind == "blacklisted_keyword"
                   for e in report.unexpected_elements)

    def test_unexpected_code_block(self):
        text = "here\n```python\nprint(1)\n```\n"
        report = screen_response(text, ScreenExpectations(
            code_permitted=False, entropy_band=None))
        assert report.verdict == "reject"
        permitted = screen_response(text, ScreenExpectations(
            code_permitted=True, entropy_band=None))
        assert permitted.verdict == "pass"
        assert permitted.syntax_valid

    def test_entropy_band_enforced_for_prose(self):
        report = screen_response("aaaaaaaaaaaaaaaa",
                                 ScreenExpectations(entropy_band=(0.5, 5.5)))
        assert report.verdict == "reject"

    def test_clean_prose_passes(self):
        report = screen_response(
            "The observed effect aligns with the hypothesised direction.")
        assert report.verdict == "pass"


FIXTURE_REGISTRY = {
    "numpy": {"downloads_per_month": 5_000_000, "publisher_verified": True,
              "description": "array computing",
              "releases": [{"version": "1.0", "age_days": 4000},
                           {"version": "2.0", "age_days": 100}],
              "dependencies": []},
    "nunpy": {"downloads_per_month": 12, "publisher_verified": False,
              "description": "array computing", "releases": [],
              "dependencies": []},
    "cleanpkg": {"downloads_per_month": 50_000, "publisher_verified": True,
                 "description": "utilities",
                 "releases": [{"version": "0.1", "age_days": 400},
                              {"version": "0.2", "age_days": 20}],
                 "dependencies": ["evil-miner"]},
    "evil-miner": {"downloads_per_month": 90_000, "publisher_verified": True,
                   "description": "totally fine",
                   "releases": [{"version": "1.0", "age_days": 300},
                                {"version": "1.1", "age_days": 10}],
                   "dependencies": []},
    "loopy-a": {"downloads_per_month": 50_000, "publisher_verified": True,
                "description": "x", "releases": [{"version": "1", "age_days": 100},
                                                 {"version": "2", "age_days": 50}],
                "dependencies": ["loopy-b"]},
    "loopy-b": {"downloads_per_month": 50_000, "publisher_verified": True,
                "description": "x", "releases": [{"version": "1", "age_days": 100},
                                                 {"version": "2", "age_days": 50}],
                "dependencies": ["loopy-a"]},
}

POLICY = PackagePolicy(whitelist=["numpy", "pandas", "scipy"],
                       blacklist=["evil-miner"])


class TestVetPackage:
    def test_whitelisted_allow(self):
        report = vet_package("numpy", "2.0", FIXTURE_REGISTRY, POLICY)
        assert report.verdict is Verdict.ALLOW

    def test_typosquat_deny(self):
        report = vet_package("nunpy", "1.0", FIXTURE_REGISTRY, POLICY)
        assert report.verdict is Verdict.DENY
        assert report.typosquat.nearest_whitelisted == "numpy"
        assert report.typosquat.edit_distance == 1

    def test_transitive_blacklist_deny(self):
        report = vet_package("cleanpkg", "0.2", FIXTURE_REGISTRY, POLICY)
        assert report.verdict is Verdict.DENY
        assert report.dependencies[0].blacklist_hit

    def test_cycle_terminates(self):
        report = vet_package("loopy-a", "2", FIXTURE_REGISTRY, POLICY)
        assert report.verdict in (Verdict.ALLOW, Verdict.REVIEW)

    def test_registry_unavailable_reviews(self):
        report = vet_package("ghost", "1", FIXTURE_REGISTRY, POLICY)
        assert report.verdict is Verdict.REVIEW

    def test_verdict_monotone_in_dependencies(self):
        # Parent verdict is at least as strict as its worst dependency.
        report = vet_package("cleanpkg", "0.2", FIXTURE_REGISTRY, POLICY)
        order = {Verdict.ALLOW: 0, Verdict.REVIEW: 1, Verdict.DENY: 2}
        worst = max(order[d.verdict] for d in report.dependencies)
        assert order[report.verdict] >= worst


class TestSandbox:
    def test_timeout_kill(self, tmp_path):
        script = tmp_path / "sleepy.py"
        script.write_text("import time\nwhile True: time.sleep(0.1)\n")
        limits = ExecutionLimits(requested_timeout_s=1.0, ceiling_s=60.0)
        result = enforce_limits([sys.executable, "sleepy.py"], tmp_path, limits)
        assert result.status == "timeout"
        assert result.wall_time_s < 1.0 + 0.5

    def test_effective_timeout_min_rule(self):
        limits = ExecutionLimits(requested_timeout_s=120, ceiling_s=60)
        assert limits.effective_timeout_s == 60

    def test_storage_cap(self, tmp_path):
        script = tmp_path / "writer.py"
        script.write_text(
            "import time\n"
            "with open('blob.bin','wb') as f:\n"
            "    for _ in range(200):\n"
            "        f.write(b'x'*65536); f.flush(); time.sleep(0.01)\n")
        limits = ExecutionLimits(requested_timeout_s=30, ceiling_s=60,
                                 storage_cap_bytes=1024 * 1024)
        result = enforce_limits([sys.executable, "writer.py"], tmp_path, limits)
        assert result.status == "storage_exceeded"

    def test_happy_path_captures_output(self, tmp_path):
        script = tmp_path / "ok.py"
        script.write_text("print('hello')\n")
        result = enforce_limits([sys.executable, "ok.py"], tmp_path,
                                ExecutionLimits(requested_timeout_s=10))
        assert result.ok
        assert result.stdout.strip() == "hello"


class TestAuditLog:
    def test_first_offset_zero(self, tmp_path):
        log = AuditLog(tmp_path / "audit.jsonl")
        assert log.append("master", "run_started") == 0
        assert log.append("master", "stage_done") == 1

    def test_contiguous_offsets(self, tmp_path):
        log = AuditLog(tmp_path / "audit.jsonl")
        offsets = [log.append("a", "act", {"i": i}) for i in range(100)]
        assert offsets == list(range(100))
        reopened = AuditLog(tmp_path / "audit.jsonl")
        assert len(reopened) == 100

    def test_tamper_detected_at_exact_offset(self, tmp_path):
        path = tmp_path / "audit.jsonl"
        log = AuditLog(path)
        for i in range(10):
            log.append("a", "act", {"i": i})
        lines = path.read_text().splitlines()
        rec = json.loads(lines[4])
        rec["action"] = "tampered"
        lines[4] = json.dumps(rec, sort_keys=True)
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(LogCorrupt) as exc:
            AuditLog(path)
        assert exc.value.offset == 4
