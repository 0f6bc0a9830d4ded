"""Per-provider sliding-window rate limiting.

Requests and tokens are tracked over a 60 second sliding window; a burst
allowance sits on top of the steady-state limit. The clock and sleeper
are injectable so tests can drive simulated time.
"""

from __future__ import annotations

import threading
import time
from collections import deque
from dataclasses import dataclass
from typing import Callable

from researchflow.errors import RateLimitTimeout

WINDOW_S = 60.0


@dataclass(frozen=True)
class RateLimitPolicy:
    requests_per_minute: int
    tokens_per_minute: int
    burst: int = 0

    def __post_init__(self):
        if self.requests_per_minute <= 0 or self.tokens_per_minute <= 0:
            raise ValueError("rate limit capacities must be > 0")


class SlidingWindowLimiter:
    def __init__(self, policies: dict[str, RateLimitPolicy],
                 clock: Callable[[], float] = time.monotonic,
                 sleeper: Callable[[float], None] = time.sleep):
        self.policies = dict(policies)
        self.clock = clock
        self.sleeper = sleeper
        self._requests: dict[str, deque] = {}
        self._tokens: dict[str, deque] = {}
        self._lock = threading.Lock()

    def _evict(self, provider: str, now: float) -> None:
        for q in (self._requests.setdefault(provider, deque()),
                  self._tokens.setdefault(provider, deque())):
            while q and q[0][0] <= now - WINDOW_S:
                q.popleft()

    def _would_grant(self, provider: str, tokens: int, now: float) -> bool:
        policy = self.policies[provider]
        reqs = self._requests[provider]
        toks = self._tokens[provider]
        req_used = len(reqs)
        tok_used = sum(n for _, n in toks)
        return (req_used < policy.requests_per_minute + policy.burst
                and tok_used + tokens <= policy.tokens_per_minute + policy.burst)

    def acquire(self, provider: str, tokens: int = 0,
                max_wait_s: float = 30.0) -> None:
        """Block until the provider window admits the call, or raise
        RateLimitTimeout after max_wait_s of simulated waiting."""
        if provider not in self.policies:
            return  # unthrottled provider (e.g. scripted backend)
        waited = 0.0
        while True:
            with self._lock:
                now = self.clock()
                self._evict(provider, now)
                if self._would_grant(provider, tokens, now):
                    self._requests[provider].append((now, 1))
                    if tokens:
                        self._tokens[provider].append((now, tokens))
                    return
            if waited >= max_wait_s:
                raise RateLimitTimeout(
                    f"rate limit wait exceeded {max_wait_s}s for {provider!r}")
            self.sleeper(0.05)
            waited += 0.05

    def granted_in_window(self, provider: str) -> int:
        with self._lock:
            self._evict(provider, self.clock())
            return len(self._requests.get(provider, ()))
