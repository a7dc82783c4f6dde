"""Synchronous round engine for an all-to-all message-passing network.

n nodes are pairwise connected; in one round every ordered pair of nodes
may carry at most one fixed-size word. Bulk traffic goes through `route`,
in one of two modes:

    CHARGED   no per-round simulation; the demand is priced analytically at
              ceil(out_max / n) + ceil(in_max / n) rounds, the cost of a
              load-balanced constant-round delivery scheme.
    EXPLICIT  a two-phase relay (spread over intermediate nodes, then
              forward) is executed round by round, with the per-pair
              capacity asserted on every round.

Both modes deliver the exact multiset of the demand, each word annotated
with its true source, and in the same deterministic order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Iterable, Mapping, NamedTuple, Sequence

from .graph import Edge

WORD_BITS = 160  # 2-bit tag, two 32-bit ids, 64-bit weight, slack
COUNT_LIMIT = 2**64
CONTROL_LIMIT = 2**32
DEFAULT_ROUND_LIMIT = 10**6


class WordTag(Enum):
    EDGE = "edge"
    COUNT = "count"
    CONTROL = "control"


class MessageWord(NamedTuple):
    """One fixed-size word: a tag plus an Edge or a bounded integer."""

    tag: WordTag
    payload: Edge | int

    @classmethod
    def edge(cls, e: Edge) -> "MessageWord":
        if not isinstance(e, Edge):
            raise ValueError(f"EDGE payload must be an Edge, got {type(e).__name__}")
        return cls(WordTag.EDGE, e)

    @classmethod
    def count(cls, value: int) -> "MessageWord":
        if not 0 <= value < COUNT_LIMIT:
            raise ValueError(f"COUNT payload out of range: {value}")
        return cls(WordTag.COUNT, value)

    @classmethod
    def control(cls, value: int) -> "MessageWord":
        if not 0 <= value < CONTROL_LIMIT:
            raise ValueError(f"CONTROL payload out of range: {value}")
        return cls(WordTag.CONTROL, value)


class RoutingMode(Enum):
    CHARGED = "charged"
    EXPLICIT = "explicit"


class CapacityViolation(Exception):
    """More than one word queued on an ordered (sender, destination) pair."""

    def __init__(self, sender: int, dst: int) -> None:
        self.sender = sender
        self.dst = dst
        super().__init__(f"capacity violation on ordered pair ({sender}, {dst})")


class RoundLimitExceeded(Exception):
    """A protocol ran past the configured round limit (likely livelock)."""


@dataclass(frozen=True)
class LoadProfile:
    """Per-node extremes of a routing demand."""

    out_max: int
    in_max: int
    total: int


def load_profile(demand: Sequence[tuple[int, int, Any]], n: int) -> LoadProfile:
    """Recompute the load profile of a demand, validating endpoints."""
    out: dict[int, int] = {}
    inn: dict[int, int] = {}
    for src, dst, _word in demand:
        if not (0 <= src < n and 0 <= dst < n):
            raise ValueError(f"endpoint out of range: ({src}, {dst}) with n={n}")
        out[src] = out.get(src, 0) + 1
        inn[dst] = inn.get(dst, 0) + 1
    return LoadProfile(
        out_max=max(out.values(), default=0),
        in_max=max(inn.values(), default=0),
        total=len(demand),
    )


def charged_round_cost(profile: LoadProfile, n: int) -> int:
    """Rounds charged for a demand: ceil(out_max/n) + ceil(in_max/n), 0 if empty."""
    if profile.total == 0:
        return 0
    return -(-profile.out_max // n) + -(-profile.in_max // n)


@dataclass(frozen=True)
class PhaseCounters:
    rounds_charged: int = 0
    rounds_explicit: int = 0
    messages: int = 0


@dataclass(frozen=True)
class RunMetrics:
    """Cumulative cost of everything an engine has executed.

    rounds_explicit is None when any part of the run was charged without
    being simulated (CHARGED-mode routing), since the simulated round count
    is then not a complete execution trace.
    """

    rounds_charged: int
    rounds_explicit: int | None
    messages_total: int
    phases: Mapping[str, PhaseCounters] = field(default_factory=dict)


# A node program maps (state, inbox) to (state, sends, halted).
NodeProgram = Callable[
    [Any, list[tuple[int, "MessageWord"]]],
    tuple[Any, Iterable[tuple[int, "MessageWord"]], bool],
]


class CongestedClique:
    """n fully connected nodes, one word per ordered pair per round."""

    def __init__(
        self,
        n: int,
        mode: RoutingMode = RoutingMode.CHARGED,
        round_limit: int = DEFAULT_ROUND_LIMIT,
    ) -> None:
        if n < 1:
            raise ValueError("engine needs n >= 1")
        self.n = n
        self.mode = mode
        self.round_limit = round_limit
        self._charged = 0
        self._explicit = 0
        self._messages = 0
        self._explicit_complete = True
        self._phase = "main"
        self._phases: dict[str, list[int]] = {}

    # -- accounting ---------------------------------------------------

    def set_phase(self, name: str) -> None:
        self._phase = name

    def _bump(self, charged: int = 0, explicit: int = 0, messages: int = 0) -> None:
        self._charged += charged
        self._explicit += explicit
        self._messages += messages
        bucket = self._phases.setdefault(self._phase, [0, 0, 0])
        bucket[0] += charged
        bucket[1] += explicit
        bucket[2] += messages

    @property
    def metrics(self) -> RunMetrics:
        return RunMetrics(
            rounds_charged=self._charged,
            rounds_explicit=self._explicit if self._explicit_complete else None,
            messages_total=self._messages,
            phases={name: PhaseCounters(*vals) for name, vals in self._phases.items()},
        )

    # -- rounds -------------------------------------------------------

    def _exchange(
        self,
        outboxes: Mapping[int, Iterable[tuple[int, Any]]],
        *,
        charge: bool,
    ) -> dict[int, list[tuple[int, Any]]]:
        n = self.n
        inboxes: dict[int, list[tuple[int, Any]]] = {v: [] for v in range(n)}
        words = 0
        for sender in sorted(outboxes):
            if not 0 <= sender < n:
                raise ValueError(f"sender out of range: {sender}")
            used: set[int] = set()
            for dst, payload in outboxes[sender]:
                if not 0 <= dst < n:
                    raise ValueError(f"destination out of range: {dst}")
                if dst in used:
                    raise CapacityViolation(sender, dst)
                used.add(dst)
                inboxes[dst].append((sender, payload))
                words += 1
        # senders were scanned in ascending order, so inboxes arrive sorted
        self._bump(charged=1 if charge else 0, explicit=1, messages=words)
        return inboxes

    def run_round(
        self, outboxes: Mapping[int, Iterable[tuple[int, MessageWord]]]
    ) -> dict[int, list[tuple[int, MessageWord]]]:
        """Execute one synchronous round; costs 1 in both ledgers."""
        return self._exchange(outboxes, charge=True)

    def broadcast(self, src: int, word: MessageWord) -> dict[int, list[tuple[int, MessageWord]]]:
        """One node sends the same word to all n nodes in a single round."""
        return self.run_round({src: [(dst, word) for dst in range(self.n)]})

    # -- bulk routing ---------------------------------------------------

    def route(
        self, demand: Iterable[tuple[int, int, MessageWord]]
    ) -> dict[int, list[tuple[int, MessageWord]]]:
        """Deliver an arbitrary demand of (src, dst, word) triples.

        Returns the full inbox map; each entry is (source, word), sorted by
        (source, position in the demand). The charge is
        ceil(out_max/n) + ceil(in_max/n) regardless of mode; EXPLICIT mode
        additionally simulates a two-phase relay round by round.
        """
        items = list(demand)
        profile = load_profile(items, self.n)
        cost = charged_round_cost(profile, self.n)
        if self.mode is RoutingMode.CHARGED:
            buckets: dict[int, list[tuple[int, int, MessageWord]]] = {
                v: [] for v in range(self.n)
            }
            for seq, (src, dst, word) in enumerate(items):
                buckets[dst].append((src, seq, word))
            if cost:
                self._explicit_complete = False
            self._bump(charged=cost, messages=profile.total)
            return {
                v: [(src, word) for src, _seq, word in sorted(triples, key=lambda t: t[:2])]
                for v, triples in buckets.items()
            }
        return self._route_relay(items, cost)

    def _route_relay(
        self, items: list[tuple[int, int, MessageWord]], cost: int
    ) -> dict[int, list[tuple[int, MessageWord]]]:
        n = self.n
        # envelopes carry (true source, demand position, final destination, word)
        by_src: dict[int, list[tuple[int, int, int, MessageWord]]] = {}
        for seq, (src, dst, word) in enumerate(items):
            by_src.setdefault(src, []).append((src, seq, dst, word))
        for src in by_src:
            by_src[src].sort(key=lambda env: (env[2], env[1]))
        max_out = max((len(v) for v in by_src.values()), default=0)
        held: list[dict[int, deque]] = [dict() for _ in range(n)]
        rounds_a = -(-max_out // n)
        for r in range(rounds_a):
            outboxes: dict[int, list[tuple[int, Any]]] = {}
            for src in sorted(by_src):
                batch = by_src[src][r * n : (r + 1) * n]
                if batch:
                    # word j of a source goes to relay (src + j) mod n
                    outboxes[src] = [
                        ((src + r * n + i) % n, env) for i, env in enumerate(batch)
                    ]
            for relay, arrived in self._exchange(outboxes, charge=False).items():
                for _sender, env in arrived:
                    held[relay].setdefault(env[2], deque()).append(env)
        inboxes: dict[int, list] = {v: [] for v in range(n)}
        while any(held):
            outboxes = {}
            for relay in range(n):
                queues = held[relay]
                if not queues:
                    continue
                sends = [(dst, queues[dst].popleft()) for dst in sorted(queues)]
                for dst in [d for d in queues if not queues[d]]:
                    del queues[dst]
                outboxes[relay] = sends
            for dst, arrived in self._exchange(outboxes, charge=False).items():
                for _relay, env in arrived:
                    inboxes[dst].append(env)
        self._bump(charged=cost)
        return {
            v: [(env[0], env[3]) for env in sorted(envs, key=lambda env: env[:2])]
            for v, envs in inboxes.items()
        }

    def broadcast_all(
        self, words_by_src: Mapping[int, Sequence[MessageWord]]
    ) -> list[tuple[int, MessageWord]]:
        """Every listed word reaches every node.

        Returns the common inbox, sorted by (source, position); all nodes see
        the identical list. Charged as max_words_per_source + ceil(total / n):
        spreading each source's list over the network and then disseminating
        one balanced share per node per round. EXPLICIT mode simulates the
        simpler full-fanout schedule (one word from each source to all n nodes
        per round), which fits the same per-pair capacity.
        """
        senders = {src: list(words) for src, words in sorted(words_by_src.items()) if words}
        for src in senders:
            if not 0 <= src < self.n:
                raise ValueError(f"sender out of range: {src}")
        total = sum(len(words) for words in senders.values())
        if total == 0:
            return []
        max_len = max(len(words) for words in senders.values())
        cost = max_len + -(-total // self.n)
        if self.mode is RoutingMode.CHARGED:
            self._explicit_complete = False
            self._bump(charged=cost, messages=total * self.n)
        else:
            for r in range(max_len):
                outboxes = {
                    src: [(dst, words[r]) for dst in range(self.n)]
                    for src, words in senders.items()
                    if r < len(words)
                }
                self._exchange(outboxes, charge=False)
            self._bump(charged=cost)
        return [(src, word) for src, words in senders.items() for word in words]

    # -- generic protocols ---------------------------------------------

    def run_protocol(
        self, programs: Sequence[NodeProgram], states: Sequence[Any] | None = None
    ) -> tuple[list[Any], RunMetrics]:
        """Drive per-node step functions until every one has halted.

        Each live program is stepped once per round with its latest inbox and
        returns (new state, sends, halted). Halted nodes neither step nor
        send; words addressed to them are dropped.
        """
        if len(programs) != self.n:
            raise ValueError(f"expected {self.n} programs, got {len(programs)}")
        current: list[Any] = list(states) if states is not None else [None] * self.n
        inboxes: dict[int, list[tuple[int, MessageWord]]] = {v: [] for v in range(self.n)}
        halted = [False] * self.n
        rounds = 0
        while True:
            outboxes: dict[int, list[tuple[int, MessageWord]]] = {}
            for v, program in enumerate(programs):
                if halted[v]:
                    continue
                current[v], sends, done = program(current[v], inboxes[v])
                halted[v] = done
                sends = list(sends)
                if sends:
                    outboxes[v] = sends
            if not outboxes and all(halted):
                return current, self.metrics
            if rounds >= self.round_limit:
                raise RoundLimitExceeded(f"no halt after {rounds} rounds")
            inboxes = self.run_round(outboxes)
            rounds += 1
