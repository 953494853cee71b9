"""Synchronous message-passing simulator with per-message bit accounting.

Execution model: every node runs the same program. In each round the engine
invokes the program once per non-halted node with the messages sent to it in
the previous round (sorted by sender id), collects the outboxes, and delivers
them at the round barrier. A message is never visible in the round it was
sent. Node programs must be pure: same state and inbox, same result,
regardless of the order nodes are evaluated in.

SimTrace.rounds counts communication rounds: the number of delivery barriers
between invocations, with a floor of one. A final invocation that only reads
its inbox, halts, and sends nothing does not start a new round.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .graph import EdgeSubset, Graph

LOCAL = "local"
CONGEST = "congest"

# CONGEST payload allowance: 4 identifier-sized fields plus an 8-bit tag.
TAG_BITS = 8
MAX_ID_FIELDS = 4


def id_bits(n: int) -> int:
    """Bits needed for one node identifier in an n-node network (min 1)."""
    if n < 2:
        return 1
    return (n - 1).bit_length()


def congest_budget(n: int) -> int:
    return MAX_ID_FIELDS * id_bits(n) + TAG_BITS


def default_round_limit(n: int, mode: str) -> int:
    if mode == CONGEST:
        return 64 * (id_bits(n) + 1) if n > 1 else 64
    return n + 8


@dataclass(frozen=True, slots=True)
class Message:
    """One message: an 8-bit operation tag plus identifier-sized payload fields."""

    sender: int
    tag: str
    fields: tuple[int, ...] = ()


def message_bits(m: Message, n: int) -> int:
    """Encoded size of m in an n-node network."""
    return len(m.fields) * id_bits(n) + TAG_BITS


class NodeProgram:
    """Per-node protocol logic driven by the engine.

    init is called once per node before round 1; round is called once per
    round per non-halted node and returns (state, outbox, halted, output)
    where outbox maps neighbor id -> Message. Outputs must be
    JSON-serializable. Implementations must not share mutable state between
    nodes.
    """

    def init(self, node: int, t1_edges: tuple, t2_edges: tuple, neighbors: tuple):
        raise NotImplementedError

    def round(self, state, inbox: list[Message]):
        raise NotImplementedError


@dataclass(frozen=True, slots=True)
class RoundRecord:
    round: int
    msgs: int
    max_bits: int
    halted: bytes  # one flag byte per node, snapshot after this round's sweep


@dataclass(slots=True)
class SimTrace:
    n: int
    mode: str
    rounds: int
    records: list[RoundRecord] = field(default_factory=list)
    outputs: list = field(default_factory=list)

    def max_bits(self) -> int:
        return max((r.max_bits for r in self.records), default=0)

    def total_messages(self) -> int:
        return sum(r.msgs for r in self.records)

    def jsonl(self) -> str:
        lines = [
            json.dumps(
                {"round": r.round, "msgs": r.msgs, "max_bits": r.max_bits},
                separators=(",", ":"),
            )
            for r in self.records
        ]
        lines.append(json.dumps({"outputs": self.outputs}, separators=(",", ":")))
        return "\n".join(lines) + "\n"

    def write_jsonl(self, path: str) -> None:
        with open(path, "w") as f:
            f.write(self.jsonl())


class SimError(Exception):
    pass


class RoundLimitExceeded(SimError):
    """The protocol did not terminate within round_limit rounds."""

    def __init__(self, limit: int, trace: SimTrace):
        super().__init__(f"no termination within round_limit={limit} rounds")
        self.limit = limit
        self.trace = trace  # partial trace up to the failure


class CongestViolation(SimError):
    """A message exceeded the CONGEST bit budget."""

    def __init__(self, round_: int, sender: int, bits: int, limit: int):
        super().__init__(
            f"round {round_}: node {sender} sent a {bits}-bit message, budget is {limit}"
        )
        self.round = round_
        self.sender = sender
        self.bits = bits
        self.limit = limit


class ProtocolError(SimError):
    """A program broke the execution contract (bad sender, non-neighbor send,
    or a message addressed to a node that already halted)."""


def _incident_lists(g: Graph, s: "EdgeSubset | None") -> list[tuple]:
    inc: list[list] = [[] for _ in range(g.n)]
    if s is not None:
        for e in sorted(s.edges):
            inc[e[0]].append(e)
            inc[e[1]].append(e)
    return [tuple(x) for x in inc]


def run(
    g: Graph,
    program: NodeProgram,
    *,
    t1: "EdgeSubset | None" = None,
    t2: "EdgeSubset | None" = None,
    mode: str = CONGEST,
    round_limit: "int | None" = None,
    eval_seed: "int | None" = None,
) -> SimTrace:
    """Execute program on every node of g until all halt.

    t1 and t2 supply the per-node incident tree edges handed to init.
    eval_seed permutes the order nodes are evaluated in within each round;
    it must not affect the resulting trace (programs are pure).

    Raises RoundLimitExceeded, CongestViolation (CONGEST mode only), or
    ProtocolError.
    """
    if mode not in (LOCAL, CONGEST):
        raise ValueError(f"mode must be {LOCAL!r} or {CONGEST!r}, got {mode!r}")
    if round_limit is None:
        round_limit = default_round_limit(g.n, mode)
    if round_limit < 1:
        raise ValueError(f"round_limit must be >= 1, got {round_limit}")

    n = g.n
    inc1 = _incident_lists(g, t1)
    inc2 = _incident_lists(g, t2)
    nbrs = g._adj
    nbr_sets = [frozenset(a) for a in nbrs]
    states = [program.init(v, inc1[v], inc2[v], nbrs[v]) for v in range(n)]

    budget = congest_budget(n)
    congest = mode == CONGEST
    halted = bytearray(n)
    outputs: list = [None] * n
    inboxes: list[list[Message]] = [[] for _ in range(n)]
    active = list(range(n))
    rng = random.Random(eval_seed) if eval_seed is not None else None

    records: list[RoundRecord] = []
    barriers = 0
    round_fn = program.round

    while True:
        invocation = barriers + 1
        order = active
        if rng is not None and len(active) > 1:
            order = active[:]
            rng.shuffle(order)
        sent: list[tuple[int, Message]] = []
        msgs = 0
        max_bits = 0
        next_active = []
        for v in order:
            inbox = inboxes[v]
            if len(inbox) > 1:
                inbox.sort(key=lambda m: m.sender)
            state, outbox, halt, output = round_fn(states[v], inbox)
            if inbox:
                inboxes[v] = []
            states[v] = state
            if outbox:
                neighbor_set = nbr_sets[v]
                for u, m in outbox.items():
                    if type(m) is not Message or m.sender != v:
                        raise ProtocolError(
                            f"round {invocation}: node {v} emitted a message with sender "
                            f"{getattr(m, 'sender', None)!r}"
                        )
                    if u not in neighbor_set:
                        raise ProtocolError(
                            f"round {invocation}: node {v} sent to non-neighbor {u}"
                        )
                    bits = len(m.fields) * id_bits(n) + TAG_BITS
                    if congest and bits > budget:
                        raise CongestViolation(invocation, v, bits, budget)
                    if bits > max_bits:
                        max_bits = bits
                    msgs += 1
                    sent.append((u, m))
            if halt:
                halted[v] = 1
                outputs[v] = output
            else:
                next_active.append(v)
        if rng is not None:
            next_active.sort()

        if not next_active:
            # Terminal sweep: nothing left to deliver to.
            if sent:
                u = sent[0][0]
                raise ProtocolError(
                    f"round {invocation}: message to node {u}, which has halted"
                )
            if invocation == 1:
                records.append(RoundRecord(1, msgs, max_bits, bytes(halted)))
            break

        records.append(RoundRecord(invocation, msgs, max_bits, bytes(halted)))
        if barriers == round_limit:
            partial = SimTrace(n, mode, invocation, records, outputs)
            raise RoundLimitExceeded(round_limit, partial)
        barriers += 1
        for u, m in sent:
            if halted[u]:
                raise ProtocolError(
                    f"round {invocation}: message from node {m.sender} to node {u}, "
                    f"which has halted"
                )
            inboxes[u].append(m)
        active = next_active

    return SimTrace(n, mode, max(1, barriers), records, outputs)
