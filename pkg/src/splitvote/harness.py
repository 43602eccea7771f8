"""Deterministic election simulation: config, schedule, ledger, reports.

A run is a pure function of its config and seed.  Every source of
randomness is a named stream derived from the seed, the cast schedule is
precomputed before any message flows, and the harness keeps an intent
ledger in parallel with the servers so the final tally can be checked
against an independently maintained prediction.  Reports come in two
renderings: a canonical record format that is byte-identical across runs
(no wall-clock time), and a human table that includes timing.

Mid-run state snapshots serialize to canonical JSON and restore to the
same future: resuming a snapshot replays the exact messages, tokens, and
shares the uninterrupted run would have produced.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from random import Random
from time import perf_counter
from typing import Sequence

from .adversary import (
    ANY_VALID,
    TARGETED,
    AttackOutcome,
    CollusionScenario,
    attack_any_valid,
    attack_targeted,
)
from .blindsig import SigningKey, random_signing_key
from .errors import ConfigError, VotingError
from .modmath import FieldParams, generate_params, params_to_text
from .protocol import (
    BOOTH_MODES,
    KEY_COPY,
    ZK_RELAY,
    BallotSheet,
    CastRecord,
    Credential,
    Message,
    MessageBus,
    PollingBooth,
    RegistrationAuthority,
    TallyResult,
    VoteServer,
    Voter,
    VoterIdentity,
    key_verifier,
    make_ballot_sheet,
    relay_verifier,
    tally,
)

SNAPSHOT_KIND = "splitvote-snapshot"
SNAPSHOT_FORMAT = 1


def stream(seed: int, label: str) -> Random:
    """An independent deterministic generator for one named purpose.

    Streams keep consumers decoupled: drawing more ballot values does not
    shift any voter's blinding factors, so runs stay comparable across
    config tweaks.
    """
    digest = hashlib.sha256(f"{seed}/{label}".encode("ascii")).digest()
    return Random(int.from_bytes(digest[:8], "big"))


def _parse_pairs(text: str) -> dict[str, str]:
    pairs: dict[str, str] = {}
    problems: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            problems.append(f"line {lineno}: expected key = value")
            continue
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key or not value:
            problems.append(f"line {lineno}: expected key = value")
            continue
        if key in pairs:
            problems.append(f"line {lineno}: duplicate key {key}")
            continue
        pairs[key] = value
    if problems:
        raise ConfigError(problems)
    return pairs


def _take_int(pairs, key, problems, minimum=None) -> int | None:
    raw = pairs.pop(key, None)
    if raw is None:
        return None
    try:
        value = int(raw)
    except ValueError:
        problems.append(f"{key}: not an integer: {raw!r}")
        return None
    if minimum is not None and value < minimum:
        problems.append(f"{key}: must be at least {minimum}")
        return None
    return value


def _require_int(pairs, key, problems, minimum, fallback) -> int:
    if key not in pairs:
        problems.append(f"missing key: {key}")
        return fallback
    value = _take_int(pairs, key, problems, minimum)
    return fallback if value is None else value


def _take_fraction(pairs, key, problems, default=0.0) -> float:
    raw = pairs.pop(key, None)
    if raw is None:
        return default
    try:
        value = float(raw)
    except ValueError:
        problems.append(f"{key}: not a number: {raw!r}")
        return default
    if not 0.0 <= value <= 1.0:
        problems.append(f"{key}: must lie in [0, 1]")
        return default
    return value


def _take_field(pairs, problems) -> tuple[FieldParams | None, int | None]:
    bits = _take_int(pairs, "field_bits", problems, minimum=5)
    explicit = [pairs.pop(key, None) for key in ("p", "q", "g")]
    if bits is not None and any(v is not None for v in explicit):
        problems.append("give either field_bits or p, q, g, not both")
        return None, None
    if bits is not None:
        return None, bits
    if all(v is None for v in explicit):
        problems.append("missing field: give field_bits or p, q, g")
        return None, None
    if any(v is None for v in explicit):
        problems.append("explicit field needs all three of p, q, g")
        return None, None
    try:
        return FieldParams(int(explicit[0]), int(explicit[1]), int(explicit[2])), None
    except ValueError as exc:
        problems.append(f"field: {exc}")
        return None, None


def _take_candidates(pairs, problems) -> tuple[str, ...]:
    raw = pairs.pop("candidates", None)
    if raw is None:
        problems.append("missing key: candidates")
        return ()
    if raw.isdigit():
        count = int(raw)
        if count < 2:
            problems.append("candidates: need at least two")
            return ()
        return tuple(f"option-{i + 1}" for i in range(count))
    labels = tuple(part.strip() for part in raw.split(","))
    if any(not label for label in labels):
        problems.append("candidates: empty label")
        return ()
    if len(labels) < 2:
        problems.append("candidates: need at least two")
        return ()
    if len(set(labels)) != len(labels):
        problems.append("candidates: duplicate label")
        return ()
    return labels


@dataclass(frozen=True)
class ElectionConfig:
    params: FieldParams | None
    field_bits: int | None
    n_voters: int
    k: int
    candidates: tuple[str, ...]
    recast_fraction: float = 0.0
    incomplete_fraction: float = 0.0
    booth_mode: str = KEY_COPY
    seed: int = 0

    def echo_lines(self) -> tuple[str, ...]:
        """Canonical key = value lines; parsing them reproduces the config."""
        lines = []
        if self.params is not None:
            lines += [f"p = {self.params.p}", f"q = {self.params.q}", f"g = {self.params.g}"]
        else:
            lines.append(f"field_bits = {self.field_bits}")
        lines += [
            f"voters = {self.n_voters}",
            f"servers = {self.k}",
            f"candidates = {','.join(self.candidates)}",
            f"recast_fraction = {self.recast_fraction!r}",
            f"incomplete_fraction = {self.incomplete_fraction!r}",
            f"booth = {self.booth_mode}",
            f"seed = {self.seed}",
        ]
        return tuple(lines)


def parse_election_config(text: str) -> ElectionConfig:
    pairs = _parse_pairs(text)
    problems: list[str] = []
    params, bits = _take_field(pairs, problems)
    voters = _require_int(pairs, "voters", problems, minimum=0, fallback=0)
    servers = _require_int(pairs, "servers", problems, minimum=2, fallback=2)
    candidates = _take_candidates(pairs, problems)
    recast = _take_fraction(pairs, "recast_fraction", problems)
    incomplete = _take_fraction(pairs, "incomplete_fraction", problems)
    booth_mode = pairs.pop("booth", KEY_COPY)
    if booth_mode not in BOOTH_MODES:
        problems.append(f"booth: unknown mode {booth_mode!r}")
    seed = _take_int(pairs, "seed", problems)
    for key in pairs:
        problems.append(f"unknown key: {key}")
    if problems:
        raise ConfigError(problems)
    return ElectionConfig(
        params, bits, voters, servers, candidates,
        recast, incomplete, booth_mode, seed or 0,
    )


@dataclass(frozen=True)
class CastEvent:
    voter_index: int
    candidate_index: int
    deliver_count: int


class IntentLedger:
    """Parallel bookkeeping of what every server should be storing.

    The ledger applies the same acceptance rule the servers do, so after
    every cast the two must agree share for share; ``predict`` then mirrors
    the tally over the ledger's copy.  Divergence at any point is a bug in
    one of the two, which is the point of keeping both.
    """

    def __init__(self, k: int):
        self.k = k
        self.stores: list[dict[int, tuple[int, int]]] = [{} for _ in range(k)]

    def apply(
        self, anon_id: int, version: int, shares: Sequence[int], deliver_count: int
    ) -> list[bool]:
        decisions = []
        for index in range(deliver_count):
            stored = self.stores[index].get(anon_id)
            accept = stored is None or version > stored[0]
            if accept:
                self.stores[index][anon_id] = (version, shares[index])
            decisions.append(accept)
        return decisions

    def predict(self, sheet: BallotSheet) -> TallyResult:
        ids = sorted({anon for store in self.stores for anon in store})
        index = sheet.signed_index()
        p = sheet.ballots[0].params.p
        counts = {label: 0 for label in sheet.candidates}
        invalid = 0
        inconsistent = 0
        for anon in ids:
            records = [store.get(anon) for store in self.stores]
            if any(r is None for r in records) or len({r[0] for r in records}) != 1:
                inconsistent += 1
                continue
            product = 1
            for _, share in records:
                product = product * share % p
            label = index.get(product)
            if label is None:
                invalid += 1
            else:
                counts[label] += 1
        return TallyResult(counts, invalid, inconsistent, len(ids))

    def snapshot(self) -> list[dict[str, list[int]]]:
        return [
            {str(anon): list(entry) for anon, entry in sorted(store.items())}
            for store in self.stores
        ]

    @classmethod
    def restore(cls, k: int, data: list[dict[str, list[int]]]) -> "IntentLedger":
        ledger = cls(k)
        ledger.stores = [
            {int(anon): (entry[0], entry[1]) for anon, entry in store.items()}
            for store in data
        ]
        return ledger


def _rng_state_to_json(state) -> list:
    return [state[0], list(state[1]), state[2]]


def _rng_state_from_json(data) -> tuple:
    return (data[0], tuple(data[1]), data[2])


def _restored_rng(data) -> Random:
    rng = Random()
    rng.setstate(_rng_state_from_json(data))
    return rng


@dataclass
class RunReport:
    config_lines: tuple[str, ...]
    params: FieldParams
    candidates: tuple[str, ...]
    result: TallyResult
    predicted: TallyResult
    registered: int
    distinct_credentials: int
    casts_attempted: int
    shares_accepted: int
    message_count: int
    warnings: tuple[str, ...]
    duration: float

    def agreement(self) -> bool:
        return self.result == self.predicted

    def differences(self) -> list[str]:
        """Where the tally and the ledger prediction disagree; empty when
        the run is healthy."""
        diffs = []
        for label in self.candidates:
            a, b = self.result.counts[label], self.predicted.counts[label]
            if a != b:
                diffs.append(f"count {label}: tally {a} != ledger {b}")
        for name in ("invalid", "inconsistent", "distinct_ids"):
            a, b = getattr(self.result, name), getattr(self.predicted, name)
            if a != b:
                diffs.append(f"{name}: tally {a} != ledger {b}")
        return diffs

    def render_records(self) -> str:
        """Canonical report: identical bytes for identical config and seed."""
        lines = ["[config]", *self.config_lines, ""]
        lines += [
            "[field]",
            f"p = {self.params.p}",
            f"q = {self.params.q}",
            f"g = {self.params.g}",
            "",
        ]
        lines += [
            "[run]",
            f"registered = {self.registered}",
            f"distinct_credentials = {self.distinct_credentials}",
            f"casts_attempted = {self.casts_attempted}",
            f"shares_accepted = {self.shares_accepted}",
            f"messages = {self.message_count}",
            "",
        ]
        lines += ["[tally]", *self.result.render_lines(self.candidates), ""]
        lines += [
            "[ledger]",
            *self.predicted.render_lines(self.candidates),
            f"agreement = {1 if self.agreement() else 0}",
            "",
        ]
        lines.append("[warnings]")
        lines += list(self.warnings) or ["none"]
        return "\n".join(lines) + "\n"

    def render_table(self) -> str:
        rows = [
            ("field", f"p={self.params.p} q={self.params.q} g={self.params.g}"),
            ("registered", str(self.registered)),
            ("credentials", str(self.distinct_credentials)),
            ("casts", str(self.casts_attempted)),
            ("messages", str(self.message_count)),
        ]
        for label in self.candidates:
            rows.append((label, str(self.result.counts[label])))
        rows += [
            ("invalid", str(self.result.invalid)),
            ("inconsistent", str(self.result.inconsistent)),
            ("ledger agrees", "yes" if self.agreement() else "NO"),
            ("warnings", str(len(self.warnings))),
            ("wall time", f"{self.duration:.3f}s"),
        ]
        width = max(len(name) for name, _ in rows)
        return "\n".join(f"{name:<{width}}  {value}" for name, value in rows) + "\n"


class ElectionRun:
    """One end-to-end simulated election, steppable cast by cast."""

    def __init__(self, config: ElectionConfig, seed: int | None = None):
        self.config = config
        self.seed = config.seed if seed is None else seed
        if config.params is not None:
            self.params = config.params
        else:
            self.params = generate_params(config.field_bits, stream(self.seed, "field"))
        self.bus = MessageBus()
        self.warnings: list[str] = []
        self.cursor = 0
        self.shares_accepted = 0
        self.finished = False
        self.result: TallyResult | None = None
        self.predicted: TallyResult | None = None
        self._setup()
        self.schedule = self._build_schedule()
        self.ledger = IntentLedger(config.k)

    def _setup(self) -> None:
        config = self.config
        self.key = random_signing_key(self.params, stream(self.seed, "authority-key"))
        self.sheet = make_ballot_sheet(config.candidates, self.key, stream(self.seed, "ballots"))
        roster = [VoterIdentity(f"V{i:05d}") for i in range(config.n_voters)]
        self.authority = RegistrationAuthority(self.key, roster, {"main": self.sheet})
        self.booth = PollingBooth(
            self.params,
            config.booth_mode,
            stream(self.seed, "booth"),
            key=self.key if config.booth_mode == KEY_COPY else None,
            authority=self.authority if config.booth_mode == ZK_RELAY else None,
        )
        self.servers = [VoteServer(i, self.booth) for i in range(config.k)]
        self.voters: list[Voter] = []
        drawn: dict[int, int] = {}
        for i, identity in enumerate(roster):
            voter = Voter(identity, self.params, self.key.public_key(), stream(self.seed, f"voter/{i}"))
            voter.register(self.authority, self.bus)
            anon = voter.credential.anon_id.value
            if anon == 1:
                self.warnings.append(
                    f"registrant {i} drew anonymous id 1, whose signature is 1 for every key"
                )
            if anon in drawn:
                self.warnings.append(
                    f"anonymous id collision: registrants {drawn[anon]} and {i} share id {anon}"
                )
            else:
                drawn[anon] = i
            self.voters.append(voter)

    def _build_schedule(self) -> tuple[CastEvent, ...]:
        config = self.config
        rng = stream(self.seed, "schedule")
        recasters = rng.sample(range(config.n_voters), round(config.recast_fraction * config.n_voters))
        occurrences = list(range(config.n_voters)) + sorted(recasters)
        rng.shuffle(occurrences)
        events = []
        for voter_index in occurrences:
            candidate = rng.randrange(len(config.candidates))
            if config.incomplete_fraction and rng.random() < config.incomplete_fraction:
                deliver = rng.randint(1, config.k - 1)
            else:
                deliver = config.k
            events.append(CastEvent(voter_index, candidate, deliver))
        return tuple(events)

    def step(self) -> CastEvent:
        """Run the next scheduled cast and cross-check ledger vs servers."""
        if self.finished:
            raise VotingError("run already finished")
        if self.cursor >= len(self.schedule):
            raise VotingError("schedule exhausted")
        event = self.schedule[self.cursor]
        voter = self.voters[event.voter_index]
        cred = voter.credential
        token = self.booth.authenticate(cred.anon_id, cred.anon_id_sig, self.bus, holder=voter.anon_name)
        ack = voter.cast(token, self.servers, event.candidate_index, self.bus, event.deliver_count)
        decisions = self.ledger.apply(
            cred.anon_id.value,
            ack.version,
            [share.value for share in ack.shares.shares],
            event.deliver_count,
        )
        if decisions != [d.accepted for d in ack.deliveries]:
            raise VotingError(
                f"ledger diverged from servers at cast {self.cursor}: "
                f"{decisions} != {[d.accepted for d in ack.deliveries]}"
            )
        self.shares_accepted += sum(decisions)
        self.cursor += 1
        return event

    def run_schedule(self, upto: int | None = None) -> None:
        stop = len(self.schedule) if upto is None else min(upto, len(self.schedule))
        while self.cursor < stop:
            self.step()

    def finish(self) -> None:
        if self.cursor < len(self.schedule):
            raise VotingError(f"{len(self.schedule) - self.cursor} casts still scheduled")
        if self.finished:
            return
        self.booth.close(self.bus)
        if self.config.booth_mode == KEY_COPY:
            verifier = key_verifier(self.key)
        else:
            verifier = relay_verifier(
                self.key.public_key(), self.authority.responder, stream(self.seed, "tally")
            )
        self.result = tally(self.servers, self.sheet, verifier, self.bus)
        self.predicted = self.ledger.predict(self.sheet)
        self.finished = True

    def report(self, duration: float = 0.0) -> RunReport:
        if not self.finished:
            raise VotingError("run not finished")
        return RunReport(
            self.config.echo_lines(),
            self.params,
            self.config.candidates,
            self.result,
            self.predicted,
            len(self.authority.registered),
            len({v.credential.anon_id.value for v in self.voters}),
            self.cursor,
            self.shares_accepted,
            len(self.bus.messages),
            tuple(self.warnings),
            duration,
        )

    def snapshot_state(self) -> dict:
        """Everything needed to continue this run from the current cast."""
        return {
            "kind": SNAPSHOT_KIND,
            "format": SNAPSHOT_FORMAT,
            "seed": self.seed,
            "config": list(self.config.echo_lines()),
            "field": {"p": self.params.p, "q": self.params.q, "g": self.params.g},
            "cursor": self.cursor,
            "shares_accepted": self.shares_accepted,
            "finished": self.finished,
            "key": self.key.exponent,
            "sheet": {
                "candidates": list(self.sheet.candidates),
                "ballots": [b.value for b in self.sheet.ballots],
                "signed": [s.value for s in self.sheet.signed_ballots],
            },
            "registered": sorted(self.authority.registered),
            "voters": [
                {
                    "anon_id": v.credential.anon_id.value,
                    "anon_sig": v.credential.anon_id_sig.value,
                    "version": v.version,
                    "rng": _rng_state_to_json(v.rng.getstate()),
                }
                for v in self.voters
            ],
            "booth": {
                "seen": {str(k): v for k, v in sorted(self.booth.seen.items())},
                "live": {str(k): v for k, v in sorted(self.booth.live.items())},
                "by_token": dict(sorted(self.booth.by_token.items())),
                "clock": self.booth.clock,
                "closed": self.booth.closed,
                "rng": _rng_state_to_json(self.booth.rng.getstate()),
            },
            "servers": [
                {
                    str(anon): [record.version, record.share.value]
                    for anon, record in sorted(server.store.items())
                }
                for server in self.servers
            ],
            "ledger": self.ledger.snapshot(),
            "bus": [
                [m.seq, m.sender, m.recipient, m.kind, [[k, v] for k, v in m.fields]]
                for m in self.bus.messages
            ],
            "warnings": list(self.warnings),
        }

    def snapshot_json(self) -> str:
        return json.dumps(self.snapshot_state(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def resume(cls, state: dict) -> "ElectionRun":
        """Rebuild a run from ``snapshot_state`` output and keep going."""
        if state.get("kind") != SNAPSHOT_KIND or state.get("format") != SNAPSHOT_FORMAT:
            raise ConfigError(["not a recognizable snapshot"])
        if state["finished"]:
            raise ConfigError(["snapshot is of a finished run; nothing to resume"])
        config = parse_election_config("\n".join(state["config"]))
        run = object.__new__(cls)
        run.config = config
        run.seed = state["seed"]
        field = state["field"]
        run.params = FieldParams(field["p"], field["q"], field["g"])
        run.key = SigningKey(state["key"], run.params)
        sheet = state["sheet"]
        run.sheet = BallotSheet(
            tuple(sheet["candidates"]),
            tuple(run.params.element(b) for b in sheet["ballots"]),
            tuple(run.params.element(s) for s in sheet["signed"]),
        )
        roster = [VoterIdentity(f"V{i:05d}") for i in range(config.n_voters)]
        run.authority = RegistrationAuthority(run.key, roster, {"main": run.sheet})
        run.authority.registered = set(state["registered"])
        run.booth = PollingBooth(
            run.params,
            config.booth_mode,
            _restored_rng(state["booth"]["rng"]),
            key=run.key if config.booth_mode == KEY_COPY else None,
            authority=run.authority if config.booth_mode == ZK_RELAY else None,
        )
        run.booth.seen = {int(k): v for k, v in state["booth"]["seen"].items()}
        run.booth.live = {int(k): v for k, v in state["booth"]["live"].items()}
        run.booth.by_token = dict(state["booth"]["by_token"])
        run.booth.clock = state["booth"]["clock"]
        run.booth.closed = state["booth"]["closed"]
        run.servers = []
        for index, store in enumerate(state["servers"]):
            server = VoteServer(index, run.booth)
            server.store = {
                int(anon): CastRecord(int(anon), entry[0], run.params.element(entry[1]))
                for anon, entry in store.items()
            }
            run.servers.append(server)
        run.voters = []
        for identity, saved in zip(roster, state["voters"]):
            voter = Voter(identity, run.params, run.key.public_key(), _restored_rng(saved["rng"]))
            voter.credential = Credential(
                run.params.element(saved["anon_id"]), run.params.element(saved["anon_sig"])
            )
            voter.sheet = run.sheet
            voter.version = saved["version"]
            run.voters.append(voter)
        run.bus = MessageBus(
            Message(m[0], m[1], m[2], m[3], tuple((k, v) for k, v in m[4]))
            for m in state["bus"]
        )
        run.ledger = IntentLedger.restore(config.k, state["ledger"])
        run.warnings = list(state["warnings"])
        run.cursor = state["cursor"]
        run.shares_accepted = state["shares_accepted"]
        run.finished = False
        run.result = None
        run.predicted = None
        run.schedule = run._build_schedule()
        if run.cursor > len(run.schedule):
            raise ConfigError(["snapshot cursor lies beyond the schedule"])
        return run


def run_election(config: ElectionConfig, seed: int | None = None) -> tuple[ElectionRun, RunReport]:
    start = perf_counter()
    run = ElectionRun(config, seed)
    run.run_schedule()
    run.finish()
    return run, run.report(perf_counter() - start)


@dataclass(frozen=True)
class AttackConfig:
    params: FieldParams | None
    field_bits: int | None
    k: int
    colluders: tuple[int, ...]
    goal: str = TARGETED
    trials: int | None = None
    candidates: tuple[str, ...] = ()
    seed: int = 0

    def echo_lines(self) -> tuple[str, ...]:
        lines = []
        if self.params is not None:
            lines += [f"p = {self.params.p}", f"q = {self.params.q}", f"g = {self.params.g}"]
        else:
            lines.append(f"field_bits = {self.field_bits}")
        lines += [
            f"servers = {self.k}",
            f"colluders = {','.join(str(i) for i in self.colluders)}",
            f"goal = {self.goal}",
            f"trials = {'exhaustive' if self.trials is None else self.trials}",
        ]
        if self.candidates:
            lines.append(f"candidates = {','.join(self.candidates)}")
        lines.append(f"seed = {self.seed}")
        return tuple(lines)


def parse_attack_config(text: str) -> AttackConfig:
    pairs = _parse_pairs(text)
    problems: list[str] = []
    params, bits = _take_field(pairs, problems)
    servers = _require_int(pairs, "servers", problems, minimum=2, fallback=2)
    raw_colluders = pairs.pop("colluders", None)
    colluders: tuple[int, ...] = ()
    if raw_colluders is None:
        problems.append("missing key: colluders")
    else:
        try:
            colluders = tuple(int(part) for part in raw_colluders.split(","))
        except ValueError:
            problems.append(f"colluders: not a list of integers: {raw_colluders!r}")
        if colluders and not all(0 <= i < servers for i in colluders):
            problems.append(f"colluders: indices must lie in [0, {servers})")
        if colluders and len(set(colluders)) != len(colluders):
            problems.append("colluders: duplicate index")
        if len(colluders) >= servers:
            problems.append("colluders: must be a proper subset of the servers")
    goal = pairs.pop("goal", TARGETED)
    if goal not in (TARGETED, ANY_VALID):
        problems.append(f"goal: unknown goal {goal!r}")
    raw_trials = pairs.pop("trials", "exhaustive")
    trials: int | None = None
    if raw_trials != "exhaustive":
        try:
            trials = int(raw_trials)
        except ValueError:
            problems.append(f"trials: expected 'exhaustive' or an integer: {raw_trials!r}")
        if trials is not None and trials < 1:
            problems.append("trials: must be positive")
    candidates: tuple[str, ...] = ()
    if "candidates" in pairs:
        candidates = _take_candidates(pairs, problems)
    elif goal == ANY_VALID:
        problems.append("goal any-valid needs candidates")
    seed = _take_int(pairs, "seed", problems)
    for key in pairs:
        problems.append(f"unknown key: {key}")
    if problems:
        raise ConfigError(problems)
    return AttackConfig(params, bits, servers, colluders, goal, trials, candidates, seed or 0)


@dataclass
class AttackReport:
    config_lines: tuple[str, ...]
    params: FieldParams
    outcomes: tuple[AttackOutcome, ...]
    duration: float

    def render_records(self) -> str:
        lines = ["[config]", *self.config_lines, ""]
        lines += [
            "[field]",
            f"p = {self.params.p}",
            f"q = {self.params.q}",
            f"g = {self.params.g}",
            "",
            "[attack]",
        ]
        lines += [outcome.to_record() for outcome in self.outcomes]
        return "\n".join(lines) + "\n"

    def render_table(self) -> str:
        lines = [f"field: p={self.params.p} q={self.params.q} g={self.params.g}"]
        for outcome in self.outcomes:
            lines.append(
                f"{outcome.goal:<10} {outcome.successes}/{outcome.trials}"
                f" estimate={float(outcome.estimate):.3e}"
                + (f" exact={outcome.exact}" if outcome.exact is not None else "")
                + f" asymptotic={outcome.asymptotic}"
            )
        lines.append(f"wall time: {self.duration:.3f}s")
        return "\n".join(lines) + "\n"


def run_attack(config: AttackConfig, seed: int | None = None) -> AttackReport:
    start = perf_counter()
    seed = config.seed if seed is None else seed
    if config.params is not None:
        params = config.params
    else:
        params = generate_params(config.field_bits, stream(seed, "field"))
    scenario = CollusionScenario(params, config.k, config.colluders, seed)
    rng = stream(seed, "attack")
    if config.goal == TARGETED:
        value = params.element(rng.randrange(1, params.p))
        target = params.element(rng.randrange(1, params.p))
        outcomes = (attack_targeted(scenario, value, target, trials=config.trials),)
    else:
        key = random_signing_key(params, stream(seed, "authority-key"))
        sheet = make_ballot_sheet(config.candidates, key, stream(seed, "ballots"))
        value = sheet.signed_ballots[rng.randrange(len(config.candidates))]
        outcomes = tuple(
            attack_any_valid(scenario, value, sheet.signed_ballots, trials=config.trials)
        )
    return AttackReport(config.echo_lines(), params, outcomes, perf_counter() - start)


def emit_params(bit_length: int, seed: int, path: str | Path | None = None) -> tuple[FieldParams, str]:
    """Generate field parameters from a named stream and render them in the
    three-line decimal exchange format, optionally writing them to a file."""
    params = generate_params(bit_length, stream(seed, "field"))
    text = params_to_text(params)
    if path is not None:
        Path(path).write_text(text, encoding="ascii")
    return params, text
