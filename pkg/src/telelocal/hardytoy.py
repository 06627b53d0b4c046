"""Exact teleportation inside Hardy's four-state toy theory.

A system carries a hidden value in {0, 1, 2, 3}. The shared resource is
a correlated pair (x, x) with x uniform. The joint measurement on
(input, first half) has four outcomes, each compatible with exactly four
hidden pairs:

    B0: (0,0) (1,1) (2,2) (3,3)
    B1: (0,3) (1,0) (2,1) (3,2)
    B2: (0,2) (1,3) (2,0) (3,1)
    B3: (0,1) (1,2) (2,3) (3,0)

Every outcome pins down the difference i = (x2 - x1) mod 4, which is the
two-bit message; the receiver recovers the input as (x3 - i) mod 4. The
measurement disturbs the measured pair by resampling it uniformly over
the outcome's compatible pairs, which is what blocks signalling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TOY_TABLES: tuple[tuple[tuple[int, int], ...], ...] = (
    ((0, 0), (1, 1), (2, 2), (3, 3)),
    ((0, 3), (1, 0), (2, 1), (3, 2)),
    ((0, 2), (1, 3), (2, 0), (3, 1)),
    ((0, 1), (1, 2), (2, 3), (3, 0)),
)


@dataclass(frozen=True)
class ToyOutcome:
    """A joint measurement outcome and its compatible hidden pairs."""

    index: int
    compatible_pairs: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class ToyVerifyReport:
    """Structural and end-to-end checks of the toy protocol tables."""

    successes: int
    total: int
    teleport_failures: tuple[tuple[int, int, int], ...]  # (input, shared, final)
    partition_ok: bool
    partition_errors: tuple[str, ...]
    message_map_ok: bool
    message_errors: tuple[tuple[int, tuple[int, int], int, int], ...]
    message_map: tuple[int, ...]

    @property
    def passed(self) -> bool:
        return self.successes == self.total and self.partition_ok and self.message_map_ok


@dataclass(frozen=True)
class ToyTranscript:
    """Full record of one protocol run."""

    x1: int
    x2: int
    x3: int
    outcome: ToyOutcome
    message: int
    disturbed_pair: tuple[int, int]
    x3_final: int


def _outcomes(tables=None) -> tuple[ToyOutcome, ...]:
    tables = TOY_TABLES if tables is None else tuple(tuple(map(tuple, t)) for t in tables)
    return tuple(ToyOutcome(index=k, compatible_pairs=rows) for k, rows in enumerate(tables))


def _message_map(tables=None) -> tuple[tuple[int, ...], tuple[tuple[int, tuple[int, int], int, int], ...]]:
    """Per-outcome message derived from the first row, plus rows that disagree."""
    outcomes = _outcomes(tables)
    derived = []
    errors = []
    for outcome in outcomes:
        first = (outcome.compatible_pairs[0][1] - outcome.compatible_pairs[0][0]) % 4
        derived.append(first)
        for pair in outcome.compatible_pairs:
            row_i = (pair[1] - pair[0]) % 4
            if row_i != first:
                errors.append((outcome.index, pair, first, row_i))
    return tuple(derived), tuple(errors)


_messages, _errors = _message_map()
if _errors:
    raise AssertionError(f"inconsistent canonical tables: {_errors!r}")
# outcome index -> transmitted message, derived and checked at import
MESSAGE_MAP: tuple[int, ...] = _messages


def prepare_pair(rng: np.random.Generator) -> tuple[int, int]:
    """A correlated resource pair (x, x) with x uniform over 0..3."""
    x = int(rng.integers(4))
    return x, x


def joint_measurement(x1: int, x2: int, tables=None) -> ToyOutcome:
    """The unique outcome whose table contains the hidden pair (x1, x2)."""
    for outcome in _outcomes(tables):
        if (x1, x2) in outcome.compatible_pairs:
            return outcome
    raise ValueError(f"hidden pair ({x1}, {x2}) appears in no outcome table")


def post_measurement_resample(outcome: ToyOutcome, rng: np.random.Generator) -> tuple[int, int]:
    """Uniform draw over the outcome's compatible pairs (the disturbance step)."""
    return outcome.compatible_pairs[int(rng.integers(len(outcome.compatible_pairs)))]


def classical_message(outcome: ToyOutcome) -> int:
    """The difference (x2 - x1) mod 4 shared by every row of the outcome."""
    rows = {(x2 - x1) % 4 for x1, x2 in outcome.compatible_pairs}
    if len(rows) != 1:
        raise ValueError(f"outcome {outcome.index} rows disagree on the message: {sorted(rows)}")
    return rows.pop()


def bob_correction(x3: int, message: int) -> int:
    """Shift the receiver's hidden value by the message: (x3 - i) mod 4."""
    return (x3 - message) % 4


def run_toy_protocol(x1: int, rng: np.random.Generator) -> ToyTranscript:
    """One full run: prepare, measure, disturb, signal, correct."""
    if x1 not in (0, 1, 2, 3):
        raise ValueError("input value must be in 0..3")
    x2, x3 = prepare_pair(rng)
    outcome = joint_measurement(x1, x2)
    message = classical_message(outcome)
    disturbed = post_measurement_resample(outcome, rng)
    return ToyTranscript(
        x1=x1,
        x2=x2,
        x3=x3,
        outcome=outcome,
        message=message,
        disturbed_pair=disturbed,
        x3_final=bob_correction(x3, message),
    )


def exhaustive_verify(tables=None) -> ToyVerifyReport:
    """Check the tables structurally and replay all 16 (input, shared) cases.

    The partition check requires every hidden pair to appear in exactly
    one outcome; the message check requires each outcome's rows to agree
    on (x2 - x1) mod 4. The replay uses the first-row message.
    """
    outcomes = _outcomes(tables)
    seen: dict[tuple[int, int], int] = {}
    partition_errors = []
    for outcome in outcomes:
        for pair in outcome.compatible_pairs:
            if pair in seen:
                partition_errors.append(f"pair {pair} in outcomes {seen[pair]} and {outcome.index}")
            seen[pair] = outcome.index
    for x1 in range(4):
        for x2 in range(4):
            if (x1, x2) not in seen:
                partition_errors.append(f"pair ({x1}, {x2}) in no outcome")
    messages, message_errors = _message_map(tables)

    successes = 0
    failures = []
    for x1 in range(4):
        for shared in range(4):
            pair = (x1, shared)
            if pair not in seen:
                failures.append((x1, shared, -1))
                continue
            final = bob_correction(shared, messages[seen[pair]])
            if final == x1:
                successes += 1
            else:
                failures.append((x1, shared, final))
    return ToyVerifyReport(
        successes=successes,
        total=16,
        teleport_failures=tuple(failures),
        partition_ok=not partition_errors,
        partition_errors=tuple(partition_errors),
        message_map_ok=not message_errors,
        message_errors=message_errors,
        message_map=messages,
    )
