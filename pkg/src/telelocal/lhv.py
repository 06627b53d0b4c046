"""Local hidden variable model for two-qubit Werner-state statistics.

The hidden state is a Haar-uniform unit ket lambda. Two response rules
appear:

* minimum rule: a projective party answers deterministically with the
  outcome whose projector has the smallest overlap <lambda|P|lambda>,
  ties broken by lowest outcome index;
* overlap rule: a party answers outcome E with probability
  <lambda|E|lambda>.

Exactly one party may hold the minimum rule; the joint statistics then
reproduce Tr[W (A x B)] for the singlet-fraction state at alpha = 1/2.
When both parties are projective the sender holds the minimum rule.
As soon as a POVM is involved the sender answers by the overlap rule,
which extends linearly to arbitrary POVM elements, and the receiver
holds the minimum rule: directly for projectors, and for pairwise
commuting POVM elements through their common eigenbasis, answering with
the winning eigenvector's weight in each element.

Non-commuting receiver POVMs have no such reduction and are rejected.

Fractions alpha < 1/2 are simulated by mixing in a state-independent
white-noise responder with weight 1 - 2 alpha.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qcore
from .bellcheck import (
    OUT_MINUS,
    OUT_PLUS,
    SETTING_R,
    SETTING_S,
    SETTING_T,
    SETTING_U,
    OutcomeGrouping,
    ProbabilityTable,
    TeleportBellSetting,
    bob_projectors,
    ch_value,
    grouped_alice_effects,
)
from .estimates import StreamingMoments

_COMMUTE_ATOL = 1e-10
_EIGENVALUE_SPLIT = 1e-8
_CHUNK = 250_000


@dataclass(frozen=True)
class LhvConfig:
    """Sample count and seed for one estimation run."""

    samples: int
    seed: int

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")


@dataclass(frozen=True)
class MeasurementSpec:
    """A measurement as a list of operators, either projective or a POVM."""

    kind: str  # "projective" or "povm"
    operators: np.ndarray  # shape (outcomes, d, d)

    def __post_init__(self):
        if self.kind not in ("projective", "povm"):
            raise ValueError("kind must be 'projective' or 'povm'")
        ops = np.asarray(self.operators, dtype=complex)
        if ops.ndim != 3 or ops.shape[1] != ops.shape[2] or ops.shape[0] < 1:
            raise ValueError("operators must have shape (outcomes, d, d)")
        d = ops.shape[1]
        if np.abs(ops.sum(axis=0) - np.eye(d)).max() > qcore.ATOL_STRUCTURAL:
            raise ValueError("operators must sum to the identity")
        for k, op in enumerate(ops):
            if np.abs(op - op.conj().T).max() > qcore.ATOL_STRUCTURAL:
                raise ValueError(f"operator {k} is not hermitian")
            if np.linalg.eigvalsh(op).min() < -qcore.ATOL_PSD:
                raise ValueError(f"operator {k} is not positive semidefinite")
            if self.kind == "projective" and np.abs(op @ op - op).max() > qcore.ATOL_PSD:
                raise ValueError(f"operator {k} is not a projector")
        object.__setattr__(self, "operators", ops)

    @property
    def dim(self) -> int:
        return self.operators.shape[1]

    @property
    def outcomes(self) -> int:
        return self.operators.shape[0]


@dataclass(frozen=True)
class JointEstimate:
    """Monte Carlo joint outcome probabilities for one measurement pair."""

    probs: np.ndarray  # shape (sender outcomes, receiver outcomes)
    stderr: np.ndarray
    samples: int


@dataclass(frozen=True)
class LhvChResult:
    """CH combination of an estimated table, with propagated standard error."""

    value: float
    stderr: float
    table: ProbabilityTable


def sample_hidden(d: int, rng: np.random.Generator) -> np.ndarray:
    """One Haar-uniform hidden ket of dimension d (2d normalized Gaussians)."""
    if d < 2:
        raise ValueError("dimension must be >= 2")
    return qcore.haar_kets(rng, 1, d)[0]


def _rank_one_pieces(projectors: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Refine projectors to unit eigenvectors; returns (pieces, owner indices).

    Rank-one projectors pass through unchanged, higher ranks split into
    their eigenvectors so the minimum rule always acts on a maximal
    measurement and outcomes are recovered by coarse-graining.
    """
    pieces = []
    owners = []
    for idx, p in enumerate(projectors):
        vals, vecs = np.linalg.eigh(p)
        for col in np.nonzero(vals > 0.5)[0]:
            pieces.append(vecs[:, col])
            owners.append(idx)
    return np.array(pieces), np.array(owners)


def _overlap_probs(lams: np.ndarray, operators: np.ndarray) -> np.ndarray:
    """Overlap rule, batched: entry (s, k) is <lam_s|E_k|lam_s>."""
    return np.einsum("si,kij,sj->sk", lams.conj(), operators, lams).real


def _minimum_winners(lams: np.ndarray, pieces: np.ndarray, owners: np.ndarray) -> np.ndarray:
    """Minimum rule, batched: owner of the rank-one piece with least overlap."""
    overlaps = np.abs(lams @ pieces.conj().T) ** 2
    return owners[np.argmin(overlaps, axis=1)]


def alice_rule_projective(lam, projectors) -> int:
    """Deterministic outcome for the sender: least overlap wins, lowest index on ties."""
    lam = np.asarray(lam, dtype=complex)
    pieces, owners = _rank_one_pieces(np.asarray(projectors, dtype=complex))
    return int(_minimum_winners(lam[None, :], pieces, owners)[0])


def bob_rule_projective(lam, projector) -> float:
    """Overlap rule for a single receiver projector."""
    lam = np.asarray(lam, dtype=complex)
    return float(np.vdot(lam, np.asarray(projector, dtype=complex) @ lam).real)


def alice_rule_povm(lam, element) -> float:
    """Overlap rule for a single sender POVM element."""
    lam = np.asarray(lam, dtype=complex)
    return float(np.vdot(lam, np.asarray(element, dtype=complex) @ lam).real)


def _assert_commuting(elements: np.ndarray) -> None:
    n = elements.shape[0]
    for i in range(n):
        for j in range(i + 1, n):
            comm = elements[i] @ elements[j] - elements[j] @ elements[i]
            if np.abs(comm).max() > _COMMUTE_ATOL:
                raise ValueError(f"POVM elements {i} and {j} do not commute")


def _common_eigenbasis(elements: np.ndarray) -> np.ndarray:
    """Orthonormal basis (columns) diagonalizing each of a commuting family."""
    d = elements.shape[1]
    blocks = [np.eye(d, dtype=complex)]
    for e in elements:
        refined = []
        for block in blocks:
            if block.shape[1] == 1:
                refined.append(block)
                continue
            vals, vecs = np.linalg.eigh(block.conj().T @ e @ block)
            start = 0
            for stop in range(1, len(vals) + 1):
                if stop == len(vals) or vals[stop] - vals[start] > _EIGENVALUE_SPLIT:
                    refined.append(block @ vecs[:, start:stop])
                    start = stop
        blocks = refined
    return np.hstack(blocks)


def _commuting_weights(elements: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Common eigenvectors (rows) and the weight matrix q[j, k] = <e_j|E_k|e_j>."""
    _assert_commuting(elements)
    basis = _common_eigenbasis(elements)
    weights = np.einsum("ij,kil,lj->jk", basis.conj(), elements, basis).real
    return basis.T, weights


def bob_rule_commuting_povm(lam, elements) -> np.ndarray:
    """Receiver response to pairwise commuting POVM elements.

    The minimum rule picks a common eigenvector; the response is that
    eigenvector's weight in each element. Projective elements reduce this
    to the one-hot minimum rule.
    """
    lam = np.asarray(lam, dtype=complex)
    elements = np.asarray(elements, dtype=complex)
    vectors, weights = _commuting_weights(elements)
    owners = np.arange(vectors.shape[0])
    winner = _minimum_winners(lam[None, :], vectors, owners)[0]
    return weights[winner].copy()


def _white_noise_joint(alice: MeasurementSpec, bob: MeasurementSpec) -> np.ndarray:
    pa = np.einsum("kii->k", alice.operators).real / alice.dim
    pb = np.einsum("kii->k", bob.operators).real / bob.dim
    return np.outer(pa, pb)


def estimate_joint(
    alice: MeasurementSpec,
    bob: MeasurementSpec,
    cfg: LhvConfig,
    alpha: float = 0.5,
) -> JointEstimate:
    """Monte Carlo joint outcome probabilities under the hidden variable model.

    Matches Tr[W (A x B)] on the singlet-fraction state at the given
    alpha, which must lie in [0, 1/2]. The minimum rule sits with the
    sender only in the all-projective case; any POVM moves it to the
    receiver so that POVM elements are always answered by overlap.
    """
    if alice.dim != bob.dim:
        raise ValueError("sender and receiver dimensions differ")
    if not 0.0 <= alpha <= 0.5:
        raise ValueError("alpha must lie in [0, 1/2]")
    d = alice.dim
    receiver_minimum = alice.kind == "povm" or bob.kind == "povm"
    if receiver_minimum:
        if bob.kind == "povm":
            vectors, weights = _commuting_weights(bob.operators)
        else:
            vectors, piece_owners = _rank_one_pieces(bob.operators)
            weights = np.eye(bob.outcomes)[piece_owners]
        owners = np.arange(vectors.shape[0])
    else:
        pieces, piece_owners = _rank_one_pieces(alice.operators)

    noise = _white_noise_joint(alice, bob)
    mix = 2.0 * alpha
    rng = np.random.default_rng(cfg.seed)
    moments = StreamingMoments((alice.outcomes, bob.outcomes))
    remaining = cfg.samples
    while remaining > 0:
        m = min(remaining, _CHUNK)
        lams = qcore.haar_kets(rng, m, d)
        if receiver_minimum:
            pa = _overlap_probs(lams, alice.operators)
            winners = _minimum_winners(lams, vectors, owners)
            pb = weights[winners]
        else:
            winners = _minimum_winners(lams, pieces, piece_owners)
            pa = np.eye(alice.outcomes)[winners]
            pb = _overlap_probs(lams, bob.operators)
        joint = pa[:, :, None] * pb[:, None, :]
        if mix < 1.0:
            keep = rng.random(m) < mix
            joint = np.where(keep[:, None, None], joint, noise[None, :, :])
        moments.add(joint)
        remaining -= m
    return JointEstimate(probs=moments.mean(), stderr=moments.stderr(), samples=cfg.samples)


def lhv_teleport_experiment(
    setting: TeleportBellSetting,
    grouping: OutcomeGrouping,
    cfg: LhvConfig,
    alpha: float = 0.5,
) -> LhvChResult:
    """CH combination of the hidden variable model on the teleportation test.

    Each of the four settings pairs is an independent sub-experiment with
    its own derived seed, so the four cell errors add in quadrature.
    """
    effects = grouped_alice_effects(setting, grouping)
    projs = bob_projectors(setting)
    child_seeds = np.random.SeedSequence(cfg.seed).generate_state(4)
    joints = np.empty((2, 2, 2, 2))
    errors = np.empty((2, 2, 2, 2))
    for ia in range(2):
        for ib in range(2):
            est = estimate_joint(
                MeasurementSpec(kind="povm", operators=effects[ia]),
                MeasurementSpec(kind="projective", operators=projs[ib]),
                LhvConfig(samples=cfg.samples, seed=int(child_seeds[2 * ia + ib])),
                alpha=alpha,
            )
            joints[ia, :, ib, :] = est.probs
            errors[ia, :, ib, :] = est.stderr
    table = ProbabilityTable(joints=joints, stderr=errors)
    cells = (
        (SETTING_T, OUT_PLUS, SETTING_S, OUT_MINUS),
        (SETTING_U, OUT_MINUS, SETTING_R, OUT_PLUS),
        (SETTING_U, OUT_PLUS, SETTING_S, OUT_PLUS),
        (SETTING_T, OUT_PLUS, SETTING_R, OUT_PLUS),
    )
    stderr = float(np.sqrt(sum(errors[c] ** 2 for c in cells)))
    return LhvChResult(value=ch_value(table), stderr=stderr, table=table)
