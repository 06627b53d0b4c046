"""Single-qubit teleportation and its measurement-side reduction.

The sender's joint Bell measurement on (input, her half of the shared
pair), seen from her half alone, is a four-element POVM fixed by the
input ket (a, b):

    A_0 = [[|b|^2, -a b*], [-a* b, |a|^2]] / 2      (outcome psi-)
    A_1 = [[|b|^2,  a b*], [ a* b, |a|^2]] / 2      (outcome psi+)
    A_2 = [[|a|^2, -a* b], [-a b*, |b|^2]] / 2      (outcome phi-)
    A_3 = [[|a|^2,  a* b], [ a b*, |b|^2]] / 2      (outcome phi+)

Outcome probabilities are computed both through this reduction and
through the explicit three-qubit projection; the two routes must agree
to 1e-12 and the implementation checks that on every call.

With the singlet as the shared pair the receiver's conditional states
are (-a,-b), (-a,b), (b,a), (-b,a), which the correction unitaries
-I, -sigma_z, sigma_x, i sigma_y map back onto (a, b) exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qcore
from .estimates import MonteCarloEstimate, StreamingMoments

ROUTE_AGREEMENT_ATOL = 1e-12
_PROBABILITY_FLOOR = 1e-12
_CHUNK = 200_000

# Bell-ket coefficient matrices C_k with Phi_k = sum_ij C_k[i, j] |ij>
_BELL_COEFF = qcore.bell_basis().reshape(4, 2, 2)

_CORRECTIONS = np.array(
    [
        [[-1, 0], [0, -1]],  # -I
        [[-1, 0], [0, 1]],  # -sigma_z
        [[0, 1], [1, 0]],  # sigma_x
        [[0, 1], [-1, 0]],  # i sigma_y
    ],
    dtype=complex,
)


@dataclass(frozen=True)
class TeleportPovm:
    """The four POVM elements induced by an input ket, in Bell order."""

    elements: np.ndarray  # shape (4, 2, 2)
    source_state: np.ndarray  # shape (2,)

    def __post_init__(self):
        elements = np.asarray(self.elements, dtype=complex)
        if elements.shape != (4, 2, 2):
            raise ValueError("expected four 2x2 elements")
        total = elements.sum(axis=0)
        if np.abs(total - np.eye(2)).max() > qcore.ATOL_STRUCTURAL:
            raise ValueError("elements must sum to the identity")
        for k, e in enumerate(elements):
            if np.abs(e - e.conj().T).max() > qcore.ATOL_STRUCTURAL:
                raise ValueError(f"element {k} is not hermitian")
            if np.linalg.eigvalsh(e).min() < -qcore.ATOL_PSD:
                raise ValueError(f"element {k} is not positive semidefinite")
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "source_state", np.asarray(self.source_state, dtype=complex))


@dataclass(frozen=True)
class TeleportOutcome:
    """One realizable Bell outcome with the receiver's conditional state."""

    index: int
    probability: float
    bob_state: np.ndarray


def povm_from_input(chi) -> TeleportPovm:
    """POVM on the sender's half of the pair induced by the input ket."""
    chi = np.asarray(chi, dtype=complex)
    if chi.shape != (2,):
        raise ValueError("input ket must have dimension 2")
    qcore._require_unit_vector(chi, "input ket")
    a, b = chi
    aa, bb = abs(a) ** 2, abs(b) ** 2
    ab = a * b.conjugate()
    elements = 0.5 * np.array(
        [
            [[bb, -ab], [-ab.conjugate(), aa]],
            [[bb, ab], [ab.conjugate(), aa]],
            [[aa, -ab.conjugate()], [-ab, bb]],
            [[aa, ab.conjugate()], [ab, bb]],
        ],
        dtype=complex,
    )
    return TeleportPovm(elements=elements, source_state=chi)


def correction_unitary(k: int) -> np.ndarray:
    """Receiver's correction for Bell outcome k, in the order (psi-, psi+, phi-, phi+)."""
    if k not in (0, 1, 2, 3):
        raise ValueError("outcome index must be 0..3")
    return _CORRECTIONS[k].copy()


def joint_probability(rho, alice_op, bob_proj) -> float:
    """Tr[rho (A x P)] for a two-qubit state, sender effect A, receiver projector P."""
    rho = np.asarray(rho, dtype=complex)
    alice_op = np.asarray(alice_op, dtype=complex)
    bob_proj = np.asarray(bob_proj, dtype=complex)
    if rho.shape != (alice_op.shape[0] * bob_proj.shape[0],) * 2:
        raise ValueError("state dimension does not match the measurement operators")
    return float(np.trace(rho @ qcore.tensor(alice_op, bob_proj)).real)


def _three_qubit_probabilities(chi, rho) -> np.ndarray:
    big = qcore.tensor(qcore.projector(chi), rho)
    probs = np.empty(4)
    for k in range(4):
        p3 = qcore.tensor(qcore.projector(qcore.bell_basis()[k]), qcore.IDENTITY_2)
        probs[k] = np.trace(p3 @ big).real
    return probs


def bell_measurement_probabilities(chi, rho) -> np.ndarray:
    """Probabilities of the four Bell outcomes for input chi and shared pair rho.

    Computed through the three-qubit projection and through the induced
    POVM acting on the sender's reduced state; raises if the routes
    disagree beyond 1e-12.
    """
    chi = np.asarray(chi, dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError("shared pair must be a two-qubit state")
    probs = _three_qubit_probabilities(chi, rho)
    rho_a = qcore.partial_trace(rho, (2, 2), trace_out="B")
    povm = povm_from_input(chi)
    reduced = np.einsum("kij,ji->k", povm.elements, rho_a).real
    if np.abs(probs - reduced).max() > ROUTE_AGREEMENT_ATOL:
        raise RuntimeError("three-qubit and reduced-POVM outcome probabilities disagree")
    return probs


def bob_conditional_state(chi, rho, k: int) -> np.ndarray:
    """Receiver's normalized state after Bell outcome k, before correction."""
    if k not in (0, 1, 2, 3):
        raise ValueError("outcome index must be 0..3")
    big = qcore.tensor(qcore.projector(chi), np.asarray(rho, dtype=complex))
    p3 = qcore.tensor(qcore.projector(qcore.bell_basis()[k]), qcore.IDENTITY_2)
    selected = p3 @ big @ p3
    prob = np.trace(selected).real
    if prob <= _PROBABILITY_FLOOR:
        raise ValueError(f"outcome {k} has probability {prob!r}, conditional state undefined")
    return qcore.partial_trace(selected, (4, 2), trace_out="A") / prob


def measurement_outcomes(chi, rho) -> tuple[TeleportOutcome, ...]:
    """All realizable Bell outcomes (probability above 1e-12) with conditional states."""
    probs = bell_measurement_probabilities(chi, rho)
    return tuple(
        TeleportOutcome(index=k, probability=float(probs[k]), bob_state=bob_conditional_state(chi, rho, k))
        for k in range(4)
        if probs[k] > _PROBABILITY_FLOOR
    )


def run_protocol(chi, rho, seed: int) -> tuple[int, np.ndarray]:
    """One protocol run: sample a Bell outcome and return (k, corrected state)."""
    rng = np.random.default_rng(seed)
    probs = bell_measurement_probabilities(chi, rho)
    k = int(np.searchsorted(np.cumsum(probs), rng.random()))
    k = min(k, 3)
    u = correction_unitary(k)
    return k, u @ bob_conditional_state(chi, rho, k) @ u.conj().T


def _outcome_contractions(chis: np.ndarray, rho4: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Batch unnormalized conditional states and probabilities for all outcomes.

    chis has one input ket per row; rho4 is the shared pair reshaped to
    (2, 2, 2, 2) with row indices (m, n) and column indices (p, q).
    """
    u = np.einsum("kim,si->skm", _BELL_COEFF.conj(), chis)
    n_unnorm = np.einsum("skm,mnpq,skp->sknq", u, rho4, u.conj())
    probs = np.einsum("sknn->sk", n_unnorm).real
    return n_unnorm, probs


def average_fidelity(rho, samples: int, seed: int) -> MonteCarloEstimate:
    """Monte Carlo average of <chi| final |chi> over Haar-uniform input kets."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError("shared pair must be a two-qubit state")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rho4 = rho.reshape(2, 2, 2, 2)
    rng = np.random.default_rng(seed)
    moments = StreamingMoments()
    remaining = samples
    while remaining > 0:
        m = min(remaining, _CHUNK)
        chis = qcore.haar_kets(rng, m)
        n_unnorm, probs = _outcome_contractions(chis, rho4)
        draws = rng.random(m)
        ks = np.minimum((draws[:, None] > np.cumsum(probs, axis=1)).sum(axis=1), 3)
        n_k = np.take_along_axis(n_unnorm, ks[:, None, None, None], axis=1).squeeze(1)
        p_k = np.take_along_axis(probs, ks[:, None], axis=1).squeeze(1)
        corr = _CORRECTIONS[ks]
        # <chi| U N U* |chi> / p  ==  <U* chi| N |U* chi> / p
        y = np.einsum("sji,sj->si", corr.conj(), chis)
        fid = np.einsum("si,sij,sj->s", y.conj(), n_k, y).real / p_k
        moments.add(fid)
        remaining -= m
    return moments.scalar_estimate()
