"""Clauser-Horne style test applied to the teleportation measurement.

The sender owns two measurement settings, each the four-outcome POVM
induced by one input ket, with the outcomes grouped into a binary +/-
split. The receiver owns two projective spin settings. For joint
probabilities Pr(.,.) on the grouped outcomes the combination

    Pr(t, s-) + Pr(u-, r) + Pr(u, s) - Pr(t, r)

lies in [0, 1] for every locally explainable state; a negative value
witnesses nonlocality of the teleportation statistics.

Index conventions for the probability table: axis order is
(sender setting, sender outcome, receiver setting, receiver outcome)
with settings ordered (T, U) and (R, S) and outcomes ordered (+, -).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import qcore
from .teleport import joint_probability, povm_from_input

SETTING_T, SETTING_U = 0, 1
SETTING_R, SETTING_S = 0, 1
OUT_PLUS, OUT_MINUS = 0, 1

_TABLE_ATOL = 1e-9


@dataclass(frozen=True)
class TeleportBellSetting:
    """Input kets for the sender's two settings and spin axes for the receiver's."""

    chi: np.ndarray
    chi_prime: np.ndarray
    r: np.ndarray
    s: np.ndarray

    def __post_init__(self):
        chi = np.asarray(self.chi, dtype=complex)
        chi_prime = np.asarray(self.chi_prime, dtype=complex)
        r = np.asarray(self.r, dtype=float)
        s = np.asarray(self.s, dtype=float)
        for name, v in (("chi", chi), ("chi_prime", chi_prime)):
            if v.shape != (2,):
                raise ValueError(f"{name} must be a qubit ket")
            qcore._require_unit_vector(v, name)
        for name, v in (("r", r), ("s", s)):
            if v.shape != (3,):
                raise ValueError(f"{name} must be a three-component direction")
            qcore._require_unit_vector(v, name)
        object.__setattr__(self, "chi", chi)
        object.__setattr__(self, "chi_prime", chi_prime)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "s", s)


@dataclass(frozen=True)
class OutcomeGrouping:
    """Binary split of the four Bell outcomes for each sender setting."""

    t_set: tuple[int, int] = (0, 2)
    u_set: tuple[int, int] = (0, 3)

    def __post_init__(self):
        for name, group in (("t_set", self.t_set), ("u_set", self.u_set)):
            if len(group) != 2 or len(set(group)) != 2 or not set(group) <= {0, 1, 2, 3}:
                raise ValueError(f"{name} must be two distinct outcome indices in 0..3")


@dataclass(frozen=True)
class ProbabilityTable:
    """Joint probabilities over (setting, outcome, setting, outcome), optionally with stderr."""

    joints: np.ndarray  # shape (2, 2, 2, 2)
    stderr: np.ndarray | None = field(default=None)

    def __post_init__(self):
        joints = np.asarray(self.joints, dtype=float)
        if joints.shape != (2, 2, 2, 2):
            raise ValueError("table must have shape (2, 2, 2, 2)")
        if joints.min() < -_TABLE_ATOL or joints.max() > 1 + _TABLE_ATOL:
            raise ValueError("joint probabilities out of range")
        block_sums = joints.sum(axis=(1, 3))
        if np.abs(block_sums - 1.0).max() > _TABLE_ATOL:
            raise ValueError("per settings pair, the four joints must sum to 1")
        object.__setattr__(self, "joints", joints)
        if self.stderr is not None:
            stderr = np.asarray(self.stderr, dtype=float)
            if stderr.shape != (2, 2, 2, 2):
                raise ValueError("stderr must match the table shape")
            object.__setattr__(self, "stderr", stderr)


def violation_setting() -> TeleportBellSetting:
    """The canonical violating configuration: +x and +y input kets, receiver
    axes at +/-45 degrees in the equatorial plane."""
    s = np.sqrt(0.5)
    return TeleportBellSetting(
        chi=np.array([s, s], dtype=complex),
        chi_prime=np.array([s, 1j * s]),
        r=np.array([s, s, 0.0]),
        s=np.array([s, -s, 0.0]),
    )


def grouped_alice_effects(setting: TeleportBellSetting, grouping: OutcomeGrouping) -> np.ndarray:
    """Binary effects for the sender, shape (setting, outcome, 2, 2).

    The + effect of each setting is the sum of the grouped POVM elements,
    the - effect the sum of the complementary pair.
    """
    out = np.empty((2, 2, 2, 2), dtype=complex)
    for i, (ket, group) in enumerate(((setting.chi, grouping.t_set), (setting.chi_prime, grouping.u_set))):
        elements = povm_from_input(ket).elements
        rest = tuple(sorted(set(range(4)) - set(group)))
        out[i, OUT_PLUS] = elements[list(group)].sum(axis=0)
        out[i, OUT_MINUS] = elements[list(rest)].sum(axis=0)
    return out


def bob_projectors(setting: TeleportBellSetting) -> np.ndarray:
    """Spin projectors for the receiver, shape (setting, outcome, 2, 2)."""
    out = np.empty((2, 2, 2, 2), dtype=complex)
    for i, axis in enumerate((setting.r, setting.s)):
        out[i, OUT_PLUS] = qcore.spin_projector(axis, +1)
        out[i, OUT_MINUS] = qcore.spin_projector(axis, -1)
    return out


def probability_table(setting: TeleportBellSetting, grouping: OutcomeGrouping, rho) -> ProbabilityTable:
    """Exact joint probability table Tr[rho (E x P)] for all setting/outcome pairs."""
    effects = grouped_alice_effects(setting, grouping)
    projs = bob_projectors(setting)
    joints = np.empty((2, 2, 2, 2))
    for ia in range(2):
        for a in range(2):
            for ib in range(2):
                for b in range(2):
                    joints[ia, a, ib, b] = joint_probability(rho, effects[ia, a], projs[ib, b])
    return ProbabilityTable(joints=joints)


def ch_value(table: ProbabilityTable) -> float:
    """The combination Pr(t,s-) + Pr(u-,r) + Pr(u,s) - Pr(t,r)."""
    j = table.joints
    return float(
        j[SETTING_T, OUT_PLUS, SETTING_S, OUT_MINUS]
        + j[SETTING_U, OUT_MINUS, SETTING_R, OUT_PLUS]
        + j[SETTING_U, OUT_PLUS, SETTING_S, OUT_PLUS]
        - j[SETTING_T, OUT_PLUS, SETTING_R, OUT_PLUS]
    )


def teleport_ch_value(setting: TeleportBellSetting, grouping: OutcomeGrouping, rho) -> float:
    """CH combination of the exact teleportation statistics on rho."""
    return ch_value(probability_table(setting, grouping, rho))


def _input_coefficients(setting: TeleportBellSetting) -> tuple[float, float]:
    a, b = setting.chi
    ap, bp = setting.chi_prime
    c = (a * b.conjugate() + a.conjugate() * b).real
    d = (-1j * (ap * bp.conjugate() - ap.conjugate() * bp)).real
    return c, d


def closed_form_value(alpha: float, setting: TeleportBellSetting) -> float:
    """CH value on the singlet-fraction family, for the default grouping.

    Equals (2 - alpha * (c (r_x + s_x) - d (r_y - s_y))) / 4 with
    c = a b* + a* b from chi and d = -i (a' b'* - a'* b') from chi_prime.
    At alpha = 1 this reduces to (2 - c (r_x + s_x) + d (r_y - s_y)) / 4.
    """
    c, d = _input_coefficients(setting)
    slope = c * (setting.r[0] + setting.s[0]) - d * (setting.r[1] - setting.s[1])
    return (2 - alpha * slope) / 4


def closed_form_root(setting: TeleportBellSetting) -> float | None:
    """Smallest alpha where the closed-form CH value crosses zero, if any in (0, 1]."""
    c, d = _input_coefficients(setting)
    slope = c * (setting.r[0] + setting.s[0]) - d * (setting.r[1] - setting.s[1])
    if slope <= 2.0:
        return None
    return 2.0 / slope


@dataclass(frozen=True)
class ThresholdReport:
    """Grid scan of the CH value over the singlet fraction alpha."""

    grid: np.ndarray
    values: np.ndarray
    first_violation: float | None
    closed_form_root: float | None


def threshold_scan(setting: TeleportBellSetting, alpha_grid) -> ThresholdReport:
    """Evaluate the exact CH value on an ascending alpha grid and locate the
    first grid point with a negative value."""
    grid = np.asarray(alpha_grid, dtype=float)
    if grid.size == 0:
        raise ValueError("alpha grid is empty")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("alpha grid must be strictly ascending")
    grouping = OutcomeGrouping()
    values = np.array([teleport_ch_value(setting, grouping, qcore.werner_alpha(a)) for a in grid])
    negatives = np.nonzero(values < 0)[0]
    first = float(grid[negatives[0]]) if negatives.size else None
    return ThresholdReport(
        grid=grid,
        values=values,
        first_violation=first,
        closed_form_root=closed_form_root(setting),
    )


def horodecki_t(rho) -> np.ndarray:
    """Correlation matrix T_ij = Tr[rho sigma_i x sigma_j]."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError("state must be two-qubit")
    t = np.empty((3, 3))
    for i, si in enumerate(qcore.PAULIS):
        for j, sj in enumerate(qcore.PAULIS):
            t[i, j] = np.trace(rho @ qcore.tensor(si, sj)).real
    return t


class ChshResult(NamedTuple):
    value: float
    violates: bool


def chsh_criterion(rho) -> ChshResult:
    """Sum of the two largest eigenvalues of T^T T; a CHSH violation exists iff it exceeds 1."""
    t = horodecki_t(rho)
    eigs = np.linalg.eigvalsh(t.T @ t)
    value = float(eigs[-1] + eigs[-2])
    return ChshResult(value=value, violates=value > 1.0)
