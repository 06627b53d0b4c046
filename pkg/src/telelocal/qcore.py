"""Dense linear algebra and two-qubit state primitives.

Conventions used throughout the package:

* kets are 1-D complex arrays, operators are 2-D complex arrays
* the singlet is (|01> - |10>)/sqrt(2)
* the Bell basis is ordered (psi-, psi+, phi-, phi+), where
  psi-+ = (|01> -+ |10>)/sqrt(2) and phi-+ = (|00> -+ |11>)/sqrt(2)
* tensor products follow numpy's kron index convention
"""

from __future__ import annotations

import numpy as np

# structural identities (hermiticity, completeness, traces)
ATOL_STRUCTURAL = 1e-12
# eigenvalue positivity, slightly looser to absorb eigensolver noise
ATOL_PSD = 1e-10

IDENTITY_2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


def _as_complex(a) -> np.ndarray:
    return np.asarray(a, dtype=complex)


def _require_unit_vector(v: np.ndarray, name: str, atol: float = 1e-9) -> None:
    if abs(np.linalg.norm(v) - 1.0) > atol:
        raise ValueError(f"{name} must be a unit vector, got norm {np.linalg.norm(v)!r}")


def tensor(*ops) -> np.ndarray:
    """Kronecker product of one or more kets or operators."""
    if not ops:
        raise ValueError("tensor() needs at least one argument")
    out = _as_complex(ops[0])
    for op in ops[1:]:
        out = np.kron(out, _as_complex(op))
    return out


def partial_trace(rho, dims: tuple[int, int], trace_out: str = "A") -> np.ndarray:
    """Trace out one factor of a bipartite operator.

    ``dims = (d_A, d_B)`` names the factor dimensions, ``trace_out`` the
    factor to remove ("A" or "B").
    """
    rho = _as_complex(rho)
    d_a, d_b = dims
    if rho.shape != (d_a * d_b, d_a * d_b):
        raise ValueError(f"operator of shape {rho.shape} does not factor as {dims}")
    r4 = rho.reshape(d_a, d_b, d_a, d_b)
    if trace_out == "A":
        return np.einsum("abad->bd", r4)
    if trace_out == "B":
        return np.einsum("abcb->ac", r4)
    raise ValueError("trace_out must be 'A' or 'B'")


def projector(ket) -> np.ndarray:
    """Rank-one projector |ket><ket|."""
    ket = _as_complex(ket)
    return np.outer(ket, ket.conj())


def bloch_to_ket(m) -> np.ndarray:
    """Unit Bloch vector (x, y, z) to the ket (cos(t/2), e^{i phi} sin(t/2))."""
    m = np.asarray(m, dtype=float)
    if m.shape != (3,):
        raise ValueError("Bloch vector must have three components")
    _require_unit_vector(m, "Bloch vector")
    theta = np.arccos(np.clip(m[2], -1.0, 1.0))
    phi = np.arctan2(m[1], m[0])
    return np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])


def ket_to_bloch(chi) -> np.ndarray:
    """Expectation values of the three Pauli operators in a qubit ket."""
    chi = _as_complex(chi)
    if chi.shape != (2,):
        raise ValueError("ket must have dimension 2")
    _require_unit_vector(chi, "ket")
    return np.array([np.vdot(chi, p @ chi).real for p in PAULIS])


def spin_projector(n, sign: int = +1) -> np.ndarray:
    """Projector onto the +/- eigenstate of the spin operator along unit n."""
    n = np.asarray(n, dtype=float)
    if n.shape != (3,):
        raise ValueError("direction must have three components")
    _require_unit_vector(n, "direction")
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    return (IDENTITY_2 + sign * sum(c * p for c, p in zip(n, PAULIS))) / 2


def bell_basis() -> np.ndarray:
    """The four Bell kets as rows, ordered (psi-, psi+, phi-, phi+)."""
    s = np.sqrt(0.5)
    return np.array(
        [
            [0, s, -s, 0],
            [0, s, s, 0],
            [s, 0, 0, -s],
            [s, 0, 0, s],
        ],
        dtype=complex,
    )


def singlet_projector() -> np.ndarray:
    return projector(bell_basis()[0])


def _swap_operator(d: int) -> np.ndarray:
    v = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            v[i * d + j, j * d + i] = 1.0
    return v


def werner_general(d: int) -> np.ndarray:
    """The d x d Werner state I/d^3 + (2/d^2) P_anti with P_anti = (I - V)/2."""
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise ValueError("dimension must be an integer >= 2")
    eye = np.eye(d * d, dtype=complex)
    p_anti = (eye - _swap_operator(d)) / 2
    return eye / d**3 + (2 / d**2) * p_anti


def werner_alpha(alpha: float) -> np.ndarray:
    """Singlet fraction family (1-alpha)/4 I + alpha P_singlet, alpha in [0,1]."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    return (1 - alpha) / 4 * np.eye(4, dtype=complex) + alpha * singlet_projector()


def fidelity(chi, m) -> float:
    """<chi|M|chi> for a ket chi and an operator M."""
    chi = _as_complex(chi)
    m = _as_complex(m)
    if m.shape != (chi.shape[0], chi.shape[0]):
        raise ValueError(f"operator shape {m.shape} does not match ket dimension {chi.shape[0]}")
    return float(np.vdot(chi, m @ chi).real)


def is_density(m, tol: float = 1e-10) -> bool:
    """True when M is hermitian, unit trace, and PSD within tol."""
    m = _as_complex(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    if not np.all(np.isfinite(m)):
        return False
    if np.abs(m - m.conj().T).max() > tol:
        return False
    if abs(np.trace(m).real - 1.0) > tol or abs(np.trace(m).imag) > tol:
        return False
    return bool(np.linalg.eigvalsh((m + m.conj().T) / 2).min() >= -tol)


def haar_kets(rng: np.random.Generator, n: int, dim: int = 2) -> np.ndarray:
    """n Haar-uniform unit kets of the given dimension, one per row.

    Sampled by normalizing 2*dim independent standard Gaussians.
    """
    z = rng.standard_normal((n, dim)) + 1j * rng.standard_normal((n, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def random_bloch_vectors(rng: np.random.Generator, n: int) -> np.ndarray:
    """n uniform points on the unit sphere, one per row."""
    v = rng.standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def random_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    """A random density matrix (normalized G G* with Gaussian G)."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
