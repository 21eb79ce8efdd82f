"""GHZ basis labels, diagonal ensembles and density-operator helpers.

The N-qubit GHZ basis states are (|j> + s|~j>)/sqrt(2) where ~j is the
bitwise complement of j and s = +/-1.  Since j and ~j give the same state up
to a global phase, each state is labelled by the member of {j, ~j} whose
first bit is 0, together with the sign s.  Computational strings are read
qubit-1-first and interpreted as big-endian integer indices.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

ATOL = 1e-12
MAX_QUBITS_FAST = 6
MAX_QUBITS_EXACT = 5

_H1 = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)


@dataclass(frozen=True)
class GhzLabel:
    """Canonical label of one GHZ basis state: (|rep> + sign|~rep>)/sqrt(2)."""

    rep: str
    sign: int

    def __post_init__(self):
        if not self.rep or any(c not in "01" for c in self.rep):
            raise ValueError(f"rep must be a nonempty bit string, got {self.rep!r}")
        if self.rep[0] != "0":
            raise ValueError(f"canonical rep must start with 0, got {self.rep!r}")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign!r}")

    @property
    def n_qubits(self) -> int:
        return len(self.rep)


def complement(bits: str) -> str:
    return "".join("1" if c == "0" else "0" for c in bits)


def canonical_label(bits: str, sign: int) -> GhzLabel:
    """Label for the state (|bits> + sign|~bits>)/sqrt(2).

    If bits starts with 1 the complement representative is used; this changes
    the state only by a global phase (equal to sign).
    """
    if bits[0] == "1":
        bits = complement(bits)
    return GhzLabel(bits, sign)


def target_label(n: int) -> GhzLabel:
    """The purification target (|00...0> + |11...1>)/sqrt(2)."""
    return GhzLabel("0" * n, +1)


def all_labels(n: int) -> list[GhzLabel]:
    """All 2^n GHZ labels in deterministic (rep, +1 before -1) order."""
    labels = []
    for r in range(1 << (n - 1)):
        rep = format(r, f"0{n}b")
        labels.append(GhzLabel(rep, +1))
        labels.append(GhzLabel(rep, -1))
    return labels


def ghz_label_to_state(label: GhzLabel, n: int) -> np.ndarray:
    """State vector (|rep> + sign|~rep>)/sqrt(2) of length 2^n."""
    if label.n_qubits != n:
        raise ValueError(f"label has {label.n_qubits} bits, expected {n}")
    vec = np.zeros(1 << n, dtype=complex)
    vec[int(label.rep, 2)] = 1.0 / np.sqrt(2.0)
    vec[int(complement(label.rep), 2)] += label.sign / np.sqrt(2.0)
    return vec


class GhzDiagonalEnsemble:
    """Probability weights over the 2^n GHZ basis states."""

    def __init__(self, n_qubits: int, weights: dict[GhzLabel, float]):
        if n_qubits < 2:
            raise ValueError("need at least 2 qubits")
        if n_qubits > MAX_QUBITS_FAST:
            raise ValueError(f"fast engine is bounded at {MAX_QUBITS_FAST} qubits")
        clean: dict[GhzLabel, float] = {}
        for label, w in weights.items():
            if label.n_qubits != n_qubits:
                raise ValueError(f"label {label} does not match n_qubits={n_qubits}")
            if w < -1e-10:
                raise ValueError(f"negative weight {w} for {label}")
            if w > 0.0:
                clean[label] = float(w)
        total = sum(clean.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"weights sum to {total}, expected 1")
        self.n_qubits = n_qubits
        self.weights = clean

    def weight(self, label: GhzLabel) -> float:
        return self.weights.get(label, 0.0)

    def items(self):
        return self.weights.items()

    def __repr__(self):
        return f"GhzDiagonalEnsemble(n_qubits={self.n_qubits}, {len(self.weights)} labels)"


def ensemble_fidelity(ens: GhzDiagonalEnsemble) -> float:
    """Weight of the target state (all-zero rep, sign +1)."""
    return ens.weight(target_label(ens.n_qubits))


def build_binary_ensemble(F: float, error_label: GhzLabel, n: int) -> GhzDiagonalEnsemble:
    """Two-component mixture: F on the target, 1-F on error_label."""
    if not 0.0 <= F <= 1.0:
        raise ValueError(f"F must be in [0, 1], got {F}")
    target = target_label(n)
    if error_label == target:
        warnings.warn("error_label equals the target; returning the pure target")
        return GhzDiagonalEnsemble(n, {target: 1.0})
    return GhzDiagonalEnsemble(n, {target: F, error_label: 1.0 - F})


def build_bitflip_ensemble(weights, n: int) -> GhzDiagonalEnsemble:
    """Mixture with weight[0] on the target and weight[i] on a flip of qubit i.

    All labels carry sign +1; the flip-on-qubit-1 pattern canonicalizes to the
    complement rep (e.g. '011' for n=3).
    """
    weights = list(weights)
    if len(weights) != n + 1:
        raise ValueError(f"need {n + 1} weights for n={n}, got {len(weights)}")
    if any(w < 0 for w in weights):
        raise ValueError("weights must be nonnegative")
    out: dict[GhzLabel, float] = {target_label(n): weights[0]}
    for i in range(1, n + 1):
        bits = "".join("1" if j == i - 1 else "0" for j in range(n))
        label = canonical_label(bits, +1)
        out[label] = out.get(label, 0.0) + weights[i]
    return GhzDiagonalEnsemble(n, out)


def build_werner(x: float, n: int) -> GhzDiagonalEnsemble:
    """x |phi+><phi+| + (1-x) I/2^n, expressed in the (complete) GHZ basis."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must be in [0, 1], got {x}")
    uniform = (1.0 - x) / (1 << n)
    weights = {label: uniform for label in all_labels(n)}
    weights[target_label(n)] += x
    return GhzDiagonalEnsemble(n, weights)


def ensemble_to_density(ens: GhzDiagonalEnsemble) -> np.ndarray:
    """Sum of w |label><label| as a dense 2^n x 2^n matrix."""
    dim = 1 << ens.n_qubits
    rho = np.zeros((dim, dim), dtype=complex)
    for label, w in ens.items():
        vec = ghz_label_to_state(label, ens.n_qubits)
        rho += w * np.outer(vec, vec.conj())
    return rho


@lru_cache(maxsize=None)
def hadamard_matrix(n: int) -> np.ndarray:
    """H^(x)n as a dense 2^n x 2^n matrix."""
    return reduce(np.kron, [_H1] * n)


def hadamard_all(obj: np.ndarray) -> np.ndarray:
    """Apply H on every qubit of a state vector or density matrix."""
    obj = np.asarray(obj)
    n = obj.shape[0].bit_length() - 1
    if 1 << n != obj.shape[0]:
        raise ValueError(f"dimension {obj.shape[0]} is not a power of two")
    H = hadamard_matrix(n)
    if obj.ndim == 1:
        return H @ obj
    if obj.ndim == 2:
        return H @ obj @ H
    raise ValueError("expected a vector or a square matrix")


def ghz_basis_matrix(n: int) -> np.ndarray:
    """Columns are the 2^n GHZ basis vectors in all_labels(n) order."""
    return np.column_stack([ghz_label_to_state(lab, n) for lab in all_labels(n)])


def random_ghz_diagonal(n: int, rng: np.random.Generator) -> GhzDiagonalEnsemble:
    """Random ensemble with Dirichlet(1) weights over all labels."""
    labels = all_labels(n)
    w = rng.dirichlet(np.ones(len(labels)))
    return GhzDiagonalEnsemble(n, dict(zip(labels, w)))


def is_valid_density(rho: np.ndarray, atol: float = ATOL) -> bool:
    """Hermitian, trace one, eigenvalues >= -1e-10."""
    if not np.allclose(rho, rho.conj().T, atol=atol):
        return False
    if abs(np.trace(rho) - 1.0) > atol:
        return False
    return bool(np.linalg.eigvalsh(rho).min() >= -1e-10)
