"""Self-validation suite: oracle-vs-fast-engine equivalence, the Hadamard
grouping table, intermediate state reproduction and probability bookkeeping.

Used by both the `validate` CLI command and the test suite.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import exact
from .ghz import (GhzLabel, all_labels, ensemble_to_density, ghz_label_to_state,
                  hadamard_all, hadamard_matrix, random_ghz_diagonal)
from .optics import DiscriminationMode
from .purify import StepKind, apply_step, correction_for_outcome


@dataclass
class CheckResult:
    name: str
    passed: bool
    max_deviation: float
    detail: str = ""


def _vec(n: int, terms: dict[str, float]) -> np.ndarray:
    out = np.zeros(1 << n, dtype=complex)
    for bits, amp in terms.items():
        out[int(bits, 2)] = amp
    return out


def _match_up_to_phase(a: np.ndarray, b: np.ndarray) -> float:
    """Deviation of a from b after removing one global phase."""
    overlap = np.vdot(b, a)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.abs(a / phase - b).max())


# The eight rotated three-qubit GHZ states: H^(x)3 of (|e> + s|~e>)/sqrt(2)
# is supported on the strings of weight parity s with phases (-1)^(x.e).
def rotated_ghz_expansion(label: GhzLabel, n: int) -> np.ndarray:
    amps = np.zeros(1 << n, dtype=complex)
    e = int(label.rep, 2)
    want_odd = label.sign == -1
    for x in range(1 << n):
        if bin(x).count("1") % 2 == want_odd:
            amps[x] = (-1) ** bin(x & e).count("1")
    return amps / np.sqrt(2.0 ** (n - 1))


def check_h_grouping(n_max: int = 5) -> CheckResult:
    """Rotated plus-sign states live on even-weight strings, minus-sign on odd."""
    worst = 0.0
    for n in range(2, n_max + 1):
        for label in all_labels(n):
            got = hadamard_all(ghz_label_to_state(label, n))
            worst = max(worst, float(np.abs(got - rotated_ghz_expansion(label, n)).max()))
    return CheckResult("h_grouping", worst < 1e-12, worst)


def check_state_reproduction() -> CheckResult:
    """Kept two-copy states of the pure-input branches, up to a global phase."""
    s2 = 1.0 / np.sqrt(2.0)
    phi = ghz_label_to_state(GhzLabel("000", +1), 3)
    phi1 = ghz_label_to_state(GhzLabel("011", +1), 3)   # error on qubit 1
    phi3 = ghz_label_to_state(GhzLabel("001", +1), 3)   # error on qubit 3

    def kept(vec, branch, recover=True):
        pair = np.outer(vec, vec.conj())
        proj, p = exact.project_parity(exact.tensor_pair(pair), branch, recover)
        w, v = np.linalg.eigh(proj / p)
        return v[:, -1], p

    worst = 0.0
    cases = [
        (phi, "even", True, _vec(6, {"000000": s2, "111111": s2}), 0.5),
        (phi1, "even", True, _vec(6, {"100100": s2, "011011": s2}), 0.5),
        (phi, "odd", False, _vec(6, {"000111": s2, "111000": s2}), 0.5),
        (phi3, "odd", False, _vec(6, {"001110": s2, "110001": s2}), 0.5),
    ]
    for vec, branch, recover, expected, p_want in cases:
        got, p = kept(vec, branch, recover)
        worst = max(worst, _match_up_to_phase(got, expected), abs(p - p_want))

    # Phase-flip step: Hadamard-frame even-parity survivors of the binary
    # phase ensemble's pure branches.
    psi_p = hadamard_all(phi)
    psi_m = hadamard_all(ghz_label_to_state(GhzLabel("000", -1), 3))
    expect_p = _vec(6, {s: 0.5 for s in ("000000", "011011", "101101", "110110")})
    expect_m = _vec(6, {s: 0.5 for s in ("001001", "010010", "100100", "111111")})
    for vec, expected in ((psi_p, expect_p), (psi_m, expect_m)):
        got, p = kept(vec, "even")
        worst = max(worst, _match_up_to_phase(got, expected), abs(p - 0.25))
    return CheckResult("state_reproduction", worst < 1e-12, worst)


def check_p2_correction_table(n_max: int = 5,
                              correction=correction_for_outcome) -> CheckResult:
    """The X-outcome sign signature (-1)^(x.m) must be cancelled exactly.

    Drives every pure GHZ basis state through the exact phase-flip step; the
    shared bit pattern cancels between the two copies, so every kept branch
    must land on the all-zero-rep state with the input's sign.
    """
    worst = 0.0
    mode = DiscriminationMode.even_only()
    for n in range(2, n_max + 1):
        for label in all_labels(n):
            vec = ghz_label_to_state(label, n)
            rho = np.outer(vec, vec.conj())
            out, _ = exact.p2_exact(rho, mode, correction=correction)
            want = ghz_label_to_state(GhzLabel("0" * n, label.sign), n)
            expected = np.outer(want, want.conj())
            worst = max(worst, float(np.abs(out - expected).max()))
    return CheckResult("p2_correction_table", worst < 1e-10, worst)


def check_measurement_sign_patterns() -> CheckResult:
    """Copy-1 phases after the X-basis measurement equal (-1)^(x.m)."""
    phi = ghz_label_to_state(GhzLabel("000", +1), 3)
    worst = 0.0
    for sign, outcomes in ((+1, (0b000, 0b011, 0b101, 0b110)),
                           (-1, (0b001, 0b010, 0b100, 0b111))):
        vec = hadamard_all(ghz_label_to_state(GhzLabel("000", sign), 3))
        pair = exact.tensor_pair(np.outer(vec, vec.conj()))
        proj, p = exact.project_parity(pair, "even")
        rotated = exact.apply_copy2_unitary(proj / p, hadamard_matrix(3))
        r4 = rotated.reshape(8, 8, 8, 8)
        for m in outcomes:
            block = r4[:, m, :, m]
            w, v = np.linalg.eigh(block / block.trace())
            got = v[:, -1]
            want_odd = sign == -1
            expected = np.array(
                [(-1) ** bin(x & m).count("1") if bin(x).count("1") % 2 == want_odd
                 else 0.0 for x in range(8)], dtype=complex) / 2.0
            worst = max(worst, _match_up_to_phase(got, expected))
    return CheckResult("measurement_sign_patterns", worst < 1e-12, worst)


def check_oracle_equivalence(n_max: int = 4, seed: int = 7,
                             cases: int = 50) -> CheckResult:
    """Fast-engine diagonals vs exact-engine output on random ensembles."""
    rng = np.random.default_rng(seed)
    worst_diag = worst_keep = worst_res = 0.0
    modes = (DiscriminationMode.even_only(), DiscriminationMode.even_plus_odd())
    for n in range(2, n_max + 1):
        labels = all_labels(n)
        for c in range(cases):
            ens = random_ghz_diagonal(n, rng)
            rho = ensemble_to_density(ens)
            mode = modes[c % 2]
            for step in (StepKind.P1, StepKind.P2):
                fast = apply_step(ens, step, mode)
                rho_out, keep = exact.exact_step(rho, step, mode)
                out_ens, residual = exact.ghz_diagonal_extract(rho_out)
                diff = max(abs(fast.output.weight(lab) - out_ens.weight(lab))
                           for lab in labels)
                worst_diag = max(worst_diag, diff)
                worst_keep = max(worst_keep, abs(fast.keep_probability - keep))
                worst_res = max(worst_res, residual)
    ok = worst_diag < 1e-9 and worst_keep < 1e-12 and worst_res < 1e-10
    detail = (f"diag={worst_diag:.3e} keep={worst_keep:.3e} residual={worst_res:.3e}")
    return CheckResult("oracle_equivalence", ok, worst_diag, detail)


def check_probability_bookkeeping(seed: int = 11, cases: int = 20) -> CheckResult:
    """Even and odd parity branch probabilities sum to one."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for n in (2, 3):
        for _ in range(cases):
            rho = ensemble_to_density(random_ghz_diagonal(n, rng))
            pair = exact.tensor_pair(rho)
            total = 0.0
            for parties in range(1 << n):
                mask = _branch_mask(n, parties)
                total += float((pair.diagonal().real * mask).sum())
            worst = max(worst, abs(total - 1.0))
    return CheckResult("probability_bookkeeping", worst < 1e-12, worst)


def _branch_mask(n: int, odd_parties: int) -> np.ndarray:
    dim = 1 << n
    idx = np.arange(dim * dim)
    x, y = idx >> n, idx & (dim - 1)
    z = x ^ y
    want = odd_parties
    return np.array([(zz == want) for zz in z])


def run_validation(n_max: int = 4, seed: int = 7, cases: int = 50,
                   p2_correction=correction_for_outcome) -> list[CheckResult]:
    """All checks; p2_correction is an injection point for fault tests."""
    return [
        check_h_grouping(min(n_max + 1, 5)),
        check_state_reproduction(),
        check_measurement_sign_patterns(),
        check_p2_correction_table(n_max, correction=p2_correction),
        check_oracle_equivalence(n_max, seed, cases),
        check_probability_bookkeeping(seed),
    ]
