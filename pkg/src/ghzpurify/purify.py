"""Purification steps P1 (bit-flip correction) and P2 (phase-flip correction)
as closed-form maps on GHZ-diagonal ensembles.

Derivation of the closed forms (validated against the exact engine):

P1.  A pair of copies labelled (e1, s1), (e2, s2) passes the all-even parity
check iff e1 == e2, with probability 1/2; the surviving two-copy state is
(|e e> + s1 s2 |~e ~e>)/sqrt(2).  Measuring copy 2 in the rotated basis and
applying the parity-of-outcome phase correction leaves (e, s1*s2).  Under
theta = pi the all-odd branch (probability 1/2, same pairs) is recovered by
bit flips on copy 2 and gives the identical output, doubling the yield.

P2.  Both copies are rotated into the Hadamard frame, where the state with
label (e, s) is spread uniformly over the 2^(n-1) strings of weight parity s
with phases (-1)^(x.e).  The all-even check keeps pairs with s1 == s2 with
probability 2^-(n-1) regardless of e1, e2; after the X-basis measurement of
copy 2 (outcome m), the phase-flip pattern m on copy 1, and the final
Hadamard frame change, the kept copy carries the label (e1 xor e2, s).  The
all-odd branch pairs signs with s1 == s2 * (-1)^n, so it doubles the yield
only for even n; for odd n it admits opposite-sign pairs (output sign s1).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .ghz import GhzDiagonalEnsemble, GhzLabel
from .optics import DiscriminationMode, ModeKind

MIN_KEEP = 1e-300


class StepKind(str, Enum):
    P1 = "P1"
    P2 = "P2"


@dataclass
class StepReport:
    """Output ensemble plus bookkeeping for one purification step.

    branch_stats maps (parity verdict pattern, measurement outcome) to the
    probability of that kept branch; corrections_applied maps correction
    type to its probability mass.
    """

    output: GhzDiagonalEnsemble
    keep_probability: float
    branch_stats: dict[tuple[str, str], float] = field(default_factory=dict)
    corrections_applied: dict[str, float] = field(default_factory=dict)


def correction_for_outcome(step: StepKind, outcome: str) -> tuple[int, ...]:
    """Qubits (0-based) of the kept copy that receive a phase flip.

    P1: flip the first qubit iff the outcome has an odd number of ones.
    P2: flip every qubit where the outcome reads 1, cancelling the sign
    signature (-1)^(x.m) of the X-basis measurement.
    """
    if any(c not in "01" for c in outcome):
        raise ValueError(f"outcome must be a bit string, got {outcome!r}")
    if step is StepKind.P1:
        return (0,) if outcome.count("1") % 2 == 1 else ()
    if step is StepKind.P2:
        return tuple(i for i, c in enumerate(outcome) if c == "1")
    raise ValueError(f"unknown step kind {step!r}")


def _check_mode(ens: GhzDiagonalEnsemble, mode: DiscriminationMode):
    if mode.misclassification_probability != 0.0:
        raise ValueError("deterministic step maps require epsilon = 0; "
                         "use mc_sample_step for noisy readout")


def _finish(n: int, raw: dict[GhzLabel, float], keep: float,
            branch_stats, corrections) -> StepReport:
    if keep < MIN_KEEP:
        raise ValueError("keep probability underflowed; input is not purifiable")
    output = GhzDiagonalEnsemble(n, {lab: w / keep for lab, w in raw.items()})
    return StepReport(output, keep, branch_stats, corrections)


def _uniform_outcome_stats(n: int, patterns: dict[str, float]):
    """Split each kept parity pattern's mass uniformly over the 2^n outcomes."""
    stats = {}
    dim = 1 << n
    for pattern, mass in patterns.items():
        for m in range(dim):
            stats[(pattern, format(m, f"0{n}b"))] = mass / dim
    return stats


def _p1_corrections(n: int, keep: float):
    # Outcomes are uniform; half have odd parity and trigger the phase flip.
    return {"identity": keep / 2.0, "phase_flip": keep / 2.0}


def _p2_corrections(n: int, keep: float):
    dim = 1 << n
    return {"identity": keep / dim, "phase_flip": keep * (dim - 1) / dim}


def p1_step(ens: GhzDiagonalEnsemble, mode: DiscriminationMode) -> StepReport:
    """Bit-flip correction on two independent copies of the ensemble."""
    _check_mode(ens, mode)
    n = ens.n_qubits
    factor = 1.0 if mode.kind is ModeKind.EVEN_PLUS_ODD else 0.5

    by_rep: dict[str, dict[int, float]] = {}
    for label, w in ens.items():
        by_rep.setdefault(label.rep, {})[label.sign] = w

    raw: dict[GhzLabel, float] = {}
    keep = 0.0
    for rep, signs in by_rep.items():
        wp = signs.get(+1, 0.0)
        wm = signs.get(-1, 0.0)
        raw[GhzLabel(rep, +1)] = factor * (wp * wp + wm * wm)
        raw[GhzLabel(rep, -1)] = factor * 2.0 * wp * wm
        keep += factor * (wp + wm) ** 2

    patterns = {"E" * n: keep if factor == 0.5 else keep / 2.0}
    if mode.kind is ModeKind.EVEN_PLUS_ODD:
        patterns["O" * n] = keep / 2.0
    return _finish(n, raw, keep, _uniform_outcome_stats(n, patterns),
                   _p1_corrections(n, keep))


def p2_step(ens: GhzDiagonalEnsemble, mode: DiscriminationMode) -> StepReport:
    """Phase-flip correction via Hadamard-frame parity checking."""
    _check_mode(ens, mode)
    n = ens.n_qubits
    base = 2.0 ** -(n - 1)

    by_sign: dict[int, dict[int, float]] = {+1: {}, -1: {}}
    for label, w in ens.items():
        by_sign[label.sign][int(label.rep, 2)] = w

    raw: dict[GhzLabel, float] = {}
    keep = 0.0

    def accumulate(group1: dict[int, float], group2: dict[int, float], out_sign: int):
        nonlocal keep
        for e1, w1 in group1.items():
            for e2, w2 in group2.items():
                mass = base * w1 * w2
                rep = format(e1 ^ e2, f"0{n}b")
                label = GhzLabel(rep, out_sign)
                raw[label] = raw.get(label, 0.0) + mass
                keep += mass

    for s in (+1, -1):
        accumulate(by_sign[s], by_sign[s], s)
    even_keep = keep
    if mode.kind is ModeKind.EVEN_PLUS_ODD:
        if n % 2 == 0:
            # the all-odd branch mirrors the all-even one exactly
            for label in raw:
                raw[label] *= 2.0
            keep *= 2.0
        else:
            for s in (+1, -1):
                accumulate(by_sign[s], by_sign[-s], s)

    patterns = {"E" * n: even_keep}
    if mode.kind is ModeKind.EVEN_PLUS_ODD:
        patterns["O" * n] = keep - even_keep
    return _finish(n, raw, keep, _uniform_outcome_stats(n, patterns),
                   _p2_corrections(n, keep))


def apply_step(ens: GhzDiagonalEnsemble, step: StepKind,
               mode: DiscriminationMode) -> StepReport:
    return p1_step(ens, mode) if step is StepKind.P1 else p2_step(ens, mode)
