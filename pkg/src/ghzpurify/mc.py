"""Monte Carlo cross-check: stochastic sampling of purification steps.

Label pairs are drawn from the ensemble, each copy is collapsed to one of
its computational-basis support strings (for P2, to a Hadamard-frame support
string), and the per-party parity verdicts are simulated, including optional
homodyne misclassification.  The per-party verdict logic mirrors
optics.qnd_parity_shift + optics.discriminate in vectorized form (the
equivalence is asserted in the test suite).
"""
from __future__ import annotations

import numpy as np

from .ghz import GhzDiagonalEnsemble, GhzLabel
from .optics import DiscriminationMode, ModeKind
from .purify import StepKind, StepReport


def _support_samples(reps: np.ndarray, signs: np.ndarray, n: int,
                     step: StepKind, rng: np.random.Generator) -> np.ndarray:
    """One computational string per trial from each copy's uniform support."""
    trials = reps.shape[0]
    full = (1 << n) - 1
    if step is StepKind.P1:
        # Support of (e, s) is {e, ~e}, each with probability 1/2.
        flip = rng.integers(0, 2, size=trials, dtype=np.int64)
        return np.where(flip == 1, reps ^ full, reps)
    # Hadamard frame: uniform over the 2^(n-1) strings of weight parity s.
    half = np.arange(1 << (n - 1), dtype=np.int64)
    parity = np.zeros_like(half)
    for b in range(n - 1):
        parity ^= (half >> b) & 1
    even_strings = (half << 1) | parity          # last bit fixes even weight
    odd_strings = even_strings ^ 1
    idx = rng.integers(0, 1 << (n - 1), size=trials)
    return np.where(signs == 1, even_strings[idx], odd_strings[idx])


def mc_sample_step(ens: GhzDiagonalEnsemble, step: StepKind,
                   mode: DiscriminationMode, trials: int, seed: int) -> StepReport:
    """Empirical StepReport from `trials` sampled copy pairs.

    keep_probability counts every kept trial; with epsilon > 0 some kept
    trials come from misread mismatched branches, whose post-selected state
    is not a GHZ basis state.  Those are tallied under the branch_stats key
    ("spurious", "*") and excluded from the output ensemble.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n = ens.n_qubits
    full = (1 << n) - 1
    rng = np.random.default_rng(seed)

    labels = sorted(ens.weights, key=lambda lab: (lab.rep, -lab.sign))
    probs = np.array([ens.weights[lab] for lab in labels])
    reps = np.array([int(lab.rep, 2) for lab in labels], dtype=np.int64)
    signs = np.array([lab.sign for lab in labels], dtype=np.int64)

    i1 = rng.choice(len(labels), size=trials, p=probs)
    i2 = rng.choice(len(labels), size=trials, p=probs)
    x = _support_samples(reps[i1], signs[i1], n, step, rng)
    y = _support_samples(reps[i2], signs[i2], n, step, rng)
    z = x ^ y

    if mode.kind is ModeKind.SIX_MODE_PBS:
        # Photon-number post-selection; the scalar epsilon does not apply.
        kept = z == 0
        all_even = kept
        all_odd = np.zeros_like(kept)
    else:
        shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
        odd_party = ((z[:, None] >> shifts[None, :]) & 1).astype(bool)
        eps = mode.misclassification_probability
        if eps > 0.0:
            odd_party = odd_party ^ (rng.random((trials, n)) < eps)
        all_even = ~odd_party.any(axis=1)
        all_odd = odd_party.all(axis=1)
        kept = all_even | (all_odd if mode.kind is ModeKind.EVEN_PLUS_ODD else False)

    genuine = kept & ((z == 0) | (z == full))
    spurious_count = int(kept.sum() - genuine.sum())

    # Output labels of genuinely kept trials (corrections are deterministic
    # given the measurement outcome, so the final label does not depend on it).
    if step is StepKind.P1:
        out_rep = reps[i1][genuine]
        out_sign = (signs[i1] * signs[i2])[genuine]
    else:
        out_rep = (reps[i1] ^ reps[i2])[genuine]
        out_sign = signs[i1][genuine]

    # Simulated measurement outcomes, for the correction tally only.
    m = rng.integers(0, 1 << n, size=int(genuine.sum()))
    m_parity = np.zeros_like(m)
    for b in range(n):
        m_parity ^= (m >> b) & 1
    if step is StepKind.P1:
        flips = int(m_parity.sum())
    else:
        flips = int((m != 0).sum())
    corrections = {"identity": (len(m) - flips) / trials,
                   "phase_flip": flips / trials}

    if genuine.sum() == 0:
        raise ValueError("no genuinely kept trials; increase trials")
    key = out_rep * 2 + (out_sign == -1)
    counts = np.bincount(key, minlength=2 << n)
    weights = {}
    for k in np.nonzero(counts)[0]:
        label = GhzLabel(format(int(k) >> 1, f"0{n}b"), -1 if k & 1 else +1)
        weights[label] = counts[k] / genuine.sum()
    output = GhzDiagonalEnsemble(n, weights)

    stats = {("E" * n, "*"): float((all_even & kept).sum()) / trials}
    if mode.kind is ModeKind.EVEN_PLUS_ODD:
        stats[("O" * n, "*")] = float((all_odd & kept).sum()) / trials
    if spurious_count:
        stats[("spurious", "*")] = spurious_count / trials
    return StepReport(output, float(kept.sum()) / trials, stats, corrections)
