"""
QND parity readout with a cross-Kerr probe
==========================================

Two photons share cross-Kerr media with a coherent probe beam.  The probe
picks up a phase shift that depends only on whether the photons'
polarizations agree, so reading the phase out by X homodyne measurement
compares the photons without destroying them.

Run:  python demos/qnd_parity_readout.py
"""
import math

from ghzpurify.optics import (DiscriminationMode, KerrInteraction, ProbeBeam,
                              Verdict, classify_phase, discriminate,
                              kerr_evolve, qnd_parity_shift)

theta = math.pi / 8
kerr = KerrInteraction(theta)
probe = ProbeBeam(alpha=2.0)

# A single H photon leaves the probe alone, a single V photon advances it
# by theta (or the other way round, depending on which medium it hits).
print(f"Kerr phase per photon: theta = {theta:.4f} rad")
print(f"probe after 0 photons: phase {kerr_evolve(0, probe, kerr).accumulated_phase:.4f}")
print(f"probe after 1 photon:  phase {kerr_evolve(1, probe, kerr).accumulated_phase:.4f}")
print()

print("two-photon polarization -> probe shift class")
for pair in ("HH", "HV", "VH", "VV"):
    print(f"  {pair}: {qnd_parity_shift(pair).value}")
print()

# The even combinations (HH, VV) both shift the probe by theta, while the
# odd ones land on 0 or 2*theta.  Homodyne reading of the probe phase
# therefore classifies parity without measuring either photon.
for phase in (0.0, theta, 2 * theta):
    cls = classify_phase(phase, theta)
    verdict = discriminate(cls, DiscriminationMode.even_only(theta=theta))
    print(f"  probe phase {phase:.4f} -> {cls.value:7s} -> verdict {verdict.value}")
print()

# At theta = pi the 0 and 2*theta shifts become indistinguishable mod
# 2*pi, so an Odd verdict is unambiguous and the odd branch can be kept
# instead of discarded.  That is the EvenPlusOdd discrimination mode; it
# doubles the yield of every purification step.
mode = DiscriminationMode.even_plus_odd()
print(f"EvenPlusOdd mode requires theta = pi (got {mode.theta:.4f})")
for pair in ("HH", "HV", "VH", "VV"):
    verdict = discriminate(qnd_parity_shift(pair), mode)
    kept = "keep" if verdict is Verdict.EVEN else "keep (flip copy 2)"
    print(f"  {pair}: verdict {verdict.value:4s} -> {kept}")
