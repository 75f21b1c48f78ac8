"""Photon-counting detectors as Fock-diagonal POVMs, plus conditioning.

A detector with efficiency e registers each arriving photon independently with
probability e (so e plays the role of eta^2; the loss amplitude is
eta_tilde = sqrt(1-e)).  The POVM element for reading k photons out of n is
diagonal: C(n,k) e^k (1-e)^(n-k).  No dark counts are modeled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .fock import (
    Channel,
    ChannelLike,
    FockState,
    MixedState,
    ModeMismatchError,
    as_channels,
    inner_product,
)

_PRUNE_TOL = 1e-30


@dataclass(frozen=True)
class DetectorModel:
    """efficiency = probability a single arriving photon is registered (eta^2)."""

    efficiency: float
    resolves_photon_number: bool = True

    def __post_init__(self):
        if not 0.0 <= self.efficiency <= 1.0:
            raise ValueError(f"efficiency out of range [0, 1]: {self.efficiency}")


IDEAL = DetectorModel(1.0)


@dataclass(frozen=True)
class PovmElement:
    """Diagonal POVM element for detector reading k; coefficients indexed by n."""

    reading: int
    coefficients: tuple[float, ...]  # index n = 0 .. n_max

    def coefficient(self, n: int) -> float:
        if 0 <= n < len(self.coefficients):
            return self.coefficients[n]
        raise ValueError(f"photon number {n} outside tabulated range")


def povm_element(k: int, det: DetectorModel, n_max: int) -> PovmElement:
    """POVM element for reading k photons, tabulated for n = 0..n_max."""
    if k < 0:
        raise ValueError("reading must be non-negative")
    if k > n_max:
        raise ValueError(f"reading {k} exceeds n_max={n_max}")
    e = det.efficiency
    loss = 1.0 - e
    if det.resolves_photon_number:
        coeffs = tuple(
            math.comb(n, k) * e**k * loss ** (n - k) if n >= k else 0.0
            for n in range(n_max + 1)
        )
    else:
        # threshold detector: reading 0 = no click, 1 = click
        if k == 0:
            coeffs = tuple(loss**n for n in range(n_max + 1))
        elif k == 1:
            coeffs = tuple(1.0 - loss**n for n in range(n_max + 1))
        else:
            raise ValueError("threshold detectors only support readings 0 and 1")
    return PovmElement(k, coeffs)


@dataclass(frozen=True)
class SignatureEntry:
    channel: Channel
    reading: int
    detector: DetectorModel


@dataclass(frozen=True)
class DetectorSignature:
    """Required reading and detector model per detected channel."""

    entries: tuple[SignatureEntry, ...]

    def __post_init__(self):
        chans = [e.channel for e in self.entries]
        if len(set(chans)) != len(chans):
            raise ModeMismatchError("duplicate channel in detector signature")

    @classmethod
    def of(
        cls, readings: Mapping[ChannelLike, int], det: DetectorModel = IDEAL
    ) -> "DetectorSignature":
        """Same detector model on every listed channel."""
        entries = []
        for ch, k in readings.items():
            (chan,) = as_channels([ch])
            entries.append(SignatureEntry(chan, int(k), det))
        return cls(tuple(entries))

    @property
    def channels(self) -> tuple[Channel, ...]:
        return tuple(e.channel for e in self.entries)


def condition(state: FockState, sig: DetectorSignature) -> tuple[float, MixedState]:
    """Condition a pure state on a detector signature.

    Returns (probability, unnormalized conditional ensemble on the kept
    channels); the branch weights sum to the probability.  Exact for
    Fock-diagonal POVMs: the support is grouped by detected-channel occupation
    pattern, each group weighted by the product of POVM coefficients, and the
    detected channels are traced out.
    """
    chans = state.channels
    for entry in sig.entries:
        if entry.channel not in chans:
            raise ModeMismatchError(f"signature on unknown channel {entry.channel}")
    det_idx = [chans.index(e.channel) for e in sig.entries]
    kept = tuple(c for c in chans if c not in sig.channels)
    kept_idx = [chans.index(c) for c in kept]
    elements = [
        povm_element(e.reading, e.detector, state.n_max) for e in sig.entries
    ]

    groups: dict[tuple[int, ...], dict[tuple[int, ...], complex]] = {}
    for occ, a in state.amplitudes.items():
        pattern = tuple(occ[i] for i in det_idx)
        kept_occ = tuple(occ[i] for i in kept_idx)
        bucket = groups.setdefault(pattern, {})
        bucket[kept_occ] = bucket.get(kept_occ, 0.0 + 0.0j) + a

    weights: list[float] = []
    branches: list[tuple[float, FockState]] = []
    for pattern, amps in groups.items():
        povm_factor = math.prod(
            el.coefficient(n) for el, n in zip(elements, pattern)
        )
        if povm_factor == 0.0:
            continue
        mass = math.fsum(abs(a) ** 2 for a in amps.values())
        if mass <= _PRUNE_TOL:
            continue
        w = povm_factor * mass
        weights.append(w)
        branch = FockState(kept, amps, state.n_max).normalized()
        branches.append((w, branch))
    probability = math.fsum(weights)
    return probability, MixedState(tuple(branches))


def fidelity(rho: MixedState, target: FockState) -> float:
    """Tr[rho |target><target|] for a unit-weight ensemble."""
    total = rho.total_weight()
    if total <= 0.0:
        raise ValueError("fidelity of a zero-weight ensemble is undefined")
    if abs(total - 1.0) > 1e-9:
        raise ValueError(
            f"ensemble weight {total} != 1; renormalize before computing fidelity"
        )
    if rho.channels != target.channels:
        raise ModeMismatchError("ensemble and target live on different channels")
    return math.fsum(
        w * abs(inner_product(target, st)) ** 2 for w, st in rho.branches
    )


def closed_form_fidelity(gamma: float, eta: float) -> float:
    """Reference closed-form benchmark fidelity for the four-mode device.

    `eta` is the detection amplitude (the detection probability is eta**2);
    gamma is the two-photon fraction of the input.  Note: this benchmark's
    loss terms for two-photon inputs are inconsistent with exact simulation
    (see the acceptance tests); exact conditioning yields 1/(1 + eta_tilde^2)
    independent of gamma.
    """
    if gamma < 0.0:
        raise ValueError("gamma must be non-negative")
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta out of range [0, 1]")
    lt = 1.0 - eta**2  # eta_tilde squared
    return (2.0 + 5.0 * lt * gamma) / (2.0 + lt * (2.0 + 5.0 * gamma + 12.0 * gamma * lt))
