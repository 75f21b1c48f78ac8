"""Linear-optical elements as unitary transforms on creation operators.

A ModeTransform stores the matrix U with column j holding the image of channel
j's creation operator: a_j^dagger -> sum_i U[i, j] a_i^dagger.  Applying a
transform to a state expands these substitutions ket by ket.  The Kerr cross
phase gate is not a linear mode transform and acts directly on amplitudes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .fock import (
    Channel,
    ChannelLike,
    FockState,
    Mode,
    ModeMismatchError,
    TruncationError,
    as_channels,
)

UNITARY_TOL = 1e-12


class NonUnitaryError(ValueError):
    """A constructed matrix failed the unitarity check."""


@dataclass(frozen=True)
class BeamSplitterSpec:
    """Beam splitter with transmission T = cos^2(mu).

    The sign convention puts the minus sign on reflection off the second
    ("arrowed") input; `flip` moves the arrow to the first input.
    """

    transmission: float
    flip: bool = False

    def __post_init__(self):
        if not 0.0 <= self.transmission <= 1.0:
            raise ValueError(f"transmission out of range [0, 1]: {self.transmission}")


@dataclass(frozen=True)
class KerrGateSpec:
    """Cross-phase coupling tau, in radians per photon pair."""

    tau: float


class ModeTransform:
    """Unitary acting on an ordered tuple of channels."""

    __slots__ = ("channels", "matrix")

    def __init__(self, channels: Iterable[ChannelLike], matrix: np.ndarray):
        chans = as_channels(channels)
        mat = np.asarray(matrix, dtype=complex)
        if mat.shape != (len(chans), len(chans)):
            raise ValueError(f"matrix shape {mat.shape} for {len(chans)} channels")
        dev = np.linalg.norm(mat.conj().T @ mat - np.eye(len(chans)))
        if dev > UNITARY_TOL:
            raise NonUnitaryError(f"matrix is not unitary (deviation {dev:.3e})")
        mat.setflags(write=False)
        object.__setattr__(self, "channels", chans)
        object.__setattr__(self, "matrix", mat)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("ModeTransform is immutable")

    def dagger(self) -> "ModeTransform":
        return ModeTransform(self.channels, np.asarray(self.matrix).conj().T)

    def embedded(self, channels: Iterable[ChannelLike]) -> "ModeTransform":
        """Pad with identity onto a larger channel tuple."""
        chans = as_channels(channels)
        for c in self.channels:
            if c not in chans:
                raise ModeMismatchError(f"cannot embed: {c} missing from target")
        mat = np.eye(len(chans), dtype=complex)
        idx = [chans.index(c) for c in self.channels]
        mat[np.ix_(idx, idx)] = self.matrix
        return ModeTransform(chans, mat)

    def __repr__(self) -> str:
        labels = ",".join(str(c) for c in self.channels)
        return f"ModeTransform([{labels}])"


def identity_transform(channels: Iterable[ChannelLike]) -> ModeTransform:
    chans = as_channels(channels)
    return ModeTransform(chans, np.eye(len(chans)))


def matrix_transform(channels: Iterable[ChannelLike], matrix) -> ModeTransform:
    """Raw unitary block over the given channels (validated at construction)."""
    return ModeTransform(channels, np.asarray(matrix, dtype=complex))


def _mode_channels(m: ChannelLike) -> tuple[Channel, ...]:
    if isinstance(m, Mode):
        return m.channels
    return as_channels([m])


def beam_splitter(spec: BeamSplitterSpec, in1: ChannelLike, in2: ChannelLike) -> ModeTransform:
    """Two-port beam splitter; polarized inputs get the same block per polarization.

    With t = sqrt(T), r = sqrt(1-T):  in1 -> t in1 + r in2,  in2 -> t in2 - r in1.
    At T=1/2 this is the symmetric (p+q)/sqrt2, (q-p)/sqrt2 convention.
    """
    c1, c2 = _mode_channels(in1), _mode_channels(in2)
    if len(c1) != len(c2):
        raise ModeMismatchError("beam splitter inputs must both be polarized or both not")
    if set(c1) & set(c2):
        raise ModeMismatchError("beam splitter inputs must be distinct")
    t = math.sqrt(spec.transmission)
    r = math.sqrt(1.0 - spec.transmission)
    if spec.flip:
        block = np.array([[t, r], [-r, t]])
    else:
        block = np.array([[t, -r], [r, t]])
    chans = c1 + c2
    mat = np.zeros((len(chans), len(chans)), dtype=complex)
    for k in range(len(c1)):
        i, j = k, k + len(c1)
        mat[np.ix_([i, j], [i, j])] = block
    return ModeTransform(chans, mat)


def phase_shifter(phi: float, mode: ChannelLike) -> ModeTransform:
    chans = _mode_channels(mode)
    return ModeTransform(chans, np.exp(1j * phi) * np.eye(len(chans)))


def polarization_rotator(angle: float, mode: Mode) -> ModeTransform:
    """SU(2) rotation mixing the H and V channels of one polarized mode."""
    if not (isinstance(mode, Mode) and mode.polarized):
        raise ModeMismatchError("polarization rotator needs a polarized mode")
    c, s = math.cos(angle), math.sin(angle)
    # columns: images of H and V
    mat = np.array([[c, -s], [s, c]], dtype=complex)
    return ModeTransform(mode.channels, mat)


def polarizing_beam_splitter(in1: Mode, in2: Mode) -> ModeTransform:
    """H transmitted, V swapped between the two spatial modes."""
    for m in (in1, in2):
        if not (isinstance(m, Mode) and m.polarized):
            raise ModeMismatchError("polarizing beam splitter needs polarized modes")
    if in1.spatial == in2.spatial:
        raise ModeMismatchError("polarizing beam splitter inputs must be distinct")
    h1, v1 = in1.channels
    h2, v2 = in2.channels
    chans = (h1, v1, h2, v2)
    mat = np.zeros((4, 4), dtype=complex)
    mat[0, 0] = 1.0  # H stays
    mat[2, 2] = 1.0
    mat[3, 1] = 1.0  # V crosses
    mat[1, 3] = 1.0
    return ModeTransform(chans, mat)


def compose(t1: ModeTransform, t2: ModeTransform) -> ModeTransform:
    """Transform equal to t1 followed by t2 (identity-padded on the union)."""
    chans = list(t1.channels)
    for c in t2.channels:
        if c not in chans:
            chans.append(c)
    u1 = t1.embedded(chans).matrix
    u2 = t2.embedded(chans).matrix
    return ModeTransform(chans, u2 @ u1)


def apply(t: ModeTransform, state: FockState) -> FockState:
    """Apply the transform to a state by creation-operator substitution."""
    for c in t.channels:
        if c not in state.channels:
            raise ModeMismatchError(f"transform channel {c} not in state")
    full = t.embedded(state.channels)
    mat = full.matrix
    n_ch = len(state.channels)
    n_max = state.n_max
    zero = (0,) * n_ch

    out: dict[tuple[int, ...], complex] = {}
    for occ, amp in state.amplitudes.items():
        # start from amp / sqrt(prod occ!) and multiply one linear form per photon
        coeff = amp / math.sqrt(math.prod(math.factorial(n) for n in occ))
        poly: dict[tuple[int, ...], complex] = {zero: coeff}
        for src in range(n_ch):
            column = mat[:, src]
            for _ in range(occ[src]):
                new_poly: dict[tuple[int, ...], complex] = {}
                for mon, c0 in poly.items():
                    for dst in range(n_ch):
                        cij = column[dst]
                        if cij == 0.0:
                            continue
                        if mon[dst] + 1 > n_max:
                            raise TruncationError(
                                f"apply overflow on {state.channels[dst]}: n_max={n_max}"
                            )
                        new = mon[:dst] + (mon[dst] + 1,) + mon[dst + 1 :]
                        new_poly[new] = new_poly.get(new, 0.0 + 0.0j) + c0 * cij
                poly = new_poly
        for mon, c0 in poly.items():
            ket_amp = c0 * math.sqrt(math.prod(math.factorial(n) for n in mon))
            out[mon] = out.get(mon, 0.0 + 0.0j) + ket_amp
    return FockState(state.channels, out, n_max)


def kerr_gate(
    spec: KerrGateSpec, a: ChannelLike, b: ChannelLike, state: FockState
) -> FockState:
    """Cross-phase gate: ket |n_a, n_b> acquires phase exp(-i tau n_a n_b)."""
    (ca,) = as_channels([a])
    (cb,) = as_channels([b])
    for c in (ca, cb):
        if c not in state.channels:
            raise ModeMismatchError(f"channel {c} not in state")
    ia, ib = state.channels.index(ca), state.channels.index(cb)
    amps = {
        occ: amp * complex(np.exp(-1j * spec.tau * occ[ia] * occ[ib]))
        for occ, amp in state.amplitudes.items()
    }
    return FockState(state.channels, amps, state.n_max)
