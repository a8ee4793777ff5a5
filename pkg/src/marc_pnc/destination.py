"""Destination decoders for the two-phase relay scheme.

Three decoders share the same frame inputs:

* ``min_euclidean_decode`` -- joint minimum squared Euclidean distance over
  both phases, trusting the relay blindly.  Loses a diversity order when
  the relay forwards a wrong network-coded symbol.
* ``novel_decode_exhaustive`` -- relay-error-aware rule: per candidate pair
  it takes the smaller of the trust-the-relay metric m1 and the
  relay-error metric m2 penalised by log(es), searching all relay symbols
  directly (O(M^3) work).  This is the reference implementation.
* ``fast_decode`` -- the same rule in O(M^2) via a QR decomposition of the
  2x3 equivalent channel.  Valid when the A (or B) weight matrix is
  Hurwitz-Radon orthogonal to the relay's, which forces the rotated
  channel entry r13 to vanish and decouples the x_A and x_R searches.

log(es) is the natural logarithm: the metrics are Gaussian
log-likelihoods, so base e is the only consistent reading.  Both aware
decoders require es >= 1 (the penalty must be non-negative for the
candidate-set rewrite m2 -> m3 to be valid) and enforce it at decode time.

Tie-breaking is pinned so the fast and exhaustive decoders agree
bit-for-bit:

* every argmin scans symbol indices ascending and keeps the first strict
  improvement;
* candidate pairs are scanned with x_B outermost (mirroring the fast
  algorithm's loop nesting), so pair ties resolve to the smallest
  (index_b, index_a);
* the branch comparison is strict: the relay-error branch wins exact ties.
  At es = 1 the penalty is zero and the relay-error branch, whose metric
  minimises over every relay symbol, can then never lose -- both decoders
  deterministically label such frames ``RELAY_ERROR``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .netmap import LatinSquare
from .numerics import CMatrix, qr_2x3
from .scheme import SchemeConstants, check_hr_orthogonal, weight_matrices
from .signalset import SignalSet


class Branch(enum.Enum):
    """Which hypothesis produced the decoded pair."""

    RELAY_CORRECT = "relay-correct-hypothesis"
    RELAY_ERROR = "relay-error-hypothesis"


@dataclass
class EvalCounter:
    """Counts candidate-metric evaluations, for complexity measurements."""

    n: int = 0

    def add(self, k: int) -> None:
        self.n += k


@dataclass(frozen=True)
class DecodeInput:
    """Everything the destination sees for one frame."""

    y_d1: complex
    y_d2: complex
    h_ad: complex
    h_bd: complex
    h_rd: complex
    constants: SchemeConstants
    signal_set: SignalSet
    relay_map: LatinSquare

    def __post_init__(self) -> None:
        if self.relay_map.order != self.signal_set.m:
            raise ValueError("relay map order and constellation size differ")


@dataclass(frozen=True)
class DecodeOutput:
    xa_idx: int
    xb_idx: int
    branch: Branch


class HrOrthogonalityError(ValueError):
    """Raised when neither weight-matrix pairing admits the fast algorithm."""


def _require_unit_snr(inp: DecodeInput) -> None:
    if inp.constants.es < 1.0:
        raise ValueError(f"relay-error-aware decoding requires es >= 1 (got {inp.constants.es})")


def _phase_terms(inp: DecodeInput):
    """Per-symbol signal terms for both phases: subtracting one entry from
    each list gives the noiseless hypothesis for a candidate triple."""
    k = inp.constants
    root_es = math.sqrt(k.es)
    ga1 = inp.h_ad * root_es * k.a
    gb1 = inp.h_bd * root_es * k.b
    ga2 = inp.h_ad * root_es * k.c
    gb2 = inp.h_bd * root_es * k.d
    gr = inp.h_rd * root_es
    pts = inp.signal_set.points
    return (
        [ga1 * p for p in pts],
        [gb1 * p for p in pts],
        [ga2 * p for p in pts],
        [gb2 * p for p in pts],
        [gr * p for p in pts],
    )


def _sq(z: complex) -> float:
    return z.real * z.real + z.imag * z.imag


def metric_m1(inp: DecodeInput, xa: complex, xb: complex) -> float:
    """Two-phase squared residual assuming the relay sent f(xa, xb)."""
    ia = inp.signal_set.index_of(xa)
    ib = inp.signal_set.index_of(xb)
    a1, b1, a2, b2, r2 = _phase_terms(inp)
    fidx = inp.relay_map.cells[ia][ib]
    return _sq(inp.y_d1 - a1[ia] - b1[ib]) + _sq(inp.y_d2 - a2[ia] - b2[ib] - r2[fidx])


def metric_m2(inp: DecodeInput, xa: complex, xb: complex) -> float:
    """Phase-1 residual plus the best phase-2 residual over relay symbols
    other than f(xa, xb) -- the relay-sent-something-else hypothesis."""
    ia = inp.signal_set.index_of(xa)
    ib = inp.signal_set.index_of(xb)
    a1, b1, a2, b2, r2 = _phase_terms(inp)
    fidx = inp.relay_map.cells[ia][ib]
    base2 = inp.y_d2 - a2[ia] - b2[ib]
    best = math.inf
    for r in range(inp.signal_set.m):
        if r == fidx:
            continue
        v = _sq(base2 - r2[r])
        if v < best:
            best = v
    return _sq(inp.y_d1 - a1[ia] - b1[ib]) + best


def metric_m3(inp: DecodeInput, xa: complex, xb: complex) -> float:
    """As m2 but minimising over every relay symbol; equals min(m1, m2)."""
    ia = inp.signal_set.index_of(xa)
    ib = inp.signal_set.index_of(xb)
    a1, b1, a2, b2, r2 = _phase_terms(inp)
    base2 = inp.y_d2 - a2[ia] - b2[ib]
    best = min(_sq(base2 - r2[r]) for r in range(inp.signal_set.m))
    return _sq(inp.y_d1 - a1[ia] - b1[ib]) + best


def metric_m4(inp: DecodeInput, xa: complex, xb: complex, xr: complex) -> float:
    """Two-phase residual with an explicit relay symbol, plus the log(es)
    relay-error penalty.  xa, xb, xr may be arbitrary complex values."""
    _require_unit_snr(inp)
    k = inp.constants
    root_es = math.sqrt(k.es)
    res1 = inp.y_d1 - inp.h_ad * root_es * k.a * xa - inp.h_bd * root_es * k.b * xb
    res2 = inp.y_d2 - inp.h_ad * root_es * k.c * xa - inp.h_bd * root_es * k.d * xb - inp.h_rd * root_es * xr
    return _sq(res1) + _sq(res2) + math.log(k.es)


def min_euclidean_decode(inp: DecodeInput, counter: EvalCounter | None = None) -> DecodeOutput:
    """Joint minimum-distance decoding that assumes the relay was right.

    Pair ties resolve to the smallest (index_a, index_b) lexicographically.
    """
    a1, b1, a2, b2, r2 = _phase_terms(inp)
    cells = inp.relay_map.cells
    m = inp.signal_set.m
    best = math.inf
    out = (0, 0)
    for ia in range(m):
        base1 = inp.y_d1 - a1[ia]
        for ib in range(m):
            v = _sq(base1 - b1[ib]) + _sq(inp.y_d2 - a2[ia] - b2[ib] - r2[cells[ia][ib]])
            if v < best:
                best = v
                out = (ia, ib)
    if counter is not None:
        counter.add(m * m)
    return DecodeOutput(xa_idx=out[0], xb_idx=out[1], branch=Branch.RELAY_CORRECT)


def novel_decode_exhaustive(inp: DecodeInput, counter: EvalCounter | None = None) -> DecodeOutput:
    """Relay-error-aware decoding by direct evaluation (O(M^3) work).

    Minimises min(m1, log(es) + m2) over all pairs.  The branch reported
    for the winning x_B compares the best trust-the-relay metric against
    the best penalised any-relay-symbol metric, exactly as the fast
    algorithm does, so the two implementations are interchangeable.
    """
    _require_unit_snr(inp)
    ln_es = math.log(inp.constants.es)
    a1, b1, a2, b2, r2 = _phase_terms(inp)
    cells = inp.relay_map.cells
    m = inp.signal_set.m

    # Per x_B: best m1 and best m3 = min(m1, m2) over x_A, first achiever.
    best1 = [math.inf] * m
    arg1 = [0] * m
    best3 = [math.inf] * m
    arg3 = [0] * m
    for ia in range(m):
        row = cells[ia]
        for ib in range(m):
            p1 = _sq(inp.y_d1 - a1[ia] - b1[ib])
            base2 = inp.y_d2 - a2[ia] - b2[ib]
            fidx = row[ib]
            p2_f = 0.0
            p2_other = math.inf
            for r in range(m):
                p2 = _sq(base2 - r2[r])
                if r == fidx:
                    p2_f = p2
                elif p2 < p2_other:
                    p2_other = p2
            m1 = p1 + p2_f
            m2 = p1 + p2_other
            m3 = m1 if m1 <= m2 else m2
            if m1 < best1[ib]:
                best1[ib] = m1
                arg1[ib] = ia
            if m3 < best3[ib]:
                best3[ib] = m3
                arg3[ib] = ia
    if counter is not None:
        counter.add(m * m * m)

    best_m = math.inf
    out = DecodeOutput(0, 0, Branch.RELAY_ERROR)
    for ib in range(m):
        if best1[ib] < best3[ib] + ln_es:
            mj, ia, br = best1[ib], arg1[ib], Branch.RELAY_CORRECT
        else:
            mj, ia, br = best3[ib] + ln_es, arg3[ib], Branch.RELAY_ERROR
        if mj < best_m:
            best_m = mj
            out = DecodeOutput(xa_idx=ia, xb_idx=ib, branch=br)
    return out


def phi_metrics(
    inp: DecodeInput,
    r: CMatrix,
    ytilde: tuple[complex, complex],
    xa: complex,
    xb: complex,
    xr: complex,
) -> tuple[float, float, float]:
    """The three rotated-coordinate metrics used by the fast algorithm.

    ``r`` must come from ``qr_2x3`` of this frame's equivalent channel and
    ``ytilde`` from rotating the received pair by the matching q*.  The
    second metric needs the network-coded point for (xa, xb); for values
    outside the constellation (no defined relay hypothesis) that term is
    taken as 0.
    """
    root_es = math.sqrt(inp.constants.es)
    try:
        ia = inp.signal_set.index_of(xa)
        ib = inp.signal_set.index_of(xb)
        fpoint = inp.signal_set.points[inp.relay_map.cells[ia][ib]]
    except ValueError:
        fpoint = 0.0j
    phi1 = _sq(ytilde[0] - r.at(0, 1) * xb * root_es - r.at(0, 0) * xa * root_es)
    phi2 = _sq(ytilde[1] - r.at(1, 1) * xb * root_es - r.at(1, 2) * fpoint * root_es)
    phi3 = _sq(ytilde[1] - r.at(1, 1) * xb * root_es - r.at(1, 2) * xr * root_es)
    return phi1, phi2, phi3


def equivalent_channel(inp: DecodeInput) -> CMatrix:
    """2x3 matrix taking (x_A, x_B, x_R) * sqrt(es) to the noiseless pair."""
    k = inp.constants
    return CMatrix.from_rows(
        [
            [k.a * inp.h_ad, k.b * inp.h_bd, 0.0j],
            [k.c * inp.h_ad, k.d * inp.h_bd, inp.h_rd],
        ]
    )


def fast_decode(inp: DecodeInput, counter: EvalCounter | None = None) -> DecodeOutput:
    """O(M^2) implementation of the relay-error-aware decoder.

    Requires the A/relay weight matrices to be Hurwitz-Radon orthogonal;
    if only the B/relay pair is, the algorithm runs with the source roles
    swapped.  If neither is, raises ``HrOrthogonalityError`` rather than
    silently falling back -- use ``novel_decode_exhaustive`` then.
    """
    _require_unit_snr(inp)
    wm = weight_matrices(inp.constants)
    if check_hr_orthogonal(wm.wa, wm.wr):
        swap = False
    elif check_hr_orthogonal(wm.wb, wm.wr):
        swap = True
    else:
        raise HrOrthogonalityError(
            "neither weight-matrix pairing is Hurwitz-Radon orthogonal; "
            "the O(M^2) algorithm does not apply -- use novel_decode_exhaustive"
        )

    k = inp.constants
    if swap:
        first = (k.b * inp.h_bd, k.d * inp.h_bd)
        second = (k.a * inp.h_ad, k.c * inp.h_ad)
        cells = inp.relay_map.transposed().cells
    else:
        first = (k.a * inp.h_ad, k.c * inp.h_ad)
        second = (k.b * inp.h_bd, k.d * inp.h_bd)
        cells = inp.relay_map.cells

    i_first, i_second, branch = _fast_core(
        inp.y_d1, inp.y_d2, first, second, inp.h_rd, k.es, inp.signal_set.points, cells, counter
    )
    if swap:
        return DecodeOutput(xa_idx=i_second, xb_idx=i_first, branch=branch)
    return DecodeOutput(xa_idx=i_first, xb_idx=i_second, branch=branch)


def _fast_core(
    y1: complex,
    y2: complex,
    first: tuple[complex, complex],
    second: tuple[complex, complex],
    h_rd: complex,
    es: float,
    points,
    cells,
    counter: EvalCounter | None,
) -> tuple[int, int, Branch]:
    """Shared loop of the fast algorithm, with the 'first' user occupying
    the resolved (upper-triangular) coordinate.  Returns first/second user
    indices plus the winning branch."""
    h = CMatrix.from_rows([[first[0], second[0], 0.0j], [first[1], second[1], h_rd]])
    q, r = qr_2x3(h)
    yt1 = q.at(0, 0).conjugate() * y1 + q.at(1, 0).conjugate() * y2
    yt2 = q.at(0, 1).conjugate() * y1 + q.at(1, 1).conjugate() * y2

    root_es = math.sqrt(es)
    t11 = [r.at(0, 0) * root_es * p for p in points]
    t12 = [r.at(0, 1) * root_es * p for p in points]
    t22 = [r.at(1, 1) * root_es * p for p in points]
    t23 = [r.at(1, 2) * root_es * p for p in points]
    ln_es = math.log(es)
    m = len(points)

    best_m = math.inf
    best = (0, 0, Branch.RELAY_ERROR)
    for jb in range(m):
        c1 = yt1 - t12[jb]
        c2 = yt2 - t22[jb]
        phi1 = [_sq(c1 - t) for t in t11]
        phi3 = [_sq(c2 - t) for t in t23]

        min1 = math.inf
        a2 = 0
        for i, v in enumerate(phi1):
            if v < min1:
                min1 = v
                a2 = i
        min3 = math.inf
        for v in phi3:
            if v < min3:
                min3 = v
        b1 = math.inf
        a1 = 0
        for i in range(m):
            v = phi1[i] + phi3[cells[i][jb]]
            if v < b1:
                b1 = v
                a1 = i
        b2 = min1 + min3

        if b1 < b2 + ln_es:
            mj, ai, br = b1, a1, Branch.RELAY_CORRECT
        else:
            mj, ai, br = b2 + ln_es, a2, Branch.RELAY_ERROR
        if mj < best_m:
            best_m = mj
            best = (ai, jb, br)
    if counter is not None:
        counter.add(2 * m * m)
    return best
