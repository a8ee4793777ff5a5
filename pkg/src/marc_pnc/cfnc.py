"""Complex-field network coding baseline, reconstructed for comparison.

In this scheme the relay forwards a complex linear combination
x_A + theta * x_B of its decoded pair instead of a many-to-one map, so its
transmit constellation has M^2 points.  The destination jointly decodes
both phases by minimum squared distance, assuming the relay forwarded its
hypothesised pair.

Reconstruction choices (recorded in sweep metadata):

* theta defaults to exp(i*pi/4), validated at startup to keep all M^2
  combined points distinct;
* the sources transmit in both phases with the same (a, b, c, d) split as
  the network-coded scheme, so frame structure and energies match exactly
  and the comparison isolates the relay-map difference;
* the relay scaling is a fixed constant making the mean combined-symbol
  energy 1, treated as perfectly known at the destination (a genie pilot;
  this can only favour the baseline).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .channel import ChannelRealization
from .destination import Branch, DecodeOutput
from .relay import relay_ml_decode
from .scheme import SchemeConstants
from .signalset import SignalSet


@dataclass(frozen=True)
class CfncConfig:
    """Relay combining coefficient and its energy normalisation."""

    theta: complex
    power_norm: float

    def __post_init__(self) -> None:
        if abs(abs(self.theta) - 1.0) > 1e-12:
            raise ValueError(f"|theta| must be 1, got {abs(self.theta)}")
        if not self.power_norm > 0:
            raise ValueError("power_norm must be positive")


DEFAULT_THETA = cmath.exp(1j * math.pi / 4.0)


def check_cfnc_uniqueness(s: SignalSet, theta: complex, tol: float = 1e-9) -> bool:
    """True iff all M^2 combined points x_a + theta*x_b are distinct."""
    sums = [xa + theta * xb for xa in s.points for xb in s.points]
    for i in range(len(sums)):
        for j in range(i + 1, len(sums)):
            if abs(sums[i] - sums[j]) <= tol:
                return False
    return True


def make_cfnc_config(s: SignalSet, theta: complex = DEFAULT_THETA) -> CfncConfig:
    """Validated config with power_norm set for unit mean relay energy."""
    if not check_cfnc_uniqueness(s, theta):
        raise ValueError(f"theta={theta!r} collapses distinct pairs on this constellation")
    mean_energy = sum(abs(xa + theta * xb) ** 2 for xa in s.points for xb in s.points) / s.m**2
    return CfncConfig(theta=theta, power_norm=1.0 / math.sqrt(mean_energy))


def relay_combined_symbol(cfg: CfncConfig, s: SignalSet, ia: int, ib: int) -> complex:
    return cfg.power_norm * (s.points[ia] + cfg.theta * s.points[ib])


def cfnc_destination_decode(
    y_d1: complex,
    y_d2: complex,
    h: ChannelRealization,
    k: SchemeConstants,
    s: SignalSet,
    cfg: CfncConfig,
) -> DecodeOutput:
    """Joint two-phase minimum-distance decoding over all M^2 pairs.

    Each hypothesis assumes the relay combined exactly that pair.  Ties
    resolve to the smallest (index_a, index_b); the branch field is always
    the trust-the-relay hypothesis since the baseline has no other.
    """
    root_es = math.sqrt(k.es)
    a1 = [h.h_ad * root_es * k.a * p for p in s.points]
    b1 = [h.h_bd * root_es * k.b * p for p in s.points]
    a2 = [h.h_ad * root_es * k.c * p for p in s.points]
    b2 = [h.h_bd * root_es * k.d * p for p in s.points]
    gr = h.h_rd * root_es * cfg.power_norm
    ra = [gr * p for p in s.points]
    rb = [gr * cfg.theta * p for p in s.points]

    best = math.inf
    out = (0, 0)
    for ia in range(s.m):
        c1 = y_d1 - a1[ia]
        c2 = y_d2 - a2[ia] - ra[ia]
        for ib in range(s.m):
            z1 = c1 - b1[ib]
            z2 = c2 - b2[ib] - rb[ib]
            v = z1.real * z1.real + z1.imag * z1.imag + z2.real * z2.real + z2.imag * z2.imag
            if v < best:
                best = v
                out = (ia, ib)
    return DecodeOutput(xa_idx=out[0], xb_idx=out[1], branch=Branch.RELAY_CORRECT)


def cfnc_run_frame(
    xa_idx: int,
    xb_idx: int,
    h: ChannelRealization,
    k: SchemeConstants,
    s: SignalSet,
    cfg: CfncConfig,
    z_r: complex,
    z_d1: complex,
    z_d2: complex,
) -> tuple[DecodeOutput, tuple[int, int]]:
    """One baseline frame: phase 1, relay detection and combining, phase 2,
    joint destination decoding.  Returns the decision and the relay's pair."""
    root_es = math.sqrt(k.es)
    xa = s.points[xa_idx]
    xb = s.points[xb_idx]
    y_r = h.h_ar * root_es * k.a * xa + h.h_br * root_es * k.b * xb + z_r
    y_d1 = h.h_ad * root_es * k.a * xa + h.h_bd * root_es * k.b * xb + z_d1
    relay_pair = relay_ml_decode(y_r, h, k, s)
    x_r = relay_combined_symbol(cfg, s, relay_pair[0], relay_pair[1])
    y_d2 = h.h_ad * root_es * k.c * xa + h.h_bd * root_es * k.d * xb + h.h_rd * root_es * x_r + z_d2
    return cfnc_destination_decode(y_d1, y_d2, h, k, s, cfg), relay_pair
