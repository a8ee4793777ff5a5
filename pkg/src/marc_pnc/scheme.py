"""Transmit-scheme constants, weight matrices, and the two design checks.

The scheme splits each source's unit transmission energy between the two
phases through complex constants (a, c) for source A and (b, d) for source
B.  Two algebraic properties of those constants decide everything
downstream:

* full rank of every restricted codeword difference matrix (both symbol
  differences nonzero) -- necessary for second-order diversity;
* Hurwitz-Radon orthogonality of the A and relay weight matrices -- the
  sufficient condition for the O(M^2) fast decoder.

``example1_constants`` is the shipped default: a=1, b=1/sqrt(2), c=0,
d=1/sqrt(2), which satisfies both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .numerics import CMatrix, cmat_mul, conj_transpose, det2
from .signalset import SignalSet, difference_set

_ENERGY_TOL = 1e-12


@dataclass(frozen=True)
class SchemeConstants:
    """Phase-split constants and the per-node transmission energy es.

    es doubles as the SNR since all additive noises have unit variance.
    """

    a: complex
    b: complex
    c: complex
    d: complex
    es: float

    def __post_init__(self) -> None:
        ea = abs(self.a) ** 2 + abs(self.c) ** 2
        eb = abs(self.b) ** 2 + abs(self.d) ** 2
        if abs(ea - 1.0) > _ENERGY_TOL:
            raise ValueError(f"|a|^2+|c|^2 = {ea} != 1")
        if abs(eb - 1.0) > _ENERGY_TOL:
            raise ValueError(f"|b|^2+|d|^2 = {eb} != 1")
        if not self.es > 0:
            raise ValueError(f"es must be positive, got {self.es}")

    def with_es(self, es: float) -> "SchemeConstants":
        return SchemeConstants(self.a, self.b, self.c, self.d, es)


def example1_constants(es: float) -> SchemeConstants:
    """The default constant choice a=1, b=d=1/sqrt(2), c=0."""
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    return SchemeConstants(a=1.0 + 0.0j, b=inv_sqrt2 + 0.0j, c=0.0j, d=inv_sqrt2 + 0.0j, es=es)


@dataclass(frozen=True)
class WeightMatrices:
    """Per-node 3x2 weights: wa acts on x_A, wb on x_B, wr on the relay symbol."""

    wa: CMatrix
    wb: CMatrix
    wr: CMatrix


def weight_matrices(k: SchemeConstants) -> WeightMatrices:
    z = 0.0j
    wa = CMatrix.from_rows([[k.a, k.c], [z, z], [z, z]])
    wb = CMatrix.from_rows([[z, z], [k.b, k.d], [z, z]])
    wr = CMatrix.from_rows([[z, z], [z, z], [z, 1.0 + 0.0j]])
    return WeightMatrices(wa=wa, wb=wb, wr=wr)


def codeword_matrix(k: SchemeConstants, xa: complex, xb: complex, xr: complex) -> CMatrix:
    """3x2 matrix whose columns are the two phases' noiseless transmit mix."""
    return CMatrix.from_rows([[k.a * xa, k.c * xa], [k.b * xb, k.d * xb], [0.0j, xr]])


def restricted_diff_matrix(k: SchemeConstants, da: complex, db: complex) -> CMatrix:
    """Top 2x2 block of a codeword difference matrix for differences (da, db)."""
    return CMatrix.from_rows([[k.a * da, k.c * da], [k.b * db, k.d * db]])


def check_full_rank_condition(k: SchemeConstants, s: SignalSet, tol: float = 1e-9) -> bool:
    """True iff |det| of every restricted difference matrix with both
    differences nonzero exceeds tol.

    Zero-difference pairs are excluded: those matrices have a zero row and
    can never be full rank, regardless of the constants.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    diffs = [d for d in difference_set(s) if d != 0]
    for da in diffs:
        for db in diffs:
            if abs(det2(restricted_diff_matrix(k, da, db))) <= tol:
                return False
    return True


def check_hr_orthogonal(x: CMatrix, y: CMatrix, tol: float = 1e-12) -> bool:
    """True iff x @ y* + y @ x* vanishes (entrywise max below tol)."""
    if (x.rows, x.cols) != (y.rows, y.cols):
        raise ValueError("shape mismatch")
    if tol <= 0:
        raise ValueError("tol must be positive")
    total = cmat_mul(x, conj_transpose(y)).add(cmat_mul(y, conj_transpose(x)))
    return total.inf_norm() <= tol
