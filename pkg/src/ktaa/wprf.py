"""Rounded-product weak PRF.

Key s lives over the mid modulus q1; an input matrix multiplies it and the
result is floor-rounded down to the small modulus p.  The residual
u - gamma*round(u) always lands in [0, gamma] where gamma = q1/p, which is
what the proof relations encode.  Distinctness of outputs across keys is a
parameter-regime property, not an identity, so it is tested statistically
(and exhaustively only on the preset sized for it).
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Mat, Vec, round_vec
from .params import ParamSet


@dataclass(frozen=True)
class WprfKey:
    s: Vec  # dim n1 over q1


def wprf_keygen(params: ParamSet, rng) -> WprfKey:
    return WprfKey(Vec.uniform(params.q1, params.n1, rng))


def wprf_eval_full(params: ParamSet, key: WprfKey, a: Mat):
    """(pre-rounding product, rounded output); the pair feeds proof witnesses."""
    if a.mod != params.q1 or a.ncols != params.n1:
        raise ValueError("input matrix shape/modulus mismatch")
    u = a.vec(key.s)
    y = round_vec(u, params.p)
    return u, y


def wprf_eval(params: ParamSet, key: WprfKey, a: Mat) -> Vec:
    return wprf_eval_full(params, key, a)[1]


def wprf_residual(params: ParamSet, u: Vec, y: Vec) -> list[int]:
    """e with u = gamma*y + e and 0 <= e <= gamma, entrywise."""
    gamma = params.gamma
    e = [(ui - gamma * yi) for ui, yi in zip(u.e, y.e)]
    if any(not 0 <= x <= gamma for x in e):
        raise ValueError("residual out of band")
    return e
