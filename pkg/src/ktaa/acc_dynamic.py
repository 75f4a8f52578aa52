"""Dynamic accumulator with trapdoor-issued membership witnesses.

Indices 1..N-1 are encoded as all-ones blocks of length l inside a 0/1
indicator of length l*N.  The accumulator value is u = U*mvec + A*r with a
short Gaussian r kept by the issuer; a witness for index j is short w with
A*w + U*theta_j = u.  Additions/removals shift u by one block's worth of
U-columns, and every current witness repairs itself with a public-update
vector t_j = R_j * (+-1^l), where R_j is the j-th block of trapdoor
preimages of U's columns (materialized lazily from a stored seed, so the
order of materialization never changes the values).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .core import Mat, Vec, norm_inf
from .gauss import sample_z
from .params import ParamSet
from .trapdoor import TrapdoorPair, sample_pre, trap_gen


@dataclass(frozen=True)
class DynAccPub:
    u_mat: Mat  # n x l*N
    a: Mat      # n x mA


@dataclass
class DynAccKeys:
    params: ParamSet
    u_mat: Mat
    pair: TrapdoorPair
    r_seed: int
    _rcache: dict = field(default_factory=dict, repr=False)

    @property
    def pub(self) -> DynAccPub:
        return DynAccPub(u_mat=self.u_mat, a=self.pair.a)

    def r_block(self, j: int) -> list:
        """Columns of preimages for U's j-th block: A * col = U[:, (j-1)*l + t]."""
        p = self.params
        if not 1 <= j < p.N:
            raise ValueError("index out of range")
        cols = self._rcache.get(j)
        if cols is None:
            rng = random.Random(("dacc-rblock", self.r_seed, j))
            cols = [
                sample_pre(
                    self.pair,
                    self.u_mat.col((j - 1) * p.l + t),
                    p.s,
                    rng,
                )
                for t in range(p.l)
            ]
            self._rcache[j] = cols
        return cols


@dataclass(frozen=True)
class DynAccState:
    """Issuer-side accumulator snapshot: value, member set, and the Gaussian
    randomness r baked into u (kept because witness generation reuses it)."""

    u: Vec
    members: frozenset
    r: tuple


@dataclass(frozen=True)
class UpdateState:
    """Public repair data for one add/remove event."""

    j: int
    sign: int           # +1 add, -1 remove
    t_j: tuple          # mA signed ints


def indicator(params: ParamSet, j: int) -> Vec:
    """theta_j: all-ones block at position j inside l*N zeros."""
    if not 1 <= j < params.N:
        raise ValueError("index out of range")
    e = [0] * (params.l * params.N)
    for t in range(params.l):
        e[(j - 1) * params.l + t] = 1
    return Vec(params.q, e)


def member_vec(params: ParamSet, members) -> Vec:
    e = [0] * (params.l * params.N)
    for j in members:
        if not 1 <= j < params.N:
            raise ValueError("index out of range")
        for t in range(params.l):
            e[(j - 1) * params.l + t] = 1
    return Vec(params.q, e)


def dacc_keygen(params: ParamSet, rng) -> DynAccKeys:
    pair = trap_gen(params.n, params.mA, params.q, rng)
    u_mat = Mat.uniform(params.q, params.n, params.l * params.N, rng)
    return DynAccKeys(
        params=params, u_mat=u_mat, pair=pair, r_seed=rng.getrandbits(64)
    )


def dacc_accumulate(params: ParamSet, keys: DynAccKeys, members, rng) -> DynAccState:
    """Fresh accumulator over the member set."""
    r = tuple(sample_z(rng, params.s) for _ in range(params.mA))
    u = keys.u_mat.vec(member_vec(params, members)).add(keys.pair.a.vec(r))
    return DynAccState(u=u, members=frozenset(members), r=r)


def dacc_witgen(params: ParamSet, keys: DynAccKeys, state: DynAccState, i) -> list:
    """Witness for member i against the accumulator state."""
    if i not in state.members:
        raise ValueError("not a member")
    w = list(state.r)
    for j in sorted(state.members - {i}):
        block = keys.r_block(j)
        for col in block:
            for t in range(params.mA):
                w[t] += col[t]
    return w


def dacc_verify(params: ParamSet, pub: DynAccPub, u: Vec, j: int, w) -> bool:
    if not 1 <= j < params.N:
        return False
    w = list(w)
    if len(w) != params.mA:
        return False
    if norm_inf(w) > params.gamma_acc:
        return False
    lhs = pub.a.vec(w).add(pub.u_mat.vec(indicator(params, j)))
    return lhs == u


def dacc_update_acc(
    params: ParamSet, keys: DynAccKeys, j: int, state: DynAccState, add: bool
):
    """Apply one add/remove; returns (new_state, UpdateState)."""
    if add and j in state.members:
        raise ValueError("already a member")
    if not add and j not in state.members:
        raise ValueError("not a member")
    sign = 1 if add else -1
    delta = keys.u_mat.vec(indicator(params, j)).smul(sign)
    u_new = state.u.add(delta)
    block = keys.r_block(j)
    t_j = tuple(
        sign * sum(col[t] for col in block) for t in range(params.mA)
    )
    members = state.members | {j} if add else state.members - {j}
    new_state = DynAccState(u=u_new, members=frozenset(members), r=state.r)
    return new_state, UpdateState(j=j, sign=sign, t_j=t_j)


def dacc_update_wit(i: int, w, upd: UpdateState) -> list:
    """Blind witness repair for a bystander index i != upd.j.

    The i == j case is refused: an additive public repair vector satisfies
    A*t = u' - u and therefore fixes *any* stale witness, the subject's
    included, so permitting self-application would void revocation.  The
    subject of an add event gets a freshly issued witness instead, and the
    subject of a removal is left with a stale witness that no longer
    verifies -- which is the point.
    """
    if i == upd.j:
        raise ValueError("witness update excludes the updated index itself")
    if len(w) != len(upd.t_j):
        raise ValueError("witness dimension mismatch")
    return [wi + ti for wi, ti in zip(w, upd.t_j)]
