"""Tag-gadget signatures on short binary messages.

Keygen publishes A (uniform), B = A*R for ternary R, a syndrome target u and
the message-embedding matrix D.  A signature under tag tau is a short v with
[A | tau*G - B] * v = u + D*m.  Signing re-randomizes the syndrome with a
small committed vector so the published preimage is statistically decoupled
from R, then preimage-samples through the tau-scaled gadget; tau must be
invertible mod q for that, which the tag registry upstream guarantees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import GaussianSampler, Mat, Vec, gadget_mat, norm_inf
from .gauss import gauss_sample
from .params import ParamSet, bits_for
from .trapdoor import compose_pair, sample_pre


@dataclass(frozen=True)
class SepPublicKey:
    a: Mat  # n x m1
    b: Mat  # n x m2
    u: Vec  # n
    d: Mat  # n x m3 (system-wide message matrix)


@dataclass(frozen=True)
class SepSecretKey:
    r: tuple  # m1 x m2 ternary rows


@dataclass(frozen=True)
class SepSignature:
    tau: int
    v1: tuple  # m1 signed ints
    v2: tuple  # m2 signed ints


def norm_bounds(params: ParamSet) -> tuple[int, int]:
    b1 = int(params.sigma1 * math.log2(params.m1))
    b2 = int(params.sigma1 * math.log2(params.m2))
    return b1, b2


def sep_keygen(params: ParamSet, rng, d: Mat | None = None):
    q = params.q
    n = params.n
    k = bits_for(q)
    if params.m2 != n * k:
        raise ValueError("gadget width mismatch: m2 must equal n*bits(q)")
    a = Mat.uniform(q, n, params.m1, rng)
    r = tuple(
        tuple(rng.randrange(-1, 2) for _ in range(params.m2))
        for _ in range(params.m1)
    )
    b = a.mul(Mat(q, r))
    u = Vec.uniform(q, n, rng)
    if d is None:
        d = Mat.uniform(q, n, params.m3, rng)
    return SepPublicKey(a=a, b=b, u=u, d=d), SepSecretKey(r=r)


def _check_message(params: ParamSet, m_bits) -> tuple[int, ...]:
    m_bits = tuple(int(b) for b in m_bits)
    if len(m_bits) != params.m3 or any(b not in (0, 1) for b in m_bits):
        raise ValueError("message must be a binary vector of length m3")
    return m_bits


def sep_sign(
    params: ParamSet, sk: SepSecretKey, pk: SepPublicKey, m_bits, tau: int, rng
) -> SepSignature:
    m_bits = _check_message(params, m_bits)
    q = params.q
    if not 1 <= tau < params.qprime:
        raise ValueError("tag out of range")
    if math.gcd(tau, q) != 1:
        raise ValueError("tag not invertible mod q")
    pair = compose_pair(pk.a, sk.r, scale=tau)
    b1, b2 = norm_bounds(params)
    smp = GaussianSampler(params.sigma2)
    while True:
        r_commit = gauss_sample(smp, params.m1, rng)
        target = pk.u.add(pk.a.vec(r_commit)).add(pk.d.vec(m_bits))
        e = sample_pre(pair, target, params.sigma, rng)
        v1 = tuple(e[i] - r_commit[i] for i in range(params.m1))
        v2 = tuple(e[params.m1 :])
        if norm_inf(v1) <= b1 and norm_inf(v2) <= b2:
            return SepSignature(tau=tau, v1=v1, v2=v2)


def tau_matrix(params: ParamSet, pk: SepPublicKey, tau: int) -> Mat:
    """[A | tau*G - B]."""
    q = params.q
    g = gadget_mat(q, params.n, bits_for(q))
    right = Mat(
        q,
        [
            [(tau * g.rows[i][j] - pk.b.rows[i][j]) % q for j in range(params.m2)]
            for i in range(params.n)
        ],
    )
    return pk.a.hstack(right)


def sep_verify(params: ParamSet, pk: SepPublicKey, m_bits, sig: SepSignature) -> bool:
    try:
        m_bits = _check_message(params, m_bits)
    except ValueError:
        return False
    if not 1 <= sig.tau < params.qprime:
        return False
    if len(sig.v1) != params.m1 or len(sig.v2) != params.m2:
        return False
    b1, b2 = norm_bounds(params)
    if norm_inf(sig.v1) > b1 or norm_inf(sig.v2) > b2:
        return False
    at = tau_matrix(params, pk, sig.tau)
    lhs = at.vec(tuple(sig.v1) + tuple(sig.v2))
    rhs = pk.u.add(pk.d.vec(m_bits))
    return lhs == rhs
