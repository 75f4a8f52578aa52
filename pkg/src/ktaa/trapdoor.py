"""Gadget trapdoors: generation and Gaussian preimage sampling.

A trapdoor pair holds A = [A_left | scale*G - A_left*R] together with the
short matrix R.  Preimage sampling follows the perturb-then-decode pattern:
draw a Gaussian perturbation p, decode the syndrome of v - A*p bit by bit
through the gadget, and output e = p + [R*z ; z].  The identity
A*[R*z ; z] = scale*G*z makes A*e = v hold unconditionally; the Gaussian
part only controls the output norm.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .core import Mat, Vec
from .gauss import sample_z
from .params import bits_for


class WidthTooSmall(ValueError):
    """Requested sampling width below the trapdoor's quality floor."""


def spectral_norm(rows, iters: int = 30) -> float:
    """Largest singular value of an integer matrix, by power iteration on
    R^T R.  Deterministic: the starting vector comes from a fixed seed."""
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    if nr == 0 or nc == 0:
        return 0.0
    prng = random.Random(0xD17A)
    v = [prng.random() + 0.5 for _ in range(nc)]
    est = 0.0
    for _ in range(iters):
        rv = [sum(rows[i][j] * v[j] for j in range(nc)) for i in range(nr)]
        w = [sum(rows[i][j] * rv[i] for i in range(nr)) for j in range(nc)]
        nrm = math.sqrt(sum(x * x for x in w))
        if nrm == 0.0:
            return 0.0
        v = [x / nrm for x in w]
        est = nrm
    # after convergence, est approximates s1^2 (Rayleigh growth of R^T R)
    return math.sqrt(est)


@dataclass
class TrapdoorPair:
    """Public matrix plus its short-R trapdoor.

    a        -- n x m public matrix over Z_q
    r        -- left_cols x (n*k) integer rows, the secret
    left_cols-- width of the uniform left block
    scale    -- gadget multiplier (must be invertible mod q to sample)
    quality  -- smallest admissible Gaussian width for sample_pre
    """

    a: Mat
    r: tuple
    left_cols: int
    scale: int = 1
    quality: float = 0.0

    @property
    def n(self) -> int:
        return self.a.nrows

    @property
    def m(self) -> int:
        return self.a.ncols

    @property
    def q(self) -> int:
        return self.a.mod

    @property
    def k(self) -> int:
        return bits_for(self.q)


def _quality(r_rows) -> float:
    return 1.3 * spectral_norm(r_rows) * math.sqrt(5.0)


def compose_pair(a_left: Mat, r_rows, scale: int = 1) -> TrapdoorPair:
    """Build [A_left | scale*G - A_left*R] from an existing short matrix."""
    q = a_left.mod
    n = a_left.nrows
    mbar = a_left.ncols
    k = bits_for(q)
    r_rows = tuple(tuple(int(x) for x in row) for row in r_rows)
    if len(r_rows) != mbar or any(len(row) != n * k for row in r_rows):
        raise ValueError("short matrix shape mismatch")
    ar = a_left.mul(Mat(q, [[x % q for x in row] for row in r_rows]))
    right = []
    for i in range(n):
        row = []
        for j in range(n):
            for t in range(k):
                g = (scale << t) % q if i == j else 0
                row.append((g - ar.rows[i][j * k + t]) % q)
        right.append(row)
    a = a_left.hstack(Mat(q, right))
    return TrapdoorPair(
        a=a, r=r_rows, left_cols=mbar, scale=scale % q, quality=_quality(r_rows)
    )


def trap_gen(n: int, m: int, q: int, rng) -> TrapdoorPair:
    """Uniform-looking A with a ternary trapdoor; needs m >= n*ceil(log q)+1."""
    k = bits_for(q)
    mbar = m - n * k
    if mbar < 1:
        raise ValueError(f"m={m} too small for n={n}, q={q} (need > {n * k})")
    a_left = Mat.uniform(q, n, mbar, rng)
    r_rows = tuple(
        tuple(rng.randrange(-1, 2) for _ in range(n * k)) for _ in range(mbar)
    )
    return compose_pair(a_left, r_rows, scale=1)


def _gadget_decode(pair: TrapdoorPair, w: Vec) -> list[int]:
    """Binary z with G*z = scale^{-1}*w (mod q), entrywise digits."""
    q = pair.q
    k = pair.k
    try:
        sinv = pow(pair.scale, -1, q)
    except ValueError as exc:
        raise ValueError(f"gadget scale {pair.scale} not invertible mod {q}") from exc
    z = []
    for wi in w.e:
        wq = (wi * sinv) % q
        z.extend((wq >> t) & 1 for t in range(k))
    return z


def sample_pre(pair: TrapdoorPair, v: Vec, sigma: float, rng) -> list[int]:
    """Gaussian-ish e with A*e = v (mod q).  Exact equality always holds;
    sigma only shapes the distribution, and must clear pair.quality."""
    if sigma < pair.quality:
        raise WidthTooSmall(
            f"width {sigma:.3f} below trapdoor quality {pair.quality:.3f}"
        )
    if v.mod != pair.q or len(v.e) != pair.n:
        raise ValueError("target shape mismatch")
    m = pair.m
    sigma_p = 0.95 * sigma
    p = [sample_z(rng, sigma_p) for _ in range(m)]
    w = v.sub(pair.a.vec(p))
    z = _gadget_decode(pair, w)
    mbar = pair.left_cols
    e = [
        p[i] + sum(pair.r[i][j] * z[j] for j in range(len(z)))
        for i in range(mbar)
    ]
    e.extend(p[mbar + j] + z[j] for j in range(len(z)))
    return e


def sample_pre_mat(pair: TrapdoorPair, targets: Mat, sigma: float, rng) -> list:
    """Column-wise preimages: returns a list of integer columns."""
    return [
        sample_pre(pair, Vec(targets.mod, targets.col(j)), sigma, rng)
        for j in range(targets.ncols)
    ]
