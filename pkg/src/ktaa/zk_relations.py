"""Statement compilation for the authentication proof.

Every clause of the scheme's big proof-of-knowledge is reduced to one shared
quadratic relation over Z_q: a sparse linear system A*x = y together with a
set M of index triples (h, i, j) asserting x[h] = x[i]*x[j].  Binarity of a
coordinate is the triple (i, i, i) — over the prime-power modulus q the only
idempotents are 0 and 1.  Statements over the smaller moduli q1 and p enter
multiplied by q/q1 resp. q/p, which embeds their solution sets exactly.

Each compiler returns (instance, witness_builder); the builder maps honest
protocol values to a satisfying witness vector.  `conjoin` glues instances
that share variables (key, output, message, tag bases, ...) into the single
instance the proof backend consumes.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

from .acc_static import hash_node
from .core import (
    Mat,
    Vec,
    bin_vec,
    flatten_rows,
    lnsw_decompose,
    lnsw_gadget,
    vdec_weights,
    vdec_widths,
)
from .params import ParamSet, bits_for
from .serial import ser_mat


@dataclass(frozen=True)
class RStarInstance:
    q: int
    nvars: int
    rows: tuple      # ((coeffs, target), ...), coeffs = ((var, coef), ...)
    triples: tuple   # ((h, i, j), ...): x[h] = x[i] * x[j] mod q
    segments: dict   # name -> tuple of variable indices
    conjoin_maps: tuple = ()  # per-member var -> global var (set by conjoin)

    @property
    def witness_len(self) -> int:
        return self.nvars

    @property
    def m_size(self) -> int:
        return len(self.triples)


def check_instance(inst: RStarInstance, x) -> bool:
    x = [int(v) % inst.q for v in x]
    if len(x) != inst.nvars:
        raise ValueError(
            f"witness length {len(x)} != instance width {inst.nvars}"
        )
    q = inst.q
    for coeffs, target in inst.rows:
        acc = 0
        for var, coef in coeffs:
            acc += coef * x[var]
        if acc % q != target:
            return False
    for h, i, j in inst.triples:
        if x[h] != (x[i] * x[j]) % q:
            return False
    return True


class _Builder:
    """Accumulates segments/rows/triples, then freezes an instance."""

    def __init__(self, q: int):
        self.q = q
        self.n = 0
        self.segments = {}
        self.rows = []
        self.triples = []

    def seg(self, name: str, length: int) -> tuple:
        if name in self.segments:
            raise ValueError(f"duplicate segment {name}")
        idx = tuple(range(self.n, self.n + length))
        self.segments[name] = idx
        self.n += length
        return idx

    def row(self, coeffs: dict, target: int):
        q = self.q
        packed = tuple(
            (var, coef % q) for var, coef in coeffs.items() if coef % q
        )
        self.rows.append((packed, target % q))

    def triple(self, h: int, i: int, j: int):
        self.triples.append((h, i, j))

    def binarity(self, indices):
        for i in indices:
            self.triple(i, i, i)

    def build(self) -> RStarInstance:
        return RStarInstance(
            q=self.q,
            nvars=self.n,
            rows=tuple(self.rows),
            triples=tuple(self.triples),
            segments=dict(self.segments),
        )


# --- shared derived quantities -------------------------------------------


def clause_constants(params: ParamSet) -> dict:
    """Every digit/bound count the compilers and the length report share."""
    b1 = int(params.sigma1 * math.log2(params.m1))
    b2 = int(params.sigma1 * math.log2(params.m2))
    d_len = params.mD * params.n1 * params.kprime
    blocksize = d_len // params.b_blocks
    return {
        "kg": params.gamma.bit_length(),          # range digits for [0, gamma]
        "kdg": (2 * params.gamma1).bit_length(),  # range digits for [0, 2*gamma1]
        "kq": bits_for(params.qprime),            # tag bits
        "b1": b1,
        "b2": b2,
        "ka1": (2 * b1).bit_length(),
        "ka": (2 * b2).bit_length(),
        "d_len": d_len,
        "blocksize": blocksize,
        "digitlen": (blocksize * ((1 << params.iota) - 1)).bit_length(),
    }


def _wprf_range_rows(bld, params, useg, ebar, yseg=None, y_pub=None):
    """Rows 'u = gamma*y + lnsw(ebar)' lifted by q/q1; y either hidden
    (yseg) or public (y_pub)."""
    lift = params.q // params.q1
    g1 = lnsw_gadget(params.gamma)
    kg = len(g1)
    for i in range(len(useg)):
        coeffs = {useg[i]: lift}
        for t in range(kg):
            coeffs[ebar[i * kg + t]] = -lift * g1[t]
        if yseg is not None:
            coeffs[yseg[i]] = -lift * params.gamma
            bld.row(coeffs, 0)
        else:
            bld.row(coeffs, lift * params.gamma * y_pub[i])


# --- A.1-style: hidden key, hidden input, public output ------------------


def compile_wprf_preimage_key(y_pub: Vec, params: ParamSet):
    """Knowledge of key s and input matrix a with round(a*s) = y_pub.

    Layout (s || a || v || u || ebar): a is the row-major flattening of the
    hidden input, v the Hadamard products v[i,j] = a[i,j]*s[j], u the
    pre-rounding sums, ebar the range digits of u - gamma*y_pub.
    """
    m, n = params.mD, params.n1
    if y_pub.mod != params.p or len(y_pub) != m:
        raise ValueError("public output must be an mD-vector mod p")
    cc = clause_constants(params)
    kg = cc["kg"]
    lift = params.q // params.q1
    bld = _Builder(params.q)
    s = bld.seg("s", n)
    a = bld.seg("a", m * n)
    v = bld.seg("v", m * n)
    u = bld.seg("u", m)
    ebar = bld.seg("ebar", kg * m)
    for i in range(m):
        coeffs = {v[i * n + j]: lift for j in range(n)}
        coeffs[u[i]] = -lift
        bld.row(coeffs, 0)
    _wprf_range_rows(bld, params, u, ebar, y_pub=y_pub.e)
    bld.binarity(ebar)
    for i in range(m):
        for j in range(n):
            bld.triple(v[i * n + j], a[i * n + j], s[j])
    inst = bld.build()

    def witness(s_vec: Vec, a_mat: Mat):
        q1 = params.q1
        x = [0] * inst.nvars
        for j, sj in enumerate(s_vec.e):
            x[s[j]] = sj
        for i in range(m):
            for j in range(n):
                aij = a_mat.rows[i][j]
                x[a[i * n + j]] = aij
                x[v[i * n + j]] = (aij * s_vec.e[j]) % params.q
        for i in range(m):
            ui = sum(a_mat.rows[i][j] * s_vec.e[j] for j in range(n)) % q1
            x[u[i]] = ui
            e = ui - params.gamma * y_pub.e[i]
            for t, bit in enumerate(lnsw_decompose(e, params.gamma)):
                x[ebar[i * kg + t]] = bit
        return x

    return inst, witness


# --- A.2-style: everything hidden ----------------------------------------


def compile_wprf_hidden_all(params: ParamSet):
    """As above, but the rounded output is hidden too: layout
    (s || a || v || u || ebar || y), target all zero."""
    m, n = params.mD, params.n1
    cc = clause_constants(params)
    kg = cc["kg"]
    lift = params.q // params.q1
    bld = _Builder(params.q)
    s = bld.seg("s", n)
    a = bld.seg("a", m * n)
    v = bld.seg("v", m * n)
    u = bld.seg("u", m)
    ebar = bld.seg("ebar", kg * m)
    y = bld.seg("y", m)
    for i in range(m):
        coeffs = {v[i * n + j]: lift for j in range(n)}
        coeffs[u[i]] = -lift
        bld.row(coeffs, 0)
    _wprf_range_rows(bld, params, u, ebar, yseg=y)
    bld.binarity(ebar)
    for i in range(m):
        for j in range(n):
            bld.triple(v[i * n + j], a[i * n + j], s[j])
    inst = bld.build()

    def witness(s_vec: Vec, a_mat: Mat):
        q1 = params.q1
        x = [0] * inst.nvars
        for j, sj in enumerate(s_vec.e):
            x[s[j]] = sj
        for i in range(m):
            for j in range(n):
                aij = a_mat.rows[i][j]
                x[a[i * n + j]] = aij
                x[v[i * n + j]] = (aij * s_vec.e[j]) % params.q
        for i in range(m):
            ui = sum(a_mat.rows[i][j] * s_vec.e[j] for j in range(n)) % q1
            yi = (params.p * ui) // q1
            x[u[i]] = ui
            x[y[i]] = yi
            e = ui - params.gamma * yi
            for t, bit in enumerate(lnsw_decompose(e, params.gamma)):
                x[ebar[i * kg + t]] = bit
        return x

    return inst, witness


# --- A.3-style: public input, hidden key and output ----------------------


def compile_wprf_key_output(a_pub: Mat, params: ParamSet):
    """Knowledge of s and y with round(a_pub*s) = y; layout (s||u||ebar||y)."""
    m, n = params.mD, params.n1
    if a_pub.mod != params.q1 or a_pub.nrows != m or a_pub.ncols != n:
        raise ValueError("public input must be mD x n1 mod q1")
    cc = clause_constants(params)
    kg = cc["kg"]
    lift = params.q // params.q1
    bld = _Builder(params.q)
    s = bld.seg("s", n)
    u = bld.seg("u", m)
    ebar = bld.seg("ebar", kg * m)
    y = bld.seg("y", m)
    for i in range(m):
        coeffs = {s[j]: lift * a_pub.rows[i][j] for j in range(n)}
        coeffs[u[i]] = -lift
        bld.row(coeffs, 0)
    _wprf_range_rows(bld, params, u, ebar, yseg=y)
    bld.binarity(ebar)
    inst = bld.build()

    def witness(s_vec: Vec):
        q1 = params.q1
        x = [0] * inst.nvars
        for j, sj in enumerate(s_vec.e):
            x[s[j]] = sj
        for i in range(m):
            ui = sum(a_pub.rows[i][j] * s_vec.e[j] for j in range(n)) % q1
            yi = (params.p * ui) // q1
            x[u[i]] = ui
            x[y[i]] = yi
            e = ui - params.gamma * yi
            for t, bit in enumerate(lnsw_decompose(e, params.gamma)):
                x[ebar[i * kg + t]] = bit
        return x

    return inst, witness


# --- A.4: membership of a hidden leaf in the hash tree -------------------


def compile_static_membership(
    pp: Mat,
    root,
    params: ParamSet,
    depth: int | None = None,
    leaf_pad_from: int | None = None,
):
    """Knowledge of a leaf and a root-to-leaf opening of the public tree.

    Per level: hidden sibling w_i, a replicated selector bit jsel_i, the
    products a_i = jsel_i*path and b_i = jsel_i*sibling, and the composed
    left child left_i = path - a_i + b_i (the right child is the linear
    complement path + sibling - left).  Internal path nodes carry no
    binarity triples; the leaf and siblings do.  leaf_pad_from, when given,
    pins leaf bits at and above that position to zero (used when the leaf
    is a shorter shared string padded up to node width).
    """
    if depth is None:
        depth = params.l
    if depth < 1:
        raise ValueError("depth must be at least 1")
    ll = params.mS // 2
    root = tuple(int(b) for b in root)
    if len(root) != ll or any(b not in (0, 1) for b in root):
        raise ValueError("root must be a binary string of node width")
    k = bits_for(params.q)
    if ll != params.n1 * k:
        raise ValueError("node width must equal n1*bits(q)")
    a0 = pp.submat_cols(0, ll)
    a1 = pp.submat_cols(ll, 2 * ll)
    ghat_weights = [(1 << t) % params.q for t in range(k)]
    bld = _Builder(params.q)
    leaf = bld.seg("leaf", ll)
    vs = {depth: leaf}
    for i in range(1, depth):
        vs[i] = bld.seg(f"v{i}", ll)
    for i in range(1, depth + 1):
        w = bld.seg(f"w{i}", ll)
        jsel = bld.seg(f"j{i}", ll)
        aa = bld.seg(f"a{i}", ll)
        bb = bld.seg(f"b{i}", ll)
        left = bld.seg(f"left{i}", ll)
        v = vs[i]
        for r in range(1, ll):
            bld.row({jsel[r]: 1, jsel[0]: -1}, 0)
        for r in range(ll):
            bld.row({left[r]: 1, v[r]: -1, aa[r]: 1, bb[r]: -1}, 0)
        for rr in range(params.n1):
            coeffs: dict = {}
            for r in range(ll):
                c0 = a0.rows[rr][r]
                c1 = a1.rows[rr][r]
                coeffs[left[r]] = coeffs.get(left[r], 0) + c0 - c1
                coeffs[v[r]] = coeffs.get(v[r], 0) + c1
                coeffs[w[r]] = coeffs.get(w[r], 0) + c1
            if i == 1:
                target = sum(
                    ghat_weights[t] * root[rr * k + t] for t in range(k)
                )
            else:
                target = 0
                prev = vs[i - 1]
                for t in range(k):
                    coeffs[prev[rr * k + t]] = (
                        coeffs.get(prev[rr * k + t], 0) - ghat_weights[t]
                    )
            bld.row(coeffs, target)
        bld.binarity(w)
        bld.binarity(jsel)
        for r in range(ll):
            bld.triple(aa[r], jsel[r], v[r])
            bld.triple(bb[r], jsel[r], w[r])
    bld.binarity(leaf)
    if leaf_pad_from is not None:
        for r in range(leaf_pad_from, ll):
            bld.row({leaf[r]: 1}, 0)
    inst = bld.build()

    def witness(leaf_bits, wit):
        """wit: MerkleWitness with top-down index_bits and siblings."""
        if len(wit.index_bits) != depth:
            raise ValueError("witness depth mismatch")
        x = [0] * inst.nvars
        leaf_bits = tuple(int(b) for b in leaf_bits)
        for r, bit in enumerate(leaf_bits):
            x[leaf[r]] = bit
        path = {depth: leaf_bits}
        for i in range(depth, 1, -1):
            sib = tuple(int(b) for b in wit.siblings[i - 1])
            cur = path[i]
            if wit.index_bits[i - 1] == 0:
                parent = hash_node(params, pp, cur, sib)
            else:
                parent = hash_node(params, pp, sib, cur)
            path[i - 1] = parent
            for r, bit in enumerate(parent):
                x[vs[i - 1][r]] = bit
        for i in range(1, depth + 1):
            segd = inst.segments
            w = segd[f"w{i}"]
            jsel = segd[f"j{i}"]
            aa = segd[f"a{i}"]
            bb = segd[f"b{i}"]
            left = segd[f"left{i}"]
            sib = tuple(int(b) for b in wit.siblings[i - 1])
            jbit = wit.index_bits[i - 1]
            cur = path[i]
            for r in range(ll):
                x[w[r]] = sib[r]
                x[jsel[r]] = jbit
                av = (jbit * cur[r]) % params.q
                bv = (jbit * sib[r]) % params.q
                x[aa[r]] = av
                x[bb[r]] = bv
                x[left[r]] = (cur[r] - av + bv) % params.q
        return x

    return inst, witness


# --- A.5: dynamic-accumulator membership ---------------------------------


def compile_dacc_membership(pub, u: Vec, params: ParamSet):
    """Knowledge of a short witness w and a block indicator y_ind with
    A*w + U*y_ind = u; shortness via the shift w' = w + gamma1 decomposed
    in range digits.  Layout (wbar || y_ind), all coordinates binary."""
    cc = clause_constants(params)
    kdg = cc["kdg"]
    gd = lnsw_gadget(2 * params.gamma1)
    q = params.q
    mA = params.mA
    lN = params.l * params.N
    bld = _Builder(q)
    wbar = bld.seg("wbar", kdg * mA)
    y_ind = bld.seg("y_ind", lN)
    for r in range(params.n):
        coeffs: dict = {}
        rowsum = 0
        for c in range(mA):
            arc = pub.a.rows[r][c]
            rowsum += arc
            for t in range(kdg):
                coeffs[wbar[c * kdg + t]] = (
                    coeffs.get(wbar[c * kdg + t], 0) + arc * gd[t]
                )
        for jj in range(lN):
            coeffs[y_ind[jj]] = coeffs.get(y_ind[jj], 0) + pub.u_mat.rows[r][jj]
        bld.row(coeffs, u.e[r] + params.gamma1 * rowsum)
    bld.binarity(wbar)
    bld.binarity(y_ind)
    inst = bld.build()

    def witness(w, j: int):
        if not 1 <= j < params.N:
            raise ValueError("index out of range")
        x = [0] * inst.nvars
        for c, wc in enumerate(w):
            shifted = wc + params.gamma1
            for t, bit in enumerate(lnsw_decompose(shifted, 2 * params.gamma1)):
                x[wbar[c * kdg + t]] = bit
        for t in range(params.l):
            x[y_ind[(j - 1) * params.l + t]] = 1
        return x

    return inst, witness


# --- A.6: knowledge of a signature on a hidden message -------------------


def compile_signature_knowledge(pk, params: ParamSet):
    """Knowledge of (tau, v1, v2, m) with [A | tau*G - B]*v = u + D*m and
    both halves short.  tau enters bit-decomposed; the gadget-recombined
    z = G*v2 and the product w = tau*z linearize the tau*G*v2 term.
    Layout (tau || taubits || d1 || d2 || m || z || w)."""
    cc = clause_constants(params)
    kq, ka1, ka = cc["kq"], cc["ka1"], cc["ka"]
    b1, b2 = cc["b1"], cc["b2"]
    ga1 = lnsw_gadget(2 * b1)
    ga = lnsw_gadget(2 * b2)
    q = params.q
    n, m1, m2, m3 = params.n, params.m1, params.m2, params.m3
    k = bits_for(q)
    bld = _Builder(q)
    tau = bld.seg("tau", 1)
    taubits = bld.seg("taubits", kq)
    d1 = bld.seg("d1", m1 * ka1)
    d2 = bld.seg("d2", m2 * ka)
    m = bld.seg("m", m3)
    z = bld.seg("z", n)
    w = bld.seg("w", n)
    # tau = sum 2^i taubits
    bld.row(
        {tau[0]: 1, **{taubits[t]: -(1 << t) for t in range(kq)}}, 0
    )
    # z = G*v2 where v2[c] = sum ga[t]*d2[c,t] - b2
    for r in range(n):
        coeffs = {z[r]: 1}
        gsum = 0
        for t in range(k):
            c = r * k + t
            weight = (1 << t) % q
            gsum += weight
            for tt in range(ka):
                coeffs[d2[c * ka + tt]] = (
                    coeffs.get(d2[c * ka + tt], 0) - weight * ga[tt]
                )
        bld.row(coeffs, -b2 * gsum)
    # A*v1 + w - B*v2 - D*m = u + b1*rowsum(A) - b2*rowsum(B)
    for r in range(n):
        coeffs = {w[r]: 1}
        asum = 0
        bsum = 0
        for c in range(m1):
            arc = pk.a.rows[r][c]
            asum += arc
            for t in range(ka1):
                coeffs[d1[c * ka1 + t]] = (
                    coeffs.get(d1[c * ka1 + t], 0) + arc * ga1[t]
                )
        for c in range(m2):
            brc = pk.b.rows[r][c]
            bsum += brc
            for t in range(ka):
                coeffs[d2[c * ka + t]] = (
                    coeffs.get(d2[c * ka + t], 0) - brc * ga[t]
                )
        for jj in range(m3):
            coeffs[m[jj]] = coeffs.get(m[jj], 0) - pk.d.rows[r][jj]
        bld.row(coeffs, pk.u.e[r] + b1 * asum - b2 * bsum)
    bld.binarity(taubits)
    bld.binarity(d1)
    bld.binarity(d2)
    bld.binarity(m)
    for r in range(n):
        bld.triple(w[r], tau[0], z[r])
    inst = bld.build()

    def witness(sig, m_bits):
        x = [0] * inst.nvars
        x[tau[0]] = sig.tau % q
        for t in range(kq):
            x[taubits[t]] = (sig.tau >> t) & 1
        for c, vc in enumerate(sig.v1):
            for t, bit in enumerate(lnsw_decompose(vc + b1, 2 * b1)):
                x[d1[c * ka1 + t]] = bit
        for c, vc in enumerate(sig.v2):
            for t, bit in enumerate(lnsw_decompose(vc + b2, 2 * b2)):
                x[d2[c * ka + t]] = bit
        for jj, bit in enumerate(m_bits):
            x[m[jj]] = int(bit)
        for r in range(n):
            zr = sum(
                ((1 << t) % q) * sig.v2[r * k + t] for t in range(k)
            ) % q
            x[z[r]] = zr
            x[w[r]] = (sig.tau * zr) % q
        return x

    return inst, witness


# --- A.7.1: output-to-message transform ----------------------------------


def compile_pk_transform(f_pub: Mat, params: ParamSet):
    """Knowledge of (m, bin(y), y) with G*m = F*bin(y) mod p and y the
    recomposition of bin(y).  Layout (m || biny || y), lift q/p."""
    if f_pub.mod != params.p:
        raise ValueError("transform matrix must live mod p")
    liftp = params.q // params.p
    k1 = params.k1
    mD, m3 = params.mD, params.m3
    n_prime = params.n_prime
    if f_pub.nrows != n_prime or f_pub.ncols != mD * k1:
        raise ValueError("transform matrix shape mismatch")
    bld = _Builder(params.q)
    m = bld.seg("m", m3)
    biny = bld.seg("biny", mD * k1)
    y = bld.seg("y", mD)
    for r in range(n_prime):
        coeffs = {}
        for jj in range(k1):
            coeffs[m[r * k1 + jj]] = liftp * (1 << jj)
        for c in range(mD * k1):
            coeffs[biny[c]] = coeffs.get(biny[c], 0) - liftp * f_pub.rows[r][c]
        bld.row(coeffs, 0)
    for i in range(mD):
        coeffs = {biny[i * k1 + t]: liftp * (1 << t) for t in range(k1)}
        coeffs[y[i]] = -liftp
        bld.row(coeffs, 0)
    bld.binarity(m)
    bld.binarity(biny)
    inst = bld.build()

    def witness(y_vec: Vec):
        if y_vec.mod != params.p or len(y_vec) != mD:
            raise ValueError("output vector must be mD entries mod p")
        x = [0] * inst.nvars
        by = bin_vec(y_vec)
        for c, bit in enumerate(by):
            x[biny[c]] = bit
        mv = bin_vec(f_pub.vec(Vec(params.p, by)))
        for jj, bit in enumerate(mv):
            x[m[jj]] = bit
        for i, yi in enumerate(y_vec.e):
            x[y[i]] = yi
        return x

    return inst, witness


# --- A.7.2: challenge-response tag equation ------------------------------


def compile_tag_equation(t_check: Vec, c: int, params: ParamSet):
    """Knowledge of (tprime, y) with tprime + c*y = t_check mod p."""
    if t_check.mod != params.p or len(t_check) != params.mD:
        raise ValueError("tag must be mD entries mod p")
    c = c % params.p
    liftp = params.q // params.p
    bld = _Builder(params.q)
    tprime = bld.seg("tprime", params.mD)
    y = bld.seg("y", params.mD)
    for i in range(params.mD):
        bld.row(
            {tprime[i]: liftp, y[i]: liftp * c}, liftp * t_check.e[i]
        )
    inst = bld.build()

    def witness(tprime_vec: Vec, y_vec: Vec):
        x = [0] * inst.nvars
        for i in range(params.mD):
            x[tprime[i]] = tprime_vec.e[i]
            x[y[i]] = y_vec.e[i]
        return x

    return inst, witness


# --- A.7.3: tag bases to accumulator leaf --------------------------------


def _fastmode_bits(params: ParamSet, e1_pub: Mat) -> bytes:
    cc = clause_constants(params)
    nbits = params.b_blocks * params.lam * cc["blocksize"]
    material = (
        b"ktaa-fastmode-v1"
        + ser_mat(e1_pub)
        + params.name.encode("utf-8")
    )
    return hashlib.shake_256(material).digest((nbits + 7) // 8)


def _fastmode_bit(stream: bytes, pos: int) -> int:
    return (stream[pos >> 3] >> (pos & 7)) & 1


def compile_tagbase_transform(e1_pub: Mat, params: ParamSet):
    """Knowledge of two hidden base matrices whose sum, chunk-decomposed and
    compressed by E1, recomposes to the hidden leaf string b'.

    Layout (bprime || d || vc || vb || vbc || sdig): vb/vbc are the
    flattened bases, vc their sum, d the base-2^iota chunks of vc, bprime
    the bits of E1*d.  Chunk shortness uses the fast mode: the d-range is
    split into b_blocks blocks and each block gets lam random 0/1-weighted
    sums, each forced to fit in digitlen bits (these rows stay unlifted;
    block sums are below q by parameter choice)."""
    q1 = params.q1
    if e1_pub.mod != q1 or e1_pub.nrows != params.n_e1:
        raise ValueError("compression matrix must be n_e1 rows mod q1")
    cc = clause_constants(params)
    d_len, blocksize, digitlen = cc["d_len"], cc["blocksize"], cc["digitlen"]
    if e1_pub.ncols != d_len:
        raise ValueError("compression matrix width mismatch")
    mn = params.mD * params.n1
    k2 = params.k2
    kp = params.kprime
    lift = params.q // q1
    weights = vdec_weights(q1, params.iota)
    stream = _fastmode_bits(params, e1_pub)
    bld = _Builder(params.q)
    bprime = bld.seg("bprime", params.n_e1 * k2)
    d = bld.seg("d", d_len)
    vc = bld.seg("vc", mn)
    vb = bld.seg("vb", mn)
    vbc = bld.seg("vbc", mn)
    sdig = bld.seg("sdig", params.b_blocks * params.lam * digitlen)
    for r in range(params.n_e1):
        coeffs = {bprime[r * k2 + t]: lift * (1 << t) for t in range(k2)}
        for cix in range(d_len):
            coeffs[d[cix]] = (
                coeffs.get(d[cix], 0) - lift * e1_pub.rows[r][cix]
            )
        bld.row(coeffs, 0)
    for cix in range(mn):
        coeffs = {d[cix * kp + t]: lift * weights[t] for t in range(kp)}
        coeffs[vc[cix]] = -lift
        bld.row(coeffs, 0)
    for cix in range(mn):
        bld.row({vc[cix]: lift, vb[cix]: -lift, vbc[cix]: -lift}, 0)
    for g in range(params.b_blocks):
        for rep in range(params.lam):
            coeffs = {}
            base = (g * params.lam + rep) * blocksize
            for off in range(blocksize):
                if _fastmode_bit(stream, base + off):
                    coeffs[d[g * blocksize + off]] = 1
            sbase = (g * params.lam + rep) * digitlen
            for t in range(digitlen):
                coeffs[sdig[sbase + t]] = -(1 << t)
            bld.row(coeffs, 0)
    bld.binarity(bprime)
    bld.binarity(sdig)
    inst = bld.build()

    def witness(b_mat: Mat, bch_mat: Mat):
        x = [0] * inst.nvars
        fb = flatten_rows(b_mat)
        fbc = flatten_rows(bch_mat)
        fc = fb.add(fbc)
        for cix in range(mn):
            x[vb[cix]] = fb.e[cix]
            x[vbc[cix]] = fbc.e[cix]
            x[vc[cix]] = fc.e[cix]
        widths = vdec_widths(q1, params.iota)
        dvals = []
        for val in fc.e:
            rem = val
            for wdt in widths:
                dvals.append(rem & ((1 << wdt) - 1))
                rem >>= wdt
        for cix, dv in enumerate(dvals):
            x[d[cix]] = dv
        comp = e1_pub.vec(Vec(q1, dvals))
        for r_ix, bit in enumerate(bin_vec(comp)):
            x[bprime[r_ix]] = bit
        for g in range(params.b_blocks):
            for rep in range(params.lam):
                base = (g * params.lam + rep) * blocksize
                ssum = sum(
                    dvals[g * blocksize + off]
                    for off in range(blocksize)
                    if _fastmode_bit(stream, base + off)
                )
                sbase = (g * params.lam + rep) * digitlen
                for t in range(digitlen):
                    x[sdig[sbase + t]] = (ssum >> t) & 1
        return x

    return inst, witness


# --- gluing ---------------------------------------------------------------


def conjoin(instances, aliases) -> RStarInstance:
    """Union of instances with shared segments merged into one variable.

    aliases: each entry is (ia, name_a, ib, name_b) for whole-segment
    identification, or (ia, name_a, off_a, ib, name_b, off_b, length) for a
    partial overlap.  Segment names in the result are 'c<i>:<name>'.
    check_instance on the result equals the conjunction of the member
    checks evaluated on the shared variables.
    """
    qs = {inst.q for inst in instances}
    if len(qs) != 1:
        raise ValueError("conjoin requires a common modulus")
    bases = []
    total = 0
    for inst in instances:
        bases.append(total)
        total += inst.nvars
    parent = list(range(total))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            # keep the earlier variable as representative
            if ra < rb:
                parent[rb] = ra
            else:
                parent[ra] = rb

    for entry in aliases:
        if len(entry) == 4:
            ia, na, ib, nb = entry
            off_a = off_b = 0
            seg_a = instances[ia].segments[na]
            seg_b = instances[ib].segments[nb]
            length = len(seg_a)
            if len(seg_b) != length:
                raise ValueError(
                    f"alias length mismatch: {na} ({length}) vs {nb} ({len(seg_b)})"
                )
        else:
            ia, na, off_a, ib, nb, off_b, length = entry
            seg_a = instances[ia].segments[na]
            seg_b = instances[ib].segments[nb]
            if off_a + length > len(seg_a) or off_b + length > len(seg_b):
                raise ValueError("alias window out of segment bounds")
        for t in range(length):
            union(
                bases[ia] + seg_a[off_a + t],
                bases[ib] + seg_b[off_b + t],
            )

    remap = {}
    nxt = 0
    newvar = [0] * total
    for g in range(total):
        r = find(g)
        if r not in remap:
            remap[r] = nxt
            nxt += 1
        newvar[g] = remap[r]

    q = instances[0].q
    rows = []
    triples = []
    seen = set()
    segments = {}
    maps = []
    for i, inst in enumerate(instances):
        base = bases[i]
        maps.append(tuple(newvar[base + v] for v in range(inst.nvars)))
        for coeffs, target in inst.rows:
            folded: dict = {}
            for var, coef in coeffs:
                g = newvar[base + var]
                folded[g] = (folded.get(g, 0) + coef) % q
            rows.append(
                (
                    tuple((v, c) for v, c in folded.items() if c),
                    target,
                )
            )
        for h, ii, jj in inst.triples:
            t = (newvar[base + h], newvar[base + ii], newvar[base + jj])
            if t not in seen:
                seen.add(t)
                triples.append(t)
        for name, seg in inst.segments.items():
            segments[f"c{i}:{name}"] = tuple(newvar[base + v] for v in seg)
    return RStarInstance(
        q=q,
        nvars=nxt,
        rows=tuple(rows),
        triples=tuple(triples),
        segments=segments,
        conjoin_maps=tuple(maps),
    )


def merge_witnesses(conj: RStarInstance, parts) -> list:
    """Assemble the conjoined witness from per-member witnesses; raises if
    two members disagree on a shared variable."""
    if len(parts) != len(conj.conjoin_maps):
        raise ValueError("wrong number of member witnesses")
    x = [None] * conj.nvars
    for mp, part in zip(conj.conjoin_maps, parts):
        if len(part) != len(mp):
            raise ValueError("member witness length mismatch")
        for local, val in enumerate(part):
            g = mp[local]
            val = int(val) % conj.q
            if x[g] is None:
                x[g] = val
            elif x[g] != val:
                raise ValueError(
                    f"conflicting values for shared variable {g}"
                )
    return [0 if v is None else v for v in x]


# --- closed-form length report -------------------------------------------


def table3_lengths(params: ParamSet, depth: int | None = None) -> dict:
    """(witness_len, m_size) closed forms per clause, from the same derived
    constants the compilers use.  `depth` sets the tree depth for the
    static-membership row (default: the block-index bit count l)."""
    if depth is None:
        depth = params.l
    cc = clause_constants(params)
    m, n = params.mD, params.n1
    mn = m * n
    kg, kdg, kq, ka1, ka = (
        cc["kg"],
        cc["kdg"],
        cc["kq"],
        cc["ka1"],
        cc["ka"],
    )
    ll = params.mS // 2
    l1, l2 = depth - 1, depth + 1
    lN = params.l * params.N
    sig_x = 1 + kq + params.m1 * ka1 + params.m2 * ka + params.m3 + 2 * params.n
    fast = params.b_blocks * params.lam * cc["digitlen"]
    pbits = params.n_e1 * params.k2
    return {
        "wprf_preimage_key": (n + 2 * mn + m + kg * m, kg * m + mn),
        "wprf_hidden_all": (n + 2 * mn + 2 * m + kg * m, kg * m + mn),
        "wprf_key_output": (n + 2 * m + kg * m, kg * m),
        "static_membership": (
            2 * ll + 4 * l1 * ll + 2 * l2 * ll,
            ll + 2 * l1 * ll + 2 * l2 * ll,
        ),
        "dacc_membership": (kdg * params.mA + lN, kdg * params.mA + lN),
        "signature_knowledge": (sig_x, sig_x - params.n - 1),
        "pk_transform": (
            params.m3 + m * params.k1 + m,
            params.m3 + m * params.k1,
        ),
        "tag_equation": (2 * m, 0),
        "tagbase_transform": (
            fast + pbits + cc["d_len"] + 3 * mn,
            fast + pbits,
        ),
    }
