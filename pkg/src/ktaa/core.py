"""Exact modular vectors/matrices, rounding, decompositions, gadgets, norms.

Everything here is plain Python integer arithmetic.  Moduli in the large
presets exceed 64 bits, which native bignums absorb without any limb
plumbing; the toy presets that actually execute stay tiny.
"""

from __future__ import annotations

from dataclasses import dataclass

from .params import bits_for


class Vec:
    """Immutable vector of residues mod a fixed modulus."""

    __slots__ = ("mod", "e")

    def __init__(self, mod: int, entries):
        if mod < 2:
            raise ValueError("modulus must be at least 2")
        self.mod = mod
        self.e = tuple(x % mod for x in entries)

    def __len__(self):
        return len(self.e)

    def __getitem__(self, i):
        return self.e[i]

    def __iter__(self):
        return iter(self.e)

    def __eq__(self, other):
        return (
            isinstance(other, Vec) and self.mod == other.mod and self.e == other.e
        )

    def __hash__(self):
        return hash((self.mod, self.e))

    def __repr__(self):
        return f"Vec(mod={self.mod}, {list(self.e)})"

    def _check(self, other):
        if not isinstance(other, Vec):
            raise TypeError("expected a Vec")
        if other.mod != self.mod:
            raise ValueError(f"modulus mismatch: {self.mod} vs {other.mod}")
        if len(other) != len(self):
            raise ValueError(f"dimension mismatch: {len(self)} vs {len(other)}")

    def add(self, other: "Vec") -> "Vec":
        self._check(other)
        return Vec(self.mod, (a + b for a, b in zip(self.e, other.e)))

    def sub(self, other: "Vec") -> "Vec":
        self._check(other)
        return Vec(self.mod, (a - b for a, b in zip(self.e, other.e)))

    def smul(self, c: int) -> "Vec":
        return Vec(self.mod, (c * a for a in self.e))

    def concat(self, other: "Vec") -> "Vec":
        if other.mod != self.mod:
            raise ValueError("modulus mismatch in concat")
        return Vec(self.mod, self.e + other.e)

    @staticmethod
    def zero(mod: int, dim: int) -> "Vec":
        return Vec(mod, (0,) * dim)

    @staticmethod
    def uniform(mod: int, dim: int, rng) -> "Vec":
        return Vec(mod, (rng.randrange(mod) for _ in range(dim)))


class Mat:
    """Immutable matrix of residues mod a fixed modulus (row tuples)."""

    __slots__ = ("mod", "rows")

    def __init__(self, mod: int, rows):
        if mod < 2:
            raise ValueError("modulus must be at least 2")
        self.mod = mod
        self.rows = tuple(tuple(x % mod for x in r) for r in rows)
        if self.rows:
            w = len(self.rows[0])
            for r in self.rows:
                if len(r) != w:
                    raise ValueError("ragged matrix rows")

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.rows[0]) if self.rows else 0

    def __eq__(self, other):
        return (
            isinstance(other, Mat) and self.mod == other.mod and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.mod, self.rows))

    def __repr__(self):
        return f"Mat(mod={self.mod}, {self.nrows}x{self.ncols})"

    def row(self, i) -> Vec:
        return Vec(self.mod, self.rows[i])

    def col(self, j) -> Vec:
        return Vec(self.mod, (r[j] for r in self.rows))

    def vec(self, v) -> Vec:
        """Matrix-vector product.  Accepts a Vec of equal modulus or a plain
        integer sequence (e.g. a signed preimage living over Z)."""
        if isinstance(v, Vec):
            if v.mod != self.mod:
                raise ValueError("modulus mismatch in matvec")
            entries = v.e
        else:
            entries = tuple(v)
        if len(entries) != self.ncols:
            raise ValueError(f"dimension mismatch: {self.ncols} cols vs {len(entries)}")
        m = self.mod
        return Vec(m, (sum(a * b for a, b in zip(r, entries)) % m for r in self.rows))

    def mul(self, other: "Mat") -> "Mat":
        if other.mod != self.mod or self.ncols != other.nrows:
            raise ValueError("shape/modulus mismatch in matmul")
        cols = list(zip(*other.rows)) if other.rows else []
        m = self.mod
        return Mat(
            m,
            [
                [sum(a * b for a, b in zip(r, c)) % m for c in cols]
                for r in self.rows
            ],
        )

    def add(self, other: "Mat") -> "Mat":
        if other.mod != self.mod or other.nrows != self.nrows or other.ncols != self.ncols:
            raise ValueError("shape/modulus mismatch in add")
        return Mat(
            self.mod,
            [
                [a + b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.rows, other.rows)
            ],
        )

    def hstack(self, other: "Mat") -> "Mat":
        if other.mod != self.mod or other.nrows != self.nrows:
            raise ValueError("shape/modulus mismatch in hstack")
        return Mat(self.mod, [r1 + r2 for r1, r2 in zip(self.rows, other.rows)])

    def submat_cols(self, start: int, stop: int) -> "Mat":
        return Mat(self.mod, [r[start:stop] for r in self.rows])

    @staticmethod
    def zero(mod: int, r: int, c: int) -> "Mat":
        return Mat(mod, [(0,) * c for _ in range(r)])

    @staticmethod
    def identity(mod: int, nn: int) -> "Mat":
        return Mat(mod, [[1 if i == j else 0 for j in range(nn)] for i in range(nn)])

    @staticmethod
    def uniform(mod: int, r: int, c: int, rng) -> "Mat":
        return Mat(mod, [[rng.randrange(mod) for _ in range(c)] for _ in range(r)])


# --- rounding ------------------------------------------------------------

def round_to(x: int, q_src: int, p_dst: int) -> int:
    """The rounding map to the smaller modulus: floor((p_dst/q_src) * x).

    Evaluated as exact integer arithmetic (p_dst*x) // q_src, so no float
    ever touches a residue.
    """
    if p_dst > q_src:
        raise ValueError(f"cannot round up: {p_dst} > {q_src}")
    return (p_dst * (x % q_src)) // q_src


def round_vec(v: Vec, p_dst: int) -> Vec:
    return Vec(p_dst, (round_to(x, v.mod, p_dst) for x in v.e))


# --- decompositions ------------------------------------------------------

def bin_vec(v: Vec) -> tuple[int, ...]:
    """Per-entry little-endian binary expansion, bits_for(mod) digits each."""
    kk = bits_for(v.mod)
    out = []
    for x in v.e:
        for t in range(kk):
            out.append((x >> t) & 1)
    return tuple(out)


def bin_recompose(bits, mod: int) -> Vec:
    kk = bits_for(mod)
    if len(bits) % kk != 0:
        raise ValueError("bit string length not a multiple of the digit count")
    vals = []
    for i in range(0, len(bits), kk):
        vals.append(sum(b << t for t, b in enumerate(bits[i : i + kk])))
    return Vec(mod, vals)


def vdec_widths(mod: int, iota: int) -> tuple[int, ...]:
    """Chunk bit-widths for the base-2^iota decomposition of residues mod
    `mod`: full iota-bit chunks with a narrower final chunk when iota does
    not divide the bit budget."""
    kk = bits_for(mod)
    widths = []
    while kk > 0:
        w = min(iota, kk)
        widths.append(w)
        kk -= w
    return tuple(widths)


def vdec(v: Vec, iota: int) -> tuple[int, ...]:
    """Per-entry base-2^iota chunks, low chunk first; the final (possibly
    narrower) chunk keeps recomposition exact."""
    widths = vdec_widths(v.mod, iota)
    out = []
    for x in v.e:
        for w in widths:
            out.append(x & ((1 << w) - 1))
            x >>= w
    return tuple(out)


def vdec_weights(mod: int, iota: int) -> tuple[int, ...]:
    """Recomposition weights (1, 2^iota, 2^(2*iota), ...) per entry."""
    widths = vdec_widths(mod, iota)
    weights = []
    acc = 0
    for w in widths:
        weights.append(1 << acc)
        acc += w
    return tuple(weights)


def vdec_recompose(chunks, mod: int, iota: int) -> Vec:
    weights = vdec_weights(mod, iota)
    kp = len(weights)
    if len(chunks) % kp != 0:
        raise ValueError("chunk string length not a multiple of the chunk count")
    vals = []
    for i in range(0, len(chunks), kp):
        vals.append(sum(w * c for w, c in zip(weights, chunks[i : i + kp])))
    return Vec(mod, vals)


def m2v(a: Mat) -> Vec:
    """Column-wise vectorization: columns concatenated left to right."""
    out = []
    for j in range(a.ncols):
        for i in range(a.nrows):
            out.append(a.rows[i][j])
    return Vec(a.mod, out)


def flatten_rows(a: Mat) -> Vec:
    """Row-wise flattening (row_0 || row_1 || ...).

    The relation compilers lay hidden matrices out this way because the
    Hadamard-product blocks pair each row with the shared key vector; see
    the tag-base compiler for how the column convention is reconciled.
    """
    out = []
    for r in a.rows:
        out.extend(r)
    return Vec(a.mod, out)


def gadget_mat(mod: int, nblocks: int, nbits: int) -> Mat:
    """Block-diagonal powers-of-two recomposition matrix
    I_nblocks tensor (1, 2, ..., 2^(nbits-1)), shape nblocks x nblocks*nbits."""
    rows = []
    for i in range(nblocks):
        row = [0] * (nblocks * nbits)
        for t in range(nbits):
            row[i * nbits + t] = (1 << t) % mod
        rows.append(row)
    return Mat(mod, rows)


def lnsw_gadget(bound: int) -> tuple[int, ...]:
    """Decomposition gadget for the range [0, bound]: entry i (1-based) is
    floor((bound + 2^(i-1)) / 2^i), length floor(log2(bound)) + 1.

    Every value in [0, bound] has a 0/1 combination summing to it, and every
    0/1 combination stays inside [0, bound].
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    length = bound.bit_length()
    return tuple((bound + (1 << (i - 1))) >> i for i in range(1, length + 1))


def lnsw_decompose(e: int, bound: int) -> tuple[int, ...]:
    """Greedy 0/1 decomposition of e in [0, bound] against lnsw_gadget(bound)."""
    if not 0 <= e <= bound:
        raise ValueError(f"value {e} outside [0, {bound}]")
    g = lnsw_gadget(bound)
    bits = []
    rem = e
    for gi in g:
        if rem >= gi:
            bits.append(1)
            rem -= gi
        else:
            bits.append(0)
    if rem != 0:
        raise AssertionError("greedy decomposition failed")  # unreachable by gadget property
    return tuple(bits)


# --- norms ---------------------------------------------------------------

def centered(x: int, mod: int) -> int:
    """Representative of x in (-mod/2, mod/2]."""
    r = x % mod
    if r > mod // 2:
        r -= mod
    return r


def norm_inf(v) -> int:
    if isinstance(v, Vec):
        vals = (centered(x, v.mod) for x in v.e)
    else:
        vals = v
    return max((abs(x) for x in vals), default=0)


def norm_l2(v) -> float:
    if isinstance(v, Vec):
        vals = (centered(x, v.mod) for x in v.e)
    else:
        vals = v
    return sum(x * x for x in vals) ** 0.5


@dataclass(frozen=True)
class GaussianSampler:
    """Parameter bundle for the integer Gaussian with mass proportional to
    exp(-pi*(x-center)^2 / width^2), truncated at center +- tailcut*width."""

    width: float
    center: float = 0.0
    tailcut: float = 13.0

    def __post_init__(self):
        if self.width <= 0:
            raise ValueError("width must be positive")
        if self.tailcut <= 0:
            raise ValueError("tailcut must be positive")
