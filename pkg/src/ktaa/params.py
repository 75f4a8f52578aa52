"""Parameter sets for the k-times anonymous authentication scheme.

A ParamSet carries the moduli tower (q0, p = q0**e1, q1 = q0**e2, q = q0**e3),
the tag modulus qprime, every matrix dimension, and the Gaussian widths.  Two
toy presets run the whole protocol on a desk; the two large presets exist for
the cost estimator only and are never meant to be executed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


def bits_for(m: int) -> int:
    """Number of binary digits needed for values in [0, m), i.e. ceil(log2(m)).

    All digit counts in this codebase go through this helper so that
    power-of-two corner cases (where ceil(log2(m-1)) would drop a bit) are
    handled uniformly: decompositions must always be able to represent m-1.
    """
    if m < 2:
        raise ValueError("modulus must be at least 2")
    return (m - 1).bit_length()


@dataclass(frozen=True)
class ParamSet:
    name: str
    q0: int
    e1: int
    e2: int
    e3: int
    qprime: int
    n: int       # SIS dimension: signature + dynamic accumulator
    n1: int      # SIS dimension: wPRF, static accumulator, tag-base transform
    mD: int      # wPRF input rows
    mA: int      # dynamic-accumulator trapdoor width
    mS: int      # static-accumulator hash width (two nodes)
    m1: int      # signature left block width
    m2: int      # signature gadget block width (= n*k)
    m3: int      # committed-message length (bits)
    sigma: float   # signature preimage width
    sigma2: float  # signature commitment width
    s: float       # accumulator preimage width
    N: int         # per-AP member bound (dynamic accumulator capacity)
    iota: int      # chunk bits for base-2^iota decomposition
    b_blocks: int  # fast-mode block count
    lam: int       # fast-mode aggregation rows per block
    n_e1: int      # rows of the tag-base compression map E1
    estimator_only: bool = False

    # --- derived moduli -------------------------------------------------
    @property
    def p(self) -> int:
        return self.q0 ** self.e1

    @property
    def q1(self) -> int:
        return self.q0 ** self.e2

    @property
    def q(self) -> int:
        return self.q0 ** self.e3

    @property
    def gamma(self) -> int:
        return self.q1 // self.p

    # --- derived digit counts -------------------------------------------
    @property
    def k(self) -> int:
        return bits_for(self.q)

    @property
    def k1(self) -> int:
        return bits_for(self.p)

    @property
    def k2(self) -> int:
        return bits_for(self.q1)

    @property
    def l(self) -> int:
        return bits_for(self.N)

    @property
    def sigma1(self) -> float:
        return math.sqrt(self.sigma ** 2 + self.sigma2 ** 2)

    @property
    def n_prime(self) -> int:
        """Rows of the key-compression map F: m3 = n_prime * k1."""
        return self.m3 // self.k1

    @property
    def kprime(self) -> int:
        """Chunks per residue in the base-2^iota decomposition mod q1."""
        return -(-self.k2 // self.iota)

    @property
    def node_bits(self) -> int:
        """Static-accumulator node length in bits (half the hash width)."""
        return self.mS // 2

    # --- dynamic-accumulator norm bounds --------------------------------
    @property
    def gamma_acc(self) -> int:
        """Verify bound on fresh witnesses: 6 * s * sqrt(l*N)."""
        return int(6.0 * self.s * math.sqrt(self.l * self.N))

    @property
    def gamma1(self) -> int:
        """Relation bound covering updated witnesses: 6 * s * (sqrt(mA) + sqrt(l*N))."""
        return int(6.0 * self.s * (math.sqrt(self.mA) + math.sqrt(self.l * self.N)))

    # --- validation ------------------------------------------------------
    def validate(self) -> list[str]:
        """Check structural invariants.

        Raises ValueError for violations that break the algebra outright;
        returns a list of warning strings for soft bounds (asymptotic
        conditions the toy presets deliberately sit below).
        """
        if not (1 <= self.e1 < self.e2 < self.e3):
            raise ValueError("exponents must satisfy 1 <= e1 < e2 < e3")
        if self.gamma % 2 != 1:
            raise ValueError("gamma = q1/p must be odd")
        if self.q <= self.N:
            raise ValueError("q must exceed the member bound N")
        if self.N <= 2:
            raise ValueError("tag space needs N > 2")
        if self.m3 % self.k1 != 0:
            raise ValueError("m3 must be a multiple of k1 (message map shape)")
        if self.iota < 1 or self.iota > self.k2:
            raise ValueError("iota must lie in [1, k2]")
        warnings = []
        if not self.estimator_only:
            if self.m2 != self.n * self.k:
                raise ValueError("m2 must equal n*k (gadget block shape)")
            if self.mS != 2 * self.n1 * self.k:
                raise ValueError("mS must equal 2*n1*k (hash node shape)")
            if self.mA < self.n * self.k + 1:
                raise ValueError("mA too small for trapdoor generation")
            if self.n_e1 * self.k2 > self.node_bits:
                raise ValueError("compressed tag-base string exceeds node length")
            dlen = self.mD * self.n1 * self.kprime
            if dlen % self.b_blocks != 0:
                raise ValueError("b_blocks must divide mD*n1*kprime")
        if self.qprime >= self.q0:
            warnings.append(
                "qprime >= q0: tags that share a factor with q0 are skipped"
            )
        uniq = 2.0 * self.n1 * (math.log2(self.q1) + 1) / (math.log2(self.p) - 1)
        if self.mD < uniq:
            warnings.append(
                f"mD={self.mD} below the strong-uniqueness bound {uniq:.1f}; "
                "distinct keys may collide on some inputs"
            )
        return warnings


TOY27 = ParamSet(
    name="toy-27",
    q0=3, e1=1, e2=2, e3=3, qprime=8,
    n=4, n1=2,
    mD=8, mA=24, mS=20, m1=20, m2=20, m3=8,
    sigma=27.0, sigma2=1.5, s=27.0,
    N=8, iota=2, b_blocks=4, lam=8, n_e1=2,
)

TOY125 = ParamSet(
    name="toy-125",
    q0=5, e1=1, e2=2, e3=3, qprime=8,
    n=4, n1=2,
    mD=8, mA=32, mS=28, m1=32, m2=28, m3=9,
    sigma=35.0, sigma2=2.0, s=35.0,
    N=8, iota=2, b_blocks=4, lam=8, n_e1=2,
)

# Same tower as toy-27 but with enough wPRF rows to clear the
# strong-uniqueness bound (28.5 rows at these moduli); used only by the
# exhaustive key-collision scan.
TOYUNIQ = ParamSet(
    name="toy-uniq",
    q0=3, e1=1, e2=2, e3=3, qprime=8,
    n=4, n1=2,
    mD=32, mA=24, mS=20, m1=20, m2=20, m3=8,
    sigma=27.0, sigma2=1.5, s=27.0,
    N=8, iota=2, b_blocks=4, lam=8, n_e1=2,
)

# The published 80-bit parameter selection.  Estimator only: dimensions in
# the millions, never executed.
PAPER80 = ParamSet(
    name="paper-80",
    q0=1031, e1=1, e2=19, e3=20, qprime=1024,
    n=180, n1=32,
    mD=1360, mA=18090, mS=88440, m1=22740, m2=36180, m3=4096,
    sigma=2761.34, sigma2=12.73, s=1224.81,
    N=1024, iota=10, b_blocks=40, lam=80, n_e1=252,
    estimator_only=True,
)

# 128-bit variant derived by the same selection rules.
PAPER128 = ParamSet(
    name="paper-128",
    q0=1031, e1=1, e2=29, e3=30, qprime=1024,
    n=175, n1=28,
    mD=1820, mA=26340, mS=132440, m1=33110, m2=52675, m3=4096,
    sigma=3332.37, sigma2=12.73, s=1478.03,
    N=1024, iota=10, b_blocks=40, lam=128, n_e1=252,
    estimator_only=True,
)

PRESETS = {ps.name: ps for ps in (TOY27, TOY125, TOYUNIQ, PAPER80, PAPER128)}


def get_preset(name: str) -> ParamSet:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(
            f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}"
        ) from None
