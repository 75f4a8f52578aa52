"""Static (Merkle-style) accumulator over an SIS compression function.

Nodes are bit strings of length node_bits = n1 * bits(q); a parent is the
binary expansion of [A0 | A1] * (left || right) mod q, with A0/A1 the two
halves of the public matrix.  Leaves are padded with the all-zero string up
to a power of two; index bits run root-to-leaf, 0 meaning "left child".
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Mat, Vec, bin_vec
from .params import ParamSet, bits_for


def macc_setup(params: ParamSet, rng) -> Mat:
    return Mat.uniform(params.q, params.n1, params.mS, rng)


def node_len(params: ParamSet) -> int:
    return params.mS // 2


def _check_node(params: ParamSet, bits, what: str) -> tuple[int, ...]:
    bits = tuple(int(b) for b in bits)
    if len(bits) != node_len(params) or any(b not in (0, 1) for b in bits):
        raise ValueError(f"{what} must be a binary string of length {node_len(params)}")
    return bits


def hash_node(params: ParamSet, pp: Mat, left, right) -> tuple[int, ...]:
    left = _check_node(params, left, "left child")
    right = _check_node(params, right, "right child")
    val = pp.vec(left + right)
    return bin_vec(val)


def tree_depth(nleaves: int) -> int:
    """Smallest depth whose leaf layer fits nleaves (at least 1)."""
    if nleaves < 1:
        raise ValueError("need at least one leaf")
    return max(1, bits_for(nleaves))


def macc_tree(params: ParamSet, pp: Mat, leaves) -> list:
    """All levels, leaves last: tree[0] = [root], tree[depth] = padded leaves."""
    leaves = [_check_node(params, d, "leaf") for d in leaves]
    depth = tree_depth(len(leaves))
    pad = (0,) * node_len(params)
    level = leaves + [pad] * ((1 << depth) - len(leaves))
    levels = [level]
    while len(level) > 1:
        level = [
            hash_node(params, pp, level[2 * i], level[2 * i + 1])
            for i in range(len(level) // 2)
        ]
        levels.append(level)
    levels.reverse()
    return levels


def macc_accumulate(params: ParamSet, pp: Mat, leaves) -> tuple[int, ...]:
    return macc_tree(params, pp, leaves)[0][0]


@dataclass(frozen=True)
class MerkleWitness:
    """index_bits[0] is the top-level direction (0 = left subtree);
    siblings[i] is the sibling of the path node at depth i+1."""

    index_bits: tuple
    siblings: tuple


def macc_witness(
    params: ParamSet, pp: Mat, leaves, index: int
) -> MerkleWitness:
    levels = macc_tree(params, pp, leaves)
    depth = len(levels) - 1
    if not 0 <= index < 1 << depth:
        raise ValueError("leaf index out of range")
    index_bits = tuple((index >> (depth - 1 - i)) & 1 for i in range(depth))
    siblings = []
    idx = index
    for lev in range(depth, 0, -1):
        siblings.append(levels[lev][idx ^ 1])
        idx >>= 1
    siblings.reverse()  # top-down, aligned with index_bits
    return MerkleWitness(index_bits=index_bits, siblings=tuple(siblings))


def macc_verify(
    params: ParamSet, pp: Mat, root, leaf, wit: MerkleWitness
) -> bool:
    try:
        cur = _check_node(params, leaf, "leaf")
        root = _check_node(params, root, "root")
        sibs = [_check_node(params, s, "sibling") for s in wit.siblings]
    except ValueError:
        return False
    if len(wit.index_bits) != len(sibs) or not sibs:
        return False
    if any(b not in (0, 1) for b in wit.index_bits):
        return False
    for j, sib in zip(reversed(wit.index_bits), reversed(sibs)):
        if j == 0:
            cur = hash_node(params, pp, cur, sib)
        else:
            cur = hash_node(params, pp, sib, cur)
    return cur == root
