"""Canonical byte encoding for all transmitted and stored objects.

Conventions: fixed-width little-endian residues (width determined by the
modulus), u32 length prefixes, row-major matrices, zigzag varints for signed
integer vectors whose entries are not reduced.  Every reader works off a
cursor and raises SerError on truncation or tag mismatch, so corrupt stores
surface as a clean error instead of garbage.
"""

from __future__ import annotations

from .core import Mat, Vec


class SerError(Exception):
    pass


def _width(mod: int) -> int:
    return max(1, ((mod - 1).bit_length() + 7) // 8)


def ser_u32(x: int) -> bytes:
    if not 0 <= x < 1 << 32:
        raise SerError(f"u32 out of range: {x}")
    return x.to_bytes(4, "little")


def ser_pint(x: int) -> bytes:
    """Unbounded non-negative integer: u32 byte-length + LE bytes."""
    if x < 0:
        raise SerError("negative where non-negative expected")
    raw = x.to_bytes(max(1, (x.bit_length() + 7) // 8), "little")
    return ser_u32(len(raw)) + raw


def _zz_big(x: int) -> int:
    return (x << 1) if x >= 0 else ((-x) << 1) - 1


def _unzigzag(u: int) -> int:
    return (u >> 1) if (u & 1) == 0 else -((u + 1) >> 1)


def _varint(u: int) -> bytes:
    out = bytearray()
    while True:
        b = u & 0x7F
        u >>= 7
        if u:
            out.append(b | 0x80)
        else:
            out.append(b)
            return bytes(out)


def ser_vec(v: Vec) -> bytes:
    w = _width(v.mod)
    body = b"".join(x.to_bytes(w, "little") for x in v.e)
    return b"V" + ser_pint(v.mod) + ser_u32(len(v.e)) + body


def ser_mat(m: Mat) -> bytes:
    w = _width(m.mod)
    body = b"".join(
        x.to_bytes(w, "little") for row in m.rows for x in row
    )
    return b"M" + ser_pint(m.mod) + ser_u32(m.nrows) + ser_u32(m.ncols) + body


def ser_ints(xs) -> bytes:
    """Signed integer vector (unreduced); zigzag varints."""
    xs = [int(x) for x in xs]
    body = b"".join(_varint(_zz_big(x)) for x in xs)
    return b"Z" + ser_u32(len(xs)) + body


def ser_bytes(b: bytes) -> bytes:
    return b"B" + ser_u32(len(b)) + b


def ser_str(s: str) -> bytes:
    return ser_bytes(s.encode("utf-8"))


class Reader:
    def __init__(self, data: bytes, pos: int = 0):
        self.data = data
        self.pos = pos

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise SerError("truncated input")
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out

    def tag(self, expect: bytes):
        got = self.take(len(expect))
        if got != expect:
            raise SerError(f"bad tag: expected {expect!r}, got {got!r}")

    def u32(self) -> int:
        return int.from_bytes(self.take(4), "little")

    def pint(self) -> int:
        n = self.u32()
        if n > len(self.data) - self.pos:
            raise SerError("truncated input")
        return int.from_bytes(self.take(n), "little")

    def vec(self) -> Vec:
        self.tag(b"V")
        mod = self.pint()
        if mod < 2:
            raise SerError("bad modulus")
        n = self.u32()
        w = _width(mod)
        raw = self.take(n * w)
        ents = [
            int.from_bytes(raw[i * w : (i + 1) * w], "little") for i in range(n)
        ]
        if any(x >= mod for x in ents):
            raise SerError("residue out of range")
        return Vec(mod, ents)

    def mat(self) -> Mat:
        self.tag(b"M")
        mod = self.pint()
        if mod < 2:
            raise SerError("bad modulus")
        r = self.u32()
        c = self.u32()
        w = _width(mod)
        raw = self.take(r * c * w)
        rows = []
        for i in range(r):
            base = i * c * w
            row = [
                int.from_bytes(raw[base + j * w : base + (j + 1) * w], "little")
                for j in range(c)
            ]
            if any(x >= mod for x in row):
                raise SerError("residue out of range")
            rows.append(row)
        return Mat(mod, rows)

    def ints(self) -> list[int]:
        self.tag(b"Z")
        n = self.u32()
        out = []
        for _ in range(n):
            u = 0
            shift = 0
            while True:
                b = self.take(1)[0]
                u |= (b & 0x7F) << shift
                if not b & 0x80:
                    break
                shift += 7
                if shift > 1024:
                    raise SerError("varint too long")
            out.append(_unzigzag(u))
        return out

    def bytes_(self) -> bytes:
        self.tag(b"B")
        n = self.u32()
        return self.take(n)

    def str_(self) -> str:
        try:
            return self.bytes_().decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SerError("bad utf-8") from exc

    def done(self):
        if self.pos != len(self.data):
            raise SerError("trailing bytes")


def hex_line(record: bytes) -> str:
    return record.hex()


def unhex_line(line: str) -> bytes:
    try:
        return bytes.fromhex(line.strip())
    except ValueError as exc:
        raise SerError("bad hex record") from exc
