"""Share file serialization and input-file striping.

Layout (little-endian, bit-exact):
  magic "MBCR" (4 bytes), version u8 = 1, field kind u8 (0 prime,
  1 binary GF(256)), field modulus u16 (prime, or the reduction
  polynomial 0x11D), n, k, d, r u16 each, node_id u16,
  stripe_count u32, original_length u64, then the payload: one byte
  per symbol, stripe-major, each stripe in canonical share order.

Evaluation points are never serialized; they are recomputed
deterministically from the parameters.
"""

from __future__ import annotations

import os
import struct
import tempfile
from dataclasses import dataclass

from .errors import ShareFormatError
from .gf import GF256_REDUCTION_POLY, Field

MAGIC = b"MBCR"
VERSION = 1
FIELD_KIND_PRIME = 0
FIELD_KIND_GF256 = 1

_HEADER = struct.Struct("<4sBBHHHHHHIQ")
HEADER_SIZE = _HEADER.size


def field_kind_codes(field: Field) -> tuple[int, int]:
    if field.kind == "prime":
        return FIELD_KIND_PRIME, field.modulus
    return FIELD_KIND_GF256, GF256_REDUCTION_POLY


def field_from_codes(kind: int, modulus: int) -> Field:
    if kind == FIELD_KIND_PRIME:
        return Field.prime(modulus)
    if kind == FIELD_KIND_GF256:
        if modulus != GF256_REDUCTION_POLY:
            raise ShareFormatError(f"unexpected GF(256) modulus {modulus:#x}")
        return Field.gf256()
    raise ShareFormatError(f"unknown field kind {kind}")


@dataclass(frozen=True)
class ShareFile:
    field: Field
    n: int
    k: int
    d: int
    r: int
    node_id: int
    stripe_count: int
    original_length: int
    payload: bytes  # stripe_count * share_size symbols, one per byte

    @property
    def share_size(self) -> int:
        return 2 * self.d + self.r - 1

    def stripes(self) -> list[tuple[int, ...]]:
        a = self.share_size
        return [
            tuple(self.payload[s * a : (s + 1) * a])
            for s in range(self.stripe_count)
        ]


def pack_share_file(sf: ShareFile) -> bytes:
    kind, modulus = field_kind_codes(sf.field)
    expected = sf.stripe_count * sf.share_size
    if len(sf.payload) != expected:
        raise ShareFormatError(
            f"payload has {len(sf.payload)} symbols, expected {expected}"
        )
    header = _HEADER.pack(
        MAGIC,
        VERSION,
        kind,
        modulus,
        sf.n,
        sf.k,
        sf.d,
        sf.r,
        sf.node_id,
        sf.stripe_count,
        sf.original_length,
    )
    return header + sf.payload


def parse_share_file(data: bytes) -> ShareFile:
    if len(data) < HEADER_SIZE:
        raise ShareFormatError("file too short for a share header")
    (
        magic,
        version,
        kind,
        modulus,
        n,
        k,
        d,
        r,
        node_id,
        stripe_count,
        original_length,
    ) = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ShareFormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise ShareFormatError(f"unsupported version {version}")
    field = field_from_codes(kind, modulus)
    payload = data[HEADER_SIZE:]
    sf = ShareFile(
        field=field,
        n=n,
        k=k,
        d=d,
        r=r,
        node_id=node_id,
        stripe_count=stripe_count,
        original_length=original_length,
        payload=payload,
    )
    if len(payload) != stripe_count * sf.share_size:
        raise ShareFormatError(
            f"payload length {len(payload)} does not match "
            f"{stripe_count} stripes of {sf.share_size} symbols"
        )
    return sf


def write_share_file(path: str, sf: ShareFile) -> None:
    """Atomic write: temp file in the target directory, then rename."""
    data = pack_share_file(sf)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".mbcr-tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_share_file(path: str) -> ShareFile:
    with open(path, "rb") as fh:
        return parse_share_file(fh.read())


def file_to_stripes(data: bytes, block_size: int) -> list[tuple[int, ...]]:
    """Split bytes into zero-padded stripes; an empty file is one zero stripe."""
    count = max(1, -(-len(data) // block_size))
    padded = data.ljust(count * block_size, b"\x00")
    return [
        tuple(padded[s * block_size : (s + 1) * block_size]) for s in range(count)
    ]


def stripes_to_file(stripes: list[tuple[int, ...]], original_length: int) -> bytes:
    flat = bytearray()
    for stripe in stripes:
        flat.extend(stripe)
    if original_length > len(flat):
        raise ShareFormatError(
            f"recorded length {original_length} exceeds decoded data {len(flat)}"
        )
    return bytes(flat[:original_length])
