"""PackBits run-length codec (PSD channel compression 1).

Header byte n, read as signed:
  0 <= n <= 127   copy the next n+1 bytes literally
  -127 <= n <= -1 repeat the next byte 1-n times
  n == -128       no-op (skip)
"""

from __future__ import annotations

from .errors import LengthMismatch, Truncated


def decode_packbits(data: bytes, expected_len: int) -> bytes:
    """Decode a whole PackBits stream to exactly ``expected_len`` bytes."""
    if expected_len < 0:
        raise ValueError("expected_len must be >= 0")
    out = bytearray()
    i = 0
    n_src = len(data)
    while i < n_src:
        header = data[i]
        i += 1
        if header == 128:  # -128 as signed: skip
            continue
        if header <= 127:
            count = header + 1
            if i + count > n_src:
                raise Truncated("literal run of %d bytes overruns input" % count)
            out += data[i : i + count]
            i += count
        else:
            count = 257 - header  # 1 - n for n in -127..-1
            if i >= n_src:
                raise Truncated("repeat run missing its value byte")
            out += bytes((data[i],)) * count
            i += 1
        if len(out) > expected_len:
            raise LengthMismatch(
                "decoded %d bytes, expected %d" % (len(out), expected_len)
            )
    if len(out) != expected_len:
        raise LengthMismatch("decoded %d bytes, expected %d" % (len(out), expected_len))
    return bytes(out)


def encode_packbits(data: bytes) -> bytes:
    """Encode with repeats for runs of 3 or more; decode round-trips exactly."""
    out = bytearray()
    i = 0
    n = len(data)
    while i < n:
        # measure the run starting here
        j = i + 1
        while j < n and j - i < 128 and data[j] == data[i]:
            j += 1
        run = j - i
        if run >= 3:
            out.append(257 - run)  # -(run - 1) as unsigned
            out.append(data[i])
            i = j
            continue
        # literal segment: extend until a run of >= 3 starts or 128 bytes
        start = i
        i = j
        while i < n and i - start < 128:
            j = i + 1
            while j < n and j - i < 128 and data[j] == data[i]:
                j += 1
            if j - i >= 3:
                break
            i = j
        if i - start > 128:
            i = start + 128
        out.append(i - start - 1)
        out += data[start:i]
    return bytes(out)
