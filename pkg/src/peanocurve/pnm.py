"""Minimal PGM (P2/P5) and PBM (P1/P4) reader and PGM writer."""
from __future__ import annotations

import numpy as np


def _tokens(data: bytes, count: int, pos: int):
    """Read ``count`` whitespace-separated header tokens, skipping comments."""
    out = []
    n = len(data)
    while len(out) < count:
        while pos < n and data[pos:pos + 1].isspace():
            pos += 1
        if pos < n and data[pos:pos + 1] == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise ValueError("truncated PNM header")
        out.append(data[start:pos])
    return out, pos


def parse_pnm(data: bytes) -> np.ndarray:
    """Decode a PBM/PGM byte string to a 2-D uint array.

    PBM ink (bit 1) is mapped to 255 so that dark pixels count as foreground.
    """
    magic = data[:2]
    if magic not in (b"P1", b"P2", b"P4", b"P5"):
        raise ValueError(f"unsupported PNM magic {magic!r}")
    if magic in (b"P1", b"P4"):
        (w, h), pos = _tokens(data, 2, 2)
        maxval = 1
    else:
        (w, h, mv), pos = _tokens(data, 3, 2)
        maxval = int(mv)
    w, h = int(w), int(h)
    if magic == b"P1":
        bits = [c for c in data[pos:].decode("ascii").split("#")[0] if c in "01"]
        arr = np.array(bits[: w * h], dtype=np.uint8).reshape(h, w)
        return arr * 255
    if magic == b"P2":
        vals = [int(t) for t in data[pos:].split() if not t.startswith(b"#")]
        return np.array(vals[: w * h], dtype=np.uint16).reshape(h, w)
    pos += 1  # single whitespace byte ends the header
    if magic == b"P4":
        stride = (w + 7) // 8
        raw = np.frombuffer(data[pos:pos + stride * h], dtype=np.uint8).reshape(h, stride)
        return np.unpackbits(raw, axis=1)[:, :w] * 255
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype(np.uint8)
    raw = np.frombuffer(data[pos:pos + w * h * dtype.itemsize], dtype=dtype)
    return raw.reshape(h, w).astype(np.uint16)


def read_pnm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        return parse_pnm(fh.read())


def write_pgm(path, image) -> None:
    img = np.asarray(image, dtype=np.uint8)
    h, w = img.shape
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (w, h))
        fh.write(img.tobytes())
