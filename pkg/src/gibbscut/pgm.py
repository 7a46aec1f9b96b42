"""Minimal PGM (P2 ascii / P5 raw) gray-image reader and writer.

Handles '#' comments in headers and 16-bit samples (big-endian, per the
format) so round trips are byte-faithful for P5 and whitespace-normal for
P2.  This is the only image format the toolkit speaks.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import GibbsCutError


class PgmError(GibbsCutError):
    pass


@dataclass(frozen=True)
class ImageBuffer:
    width: int
    height: int
    maxval: int
    pixels: tuple[int, ...]  # row-major

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise PgmError("image must have positive dimensions")
        if not 0 < self.maxval < 65536:
            raise PgmError(f"maxval {self.maxval} out of range 1..65535")
        if len(self.pixels) != self.width * self.height:
            raise PgmError("pixel count does not match dimensions")
        if any(p < 0 or p > self.maxval for p in self.pixels):
            raise PgmError("pixel value out of range")


def _header_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """First ``count`` whitespace-separated tokens, skipping # comments."""
    tokens: list[bytes] = []
    i = 0
    n = len(data)
    while len(tokens) < count and i < n:
        c = data[i : i + 1]
        if c.isspace():
            i += 1
        elif c == b"#":
            while i < n and data[i : i + 1] not in (b"\n", b"\r"):
                i += 1
        else:
            j = i
            while j < n and not data[j : j + 1].isspace() and data[j : j + 1] != b"#":
                j += 1
            tokens.append(data[i:j])
            i = j
    if len(tokens) < count:
        raise PgmError("truncated header")
    return tokens, i


def read_pgm(path: str) -> ImageBuffer:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise PgmError(f"cannot read {path}: {exc}") from exc
    if data[:2] not in (b"P2", b"P5"):
        raise PgmError(f"not a PGM file (magic {data[:2]!r})")
    tokens, pos = _header_tokens(data, 4)
    magic = tokens[0]
    try:
        width, height, maxval = (int(t) for t in tokens[1:4])
    except ValueError as exc:
        raise PgmError(f"bad header field: {exc}") from exc
    count = width * height
    if magic == b"P2":
        fields = data[pos:].split()
        if len(fields) < count:
            raise PgmError(f"expected {count} samples, found {len(fields)}")
        try:
            pixels = tuple(int(f) for f in fields[:count])
        except ValueError as exc:
            raise PgmError(f"bad sample: {exc}") from exc
    else:
        pos += 1  # single whitespace byte after maxval
        if maxval < 256:
            raw = data[pos : pos + count]
            if len(raw) < count:
                raise PgmError("truncated raster")
            pixels = tuple(raw)
        else:
            raw = data[pos : pos + 2 * count]
            if len(raw) < 2 * count:
                raise PgmError("truncated raster")
            pixels = tuple(
                (raw[2 * i] << 8) | raw[2 * i + 1] for i in range(count)
            )
    return ImageBuffer(width, height, maxval, pixels)


def write_pgm(img: ImageBuffer, path: str, binary: bool = True) -> None:
    with open(path, "wb") as fh:
        if binary:
            fh.write(f"P5\n{img.width} {img.height}\n{img.maxval}\n".encode())
            if img.maxval < 256:
                fh.write(bytes(img.pixels))
            else:
                out = bytearray()
                for p in img.pixels:
                    out.append(p >> 8)
                    out.append(p & 0xFF)
                fh.write(bytes(out))
        else:
            fh.write(f"P2\n{img.width} {img.height}\n{img.maxval}\n".encode())
            for y in range(img.height):
                row = img.pixels[y * img.width : (y + 1) * img.width]
                fh.write((" ".join(str(p) for p in row) + "\n").encode())
