"""RGBA8 raster images and the binary PPM (P6) codec.

Images are row-major RGBA byte buffers with straight (non-premultiplied)
alpha.  P6 is the required interchange format: it is bit-exact, trivial to
parse and carries no alpha, so saving drops alpha and loading sets it to
255 everywhere.
"""

from __future__ import annotations

import numpy as np


class PpmError(ValueError):
    """Base class for PPM decode failures."""


class PpmBadMagicError(PpmError):
    """File does not start with the P6 magic."""


class PpmHeaderError(PpmError):
    """Width/height/maxval header is malformed."""


class PpmMaxvalError(PpmError):
    """Maxval is not 255; only 8-bit channels are supported."""


class PpmTruncatedError(PpmError):
    """Pixel payload is shorter than width*height*3 bytes."""


class RasterImage:
    """Owned width x height grid of RGBA8 samples."""

    __slots__ = ("width", "height", "data")

    def __init__(self, width: int, height: int, data: bytearray | bytes | None = None):
        if width <= 0 or height <= 0:
            raise ValueError(f"image dimensions must be positive, got {width}x{height}")
        expected = width * height * 4
        if data is None:
            data = bytearray(expected)
        elif len(data) != expected:
            raise ValueError(f"pixel buffer length {len(data)} != {expected}")
        self.width = width
        self.height = height
        self.data = bytearray(data)

    @classmethod
    def filled(cls, width: int, height: int, rgba=(0, 0, 0, 255)) -> "RasterImage":
        img = cls(width, height)
        img.array[:, :] = rgba
        return img

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "RasterImage":
        """Build from an (h, w, 4) uint8 array; the data is copied."""
        if arr.ndim != 3 or arr.shape[2] != 4 or arr.dtype != np.uint8:
            raise ValueError(f"expected (h, w, 4) uint8 array, got {arr.shape} {arr.dtype}")
        h, w = arr.shape[:2]
        return cls(w, h, bytearray(arr.tobytes()))

    @property
    def array(self) -> np.ndarray:
        """Writable (h, w, 4) uint8 view onto the pixel buffer."""
        return np.frombuffer(self.data, dtype=np.uint8).reshape(self.height, self.width, 4)

    def get_pixel(self, x: int, y: int) -> tuple[int, int, int, int]:
        i = (y * self.width + x) * 4
        return tuple(self.data[i:i + 4])

    def set_pixel(self, x: int, y: int, rgba) -> None:
        i = (y * self.width + x) * 4
        self.data[i:i + 4] = bytes(rgba)

    def copy(self) -> "RasterImage":
        return RasterImage(self.width, self.height, bytearray(self.data))

    def __eq__(self, other) -> bool:
        if not isinstance(other, RasterImage):
            return NotImplemented
        return (self.width == other.width and self.height == other.height
                and self.data == other.data)

    def __repr__(self) -> str:
        return f"RasterImage({self.width}x{self.height})"


def _read_header_token(buf: bytes, pos: int) -> tuple[bytes, int]:
    # Skip whitespace and '#' comment lines, then collect one token.
    n = len(buf)
    while pos < n:
        c = buf[pos:pos + 1]
        if c.isspace():
            pos += 1
        elif c == b"#":
            while pos < n and buf[pos:pos + 1] != b"\n":
                pos += 1
        else:
            break
    start = pos
    while pos < n and not buf[pos:pos + 1].isspace():
        pos += 1
    if start == pos:
        raise PpmHeaderError("unexpected end of header")
    return buf[start:pos], pos


def decode_ppm(buf: bytes) -> RasterImage:
    """Decode a binary PPM (P6, maxval 255) byte string."""
    if buf[:2] != b"P6":
        raise PpmBadMagicError(f"not a binary PPM: magic {buf[:2]!r}")
    pos = 2
    fields = []
    for _ in range(3):
        token, pos = _read_header_token(buf, pos)
        try:
            fields.append(int(token))
        except ValueError:
            raise PpmHeaderError(f"non-numeric header field {token!r}") from None
    width, height, maxval = fields
    if width <= 0 or height <= 0:
        raise PpmHeaderError(f"non-positive dimensions {width}x{height}")
    if maxval != 255:
        raise PpmMaxvalError(f"maxval {maxval} unsupported, must be 255")
    pos += 1  # exactly one whitespace byte separates header and payload
    need = width * height * 3
    payload = buf[pos:pos + need]
    if len(payload) < need:
        raise PpmTruncatedError(f"payload {len(payload)} bytes, need {need}")
    rgb = np.frombuffer(payload, dtype=np.uint8).reshape(height, width, 3)
    out = np.empty((height, width, 4), dtype=np.uint8)
    out[:, :, :3] = rgb
    out[:, :, 3] = 255
    return RasterImage.from_array(out)


def encode_ppm(image: RasterImage) -> bytes:
    """Encode to binary PPM bytes; alpha is dropped."""
    header = b"P6\n%d %d\n255\n" % (image.width, image.height)
    return header + image.array[:, :, :3].tobytes()


def load_ppm(path) -> RasterImage:
    with open(path, "rb") as fh:
        return decode_ppm(fh.read())


def save_ppm(image: RasterImage, path) -> None:
    with open(path, "wb") as fh:
        fh.write(encode_ppm(image))
