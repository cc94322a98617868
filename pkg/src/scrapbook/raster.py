"""Shared low-level rasterizer used by every render strategy.

One drawing routine serves all backends, which makes cross-backend pixel
equality a structural property: strategies differ only in scheduling and
cost accounting, never in pixel math.

Sampling is nearest-neighbor with inverse mapping: for every screen pixel
inside the photo's rotated footprint the source texel is looked up through
the inverse transform.  Compositing is source-over against the opaque
frame with round-half-up channel math.
"""

from __future__ import annotations

import math

import numpy as np

from .effects import apply_chain
from .geometry import Rect, outward_bbox
from .image import RasterImage
from .photo import PhotoObject, display_size, source_rect
from .viewport import ScreenSpec, to_screen


class Frame:
    """RGB8 surface at screen resolution; the background is white."""

    __slots__ = ("width", "height", "rgb")

    def __init__(self, width: int, height: int):
        self.width = width
        self.height = height
        self.rgb = np.full((height, width, 3), 255, dtype=np.uint8)

    def copy(self) -> "Frame":
        other = Frame.__new__(Frame)
        other.width = self.width
        other.height = self.height
        other.rgb = self.rgb.copy()
        return other

    def clear(self) -> None:
        self.rgb[:, :] = 255

    def to_image(self) -> RasterImage:
        out = np.empty((self.height, self.width, 4), dtype=np.uint8)
        out[:, :, :3] = self.rgb
        out[:, :, 3] = 255
        return RasterImage.from_array(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Frame):
            return NotImplemented
        return (self.width == other.width and self.height == other.height
                and np.array_equal(self.rgb, other.rgb))


def prepare_content(photo: PhotoObject, source: RasterImage) -> RasterImage:
    """Crop the source and run the effect chain: the photo's texture."""
    rect = source_rect(photo).intersect(Rect(0, 0, source.width, source.height))
    if rect.is_empty():
        raise ValueError(f"photo {photo.id!r}: crop {photo.crop} outside source")
    cropped = RasterImage.from_array(source.array[rect.y:rect.y2, rect.x:rect.x2])
    return apply_chain(cropped, photo.effects)


def _composite(region: np.ndarray, texels: np.ndarray, inside) -> None:
    """Source-over texels onto an RGB region; `inside` masks the footprint."""
    alpha_bytes = texels[:, :, 3]
    if (alpha_bytes == 255).all():
        # Opaque content: source-over degenerates to an exact texel copy.
        if inside is None:
            region[:] = texels[:, :, :3]
        else:
            region[inside] = texels[:, :, :3][inside]
        return
    alpha = alpha_bytes[:, :, None].astype(np.float64) / 255.0
    blended = np.floor(texels[:, :, :3] * alpha
                       + region.astype(np.float64) * (1.0 - alpha) + 0.5)
    if inside is None:
        region[:] = blended.astype(np.uint8)
    else:
        region[inside] = blended.astype(np.uint8)[inside]


def draw_photo(frame: Frame, photo: PhotoObject, content: RasterImage,
               screen: ScreenSpec) -> None:
    """Composite prepared content onto the frame at the photo's transform.

    Pixels outside the rotated footprint are untouched.
    """
    dw, dh = display_size(photo)
    scale = float(screen.scale)
    sw, sh = dw * scale, dh * scale
    cx, cy = to_screen(screen, photo.center)
    cx, cy = float(cx), float(cy)

    bbox = outward_bbox(cx, cy, sw, sh, photo.angle)
    clip = bbox.intersect(Rect(0, 0, frame.width, frame.height))
    if clip.is_empty():
        return

    theta = math.radians(photo.angle)
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    src = content.array

    if cos_t == 1.0 and sin_t == 0.0:
        # Axis-aligned: row and column lookups separate, no rotation grid.
        lx = (np.arange(clip.x, clip.x2, dtype=np.float64) + 0.5 - cx) + sw / 2.0
        ly = (np.arange(clip.y, clip.y2, dtype=np.float64) + 0.5 - cy) + sh / 2.0
        col_in = (lx >= 0) & (lx < sw)
        row_in = (ly >= 0) & (ly < sh)
        if not col_in.any() or not row_in.any():
            return
        c0 = int(col_in.argmax())
        c1 = len(col_in) - int(col_in[::-1].argmax())
        r0 = int(row_in.argmax())
        r1 = len(row_in) - int(row_in[::-1].argmax())
        sx = np.clip(np.floor(lx[c0:c1] / sw * content.width),
                     0, content.width - 1).astype(np.intp)
        sy = np.clip(np.floor(ly[r0:r1] / sh * content.height),
                     0, content.height - 1).astype(np.intp)
        texels = src[sy[:, None], sx[None, :]]
        region = frame.rgb[clip.y + r0:clip.y + r1, clip.x + c0:clip.x + c1]
        _composite(region, texels, None)
        return

    # Sample at pixel centres; inverse-rotate into the photo's local frame.
    ys, xs = np.mgrid[clip.y:clip.y2, clip.x:clip.x2]
    px = xs + 0.5 - cx
    py = ys + 0.5 - cy
    lx = px * cos_t + py * sin_t + sw / 2.0
    ly = -px * sin_t + py * cos_t + sh / 2.0

    inside = (lx >= 0) & (lx < sw) & (ly >= 0) & (ly < sh)
    if not inside.any():
        return

    sx = np.clip(np.floor(lx / sw * content.width), 0, content.width - 1).astype(np.intp)
    sy = np.clip(np.floor(ly / sh * content.height), 0, content.height - 1).astype(np.intp)
    texels = src[sy, sx]
    region = frame.rgb[clip.y:clip.y2, clip.x:clip.x2]
    _composite(region, texels, inside)
