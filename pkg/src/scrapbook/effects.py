"""Pixel effect operations: the single source of truth for every backend.

Each effect is a pure function of (image, spec): deterministic, never
mutates its input, and leaves alpha alone except for `opacity`.  Channel
math uses float64 intermediates, rounds half-up and clamps after rounding,
so results are bit-reproducible everywhere the same chain runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .geometry import Rect
from .image import RasterImage


class EffectKind(str, Enum):
    GRAYSCALE = "grayscale"
    INVERT = "invert"
    SEPIA = "sepia"
    BRIGHTNESS = "brightness"
    CONTRAST = "contrast"
    HUE = "hue"
    SATURATE = "saturate"
    DESATURATE = "desaturate"
    BLACKWHITE = "blackwhite"
    BLUR = "blur"
    SHARPEN = "sharpen"
    EMBOSS = "emboss"
    OPACITY = "opacity"
    FLIP_H = "flip_h"
    FLIP_V = "flip_v"
    BORDER = "border"
    REDEYE = "redeye"


class EffectParamError(ValueError):
    """Effect parameters outside their documented ranges (a caller bug)."""


def _require_number(params: dict, key: str, lo=None, hi=None):
    value = params.get(key)
    if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
        raise EffectParamError(f"{key} must be a finite number, got {value!r}")
    if lo is not None and value < lo:
        raise EffectParamError(f"{key}={value} below minimum {lo}")
    if hi is not None and value > hi:
        raise EffectParamError(f"{key}={value} above maximum {hi}")


def _require_color(params: dict, key: str):
    color = params.get(key)
    if (not isinstance(color, (tuple, list)) or len(color) != 4
            or not all(isinstance(c, int) and 0 <= c <= 255 for c in color)):
        raise EffectParamError(f"{key} must be four 0..255 integers, got {color!r}")


def _require_rect(params: dict, key: str):
    region = params.get(key)
    if not isinstance(region, Rect) or region.w <= 0 or region.h <= 0:
        raise EffectParamError(f"{key} must be a non-empty Rect, got {region!r}")


_PARAM_KEYS = {
    EffectKind.BRIGHTNESS: ("delta",),
    EffectKind.CONTRAST: ("factor",),
    EffectKind.HUE: ("degrees",),
    EffectKind.SATURATE: ("factor",),
    EffectKind.BLACKWHITE: ("threshold",),
    EffectKind.OPACITY: ("alpha",),
    EffectKind.BORDER: ("width", "color"),
    EffectKind.REDEYE: ("region",),
}


def _validate(kind: EffectKind, params: dict) -> None:
    expected = _PARAM_KEYS.get(kind, ())
    unknown = set(params) - set(expected)
    if unknown:
        raise EffectParamError(f"{kind.value}: unexpected parameters {sorted(unknown)}")
    missing = set(expected) - set(params)
    if missing:
        raise EffectParamError(f"{kind.value}: missing parameters {sorted(missing)}")
    if kind is EffectKind.BRIGHTNESS:
        _require_number(params, "delta", -255, 255)
    elif kind is EffectKind.CONTRAST:
        _require_number(params, "factor", 0)
    elif kind is EffectKind.HUE:
        _require_number(params, "degrees")
    elif kind is EffectKind.SATURATE:
        _require_number(params, "factor", 0)
    elif kind is EffectKind.BLACKWHITE:
        _require_number(params, "threshold", 0, 255)
    elif kind is EffectKind.OPACITY:
        _require_number(params, "alpha", 0, 1)
    elif kind is EffectKind.BORDER:
        width = params.get("width")
        if not isinstance(width, int) or isinstance(width, bool) or width < 0:
            raise EffectParamError(f"border width must be a non-negative int, got {width!r}")
        _require_color(params, "color")
    elif kind is EffectKind.REDEYE:
        _require_rect(params, "region")


@dataclass(frozen=True)
class EffectSpec:
    """One effect in a chain: a kind plus its validated parameters."""

    kind: EffectKind
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.kind, EffectKind):
            object.__setattr__(self, "kind", EffectKind(self.kind))
        _validate(self.kind, self.params)

    def to_json_dict(self) -> dict:
        out = {"kind": self.kind.value}
        for key, value in self.params.items():
            if isinstance(value, Rect):
                out[key] = [value.x, value.y, value.w, value.h]
            elif isinstance(value, tuple):
                out[key] = list(value)
            else:
                out[key] = value
        return out

    @classmethod
    def from_json_dict(cls, data: dict) -> "EffectSpec":
        if "kind" not in data:
            raise EffectParamError("effect object missing 'kind'")
        try:
            kind = EffectKind(data["kind"])
        except ValueError:
            raise EffectParamError(f"unknown effect kind {data['kind']!r}") from None
        params = {}
        for key, value in data.items():
            if key == "kind":
                continue
            if key == "region" and isinstance(value, list) and len(value) == 4:
                value = Rect(*value)
            elif key == "color" and isinstance(value, list):
                value = tuple(value)
            params[key] = value
        return cls(kind, params)


# Convenience constructors; chains read naturally as [invert(), blur()].

def grayscale() -> EffectSpec: return EffectSpec(EffectKind.GRAYSCALE)
def invert() -> EffectSpec: return EffectSpec(EffectKind.INVERT)
def sepia() -> EffectSpec: return EffectSpec(EffectKind.SEPIA)
def desaturate() -> EffectSpec: return EffectSpec(EffectKind.DESATURATE)
def blur() -> EffectSpec: return EffectSpec(EffectKind.BLUR)
def sharpen() -> EffectSpec: return EffectSpec(EffectKind.SHARPEN)
def emboss() -> EffectSpec: return EffectSpec(EffectKind.EMBOSS)
def flip_h() -> EffectSpec: return EffectSpec(EffectKind.FLIP_H)
def flip_v() -> EffectSpec: return EffectSpec(EffectKind.FLIP_V)
def brightness(delta) -> EffectSpec: return EffectSpec(EffectKind.BRIGHTNESS, {"delta": delta})
def contrast(factor) -> EffectSpec: return EffectSpec(EffectKind.CONTRAST, {"factor": factor})
def hue(degrees) -> EffectSpec: return EffectSpec(EffectKind.HUE, {"degrees": degrees})
def saturate(factor) -> EffectSpec: return EffectSpec(EffectKind.SATURATE, {"factor": factor})
def blackwhite(threshold) -> EffectSpec: return EffectSpec(EffectKind.BLACKWHITE, {"threshold": threshold})
def opacity(alpha) -> EffectSpec: return EffectSpec(EffectKind.OPACITY, {"alpha": alpha})
def border(width, color) -> EffectSpec: return EffectSpec(EffectKind.BORDER, {"width": width, "color": tuple(color)})
def redeye(region: Rect) -> EffectSpec: return EffectSpec(EffectKind.REDEYE, {"region": region})


@dataclass(frozen=True)
class Kernel3x3:
    """3x3 convolution kernel: clamp(round(sum(w*c) / divisor + bias))."""

    weights: tuple
    divisor: float = 1.0
    bias: float = 0.0

    def __post_init__(self):
        if len(self.weights) != 9:
            raise ValueError(f"kernel needs 9 weights, got {len(self.weights)}")
        if self.divisor == 0:
            raise ValueError("kernel divisor must not be zero")


BLUR_KERNEL = Kernel3x3((1, 1, 1, 1, 1, 1, 1, 1, 1), divisor=9.0)
SHARPEN_KERNEL = Kernel3x3((0, -1, 0, -1, 5, -1, 0, -1, 0))
EMBOSS_KERNEL = Kernel3x3((-2, -1, 0, -1, 1, 1, 0, 1, 2), bias=128.0)


def _round_half_up(arr: np.ndarray) -> np.ndarray:
    return np.floor(arr + 0.5)


def _quantize(arr: np.ndarray) -> np.ndarray:
    return np.clip(_round_half_up(arr), 0, 255).astype(np.uint8)


def _luma(rgb: np.ndarray) -> np.ndarray:
    return _round_half_up(0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2])


def _rgb_to_hsl(rgb: np.ndarray):
    """RGB in [0,1] to hexagonal HSL: H in [0,360), S and L in [0,1]."""
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    mx = rgb.max(axis=-1)
    mn = rgb.min(axis=-1)
    light = (mx + mn) / 2.0
    delta = mx - mn
    chromatic = delta > 0
    sat = np.zeros_like(light)
    denom = 1.0 - np.abs(2.0 * light - 1.0)
    np.divide(delta, denom, out=sat, where=chromatic)
    h = np.zeros_like(light)
    r_max = chromatic & (mx == r)
    g_max = chromatic & (mx == g) & ~r_max
    b_max = chromatic & ~r_max & ~g_max
    with np.errstate(invalid="ignore", divide="ignore"):
        h = np.where(r_max, ((g - b) / delta) % 6.0, h)
        h = np.where(g_max, (b - r) / delta + 2.0, h)
        h = np.where(b_max, (r - g) / delta + 4.0, h)
    return h * 60.0, sat, light


def _hsl_to_rgb(h: np.ndarray, s: np.ndarray, light: np.ndarray) -> np.ndarray:
    c = (1.0 - np.abs(2.0 * light - 1.0)) * s
    hp = (h % 360.0) / 60.0
    x = c * (1.0 - np.abs(hp % 2.0 - 1.0))
    zero = np.zeros_like(c)
    sector = [hp < 1, hp < 2, hp < 3, hp < 4, hp < 5, hp >= 5]
    r1 = np.select(sector, [c, x, zero, zero, x, c])
    g1 = np.select(sector, [x, c, c, x, zero, zero])
    b1 = np.select(sector, [zero, zero, x, c, c, x])
    m = light - c / 2.0
    return np.stack([r1 + m, g1 + m, b1 + m], axis=-1)


def convolve3x3(image: RasterImage, kernel: Kernel3x3) -> RasterImage:
    """Convolve RGB channels with clamp-to-edge borders; alpha is copied."""
    src = image.array
    rgb = src[:, :, :3].astype(np.float64)
    padded = np.pad(rgb, ((1, 1), (1, 1), (0, 0)), mode="edge")
    h, w = image.height, image.width
    acc = np.zeros_like(rgb)
    for idx, weight in enumerate(kernel.weights):
        if weight == 0:
            continue
        dy, dx = divmod(idx, 3)
        acc += weight * padded[dy:dy + h, dx:dx + w]
    out = np.empty_like(src)
    out[:, :, :3] = _quantize(acc / kernel.divisor + kernel.bias)
    out[:, :, 3] = src[:, :, 3]
    return RasterImage.from_array(out)


def _apply_rgb(image: RasterImage, fn) -> RasterImage:
    """Run fn on the float RGB planes, quantize, keep alpha."""
    src = image.array
    rgb = src[:, :, :3].astype(np.float64)
    out = np.empty_like(src)
    out[:, :, :3] = _quantize(fn(rgb))
    out[:, :, 3] = src[:, :, 3]
    return RasterImage.from_array(out)


def _do_grayscale(image, params):
    return _apply_rgb(image, lambda rgb: np.repeat(_luma(rgb)[..., None], 3, axis=-1))


def _do_invert(image, params):
    return _apply_rgb(image, lambda rgb: 255.0 - rgb)


_SEPIA = np.array([[0.393, 0.769, 0.189],
                   [0.349, 0.686, 0.168],
                   [0.272, 0.534, 0.131]])


def _do_sepia(image, params):
    return _apply_rgb(image, lambda rgb: rgb @ _SEPIA.T)


def _do_brightness(image, params):
    delta = params["delta"]
    return _apply_rgb(image, lambda rgb: rgb + delta)


def _do_contrast(image, params):
    factor = params["factor"]
    return _apply_rgb(image, lambda rgb: (rgb - 128.0) * factor + 128.0)


def _do_hue(image, params):
    degrees = params["degrees"]

    def rotate(rgb):
        h, s, light = _rgb_to_hsl(rgb / 255.0)
        return _hsl_to_rgb((h + degrees) % 360.0, s, light) * 255.0

    return _apply_rgb(image, rotate)


def _do_saturate(image, params):
    factor = params["factor"]

    def scale(rgb):
        h, s, light = _rgb_to_hsl(rgb / 255.0)
        return _hsl_to_rgb(h, np.clip(s * factor, 0.0, 1.0), light) * 255.0

    return _apply_rgb(image, scale)


def _do_blackwhite(image, params):
    threshold = params["threshold"]

    def binarize(rgb):
        mask = _luma(rgb) >= threshold
        return np.repeat(np.where(mask, 255.0, 0.0)[..., None], 3, axis=-1)

    return _apply_rgb(image, binarize)


def _do_opacity(image, params):
    alpha = params["alpha"]
    src = image.array
    out = src.copy()
    out[:, :, 3] = _quantize(src[:, :, 3].astype(np.float64) * alpha)
    return RasterImage.from_array(out)


def _do_flip_h(image, params):
    return RasterImage.from_array(image.array[:, ::-1])


def _do_flip_v(image, params):
    return RasterImage.from_array(image.array[::-1, :])


def _do_border(image, params):
    width = params["width"]
    color = params["color"]
    h, w = image.height, image.width
    out = np.empty((h + 2 * width, w + 2 * width, 4), dtype=np.uint8)
    out[:, :] = color
    out[width:width + h, width:width + w] = image.array
    return RasterImage.from_array(out)


def _do_redeye(image, params):
    region = params["region"].intersect(Rect(0, 0, image.width, image.height))
    out = image.array.copy()
    if not region.is_empty():
        patch = out[region.y:region.y2, region.x:region.x2].astype(np.float64)
        r, g, b = patch[:, :, 0], patch[:, :, 1], patch[:, :, 2]
        hot = r > 1.5 * np.maximum(g, b)
        r_fixed = np.where(hot, _round_half_up((g + b) / 2.0), r)
        out[region.y:region.y2, region.x:region.x2, 0] = np.clip(r_fixed, 0, 255).astype(np.uint8)
    return RasterImage.from_array(out)


_APPLY = {
    EffectKind.GRAYSCALE: _do_grayscale,
    EffectKind.DESATURATE: _do_grayscale,  # same luma replication
    EffectKind.INVERT: _do_invert,
    EffectKind.SEPIA: _do_sepia,
    EffectKind.BRIGHTNESS: _do_brightness,
    EffectKind.CONTRAST: _do_contrast,
    EffectKind.HUE: _do_hue,
    EffectKind.SATURATE: _do_saturate,
    EffectKind.BLACKWHITE: _do_blackwhite,
    EffectKind.OPACITY: _do_opacity,
    EffectKind.BLUR: lambda img, p: convolve3x3(img, BLUR_KERNEL),
    EffectKind.SHARPEN: lambda img, p: convolve3x3(img, SHARPEN_KERNEL),
    EffectKind.EMBOSS: lambda img, p: convolve3x3(img, EMBOSS_KERNEL),
    EffectKind.FLIP_H: _do_flip_h,
    EffectKind.FLIP_V: _do_flip_v,
    EffectKind.BORDER: _do_border,
    EffectKind.REDEYE: _do_redeye,
}


def apply_effect(image: RasterImage, spec: EffectSpec) -> RasterImage:
    """Apply one effect, returning a new image.

    Dimensions are preserved except for `border`, which grows the image by
    2*width per axis.
    """
    return _APPLY[spec.kind](image, spec.params)


def apply_chain(image: RasterImage, effects) -> RasterImage:
    """Left-to-right fold of apply_effect; the empty chain is the identity."""
    out = image.copy()
    for spec in effects:
        out = apply_effect(out, spec)
    return out


def chain_pixels(width: int, height: int, effects) -> int:
    """Pixels written when a chain runs on a width x height image.

    Each effect writes its full output area; border grows the running
    dimensions for itself and for every later effect.
    """
    w, h = width, height
    total = 0
    for spec in effects:
        if spec.kind is EffectKind.BORDER:
            w += 2 * spec.params["width"]
            h += 2 * spec.params["width"]
        total += w * h
    return total


def chain_output_size(width: int, height: int, effects) -> tuple[int, int]:
    """Image dimensions after a chain runs (only border changes them)."""
    w, h = width, height
    for spec in effects:
        if spec.kind is EffectKind.BORDER:
            w += 2 * spec.params["width"]
            h += 2 * spec.params["width"]
    return w, h
