"""Pluggable render strategies over the shared rasterizer.

Three strategies exist.  `raster` is immediate-mode: any change wipes the
whole surface and redraws everything, re-applying every photo's effect
chain.  `scenegraph` and `legacy` are retained-mode: photos persist as
nodes, only damaged regions recomposite, and effects stick to the node
after being baked once.  `legacy` differs from `scenegraph` only through
its smaller capability table.

Work accounting is analytic and deterministic: one work unit is one pixel
written, where a photo draw is charged as its outward-rounded screen
bounding box and an effect application as the pixel area it processes.
Virtual time is work_units / throughput + a fixed per-operation overhead;
the wall clock is never consulted.

Per operation and strategy the unit charges are:

    operation     raster                          scenegraph / legacy
    full render   screen + sum(bbox + fx)         sum(bbox + fx)
    begin drag    screen + statics(bbox + fx)     0
    drag frame    old bbox + new bbox + fx        old bbox + new bbox
    end drag      full render                     bbox at rest
    attr change   full render of new state        old bbox + new bbox

where fx is the photo's effect-chain pixel count (raster re-applies the
chain every time it draws; retained nodes keep baked pixels).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

from .effects import EffectKind
from .geometry import Rect, outward_bbox
from .image import RasterImage
from .photo import PhotoObject, display_size, effect_pixels, move_to
from .raster import Frame, draw_photo, prepare_content
from .scene import SceneDocument
from .viewport import ScreenSpec, to_screen


class BackendKind(str, Enum):
    RASTER = "raster"
    SCENEGRAPH = "scenegraph"
    LEGACY = "legacy"

    @property
    def retained(self) -> bool:
        return self is not BackendKind.RASTER


_ALL_KINDS = frozenset(EffectKind)

CAPABILITIES: dict[BackendKind, frozenset] = {
    BackendKind.RASTER: _ALL_KINDS,
    BackendKind.SCENEGRAPH: _ALL_KINDS - {
        EffectKind.EMBOSS, EffectKind.REDEYE, EffectKind.FLIP_H, EffectKind.FLIP_V,
    },
    BackendKind.LEGACY: _ALL_KINDS - {
        EffectKind.HUE, EffectKind.SATURATE, EffectKind.SEPIA,
        EffectKind.SHARPEN, EffectKind.REDEYE,
    },
}


class Capability(str, Enum):
    SUPPORTED = "supported"
    FALLBACK_NEEDED = "fallback_needed"


def capability_check(backend: BackendKind, kind: EffectKind) -> Capability:
    if kind in CAPABILITIES[backend]:
        return Capability.SUPPORTED
    return Capability.FALLBACK_NEEDED


def supports_chain(backend: BackendKind, photo: PhotoObject) -> bool:
    return all(spec.kind in CAPABILITIES[backend] for spec in photo.effects)


class UnsupportedEffectError(RuntimeError):
    """An unsupported effect reached the rasterizer; the caller should have
    routed it through the failover service first."""


class SessionError(RuntimeError):
    """Interaction session misuse: nested begin or double end."""


@dataclass(frozen=True)
class RenderConfig:
    throughput_px_per_ms: float = 1000.0
    overhead_ms: float = 0.0
    remote_latency_ms: float = 50.0


@dataclass(frozen=True)
class CostReport:
    """Work-unit and virtual-time accounting for one operation."""

    work_units: int
    virtual_ms: float
    frames: int = 0

    def __add__(self, other: "CostReport") -> "CostReport":
        return CostReport(self.work_units + other.work_units,
                          self.virtual_ms + other.virtual_ms,
                          self.frames + other.frames)


ZERO_COST = CostReport(0, 0.0, 0)


def report(units: int, config: RenderConfig, frames: int = 1) -> CostReport:
    if math.isinf(config.throughput_px_per_ms):
        ms = config.overhead_ms
    else:
        ms = units / config.throughput_px_per_ms + config.overhead_ms
    return CostReport(units, ms, frames)


# --- work-unit arithmetic (pure; used by renders and by the harness) ---

def screen_bbox(photo: PhotoObject, screen: ScreenSpec,
                center=None, angle=None) -> Rect:
    """Outward-rounded screen box of the photo, optionally at an
    overridden centre or angle."""
    dw, dh = display_size(photo)
    scale = float(screen.scale)
    cx, cy = to_screen(screen, center if center is not None else photo.center)
    return outward_bbox(float(cx), float(cy), dw * scale, dh * scale,
                        photo.angle if angle is None else angle)


def draw_units(photo: PhotoObject, screen: ScreenSpec, center=None, angle=None) -> int:
    return screen_bbox(photo, screen, center, angle).area


def render_units(backend: BackendKind, scene: SceneDocument, screen: ScreenSpec) -> int:
    """Full render: clear (raster only) plus every photo's draw and chain."""
    units = 0 if backend.retained else screen.width * screen.height
    for photo in scene.photos:
        units += draw_units(photo, screen) + effect_pixels(photo)
    return units


def begin_units(backend: BackendKind, scene: SceneDocument, screen: ScreenSpec,
                photo_id: str) -> int:
    """Raster renders the static layer once; retained nodes just detach."""
    if backend.retained:
        return 0
    units = screen.width * screen.height
    for photo in scene.photos:
        if photo.id != photo_id:
            units += draw_units(photo, screen) + effect_pixels(photo)
    return units


def update_units(backend: BackendKind, photo: PhotoObject, screen: ScreenSpec,
                 old_center, new_center) -> int:
    units = (draw_units(photo, screen, center=old_center)
             + draw_units(photo, screen, center=new_center))
    if not backend.retained:
        units += effect_pixels(photo)
    return units


def end_units(backend: BackendKind, scene: SceneDocument, screen: ScreenSpec,
              photo_id: str) -> int:
    if backend.retained:
        return draw_units(scene.photo(photo_id), screen)
    return render_units(backend, scene, screen)


def load_units(backend: BackendKind, scene: SceneDocument, screen: ScreenSpec) -> int:
    """Cost of the newest photo appearing (scene already contains it)."""
    if backend.retained:
        newest = scene.photos[-1]
        return draw_units(newest, screen) + effect_pixels(newest)
    return render_units(backend, scene, screen)


def attr_change_units(backend: BackendKind, scene: SceneDocument, screen: ScreenSpec,
                      before: PhotoObject, after: PhotoObject) -> int:
    """Cost of mutating one photo's attributes (rotate, crop, effect, ...).

    Raster re-renders the whole updated scene; retained strategies
    recomposite the damaged region: the photo's box before and after.
    """
    if backend.retained:
        return draw_units(before, screen) + draw_units(after, screen)
    units = screen.width * screen.height
    for photo in scene.photos:
        current = after if photo.id == before.id else photo
        units += draw_units(current, screen) + effect_pixels(current)
    return units


# --- pixel-producing entry points ---

SourceResolver = Callable[[str], RasterImage]


def dict_resolver(mapping: dict) -> SourceResolver:
    return lambda key: mapping[key]


def _check_chains(backend: BackendKind, scene: SceneDocument) -> None:
    for photo in scene.photos:
        if not supports_chain(backend, photo):
            bad = [s.kind.value for s in photo.effects
                   if s.kind not in CAPABILITIES[backend]]
            raise UnsupportedEffectError(
                f"photo {photo.id!r}: {bad} not supported by {backend.value}; "
                f"route through the failover service first")


def render_full(backend: BackendKind, scene: SceneDocument, sources: SourceResolver,
                screen: ScreenSpec, config: RenderConfig = RenderConfig()
                ) -> tuple[Frame, CostReport]:
    """Composite the scene back-to-front into a fresh frame."""
    _check_chains(backend, scene)
    frame = Frame(screen.width, screen.height)
    for photo in scene.draw_order():
        draw_photo(frame, photo, prepare_content(photo, sources(photo.source)), screen)
    return frame, report(render_units(backend, scene, screen), config)


class InteractionSession:
    """One photo detached onto the interactive layer for a drag.

    While the session is open the photo draws above everything else; end()
    commits the final position and recomposites at the photo's true z.
    """

    def __init__(self, backend: BackendKind, scene: SceneDocument,
                 sources: SourceResolver, screen: ScreenSpec,
                 config: RenderConfig, photo_id: str):
        if getattr(scene, "_active_session", None) is not None:
            raise SessionError("scene already has an active interaction session")
        self.backend = backend
        self.scene = scene
        self.sources = sources
        self.screen = screen
        self.config = config
        self.photo = scene.photo(photo_id)  # KeyError on unknown id
        _check_chains(backend, scene)
        self.center = self.photo.center
        self.closed = False
        self._content = prepare_content(self.photo, sources(self.photo.source))
        self._bg = Frame(screen.width, screen.height)
        for other in scene.draw_order():
            if other.id != photo_id:
                draw_photo(self._bg, other, prepare_content(other, sources(other.source)),
                           screen)
        self._work = self._bg.copy()
        draw_photo(self._work, self.photo, self._content, screen)
        units = begin_units(backend, scene, screen, photo_id)
        self.begin_cost = report(units, config, frames=0 if backend.retained else 1)
        scene._active_session = self

    def frame(self) -> Frame:
        """Snapshot of the current composite: statics plus the photo on top."""
        return self._work.copy()

    def _restore_background(self, box: Rect) -> None:
        clip = box.intersect(Rect(0, 0, self.screen.width, self.screen.height))
        if not clip.is_empty():
            self._work.rgb[clip.y:clip.y2, clip.x:clip.x2] = \
                self._bg.rgb[clip.y:clip.y2, clip.x:clip.x2]

    def update(self, new_center) -> tuple[Frame, CostReport]:
        """Move the interactive photo; only the damaged boxes recomposite.

        The returned frame is the session's live surface, valid until the
        next session call; use frame() for a durable snapshot.
        """
        if self.closed:
            raise SessionError("session already ended")
        units = update_units(self.backend, self.photo, self.screen,
                             self.center, new_center)
        self._restore_background(screen_bbox(self.photo, self.screen, center=self.center))
        self.center = (float(new_center[0]), float(new_center[1]))
        draw_photo(self._work, move_to(self.photo, *self.center), self._content,
                   self.screen)
        return self._work, report(units, self.config)

    def end(self, final_center=None) -> tuple[Frame, CostReport]:
        """Commit the drag and recomposite at the photo's true z position.

        The release position defaults to the last updated centre; passing
        `final_center` folds the pointer-up move into the end composite.
        """
        if self.closed:
            raise SessionError("session already ended")
        if final_center is not None:
            self.center = (float(final_center[0]), float(final_center[1]))
        self.closed = True
        self.scene._active_session = None
        self.scene.replace_photo(move_to(self.photo, *self.center))
        units = end_units(self.backend, self.scene, self.screen, self.photo.id)
        frame, _ = render_full(self.backend, self.scene, self.sources,
                               self.screen, self.config)
        return frame, report(units, self.config)


def begin_interaction(backend: BackendKind, scene: SceneDocument,
                      sources: SourceResolver, screen: ScreenSpec,
                      photo_id: str, config: RenderConfig = RenderConfig()
                      ) -> InteractionSession:
    return InteractionSession(backend, scene, sources, screen, config, photo_id)
