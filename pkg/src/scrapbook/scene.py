"""Scene documents: an ordered photo collection plus JSON persistence.

The document format is UTF-8 JSON with exactly these fields:

    {"standard_viewport": [1024, 768],
     "z_base": int,
     "photos": [{"id": str, "source": str, "crop": [x,y,w,h] | null,
                 "scale": num, "angle": num, "center": [x, y],
                 "effects": [{"kind": str, ...}], "z": int}]}

Photos are kept back-to-front; the photo at list position i always has
z = z_base + i.  save/load round-trips are lossless.
"""

from __future__ import annotations

import json
from dataclasses import replace

from .effects import EffectParamError, EffectSpec
from .geometry import Rect
from .photo import PhotoObject
from .zorder import ZOrderArray

STANDARD_VIEWPORT = (1024, 768)


class SceneFormatError(ValueError):
    pass


class UnknownFieldError(SceneFormatError):
    pass


class DuplicateIdError(SceneFormatError):
    pass


class DuplicateZError(SceneFormatError):
    pass


class NonContiguousZError(SceneFormatError):
    pass


class SceneDocument:
    """Mutable container; at most one thread mutates a scene at a time."""

    def __init__(self, z_base: int = 0):
        self.standard_viewport = STANDARD_VIEWPORT
        self.z_base = z_base
        self.photos: list[PhotoObject] = []

    def __eq__(self, other) -> bool:
        if not isinstance(other, SceneDocument):
            return NotImplemented
        return (self.standard_viewport == other.standard_viewport
                and self.z_base == other.z_base
                and self.photos == other.photos)

    def ids(self) -> list[str]:
        return [p.id for p in self.photos]

    def photo(self, photo_id: str) -> PhotoObject:
        for p in self.photos:
            if p.id == photo_id:
                return p
        raise KeyError(photo_id)

    def add_photo(self, photo: PhotoObject) -> PhotoObject:
        """Append front-most; the z-index is assigned by position."""
        if any(p.id == photo.id for p in self.photos):
            raise DuplicateIdError(f"photo id {photo.id!r} already in scene")
        stored = replace(photo, z=self.z_base + len(self.photos))
        self.photos.append(stored)
        return stored

    def replace_photo(self, photo: PhotoObject) -> PhotoObject:
        """Swap the entry with the same id, keeping its z position."""
        for i, p in enumerate(self.photos):
            if p.id == photo.id:
                stored = replace(photo, z=p.z)
                self.photos[i] = stored
                return stored
        raise KeyError(photo.id)

    def _reorder(self, order: ZOrderArray) -> None:
        by_id = {p.id: p for p in self.photos}
        self.photos = [replace(by_id[pid], z=self.z_base + i)
                       for i, pid in enumerate(order.draw_order())]

    def zorder(self) -> ZOrderArray:
        return ZOrderArray(self.z_base, self.ids())

    def send_to_back(self, photo_id: str) -> None:
        order = self.zorder()
        order.send_to_back(photo_id)
        self._reorder(order)

    def bring_to_front(self, photo_id: str) -> None:
        order = self.zorder()
        order.bring_to_front(photo_id)
        self._reorder(order)

    def draw_order(self) -> list[PhotoObject]:
        return list(self.photos)


_PHOTO_FIELDS = {"id", "source", "crop", "scale", "angle", "center", "effects", "z"}
_SCENE_FIELDS = {"standard_viewport", "z_base", "photos"}


def _photo_to_dict(photo: PhotoObject) -> dict:
    crop = photo.crop
    return {
        "id": photo.id,
        "source": photo.source,
        "crop": [crop.x, crop.y, crop.w, crop.h] if crop is not None else None,
        "scale": photo.scale,
        "angle": photo.angle,
        "center": [photo.center[0], photo.center[1]],
        "effects": [spec.to_json_dict() for spec in photo.effects],
        "z": photo.z,
    }


def scene_save(scene: SceneDocument) -> str:
    doc = {
        "standard_viewport": list(scene.standard_viewport),
        "z_base": scene.z_base,
        "photos": [_photo_to_dict(p) for p in scene.photos],
    }
    return json.dumps(doc, indent=2)


def _parse_photo(entry) -> PhotoObject:
    if not isinstance(entry, dict):
        raise SceneFormatError(f"photo entry must be an object, got {type(entry).__name__}")
    unknown = set(entry) - _PHOTO_FIELDS
    if unknown:
        raise UnknownFieldError(f"unknown photo field(s) {sorted(unknown)}")
    missing = _PHOTO_FIELDS - set(entry)
    if missing:
        raise SceneFormatError(f"photo missing field(s) {sorted(missing)}")
    crop = entry["crop"]
    if crop is not None:
        if not isinstance(crop, list) or len(crop) != 4:
            raise SceneFormatError(f"crop must be [x, y, w, h] or null, got {crop!r}")
        try:
            crop = Rect(*crop)
        except ValueError as exc:
            raise SceneFormatError(f"photo {entry['id']!r}: {exc}") from exc
    center = entry["center"]
    if not isinstance(center, list) or len(center) != 2:
        raise SceneFormatError(f"center must be [x, y], got {center!r}")
    try:
        effects = tuple(EffectSpec.from_json_dict(e) for e in entry["effects"])
    except EffectParamError as exc:
        raise SceneFormatError(f"photo {entry['id']!r}: {exc}") from exc
    try:
        return PhotoObject(
            id=entry["id"],
            source=entry["source"],
            crop=crop,
            scale=entry["scale"],
            angle=entry["angle"],
            center=(float(center[0]), float(center[1])),
            effects=effects,
            z=entry["z"],
        )
    except (ValueError, TypeError) as exc:
        raise SceneFormatError(f"photo {entry['id']!r}: {exc}") from exc


def scene_load(text: str) -> SceneDocument:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SceneFormatError("document root must be an object")
    unknown = set(doc) - _SCENE_FIELDS
    if unknown:
        raise UnknownFieldError(f"unknown document field(s) {sorted(unknown)}")
    missing = _SCENE_FIELDS - set(doc)
    if missing:
        raise SceneFormatError(f"document missing field(s) {sorted(missing)}")
    if doc["standard_viewport"] != list(STANDARD_VIEWPORT):
        raise SceneFormatError(f"standard_viewport must be {list(STANDARD_VIEWPORT)}")
    z_base = doc["z_base"]
    if not isinstance(z_base, int):
        raise SceneFormatError(f"z_base must be an integer, got {z_base!r}")
    photos = [_parse_photo(entry) for entry in doc["photos"]]

    seen_ids = set()
    for p in photos:
        if p.id in seen_ids:
            raise DuplicateIdError(f"duplicate photo id {p.id!r}")
        seen_ids.add(p.id)
    z_values = [p.z for p in photos]
    if len(set(z_values)) != len(z_values):
        raise DuplicateZError(f"duplicate z-index in {sorted(z_values)}")
    expected = list(range(z_base, z_base + len(photos)))
    if sorted(z_values) != expected:
        raise NonContiguousZError(
            f"z-indexes {sorted(z_values)} are not the contiguous set {expected}")

    scene = SceneDocument(z_base=z_base)
    scene.photos = sorted(photos, key=lambda p: p.z)
    return scene
