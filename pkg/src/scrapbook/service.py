"""Single-endpoint processing service and capability failover routing.

When a backend lacks an effect, the effect runs "server-side" through one
JSON switch and the baked pixels are substituted, so every feature works
on every backend.  The same envelope is spoken in-process (LocalClient)
and over HTTP POST /api (HttpClient against serve()).

Request envelope:   {"op": str, "args": object, "image": str}
    `image` is a base64 binary-PPM payload, or "store:<key>" to reference
    the server's image store.
Response envelope:  {"status": "ok"|"error", "error_code": int|null,
                     "message": str, "payload": object|null}

Error codes:
    4001  unknown op
    4002  malformed args or envelope
    4003  unknown effect kind
    4004  undecodable or unresolvable image
    5001  internal failure

Errors always travel inside the response envelope, never as transport
failures.  The wire carries RGB only; routed effect kinds never modify
alpha, so the client re-attaches the original alpha plane.
"""

from __future__ import annotations

import base64
import binascii
import json
import urllib.error
import urllib.request
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from . import effects as fx
from .backends import BackendKind, Capability, RenderConfig, capability_check
from .image import PpmError, RasterImage, decode_ppm, encode_ppm, load_ppm

ERR_UNKNOWN_OP = 4001
ERR_MALFORMED_ARGS = 4002
ERR_UNKNOWN_EFFECT = 4003
ERR_BAD_IMAGE = 4004
ERR_INTERNAL = 5001

_STORE_PREFIX = "store:"


class FailoverError(RuntimeError):
    """The service answered with an error envelope."""

    def __init__(self, code: int, message: str):
        super().__init__(f"[{code}] {message}")
        self.code = code
        self.message = message


class ServiceUnreachableError(RuntimeError):
    """Transport to the remote service failed after all retries; the
    caller decides whether to retry later or abort."""


def encode_image(image: RasterImage) -> str:
    return base64.b64encode(encode_ppm(image)).decode("ascii")


def decode_image(payload: str) -> RasterImage:
    raw = base64.b64decode(payload.encode("ascii"), validate=True)
    return decode_ppm(raw)


def make_ping_request() -> dict:
    return {"op": "ping", "args": {}, "image": None}


def make_apply_request(spec: fx.EffectSpec, image: RasterImage | str) -> dict:
    """Apply-effect envelope; pass a store key string to skip the upload."""
    if isinstance(image, RasterImage):
        payload = encode_image(image)
    else:
        payload = _STORE_PREFIX + image
    return {"op": "apply_effect", "args": {"effect": spec.to_json_dict()}, "image": payload}


def _ok(payload: dict) -> dict:
    return {"status": "ok", "error_code": None, "message": "", "payload": payload}


def _error(code: int, message: str) -> dict:
    return {"status": "error", "error_code": code, "message": message, "payload": None}


class MemoryStore:
    """Keyed image store; exclusive access per key is the caller's duty."""

    def __init__(self):
        self._images: dict[str, RasterImage] = {}

    def put(self, key: str, image: RasterImage) -> None:
        self._images[key] = image

    def get(self, key: str) -> RasterImage:
        return self._images[key]


class DirectoryStore:
    """Read-only store over a directory of <key>.ppm files."""

    def __init__(self, root):
        self.root = Path(root)

    def get(self, key: str) -> RasterImage:
        if "/" in key or "\\" in key or key.startswith("."):
            raise KeyError(key)
        path = self.root / f"{key}.ppm"
        if not path.is_file():
            raise KeyError(key)
        return load_ppm(path)


def _resolve_image(field, store) -> RasterImage | dict:
    if not isinstance(field, str):
        return _error(ERR_BAD_IMAGE, "image must be a base64 PPM string or store key")
    if field.startswith(_STORE_PREFIX):
        key = field[len(_STORE_PREFIX):]
        if store is None:
            return _error(ERR_BAD_IMAGE, f"no image store configured for key {key!r}")
        try:
            return store.get(key)
        except KeyError:
            return _error(ERR_BAD_IMAGE, f"image store has no key {key!r}")
    try:
        return decode_image(field)
    except (binascii.Error, PpmError, ValueError) as exc:
        return _error(ERR_BAD_IMAGE, f"undecodable image: {exc}")


def _apply_effect_op(envelope: dict, store) -> dict:
    args = envelope.get("args")
    if not isinstance(args, dict) or not isinstance(args.get("effect"), dict):
        return _error(ERR_MALFORMED_ARGS, "args.effect object required")
    effect = args["effect"]
    kind = effect.get("kind")
    if kind not in set(k.value for k in fx.EffectKind):
        return _error(ERR_UNKNOWN_EFFECT, f"unknown effect kind {kind!r}")
    try:
        spec = fx.EffectSpec.from_json_dict(effect)
    except fx.EffectParamError as exc:
        return _error(ERR_MALFORMED_ARGS, str(exc))
    image = _resolve_image(envelope.get("image"), store)
    if isinstance(image, dict):
        return image
    result = fx.apply_effect(image, spec)
    return _ok({"image": encode_image(result)})


def dispatch(envelope, store=None) -> dict:
    """Interpret one request envelope; stateless except for the store."""
    try:
        if not isinstance(envelope, dict):
            return _error(ERR_MALFORMED_ARGS, "request envelope must be a JSON object")
        op = envelope.get("op")
        if op == "ping":
            return _ok({"pong": True})
        if op == "apply_effect":
            return _apply_effect_op(envelope, store)
        return _error(ERR_UNKNOWN_OP, f"unknown op {op!r}")
    except Exception as exc:  # never let an internal bug escape the envelope
        return _error(ERR_INTERNAL, f"internal failure: {exc}")


class LocalClient:
    """In-process transport: dispatch without serialization overhead."""

    def __init__(self, store=None):
        self.store = store

    def call(self, envelope: dict) -> dict:
        return dispatch(envelope, self.store)


class HttpClient:
    """POST /api transport with a bounded retry before giving up."""

    def __init__(self, base_url: str, attempts: int = 3, timeout: float = 10.0):
        self.url = base_url.rstrip("/") + "/api"
        self.attempts = attempts
        self.timeout = timeout

    def call(self, envelope: dict) -> dict:
        body = json.dumps(envelope).encode("utf-8")
        last_error = None
        for _ in range(self.attempts):
            request = urllib.request.Request(
                self.url, data=body, headers={"Content-Type": "application/json"})
            try:
                with urllib.request.urlopen(request, timeout=self.timeout) as resp:
                    return json.loads(resp.read().decode("utf-8"))
            except (urllib.error.URLError, ConnectionError, TimeoutError) as exc:
                last_error = exc
        raise ServiceUnreachableError(
            f"service at {self.url} unreachable after {self.attempts} attempts: "
            f"{last_error}") from last_error


def route_effect(backend: BackendKind, image: RasterImage, spec: fx.EffectSpec,
                 client=None) -> RasterImage:
    """Run the effect locally when the backend supports it, otherwise via
    the service; the result is bit-identical either way."""
    if capability_check(backend, spec.kind) is Capability.SUPPORTED:
        return fx.apply_effect(image, spec)
    client = client or LocalClient()
    response = client.call(make_apply_request(spec, image))
    if response.get("status") != "ok":
        raise FailoverError(response.get("error_code") or ERR_INTERNAL,
                            response.get("message", "unknown failure"))
    result = decode_image(response["payload"]["image"])
    if (result.width, result.height) == (image.width, image.height):
        # Routed kinds are RGB-only; restore the alpha the wire dropped.
        result.array[:, :, 3] = image.array[:, :, 3]
    return result


def bake_chain(backend: BackendKind, image: RasterImage, chain,
               client=None) -> tuple[RasterImage, int, int]:
    """Apply a whole chain through the router.

    Returns (result, local_pixels, remote_calls) so callers can account
    for virtual time: local effects cost their pixel area, remote ones a
    round-trip latency.
    """
    out = image
    local_pixels = 0
    remote_calls = 0
    for spec in chain:
        if capability_check(backend, spec.kind) is Capability.SUPPORTED:
            local_pixels += fx.chain_pixels(out.width, out.height, [spec])
            out = fx.apply_effect(out, spec)
        else:
            remote_calls += 1
            out = route_effect(backend, out, spec, client)
    return out, local_pixels, remote_calls


def resolve_scene(backend: BackendKind, scene, sources, client=None,
                  config: RenderConfig = RenderConfig()):
    """Bake every chain the backend cannot run, before rendering.

    Photos whose chains are fully supported pass through untouched; the
    rest are replaced by effect-free photos over baked pixel sources.
    Returns (scene, resolver, cost): the cost counts client-side effect
    pixels as work and one remote latency per routed effect.
    """
    from dataclasses import replace

    from .backends import CostReport, report, supports_chain
    from .raster import prepare_content
    from .scene import SceneDocument

    baked: dict[str, RasterImage] = {}
    photos = []
    local_pixels = 0
    remote_calls = 0
    for photo in scene.photos:
        if supports_chain(backend, photo):
            photos.append(photo)
            continue
        content = prepare_content(replace(photo, effects=()), sources(photo.source))
        result, pixels, calls = bake_chain(backend, content, photo.effects, client)
        local_pixels += pixels
        remote_calls += calls
        key = f"baked:{photo.id}"
        baked[key] = result
        photos.append(replace(photo, source=key, crop=None,
                              source_size=(result.width, result.height), effects=()))

    resolved = SceneDocument(z_base=scene.z_base)
    resolved.photos = photos

    def resolver(key: str) -> RasterImage:
        if key in baked:
            return baked[key]
        return sources(key)

    base = report(local_pixels, config, frames=0)
    cost = CostReport(base.work_units,
                      base.virtual_ms + remote_calls * config.remote_latency_ms,
                      0)
    return resolved, resolver, cost


class _ApiHandler(BaseHTTPRequestHandler):
    def do_POST(self):
        if self.path != "/api":
            self.send_error(404, "only POST /api is served")
            return
        length = int(self.headers.get("Content-Length") or 0)
        try:
            envelope = json.loads(self.rfile.read(length).decode("utf-8"))
        except (ValueError, UnicodeDecodeError):
            envelope = None  # dispatch answers 4002 inside the envelope
        body = json.dumps(dispatch(envelope, self.server.store)).encode("utf-8")
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, format, *args):  # keep test output quiet
        pass


class FailoverHTTPServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address, store=None):
        super().__init__(address, _ApiHandler)
        self.store = store


def make_server(port: int = 0, store=None, host: str = "127.0.0.1") -> FailoverHTTPServer:
    """Bind the single-endpoint API server; port 0 picks a free port."""
    return FailoverHTTPServer((host, port), store)


def serve(port: int, store=None, host: str = "127.0.0.1") -> None:
    server = make_server(port, store, host)
    print(f"serving POST http://{host}:{server.server_address[1]}/api")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
