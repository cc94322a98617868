"""Release acceptance suite: one test per criterion, each at its stated
tolerance, printing one PASS/FAIL line per criterion (run with -s to see
them stream)."""

import math
import random
import time
from contextlib import contextmanager

from scrapbook import effects as fx
from scrapbook.backends import (CAPABILITIES, BackendKind, Capability,
                                capability_check, render_full)
from scrapbook.bench import (exp_a_run, exp_b_run, exp_c_run, quantize_clock,
                             sim_plan)
from scrapbook.effects import EffectKind, apply_effect
from scrapbook.geometry import Rect, rotated_extents
from scrapbook.image import RasterImage, load_ppm, save_ppm
from scrapbook.photo import PhotoObject, photo_bbox
from scrapbook.scene import SceneDocument, scene_load, scene_save
from scrapbook.service import (ERR_BAD_IMAGE, ERR_INTERNAL,
                               ERR_MALFORMED_ARGS, ERR_UNKNOWN_EFFECT,
                               ERR_UNKNOWN_OP, LocalClient, dispatch,
                               encode_image, make_apply_request, route_effect)
from scrapbook.viewport import ScreenSpec
from scrapbook.zorder import ZOrderArray

from conftest import random_image
from test_bench import oracle_plan
from test_photo_model import corner_bbox_oracle
from test_zorder import naive_reorder


@contextmanager
def criterion(number, title):
    try:
        yield
    except BaseException:
        print(f"[acceptance] criterion {number:>2}: FAIL  {title}")
        raise
    print(f"[acceptance] criterion {number:>2}: PASS  {title}")


def test_criterion_01_area_scaling_ratio():
    with criterion(1, "per-pixel effect work scales exactly 921600/172800 = 16/3"):
        started = time.perf_counter()
        rows = exp_a_run(backends=[BackendKind.RASTER],
                         sizes=((480, 360), (1280, 720)),
                         ops=("grayscale", "invert"))
        work = {(r.image, r.op): r.work_units for r in rows}
        for op in ("grayscale", "invert"):
            big, small = work[("b1280x720", op)], work[("b480x360", op)]
            # exact by construction; real-browser measurements of the same
            # ratio landed near 5.1, this model pins it at 16/3
            assert big * 3 == small * 16
            assert big * 172800 == small * 921600
        assert time.perf_counter() - started < 1.0


def test_criterion_02_content_independence():
    with criterion(2, "detailed vs flat photos: identical work and times"):
        rows = exp_a_run()
        by_key = {(r.backend, r.image, r.op, r.trial): r for r in rows}
        checked = 0
        for (backend, image, op, trial), row in by_key.items():
            if not image.startswith("b"):
                continue
            twin = by_key[(backend, "f" + image[1:], op, trial)]
            assert twin.work_units == row.work_units
            assert twin.virtual_ms == row.virtual_ms
            checked += 1
        assert checked == 3 * 4 * 4 * 2


def test_criterion_03_effect_invariant_drag_scenegraph():
    with criterion(3, "scenegraph drag: invert pre-applied changes nothing"):
        plain = exp_b_run(BackendKind.SCENEGRAPH, (576, 384))
        tinted = exp_b_run(BackendKind.SCENEGRAPH, (576, 384), effect="invert")
        assert tinted.delta_ms == plain.delta_ms
        assert tinted.utilization == plain.utilization


SCENEGRAPH_KINDS = sorted(CAPABILITIES[BackendKind.SCENEGRAPH])


def _random_effect(rng):
    kind = rng.choice(SCENEGRAPH_KINDS)
    params = {
        EffectKind.BRIGHTNESS: lambda: fx.brightness(rng.randint(-120, 120)),
        EffectKind.CONTRAST: lambda: fx.contrast(rng.uniform(0, 2.5)),
        EffectKind.HUE: lambda: fx.hue(rng.uniform(-360, 720)),
        EffectKind.SATURATE: lambda: fx.saturate(rng.uniform(0, 2)),
        EffectKind.BLACKWHITE: lambda: fx.blackwhite(rng.randint(0, 255)),
        EffectKind.OPACITY: lambda: fx.opacity(rng.uniform(0, 1)),
        EffectKind.BORDER: lambda: fx.border(rng.randint(0, 3),
                                             (rng.randrange(256), rng.randrange(256),
                                              rng.randrange(256), rng.randrange(256))),
    }
    return params.get(kind, lambda: fx.EffectSpec(kind))()


def test_criterion_04_cross_backend_frame_equality():
    with criterion(4, "50 random scenes render bit-identically on both strategies"):
        started = time.perf_counter()
        rng = random.Random(0xACCE55)
        sources = {f"img{k}": random_image(rng, max_side=24, opaque=True)
                   for k in range(5)}
        screen = ScreenSpec.identity(160, 120)
        for _ in range(50):
            scene = SceneDocument(z_base=rng.randint(-4, 4))
            for i in range(rng.randint(0, 10)):
                key = rng.choice(sorted(sources))
                img = sources[key]
                scene.add_photo(PhotoObject(
                    id=f"p{i}", source=key,
                    source_size=(img.width, img.height),
                    scale=rng.uniform(0.25, 2.0), angle=rng.uniform(-360, 360),
                    center=(rng.uniform(-10, 170), rng.uniform(-10, 130)),
                    effects=tuple(_random_effect(rng)
                                  for _ in range(rng.randint(0, 2)))))
            raster_frame, _ = render_full(BackendKind.RASTER, scene,
                                          sources.__getitem__, screen)
            sg_frame, _ = render_full(BackendKind.SCENEGRAPH, scene,
                                      sources.__getitem__, screen)
            assert raster_frame == sg_frame
        assert time.perf_counter() - started < 30.0


def test_criterion_05_zorder_oracle():
    with criterion(5, "1000 random reorder sequences match the naive oracle"):
        rng = random.Random(0x5EED)
        for _ in range(1000):
            n = rng.randint(1, 8)
            z_base = rng.randint(-10, 10)
            names = [f"p{k}" for k in range(n)]
            order = ZOrderArray(z_base=z_base, ids=names)
            mirror = list(names)
            for _ in range(rng.randint(1, 10)):
                target = rng.choice(names)
                if rng.random() < 0.5:
                    order.send_to_back(target)
                    mirror = naive_reorder(mirror, "back", target)
                else:
                    order.bring_to_front(target)
                    mirror = naive_reorder(mirror, "front", target)
                assert order.draw_order() == mirror
                assert sorted(order.z_values().values()) == \
                    list(range(z_base, z_base + n))


def test_criterion_06_effect_algebra():
    with criterion(6, "involutions, idempotence and identity parameters hold"):
        rng = random.Random(0xA19EB)
        identities = (fx.brightness(0), fx.contrast(1), fx.hue(0),
                      fx.saturate(1), fx.opacity(1))
        for _ in range(100):
            img = random_image(rng, max_side=64)
            for spec in (fx.invert(), fx.flip_h(), fx.flip_v()):
                assert apply_effect(apply_effect(img, spec), spec) == img
            for spec in (fx.grayscale(), fx.desaturate()):
                once = apply_effect(img, spec)
                assert apply_effect(once, spec) == once
            for spec in identities:
                assert apply_effect(img, spec) == img


def test_criterion_07_sim_plan_oracle():
    with criterion(7, "load script matches the independently coded evaluator"):
        for seed in (0, 42):
            for i in range(1, 101):
                entry = sim_plan(i, seed)
                at_center, center, size, rotation, scale, crop = oracle_plan(i, seed)
                assert (entry.at_center, entry.center, entry.source_size,
                        entry.rotation, entry.scale) == \
                    (at_center, center, size, rotation, scale)
                assert entry.crop == (Rect(*crop) if crop else None)
        e15, e6, e7 = sim_plan(15, 42), sim_plan(6, 42), sim_plan(7, 42)
        assert e15.at_center and e15.source_size == (900, 600) and e15.scale == 0.8
        assert e15.rotation == 0.0 and e15.crop is None
        assert not e6.at_center and e6.source_size == (576, 384)
        assert e6.rotation == -50.0 and e6.scale == 1.0 and e6.crop is None
        assert not e7.at_center and e7.source_size == (900, 600)
        assert e7.rotation == 0.0 and e7.scale == 1.0
        assert e7.crop == Rect(50, 50, 300, 300)


def test_criterion_08_load_simulation_trends():
    with criterion(8, "probe times: raster non-decreasing, scenegraph constant"):
        started = time.perf_counter()
        raster = exp_c_run(BackendKind.RASTER, seed=3)
        probes = [r.probe_virtual_ms for r in raster.rows]
        assert len(probes) >= 2
        assert all(a <= b for a, b in zip(probes, probes[1:]))
        scenegraph = exp_c_run(BackendKind.SCENEGRAPH, seed=3)
        assert scenegraph.stop_rule == "max_photos"
        assert scenegraph.stopped_at == 100
        assert len({r.probe_virtual_ms for r in scenegraph.rows}) == 1
        assert time.perf_counter() - started < 60.0


def test_criterion_09_clock_quantization():
    with criterion(9, "15 ms timer floors every fast operation to zero"):
        throughput = 30000.0
        raw = exp_a_run(throughput=throughput)
        quantized = exp_a_run(throughput=throughput, quantize=15.0)
        raw_by = {(r.backend, r.image, r.op): r.virtual_ms for r in raw}
        for row in quantized:
            raw_ms = raw_by[(row.backend, row.image, row.op)]
            if raw_ms < 15.0:
                assert row.virtual_ms == 0.0
            else:
                assert row.virtual_ms == quantize_clock(raw_ms, 15.0) > 0.0
        effect_rows = [r for r in quantized if r.op in ("grayscale", "invert")]
        zero_rows = [r for r in effect_rows if r.virtual_ms == 0.0]
        assert zero_rows, "expected retained-strategy zeros under the 15 ms timer"
        assert {r.backend for r in zero_rows} <= {"scenegraph", "legacy"}
        assert all(r.virtual_ms > 0.0 for r in effect_rows if r.backend == "raster")


def test_criterion_10_failover_transparency_and_error_codes(monkeypatch):
    with criterion(10, "routed effects equal direct application; all error codes fire"):
        rng = random.Random(0xFA11)
        for backend in BackendKind:
            parametrized = {
                EffectKind.REDEYE: fx.redeye(Rect(0, 0, 8, 8)),
                EffectKind.HUE: fx.hue(123.0),
                EffectKind.SATURATE: fx.saturate(0.5),
            }
            for kind in sorted(frozenset(EffectKind) - CAPABILITIES[backend]):
                assert capability_check(backend, kind) is Capability.FALLBACK_NEEDED
                spec = parametrized.get(kind) or fx.EffectSpec(kind)
                img = random_image(rng, max_side=16, opaque=True)
                routed = route_effect(backend, img, spec, LocalClient())
                assert routed == apply_effect(img, spec)

        img_b64 = encode_image(RasterImage.filled(1, 1, (1, 2, 3, 255)))
        assert dispatch({"op": "defragment", "args": {}, "image": None})[
            "error_code"] == ERR_UNKNOWN_OP
        assert dispatch({"op": "apply_effect", "args": {"effect": {
            "kind": "opacity", "alpha": 7}}, "image": img_b64})[
            "error_code"] == ERR_MALFORMED_ARGS
        assert dispatch({"op": "apply_effect", "args": {"effect": {
            "kind": "vortex"}}, "image": img_b64})["error_code"] == ERR_UNKNOWN_EFFECT
        assert dispatch({"op": "apply_effect", "args": {"effect": {
            "kind": "invert"}}, "image": "@@@"})["error_code"] == ERR_BAD_IMAGE

        from scrapbook import service as service_module

        def fault(image, spec):
            raise RuntimeError("injected fault")

        monkeypatch.setattr(service_module.fx, "apply_effect", fault)
        assert dispatch({"op": "apply_effect", "args": {"effect": {
            "kind": "invert"}}, "image": img_b64})["error_code"] == ERR_INTERNAL


def test_criterion_11_bbox_geometry():
    with criterion(11, "bounding boxes stay within 1 px of the corner oracle"):
        ew, eh = rotated_extents(480, 360, 70)
        assert (math.ceil(ew), math.ceil(eh)) == (503, 575)
        rng = random.Random(0xB0B0)
        for _ in range(1000):
            w, h = rng.randint(1, 1400), rng.randint(1, 1000)
            deg = rng.uniform(-720, 720)
            cx, cy = rng.uniform(-300, 1300), rng.uniform(-300, 1100)
            photo = PhotoObject(id="p", source="s", source_size=(w, h),
                                center=(cx, cy), angle=deg)
            box = photo_bbox(photo)
            ox1, oy1, ox2, oy2 = corner_bbox_oracle(cx, cy, w, h, deg)
            assert max(abs(box.x - ox1), abs(box.y - oy1),
                       abs(box.x2 - ox2), abs(box.y2 - oy2)) <= 1


def test_criterion_12_round_trips(tmp_path):
    with criterion(12, "scene JSON and PPM round trips are lossless"):
        rng = random.Random(0x0DDD)
        scene = SceneDocument(z_base=-2)
        scene.add_photo(PhotoObject(id="a", source="x.ppm", crop=Rect(1, 2, 30, 20),
                                    scale=0.75, angle=-191.25, center=(12.5, -3.125),
                                    effects=(fx.sepia(), fx.border(1, (0, 1, 2, 3)))))
        scene.add_photo(PhotoObject(id="b", source="y.ppm",
                                    center=(1000.0, 700.0),
                                    effects=(fx.redeye(Rect(4, 5, 6, 7)),
                                             fx.opacity(0.25))))
        assert scene_load(scene_save(scene)) == scene
        assert scene_save(scene_load(scene_save(scene))) == scene_save(scene)

        for i in range(20):
            img = random_image(rng, max_side=32, opaque=True)
            path = tmp_path / f"rt{i}.ppm"
            save_ppm(img, path)
            assert load_ppm(path) == img
        translucent = random_image(rng, max_side=16)
        path = tmp_path / "alpha.ppm"
        save_ppm(translucent, path)
        reloaded = load_ppm(path)
        assert reloaded.array[:, :, :3].tobytes() == \
            translucent.array[:, :, :3].tobytes()
        assert (reloaded.array[:, :, 3] == 255).all()
