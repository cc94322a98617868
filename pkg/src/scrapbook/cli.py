"""Command-line entry points: effect batches, scene rendering, the
failover service and the three experiment harnesses."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import bench
from .backends import BackendKind, RenderConfig, render_full
from .effects import EffectKind, EffectSpec, apply_effect
from .image import load_ppm, save_ppm
from .scene import scene_load
from .service import DirectoryStore, HttpClient, LocalClient, resolve_scene, serve
from .viewport import ScreenSpec


def _parse_size(text: str) -> tuple[int, int]:
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WxH, got {text!r}") from None


def _parse_param(text: str):
    key, _, raw = text.partition("=")
    if not _:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    if "," in raw:
        return key, [int(v) for v in raw.split(",")]
    for cast in (int, float):
        try:
            return key, cast(raw)
        except ValueError:
            continue
    return key, raw


def _backend(text: str) -> BackendKind:
    try:
        return BackendKind(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"backend must be one of {[b.value for b in BackendKind]}, got {text!r}") from None


def _file_resolver(base: Path):
    cache = {}

    def resolve(source: str):
        if source not in cache:
            path = Path(source)
            if not path.is_absolute():
                path = base / path
            cache[source] = load_ppm(path)
        return cache[source]

    return resolve


def _cmd_effects(args) -> int:
    params = dict(args.params or [])
    spec = EffectSpec.from_json_dict({"kind": args.op, **params})
    image = load_ppm(args.infile)
    save_ppm(apply_effect(image, spec), args.outfile)
    return 0


def _cmd_render(args) -> int:
    scene_path = Path(args.scene)
    scene = scene_load(scene_path.read_text(encoding="utf-8"))
    sources = _file_resolver(scene_path.parent)
    scene.photos = [replace(p, source_size=(sources(p.source).width,
                                            sources(p.source).height))
                    for p in scene.photos]
    screen = ScreenSpec.fit(*args.screen)
    config = RenderConfig(throughput_px_per_ms=args.throughput)
    client = HttpClient(args.service) if args.service else LocalClient()
    scene, sources, failover_cost = resolve_scene(args.backend, scene, sources,
                                                  client, config)
    frame, cost = render_full(args.backend, scene, sources, screen, config)
    cost = cost + failover_cost
    save_ppm(frame.to_image(), args.out)
    if args.cost:
        with open(args.cost, "w", encoding="utf-8") as fh:
            fh.write("work_units,virtual_ms,frames\n")
            fh.write(f"{cost.work_units},{cost.virtual_ms},{cost.frames}\n")
    return 0


def _cmd_serve(args) -> int:
    store = DirectoryStore(args.store) if args.store else None
    serve(args.port, store)
    return 0


def _open_out(path):
    return open(path, "w", encoding="utf-8", newline="") if path else sys.stdout


def _cmd_exp_a(args) -> int:
    backends = args.backend or list(bench.ALL_BACKENDS)
    rows = bench.exp_a_run(backends=backends, throughput=args.throughput,
                           quantize=args.quantize_clock)
    fh = _open_out(args.csv)
    bench.write_exp_a_csv(rows, fh)
    if args.csv:
        fh.close()
    if args.plot:
        series = {}
        for r in rows:
            if r.trial != 1 or not r.image.startswith("b"):
                continue
            w, h = _parse_size(r.image[1:])
            series.setdefault(f"{r.backend}/{r.op}", []).append((w * h, r.virtual_ms))
        for points in series.values():
            points.sort()
        from .plotting import write_line_chart
        write_line_chart(args.plot, "application time by image area", series,
                         "image pixels", "virtual ms")
    return 0


def _cmd_exp_b(args) -> int:
    sizes = [args.size] if args.size else list(bench.EXP_SIZES)
    rows = [bench.exp_b_run(args.backend, size, effect=args.effect,
                            throughput=args.throughput, screen_size=args.screen)
            for size in sizes]
    fh = _open_out(args.csv)
    bench.write_exp_b_csv(rows, fh)
    if args.csv:
        fh.close()
    if args.plot:
        points = sorted((int(r.size.split("x")[0]) * int(r.size.split("x")[1]), r.delta_ms)
                        for r in rows)
        from .plotting import write_line_chart
        write_line_chart(args.plot, "drag completion delta by photo area",
                         {args.backend.value: points}, "photo pixels", "delta ms")
    return 0


def _cmd_exp_c(args) -> int:
    rules = bench.StopRules(max_photos=args.max_photos)
    result = bench.exp_c_run(args.backend, seed=args.seed, throughput=args.throughput,
                             rules=rules, quantize=args.quantize_clock,
                             screen_size=args.screen)
    fh = _open_out(args.csv)
    bench.write_exp_c_csv(result, fh)
    if args.csv:
        fh.close()
    if args.plot:
        points = [(r.count, r.probe_virtual_ms) for r in result.rows]
        from .plotting import write_line_chart
        write_line_chart(args.plot, "probe rotation time by loaded photos",
                         {args.backend.value: points}, "photos loaded", "virtual ms")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scrapbook",
        description="Headless photo-composition engine and benchmark harness")
    sub = parser.add_subparsers(dest="command", required=True)

    p_fx = sub.add_parser("effects", help="batch pixel-effect operations")
    fx_sub = p_fx.add_subparsers(dest="effects_command", required=True)
    p_apply = fx_sub.add_parser("apply", help="apply one effect to a PPM file")
    p_apply.add_argument("--op", required=True,
                         choices=[k.value for k in EffectKind])
    p_apply.add_argument("--param", dest="params", action="append",
                         type=_parse_param, metavar="K=V")
    p_apply.add_argument("--in", dest="infile", required=True)
    p_apply.add_argument("--out", dest="outfile", required=True)
    p_apply.set_defaults(func=_cmd_effects)

    p_render = sub.add_parser("render", help="render a scene document to PPM")
    p_render.add_argument("--scene", required=True)
    p_render.add_argument("--backend", type=_backend, required=True)
    p_render.add_argument("--screen", type=_parse_size, default=(1024, 768))
    p_render.add_argument("--out", required=True)
    p_render.add_argument("--cost", help="also write a cost report CSV")
    p_render.add_argument("--throughput", type=float, default=1000.0)
    p_render.add_argument("--service", help="failover service base URL "
                          "(default: in-process)")
    p_render.set_defaults(func=_cmd_render)

    p_serve = sub.add_parser("serve", help="run the processing service")
    p_serve.add_argument("--port", type=int, default=8080)
    p_serve.add_argument("--store", help="directory of <key>.ppm images")
    p_serve.set_defaults(func=_cmd_serve)

    common = {"--throughput": dict(type=float, default=1000.0,
                                   help="renderer speed in pixels per virtual ms"),
              "--csv": dict(default=None, help="CSV output path (default stdout)"),
              "--plot": dict(default=None, help="SVG chart output path")}

    p_a = sub.add_parser("exp-a", help="application-time measurements")
    p_a.add_argument("--backend", type=_backend, action="append",
                     help="repeatable; default all")
    p_a.add_argument("--quantize-clock", type=float, default=None, metavar="MS")
    for flag, kw in common.items():
        p_a.add_argument(flag, **kw)
    p_a.set_defaults(func=_cmd_exp_a)

    p_b = sub.add_parser("exp-b", help="scripted mouse-move replay")
    p_b.add_argument("--backend", type=_backend, required=True)
    p_b.add_argument("--size", type=_parse_size, default=None,
                     help="photo size WxH; default runs all four")
    p_b.add_argument("--effect", choices=["invert"], default=None)
    p_b.add_argument("--screen", type=_parse_size, default=(1920, 1200))
    for flag, kw in common.items():
        p_b.add_argument(flag, **kw)
    p_b.set_defaults(func=_cmd_exp_b)

    p_c = sub.add_parser("exp-c", help="load simulation until a stop rule")
    p_c.add_argument("--backend", type=_backend, required=True)
    p_c.add_argument("--seed", type=int, default=0)
    p_c.add_argument("--max-photos", type=int, default=100)
    p_c.add_argument("--screen", type=_parse_size, default=(1920, 1200))
    p_c.add_argument("--quantize-clock", type=float, default=None, metavar="MS")
    for flag, kw in common.items():
        p_c.add_argument(flag, **kw)
    p_c.set_defaults(func=_cmd_exp_c)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
