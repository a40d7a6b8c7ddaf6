"""Command line: simulate detector data, add noise, reconstruct, check the range, report errors.

Exit codes: 0 success, 1 usage, 2 input/output, 3 validation or range failure.
"""

import argparse
import json
import logging
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np
from scipy.ndimage import map_coordinates

from . import fileio
from .forward import detector_signal
from .funkmink import FunkInverter
from .grids import Kind, SphereGrid, SphereTimeGrid, VolumeGrid
from .phantom import PhantomSpec, ground_truth_volume, load_phantom
from .rangecheck import range_report
from .recon import reconstruct_pipeline

__all__ = ["RunConfig", "load_config", "add_noise", "volume_metrics", "main"]

log = logging.getLogger("patcirc")

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_FAIL = 0, 1, 2, 3


@dataclass
class RunConfig:
    r_det: float = 1.0
    n_polar: int = 50
    n_az: int = 200
    n_t: int = 50
    t_max: float = 2.0
    polar_min: float = np.pi / 25
    n_circle: int = 100
    k_weight: int = 2
    s_max: float = None
    n_omega: int = 360
    n_s: int = 401
    x_max: float = 2.5
    volume_n: int = 80
    noise_level: float = 0.0
    rng_seed: int = 0

    def __post_init__(self):
        if self.s_max is None:
            self.s_max = 1.0 / np.tan(self.polar_min)
        counts = ("n_polar", "n_az", "n_t", "n_circle", "n_omega", "n_s", "volume_n")
        for name in counts:
            if int(getattr(self, name)) < 2:
                raise ValueError(f"{name} must be at least 2")
        if not 0.0 <= self.noise_level < 1.0:
            raise ValueError("noise_level must lie in [0, 1)")
        if not 0 <= self.rng_seed < 2**64:
            raise ValueError("rng_seed must be an unsigned 64-bit integer")

    @property
    def grid(self):
        sphere = SphereGrid(self.n_polar, self.n_az, self.polar_min)
        return SphereTimeGrid(sphere, self.n_t, self.t_max, self.r_det)

    @property
    def volume(self):
        return VolumeGrid(self.volume_n, 1.0)

    def inverter(self, sphere):
        return FunkInverter(sphere, k=self.k_weight, n_angles=self.n_omega, n_s=self.n_s, s_max=self.s_max, x_max=self.x_max)


_TYPES = {f.name: f.type for f in fields(RunConfig)}
_CASTS = {"float": float, "int": int, float: float, int: int}


def _cast(name, text):
    kind = _TYPES[name]
    if name == "rng_seed":
        return int(text, 0)
    return _CASTS.get(kind, float)(text)


def load_config(path):
    """Read ``key = value`` lines (``#`` comments, optional quotes) into a dict."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line or line.startswith("["):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _TYPES:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = _cast(key, value.strip("'\""))
    return out


def resolve_config(args):
    values = load_config(args.config) if getattr(args, "config", None) else {}
    if getattr(args, "noise", None) is not None:
        values["noise_level"] = args.noise
    if getattr(args, "seed", None) is not None:
        values["rng_seed"] = args.seed
    return RunConfig(**values)


def add_noise(data, level, seed):
    """Add uniform noise on ``[-level A, level A]``, ``A = max |values|``.

    Samples come from one PCG64 stream seeded with ``seed`` and are drawn in
    storage order (polar slowest, then azimuth, then time).
    """
    if not 0.0 <= level < 1.0:
        raise ValueError("noise level must lie in [0, 1)")
    if level == 0:
        return data.with_values(data.values.copy())
    amp = level * np.abs(data.values).max(initial=0.0)
    rng = np.random.Generator(np.random.PCG64(seed))
    noise = rng.uniform(-1.0, 1.0, size=data.values.shape) * amp
    return data.with_values(data.values + noise)


def _upper_half_ball(vol):
    x = vol.centers()
    return (np.linalg.norm(x, axis=-1) < 1.0) & (x[..., 2] > 0)


def volume_metrics(vol, spec):
    """Relative L2 and max error over the upper half-ball, and values at ball centers."""
    truth = ground_truth_volume(spec, VolumeGrid(vol.n, vol.half_width))
    mask = _upper_half_ball(vol)
    diff = (vol.values - truth.values)[mask]
    norm = np.linalg.norm(truth.values[mask])
    rel = float(np.linalg.norm(diff) / norm) if norm > 0 else float(np.linalg.norm(diff) > 0)
    centers = []
    for c in spec.components:
        centers.append((c.center, c.amplitude, float(sample_volume(vol, np.asarray(c.center)))))
    return {"relative_l2": rel, "max_error": float(np.abs(diff).max(initial=0.0)), "centers": centers}


def sample_volume(vol, point):
    """Trilinear interpolation of voxel-center values at ``point``."""
    idx = (np.asarray(point, dtype=float) + vol.half_width) / vol.spacing - 0.5
    return map_coordinates(vol.values, idx.reshape(3, 1), order=1, mode="nearest")[0]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p, noise=False):
    p.add_argument("--config", help="key = value configuration file")
    p.add_argument("--out", help="output path")
    p.add_argument("--threads", type=int, default=None, help="worker threads for the backprojection")
    if noise:
        p.add_argument("--noise", type=float, default=None, help="uniform noise level relative to max |P|")
        p.add_argument("--seed", type=lambda s: int(s, 0), default=None, help="unsigned 64-bit RNG seed")


def build_parser():
    parser = _Parser(prog="patcirc", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="detector data from a phantom file")
    p.add_argument("--phantom", required=True)
    p.add_argument("--csv", action="store_true", help="also write a CSV export")
    _common(p, noise=True)

    p = sub.add_parser("add-noise", help="add seeded uniform noise to a data file")
    p.add_argument("data")
    _common(p, noise=True)

    p = sub.add_parser("reconstruct", help="volume, slice image and profiles from detector data")
    p.add_argument("data")
    _common(p)

    p = sub.add_parser("rangecheck", help="range-condition residuals; exit 3 above threshold")
    p.add_argument("data")
    p.add_argument("--l-max", type=int, default=4)
    p.add_argument("--n-zeros", type=int, default=5)
    p.add_argument("--threshold", type=float, default=1e-2)
    _common(p)

    p = sub.add_parser("metrics", help="errors of a reconstructed volume against its phantom")
    p.add_argument("volume")
    p.add_argument("--phantom", required=True)
    _common(p)

    p = sub.add_parser("phantom", help="phantom file utilities")
    psub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    pv = psub.add_parser("validate", help="check a phantom file")
    pv.add_argument("file")
    pv.add_argument("--r-det", type=float, default=1.0)
    return parser


def _stem(path):
    p = Path(path)
    return p.with_suffix("") if p.suffix else p


def _sidecar(out, command, cfg, inputs, extra=None):
    payload = {"command": command, "config": asdict(cfg), "inputs": inputs}
    if extra:
        payload.update(extra)
    fileio.write_sidecar(str(out) + ".json", payload)


def cmd_simulate(args):
    cfg = resolve_config(args)
    spec = load_phantom(args.phantom)
    for w in spec.validate(cfg.r_det):
        log.warning(w)
    data = detector_signal(spec, cfg.grid, cfg.n_circle)
    if cfg.noise_level > 0:
        data = add_noise(data, cfg.noise_level, cfg.rng_seed)
    out = args.out or "data.patc"
    fileio.write_patc(out, data)
    if args.csv:
        fileio.write_patc_csv(str(_stem(out)) + ".csv", data)
    _sidecar(out, "simulate", cfg, {"phantom": args.phantom, "sha256": fileio.file_sha256(args.phantom)},
             {"noise": "uniform on [-level*A, level*A], A = max |P| over the dataset"})
    print(f"wrote {out} shape {data.values.shape}")
    return EXIT_OK


def cmd_add_noise(args):
    cfg = resolve_config(args)
    data = fileio.read_patc(args.data)
    noisy = add_noise(data, cfg.noise_level, cfg.rng_seed)
    out = args.out or str(_stem(args.data)) + "_noisy.patc"
    fileio.write_patc(out, noisy)
    _sidecar(out, "add-noise", cfg, {"data": args.data, "sha256": fileio.file_sha256(args.data)},
             {"noise": "uniform on [-level*A, level*A], A = max |P| over the dataset"})
    print(f"wrote {out}")
    return EXIT_OK


def cmd_reconstruct(args):
    cfg = resolve_config(args)
    data = fileio.read_patc(args.data)
    if data.kind != Kind.P:
        raise ValueError(f"reconstruct needs detector data (kind P), got {data.kind.name}")
    vol = reconstruct_pipeline(data, vol=cfg.volume, threads=args.threads, inverter=cfg.inverter(data.grid.sphere))
    out = args.out or str(_stem(args.data)) + ".patv"
    fileio.write_patv(out, vol)
    stem = str(_stem(out))
    mid = vol.n // 2
    # x2-x3 plane through x1 = 0 (average of the two central voxel layers for even n)
    plane = vol.values[mid] if vol.n % 2 else 0.5 * (vol.values[mid - 1] + vol.values[mid])
    fileio.write_pgm(stem + "_x2x3.pgm", plane.T[::-1])
    axis = vol.axis
    along_x3 = [sample_volume(vol, (0.0, 0.0, z)) for z in axis]
    along_x2 = [sample_volume(vol, (0.0, y, 0.5)) for y in axis]
    fileio.write_profile_csv(stem + "_profile_x3.csv", "x3", axis, along_x3)
    fileio.write_profile_csv(stem + "_profile_x2.csv", "x2", axis, along_x2)
    _sidecar(out, "reconstruct", cfg, {"data": args.data, "sha256": fileio.file_sha256(args.data)})
    print(f"wrote {out}")
    return EXIT_OK


def cmd_rangecheck(args):
    data = fileio.read_patc(args.data)
    rep = range_report(data, args.l_max, args.n_zeros, threshold=args.threshold)
    stem = args.out or str(_stem(args.data)) + "_range"
    Path(str(stem) + ".csv").write_text(rep.to_csv(), encoding="utf-8")
    summary = "equator-ring evenness check (hemisphere data)\n" + rep.summary()
    Path(str(stem) + ".txt").write_text(summary + "\n", encoding="utf-8")
    print(summary)
    return EXIT_OK if rep.passed() else EXIT_FAIL


def cmd_metrics(args):
    vol = fileio.read_patv(args.volume)
    spec = load_phantom(args.phantom)
    m = volume_metrics(vol, spec)
    lines = ["metric,value", f"relative_l2,{m['relative_l2']!r}", f"max_error,{m['max_error']!r}"]
    for i, (center, amp, value) in enumerate(m["centers"]):
        lines.append(f"center_{i}_value,{value!r}")
        lines.append(f"center_{i}_amplitude,{amp!r}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    print(text, end="")
    return EXIT_OK


def cmd_phantom(args):
    with open(args.file, encoding="utf-8") as fh:
        raw = json.load(fh)
    try:
        spec = PhantomSpec.from_dict(raw)
        warnings = spec.validate(args.r_det)
    except (ValueError, KeyError, TypeError) as exc:
        print(f"invalid phantom: {exc}")
        return EXIT_FAIL
    for w in warnings:
        print(f"warning: {w}")
    print(f"ok: {len(spec.components)} components, symmetrize={spec.symmetrize}, even={spec.is_even()}")
    return EXIT_OK


_COMMANDS = {
    "simulate": cmd_simulate,
    "add-noise": cmd_add_noise,
    "reconstruct": cmd_reconstruct,
    "rangecheck": cmd_rangecheck,
    "metrics": cmd_metrics,
    "phantom": cmd_phantom,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except (OSError, json.JSONDecodeError, fileio.FormatError) as exc:
        print(f"patcirc: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"patcirc: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
