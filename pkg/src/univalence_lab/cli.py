"""Configuration parsing, command dispatch and file emission.

Exit codes: 0 success/pass, 2 criterion fail or collision found,
3 hypothesis violation, 64 flag parse error, 70 numerical failure.
"""

import argparse
import cmath
import json
import math
import sys
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .chain import chain_eval, transfer_functions
from .criterion import DiskGrid, ParameterSet, criterion_check
from .errors import ConfigError, HypothesisViolation, UnivalenceLabError
from .extension import becker_extend, beltrami_estimate, extension_constants
from .operator import QuadratureConfig, operator_eval, operator_grid
from .oracle import SampleCloud, argument_principle_check, injectivity_scan, polar_samples
from .series import SeriesFunction, catalog_build

COMMANDS = ("check", "eval", "chain", "extend", "constants", "oracle", "plot")


@dataclass
class ProblemSpec:
    f: SeriesFunction
    g: SeriesFunction
    phi: SeriesFunction
    params: ParameterSet
    grid: DiskGrid
    quad: QuadratureConfig
    variant: str = "thm31"


def _complex_from(value, path):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)
    ):
        return complex(value[0], value[1])
    raise ConfigError(f"{path}: expected a number or an [re, im] pair")


def _real_from(value, path):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    raise ConfigError(f"{path}: expected a real number")


def _reject_unknown(obj, allowed, path):
    unknown = set(obj) - set(allowed)
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")


def _parse_function(obj, path):
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: expected an object")
    _reject_unknown(obj, ("catalog", "params", "coefficients"), path)
    if "catalog" in obj:
        if "coefficients" in obj:
            raise ConfigError(f"{path}: give either catalog or coefficients, not both")
        try:
            return catalog_build(obj["catalog"], obj.get("params"))
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    if "coefficients" in obj:
        coeffs = [
            _complex_from(c, f"{path}.coefficients[{i}]")
            for i, c in enumerate(obj["coefficients"])
        ]
        if not coeffs:
            raise ConfigError(f"{path}: coefficients must be nonempty")
        if coeffs[0] != 1:
            raise ConfigError(f"{path}: c1 must equal 1")
        try:
            return SeriesFunction(np.asarray(coeffs))
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    raise ConfigError(f"{path}: expected catalog or coefficients")


def _parse_params(obj):
    _reject_unknown(obj, ("alpha", "beta", "gamma", "m", "a", "k"), "params")
    kwargs = {}
    for key in ("alpha", "beta", "gamma"):
        if key in obj:
            kwargs[key] = _complex_from(obj[key], f"params.{key}")
    for key in ("m", "a", "k"):
        if key in obj:
            kwargs[key] = _real_from(obj[key], f"params.{key}")
    if kwargs.get("gamma") == 0:
        raise ConfigError("params.gamma: must be nonzero")
    if "k" in kwargs and not 0.0 <= kwargs["k"] < 1.0:
        raise ConfigError("params.k: must lie in [0, 1)")
    if "m" in kwargs and kwargs["m"] < 0:
        raise ConfigError("params.m: must be >= 0")
    if "a" in kwargs and kwargs["a"] <= 0:
        raise ConfigError("params.a: must be > 0")
    return ParameterSet(**kwargs)


def parse_config(text):
    """Validate a JSON problem configuration into a ProblemSpec."""
    if isinstance(text, (str, bytes)):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: invalid JSON ({exc})") from exc
    else:
        obj = text
    if not isinstance(obj, dict):
        raise ConfigError("config: top level must be an object")
    _reject_unknown(obj, ("f", "g", "phi", "params", "grid", "quad", "variant"), "config")

    funcs = {}
    for name in ("f", "g", "phi"):
        if name in obj:
            funcs[name] = _parse_function(obj[name], name)
        else:
            funcs[name] = catalog_build("identity")

    params = _parse_params(obj.get("params", {}))

    gobj = obj.get("grid", {})
    _reject_unknown(gobj, ("radii", "angles_per_radius", "refine_steps"), "grid")
    try:
        grid = DiskGrid(
            **{
                k: (tuple(v) if k == "radii" else int(v))
                for k, v in gobj.items()
            }
        )
    except ValueError as exc:
        raise ConfigError(f"grid: {exc}") from exc

    qobj = obj.get("quad", {})
    _reject_unknown(
        qobj, ("nodes_per_panel", "max_panels", "rel_tol", "substitution_power"), "quad"
    )
    try:
        quad = QuadratureConfig(
            **{k: (float(v) if k == "rel_tol" else int(v)) for k, v in qobj.items()}
        )
    except ValueError as exc:
        raise ConfigError(f"quad: {exc}") from exc

    variant = obj.get("variant", "thm31")
    if variant not in ("thm31", "thm32", "cor31", "cor32", "thm41"):
        raise ConfigError(f"variant: unknown variant {variant!r}")
    return ProblemSpec(
        funcs["f"], funcs["g"], funcs["phi"], params, grid, quad, variant
    )


def serialize(spec):
    """Inverse of parse_config (functions as coefficient lists)."""
    return {
        "f": {"coefficients": spec.f.to_json()},
        "g": {"coefficients": spec.g.to_json()},
        "phi": {"coefficients": spec.phi.to_json()},
        "params": {
            "alpha": [spec.params.alpha.real, spec.params.alpha.imag],
            "beta": [spec.params.beta.real, spec.params.beta.imag],
            "gamma": [spec.params.gamma.real, spec.params.gamma.imag],
            "m": spec.params.m,
            "a": spec.params.a,
            # k = 1 is the "univalence only" sentinel and is not a valid
            # config value; it round-trips as the default by omission
            **({"k": spec.params.k} if spec.params.k < 1.0 else {}),
        },
        "grid": spec.grid.to_json(),
        "quad": {
            "nodes_per_panel": spec.quad.nodes_per_panel,
            "max_panels": spec.quad.max_panels,
            "rel_tol": spec.quad.rel_tol,
            **(
                {"substitution_power": spec.quad.substitution_power}
                if spec.quad.substitution_power is not None
                else {}
            ),
        },
        "variant": spec.variant,
    }


def bundled_configs():
    """Name -> JSON text of the configurations shipped with the package."""
    out = {}
    for entry in resources.files("univalence_lab.configs").iterdir():
        if entry.name.endswith(".json"):
            out[entry.name[:-5]] = entry.read_text()
    return out


# ---------------------------------------------------------------------------
# file emission
# ---------------------------------------------------------------------------

def _fmt(x):
    return f"{float(x):.17g}"


def format_complex(v):
    v = complex(v)
    return f"{_fmt(v.real)}{'+' if v.imag >= 0 else '-'}{_fmt(abs(v.imag))}i"


def parse_complex(text):
    try:
        return complex(text.strip().replace("i", "j").replace(" ", ""))
    except ValueError as exc:
        raise ConfigError(f"cannot parse complex number {text!r}") from exc


def emit_grid_csv(rows, columns, path):
    """CSV with 17-significant-digit decimals and a newline-terminated
    final line."""
    lines = [",".join(columns)]
    for row in rows:
        if len(row) != len(columns):
            raise ValueError("ragged row in CSV emission")
        lines.append(",".join(_fmt(x) for x in row))
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def read_grid_csv(path):
    with open(path, encoding="ascii") as fh:
        header = fh.readline().strip().split(",")
        rows = [
            [float(x) for x in line.strip().split(",")]
            for line in fh
            if line.strip()
        ]
    return header, rows


def emit_svg(rows, columns, path, size=640):
    """Image-mesh figure: the w-plane images of the polar grid circles and
    rays.  Input rows must form a complete polar grid in z."""
    try:
        iz = (columns.index("re_z"), columns.index("im_z"))
        iw = (columns.index("re_w"), columns.index("im_w"))
    except ValueError as exc:
        raise ValueError("CSV must carry re_z,im_z,re_w,im_w columns") from exc
    has_t = "t" in columns
    if has_t:
        it = columns.index("t")
        tvals = sorted({row[it] for row in rows})
        rows = [row for row in rows if row[it] == tvals[0]]
    pts = {}
    for row in rows:
        z = complex(row[iz[0]], row[iz[1]])
        r = round(abs(z), 9)
        th = round(math.atan2(z.imag, z.real) % (2.0 * math.pi), 9)
        pts[(r, th)] = complex(row[iw[0]], row[iw[1]])
    radii = sorted({k[0] for k in pts})
    thetas = sorted({k[1] for k in pts})
    if len(pts) != len(radii) * len(thetas):
        raise ValueError("rows do not form a complete polar grid")

    ws = list(pts.values())
    xmin = min(w.real for w in ws)
    xmax = max(w.real for w in ws)
    ymin = min(w.imag for w in ws)
    ymax = max(w.imag for w in ws)
    span = max(xmax - xmin, ymax - ymin, 1e-12)
    pad = 0.05 * span

    def sx(x):
        return (x - xmin + pad) / (span + 2 * pad) * size

    def sy(y):
        return size - (y - ymin + pad) / (span + 2 * pad) * size

    def polyline(seq, color):
        coords = " ".join(f"{sx(w.real):.3f},{sy(w.imag):.3f}" for w in seq)
        return (
            f'<polyline fill="none" stroke="{color}" stroke-width="1" '
            f'points="{coords}"/>'
        )

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    for r in radii:
        seq = [pts[(r, th)] for th in thetas] + [pts[(r, thetas[0])]]
        parts.append(polyline(seq, "#1f77b4"))
    for th in thetas:
        seq = [pts[(r, th)] for r in radii]
        parts.append(polyline(seq, "#d62728"))
    parts.append("</svg>")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")
    return path


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cmd_check(spec, flags):
    report = criterion_check(
        spec.variant, spec.params, spec.f, spec.g, spec.phi, spec.grid
    )
    text = json.dumps(report.to_json(), indent=2)
    print(text)
    files = []
    if flags.get("out"):
        with open(flags["out"], "w", encoding="ascii") as fh:
            fh.write(text + "\n")
        files.append(flags["out"])
    return (0 if report.passed else 2), files


def _cmd_eval(spec, flags):
    if flags.get("z") is not None:
        z = parse_complex(flags["z"])
        res = operator_eval(z, spec.params, spec.f, spec.g, spec.phi, spec.quad)
        print(format_complex(res.value))
        if res.branch_crossing:
            print("warning: branch crossing flagged; value invalid", file=sys.stderr)
        return 0, []
    if not flags.get("out"):
        raise ConfigError("eval needs --z or --out")
    zs = polar_samples(flags.get("nr", 16), flags.get("ntheta", 64), flags.get("rmax", 0.9))
    values, _, _, _ = operator_grid(zs, spec.params, spec.f, spec.g, spec.phi, spec.quad)
    rows = [(z.real, z.imag, w.real, w.imag) for z, w in zip(zs, values)]
    emit_grid_csv(rows, ("re_z", "im_z", "re_w", "im_w"), flags["out"])
    return 0, [flags["out"]]


def _cmd_chain(spec, flags):
    if not flags.get("out"):
        raise ConfigError("chain needs --out")
    zs = polar_samples(flags.get("nr", 8), flags.get("ntheta", 16), flags.get("rmax", 0.9))
    ts = np.linspace(0.0, flags.get("tmax", 1.0), flags.get("tsteps", 5))
    rows = []
    for t in ts:
        for z in zs:
            L = chain_eval(z, t, spec.params, spec.f, spec.g, spec.phi, spec.quad)
            _, w, _ = transfer_functions(z, t, spec.params, spec.f, spec.g, spec.phi)
            rows.append((z.real, z.imag, t, L.real, L.imag, abs(w)))
    emit_grid_csv(rows, ("re_z", "im_z", "t", "re_w", "im_w", "abs_w"), flags["out"])
    return 0, [flags["out"]]


def _cmd_extend(spec, flags):
    if not flags.get("out"):
        raise ConfigError("extend needs --out")
    rmin = flags.get("rmin", 0.5)
    rmax = flags.get("rmax", 2.0)
    nr = flags.get("nr", 8)
    ntheta = flags.get("ntheta", 16)
    rows = []
    mu_cut = 1.0 + 3e-5
    for r in np.linspace(rmin, rmax, nr):
        for th in np.linspace(0.0, 2.0 * np.pi, ntheta, endpoint=False):
            z = r * cmath.exp(1j * th)
            F = becker_extend(z, spec.params, spec.f, spec.g, spec.phi, spec.quad)
            if r > mu_cut:
                mu = abs(
                    beltrami_estimate(z, spec.params, spec.f, spec.g, spec.phi, spec.quad).mu
                )
            else:
                mu = 0.0
            rows.append((z.real, z.imag, F.real, F.imag, mu))
    emit_grid_csv(rows, ("re_z", "im_z", "re_w", "im_w", "abs_mu"), flags["out"])
    return 0, [flags["out"]]


def _cmd_constants(spec, flags):
    consts = extension_constants(flags["k"], flags.get("a", 1.0))
    text = json.dumps(consts.to_json(), indent=2)
    print(text)
    files = []
    if flags.get("out"):
        with open(flags["out"], "w", encoding="ascii") as fh:
            fh.write(text + "\n")
        files.append(flags["out"])
    return 0, files


def _cmd_oracle(spec, flags):
    nr = flags.get("nr", 100)
    ntheta = flags.get("ntheta", 100)
    rmax = flags.get("rmax", 0.99)
    zs = polar_samples(nr, ntheta, rmax)
    values, _, _, crossing = operator_grid(
        zs, spec.params, spec.f, spec.g, spec.phi, spec.quad
    )
    keep = ~crossing
    cloud = SampleCloud(zs[keep], values[keep], rmax)
    pair = injectivity_scan(cloud)

    n_targets = flags.get("targets", 50)
    rng = np.random.default_rng(flags.get("seed", 0))
    circle = np.exp(2j * np.pi * np.linspace(0.0, 1.0, 2049))
    curve, _, _, _ = operator_grid(
        rmax * circle, spec.params, spec.f, spec.g, spec.phi, spec.quad
    )
    curve[-1] = curve[0]
    inner = cloud.values[np.abs(cloud.z) <= 0.5 * rmax]
    targets = rng.choice(inner, size=min(n_targets, inner.size), replace=False)
    covered_once = argument_principle_check(curve, targets)

    report = {
        "collision": None
        if pair is None
        else [[pair[0].real, pair[0].imag], [pair[1].real, pair[1].imag]],
        "samples": int(cloud.z.size),
        "covered_once": covered_once,
    }
    print(json.dumps(report, indent=2))
    return (0 if pair is None and covered_once else 2), []


def _cmd_plot(spec, flags):
    if not flags.get("csv") or not flags.get("out"):
        raise ConfigError("plot needs --csv and --out")
    header, rows = read_grid_csv(flags["csv"])
    emit_svg(rows, header, flags["out"])
    return 0, [flags["out"]]


_DISPATCH = {
    "check": _cmd_check,
    "eval": _cmd_eval,
    "chain": _cmd_chain,
    "extend": _cmd_extend,
    "constants": _cmd_constants,
    "oracle": _cmd_oracle,
    "plot": _cmd_plot,
}


def run_command(command, spec, flags=None):
    """Dispatch one command; returns (exit status, emitted file paths)."""
    if command not in _DISPATCH:
        raise ConfigError(f"unknown command {command!r}")
    try:
        return _DISPATCH[command](spec, dict(flags or {}))
    except HypothesisViolation as exc:
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        return 3, []
    except ConfigError:
        raise
    except UnivalenceLabError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 70, []


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _build_parser():
    parser = _Parser(prog="univalence-lab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, **opts):
        sp = sub.add_parser(name)
        if opts.pop("config", True):
            sp.add_argument("config", nargs="?", help="JSON problem configuration file")
        for flag, kw in opts.items():
            sp.add_argument(f"--{flag}", **kw)
        return sp

    add("check", out={"type": str})
    add(
        "eval",
        z={"type": str},
        out={"type": str},
        nr={"type": int},
        ntheta={"type": int},
        rmax={"type": float},
    )
    add(
        "chain",
        out={"type": str},
        nr={"type": int},
        ntheta={"type": int},
        rmax={"type": float},
        tmax={"type": float},
        tsteps={"type": int},
    )
    add(
        "extend",
        out={"type": str},
        rmin={"type": float},
        rmax={"type": float},
        nr={"type": int},
        ntheta={"type": int},
    )
    add(
        "constants",
        config=False,
        k={"type": float, "required": True},
        a={"type": float},
        out={"type": str},
    )
    add(
        "oracle",
        nr={"type": int},
        ntheta={"type": int},
        rmax={"type": float},
        targets={"type": int},
        seed={"type": int},
    )
    add("plot", config=False, csv={"type": str, "required": True}, out={"type": str, "required": True})
    return parser


def main(argv=None):
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except ConfigError as exc:
        print(f"argument error: {exc}", file=sys.stderr)
        return 64
    flags = {k: v for k, v in vars(ns).items() if k not in ("command", "config") and v is not None}
    try:
        if getattr(ns, "config", None):
            with open(ns.config, encoding="utf-8") as fh:
                spec = parse_config(fh.read())
        else:
            spec = parse_config({})
        status, _ = run_command(ns.command, spec, flags)
        return status
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 64
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 70


if __name__ == "__main__":
    sys.exit(main())
