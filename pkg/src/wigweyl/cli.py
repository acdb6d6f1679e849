"""Command-line driver: parameter sweeps, tomography runs and classification.

Every command reads optional settings from an INI-style ``--config`` file:
keys in ``[common]`` apply to all commands, keys in a section named after the
command (e.g. ``[positivity-scan]``) override them, and command-line flags
override both. See README.md for the full key list.

Exit codes: 0 success, 2 usage error, 1 runtime error.
"""
from __future__ import annotations

import argparse
import configparser
import logging
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import io as wio
from .classify import Diagnostics, PPT_CAVEAT, Region, classify, diagnose_beamsplitter, diagnose_displaced_pair
from .fock_bench import fock_mixture_wigner, pt_spectrum, two_mode_wigner_min
from .grids import GridSpec, WignerGrid
from .phase_space import SUBVACUUM_PARAMS, HYBRID_PARAMS, Constants, DisplacedPairParams
from .symplectic import scan_displacement
from .tomography import TOMOGRAPHY_REL_TOL, measure_marginals, reconstruct
from .weyl_kernel import DEFAULT_REL_TOL, MAX_KERNEL_SIZE, positivity_scan

log = logging.getLogger("wigweyl")

PRESETS = {"subvacuum": SUBVACUUM_PARAMS, "hybrid": HYBRID_PARAMS}

SCAN_COLUMNS = ["d", "nu_min", "nu_tilde_min", "rs_pass", "ppt_pass"]
POSITIVITY_COLUMNS = ["d", "lambda_min", "trace", "verdict"]
FOCK_COLUMNS = ["p", "lambda_min_pt", "wigner_min", "region"]

DEFAULTS = {
    "preset": "subvacuum",
    "hbar": 1.0,
    "jobs": 1,
    "d": 0.0,
    "lo": -8.0,
    "hi": 8.0,
    "n": 50,
    "max_size": MAX_KERNEL_SIZE,
    "rel_tol": None,
    "p_min": 0.0,
    "p_max": 1.0,
    "p_points": 101,
    "source": "vacuum",
    "p": 0.25,
    "variance": 0.2,
    "angles": 90,
    "samples": 256,
    "extent": 6.0,
    "cutoff": 1.0,
}

COMMAND_DEFAULTS = {
    "scan-displacement": {"d_min": 0.0, "d_max": 2.0, "d_points": 41},
    "positivity-scan": {"d_values": "0,0.5,1.0,1.5,2.0"},
}


class UsageError(Exception):
    pass


def _float_list(text):
    items = [t.strip() for t in str(text).split(",")]
    items = [t for t in items if t]
    try:
        return [float(t) for t in items]
    except ValueError as exc:
        raise UsageError(f"not a comma-separated list of numbers: {text!r}") from exc


class Settings:
    """Flag > config section > [common] > built-in default."""

    def __init__(self, args, command):
        self.args = vars(args)
        self.command = command
        self.file = {}
        if args.config:
            cp = configparser.ConfigParser()
            try:
                with open(args.config) as fh:
                    cp.read_file(fh)
            except OSError as exc:
                raise UsageError(f"cannot read config {args.config}: {exc.strerror}") from exc
            for section in ("common", command):
                if cp.has_section(section):
                    self.file.update({k.replace("-", "_"): v for k, v in cp.items(section)})

    def get(self, key, cast=str):
        value = self.args.get(key)
        if value is None:
            value = self.file.get(key)
        if value is None:
            value = COMMAND_DEFAULTS.get(self.command, {}).get(key, DEFAULTS.get(key))
        if value is None:
            return None
        try:
            return cast(value)
        except (TypeError, ValueError) as exc:
            raise UsageError(f"bad value for {key}: {value!r}") from exc

    def constants(self):
        try:
            return Constants(self.get("hbar", float))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc

    def params(self):
        preset = self.get("preset")
        if preset not in PRESETS:
            raise UsageError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
        base = PRESETS[preset]
        fields = {"d": self.get("d", float)}
        for key in ("s_q", "s_p", "k_q", "k_p"):
            v = self.get(key, float)
            fields[key] = getattr(base, key) if v is None else v
        try:
            return DisplacedPairParams(**fields)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc

    def d_grid(self):
        if self.get("d_values") is not None:
            grid = _float_list(self.get("d_values"))
        else:
            points = self.get("d_points", int)
            if points is None or points < 1:
                raise UsageError("the d-grid is empty")
            grid = list(np.linspace(self.get("d_min", float), self.get("d_max", float), points))
        if not grid:
            raise UsageError("the d-grid is empty")
        if any(d < 0 for d in grid):
            raise UsageError("displacements must be nonnegative")
        return grid

    def p_grid(self):
        if self.get("p_values") is not None:
            grid = _float_list(self.get("p_values"))
        else:
            points = self.get("p_points", int)
            if points < 1:
                raise UsageError("the p-grid is empty")
            grid = list(np.linspace(self.get("p_min", float), self.get("p_max", float), points))
        if not grid:
            raise UsageError("the p-grid is empty")
        if any(not 0 <= p <= 1 for p in grid):
            raise UsageError("p values must lie in [0, 1]")
        return grid

    def grid(self):
        try:
            return GridSpec(self.get("lo", float), self.get("hi", float), self.get("n", int), dims=2)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise RuntimeError(f"cannot write {out}: {exc.strerror}") from exc
    log.info("wrote %s", out)


def cmd_scan_displacement(s: Settings):
    c = s.constants()
    p = s.params()
    grid = s.d_grid()
    rows = scan_displacement(p, grid, c, jobs=s.get("jobs", int))
    table = [
        {"d": r.d, "nu_min": r.nu_min, "nu_tilde_min": r.nu_tilde_min, "rs_pass": r.rs_pass, "ppt_pass": r.ppt_pass}
        for r in rows
    ]
    _emit(wio.write_csv(table, SCAN_COLUMNS), s.get("out"))
    return table


def cmd_positivity_scan(s: Settings):
    c = s.constants()
    p = s.params()
    grid = s.grid()
    d_grid = s.d_grid()
    max_size = s.get("max_size", int)
    if grid.size > max_size:
        raise UsageError(
            f"kernel dimension {grid.size} (n={grid.n}) exceeds the limit {max_size}; "
            f"use --n {int(np.sqrt(max_size))} or pass --max-size to override"
        )
    rel_tol = s.get("rel_tol", float) or DEFAULT_REL_TOL
    rows = positivity_scan(p, d_grid, grid, c, rel_tol=rel_tol, max_size=max_size, jobs=s.get("jobs", int))
    table = [{"d": d, "lambda_min": r.lambda_min, "trace": r.trace, "verdict": r.verdict} for d, r in rows]
    _emit(wio.write_csv(table, POSITIVITY_COLUMNS), s.get("out"))
    return table


def fock_row(p: float) -> dict:
    return {
        "p": p,
        "lambda_min_pt": pt_spectrum(p).lambda_min,
        "wigner_min": two_mode_wigner_min(p),
        "region": classify(diagnose_beamsplitter(p)),
    }


def cmd_fock_sweep(s: Settings):
    grid = s.p_grid()
    jobs = s.get("jobs", int)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            table = list(pool.map(fock_row, grid))
    else:
        table = [fock_row(p) for p in grid]
    _emit(wio.write_csv(table, FOCK_COLUMNS), s.get("out"))
    return table


def _source_wigner(s: Settings, c: Constants):
    """Return (sampled Wigner grid, exact Wigner grid or None)."""
    path = s.get("wigner_file")
    if path is not None:
        try:
            return wio.load_wigner(path), None
        except FileNotFoundError as exc:
            raise UsageError(f"input file not found: {exc.filename or path}") from exc
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read Wigner grid {path}: {exc}") from exc
    source = s.get("source")
    extent = s.get("extent", float)
    samples = s.get("samples", int)
    if source == "vacuum":
        func = lambda q, pm: fock_mixture_wigner(1.0, q, pm, c)  # noqa: E731
    elif source == "fock1":
        func = lambda q, pm: fock_mixture_wigner(0.0, q, pm, c)  # noqa: E731
    elif source == "fock-mixture":
        pw = s.get("p", float)
        if not 0 <= pw <= 1:
            raise UsageError("p must lie in [0, 1]")
        func = lambda q, pm: fock_mixture_wigner(pw, q, pm, c)  # noqa: E731
    elif source == "gaussian":
        var = s.get("variance", float)
        if var <= 0:
            raise UsageError("variance must be positive")
        func = lambda q, pm: np.exp(-(q * q + pm * pm) / (2 * var)) / (2 * np.pi * var)  # noqa: E731
    else:
        raise UsageError(f"unknown source {source!r}")
    w = WignerGrid.from_function(func, -extent, extent, samples)
    return w, w


def cmd_tomography(s: Settings):
    c = s.constants()
    w, exact = _source_wigner(s, c)
    angles = s.get("angles", int)
    if angles < 2:
        raise UsageError("need at least 2 angles")
    rel_tol = s.get("rel_tol", float) or TOMOGRAPHY_REL_TOL
    ms = measure_marginals(w, angles)
    result = reconstruct(ms, c, rel_tol=rel_tol, cutoff=s.get("cutoff", float))
    rec = result.wigner
    lines = [f"angles={angles} samples={len(w.q_axis)}"]
    if exact is not None:
        lines.append(f"linf_error={np.max(np.abs(rec.values - exact.values)):.6e}")
    lines += [
        f"wigner_at_origin={float(rec.at(0.0, 0.0)):.6e}",
        f"wigner_min={rec.values.min():.6e}",
        f"raw_trace={result.kernel.raw_trace:.6e}",
        f"lambda_min={result.report.lambda_min:.6e}",
        f"tolerance={result.report.tolerance:.6e}",
        f"verdict={result.report.verdict}",
    ]
    sys.stdout.write("\n".join(lines) + "\n")
    dump = s.get("dump")
    if dump is not None:
        try:
            wio.save_wigner(dump, rec)
        except OSError as exc:
            raise RuntimeError(f"cannot write {dump}: {exc.strerror}") from exc
    if s.get("out") is not None:
        _emit("\n".join(lines) + "\n", s.get("out"))
    return result


def _tristate(text):
    if text is None:
        return None
    t = str(text).strip().lower()
    if t in ("true", "1", "yes"):
        return True
    if t in ("false", "0", "no"):
        return False
    if t in ("none", "unknown", ""):
        return None
    raise ValueError(text)


def cmd_classify(s: Settings):
    family = s.get("family")
    if family == "displaced":
        diag = diagnose_displaced_pair(s.params(), s.grid(), s.constants(), s.get("rel_tol", float) or DEFAULT_REL_TOL)
    elif family == "beamsplitter":
        pw = s.get("p", float)
        if not 0 <= pw <= 1:
            raise UsageError("p must lie in [0, 1]")
        diag = diagnose_beamsplitter(pw)
    elif family is None:
        diag = Diagnostics(
            rs_pass=s.get("rs_pass", _tristate),
            ppt_pass=s.get("ppt_pass", _tristate),
            operator_positive=s.get("operator_positive", _tristate),
            wigner_nonnegative=s.get("wigner_nonnegative", _tristate),
        )
    else:
        raise UsageError(f"unknown family {family!r}")
    region = classify(diag)
    def show(v):
        return "unknown" if v is None else wio.format_value(v)

    lines = [
        f"rs_pass={show(diag.rs_pass)}",
        f"ppt_pass={show(diag.ppt_pass)}",
        f"operator_positive={show(diag.operator_positive)}",
        f"wigner_nonnegative={show(diag.wigner_nonnegative)}",
        f"region={region}",
    ]
    if region is Region.SEPARABLE:
        lines.append(f"note={PPT_CAVEAT}")
    _emit("\n".join(lines) + "\n", s.get("out"))
    return region


COMMANDS = {
    "scan-displacement": cmd_scan_displacement,
    "positivity-scan": cmd_positivity_scan,
    "fock-sweep": cmd_fock_sweep,
    "tomography": cmd_tomography,
    "classify": cmd_classify,
}


def _pair_flags(p):
    p.add_argument("--preset", choices=sorted(PRESETS), help="parameter set (default subvacuum)")
    for name in ("s-q", "s-p", "k-q", "k-p"):
        p.add_argument(f"--{name}", type=float)


def _d_flags(p):
    p.add_argument("--d-min", type=float)
    p.add_argument("--d-max", type=float)
    p.add_argument("--d-points", type=int)
    p.add_argument("--d-values", help="comma-separated displacements; overrides the range")


def _grid_flags(p):
    p.add_argument("--lo", type=float)
    p.add_argument("--hi", type=float)
    p.add_argument("--n", type=int, help="lattice points per axis (default 50)")
    p.add_argument("--rel-tol", type=float, help="positivity tolerance relative to ||K||")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI file with [common] and per-command sections")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--jobs", type=int, help="worker threads for sweeps")
    common.add_argument("--hbar", type=float)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="wigweyl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan-displacement", parents=[common], help="RS/PPT eigenvalues versus displacement")
    _pair_flags(p)
    _d_flags(p)

    p = sub.add_parser("positivity-scan", parents=[common], help="kernel lambda_min versus displacement")
    _pair_flags(p)
    _d_flags(p)
    _grid_flags(p)
    p.add_argument("--max-size", type=int, help=f"memory guard on n**2 (default {MAX_KERNEL_SIZE})")

    p = sub.add_parser("fock-sweep", parents=[common], help="beamsplitter state versus mixing weight p")
    p.add_argument("--p-min", type=float)
    p.add_argument("--p-max", type=float)
    p.add_argument("--p-points", type=int)
    p.add_argument("--p-values", help="comma-separated p values; overrides the range")

    p = sub.add_parser("tomography", parents=[common], help="simulated homodyne tomography and positivity")
    p.add_argument("--source", choices=["vacuum", "fock1", "fock-mixture", "gaussian"])
    p.add_argument("--wigner-file", help="flat-binary Wigner grid (with .hdr) instead of --source")
    p.add_argument("--p", type=float, help="vacuum weight for --source fock-mixture")
    p.add_argument("--variance", type=float, help="q and p variance for --source gaussian")
    p.add_argument("--angles", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--extent", type=float, help="grid half-width")
    p.add_argument("--cutoff", type=float, help="ramp-filter cutoff as a fraction of Nyquist")
    p.add_argument("--rel-tol", type=float)
    p.add_argument("--dump", help="write the reconstructed Wigner grid here")

    p = sub.add_parser("classify", parents=[common], help="region of a state or of given test outcomes")
    p.add_argument("--family", choices=["displaced", "beamsplitter"])
    _pair_flags(p)
    p.add_argument("--d", type=float)
    p.add_argument("--p", type=float)
    _grid_flags(p)
    for name in ("rs-pass", "ppt-pass", "operator-positive", "wigner-nonnegative"):
        p.add_argument(f"--{name}", help="true/false/unknown")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        settings = Settings(args, args.command)
        COMMANDS[args.command](settings)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"wigweyl {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"wigweyl {args.command}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
