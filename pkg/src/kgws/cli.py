"""Command-line front end: spectra, reference-table reproduction, shapes.

Subcommands
    spectrum             closed-form, residual-root and shooting energies
                         over a grid of (n, l, m1, branch)
    table1               reproduction of the reference level magnitudes,
                         anchored by calibrating the diffuseness
    wavefunction         sampled normalized shape of one state plus a JSON
                         sidecar with its normalization report
    compare-centrifugal  shooting energies with the surface-matched vs the
                         exact centrifugal term

All emitted files open with a metadata block (physical constants, the
diffuseness actually used, package version) and identical inputs produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass, field, replace

from . import __version__
from .errors import (
    CalibrationError,
    ConfigError,
    KgwsError,
    MultipleRootsError,
    NoBoundStateError,
    NoRootFoundError,
    NodeCountError,
)
from .model import SystemParams, pekeris_coefficients
from .oracle import default_grid, shoot_approximated, shoot_exact_centrifugal
from .spectrum import bound_state, energy_closed_form, solve_energy_by_root
from .wavefunction import (
    closed_form_norm_diagnostic,
    count_sign_changes,
    norm_integral_quad,
    normalize,
    sample_on_r_grid,
)

# Reference level magnitudes |E| in MeV, keyed by m1 (amu). Only the first
# entry of each block carries an unambiguous (n=0, l=0) label; the printed
# labels of the remaining rows are inconsistent, so those are matched to
# the nearest computed level and flagged, never asserted.
REFERENCE_TABLE: dict[float, tuple[float, ...]] = {
    0.0: (171.920, 922.962, 924.286, 891.947, 895.473, 902.084),
    0.001: (187.762, 915.806, 917.461, 844.123, 887.762, 894.605),
    0.01: (270.028, 842.200, 846.735, 808.765, 813.490, 822.663),
}
ANCHOR_ABS_E = 171.920  # MeV, the (m1=0, n=0, l=0) row
ANCHOR_TOLERANCE = 1e-3  # relative, for calibration success

DEFAULT_LEVELS: tuple[tuple[int, int], ...] = tuple(
    (n, l) for n in range(3) for l in range(3)
)
DEFAULT_M1: tuple[float, ...] = (0.0, 0.001, 0.01)
BRANCHES = ("+", "-")

_CONFIG_KEYS = {
    "V0",
    "q",
    "r0",
    "a",
    "m0",
    "m1_list",
    "levels",
    "branches",
    "format",
    "out",
    "oracle",
    "grid_points",
}


@dataclass
class RunConfig:
    """Validated run settings assembled from config file and flags."""

    system: SystemParams
    levels: tuple[tuple[int, int], ...] = DEFAULT_LEVELS
    m1_list: tuple[float, ...] = DEFAULT_M1
    branches: tuple[str, ...] = BRANCHES
    fmt: str = "csv"
    out: str | None = None
    oracle: bool = True
    grid_points: int = 3001
    a_source: str = "calibrated"  # or "config" / "flag"


def calibrate_diffuseness(
    base: SystemParams,
    target: float = ANCHOR_ABS_E,
    lo: float = 0.3,
    hi: float = 1.2,
    tol: float = 1e-6,
) -> float:
    """Diffuseness that reproduces the anchor level magnitude.

    Golden-section minimization of | |E(n=0, l=0, '+'; m1=0)| - target |
    over a in [lo, hi] fm to a tolerance of tol fm. Raises
    CalibrationError when the best achievable deviation exceeds 0.1%.
    """

    def deviation(a: float) -> float:
        p = replace(base, a=a, m1=0.0)
        try:
            return abs(abs(energy_closed_form(0, 0, "+", p)) - target)
        except (NoBoundStateError, KgwsError):
            return math.inf

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc, fd = deviation(c), deviation(d)
    while hi - lo > tol:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = deviation(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = deviation(d)
    best_a = 0.5 * (lo + hi)
    best_dev = deviation(best_a)
    if not best_dev <= ANCHOR_TOLERANCE * target:
        raise CalibrationError(
            f"no diffuseness in [0.3, 1.2] fm reproduces the anchor "
            f"|E| = {target} MeV within 0.1%; best a = {best_a:.6f} fm "
            f"deviates by {best_dev:.6f} MeV",
            best_a=best_a,
            best_deviation=best_dev,
        )
    return best_a


def _fmt(value) -> str:
    """12-significant-digit decimal rendering; empty for missing values."""
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def _metadata(cfg: RunConfig) -> dict:
    return {
        "hbar_c_mev_fm": cfg.system.hbar_c,
        "amu_mev": cfg.system.amu_mev,
        "a_fm": cfg.system.a,
        "a_source": cfg.a_source,
        "version": __version__,
    }


def _emit(cfg: RunConfig, header: list[str], rows: list[list], stream=None) -> None:
    meta = _metadata(cfg)
    if cfg.fmt == "json":
        payload = {
            "metadata": meta,
            "columns": header,
            "rows": [[r if not isinstance(r, float) else float(_fmt(r)) for r in row] for row in rows],
        }
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        buf = io.StringIO()
        for key in sorted(meta):
            buf.write(f"# {key} = {_fmt(meta[key])}\n")
        buf.write(",".join(header) + "\n")
        for row in rows:
            buf.write(",".join(_fmt(v) for v in row) + "\n")
        text = buf.getvalue()
    if cfg.out is None:
        (stream or sys.stdout).write(text)
    else:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _spectrum_row(n: int, l: int, branch: str, m1: float, cfg: RunConfig) -> list:
    p = replace(cfg.system, m1=m1)
    d = pekeris_coefficients(p)

    e_closed, closed_status = None, "ok"
    try:
        e_closed = energy_closed_form(n, l, branch, p, d)
    except NoBoundStateError:
        closed_status = "no-bound-state"

    e_root, root_status = None, "ok"
    e_shoot, shoot_status = None, "ok"
    if cfg.oracle:
        try:
            e_root = solve_energy_by_root(n, l, branch, p, d)
        except NoRootFoundError:
            root_status = "no-root"
        except MultipleRootsError:
            root_status = "multiple-roots"
        grid = default_grid(p, num_points=cfg.grid_points)
        try:
            e_shoot = shoot_approximated(n, l, branch, p, d, grid).energy
        except NoBoundStateError:
            shoot_status = "no-bound-state"
        except NodeCountError:
            shoot_status = "node-mismatch"
    else:
        root_status = shoot_status = "skipped"

    delta_cr = abs(e_closed - e_root) if (e_closed is not None and e_root is not None) else None
    rel_cs = (
        abs(e_closed - e_shoot) / abs(e_closed)
        if (e_closed is not None and e_shoot is not None and e_closed != 0.0)
        else None
    )
    return [
        m1,
        n,
        l,
        branch,
        e_closed,
        abs(e_closed) if e_closed is not None else None,
        e_root,
        e_shoot,
        delta_cr,
        rel_cs,
        closed_status,
        root_status,
        shoot_status,
    ]


def cmd_spectrum(cfg: RunConfig, stream=None) -> int:
    header = [
        "m1_amu",
        "n",
        "l",
        "branch",
        "E_closed_mev",
        "abs_E_closed_mev",
        "E_root_mev",
        "E_shoot_mev",
        "delta_closed_root_mev",
        "rel_closed_shoot",
        "closed_status",
        "root_status",
        "shoot_status",
    ]
    rows = []
    for m1 in sorted(cfg.m1_list):
        for n, l in sorted(cfg.levels):
            for branch in cfg.branches:
                rows.append(_spectrum_row(n, l, branch, m1, cfg))
    _emit(cfg, header, rows, stream)
    return 0


def cmd_table1(cfg: RunConfig, stream=None) -> int:
    header = [
        "m1_amu",
        "row",
        "reference_abs_E_mev",
        "computed_abs_E_mev",
        "rel_deviation",
        "matched_n",
        "matched_l",
        "matched_branch",
        "label_status",
    ]
    rows = []
    for m1 in sorted(REFERENCE_TABLE):
        p = replace(cfg.system, m1=m1)
        d = pekeris_coefficients(p)
        levels: list[tuple[float, int, int, str]] = []
        for n, l in sorted(cfg.levels):
            for branch in BRANCHES:
                try:
                    levels.append((abs(energy_closed_form(n, l, branch, p, d)), n, l, branch))
                except NoBoundStateError:
                    continue
        refs = REFERENCE_TABLE[m1]
        for idx, ref in enumerate(refs):
            if idx == 0:
                computed = abs(energy_closed_form(0, 0, "+", p, d))
                match = (computed, 0, 0, "+")
                status = "anchor"
            else:
                match = min(levels, key=lambda t: abs(t[0] - ref)) if levels else None
                computed = match[0] if match else None
                status = "best-match-ambiguous-label"
            rows.append(
                [
                    m1,
                    idx,
                    ref,
                    computed,
                    abs(computed - ref) / ref if computed is not None else None,
                    match[1] if match else None,
                    match[2] if match else None,
                    match[3] if match else None,
                    status,
                ]
            )
    anchor_row = rows[0]
    if anchor_row[4] is None or anchor_row[4] > ANCHOR_TOLERANCE:
        raise CalibrationError(
            f"anchor row deviates by {anchor_row[4]!r} at a = {cfg.system.a:.6f} fm",
            best_a=cfg.system.a,
            best_deviation=anchor_row[4] if anchor_row[4] is not None else math.inf,
        )
    _emit(cfg, header, rows, stream)
    return 0


def cmd_wavefunction(cfg: RunConfig, n: int, l: int, stream=None) -> int:
    if cfg.out is None:
        raise ConfigError("wavefunction output requires --out (samples plus JSON sidecar)")
    branch = cfg.branches[0]
    m1 = cfg.m1_list[0]
    p = replace(cfg.system, m1=m1)
    st = bound_state(n, l, branch, p)
    grid = default_grid(p, num_points=cfg.grid_points)
    eig = normalize(st, grid)
    pairs = sample_on_r_grid(eig, grid)

    header = ["r_fm", "phi"]
    rows = [[r, v] for r, v in pairs]
    _emit(cfg, header, rows, stream)

    values = [v for _, v in pairs]
    total, _err, _tail = norm_integral_quad(st)
    diag = closed_form_norm_diagnostic(st, eig.norm_constant)
    sidecar = {
        "metadata": _metadata(cfg),
        "state": {
            "n": n,
            "l": l,
            "branch": branch,
            "m1_amu": m1,
            "energy_mev": st.energy,
            "a3": st.jacobi_a3,
            "A": st.jacobi_A,
            "termination_residual": None if math.isnan(st.nu_residual) else st.nu_residual,
        },
        "normalization": {
            "b_prime": eig.norm_constant,
            "norm_check": eig.norm_constant * eig.norm_constant * total,
            "node_count": count_sign_changes(values),
            "interior_share_beyond_unit_z": eig.tail_fraction,
        },
        "closed_form_diagnostic": {
            "value": diag.value,
            "squared_negative": diag.squared_negative,
            "condition_residual": diag.condition_residual,
            "condition_held": diag.condition_held,
            "ratio_to_quadrature": diag.ratio_to_quadrature,
            "trusted": diag.trusted,
        },
    }
    with open(cfg.out + ".meta.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(sidecar, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return 0


def cmd_compare_centrifugal(cfg: RunConfig, stream=None) -> int:
    if not any(l >= 1 for _, l in cfg.levels):
        raise ConfigError("compare-centrifugal needs at least one level with l >= 1")
    p = cfg.system
    d = pekeris_coefficients(p)
    header = [
        "n",
        "l",
        "branch",
        "E_approx_mev",
        "E_exact_mev",
        "abs_delta_mev",
        "rel_delta",
        "D0",
        "D1",
        "D2",
        "status",
    ]
    rows = []
    for n, l in sorted(cfg.levels):
        for branch in cfg.branches:
            e_a = e_x = None
            status = "ok"
            try:
                e_a = shoot_approximated(
                    n, l, branch, p, d, default_grid(p, num_points=cfg.grid_points)
                ).energy
                e_x = shoot_exact_centrifugal(
                    n, l, branch, p, default_grid(p, exact=l > 0, num_points=cfg.grid_points)
                ).energy
            except NoBoundStateError:
                status = "no-bound-state"
            except NodeCountError:
                status = "node-mismatch"
            delta = abs(e_a - e_x) if (e_a is not None and e_x is not None) else None
            rel = delta / abs(e_a) if (delta is not None and e_a != 0.0) else None
            rows.append([n, l, branch, e_a, e_x, delta, rel, d.D0, d.D1, d.D2, status])
    _emit(cfg, header, rows, stream)
    return 0


def _parse_levels(raw) -> tuple[tuple[int, int], ...]:
    levels = []
    for item in raw:
        if not (isinstance(item, (list, tuple)) and len(item) == 2):
            raise ConfigError(f"levels entries must be [n, l] pairs, got {item!r}")
        n, l = item
        if not (isinstance(n, int) and isinstance(l, int)) or n < 0 or l < 0:
            raise ConfigError(f"levels entries must be nonnegative integers, got {item!r}")
        levels.append((n, l))
    if not levels:
        return ()
    return tuple(levels)


def build_config(args: argparse.Namespace) -> RunConfig:
    """Merge config file and command-line flags into a RunConfig.

    Flag values override file values; the diffuseness is calibrated to the
    anchor level whenever neither source pins it.
    """
    data: dict = {}
    if args.config is not None:
        with open(args.config, "r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(data) - _CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    system_kwargs = {}
    for key in ("V0", "q", "r0", "m0"):
        if key in data:
            system_kwargs[key] = float(data[key])

    a_value = None
    a_source = "calibrated"
    if data.get("a") is not None:
        a_value = float(data["a"])
        a_source = "config"
    if args.a is not None:
        a_value = args.a
        a_source = "flag"

    if a_value is None:
        base = SystemParams(**system_kwargs)
        a_value = calibrate_diffuseness(base)
    try:
        system = SystemParams(a=a_value, **system_kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    m1_list = tuple(float(v) for v in data.get("m1_list", DEFAULT_M1))
    if args.m1 is not None:
        try:
            m1_list = tuple(float(v) for v in args.m1.split(","))
        except ValueError as exc:
            raise ConfigError(f"--m1 expects comma-separated numbers: {exc}") from exc
    for v in m1_list:
        if v < 0.0:
            raise ConfigError(f"m1 values must be >= 0, got {v}")

    levels = _parse_levels(data["levels"]) if "levels" in data else DEFAULT_LEVELS

    branches = tuple(data.get("branches", BRANCHES))
    for b in branches:
        if b not in BRANCHES:
            raise ConfigError(f"branches must be '+' or '-', got {b!r}")

    fmt = data.get("format", "csv")
    if args.format is not None:
        fmt = args.format
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format must be 'csv' or 'json', got {fmt!r}")

    out = data.get("out")
    if args.out is not None:
        out = args.out

    oracle = bool(data.get("oracle", True))
    if args.no_oracle:
        oracle = False

    grid_points = int(data.get("grid_points", 3001))
    if grid_points < 100:
        raise ConfigError(f"grid_points must be >= 100, got {grid_points}")

    return RunConfig(
        system=system,
        levels=levels,
        m1_list=m1_list,
        branches=branches,
        fmt=fmt,
        out=out,
        oracle=oracle,
        grid_points=grid_points,
        a_source=a_source,
    )


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON config file (flat schema)")
    sub.add_argument("--out", help="output file path (default: stdout)")
    sub.add_argument("--format", choices=("csv", "json"), help="output format")
    sub.add_argument(
        "--no-oracle", action="store_true", help="skip root-finder and shooting columns"
    )
    sub.add_argument("--a", type=float, help="diffuseness in fm (skips calibration)")
    sub.add_argument("--m1", help="comma-separated m1 values in amu")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kgws",
        description="Relativistic bound states of a generalized Woods-Saxon well "
        "with position-dependent mass",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="energy table over (n, l, m1, branch)")
    _add_common(sp)

    tb = sub.add_parser("table1", help="reference-magnitude reproduction report")
    _add_common(tb)

    wf = sub.add_parser("wavefunction", help="sampled normalized shape of one state")
    wf.add_argument("n", type=int, help="radial quantum number")
    wf.add_argument("l", type=int, help="orbital quantum number")
    _add_common(wf)

    cc = sub.add_parser(
        "compare-centrifugal", help="surface-matched vs exact centrifugal energies"
    )
    _add_common(cc)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        if args.command == "spectrum":
            return cmd_spectrum(cfg)
        if args.command == "table1":
            return cmd_table1(cfg)
        if args.command == "wavefunction":
            if args.n < 0 or args.l < 0:
                raise ConfigError("quantum numbers must be nonnegative")
            return cmd_wavefunction(cfg, args.n, args.l)
        if args.command == "compare-centrifugal":
            return cmd_compare_centrifugal(cfg)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except KgwsError as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
