"""
``ee``: run entanglement experiments and write CSV/JSON results.

Exit codes: 0 success, 1 selftest failure, 2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import __version__
from .analysis import (
    belt_sweep,
    check_ssa,
    closed_surface_gamma,
    fit_log_scaling,
    rectangle_bounds,
)
from .chains import decompose_belt, default_threads, write_profile_csv
from .errors import NumericalError, ValidationError
from .gaussian import MAX_DENSE_SITES, entropy
from .kspace import LatticeGeometry, parse_dispersion
from .partition import belt, belt_params, parse_region

CSV_SCHEMA = "boseee-results/1"
CSV_COLUMNS = ["N", "L", "region", "method", "S", "nu_min", "clamped", "seconds"]
COMMANDS = ("entropy", "belt", "rect-bounds", "ssa", "gamma", "profile", "selftest")

DEFAULTS = {
    "disp": "ebl", "d": 2, "N": None, "sweep_N": None, "ratio": None, "L": None,
    "region": None, "A": None, "B": None, "Lx": None, "Ly": None, "axis": "x",
    "method": "dense", "out": None, "threads": None, "timing": True,
}


@dataclass
class ExperimentSpec:
    command: str
    disp: str = "ebl"
    d: int = 2
    N: Optional[int] = None
    sweep_N: List[int] = field(default_factory=list)
    ratio: Optional[float] = None
    L: List[int] = field(default_factory=list)
    region: Optional[str] = None
    A: Optional[str] = None
    B: Optional[str] = None
    Lx: Optional[int] = None
    Ly: Optional[int] = None
    axis: str = "x"
    method: str = "dense"
    out: Optional[str] = None
    threads: int = 1
    timing: bool = True


def _int_list(text):
    if text is None or isinstance(text, list):
        return text
    try:
        return [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def validate(spec: ExperimentSpec) -> ExperimentSpec:
    """Normalize ``spec`` or raise ``ValidationError`` listing every defect."""
    errs = []
    if spec.command not in COMMANDS:
        errs.append(f"command: unknown command {spec.command!r}")
    if spec.command == "selftest":
        return spec
    try:
        disp = parse_dispersion(spec.disp)
    except ValidationError as exc:
        errs.append(f"--disp: {exc}")
        disp = None
    if spec.d not in (1, 2, 3):
        errs.append(f"--d: must be 1, 2 or 3, got {spec.d}")
    if spec.command in ("ssa", "rect-bounds", "gamma") and spec.d != 2:
        errs.append(f"--d: {spec.command} works on 2D lattices, got d={spec.d}")
    if spec.method not in ("dense", "chains", "both"):
        errs.append(f"--method: must be dense, chains or both, got {spec.method!r}")
    if spec.threads < 1:
        errs.append(f"--threads: must be >= 1, got {spec.threads}")
    if spec.axis not in ("x", "y", "z", "0", "1", "2"):
        errs.append(f"--axis: must be x, y or z, got {spec.axis!r}")

    Ns = list(spec.sweep_N) if spec.sweep_N else ([spec.N] if spec.N else [])
    if not Ns and spec.command != "selftest":
        errs.append("--N: lattice size required")
    for N in Ns:
        if N is None or N < 2:
            errs.append(f"--N: must be >= 2, got {N}")
    if spec.ratio is not None and not 0 < spec.ratio < 1:
        errs.append(f"--ratio: must lie strictly between 0 and 1, got {spec.ratio}")
    for N in Ns:
        if N and N >= 2:
            for L in spec.L:
                if not 1 <= L <= N - 1:
                    errs.append(f"--L: L={L} must satisfy 1 <= L <= N-1={N - 1}")
            if spec.ratio is not None and not 1 <= round(spec.ratio * N) <= N - 1:
                errs.append(f"--ratio: gives L={round(spec.ratio * N)} outside [1, {N - 1}] at N={N}")

    dense_needed = spec.method in ("dense", "both") or spec.command in ("ssa", "rect-bounds")
    if spec.command in ("gamma", "profile"):
        dense_needed = False
    if dense_needed:
        for N in Ns:
            if N and spec.d in (1, 2, 3) and N**spec.d > MAX_DENSE_SITES:
                errs.append(
                    f"--N: dense path limited to {MAX_DENSE_SITES} sites, N={N}, d={spec.d} gives {N**spec.d}; "
                    "use --method chains for belt regions"
                )

    if spec.command == "entropy":
        if not spec.region:
            errs.append("--region: required for entropy")
        elif Ns and spec.d in (1, 2, 3) and Ns[0] >= 2:
            for N in Ns:
                try:
                    r = parse_region(spec.region, LatticeGeometry(spec.d, N))
                except ValidationError as exc:
                    errs.append(f"--region: {exc}")
                    break
                if spec.method in ("chains", "both") and belt_params(r) is None:
                    errs.append(f"--method: {spec.method} needs a belt region, got {spec.region!r}")
                    break
    if spec.command == "belt":
        if spec.ratio is None and not spec.L:
            errs.append("--ratio/--L: belt sweep needs a width ratio or explicit widths")
        if spec.method == "both":
            errs.append("--method: belt sweeps take dense or chains")
    if spec.command == "ssa":
        for name, lit in (("--A", spec.A), ("--B", spec.B)):
            if not lit:
                errs.append(f"{name}: region literal required")
            elif Ns and Ns[0] >= 2:
                try:
                    parse_region(lit, LatticeGeometry(2, Ns[0]))
                except ValidationError as exc:
                    errs.append(f"{name}: {exc}")
    if spec.command == "rect-bounds":
        for name, v in (("--Lx", spec.Lx), ("--Ly", spec.Ly)):
            if v is None:
                errs.append(f"{name}: required")
            elif Ns and not 1 <= v <= Ns[0] - 1:
                errs.append(f"{name}: must satisfy 1 <= {name[2:]} <= N-1")
    if spec.command == "gamma" and disp is not None:
        if disp.kind != "closed_surface":
            errs.append(f"--disp: gamma needs a closed:alpha=..,beta=.. dispersion, got {spec.disp!r}")
        elif not 0 < disp.beta < 2:
            errs.append(f"--disp: beta={disp.beta:g} gives no closed Bose surface (need 0 < beta < 2)")
        if spec.ratio is None and not spec.L:
            errs.append("--ratio/--L: gamma needs widths")
    if spec.command == "profile" and not spec.L:
        errs.append("--L: profile needs one belt width")

    if errs:
        raise ValidationError("invalid experiment:\n  " + "\n  ".join(errs))
    return spec


def _geometries(spec):
    Ns = spec.sweep_N or [spec.N]
    return [LatticeGeometry(spec.d, N) for N in Ns]


def _widths(spec, N):
    return [int(round(spec.ratio * N))] if spec.ratio is not None else list(spec.L)


def _axis(spec):
    return int(spec.axis) if spec.axis.isdigit() else "xyz".index(spec.axis)


def _row(spec, N, L, region, res, seconds):
    nu = res.nu_min if np.isfinite(res.nu_min) else ""
    return [N, L, region, res.method, f"{res.value:.15g}", nu if nu == "" else f"{nu:.15g}", res.clamped_count,
            f"{seconds:.4f}" if spec.timing else ""]


def _entropy_rows(spec):
    disp = parse_dispersion(spec.disp)
    rows = []
    for g in _geometries(spec):
        region = parse_region(spec.region, g)
        bp = belt_params(region)
        L = bp[2] if bp else ""
        methods = ["dense", "chains"] if spec.method == "both" else [spec.method]
        for m in methods:
            t0 = time.perf_counter()
            if m == "dense":
                res = entropy(disp, g, region)
            else:
                res = decompose_belt(disp, g, region, threads=spec.threads).total
            rows.append(_row(spec, g.edge, L, spec.region, res, time.perf_counter() - t0))
    summary = {}
    if spec.method == "both":
        S = [float(r[4]) for r in rows]
        summary["max_dense_chain_difference"] = max(abs(a - b) for a, b in zip(S[::2], S[1::2]))
    return rows, summary


def _belt_rows(spec):
    disp = parse_dispersion(spec.disp)
    axis = _axis(spec)
    rows, pts = [], []
    for g in _geometries(spec):
        for L in _widths(spec, g.edge):
            t0 = time.perf_counter()
            (_, _, S), = belt_sweep(disp, g.dims, [g.edge], Ls=[L], method=spec.method, axis=axis, threads=spec.threads)
            dt = time.perf_counter() - t0
            label = f"belt:{spec.axis},0,{L}"
            method = "chain_decomposition" if spec.method == "chains" else "dense"
            rows.append([g.edge, L, label, method, f"{S:.15g}", "", "", f"{dt:.4f}" if spec.timing else ""])
            pts.append((L, g.edge, S))
    summary = {}
    if len(pts) >= 3 and len({p[0] for p in pts}) > 1:
        fit = fit_log_scaling(pts, "per_transverse", dims=spec.d)
        summary["fit"] = {"c": fit.c, "b": fit.b, "residual": fit.residual, "model": "S/N^(d-1) = c ln L + b"}
        summary["checks"] = [{"name": "slope_vs_one_third", "value": fit.c, "relative_error": fit.c * 3 - 1}]
    else:
        summary["fit"] = None
        summary["note"] = "fewer than 3 distinct widths; no fit"
    return rows, summary


def write_results(spec, rows, summary, stdout):
    header = f"# {CSV_SCHEMA} boseee={__version__} command={spec.command} disp={spec.disp} d={spec.d}\n"
    buf = io.StringIO()
    buf.write(header)
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    w.writerows(rows)
    text = buf.getvalue()
    doc = {"schema": CSV_SCHEMA, "spec": _spec_record(spec), **summary}
    if spec.out:
        base = Path(spec.out)
        base.parent.mkdir(parents=True, exist_ok=True)
        base.with_suffix(".csv").write_text(text)
        base.with_suffix(".json").write_text(json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n")
    else:
        stdout.write(text)
        if summary:
            stdout.write(json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n")


def write_json(spec, doc, stdout):
    doc = {"schema": CSV_SCHEMA, "spec": _spec_record(spec), **doc}
    text = json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n"
    if spec.out:
        p = Path(spec.out).with_suffix(".json")
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text)
    else:
        stdout.write(text)


def _spec_record(spec):
    d = asdict(spec)
    d.pop("threads")  # outputs must not depend on the thread count
    d.pop("out")
    return d


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serializable: {type(o)}")


def run(spec: ExperimentSpec, stdout=None) -> int:
    stdout = stdout or sys.stdout
    spec = validate(spec)
    c = spec.command
    if c == "selftest":
        from .acceptance import run_all

        results = run_all(echo=lambda line: print(line, file=stdout))
        hard_fail = [r for r in results if not r.passed and not r.warning_only]
        print(f"{len(results) - len(hard_fail)}/{len(results)} criteria passed or warned", file=stdout)
        return 1 if hard_fail else 0
    if c == "entropy":
        rows, summary = _entropy_rows(spec)
        write_results(spec, rows, summary, stdout)
    elif c == "belt":
        rows, summary = _belt_rows(spec)
        write_results(spec, rows, summary, stdout)
    elif c == "ssa":
        g = LatticeGeometry(2, spec.N)
        rep = check_ssa(parse_dispersion(spec.disp), g, parse_region(spec.A, g), parse_region(spec.B, g))
        write_json(spec, {"ssa": rep.as_dict(), "checks": [{"name": "ssa", "passed": rep.holds}]}, stdout)
    elif c == "rect-bounds":
        rep = rectangle_bounds(parse_dispersion(spec.disp), LatticeGeometry(2, spec.N), spec.Lx, spec.Ly)
        checks = [
            {"name": k, "passed": v, "kind": "exact" if k == "exact_upper" else "asymptotic",
             "binding": k == "exact_upper" or rep.asymptotic_regime}
            for k, v in rep.checks.items()
        ]
        write_json(spec, {"rectangle": rep.as_dict(), "checks": checks}, stdout)
    elif c == "gamma":
        Ns = spec.sweep_N or [spec.N]
        pts = [(N, L) for N in Ns for L in _widths(spec, N)]
        rep = closed_surface_gamma(parse_dispersion(spec.disp), pts, threads=spec.threads)
        write_json(spec, {"gamma": rep.as_dict(),
                          "checks": [{"name": "gamma_within_15pct", "passed": abs(rep.relative_error) <= 0.15}],
                          "note": "15% tolerance is an artifact choice; finite grids detune chain gapless points"},
                   stdout)
    elif c == "profile":
        g = LatticeGeometry(spec.d, spec.N)
        dec = decompose_belt(parse_dispersion(spec.disp), g, belt(g, _axis(spec), 0, spec.L[0]),
                             all_chains=True, threads=spec.threads)
        if spec.out:
            p = Path(spec.out).with_suffix(".csv")
            p.parent.mkdir(parents=True, exist_ok=True)
            write_profile_csv(dec, p)
        else:
            tmp = io.StringIO()
            w = csv.writer(tmp, lineterminator="\n")
            w.writerow(["k_perp_index", "k_perp_value", "S_chain"])
            for c_ in dec.per_chain:
                w.writerow([c_.index, ";".join(f"{x:.17g}" for x in c_.k_perp), f"{c_.entropy:.17g}"])
            stdout.write(tmp.getvalue())
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ee", description="Entanglement entropy of harmonic lattices with Bose surfaces.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, region=False):
        sp.add_argument("--config", help="JSON file with option values; command-line flags win")
        sp.add_argument("--disp", help="ebl | closed:alpha=<f>,beta=<f> | point | gapped:m=<f> | custom:<path>")
        sp.add_argument("--d", type=int, help="lattice dimension (1-3)")
        sp.add_argument("--N", type=int, help="sites per axis")
        sp.add_argument("--sweep-N", dest="sweep_N", type=_int_list, help="comma-separated list of N")
        sp.add_argument("--method", choices=["dense", "chains", "both"])
        sp.add_argument("--axis", help="belt axis: x, y or z")
        sp.add_argument("--out", help="output path prefix; writes <out>.csv and/or <out>.json")
        sp.add_argument("--threads", type=int, help="worker threads (default $EE_THREADS or 1)")
        sp.add_argument("--no-timing", dest="timing", action="store_const", const=False,
                        help="leave the seconds column empty (byte-reproducible output)")

    sp = sub.add_parser("entropy", help="entropy of one region")
    common(sp)
    sp.add_argument("--region", help="belt:x,0,L | rect:x0,y0,Lx,Ly | disk:cx,cy,r | mask:<path>")

    sp = sub.add_parser("belt", help="belt entropies over a size sweep, with a log fit")
    common(sp)
    sp.add_argument("--ratio", type=float, help="L/N held fixed across the sweep")
    sp.add_argument("--L", type=_int_list, help="comma-separated belt widths")

    sp = sub.add_parser("rect-bounds", help="rectangle entropy against belt-derived bounds")
    common(sp)
    sp.add_argument("--Lx", type=int)
    sp.add_argument("--Ly", type=int)

    sp = sub.add_parser("ssa", help="strong subadditivity for two regions")
    common(sp)
    sp.add_argument("--A")
    sp.add_argument("--B")

    sp = sub.add_parser("gamma", help="closed Bose surface: fitted vs predicted geometric factor")
    common(sp)
    sp.add_argument("--ratio", type=float)
    sp.add_argument("--L", type=_int_list)

    sp = sub.add_parser("profile", help="per-chain entropies of a belt")
    common(sp)
    sp.add_argument("--L", type=_int_list)

    sub.add_parser("selftest", help="run the acceptance checks")
    return p


def spec_from_args(ns: argparse.Namespace) -> ExperimentSpec:
    given = {k: v for k, v in vars(ns).items() if v is not None and k not in ("config", "command")}
    merged = dict(DEFAULTS)
    cfg_path = getattr(ns, "config", None)
    if cfg_path:
        try:
            cfg = json.loads(Path(cfg_path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"--config: cannot read {cfg_path!r}: {exc}") from None
        unknown = set(cfg) - set(DEFAULTS)
        if unknown:
            raise ValidationError(f"--config: unknown keys {sorted(unknown)}")
        merged.update(cfg)
    merged.update(given)
    if merged["threads"] is None:
        merged["threads"] = default_threads()
    for key in ("sweep_N", "L"):
        v = merged[key]
        merged[key] = [v] if isinstance(v, int) else (_int_list(v) or [])
    merged["axis"] = str(merged["axis"])
    return ExperimentSpec(command=ns.command, **merged)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        spec = spec_from_args(ns)
        return run(spec)
    except ValidationError as exc:
        print(f"ee: error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"ee: numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
