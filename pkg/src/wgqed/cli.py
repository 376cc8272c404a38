"""Command-line front end.

    wgqed run --config scenario.json [--out DIR] [--grid-points N] [--markovian] [--no-pv] [--plot]
    wgqed goldens [--filter NAME]

Exit codes: 0 ok, 2 configuration, 3 invariant violation, 4 numerical
failure.  On failure a machine-readable ``error.json`` lands in the output
directory.  ``WGQED_WORKERS`` sets the process count for sweeps.
"""

import argparse
import json
import os
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import numpy as np

from . import analysis, dynamics, scenario, solver
from .errors import ConfigurationError, InvariantError, WgqedError

FLOAT_FMT = "%.11e"  # 12 significant digits


def _version():
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0+unknown"


def atomic_write(path, text):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(columns, data):
    lines = [",".join(columns)]
    for row in np.column_stack(data):
        lines.append(",".join(FLOAT_FMT % v for v in row))
    return "\n".join(lines) + "\n"


# --- computations ------------------------------------------------------------

def _baseline(sc, pulse):
    return solver.baseline_spectra(sc.chain, pulse, sc.grid, markovian=sc.options["markovian"])


def _check_spectra(res, sc):
    for a in (res.gamma_out, res.delta_out, res.gamma_approx, res.delta_approx):
        if a is not None and not np.all(np.isfinite(a)):
            raise InvariantError("non-finite spectrum")
    if res.gamma_approx is not None and not sc.options["markovian"] and not res.transfer:
        flux = res.s_approx_fwd + res.s_approx_bwd - np.abs(res.gamma0) ** 2
        if np.max(np.abs(flux)) > 1e-9 * max(1.0, np.max(np.abs(res.gamma0) ** 2)):
            raise InvariantError("baseline violates pointwise flux conservation")
    if res.gamma_out is not None and not res.transfer and sc.options["include_pv"]:
        p = sc.pulse
        if sc.grid.covers(max(0.0, p.omega_s - 4 * p.delta), p.omega_s + 4 * p.delta):
            if abs(res.norm_I - 1) > sc.options["norm_tolerance"]:
                raise InvariantError(f"photon norm {res.norm_I:.6f} deviates from 1 by more than "
                                     f"{sc.options['norm_tolerance']}")


def _features(res, exact):
    feats = {}
    fwd, bwd = ("s_exact_fwd", "delta_out") if exact else ("s_approx_fwd", "delta_approx")
    feats["peaks_S1" if exact else "peaks_S3"] = [p._asdict() for p in analysis.peak_features(res, fwd)[:8]]
    feats["reflection_zeros" if exact else "reflection_zeros_approx"] = analysis.find_reflection_zeros(res, bwd)
    return feats


def compute(sc):
    """Run one resolved scenario; returns (columns, data, metadata)."""
    cfg, pulse, mode = sc.chain, sc.pulse, sc.mode
    meta = {}
    if mode in ("spectra_exact", "spectra_approx", "spectra_both", "delta_transfer"):
        if mode == "delta_transfer":
            pulse = type(pulse).delta_limit(pulse.omega_s)
        elif pulse.is_delta:
            raise ConfigurationError("spectra modes need a Gaussian pulse; use delta_transfer")
        res = solver.SpectrumResult(sc.grid, transfer=pulse.is_delta)
        if mode != "spectra_approx":
            beta = solver.solve_beta(cfg, pulse, sc.grid, include_pv=sc.options["include_pv"])
            res = solver.spectra(cfg, pulse, sc.grid, beta=beta, baseline=False)
        if mode != "spectra_exact":
            base = _baseline(sc, pulse)
            res = base if res.gamma_out is None else res.merged(base)
        _check_spectra(res, sc)
        cols, data = ["omega_over_Omega"], [res.omega]
        names = ("T", "R", "T_approx", "R_approx") if res.transfer else ("S1", "S2", "S3", "S4")
        if res.gamma_out is not None:
            cols += names[:2]
            data += [res.s_exact_fwd, res.s_exact_bwd]
            if not res.transfer:
                meta["norm_I"] = res.norm_I
            meta["features"] = _features(res, True)
        if res.gamma_approx is not None:
            cols += names[2:]
            data += [res.s_approx_fwd, res.s_approx_bwd]
            if not res.transfer:
                meta["norm_approx"] = res.norm_approx
            meta.setdefault("features", {}).update(_features(res, False))
        return cols, data, meta
    if mode == "dynamics":
        t = sc.time_grid.points
        beta = dynamics.beta_t_numeric(cfg, pulse, t)
        pop = np.abs(beta) ** 2
        meta["max_abs_beta_sq"] = [float(v) for v in pop.max(axis=1)]
        cols = ["t_Gamma"] + [f"abs_beta_sq_{n + 1}" for n in range(cfg.n_qubits)]
        return cols, [t * cfg.gamma_ratio, *pop], meta
    if mode == "poles":
        poles = analysis.poles_chain(cfg)
        if cfg.n_qubits == 2:
            rs = analysis.poles_markovian(cfg)
            meta["markovian_over_gamma"] = dict(zip(("shift_plus", "shift_minus", "rate_plus", "rate_minus"),
                                                    rs.ratios()))
            if cfg.coupling_mode.value == "ww":
                nm = analysis.poles_nonmarkovian(cfg)
                meta["nonmarkovian"] = [[float(p.real), float(p.imag)] for p in nm]
        cols = ["index", "re_omega_over_Omega", "im_omega_over_Omega"]
        return cols, [np.arange(1, poles.size + 1), poles.real, poles.imag], meta
    raise ConfigurationError(f"unknown mode {mode!r}")


def _plot_script(csv_name, cols):
    return f'''import sys
import numpy as np
import matplotlib.pyplot as plt

data = np.genfromtxt({csv_name!r}, delimiter=",", names=True)
cols = {cols[1:]!r}
fig, axes = plt.subplots(len(cols), 1, sharex=True, figsize=(5, 1.8 * len(cols)))
for ax, c in zip(np.atleast_1d(axes), cols):
    ax.plot(data[{cols[0]!r}], data[c])
    ax.set_ylabel(c)
np.atleast_1d(axes)[-1].set_xlabel({cols[0]!r})
fig.tight_layout()
fig.savefig(sys.argv[1] if len(sys.argv) > 1 else {csv_name[:-4] + ".png"!r})
'''


def run_one(doc, out_dir, stem, overrides, plot=False):
    """Resolve, compute and write one run.  Returns the sidecar dict."""
    t0 = time.perf_counter()
    sc = scenario.resolve(doc, **overrides)
    cols, data, meta = compute(sc)
    out_dir = Path(out_dir)
    csv_name = f"{stem}.csv"
    atomic_write(out_dir / csv_name, csv_text(cols, data))
    side = {"config": sc.doc, "columns": cols, "version": _version(),
            "wall_time_s": round(time.perf_counter() - t0, 3)}
    side.update(meta)
    atomic_write(out_dir / f"{stem}.json", json.dumps(side, indent=2, default=float) + "\n")
    if plot:
        atomic_write(out_dir / f"{stem}_plot.py", _plot_script(csv_name, cols))
    return side


def _run_job(args):
    return run_one(*args)


def load_config(path):
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigurationError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config is not valid JSON: {exc}") from None
    # a sidecar carries its resolved config
    if isinstance(doc, dict) and "config" in doc and "version" in doc:
        doc = doc["config"]
    return doc


def cmd_run(args):
    doc = load_config(args.config)
    runs = scenario.expand(doc)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = doc.get("name") or Path(args.config).stem
    overrides = {"grid_points": args.grid_points,
                 "markovian": True if args.markovian else None,
                 "include_pv": False if args.no_pv else None}
    stems = [stem] if len(runs) == 1 else [f"{stem}_{i:03d}" for i in range(len(runs))]
    jobs = [(d, out, s, overrides, args.plot) for d, s in zip(runs, stems)]
    workers = int(os.environ.get("WGQED_WORKERS", "1") or 1)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            sides = list(pool.map(_run_job, jobs))
    else:
        sides = [_run_job(j) for j in jobs]
    for s, side in zip(stems, sides):
        print(f"{s}: wrote {s}.csv ({side['wall_time_s']} s)")
    return 0


def cmd_goldens(args):
    from .goldens import run_goldens

    return run_goldens(args.filter)


def build_parser():
    p = argparse.ArgumentParser(prog="wgqed", description="Single-photon scattering on qubits in a waveguide.")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a scenario file")
    r.add_argument("--config", required=True)
    r.add_argument("--out", default=".")
    r.add_argument("--grid-points", type=int)
    r.add_argument("--markovian", action="store_true", help="freeze retardation phases at k0 d in the baseline")
    r.add_argument("--no-pv", action="store_true", help="drop principal-value drive terms (diagnostic)")
    r.add_argument("--plot", action="store_true", help="also write a matplotlib script")
    r.set_defaults(func=cmd_run)
    g = sub.add_parser("goldens", help="run the reference-value suite")
    g.add_argument("--filter", default=None, help="substring of golden names to run")
    g.set_defaults(func=cmd_goldens)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (WgqedError, ValueError, ArithmeticError, RuntimeError) as exc:
        code = getattr(exc, "exit_code", None) or (2 if isinstance(exc, ValueError) else 1)
        record = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
        out = Path(getattr(args, "out", ".") or ".")
        try:
            out.mkdir(parents=True, exist_ok=True)
            atomic_write(out / "error.json", json.dumps(record, indent=2) + "\n")
        except OSError:
            pass
        print(f"error: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
