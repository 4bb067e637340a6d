"""Command-line front end.

    usc-raman {eigen,spectrum,map,raman,classify,verify} [--config PATH]
              [--workers N] [--out PATH] [--zoom CENTER,HALFWIDTH]

Exit status: 0 on success, 1 for configuration errors, 2 for numerical
failures (including failed ``verify`` checks). Every output file gets a
``<out>.meta.json`` sidecar holding the resolved configuration and solver
diagnostics.
"""

import argparse
import csv
import io
import json
import logging
import os
import sys
import tempfile

import numpy as np

from . import model, raman, spectrum, verify
from . import operators as ops
from .config import TASKS, load_config, parse_config
from .errors import ConfigError, NumericalError

log = logging.getLogger("usc_raman")

DEFAULT_OUT = {"eigen": "eigen.csv", "spectrum": "spectrum.csv", "map": "map.csv",
               "raman": "raman.csv", "classify": "classify.json", "verify": "verify.json"}


def fmt(x):
    return format(float(x), ".17g")


def write_atomic(path, text):
    path = os.path.abspath(path)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj):
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    raise TypeError(type(o))


def _sidecar(cfg, **extra):
    meta = {"config": cfg.resolved(),
            "conventions": {"vectorization": ops.VECTORIZATION,
                            "pauli_z": ops.PAULI_Z_CONVENTION,
                            "parity": model.PARITY_CONVENTION,
                            "frequency_unit": "omega_c"}}
    meta.update(extra)
    return meta


def _parity_str(label):
    return {1: "+1", -1: "-1"}.get(label, "mixed")


def task_eigen(cfg):
    p = cfg.model
    n = model.fock_size(p)
    eig = model.rabi_eigensystem(p, n)
    n_conv = model.converged_levels(p)
    rows = [[k, fmt(eig.raw_energies[k]), fmt(eig.energies[k]), _parity_str(eig.parity[k])]
            for k in range(n_conv)]
    text = _csv(["index", "energy", "energy_minus_ground", "parity"], rows)
    return text, {"n_fock": n, "converged_levels": n_conv}


def _omega_s_grid(cfg, zoom):
    spec = cfg.omega_s_grid if zoom is None else cfg.omega_s_grid.zoomed(*zoom)
    return spec


def task_spectrum(cfg, zoom=None):
    spec = _omega_s_grid(cfg, zoom)
    curve = spectrum.emission_spectrum(cfg.model, spec.array(), cfg.workers)
    norm = float(np.max(curve.intensity))
    scaled = curve.intensity / norm if norm > 0 else curve.intensity
    rows = [[fmt(w), fmt(s)] for w, s in zip(curve.omega_s_grid, scaled)]
    return (_csv(["omega_s", "intensity"], rows),
            {"omega_s_grid_used": spec.to_dict(), "normalization": norm,
             "diagnostics": curve.diagnostics})


def task_map(cfg, zoom=None):
    spec = _omega_s_grid(cfg, zoom)
    smap = spectrum.excitation_emission_map(cfg.model, cfg.omega_L_grid.array(), spec.array(),
                                            cfg.workers)
    norm = float(np.max(smap.intensity))
    scaled = smap.intensity / norm if norm > 0 else smap.intensity
    rows = [[fmt(wl), fmt(ws), fmt(scaled[i, j])]
            for i, wl in enumerate(smap.omega_L_grid) for j, ws in enumerate(smap.omega_s_grid)]
    return (_csv(["omega_L", "omega_s", "intensity"], rows),
            {"omega_s_grid_used": spec.to_dict(), "normalization": norm,
             "params_snapshot": smap.params_snapshot.to_dict(), "temperature": smap.temperature,
             "diagnostics": smap.diagnostics})


def task_raman(cfg):
    p = cfg.model
    eig = raman.fgr_eigensystem(p)
    X = raman.dipole_elements(eig)
    lines = raman.raman_line_table(eig, X, p.omega_L, p.T, cfg.n_states,
                                   linewidth=p.kappa + p.gamma)
    rows = [[ln.i, ln.f, ln.kind, fmt(ln.omega_fi), fmt(ln.omega_R), fmt(abs(ln.amplitude)),
             fmt(ln.relative_rate), ln.flags] for ln in lines]
    header = ["i", "f", "kind", "omega_fi", "omega_R", "abs_M", "relative_rate", "flags"]
    return _csv(header, rows), {"n_fock": eig.dim // 2, "n_lines": len(lines)}


def task_classify(cfg):
    p = cfg.model
    eig = raman.fgr_eigensystem(p)
    out = []
    for wl, ws in cfg.queries:
        lab = raman.classify_feature(ws, wl, eig, cfg.tol, cfg.n_states)
        out.append({"omega_L": wl, "omega_s": ws, "label": str(lab), "kind": lab.kind,
                    "f": lab.f, "i": lab.i,
                    "residual": None if lab.kind == "unclassified" else lab.residual})
    return _json(out), {"n_fock": eig.dim // 2, "tol": cfg.tol}


def task_verify(cfg):
    results = verify.run_checks(cfg.model)
    for r in results:
        print(r.line())
    report = [{"name": r.name, "passed": r.passed, "value": r.value,
               "threshold": r.threshold, "detail": r.detail} for r in results]
    return _json(report), {"all_passed": all(r.passed for r in results)}


def run(cfg, zoom=None):
    """Execute one task and write its output files; returns the exit status."""
    out = cfg.output_path or DEFAULT_OUT[cfg.task]
    if cfg.task in ("spectrum", "map"):
        text, meta = {"spectrum": task_spectrum, "map": task_map}[cfg.task](cfg, zoom)
    else:
        text, meta = {"eigen": task_eigen, "raman": task_raman, "classify": task_classify,
                      "verify": task_verify}[cfg.task](cfg)
    meta.setdefault("n_fock", model.fock_size(cfg.model))
    write_atomic(out, text)
    write_atomic(out + ".meta.json", _json(_sidecar(cfg, **meta)))
    if cfg.task == "verify" and not meta["all_passed"]:
        return 2
    return 0


def _zoom(text):
    try:
        center, half = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected CENTER,HALFWIDTH") from None
    if half <= 0:
        raise argparse.ArgumentTypeError("half width must be positive")
    return center, half


def build_parser():
    ap = argparse.ArgumentParser(prog="usc-raman",
                                 description="Raman scattering in ultrastrongly coupled cavity QED")
    ap.add_argument("task", choices=TASKS)
    ap.add_argument("--config", help="JSON configuration (defaults if omitted)")
    ap.add_argument("--workers", type=int, default=None,
                    help="parallel worker processes (default: $USC_RAMAN_WORKERS or 1)")
    ap.add_argument("--out", help="output file")
    ap.add_argument("--zoom", type=_zoom, help="replace the omega_s grid by CENTER +- HALFWIDTH")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.config:
            cfg = load_config(args.config, args.task, args.workers, args.out)
        else:
            cfg = parse_config({}, args.task, args.workers, args.out)
        return run(cfg, args.zoom)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
