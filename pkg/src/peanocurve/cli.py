"""Command-line front end: gen, cover, sdim, curve, verify, render, report."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import analysis
from .assembler import FORMAT_VERSION, ModulusSpec, assemble, default_N
from .continuum import Continuum, generate, load_bitmap
from .covers import sierpinski_table
from .errors import CertificateFailure, PeanoError
from .paths import ParamCurve
from .render import render_svg

COMMANDS = ("gen", "cover", "sdim", "curve", "verify", "render", "report")


@dataclass
class RunConfig:
    command: str
    shape: str | None = None
    size: int | None = None
    depth: int | None = None
    bitmap: str | None = None
    alpha: float = 2.0
    holder_C: float = 1.0
    levels: int | None = None
    seed: int = 0
    out: str | None = None
    cert: str | None = None
    svg: str | None = None
    curve: str | None = None
    threshold: float = 127


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="peanocurve",
                                description="Hoelder-certified surjections onto discretized continua")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--shape", choices=["interval", "square", "carpet", "gasket"])
        s.add_argument("--size", type=int, help="cells per side (interval, square)")
        s.add_argument("--depth", type=int, help="recursion depth (carpet, gasket)")
        s.add_argument("--bitmap", metavar="PATH", help="PGM/PBM input")
        s.add_argument("--threshold", type=float, default=127)
        s.add_argument("--alpha", type=float, default=2.0)
        s.add_argument("--holder-C", dest="holder_C", type=float, default=1.0)
        s.add_argument("--levels", type=int, metavar="N")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--out")
        s.add_argument("--cert")
        s.add_argument("--svg")
        s.add_argument("--curve", metavar="CSV", help="curve file (verify, render)")
    return p


def parse_config(argv=None) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if (ns.shape is None) == (ns.bitmap is None):
        parser.error("give exactly one of --shape or --bitmap")
    if ns.shape in ("interval", "square") and ns.size is None:
        parser.error(f"--shape {ns.shape} needs --size")
    if ns.shape in ("carpet", "gasket") and ns.depth is None:
        parser.error(f"--shape {ns.shape} needs --depth")
    if not ns.alpha > 0:
        parser.error("--alpha must be > 0")
    if not ns.holder_C > 0:
        parser.error("--holder-C must be > 0")
    if ns.levels is not None and ns.levels < 1:
        parser.error("--levels must be >= 1")
    if ns.command == "verify" and ns.curve is None:
        parser.error("verify needs --curve")
    return RunConfig(**vars(ns))


def load_space(cfg: RunConfig) -> Continuum:
    if cfg.bitmap is not None:
        return load_bitmap(cfg.bitmap, cfg.threshold)
    param = cfg.size if cfg.shape in ("interval", "square") else cfg.depth
    return generate(cfg.shape, param)


def _emit(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _json(doc) -> str:
    return json.dumps(doc, indent=1) + "\n"


def run(cfg: RunConfig) -> int:
    X = load_space(cfg)
    omega = ModulusSpec.power(cfg.alpha, cfg.holder_C)
    levels = cfg.levels

    if cfg.command == "gen":
        doc = {"format_version": FORMAT_VERSION, "name": X.name, "n_cells": X.n,
               "n_edges": len(X.edges), "scale": X.scale,
               "resolution_level": X.resolution_level(),
               "cells": [[float(x), float(y)] for x, y in X.coords],
               "edges": [list(e) for e in X.edges]}
        _emit(_json(doc), cfg.out)
        return 0

    if cfg.command == "cover":
        tab = sierpinski_table(X, levels if levels is not None else max(1, X.resolution_level()))
        _emit(tab.to_csv(), cfg.out)
        return 0

    if cfg.command == "sdim":
        rep = analysis.dimension_report(X, levels)
        _emit(_json(rep.to_dict()), cfg.out)
        return 0

    if cfg.command in ("curve", "render", "report") and cfg.curve is None:
        hc = assemble(X, omega, levels)
        curve = hc.curve
    else:
        hc = None
        with open(cfg.curve) as fh:
            curve = ParamCurve.from_csv(fh.read())

    if cfg.command == "curve":
        _emit(curve.to_csv(X), cfg.out)
        if cfg.cert:
            _emit(hc.certificate_json() + "\n", cfg.cert)
        if cfg.svg:
            _emit(render_svg(curve, X), cfg.svg)
        if not hc.passed:
            raise CertificateFailure("observed modulus exceeds an allowed bound; see certificate")
        return 0

    if cfg.command == "render":
        _emit(render_svg(curve, X), cfg.svg or cfg.out)
        return 0

    if cfg.command == "verify":
        rep = analysis.verify_certificate(curve, X, omega)
        doc = rep.to_dict()
        doc["modulus"] = omega.to_dict()
        _emit(_json(doc), cfg.cert or cfg.out)
        if not rep.passed:
            raise CertificateFailure(f"omega_hat exceeds Omega (worst ratio {rep.worst_ratio:.4g})")
        return 0

    # report
    n_max = levels if levels is not None else max(2, X.resolution_level())
    dim = analysis.dimension_report(X, n_max)
    doc = {"format_version": FORMAT_VERSION, "space": X.name, "n_cells": X.n,
           "dimension": dim.to_dict(), "certificate": hc.certificate_dict() if hc else None}
    if hc is not None and hc.table is not None:
        C_fit, r_fit = analysis.fit_power_law(hc.table, range(1, hc.N + 1), dim.s_dim)
        try:
            bound = analysis.holder_bound(C_fit, r_fit, cfg.alpha) if r_fit > 0 else None
        except PeanoError:
            bound = None
        doc["holder"] = {"C_fit": C_fit, "r_fit": r_fit, "alpha": cfg.alpha,
                         "s": hc.s, "bound": bound,
                         "within_bound": None if bound is None else hc.s <= bound}
    _emit(_json(doc), cfg.out)
    return 0


def main(argv=None) -> int:
    cfg = parse_config(argv)
    try:
        return run(cfg)
    except PeanoError as exc:
        sys.stderr.write(json.dumps(exc.to_dict()) + "\n")
        return 1
    except (OSError, ValueError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
