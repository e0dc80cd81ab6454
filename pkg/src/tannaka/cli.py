"""Command-line front end.

Exit codes: 0 pass, 1 duality-check failure, 2 input error, 3 config or usage
error, 4 I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass

import numpy as np

from .duality import METHODS, default_method, reconstruct, verify_duality
from .errors import ConfigError, ScaleError, SpecError, TannakaError
from .fourier import fourier, inverse_fourier
from .groupoid import FiniteGroupoid, build, components
from .natural import center_report
from .reps import orthogonality_report, unitary_dual
from .serialize import dual_to_json, dumps, element_to_json

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3, 4
COMMANDS = ("dual", "fourier-roundtrip", "reconstruct", "verify", "report")
ROUNDTRIP_FUNCTIONS = 100
ROUNDTRIP_TOL = 1e-9


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(f"{self.prog}: {message}")


@dataclass(frozen=True)
class CliConfig:
    command: str
    spec_path: str
    seed: int = 0
    tol: float = 1e-8
    out_path: str | None = None
    method: str | None = None


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tannaka", description="Finite groupoid duality checks.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--spec", required=True, dest="spec_path", metavar="PATH", help="GroupoidSpec JSON file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--method", choices=METHODS, default=None)
    p.add_argument("--out", dest="out_path", metavar="PATH", default=None)
    return p


def parse_args(argv) -> CliConfig:
    ns = _build_parser().parse_args(list(argv))
    if not ns.tol > 0:
        raise ConfigError(f"--tol must be positive, got {ns.tol}")
    return CliConfig(ns.command, ns.spec_path, ns.seed, ns.tol, ns.out_path, ns.method)


def load_spec(path: str) -> FiniteGroupoid:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise OSError(f"cannot read spec {path}: {exc.strerror or exc}") from exc
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"spec {path} is not valid JSON: {exc}") from exc
    return build(spec)


def roundtrip_stats(g: FiniteGroupoid, seed: int, n: int = ROUNDTRIP_FUNCTIONS) -> dict:
    """Sup-norm inversion residuals over ``n`` seeded random functions per fiber."""
    dual = unitary_dual(g, seed=seed)
    rng = np.random.default_rng(seed)
    worst, total, count = 0.0, 0.0, 0
    for u, v in g.nonempty_fibers():
        fib = g.fiber(u, v)
        for _ in range(n):
            f = np.zeros(g.n_arrows, dtype=complex)
            f[fib] = rng.standard_normal(len(fib)) + 1j * rng.standard_normal(len(fib))
            back = inverse_fourier(dual, fourier(g, dual.haar, dual, f, fibers=[(u, v)]), (u, v))
            r = float(np.abs(back - f).max())
            worst = max(worst, r)
            total += r
            count += 1
    return {"functions_per_fiber": n, "fibers": len(g.nonempty_fibers()), "max_residual": worst,
            "mean_residual": total / max(count, 1), "pass": worst < ROUNDTRIP_TOL}


def _reconstruct_all(g: FiniteGroupoid, cfg: CliConfig) -> dict:
    dual = unitary_dual(g, seed=cfg.seed)
    method = cfg.method or default_method(dual)
    fibers = []
    for uv in g.nonempty_fibers():
        rec = reconstruct(g, dual, uv, method=method, seed=cfg.seed, tol=cfg.tol)
        fibers.append({
            "u": uv[0], "v": uv[1], "expected": len(g.fiber(*uv)), "found": len(rec),
            "attempts": rec.attempts, "converged": rec.converged, "partial": rec.partial,
            "residuals": rec.residuals,
            "solutions": [element_to_json(s) for s in rec.solutions],
        })
    ok = all(f["found"] == f["expected"] and not f["partial"] for f in fibers)
    return {"method": method, "seed": cfg.seed, "tol": cfg.tol, "fibers": fibers, "pass": ok}


def _report(g: FiniteGroupoid, cfg: CliConfig) -> dict:
    dual = unitary_dual(g, seed=cfg.seed)
    verify = verify_duality(g, seed=cfg.seed, method=cfg.method, tol=cfg.tol, dual=dual).to_json()
    rt = roundtrip_stats(g, cfg.seed)
    orth = orthogonality_report(g, dual)
    sums = dual.sum_rule()
    return {
        "groupoid": {"n_units": g.n_units, "n_arrows": g.n_arrows, "components": len(components(g))},
        "dual": {"irreps": [{"label": list(ir.label), "dims": list(ir.rep.dims)} for ir in dual],
                 "sum_rule": [{"component": c, "sum": s, "arrows": a} for c, (s, a) in sorted(sums.items())]},
        "orthogonality": orth,
        "fourier_roundtrip": rt,
        "center": center_report(dual, seed=cfg.seed),
        "duality": verify,
        "pass": bool(verify["pass"] and rt["pass"] and all(s == a for s, a in sums.values())),
    }


def run(cfg: CliConfig) -> tuple[int, dict]:
    g = load_spec(cfg.spec_path)
    if cfg.command == "dual":
        out = dual_to_json(unitary_dual(g, seed=cfg.seed))
        return EXIT_PASS, out
    if cfg.command == "fourier-roundtrip":
        out = roundtrip_stats(g, cfg.seed)
    elif cfg.command == "reconstruct":
        out = _reconstruct_all(g, cfg)
    elif cfg.command == "verify":
        out = verify_duality(g, seed=cfg.seed, method=cfg.method, tol=cfg.tol).to_json()
    else:
        out = _report(g, cfg)
    return (EXIT_PASS if out["pass"] else EXIT_FAIL), out


def emit_report(report: dict, path: str | None = None) -> None:
    text = dumps(report)
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_args(argv)
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    start = time.perf_counter()
    try:
        code, report = run(cfg)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SpecError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConfigError, ScaleError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TannakaError as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    try:
        emit_report(report, cfg.out_path)
    except OSError as exc:
        print(f"I/O error: cannot write {cfg.out_path}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    print(f"{cfg.command}: exit {code} in {time.perf_counter() - start:.2f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
