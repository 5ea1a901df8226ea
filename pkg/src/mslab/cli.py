"""``mslab run --config <path> --out <dir> [--seed N] [--grid N]``.

Exit codes: 0 all suites passed, 1 some suite failed its contract,
2 invalid config (nothing is computed).
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, io, kernels
from .boundary import BoundaryFunction, HardyEvaluator
from .config import SUITES, ExperimentConfig, load_config
from .disk import StolzRegion, circle_grid, stolz_sample
from .errors import ConfigError, MslabError
from .inner import adc_probe
from .model_space import tm_basis
from .nearly_invariant import (
    SarasonPair,
    build_resolved_space,
    build_space,
    conjugation_g,
    conjugation_g_direct,
    constant_pair,
    extremality_check,
    isometry_residual,
    kernel_M_samples,
    kernel_M_norm_sq,
    project_M,
    q_tail,
    q_tail_operator,
    rank_one_M,
    rank_one_M_direct,
    spatial_isomorphism_residual,
    trivial_pair,
)
from .probe import dichotomy_classify, mntl_check, paper_example, oscillating_space, vanishing_pair
from .symbols import model_space_symbol, null_symbol, random_disk_points, standard_symbols
from .toeplitz import (
    assemble,
    complex_symmetry_residual,
    compressed_shift,
    conjugation,
    opnorm,
    sarason_defect,
    zero_symbol_residual,
)

logger = logging.getLogger("mslab")

EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 1, 2

GRAM_TOL = 1e-10
SPATIAL_TOL = 1e-6
SYMMETRY_TOL = 1e-8
INVOLUTION_TOL = 1e-10
ZERO_TOL = 1e-8
NONZERO_FLOOR = 0.1
DEFECT_TOL = 1e-8
ISOMETRY_TOL = 1e-8
PROJECTION_TOL = 1e-8
REPRODUCING_TOL = 1e-9
TRANSPORT_TOL = 1e-8
TAIL_TOL = 1e-9
EXTREMAL_TOL = 1e-9


class Run:
    """State shared by the suites of one invocation; the space is built at most once."""

    def __init__(self, cfg: ExperimentConfig, out: Path):
        self.cfg = cfg
        self.out = out
        self.I = cfg.inner
        self.files: list[str] = []
        self._space = None
        self._space_error = None
        self._samples = None

    def rng(self, suite: str) -> np.random.Generator:
        return np.random.default_rng([self.cfg.seed, SUITES.index(suite)])

    def basis_grid(self):
        basis = tm_basis(self.I)
        return circle_grid(self.cfg.grid) if self.cfg.grid else basis.default_grid()

    def write(self, name: str, writer, *args) -> str:
        writer(self.out / name, *args)
        self.files.append(name)
        return name

    def load_samples(self) -> None:
        """Parse sample-pair CSVs up front so that malformed files count as config errors."""
        pair = self.cfg.pair
        if pair["kind"] != "samples":
            return
        try:
            a = io.read_samples_csv(self.cfg.resolve(pair["a"]))
            b = io.read_samples_csv(self.cfg.resolve(pair["b"]))
        except (OSError, ValueError, MslabError) as exc:
            raise ConfigError(f"pair samples: {exc}") from exc
        if a.size != b.size:
            raise ConfigError(f"pair samples on different grids ({a.size} vs {b.size})")
        if self.cfg.grid and self.cfg.grid != a.size:
            raise ConfigError(f"--grid {self.cfg.grid} disagrees with the sample files ({a.size} nodes)")
        self._samples = (a, b)

    def space(self):
        if self._space is None and self._space_error is None:
            try:
                self._space = self._build()
            except MslabError as exc:
                self._space_error = exc
        if self._space_error is not None:
            raise self._space_error
        return self._space

    def _build(self):
        pair, I, fixed = self.cfg.pair, self.I, self.cfg.grid
        kind = pair["kind"]
        if kind == "paper_example":
            return oscillating_space(pair["n1"], pair["n2"], I, fixed)
        if kind == "samples":
            a, b = self._samples
            return build_space(I, SarasonPair(HardyEvaluator(a, label="a"), HardyEvaluator(b, label="b")))
        if kind == "trivial":
            factory = trivial_pair
        elif kind == "constant":
            ca, cb = complex(*pair["a"]), complex(*pair["b"])

            def factory(grid):
                return constant_pair(grid, ca, cb)
        else:
            zeta = complex(*pair.get("zeta", [1.0, 0.0]))
            p = pair.get("exponent", 0.6)

            def factory(grid):
                return vanishing_pair(grid, zeta, p, I)
        if fixed:
            return build_space(I, factory(circle_grid(fixed)))
        start = 1 << 12 if kind == "vanishing" else None
        tol = 1e-8 if kind == "vanishing" else 1e-12
        return build_resolved_space(I, factory, start=start, tol=tol)


def _check(results: dict, name: str, value: float, tol: float, below: bool = True) -> bool:
    ok = bool(value < tol) if below else bool(value > tol)
    results["residuals"][name] = float(value)
    results["thresholds"][name] = {"max" if below else "min": tol}
    results["checks"][name] = ok
    return ok


def _new_result() -> dict:
    return {"residuals": {}, "thresholds": {}, "checks": {}, "details": {}}


# ------------------------------------------------------------- suites


def suite_gram(run: Run, res: dict) -> None:
    basis = tm_basis(run.I)
    grid = run.basis_grid()
    G = basis.gram(grid)
    res["details"]["grid_size"] = grid.size
    res["details"]["degree"] = basis.degree
    _check(res, "gram_deviation", float(np.max(np.abs(G - np.eye(basis.degree)))), GRAM_TOL)
    res["files"] = [run.write("gram.csv", io.write_matrix_csv, G)]


def suite_tto_verify(run: Run, res: dict) -> None:
    M = run.space()
    I = run.I
    res["details"]["grid_size"] = M.grid.size
    syms = standard_symbols(M.grid, run.rng("tto-verify"), run.cfg.trials("symbols"))
    spatial = {k: spatial_isomorphism_residual(M, phi) for k, phi in syms.items()}
    sym = {k: complex_symmetry_residual(I, phi) for k, phi in syms.items()}
    adjoint = {}
    for k, phi in syms.items():
        a = assemble(I, phi).entries
        adjoint[k] = opnorm(a.conj().T - assemble(I, phi.conj()).entries)
    res["details"]["spatial_by_symbol"] = spatial
    res["details"]["symmetry_by_symbol"] = sym
    _check(res, "spatial_residual", max(spatial.values()), SPATIAL_TOL)
    _check(res, "complex_symmetry_residual", max(sym.values()), SYMMETRY_TOL)
    _check(res, "adjoint_residual", max(adjoint.values()), SYMMETRY_TOL)
    _check(res, "conjugation_involution", conjugation(I, M.grid).involution_residual(), INVOLUTION_TOL)
    shift = compressed_shift(I, M.grid)
    res["files"] = [run.write("matrix_Az.json", io.write_json, io.matrix_bundle(shift)),
                    run.write("matrix_Az.csv", io.write_matrix_csv, shift.entries)]


def suite_tto_zero(run: Run, res: dict) -> None:
    I = run.I
    grid = run.basis_grid()
    rng = run.rng("tto-zero")
    count = run.cfg.trials("symbols")
    zero = [zero_symbol_residual(I, null_symbol(I, grid, rng)) for _ in range(count)]
    nonzero = [zero_symbol_residual(I, model_space_symbol(I, grid, rng)) for _ in range(count)]
    res["details"].update(grid_size=grid.size, count=count)
    _check(res, "null_symbol_norm", max(zero), ZERO_TOL)
    _check(res, "model_space_symbol_norm", min(nonzero), NONZERO_FLOOR, below=False)


def suite_tto_defect(run: Run, res: dict) -> None:
    I = run.I
    grid = run.basis_grid()
    rng = run.rng("tto-defect")
    syms = standard_symbols(grid, rng, run.cfg.trials("symbols"))
    ranks, resid = {}, {}
    for k, phi in syms.items():
        d = sarason_defect(I, phi)
        ranks[k] = d.rank
        resid[k] = d.residual
    res["details"].update(grid_size=grid.size, ranks=ranks)
    _check(res, "max_rank", max(ranks.values()), 2.5)
    _check(res, "reconstruction_residual", max(resid.values()), DEFECT_TOL)


def suite_ni_build(run: Run, res: dict) -> None:
    try:
        M = run.space()
    except MslabError as exc:
        res["error"] = {"type": type(exc).__name__, "message": str(exc)}
        res["checks"]["built"] = False
        return
    res["checks"]["built"] = True
    iso = isometry_residual(M)
    resid = {"isometry": iso, "g_leakage": M.g.leakage, "pair_defect": M.pair.defect()}
    res["details"].update(grid_size=M.grid.size, g_zero=M.g0, g_norm=M.g.norm(),
                          denominator_min=M.denominator_min, dimension=M.dimension,
                          rotation=[M.rotation.real, M.rotation.imag])
    _check(res, "isometry_residual", iso, ISOMETRY_TOL)
    _check(res, "pair_defect", resid["pair_defect"], 1e-8)
    io.write_space(run.out, M, resid)
    files = ["space.json", "space_a_samples.csv", "space_b_samples.csv"]
    run.files.extend(files)
    files.append(run.write("g_samples.csv", io.write_samples_csv, M.g.source))
    res["files"] = files


def suite_ni_verify(run: Run, res: dict) -> None:
    M = run.space()
    rng = run.rng("ni-verify")
    n, grid = M.dimension, M.grid
    pts = grid.points
    res["details"]["grid_size"] = grid.size

    # projection: idempotent, self-adjoint, kills conj(H^2_0) and conj(g)^-1 I H^2
    idem, adj, kill_bar, kill_I = 0.0, 0.0, 0.0, 0.0
    gmin = float(np.min(np.abs(M.g.samples)))
    for _ in range(10):
        f = BoundaryFunction(grid, rng.normal(size=grid.size) + 1j * rng.normal(size=grid.size))
        h = BoundaryFunction(grid, rng.normal(size=grid.size) + 1j * rng.normal(size=grid.size))
        cf, ch = project_M(M, f), project_M(M, h)
        idem = max(idem, float(np.linalg.norm(project_M(M, M.element(cf)) - cf)) / f.norm())
        lhs = np.vdot(M.element(ch).samples, f.samples) / grid.size
        rhs = np.vdot(h.samples, M.element(cf).samples) / grid.size
        adj = max(adj, abs(lhs - rhs) / (f.norm() * h.norm()))
        p = np.polyval(rng.normal(size=6) + 1j * rng.normal(size=6), pts)
        bar = BoundaryFunction(grid, np.conj(pts * p))
        kill_bar = max(kill_bar, float(np.linalg.norm(project_M(M, bar))) / bar.norm())
        if gmin > 1e-3:
            ih = BoundaryFunction(grid, M.inner(pts) * p / np.conj(M.g.samples))
            kill_I = max(kill_I, float(np.linalg.norm(project_M(M, ih))) / ih.norm())
    _check(res, "projection_idempotence", idem, PROJECTION_TOL)
    _check(res, "projection_selfadjointness", adj, PROJECTION_TOL)
    _check(res, "annihilates_conj_H2_0", kill_bar, PROJECTION_TOL)
    if gmin > 1e-3:
        _check(res, "annihilates_IH2_complement", kill_I, PROJECTION_TOL)

    # reproducing kernel of M
    worst = 0.0
    for lam in random_disk_points(rng, 10, 0.9):
        kM = kernel_M_samples(M, lam)
        for _ in range(10):
            c = rng.normal(size=n) + 1j * rng.normal(size=n)
            f = M.element(c)
            inner_val = np.vdot(kM.samples, f.samples) / grid.size
            worst = max(worst, abs(inner_val - M.element_at(c, lam)) / f.norm())
    _check(res, "reproducing_residual", worst, REPRODUCING_TOL)
    lam = complex(random_disk_points(rng, 1, 0.9)[0])
    _check(res, "kernel_norm_residual",
           abs(kernel_M_samples(M, lam).norm() ** 2 - kernel_M_norm_sq(M, lam)) / max(1.0, kernel_M_norm_sq(M, lam)),
           REPRODUCING_TOL)

    # conjugation C_g and transported rank-one operators
    cg = conjugation_g(M)
    _check(res, "conjugation_g_involution", cg.involution_residual(), INVOLUTION_TOL)
    _check(res, "conjugation_g_direct", opnorm(cg.matrix - conjugation_g_direct(M)), TRANSPORT_TOL)
    transport = 0.0
    zeta = complex(np.exp(2j * np.pi * rng.uniform()))
    lam = complex(random_disk_points(rng, 1, 0.8)[0])
    for kind, point in (("boundary", zeta), ("kCk", lam), ("Ckk", lam)):
        transport = max(transport, opnorm(rank_one_M(M, kind, point).entries - rank_one_M_direct(M, kind, point)))
    _check(res, "rank_one_transport", transport, TRANSPORT_TOL)

    # tails Q_N
    c = rng.normal(size=n) + 1j * rng.normal(size=n)
    tails = [q_tail(M, N, c) for N in range(0, 2 * n + 2)]
    op_tails = [float(np.linalg.norm(q_tail_operator(M, N) @ c)) for N in range(0, 2 * n + 2)]
    res["details"]["q_tail"] = tails
    _check(res, "q_tail_vs_operator", max(abs(a - b) for a, b in zip(tails, op_tails)), TAIL_TOL * max(1.0, tails[0]))
    _check(res, "q_tail_increase", max(0.0, max(b - a for a, b in zip(tails, tails[1:]))), TAIL_TOL)

    ext = extremality_check(M, run.cfg.trials("extremality"), run.cfg.seed)
    res["details"]["extremality"] = {"trials": ext.trials, "g0": ext.g0, "max_re_f0": ext.max_re_f0,
                                     "violations": ext.violations}
    _check(res, "extremality_violations", ext.violations, 0.5)
    res["checks"]["extremality_attained_by_g"] = ext.attained_by_g


def _probe_rows(sweep, values):
    for k in range(sweep.points.shape[0]):
        for i, r in enumerate(sweep.depths):
            yield r, k, sweep.points[k, i], values[k, i]


def suite_probe_adc(run: Run, res: dict) -> None:
    cfg, I = run.cfg, run.I
    verdicts = {}
    files = []
    for alpha in cfg.apertures:
        v = adc_probe(I, cfg.zeta, alpha, cfg.depths, cfg.rays)
        verdicts[str(alpha)] = {"bounded": v.bounded, "sup_norm_sq": v.sup_norm_sq,
                                "growth_per_decade": v.growth_per_decade,
                                "growth_exponent_estimate": v.growth_exponent_estimate}
        sweep = stolz_sample(StolzRegion(cfg.zeta, alpha), cfg.rays, cfg.depths)
        norms = np.asarray([s[1] for s in v.samples]).reshape(sweep.points.shape)
        files.append(run.write(f"probe_adc_alpha{alpha:g}.csv", io.write_probe_csv, _probe_rows(sweep, norms)))
    bounded = {d["bounded"] for d in verdicts.values()}
    res["details"]["verdicts"] = verdicts
    res["details"]["bounded"] = bounded.pop() if len(bounded) == 1 else None
    res["checks"]["aperture_consistent"] = res["details"]["bounded"] is not None
    if I.is_finite_blaschke:
        res["checks"]["finite_blaschke_bounded"] = res["details"]["bounded"] is True
    if I.is_finite_blaschke and I.degree and I.vanishes_at_origin:
        try:
            M = run.space()
        except MslabError as exc:
            res["details"]["mntl"] = {"skipped": f"{type(exc).__name__}: {exc}"}
        else:
            m = mntl_check(M, cfg.zeta, cfg.apertures, cfg.depths, cfg.rays)
            res["details"]["mntl"] = {"g_limit": m.cond1.to_dict(), "kernel_bounded": m.cond2,
                                      "growth_per_decade": m.growth_per_decade, "sup_norm_sq": m.sup_norm_sq}
            # a bounded I-probe together with a limit of g forces bounded M-kernels
            if res["details"]["bounded"] and m.cond1.converged and abs(m.cond1.value) > 0:
                res["checks"]["mntl_consistent"] = m.cond2
    res["files"] = files


def suite_probe_dichotomy(run: Run, res: dict) -> None:
    cfg = run.cfg
    M = run.space()
    rep = dichotomy_classify(M, cfg.zeta, cfg.apertures, cfg.depths, cfg.rays)
    res["details"].update(rep.to_dict())
    res["details"]["grid_size"] = M.grid.size
    res["checks"]["decided"] = rep.branch != "inconclusive"
    files = []
    for alpha in cfg.apertures:
        sweep = stolz_sample(StolzRegion(cfg.zeta, alpha), cfg.rays, cfg.depths)
        norms = kernel_M_norm_sq(M, sweep.points)
        files.append(run.write(f"probe_dichotomy_alpha{alpha:g}.csv", io.write_probe_csv, _probe_rows(sweep, norms)))
    res["files"] = files


def suite_oscillating(run: Run, res: dict) -> None:
    pair = run.cfg.pair
    ex = paper_example(pair["n1"], pair["n2"], run.I, grid=run.cfg.grid)
    run._space = ex.space
    table = ex.table()
    res["details"].update(grid_size=ex.space.grid.size, delta=ex.delta, delta_grid=list(ex.delta_grid),
                          a_range=list(ex.a_range), oscillation=[_row_json(r) for r in table])
    res["residuals"].update(pair_defect=ex.pair_defect, identity_residual=ex.identity_residual)
    res["thresholds"].update(pair_defect={"max": 1e-8}, identity_residual={"max": 1e-8})
    res["checks"].update(ex.checks)
    res["files"] = [run.write("oscillation.csv", _write_oscillation, table)]


def _row_json(row: dict) -> dict:
    return {k: [v.real, v.imag] if isinstance(v, complex) else v for k, v in row.items()}


def _write_oscillation(path, table) -> None:
    header = ["n", "lambda", "in_lambda1", "g_re", "g_im", "a_re", "a_im", "abs_g_minus_half", "abs_quarter_B1"]
    rows = ([r["n"], repr(r["lambda"]), int(r["in_lambda1"]), repr(r["g"].real), repr(r["g"].imag),
             repr(r["a"].real), repr(r["a"].imag), repr(abs(r["g_minus_half"])), repr(abs(r["quarter_B1"]))]
            for r in table)
    io._write_rows(path, header, rows)


SUITE_FUNCS = {
    "gram": suite_gram,
    "tto-verify": suite_tto_verify,
    "tto-zero": suite_tto_zero,
    "tto-defect": suite_tto_defect,
    "ni-build": suite_ni_build,
    "ni-verify": suite_ni_verify,
    "probe-adc": suite_probe_adc,
    "probe-dichotomy": suite_probe_dichotomy,
    "paper-example": suite_oscillating,
}


def run(config_path, out_dir, seed: int | None = None, grid: int | None = None) -> int:
    """Execute the configured suites; returns the process exit code."""
    started = time.perf_counter()
    try:
        cfg = load_config(config_path, seed=seed, grid=grid)
        out = Path(out_dir)
        r = Run(cfg, out)
        r.load_samples()
        if cfg.grid and cfg.inner.is_finite_blaschke and cfg.inner.degree:
            need = tm_basis(cfg.inner).min_grid
            if cfg.grid < need:
                raise ConfigError(f"grid {cfg.grid} is below the policy minimum {need} for this inner function")
        out.mkdir(parents=True, exist_ok=True)
    except ConfigError as exc:
        print(f"mslab: invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"mslab: cannot use output directory {out_dir}: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    suites = {}
    for name in cfg.suites:
        t0 = time.perf_counter()
        res = _new_result()
        try:
            SUITE_FUNCS[name](r, res)
        except (MslabError, np.linalg.LinAlgError, FloatingPointError) as exc:
            res["error"] = {"type": type(exc).__name__, "message": str(exc)}
        res["passed"] = "error" not in res and all(res["checks"].values())
        res["wall_time_s"] = time.perf_counter() - t0
        suites[name] = res
        logger.info("%s: %s", name, "pass" if res["passed"] else "FAIL")

    passed = all(s["passed"] for s in suites.values())
    resolved = {"backend": kernels.BACKEND}
    try:
        resolved["policy_grid"] = tm_basis(cfg.inner).min_grid
    except MslabError:
        resolved["policy_grid"] = None
    if r._space is not None:
        resolved["space_grid"] = r._space.grid.size
    report = {
        "mslab_version": __version__,
        "config": cfg.raw,
        "seed": cfg.seed,
        "resolved": resolved,
        "suites": suites,
        "files": sorted(set(r.files)),
        "passed": passed,
        "exit_code": EXIT_OK if passed else EXIT_FAILED,
        "wall_time_s": time.perf_counter() - started,
    }
    io.write_json(out / "report.json", report)
    for name, res in suites.items():
        line = "PASS" if res["passed"] else "FAIL"
        extra = f"  ({res['error']['type']}: {res['error']['message']})" if "error" in res else ""
        print(f"{line}  {name}{extra}")
    return report["exit_code"]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="mslab", description="Model-space and nearly invariant subspace experiments.")
    parser.add_argument("--version", action="version", version=f"mslab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", help="run the suites selected in a config file")
    p.add_argument("--config", required=True, help="JSON experiment config")
    p.add_argument("--out", required=True, help="output directory for report.json and CSV tables")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.add_argument("--grid", type=int, default=None, help="force the circle grid size (power of two)")
    p.add_argument("-v", "--verbose", action="store_true")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    return run(args.config, args.out, seed=args.seed, grid=args.grid)


if __name__ == "__main__":
    sys.exit(main())
