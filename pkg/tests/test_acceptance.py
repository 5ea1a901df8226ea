"""Acceptance criteria 1-14, one test each, at the stated tolerances.

Each test prints a single ``[AC nn] PASS|FAIL`` line (outside pytest's
capture) with the measured worst case and wall time.
"""
import math
import time

import numpy as np
import pytest

from mslab import InnerFunction
from mslab.boundary import BoundaryFunction, HardyEvaluator, tail_norm
from mslab.disk import geometric_depths
from mslab.inner import adc_probe, kernel_norm_sq
from mslab.model_space import kernel_eval, tm_basis
from mslab.nearly_invariant import (
    build_resolved_space,
    build_space,
    conjugation_g,
    constant_pair,
    extremality_check,
    inner_pair,
    kernel_M_samples,
    project_M,
    q_tail,
    q_tail_operator,
    rank_one_M,
    rank_one_M_direct,
    spatial_isomorphism_residual,
    trivial_pair,
)
from mslab.probe import (
    ADC_THRESHOLD,
    NM_THRESHOLD,
    dichotomy_classify,
    growth_bound_check,
    paper_example,
    oscillating_space,
    vanishing_space,
)
from mslab.symbols import (
    boundary_points,
    model_space_symbol,
    null_symbol,
    random_blaschke,
    random_disk_points,
    standard_symbols,
    trig_polynomial,
)
from mslab.toeplitz import (
    complex_symmetry_residual,
    compressed_shift,
    conjugation,
    rank_one,
    sarason_defect,
    zero_symbol_residual,
)

pytestmark = pytest.mark.acceptance

EDGE = 0.99609375


@pytest.fixture
def verdict(capsys):
    start = time.perf_counter()

    def emit(number, title, ok, detail="", budget=None):
        elapsed = time.perf_counter() - start
        ok = bool(ok) and (budget is None or elapsed < budget)
        limit = f" / {budget:g}s" if budget else ""
        with capsys.disabled():
            print(f"\n[AC {number:02d}] {'PASS' if ok else 'FAIL'}  {title}: {detail}  ({elapsed:.2f}s{limit})")
        assert ok, f"criterion {number} failed: {detail}"

    return emit


@pytest.fixture(scope="module")
def oscillating():
    return oscillating_space(2, 4)


@pytest.fixture(scope="module")
def trivial_space():
    I = InnerFunction.blaschke([0, 0.5, -0.3 + 0.6j, 0.8j])
    return build_space(I, trivial_pair(tm_basis(I).default_grid()))


def _cnormal(rng, *shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def test_ac01_orthonormality(verdict):
    rng = np.random.default_rng(1)
    worst, sizes = 0.0, set()
    for degree in range(2, 11):
        zeros = list(random_disk_points(rng, degree - 1, EDGE))
        zeros.append(EDGE * np.exp(2j * np.pi * rng.uniform()))
        basis = tm_basis(InnerFunction.blaschke(zeros))
        grid = basis.default_grid()
        sizes.add(grid.size)
        worst = max(worst, float(np.max(np.abs(basis.gram(grid) - np.eye(degree)))))
    verdict(1, "TM Gram deviation, degrees 2..10", worst < 1e-10, f"max {worst:.2e} < 1e-10 on N={sorted(sizes)}", 5)


def test_ac02_reproducing_property(verdict, oscillating):
    rng = np.random.default_rng(2)
    I = random_blaschke(rng, 6, 0.95)
    basis = tm_basis(I)
    grid = basis.default_grid()
    lam = random_disk_points(rng, 20, 0.95)
    coeffs = _cnormal(rng, 100, basis.degree)
    f_samples = coeffs @ basis.table(grid)
    kern = np.stack([kernel_eval(I, l, grid.points) for l in lam])
    inner = f_samples @ kern.conj().T / grid.size
    exact = coeffs @ basis(lam)
    norms = np.linalg.norm(coeffs, axis=1)[:, None]
    worst_I = float(np.max(np.abs(inner - exact) / norms))

    M = oscillating
    lam = random_disk_points(rng, 20, 0.95)
    coeffs = _cnormal(rng, 100, M.dimension)
    f_samples = coeffs @ M.m_table
    kern = np.stack([kernel_M_samples(M, l).samples for l in lam])
    inner = f_samples @ kern.conj().T / M.grid.size
    exact = np.stack([M.element_at(c, lam) for c in coeffs])
    norms = np.sqrt(np.mean(np.abs(f_samples) ** 2, axis=1))[:, None]
    worst_M = float(np.max(np.abs(inner - exact) / norms))
    ok = worst_I < 1e-9 and worst_M < 1e-9
    verdict(2, "reproducing kernels, 100 f x 20 lambda", ok, f"K_I {worst_I:.2e}, M {worst_M:.2e} (< 1e-9 ||f||)", 10)


def test_ac03_projection(verdict, oscillating, trivial_space):
    rng = np.random.default_rng(3)
    worst = {}
    for name, M in (("oscillating", oscillating), ("trivial", trivial_space)):
        grid, pts = M.grid, M.grid.points
        idem = adj = bar = comp = 0.0
        for _ in range(10):
            f = BoundaryFunction(grid, _cnormal(rng, grid.size))
            h = BoundaryFunction(grid, _cnormal(rng, grid.size))
            cf, ch = project_M(M, f), project_M(M, h)
            idem = max(idem, np.linalg.norm(project_M(M, M.element(cf)) - cf) / f.norm())
            lhs = np.vdot(M.element(ch).samples, f.samples) / grid.size
            rhs = np.vdot(h.samples, M.element(cf).samples) / grid.size
            adj = max(adj, abs(lhs - rhs) / (f.norm() * h.norm()))
            p = np.polyval(_cnormal(rng, 8), pts)
            anti = BoundaryFunction(grid, np.conj(pts * p))
            bar = max(bar, np.linalg.norm(project_M(M, anti)) / anti.norm())
            # conj(g) f in I H^2: the part of H^2 that M does not see
            ih = BoundaryFunction(grid, M.inner(pts) * p / np.conj(M.g.samples))
            comp = max(comp, np.linalg.norm(project_M(M, ih)) / ih.norm())
        worst[name] = max(idem, adj, bar, comp)
    ok = max(worst.values()) < 1e-8
    verdict(3, "P_M idempotent, self-adjoint, kills conj(H^2_0) and I H^2 complement", ok,
            ", ".join(f"{k} {v:.2e}" for k, v in worst.items()) + " (< 1e-8)")


def test_ac04_spatial_isomorphism(verdict, oscillating, trivial_space):
    rng = np.random.default_rng(4)
    worst = {}
    for name, M in (("trivial", trivial_space), ("oscillating(2,4)", oscillating)):
        syms = standard_symbols(M.grid, rng, 5, 3)
        worst[name] = max(spatial_isomorphism_residual(M, phi) for phi in syms.values())
    ok = max(worst.values()) < 1e-6
    verdict(4, "A^M_phi = U_g A_{|g|^2 phi} U_g*", ok, ", ".join(f"{k} {v:.2e}" for k, v in worst.items()) + " (< 1e-6)", 20)


def test_ac05_zero_symbols(verdict):
    rng = np.random.default_rng(5)
    zero, nonzero = [], []
    for _ in range(20):
        I = random_blaschke(rng, int(rng.integers(2, 9)))
        grid = tm_basis(I).default_grid()
        zero.append(zero_symbol_residual(I, null_symbol(I, grid, rng)))
        nonzero.append(zero_symbol_residual(I, model_space_symbol(I, grid, rng)))
    ok = max(zero) < 1e-8 and min(nonzero) > 0.1
    verdict(5, "A_phi = 0 iff phi in I H^2 + conj(I H^2)", ok,
            f"null symbols max {max(zero):.2e} (< 1e-8), K_I symbols min {min(nonzero):.3f} (> 0.1)")


def test_ac06_complex_symmetry(verdict, oscillating):
    rng = np.random.default_rng(6)
    sym, invol = 0.0, 0.0
    for j in range(20):
        I = random_blaschke(rng, 2 + j % 7)
        grid = tm_basis(I).default_grid()
        sym = max(sym, complex_symmetry_residual(I, trig_polynomial(grid, rng, 4)))
        invol = max(invol, conjugation(I, grid).involution_residual())
    invol_g = conjugation_g(oscillating).involution_residual()
    ok = sym < 1e-8 and invol < 1e-10 and invol_g < 1e-10
    verdict(6, "C A_phi C = A_phi*, C^2 = C_g^2 = id", ok,
            f"symmetry {sym:.2e} (< 1e-8), C {invol:.2e}, C_g {invol_g:.2e} (< 1e-10)")


def test_ac07_sarason_defect(verdict):
    rng = np.random.default_rng(7)
    max_rank, worst = 0, 0.0
    for _ in range(200):
        I = random_blaschke(rng, int(rng.integers(2, 9)), 0.9)
        phi = trig_polynomial(tm_basis(I).default_grid(), rng, int(rng.integers(1, 6)))
        d = sarason_defect(I, phi)
        max_rank = max(max_rank, d.rank)
        worst = max(worst, d.residual)
    ok = max_rank <= 2 and worst < 1e-8
    verdict(7, "A - A_z A A_z* = phi1 (x) k_0 + k_0 (x) phi2, 200 instances", ok,
            f"max rank {max_rank} (<= 2), residual {worst:.2e} (< 1e-8)")


def test_ac08_rank_one(verdict, oscillating):
    rng = np.random.default_rng(8)
    sa, adj = 0.0, 0.0
    for _ in range(20):
        I = random_blaschke(rng, int(rng.integers(2, 8)))
        zeta = complex(boundary_points(rng, 1)[0])
        lam = complex(random_disk_points(rng, 1, 0.9)[0])
        b = rank_one(I, "boundary", zeta).entries
        sa = max(sa, float(np.max(np.abs(b - b.conj().T))))
        kck, ckk = rank_one(I, "kCk", lam).entries, rank_one(I, "Ckk", lam).entries
        adj = max(adj, float(np.max(np.abs(kck.conj().T - ckk))))
    M = oscillating
    transport = 0.0
    for _ in range(5):
        zeta = complex(boundary_points(rng, 1)[0])
        lam = complex(random_disk_points(rng, 1, 0.9)[0])
        for kind, point in (("boundary", zeta), ("kCk", lam), ("Ckk", lam)):
            transport = max(transport, float(np.max(np.abs(rank_one_M(M, kind, point).entries
                                                           - rank_one_M_direct(M, kind, point)))))
    ok = sa < 1e-10 and adj < 1e-10 and transport < 1e-8
    verdict(8, "rank-one truncated Toeplitz operators", ok,
            f"self-adjoint {sa:.2e}, adjoint pair {adj:.2e} (< 1e-10), U_g transport {transport:.2e} (< 1e-8)")


def test_ac09_ahern_clark(verdict):
    rng = np.random.default_rng(9)
    flags = []
    for zeta in boundary_points(rng, 20):
        I = random_blaschke(rng, int(rng.integers(1, 9)), 0.95, origin=False)
        flags.append(adc_probe(I, zeta).bounded)
    s = 1.0
    atom = InnerFunction.atom(1.0, s)
    v = adc_probe(atom, 1.0)
    r = geometric_depths(0.5, 40)
    closed = -np.expm1(-2 * s * (1 + r) / (1 - r)) / ((1 - r) * (1 + r))
    rel = float(np.max(np.abs(kernel_norm_sq(atom, r) - closed) / closed))
    ok = all(flags) and not v.bounded and abs(v.growth_exponent_estimate - 1) <= 0.1 and rel < 1e-10
    verdict(9, "kernel-norm probe", ok,
            f"Blaschke bounded {sum(flags)}/20, atom bounded={v.bounded} exponent {v.growth_exponent_estimate:.4f} "
            f"(1 +- 0.1), closed-form rel err {rel:.2e} (< 1e-10)")


def test_ac10_tail_identities(verdict, oscillating):
    rng = np.random.default_rng(10)
    worst = 0.0
    for _ in range(10):
        I = random_blaschke(rng, int(rng.integers(2, 8)))
        basis = tm_basis(I)
        grid = basis.default_grid()
        adjoint = compressed_shift(I, grid).entries.conj().T
        c = _cnormal(rng, basis.degree)
        f = BoundaryFunction(grid, c @ basis.table(grid))
        v = c.copy()
        for N in range(0, 3 * basis.degree):
            worst = max(worst, abs(float(np.linalg.norm(v)) - tail_norm(f, N)) / f.norm())
            v = adjoint @ v
    M = oscillating
    match, rises = 0.0, 0.0
    for _ in range(10):
        c = _cnormal(rng, M.dimension)
        tails = [q_tail(M, N, c) for N in range(40)]
        ops = [float(np.linalg.norm(q_tail_operator(M, N) @ c)) for N in range(40)]
        match = max(match, max(abs(a - b) for a, b in zip(tails, ops)) / np.linalg.norm(c))
        rises = max(rises, max(b - a for a, b in zip(tails, tails[1:])))
    ok = worst < 1e-9 and match < 1e-9 and rises <= 1e-12
    verdict(10, "||A_zbar^N f|| = Fourier tail; Q_N = U_g A_zbar^N U_g*", ok,
            f"K_I {worst:.2e}, Q_N {match:.2e} (< 1e-9), largest increase {rises:.1e}")


@pytest.mark.parametrize("n1, n2", [(1, 2), (2, 4), (4, 8)])
def test_ac11_oscillating_example(verdict, n1, n2):
    ex = paper_example(n1, n2)
    bad = [k for k, ok in ex.checks.items() if not ok]
    drift = abs(ex.delta_grid[0] - ex.delta_grid[1]) / ex.delta
    verdict(11, f"oscillating extremal function ({n1},{n2})", ex.ok,
            f"N={ex.space.grid.size}, delta {ex.delta:.10g}, grid drift {drift:.1e}, |a| in "
            f"[{ex.a_range[0]:.4f}, {ex.a_range[1]:.4f}], pair {ex.pair_defect:.1e}, g=a {ex.identity_residual:.1e}"
            + (f", failed {bad}" if bad else ""), 60)


def test_ac12_growth_bound(verdict):
    rng = np.random.default_rng(12)
    I = random_blaschke(rng, 8, 0.9)
    basis = tm_basis(I)
    grid = basis.default_grid()
    worst = 0.0
    for j in range(20):
        c = _cnormal(rng, basis.degree)
        f = HardyEvaluator(BoundaryFunction(grid, c @ basis.table(grid)), interior=lambda z, c=c: c @ basis(z))
        worst = max(worst, growth_bound_check(f, 1000, seed=j).max_ratio)
    eq = 0.0
    for lam in random_disk_points(rng, 10, 0.95):
        k = HardyEvaluator.from_callable(grid, lambda z, lam=lam: kernel_eval(I, lam, z))
        kz = growth_bound_check(k, points=[lam]).max_ratio
        # |k(lam)| sqrt(1-|lam|^2) / ||k|| = ||k_lam^I|| sqrt(1 - |lam|^2) <= 1, equality for the Szego kernel
        expected = math.sqrt(kernel_norm_sq(I, lam) * (1 - abs(lam) ** 2))
        eq = max(eq, abs(kz - expected))
    szego = HardyEvaluator.from_callable(2048, lambda z: 1 / (1 - 0.9 * z))
    eq = max(eq, abs(growth_bound_check(szego, points=[0.9]).max_ratio - 1.0))
    ok = worst <= 1 + 1e-9 and eq < 1e-9
    verdict(12, "|f(z)| sqrt(1-|z|^2) <= ||f||", ok, f"max ratio {worst:.12f} (<= 1+1e-9), equality case {eq:.1e}")


def _random_space(rng, zeta):
    kind = rng.integers(0, 3)
    I = random_blaschke(rng, int(rng.integers(1, 5)), 0.8)
    if kind == 0:
        return build_resolved_space(I, trivial_pair), "trivial"
    if kind == 1:
        t = rng.uniform(0.2, 1.2)
        return build_resolved_space(I, lambda g: constant_pair(g, np.cos(t), np.exp(1j * rng.uniform(0, 6)) * np.sin(t))), "constant"
    J = random_blaschke(rng, int(rng.integers(1, 3)), 0.7, origin=False)
    return build_resolved_space(I, lambda g: inner_pair(g, J)), "inner"


def test_ac13_dichotomy(verdict):
    I = InnerFunction.monomial(2)
    trivial = dichotomy_classify(build_resolved_space(I, trivial_pair), 1.0)
    vanishing = dichotomy_classify(vanishing_space(I, 1.0, 0.6), 1.0)
    rng = np.random.default_rng(13)
    consistent, branches = 0, {}
    for j in range(50):
        zeta = complex(boundary_points(rng, 1)[0])
        if j % 10 == 9:
            M, kind = vanishing_space(random_blaschke(rng, 2, 0.8), zeta, float(rng.uniform(0.9, 1.5))), "vanishing"
        else:
            M, kind = _random_space(rng, zeta)
        rep = dichotomy_classify(M, zeta)
        L = abs(rep.g_limit.value)
        in_adc = rep.g_limit.converged and L > ADC_THRESHOLD
        in_nm = rep.g_limit.converged and L <= NM_THRESHOLD
        ok = not (in_adc and in_nm)
        ok &= rep.branch != "ADC_branch" or in_adc
        ok &= rep.branch != "NM_branch" or (in_nm and rep.evidence["kernel_vanishing"])
        consistent += ok
        branches[rep.branch] = branches.get(rep.branch, 0) + 1
    ok = (trivial.branch == "ADC_branch" and vanishing.branch == "NM_branch"
          and vanishing.evidence["kernel_vanishing"] and consistent == 50)
    verdict(13, "dichotomy ADC / N^M", ok,
            f"trivial -> {trivial.branch}, vanishing g -> {vanishing.branch} "
            f"(kernel vanishing {vanishing.evidence.get('kernel_vanishing')}), "
            f"exclusive on {consistent}/50 random configs {dict(sorted(branches.items()))}")


def test_ac14_extremality(verdict, oscillating, trivial_space):
    I = InnerFunction.blaschke([0, 0.4 - 0.3j])
    spaces = {
        "trivial": trivial_space,
        "oscillating(2,4)": oscillating,
        "constant": build_resolved_space(I, lambda g: constant_pair(g, 0.6, 0.8j)),
        "vanishing": vanishing_space(InnerFunction.monomial(2), 1.0, 1.0),
    }
    reports = {k: extremality_check(M, 1000, seed=14) for k, M in spaces.items()}
    ok = all(r.ok for r in reports.values())
    verdict(14, "Re f(0) <= g(0) on the unit sphere of M, attained by g", ok,
            ", ".join(f"{k}: {r.violations} violations, max {r.max_re_f0:.6f} <= g(0) {r.g0:.6f}"
                      for k, r in reports.items()))
