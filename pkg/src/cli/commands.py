"""各子命令的计算部分，返回待写出的 Table"""

import math
from itertools import product

import numpy as np

from ..core.distributions import DeltaPlusRegular
from ..core.errors import ConfigError
from ..core.utils import logger, run_scan
from ..numerics.quadrature import integrate_interval, uniform_midpoint_grid
from ..physics.appendix_checks import (
    MOLLIFIERS,
    asymmetric_cutoff,
    averaged_delta_coefficient,
    mollifier_half_delta,
    singular_kernel,
    truncated_energy_model,
)
from ..physics.exact_model import bound_state, bound_wavefunction
from ..physics.planewave import (
    BasisSpec,
    basis_bound_state,
    basis_wavefunction,
    regularize,
    renormalized_basis_density,
    solve_basis,
    vp_momentum_density,
    vp_position_density,
)
from ..physics.qed_shift import inverse_c_params, total_shift
from ..physics.vacuum_density import (
    charge_summary,
    observed_charge,
    renormalized_density,
    total_momentum_density,
    total_position_density,
    uehling_momentum_density,
    uehling_position_density,
)
from .schemas import RunConfig
from .writer import Table, rows_from_columns

DENSITY_KINDS = ("uehling_exact", "total_exact", "renormalized_exact", "basis", "basis_regularized")
APPENDIX_KINDS = ("a", "b", "c", "d")


def _first_basis(config: RunConfig) -> BasisSpec:
    return BasisSpec(L=config.L[0], Lambda=config.Lambda[0])


def cmd_bound_state(config: RunConfig) -> Table:
    """基组束缚态能量随 (L, Λ) 的收敛"""
    params = config.params
    params.require_bound()
    params.require_subcritical()
    exact = bound_state(params).energy
    points = sorted(product(config.L, config.Lambda))
    # 先校验所有扫描点，再开始计算
    bases = [BasisSpec(L=L, Lambda=Lambda) for L, Lambda in points]

    def evaluate(basis: BasisSpec) -> tuple:
        bound = basis_bound_state(solve_basis(params, basis), params, basis)
        return (basis.L, basis.Lambda, basis.n_max, bound.energy, bound.energy - exact)

    rows = run_scan(evaluate, bases, "束缚态能量扫描")
    return Table(["L", "Lambda", "n_max", "energy", "error_vs_exact"], rows, {"exact_energy": exact})


def _exact_momentum_table(config: RunConfig, which: str) -> Table:
    params = config.params
    k = np.linspace(0.0, config.k_max, config.grid_points)
    if which == "uehling_exact":
        matrix = uehling_momentum_density(params, k)
    else:
        params.require_subcritical()
        matrix = total_momentum_density(params, k, config.quad_spec)
    trace = np.trace(matrix, axis1=-2, axis2=-1).real
    return Table(["k", "value"], rows_from_columns(k, trace))


def _position_table(density: DeltaPlusRegular, meta: dict | None = None) -> Table:
    meta = {"delta_coeff": density.delta_coeff, **(meta or {})}
    return Table(["x", "value"], rows_from_columns(density.grid.points, density.values), meta)


def cmd_density(config: RunConfig, which: str) -> Table:
    """真空极化密度：精确 (Uehling / 全阶 / 重整化) 或基组 (原始 / 正则化)"""
    if which not in DENSITY_KINDS:
        raise ConfigError(f"未知的密度类型 '{which}'，可选 {', '.join(DENSITY_KINDS)}")
    params = config.params
    spec = config.quad_spec

    if which.endswith("_exact"):
        if config.momentum:
            if which == "renormalized_exact":
                raise ConfigError("重整化密度没有单独的动量输出，请使用 total_exact")
            return _exact_momentum_table(config, which)
        grid = uniform_midpoint_grid(config.x_max, config.grid_points)
        if which == "uehling_exact":
            return _position_table(uehling_position_density(params, grid, spec=spec))
        if which == "total_exact":
            return _position_table(total_position_density(params, grid, spec=spec))
        return _position_table(renormalized_density(params, grid, spec=spec))

    basis = _first_basis(config)
    density = vp_momentum_density(params, basis)
    meta: dict = {"L": basis.L, "Lambda": basis.Lambda, "n_max": basis.n_max}
    if which == "basis_regularized":
        regularized = regularize(density)
        density = regularized.density
        meta |= {"k_max": regularized.k_max, "n_reg": regularized.n_reg}

    if config.momentum:
        half = density.j >= 0
        return Table(["k", "value"], rows_from_columns(density.k[half], density.trace[half]), meta)

    grid = uniform_midpoint_grid(min(config.x_max, basis.L / 2), config.grid_points)
    if which == "basis_regularized":
        return _position_table(renormalized_basis_density(regularized, grid), meta)
    values = vp_position_density(density, grid.points)
    return _position_table(DeltaPlusRegular(0.0, grid, values), meta)


def cmd_lamb_shift(config: RunConfig) -> Table:
    """一阶真空极化能量修正；精确配对扫描 1/c，涉及基组时扫描 Λ"""
    tag = config.source.replace("-", "_")
    params = config.params
    spec = config.quad_spec
    params.require_bound()

    if tag == "exact" and config.vp in ("exact", "uehling"):
        inv_c = config.inv_c or [1 / config.c]

        def evaluate_c(value: float) -> tuple:
            shift = total_shift(tag, config.vp, inverse_c_params(params, value), spec=spec)
            return (value, shift.dc, shift.xc, shift.db, shift.xb, shift.total)

        rows = run_scan(evaluate_c, sorted(inv_c), "精确密度的能量修正扫描")
        return Table(["inv_c", "dc", "xc", "db", "xb", "total"], rows)

    if tag == "basis_improved" and config.vp == "raw":
        # 在任何对角化之前拒绝
        total_shift(tag, config.vp, params)
    bases = [BasisSpec(L=config.L[0], Lambda=Lambda) for Lambda in sorted(config.Lambda)]

    def evaluate_basis(basis: BasisSpec) -> tuple:
        shift = total_shift(tag, config.vp, params, basis, spec)
        return (basis.Lambda, shift.dc, shift.xc, shift.db, shift.xb, shift.total)

    rows = run_scan(evaluate_basis, bases, "基组能量修正扫描")
    return Table(["Lambda", "dc", "xc", "db", "xb", "total"], rows, {"L": config.L[0]})


def cmd_appendix(config: RunConfig, which: str) -> Table:
    """附录检验

    a: mollifier, epsilon, value (epsilon = 0 行为外推极限，测试函数 cos x)
    b: r, a, w_abs, det_ABCD, A, B
    c: epsilon, integral_f, recovered_coeff, target_coeff
    d: L, Lambda, n_max, eps_L_Lambda, eps_L_inf, asymptotic_term
    """
    params = config.params
    spec = config.quad_spec
    if which == "a":
        rows = []
        for name in MOLLIFIERS:
            result = mollifier_half_delta(math.cos, config.epsilon, name, spec)
            rows += [(name, e, v) for e, v in zip(result.epsilons, result.estimates)]
            rows.append((name, 0.0, result.limit))
        return Table(["mollifier", "epsilon", "value"], rows)
    if which == "b":
        rows = []
        for r in config.r:
            result = asymmetric_cutoff(params, r)
            rows.append((r, result.a, abs(result.w), result.det, result.A, result.B))
        return Table(["r", "a", "w_abs", "det_ABCD", "A", "B"], rows)
    if which == "c":
        integral_f = float(integrate_interval(singular_kernel, -1.0, 1.0, spec).value)
        target = params.Z / (math.pi * params.c)
        rows = [
            (e, integral_f, averaged_delta_coefficient(params, e, spec), target)
            for e in config.epsilon
        ]
        return Table(["epsilon", "integral_f", "recovered_coeff", "target_coeff"], rows)
    if which == "d":
        params.require_bound()
        rows = []
        for L, Lambda in sorted(product(config.L, config.Lambda)):
            model = truncated_energy_model(params, L, Lambda)
            rows.append(
                (L, Lambda, model.n_max, model.energy, model.energy_limit, model.asymptotic_error)
            )
        return Table(
            ["L", "Lambda", "n_max", "eps_L_Lambda", "eps_L_inf", "asymptotic_term"], rows
        )
    raise ConfigError(f"未知的附录 '{which}'，可选 {', '.join(APPENDIX_KINDS)}")


def cmd_charge_summary(config: RunConfig) -> Table:
    """电荷积分的闭式值与观测电荷 Z_obs(d)"""
    params = config.params
    params.require_subcritical()
    summary = charge_summary(params)
    distances = config.d or list(np.logspace(-3, 1, 9))
    rows = [(d, observed_charge(params, d, config.quad_spec)) for d in sorted(distances)]
    meta = {"N0": summary.N0, "Nreg": summary.Nreg, "Ntotal": summary.Ntotal, "Zren": summary.Zren}
    return Table(["d", "z_obs"], rows, meta)


def cmd_wavefunction(config: RunConfig) -> Table:
    """基组束缚态与精确束缚态的比较，小分量取虚部"""
    params = config.params
    basis = _first_basis(config)
    bound = basis_bound_state(solve_basis(params, basis), params, basis)
    grid = uniform_midpoint_grid(min(config.x_max, basis.L / 2), config.grid_points)
    approx = basis_wavefunction(bound, grid.points)
    # 本征向量的整体符号任意，按 x = 0 处大分量为正对齐
    if basis_wavefunction(bound, np.zeros(1))[0, 0].real < 0:
        approx = -approx
    exact = bound_wavefunction(params, grid.points)
    logger.info(f"基组束缚态能量 {bound.energy:.10f}")
    rows = rows_from_columns(
        grid.points, approx[:, 0].real, approx[:, 1].imag, exact[:, 0].real, exact[:, 1].imag
    )
    return Table(
        ["x", "large_basis", "small_basis", "large_exact", "small_exact"],
        rows,
        {"energy": bound.energy},
    )
