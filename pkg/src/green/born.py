"""
第二预解式恒等式的 Born 级数

    G = G⁰ - B(k) G   ⇒   G = Σ_n (-B(k))ⁿ G⁰(·, y)

每一阶在球壳网格上求值（可分离插值），下一阶对插值积分；
目标点上的各阶单独用同一求积规则计算，阶数 1 直接对解析源项积分。
"""
from typing import Callable, List, Optional, Sequence

import logging

import numpy as np

from ..core.exceptions import DivergenceError, DomainError, ParameterError
from ..core.types import ComplexWavenumber, ORIGIN, Point3
from ..fields.examples import build_bump_field
from ..fields.types import FieldKind, FieldSpec
from ..quadrature.shells import ShellField, ShellGrid, log_radii
from ..quadrature.types import QuadratureSpec
from .kernel import free_green, free_green_points
from .operator import apply_B, apply_B_many, newton_source, support_radius
from .types import BornSettings, GreenEvaluation, ResolventTable, SmallnessCalibration

logger = logging.getLogger("green.born")

# 未标定时的 C_cal；calibrate_smallness_constant 给出实测值
DEFAULT_C_CAL = 1.0


class BornSeries:
    """
    t_0 = source，t_n = -B(k) t_{n-1}

    run() 在网格上逐阶推进（每阶是一个同步点）；
    terms_at(x) 在任意目标点上给出 t_0(x), t_1(x), ...
    """

    def __init__(self, k: ComplexWavenumber, Q: FieldSpec,
                 source: Callable[[np.ndarray], np.ndarray],
                 source_center: Optional[np.ndarray] = None,
                 settings: Optional[BornSettings] = None,
                 tol: float = 1e-8, n_max: int = 30, C_cal: float = DEFAULT_C_CAL):
        k.require_resolvent()
        if Q.kind is not FieldKind.VECTOR:
            raise ParameterError("Born series expects the vector field Q")
        if n_max < 1:
            raise ParameterError(f"n_max must be >= 1, got {n_max}")
        self.k = k
        self.Q = Q
        self.source = source
        self.source_center = source_center
        self.settings = settings or BornSettings()
        self.tol = tol
        self.n_max = n_max
        self.C_cal = C_cal
        self.spec: QuadratureSpec = self.settings.quadrature
        self.grid_terms: List[ShellField] = []
        self.grid_orders: List[float] = []
        self.converged = Q.is_zero
        self._ran = False
        self.radius = 0.0 if Q.is_zero else support_radius(Q, k, self.settings.truncation_tol)

    @property
    def smallness_ratio(self) -> float:
        """m(Q)·C_cal/δ³"""
        return self.Q.envelope.m * self.C_cal / self.k.delta ** 3

    def _grid(self) -> ShellGrid:
        r_max = self.radius
        r_min = min(r_max, 1.0) / self.settings.grid_span
        return ShellGrid(radii=log_radii(r_min, r_max, self.settings.n_radii),
                         directions=self.settings.directions)

    def run(self) -> "BornSeries":
        """网格上推进到 n_max - 1 阶（目标点第 n 阶只用到网格第 n-1 阶）"""
        if self._ran or self.Q.is_zero:
            self._ran = True
            return self
        grid = self._grid()
        nodes = grid.points
        window = self.settings.growth_window
        for n in range(1, self.n_max):
            if n == 1:
                f, center = self.source, self.source_center
            else:
                f, center = self.grid_terms[-1], None
            values = -apply_B_many(self.k, self.Q, f, nodes, self.spec, center, self.radius)
            size = float(np.max(np.abs(values)))
            self.grid_terms.append(grid.sample(values))
            self.grid_orders.append(size)
            logger.info(f"Born order {n}: sup over grid = {size:.3e}")

            if size == 0.0 or size <= self.tol * self.grid_orders[0]:
                self.converged = True
                break
            recent = self.grid_orders[-(window + 1):]
            if len(recent) == window + 1 and all(b > a for a, b in zip(recent, recent[1:])):
                raise DivergenceError(
                    f"Born terms grew over {window} consecutive orders "
                    f"(smallness ratio {self.smallness_ratio:.3g})",
                    orders=self.grid_orders, partial=self,
                )
        self._ran = True
        return self

    def terms_at(self, x: Point3) -> List[complex]:
        """目标点上的各阶项，第 0 阶为源项本身"""
        self.run()
        xa = x.as_array()
        terms = [complex(np.asarray(self.source(xa[None, :]))[0])]
        if self.Q.is_zero:
            return terms
        reference = abs(terms[0])
        n_available = min(self.n_max, len(self.grid_terms) + 1)
        for n in range(1, n_available + 1):
            if n == 1:
                f, center = self.source, self.source_center
            else:
                f, center = self.grid_terms[n - 2], None
            term = -complex(apply_B(self.k, self.Q, f, x, self.spec, center, self.radius).value)
            terms.append(term)
            if abs(term) < self.tol * reference:
                break
        return terms

    def value_at(self, x: Point3) -> complex:
        return complex(sum(self.terms_at(x)))

    def target_converged(self, terms: Sequence[complex]) -> bool:
        if self.Q.is_zero or self.converged:
            return True
        return len(terms) > 1 and abs(terms[-1]) < self.tol * abs(terms[0])


def green_series(k: ComplexWavenumber, Q: FieldSpec, y: Point3,
                 settings: Optional[BornSettings] = None, tol: float = 1e-8,
                 n_max: int = 30, C_cal: float = DEFAULT_C_CAL) -> BornSeries:
    """源项为 G⁰(·, y) 的 Born 级数，可在多个目标点上复用"""
    ya = y.as_array()
    return BornSeries(k, Q, lambda p: free_green_points(p, ya, k.k), ya,
                      settings, tol, n_max, C_cal)


def evaluate_green(series: BornSeries, x: Point3, y: Point3) -> GreenEvaluation:
    if x.distance(y) == 0.0:
        raise DomainError(f"Green function is singular at x = y = {x.to_tuple()}")
    terms = series.terms_at(x)
    return GreenEvaluation(
        x=x, y=y, k=series.k,
        value=complex(sum(terms)),
        free_value=terms[0],
        orders=[abs(t) for t in terms],
        converged=series.target_converged(terms),
        smallness_ratio=0.0 if series.Q.is_zero else series.smallness_ratio,
        grid_orders=list(series.grid_orders),
    )


def born_series_green(k: ComplexWavenumber, Q: FieldSpec, x: Point3, y: Point3,
                      tol: float = 1e-8, n_max: int = 30,
                      settings: Optional[BornSettings] = None,
                      C_cal: float = DEFAULT_C_CAL) -> GreenEvaluation:
    """
    G_z(x, y) 的 Born 级数值

    Q ≡ 0 时直接返回 G⁰(x, y)，orders = [|G⁰|]
    """
    k.require_resolvent()
    if x.distance(y) == 0.0:
        raise DomainError(f"Green function is singular at x = y = {x.to_tuple()}")
    if Q.is_zero:
        g0 = free_green(x, y, k)
        return GreenEvaluation(x=x, y=y, k=k, value=g0, free_value=g0, orders=[abs(g0)],
                               converged=True, smallness_ratio=0.0)
    series = green_series(k, Q, y, settings, tol, n_max, C_cal)
    result = evaluate_green(series, x, y)
    logger.info(f"G at |x|={x.norm:.3g}: {result.n_orders} orders, converged={result.converged}")
    return result


def weighted_deviation(series: BornSeries, y: Point3, radii: Sequence[float],
                       directions: np.ndarray) -> float:
    """sup |G - G⁰|·|x|·e^{δ|x|} over radii × directions"""
    delta = series.k.delta
    best = 0.0
    for r in radii:
        for d in np.atleast_2d(directions):
            x = Point3.from_array(r * np.asarray(d, dtype=float))
            dev = abs(evaluate_green(series, x, y).deviation)
            best = max(best, dev * r * np.exp(delta * r))
    return float(best)


def solve_resolvent(k: ComplexWavenumber, Q: FieldSpec, f: FieldSpec,
                    rays: np.ndarray, radii: Sequence[float], tol: float = 1e-8,
                    n_max: int = 30, settings: Optional[BornSettings] = None,
                    source_spec: Optional[QuadratureSpec] = None,
                    C_cal: float = DEFAULT_C_CAL) -> ResolventTable:
    """
    u = (H - z)^{-1} f = Σ_n (-B)ⁿ (G⁰ * f) 在 rays × radii 上的采样

    f 须支撑在单位球内
    """
    k.require_resolvent()
    if f.kind is not FieldKind.SCALAR:
        raise ParameterError("source f must be a scalar field")
    if not f.is_zero and (f.reach is None or f.reach > 1.0 + 1e-12):
        raise ParameterError(f"source f must be supported in the unit ball, got reach={f.reach}")
    rays = np.atleast_2d(np.asarray(rays, dtype=float))
    rays = rays / np.linalg.norm(rays, axis=1, keepdims=True)
    radii = np.asarray(radii, dtype=float)
    table_points = (rays[:, None, :] * radii[None, :, None]).reshape(-1, 3)

    if f.is_zero:
        return ResolventTable(k=k, directions=rays, radii=radii,
                              values=np.zeros(len(table_points), dtype=complex),
                              n_orders=0, converged=True, orders=[0.0],
                              tail=np.zeros(len(table_points)))

    u0 = newton_source(k, f, table_points, source_spec)
    if Q.is_zero:
        return ResolventTable(k=k, directions=rays, radii=radii, values=u0, n_orders=1,
                              converged=True, orders=[float(np.max(np.abs(u0)))],
                              tail=np.zeros(len(table_points)))

    settings = settings or BornSettings()
    R = support_radius(Q, k, settings.truncation_tol)
    grid = ShellGrid(radii=log_radii(min(R, 1.0) / settings.grid_span, R, settings.n_radii),
                     directions=settings.directions)
    source = grid.sample(newton_source(k, f, grid.points, source_spec))
    series = BornSeries(k, Q, source, None, settings, tol, n_max, C_cal).run()

    values = u0.copy()
    tail = np.zeros(len(table_points))
    n_orders = 1
    for i, p in enumerate(table_points):
        terms = series.terms_at(Point3.from_array(p))
        values[i] += complex(sum(terms[1:]))
        n_orders = max(n_orders, len(terms))
        # 最后一阶相对于总和的大小作为逐点证书
        tail[i] = abs(terms[-1]) / max(abs(values[i]), 1e-300)
    logger.info(f"resolvent on {len(table_points)} samples: {n_orders} orders, "
                f"grid converged={series.converged}")
    return ResolventTable(k=k, directions=rays, radii=radii, values=values, n_orders=n_orders,
                          converged=series.converged, orders=[float(np.max(np.abs(u0)))] + series.grid_orders,
                          tail=tail)


def calibrate_smallness_constant(k: ComplexWavenumber,
                                 amplitudes: Sequence[float] = (1.0, 0.5, 0.25),
                                 settings: Optional[BornSettings] = None,
                                 n_orders: int = 5) -> SmallnessCalibration:
    """
    鼓包族 ηQ 上的 C_cal

    观测比 q = max_n sup|t_n| / sup|t_{n-1}|（网格上），C_cal = max q·δ³/m(Q_η)
    """
    k.require_resolvent()
    if n_orders < 3:
        raise ParameterError(f"need at least 3 orders to observe a term ratio, got {n_orders}")
    ratios, envelopes = [], []
    for eta in amplitudes:
        Q = build_bump_field(amplitude=eta)
        series = green_series(k, Q, ORIGIN, settings, tol=0.0, n_max=n_orders)
        try:
            series.run()
        except DivergenceError as e:
            logger.warning(f"calibration amplitude {eta}: series diverged")
            series.grid_orders = e.orders
        orders = series.grid_orders
        q = max(b / a for a, b in zip(orders, orders[1:]) if a > 0)
        ratios.append(float(q))
        envelopes.append(Q.envelope.m)
        logger.info(f"calibration amplitude {eta}: observed ratio {q:.4f}")
    C_cal = max(q * k.delta ** 3 / m for q, m in zip(ratios, envelopes))
    return SmallnessCalibration(C_cal=float(C_cal), k=k, amplitudes=list(amplitudes),
                                ratios=ratios, envelopes=envelopes)
