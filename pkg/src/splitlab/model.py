"""Mean-field recursion for the clause/variable dynamics of SPLIT.

A formula is idealized by three numbers: clause count ``m``, variable count
``n`` and filling factor ``x = p/m = k/n``, where ``p`` is the mean appearance
of a variable and ``k`` the mean clause length.  One elimination maps

    m' = m - p + (1 - alpha) * p**2/4 * (1 - x**2/2) * r(n, x)
    p' = x*(m - p) + (1 - alpha*lam) * p**2/4 * (2x - 1.5 x**2) * r(n, x)
    n' = n - 1,   x' = p'/m'

with ``r`` the higher-order orthogonality attenuation.  ``alpha`` and ``lam``
model removal of redundant clauses; both default to the plain recursion.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field


class RMode(enum.Enum):
    """Exponent of the attenuation factor ``(1 - x**2/2)``."""

    FILLING = "k2"  # exponent k - 2 = x*n - 2
    VARIABLES = "n2"  # exponent n - 2


class ModelOverflow(ArithmeticError):
    pass


@dataclass(frozen=True)
class ModelParams:
    alpha: float = 0.0
    lam: float = 1.0
    r_mode: RMode = RMode.FILLING
    easy_threshold: float = 1.0
    blowup_factor: float = 2.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError(f"alpha must lie in [0, 1), got {self.alpha}")
        if self.alpha > 0 and not 1.0 <= self.lam <= 1.0 / self.alpha:
            raise ValueError(
                f"lambda must satisfy 1 <= lambda <= 1/alpha = {1 / self.alpha:g}, got {self.lam}"
            )
        if not self.easy_threshold > 0:
            raise ValueError("easy_threshold must be positive")
        if not self.blowup_factor > 1:
            raise ValueError("blowup_factor must exceed 1")
        if not isinstance(self.r_mode, RMode):
            object.__setattr__(self, "r_mode", RMode(self.r_mode))

    def bound(self, m0: float, n0: int) -> float:
        """Runaway bound ``m0 * blowup_factor**n0`` (``inf`` if unrepresentable)."""
        try:
            return m0 * self.blowup_factor**n0
        except OverflowError:
            return math.inf


@dataclass(frozen=True)
class ModelState:
    m: float
    n: int
    x: float

    def __post_init__(self) -> None:
        if self.m < 0 or not math.isfinite(self.m):
            raise ValueError(f"m must be finite and >= 0, got {self.m}")
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if not 0.0 <= self.x <= 1.0:
            raise ValueError(f"x must lie in [0, 1], got {self.x}")

    @property
    def p(self) -> float:
        return self.x * self.m

    @property
    def k(self) -> float:
        return self.x * self.n


@dataclass(frozen=True)
class StepBreakdown:
    m_new: float
    p_new: float
    r_value: float
    m_rem: float
    p_rem: float
    k_new: float
    k_rem: float


def attenuation(n: int, x: float, mode: RMode = RMode.FILLING) -> float:
    """``(1 - x**2/2)`` raised to ``x*n - 2`` or ``n - 2`` depending on ``mode``.

    A negative exponent (``x*n < 2``) is evaluated as written and gives a
    factor above one.
    """
    mode = RMode(mode)
    exponent = x * n - 2 if mode is RMode.FILLING else n - 2
    return (1.0 - x * x / 2.0) ** exponent


def step(state: ModelState, params: ModelParams | None = None) -> tuple[ModelState, StepBreakdown]:
    """Advance the recursion by one eliminated variable.

    Raises :class:`ModelOverflow` when an intermediate value is not finite.
    """
    params = params or ModelParams()
    if state.n < 3:
        raise ValueError(f"a step needs n >= 3, got n={state.n}")
    m, n, x = state.m, state.n, state.x
    a, lam = params.alpha, params.lam
    p = x * m
    try:
        r = attenuation(n, x, params.r_mode)
        quarter = p * p / 4.0
        m_new = quarter * (1.0 - x * x / 2.0) * r
        p_new = quarter * (2.0 * x - 1.5 * x * x) * r
        m_rem = (1.0 - a) * m_new
        p_rem = (1.0 - a * lam) * p_new
        m2 = m - p + m_rem
        p2 = x * (m - p) + p_rem
    except OverflowError as exc:
        raise ModelOverflow(str(exc)) from None
    if not (math.isfinite(m2) and math.isfinite(p2)):
        raise ModelOverflow(f"non-finite state after step from n={n}: m'={m2}, p'={p2}")
    k_new = (n - 1) * p_new / m_new if m_new > 0 else 0.0
    k_rem = (n - 1) * p_rem / m_rem if m_rem > 0 else 0.0
    # x' - x = (p_rem - x*m_rem)/m', taken in factored form: p2/m2 rounds
    # below x once the increment drops under an ulp (tiny r)
    gain = (1.0 - x) * (1.0 - 0.5 * x) + a * (1.0 - 0.5 * x * x) - a * lam * (2.0 - 1.5 * x)
    m2 = max(m2, 0.0)
    x2 = min(x + quarter * r * x * gain / m2, 1.0) if m2 > 0 else 0.0
    breakdown = StepBreakdown(m_new, p_new, r, m_rem, p_rem, k_new, k_rem)
    return ModelState(m2, n - 1, max(x2, 0.0)), breakdown


class Outcome(enum.Enum):
    EASY = "easy"
    HARD = "hard"
    EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class Classification:
    outcome: Outcome
    step: int | None = None  # stop step (Easy) or blow-up step (Hard)

    @property
    def bounded(self) -> bool:
        return self.outcome is not Outcome.HARD


@dataclass(frozen=True)
class ModelPoint:
    j: int
    n: int
    m: float
    p: float
    x: float
    k: float
    r: float  # attenuation used to produce this point; 1.0 at j=0
    step_cost: float
    cum_cost: float
    negative_exponent: bool = False


@dataclass
class ModelTrajectory:
    points: list[ModelPoint] = field(default_factory=list)
    classification: Classification = Classification(Outcome.EXHAUSTED)
    overflowed: bool = False

    @property
    def m_values(self) -> list[float]:
        return [pt.m for pt in self.points]

    def summary(self) -> dict:
        c = self.classification
        return {
            "class": c.outcome.value,
            "stop_step": c.step,
            "running_time": running_time(self),
        }


def run(m0: float, n0: int, k0: float, params: ModelParams | None = None) -> ModelTrajectory:
    """Iterate the recursion from ``(m0, n0, x0 = k0/n0)`` and classify it.

    Stops at the first of: ``m_j < easy_threshold`` (Easy), ``m_j`` above
    ``m0 * blowup_factor**n0`` or overflow (Hard), ``j = n0 - 2`` (Exhausted).
    The initial state is point ``j = 0``; a point that crosses the bound is
    recorded, an overflowing one is not.
    """
    params = params or ModelParams()
    if n0 < 2 or int(n0) != n0:
        raise ValueError(f"n0 must be an integer >= 2, got {n0}")
    n0 = int(n0)
    if not k0 >= 2:
        raise ValueError(f"k0 must be >= 2, got {k0}")
    if k0 > n0:
        raise ValueError(f"k0 must be <= n0 (x0 = k0/n0 <= 1), got k0={k0}, n0={n0}")
    if not (m0 >= 0 and math.isfinite(m0)):
        raise ValueError(f"m0 must be finite and >= 0, got {m0}")

    state = ModelState(float(m0), n0, k0 / n0)
    bound = params.bound(m0, n0)
    cost = state.m * state.m * n0
    traj = ModelTrajectory()
    traj.points.append(ModelPoint(0, n0, state.m, state.p, state.x, state.k, 1.0, cost, cost))
    if state.m < params.easy_threshold:
        traj.classification = Classification(Outcome.EASY, 0)
        return traj
    for j in range(1, n0 - 1):
        negative = state.x * state.n < 2 and params.r_mode is RMode.FILLING
        try:
            state, br = step(state, params)
        except ModelOverflow:
            traj.overflowed = True
            traj.classification = Classification(Outcome.HARD, j)
            return traj
        step_cost = state.m * state.m * state.n
        cost += step_cost
        traj.points.append(
            ModelPoint(j, state.n, state.m, state.p, state.x, state.k, br.r_value, step_cost, cost, negative)
        )
        if state.m > bound or math.isinf(cost):
            traj.classification = Classification(Outcome.HARD, j)
            return traj
        if state.m < params.easy_threshold:
            traj.classification = Classification(Outcome.EASY, j)
            return traj
    traj.classification = Classification(Outcome.EXHAUSTED)
    return traj


def classify(m0: float, n0: int, k0: float, params: ModelParams | None = None) -> Classification:
    return run(m0, n0, k0, params).classification


def running_time(traj: ModelTrajectory) -> float:
    """Sum of ``m_j**2 * n_j`` over the recorded points, initial point included."""
    total = 0.0
    for pt in traj.points:
        total += pt.m * pt.m * pt.n
    return total
