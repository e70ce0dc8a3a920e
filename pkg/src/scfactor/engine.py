"""Simulation, chain transport, trajectory comparison, and period detection.

A Trajectory stores values[i] = level value at index (start + i). The top
level x starts at 0; the level-l transform only exists from index l (t_1 is
the first transform value, and so on), so deeper levels carry larger start
offsets instead of padding.

Breakdowns (division by a non-unit, tanh domain violations, non-finite
floats) are data, not crashes: the trajectory is truncated and the breakdown
index and reason are recorded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ConfigError, DivisionByNonUnit, TanhUnsupported
from .factorize import FactorizationChain, SubstitutionFactorization, level_name
from .recurrence import Recurrence
from .rings import FloatComplex, FloatQuaternions, Module, Vec

FLOAT_COMPARE_CAP = 500


@dataclass
class Breakdown:
    index: int          # the index whose value could not be produced
    reason: str

    def describe(self) -> str:
        return f"breakdown at index {self.index}: {self.reason}"


@dataclass
class Trajectory:
    level: str
    start: int
    values: list[Vec]
    breakdown: Breakdown | None = None

    @property
    def end(self) -> int:
        """One past the largest produced index."""
        return self.start + len(self.values)

    def value_at(self, n: int) -> Vec:
        if not (self.start <= n < self.end):
            raise IndexError(f"index {n} outside [{self.start}, {self.end})")
        return self.values[n - self.start]


def _is_finite(v: Vec) -> bool:
    for c in v.parts:
        payload = c.v
        if isinstance(payload, complex):
            if not (math.isfinite(payload.real) and math.isfinite(payload.imag)):
                return False
        elif isinstance(payload, tuple) and payload and isinstance(payload[0], float):
            if not all(math.isfinite(x) for x in payload):
                return False
    return True


def simulate(rec: Recurrence, initial, steps: int, start: int = 0,
             level: str = "x") -> Trajectory:
    """Iterate the recurrence from its initial window.

    ``initial`` lists x_start .. x_{start+k} (oldest first). The result
    covers indices start .. start+k+steps unless a breakdown truncates it.
    """
    module = rec.module
    window_size = rec.order
    init = [module.el(v) for v in initial]
    if len(init) != window_size:
        raise ConfigError(f"initial window must hold {window_size} value(s), got {len(init)}")
    values = list(init)
    breakdown = None
    for n in range(start + rec.k, start + rec.k + steps):
        window = [values[-1 - i] for i in range(window_size)]
        try:
            nxt = rec.step(n, window)
        except (DivisionByNonUnit, TanhUnsupported) as exc:
            breakdown = Breakdown(n + 1, str(exc))
            break
        if not _is_finite(nxt):
            breakdown = Breakdown(n + 1, "value is not finite")
            break
        values.append(nxt)
    return Trajectory(level, start, values, breakdown)


def transport(chain: FactorizationChain, initial) -> list[list[Vec]]:
    """Initial windows for every chain level.

    Level 0 is the given x window (indices 0..k). Level l (1-based) drops the
    first entry: w_i = prev_i - alpha_l(i-1) * prev_{i-1} for i = l..k, so the
    level-l window covers indices l..k.
    """
    module = chain.base.module
    windows = [[module.el(v) for v in initial]]
    k = chain.base.k
    if len(windows[0]) != k + 1:
        raise ConfigError(f"initial window must hold {k + 1} value(s)")
    for l, step in enumerate(chain.steps, start=1):
        prev = windows[-1]
        # prev covers indices (l-1)..k
        cur = []
        for pos in range(1, len(prev)):
            i = (l - 1) + pos  # absolute index of prev[pos]
            cur.append(prev[pos] - step.alpha.at(i - 1) * prev[pos - 1])
        windows.append(cur)
    return windows


@dataclass
class ChainRun:
    """All level trajectories from one chain simulation.

    levels[0] is the reconstructed top level (named like the direct variable
    but produced through the chain); levels[l] for l >= 1 are the factor
    levels. Breakdown anywhere truncates everything above it.
    """

    trajectories: list[Trajectory]

    @property
    def reconstructed(self) -> Trajectory:
        return self.trajectories[0]

    def by_name(self) -> dict[str, Trajectory]:
        return {t.level: t for t in self.trajectories}


def simulate_chain(chain: FactorizationChain, initial, steps: int) -> ChainRun:
    """Run the deepest factor, then rebuild every level above it."""
    windows = transport(chain, initial)
    depth = len(chain.steps)
    k = chain.base.k
    deepest = simulate(chain.final_factor, windows[depth], steps,
                       start=depth, level=level_name(depth))
    trajs = [deepest]
    below = deepest
    for l in range(depth - 1, -1, -1):
        step = chain.steps[l]  # relates level l (cofactor) to level l+1 (factor)
        vals = list(windows[l])
        traj = Trajectory(level_name(l), l, vals, None)
        # w_{n+1} = alpha(n) * w_n + deeper_{n+1}, starting at n = k
        n = k
        while n + 1 < below.end:
            cur = traj.values[-1]
            traj.values.append(step.alpha.at(n) * cur + below.value_at(n + 1))
            n += 1
        if below.breakdown is not None:
            traj.breakdown = Breakdown(below.breakdown.index,
                                       f"propagated: {below.breakdown.reason}")
        trajs.append(traj)
        below = traj
    trajs.reverse()
    return ChainRun(trajs)


def simulate_substitution(sub: SubstitutionFactorization, initial, steps: int) -> ChainRun:
    """Run the alsp substitution split: first-order s level plus linear
    reconstruction of x.

    s_n = x_n - sum a_{j-1} x_{n-j} exists from n = k; the s level is indexed
    accordingly and reconstruction is x_{n+1} = sum a_{j-1} x_{n+1-j} + s_{n+1}.
    """
    module = sub.base.module
    k = sub.k
    init = [module.el(v) for v in initial]
    if len(init) != k + 1:
        raise ConfigError(f"initial window must hold {k + 1} value(s)")
    s_k = init[k]
    for j, c in enumerate(sub.sub_coeffs, start=1):
        s_k = s_k - c * init[k - j]
    s_traj = simulate(sub.factor, [s_k], steps, start=k, level="s")
    xs = list(init)
    x_traj = Trajectory("x", 0, xs, None)
    n = k
    while n + 1 < s_traj.end:
        acc = s_traj.value_at(n + 1)
        for j, c in enumerate(sub.sub_coeffs, start=1):
            acc = acc + c * xs[n + 1 - j]
        xs.append(acc)
        n += 1
    if s_traj.breakdown is not None:
        x_traj.breakdown = Breakdown(s_traj.breakdown.index,
                                     f"propagated: {s_traj.breakdown.reason}")
    return ChainRun([x_traj, s_traj])


# ---------------------------------------------------------------------------
# comparison


def _deviation(module: Module, a: Vec, b: Vec) -> float:
    """Max componentwise distance, for float rings."""
    out = 0.0
    for x, y in zip(a.parts, b.parts):
        px, py = x.v, y.v
        if isinstance(px, complex):
            out = max(out, abs(px - py))
        else:
            out = max(out, math.sqrt(sum((u - w) ** 2 for u, w in zip(px, py))))
    return out


@dataclass
class EquivalenceReport:
    """Pointwise comparison of the direct run against the chain run."""

    equal: bool
    compared: int                     # number of indices compared
    first_divergence: int | None
    max_deviation: float | None       # float rings only
    direct_breakdown: Breakdown | None
    chain_breakdown: Breakdown | None
    breakdowns_aligned: bool
    capped: bool = False
    notes: list[str] = field(default_factory=list)

    def describe(self) -> str:
        lines = []
        if self.equal:
            lines.append(f"trajectories agree on {self.compared} compared value(s)")
        else:
            lines.append(f"trajectories diverge first at index {self.first_divergence}")
        if self.max_deviation is not None:
            lines.append(f"max deviation {self.max_deviation:.3e}")
        if self.direct_breakdown:
            lines.append(f"direct run: {self.direct_breakdown.describe()}")
        if self.chain_breakdown:
            lines.append(f"chain run: {self.chain_breakdown.describe()}")
        if (self.direct_breakdown or self.chain_breakdown) and not self.breakdowns_aligned:
            lines.append("breakdown points do NOT align")
        if self.capped:
            lines.append(f"float comparison capped at {FLOAT_COMPARE_CAP} steps")
        return "; ".join(lines)


def verify_equivalence(rec: Recurrence, chain, initial, steps: int,
                       rel_tol: float | None = None) -> EquivalenceReport:
    """Simulate both forms and compare the top level pointwise.

    Exact rings compare with ring equality; float rings use a relative
    tolerance (default 1e-9) and cap the comparison at FLOAT_COMPARE_CAP
    steps. Breakdowns on the two sides are considered aligned when their
    indices differ by at most k (a non-unit reaches the two forms through
    windows of that width).
    """
    ring = rec.ring
    is_float = isinstance(ring, (FloatComplex, FloatQuaternions))
    capped = False
    if is_float and steps > FLOAT_COMPARE_CAP:
        steps = FLOAT_COMPARE_CAP
        capped = True
    direct = simulate(rec, initial, steps)
    if isinstance(chain, SubstitutionFactorization):
        run = simulate_substitution(chain, initial, steps)
    else:
        run = simulate_chain(chain, initial, steps)
    rebuilt = run.reconstructed

    if rel_tol is None:
        rel_tol = 1e-9
    module = rec.module
    stop = min(direct.end, rebuilt.end)
    first_div = None
    max_dev = 0.0 if is_float else None
    compared = 0
    for n in range(stop):
        a = direct.value_at(n)
        b = rebuilt.value_at(n)
        compared += 1
        if is_float:
            dev = _deviation(module, a, b)
            scale = max(_deviation(module, a, module.zero),
                        _deviation(module, b, module.zero), 1.0)
            max_dev = max(max_dev, dev)
            if dev > rel_tol * scale and first_div is None:
                first_div = n
        else:
            if not (a == b) and first_div is None:
                first_div = n
    db, cb = direct.breakdown, rebuilt.breakdown
    if db is None and cb is None:
        aligned = True
    elif db is not None and cb is not None:
        aligned = abs(db.index - cb.index) <= rec.k
    else:
        aligned = False
    notes = []
    if (db is None) != (cb is None):
        notes.append("only one side broke down")
    return EquivalenceReport(
        equal=first_div is None and aligned,
        compared=compared,
        first_divergence=first_div,
        max_deviation=max_dev,
        direct_breakdown=db,
        chain_breakdown=cb,
        breakdowns_aligned=aligned,
        capped=capped,
        notes=notes,
    )


def detect_period(values, max_period: int, eq=None) -> int | None:
    """Least p <= max_period that shifts the tail of the sequence onto itself.

    The check window is the final 2*max_period entries, so the sequence must
    hold at least that many values; transients before the window are ignored.
    """
    vals = list(values)
    if max_period < 1:
        raise ConfigError("max_period must be positive")
    if len(vals) < 2 * max_period:
        raise ConfigError(
            f"need at least {2 * max_period} values to certify periods up to {max_period}")
    if eq is None:
        eq = lambda a, b: a == b
    lo = len(vals) - 2 * max_period
    for p in range(1, max_period + 1):
        if all(eq(vals[i], vals[i + p]) for i in range(lo, len(vals) - p)):
            return p
    return None


# ---------------------------------------------------------------------------
# serialization


def trajectory_csv(traj: Trajectory, module: Module) -> str:
    """CSV with header level,n,c0..c{d-1}; canonical element rendering."""
    header = "level,n," + ",".join(f"c{i}" for i in range(module.dim))
    lines = [header]
    for off, v in enumerate(traj.values):
        comps = ",".join(module.fmt(v))
        lines.append(f"{traj.level},{traj.start + off},{comps}")
    return "\n".join(lines) + "\n"


def trajectory_json_obj(traj: Trajectory, module: Module) -> dict:
    obj = {
        "level": traj.level,
        "start": traj.start,
        "values": [module.fmt(v) for v in traj.values],
        "breakdown": None,
    }
    if traj.breakdown is not None:
        obj["breakdown"] = {"index": traj.breakdown.index, "reason": traj.breakdown.reason}
    return obj
