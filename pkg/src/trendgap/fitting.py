"""Linear trend fitting and optimal piecewise segmentation of difference series.

A difference series spends years on quasi-linear trends separated by short
transition windows. This module fits single trends by ordinary least squares,
locates trend turning points by exact dynamic programming over month
positions, and assembles the fitted structure into a :class:`TrendModel`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .series import DifferenceSeries, MonthStamp, months_between

#: Transitions between trends last three years at most.
MAX_TRANSITION_MONTHS = 36


class FitError(ValueError):
    """A fit or segmentation precondition was violated."""


@dataclass(frozen=True)
class LinearSegment:
    """A fitted linear trend over an inclusive month window.

    ``slope`` is in index points per year; ``intercept`` is the fitted value
    at the window's first month. ``synthetic`` marks segments that were
    constructed (mirrored or drawn through anchor points) rather than fitted,
    in which case ``r_squared`` and ``residual_sigma`` are inherited priors.
    """

    start: MonthStamp
    end: MonthStamp
    intercept: float
    slope: float
    r_squared: float
    residual_sigma: float
    synthetic: bool = False

    def __post_init__(self):
        for name in ("intercept", "slope", "r_squared", "residual_sigma"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if self.end < self.start:
            raise ValueError(f"segment end {self.end} before start {self.start}")
        if not 0.0 <= self.r_squared <= 1.0:
            raise ValueError(f"r_squared {self.r_squared} outside [0, 1]")
        if self.residual_sigma < 0.0:
            raise ValueError(f"negative residual_sigma {self.residual_sigma}")

    def predicted(self, stamp: MonthStamp) -> float:
        """Trend value at ``stamp``; extrapolates freely outside the window."""
        return self.intercept + self.slope * (months_between(stamp, self.start) / 12.0)

    def contains(self, stamp: MonthStamp) -> bool:
        return self.start <= stamp <= self.end

    def to_dict(self) -> dict:
        return {
            "start": str(self.start),
            "end": str(self.end),
            "intercept_A": self.intercept,
            "slope_B": self.slope,
            "r_squared": self.r_squared,
            "residual_sigma": self.residual_sigma,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "LinearSegment":
        return cls(
            start=MonthStamp.parse(doc["start"]),
            end=MonthStamp.parse(doc["end"]),
            intercept=float(doc["intercept_A"]),
            slope=float(doc["slope_B"]),
            r_squared=float(doc["r_squared"]),
            residual_sigma=float(doc["residual_sigma"]),
        )


@dataclass(frozen=True)
class TransitionWindow:
    """Months between two trends during which neither trend governs."""

    start: MonthStamp
    end: MonthStamp

    def __post_init__(self):
        if self.end < self.start:
            raise ValueError(f"transition end {self.end} before start {self.start}")

    @property
    def duration_months(self) -> int:
        return months_between(self.end, self.start) + 1

    def contains(self, stamp: MonthStamp) -> bool:
        return self.start <= stamp <= self.end

    def to_dict(self) -> dict:
        return {"start": str(self.start), "end": str(self.end)}

    @classmethod
    def from_dict(cls, doc: dict) -> "TransitionWindow":
        return cls(MonthStamp.parse(doc["start"]), MonthStamp.parse(doc["end"]))


@dataclass(frozen=True)
class TrendModel:
    """Chronological trend segments separated by transition windows."""

    segments: tuple[LinearSegment, ...]
    transitions: tuple[TransitionWindow, ...]

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        segs, trans = self.segments, self.transitions
        if not segs:
            raise ValueError("trend model needs at least one segment")
        for a, b in zip(segs, segs[1:]):
            if b.start <= a.end:
                raise ValueError(f"segments overlap or are out of order at {b.start}")
        for a, b in zip(trans, trans[1:]):
            if b.start <= a.end:
                raise ValueError(f"transitions overlap or are out of order at {b.start}")
        for w in trans:
            if w.duration_months > MAX_TRANSITION_MONTHS:
                raise ValueError(
                    f"transition {w.start}..{w.end} exceeds {MAX_TRANSITION_MONTHS} months"
                )
            # Allowed placements: strictly between two adjacent segments, or
            # trailing after the final segment (an ongoing transition).
            between = any(
                s.end < w.start and w.end < nxt.start for s, nxt in zip(segs, segs[1:])
            )
            trailing = w.start > segs[-1].end
            if not (between or trailing):
                raise ValueError(
                    f"transition {w.start}..{w.end} is not strictly between segments"
                )

    def segment_at(self, stamp: MonthStamp) -> LinearSegment | None:
        for s in self.segments:
            if s.contains(stamp):
                return s
        return None

    def transition_at(self, stamp: MonthStamp) -> TransitionWindow | None:
        for w in self.transitions:
            if w.contains(stamp):
                return w
        return None

    def nearest_segment(self, stamp: MonthStamp) -> LinearSegment:
        def distance(s: LinearSegment) -> int:
            if s.contains(stamp):
                return 0
            return min(abs(months_between(stamp, s.start)), abs(months_between(stamp, s.end)))

        return min(self.segments, key=distance)

    def to_dict(self) -> dict:
        return {
            "segments": [s.to_dict() for s in self.segments],
            "transitions": [w.to_dict() for w in self.transitions],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, doc: dict) -> "TrendModel":
        return cls(
            segments=tuple(LinearSegment.from_dict(d) for d in doc["segments"]),
            transitions=tuple(TransitionWindow.from_dict(d) for d in doc["transitions"]),
        )

    @classmethod
    def from_json(cls, text: str) -> "TrendModel":
        return cls.from_dict(json.loads(text))


def _window_arrays(diff: DifferenceSeries, window: tuple[MonthStamp, MonthStamp]):
    lo, hi = window
    if hi < lo:
        raise FitError(f"window end {hi} before start {lo}")
    obs = [(s, v) for s, v in diff.observations if lo <= s <= hi]
    if len(obs) < 2:
        raise FitError(f"window {lo}..{hi} has {len(obs)} observations, need >= 2")
    start = obs[0][0]
    if months_between(obs[-1][0], start) + 1 != len(obs):
        raise FitError(f"window {lo}..{hi} has missing months; fits require gap-free data")
    x = np.array([months_between(s, start) / 12.0 for s, _ in obs])
    y = np.array([v for _, v in obs])
    return obs, x, y


def _ols(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float, float]:
    """Least-squares line through (x, y): (intercept, slope, r_squared, residual_sigma)."""
    if np.ptp(x) == 0.0:
        raise FitError("zero variance in time coordinate")
    design = np.column_stack([np.ones_like(x), x])
    coef, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    intercept, slope = float(coef[0]), float(coef[1])
    resid = y - design @ coef
    sse = float(resid @ resid)
    sst = float(np.sum((y - y.mean()) ** 2))
    # Zero-variance target: define r_squared as 0 for stable downstream thresholds.
    r_squared = 0.0 if sst == 0.0 else max(0.0, min(1.0, 1.0 - sse / sst))
    n = len(y)
    residual_sigma = float(np.sqrt(sse / (n - 1))) if n > 1 else 0.0
    return intercept, slope, r_squared, residual_sigma


def fit_ols(diff: DifferenceSeries, window: tuple[MonthStamp, MonthStamp]) -> LinearSegment:
    """Fit a linear trend to the observations inside an inclusive month window.

    Parameters
    ----------
    diff : DifferenceSeries
        Series to fit. The window must be gap-free and hold >= 2 months.
    window : (MonthStamp, MonthStamp)
        Inclusive bounds; the fit is anchored at the first observed month,
        so ``intercept`` is the trend value there.
    """
    obs, x, y = _window_arrays(diff, window)
    intercept, slope, r2, sigma = _ols(x, y)
    return LinearSegment(
        start=obs[0][0],
        end=obs[-1][0],
        intercept=intercept,
        slope=slope,
        r_squared=r2,
        residual_sigma=sigma,
    )


def residual(segment: LinearSegment, stamp: MonthStamp, value: float) -> float:
    """Observed value minus trend value; positive when above the trend line."""
    return value - segment.predicted(stamp)


@dataclass(frozen=True)
class DeviationClass:
    """Where a value sits relative to the governing trend."""

    label: str  # "on-trend" | "above" | "below" | "in-transition"
    z: float | None
    segment: LinearSegment | None
    extrapolated: bool = False


def classify_deviation(model: TrendModel, stamp: MonthStamp, value: float) -> DeviationClass:
    """Classify a value as on-trend (|z| <= 1), above or below its trend.

    Stamps inside a transition window are reported as in-transition with no
    z-score; stamps outside every segment use the nearest segment's forward
    extrapolation and are flagged.
    """
    if model.transition_at(stamp) is not None:
        return DeviationClass(label="in-transition", z=None, segment=None)
    segment = model.segment_at(stamp)
    extrapolated = segment is None
    if segment is None:
        segment = model.nearest_segment(stamp)
    dev = residual(segment, stamp, value)
    if segment.residual_sigma > 0.0:
        z = dev / segment.residual_sigma
    else:
        z = 0.0 if dev == 0.0 else float("inf") * np.sign(dev)
    if abs(z) <= 1.0:
        label = "on-trend"
    else:
        label = "above" if dev > 0 else "below"
    return DeviationClass(label=label, z=float(z), segment=segment, extrapolated=extrapolated)


class _SegmentCost:
    """O(1) least-squares SSE of any contiguous month range, via prefix sums."""

    def __init__(self, x: np.ndarray, y: np.ndarray):
        n = len(x)
        z = np.zeros(1)
        self.c_x = np.concatenate([z, np.cumsum(x)])
        self.c_y = np.concatenate([z, np.cumsum(y)])
        self.c_xx = np.concatenate([z, np.cumsum(x * x)])
        self.c_xy = np.concatenate([z, np.cumsum(x * y)])
        self.c_yy = np.concatenate([z, np.cumsum(y * y)])
        self.n = n

    def sse(self, i: int, j: int) -> float:
        """SSE of the OLS line on positions i..j inclusive."""
        return float(self.sse_row(i, np.array([j]))[0])

    def sse_row(self, i: int, js: np.ndarray) -> np.ndarray:
        """Vectorized SSE of i..j for an array of right endpoints ``js``."""
        m = js - i + 1
        sx = self.c_x[js + 1] - self.c_x[i]
        sy = self.c_y[js + 1] - self.c_y[i]
        sxx = self.c_xx[js + 1] - self.c_xx[i]
        sxy = self.c_xy[js + 1] - self.c_xy[i]
        syy = self.c_yy[js + 1] - self.c_yy[i]
        var_x = sxx - sx * sx / m
        cov_xy = sxy - sx * sy / m
        var_y = syy - sy * sy / m
        with np.errstate(divide="ignore", invalid="ignore"):
            sse = var_y - np.where(var_x > 0.0, cov_xy * cov_xy / np.maximum(var_x, 1e-300), 0.0)
        return np.maximum(sse, 0.0)


def _series_positions(diff: DifferenceSeries):
    if not diff.is_contiguous():
        raise FitError("breakpoint detection requires a gap-free series")
    start = diff.start
    x = np.array([months_between(s, start) / 12.0 for s, _ in diff.observations])
    y = np.array(diff.values)
    return start, x, y


def detect_breakpoints(diff: DifferenceSeries, k: int, min_len: int) -> list[MonthStamp]:
    """Exact optimal placement of ``k`` trend turning points.

    Minimizes the total SSE of independent least-squares lines on the k+1
    contiguous pieces, by dynamic programming over month positions. Each
    piece must span at least ``min_len`` months. The returned stamps are the
    first months of the pieces to the right of each break; ties are broken
    toward the lexicographically earliest breakpoint set.

    Parameters
    ----------
    diff : DifferenceSeries
        Gap-free series to segment.
    k : int
        Number of breakpoints (k = 0 returns an empty list).
    min_len : int
        Minimum piece length in months, at least 6.
    """
    if k < 0:
        raise FitError(f"k must be >= 0, got {k}")
    if min_len < 6:
        raise FitError(f"min_len must be >= 6, got {min_len}")
    n = len(diff)
    if n < (k + 1) * min_len:
        raise FitError(
            f"series of {n} months is too short for {k} breakpoints "
            f"with min_len {min_len} (needs {(k + 1) * min_len})"
        )
    if k == 0:
        return []

    start, x, y = _series_positions(diff)
    cost = _SegmentCost(x, y)

    # suffix[m][i]: minimal SSE covering positions i..n-1 with m more breaks.
    inf = np.inf
    suffix = np.full((k + 1, n + 1), inf)
    for i in range(n - min_len, -1, -1):
        suffix[0][i] = cost.sse(i, n - 1)
    for m in range(1, k + 1):
        # piece i..b, then m-1 breaks in b+1..n-1
        for i in range(n - (m + 1) * min_len, -1, -1):
            bs = np.arange(i + min_len - 1, n - m * min_len)
            if len(bs) == 0:
                continue
            totals = cost.sse_row(i, bs) + suffix[m - 1][bs + 1]
            suffix[m][i] = float(np.min(totals))

    if not np.isfinite(suffix[k][0]):
        raise FitError("no feasible segmentation")

    # Forward reconstruction keeps the earliest feasible break at every level,
    # giving the lexicographically smallest optimal breakpoint set.
    breaks: list[int] = []
    i = 0
    for m in range(k, 0, -1):
        bs = np.arange(i + min_len - 1, n - m * min_len)
        totals = cost.sse_row(i, bs) + suffix[m - 1][bs + 1]
        # argmin returns the first minimum, i.e. the earliest feasible break
        b = int(bs[int(np.argmin(totals))])
        breaks.append(b + 1)
        i = b + 1
    return [start.add_months(p) for p in breaks]


def select_breakpoint_count(
    diff: DifferenceSeries, max_k: int, min_len: int
) -> tuple[int, list[MonthStamp]]:
    """Convenience BIC-style choice of the breakpoint count.

    Scores each k in 0..max_k by ``n log(SSE/n) + p log(n)`` with p the
    number of fitted parameters, and returns the best (k, breakpoints).
    Explicit k remains the recommended path when the structure is known.
    """
    if max_k < 0:
        raise FitError(f"max_k must be >= 0, got {max_k}")
    start, x, y = _series_positions(diff)
    cost = _SegmentCost(x, y)
    n = len(diff)
    if n < min_len:
        raise FitError(f"series of {n} months is shorter than min_len {min_len}")
    best: tuple[float, int, list[MonthStamp]] | None = None
    for k in range(max_k + 1):
        if n < (k + 1) * min_len:
            break
        points = detect_breakpoints(diff, k, min_len)
        positions = [0] + [months_between(p, start) for p in points] + [n]
        sse = sum(cost.sse(a, b - 1) for a, b in zip(positions, positions[1:]))
        p = 2 * (k + 1) + k
        bic = n * np.log(max(sse, 1e-12) / n) + p * np.log(n)
        if best is None or bic < best[0]:
            best = (bic, k, points)
    assert best is not None
    return best[1], best[2]


def build_trend_model(
    diff: DifferenceSeries,
    breakpoints: list[MonthStamp],
    transition_halfwidth: int,
    tail_start: MonthStamp | None = None,
) -> TrendModel:
    """Fit the segment/transition structure implied by given breakpoints.

    Around each breakpoint ``b`` the months ``b - halfwidth .. b + halfwidth - 1``
    are excluded as a transition window (halfwidth 0 excludes nothing, so the
    segments partition the span exactly at the breakpoints). When
    ``tail_start`` is given, every month from it to the end of the series is
    an ongoing trailing transition instead of part of the final segment.
    """
    if transition_halfwidth < 0:
        raise FitError("transition_halfwidth must be >= 0")
    if 2 * transition_halfwidth > MAX_TRANSITION_MONTHS:
        raise FitError(
            f"transition_halfwidth {transition_halfwidth} implies a window wider "
            f"than {MAX_TRANSITION_MONTHS} months"
        )
    points = list(breakpoints)
    if points != sorted(points):
        raise FitError("breakpoints must be sorted")
    span_start, span_end = diff.start, diff.end
    for p in points:
        if not (span_start < p <= span_end):
            raise FitError(f"breakpoint {p} outside series span {span_start}..{span_end}")

    fit_end = span_end
    transitions: list[TransitionWindow] = []
    if tail_start is not None:
        if not (span_start < tail_start <= span_end):
            raise FitError(f"tail_start {tail_start} outside series span")
        if points and tail_start <= points[-1]:
            raise FitError("tail_start must come after the last breakpoint")
        fit_end = tail_start.add_months(-1)

    windows: list[tuple[MonthStamp, MonthStamp]] = []
    for p in points:
        if transition_halfwidth == 0:
            continue
        w = (p.add_months(-transition_halfwidth), p.add_months(transition_halfwidth - 1))
        if windows and w[0] <= windows[-1][1]:
            raise FitError(
                f"transition windows around {p} overlap; halfwidth too large "
                "for the breakpoint spacing"
            )
        windows.append(w)

    pieces: list[tuple[MonthStamp, MonthStamp]] = []
    cursor = span_start
    if transition_halfwidth == 0:
        # Degenerate windows: pieces split exactly at the breakpoints.
        for p in points:
            pieces.append((cursor, p.add_months(-1)))
            cursor = p
        pieces.append((cursor, fit_end))
    else:
        for w in windows:
            pieces.append((cursor, w[0].add_months(-1)))
            cursor = w[1].add_months(1)
            transitions.append(TransitionWindow(*w))
        pieces.append((cursor, fit_end))

    segments = []
    for lo, hi in pieces:
        if hi < lo or months_between(hi, lo) + 1 < 2:
            raise FitError(
                f"piece {lo}..{hi} is too short to fit; reduce transition_halfwidth"
            )
        segments.append(fit_ols(diff, (lo, hi)))

    if tail_start is not None:
        transitions.append(TransitionWindow(tail_start, span_end))

    return TrendModel(segments=tuple(segments), transitions=tuple(transitions))


__all__ = [
    "MAX_TRANSITION_MONTHS",
    "FitError",
    "LinearSegment",
    "TransitionWindow",
    "TrendModel",
    "DeviationClass",
    "fit_ols",
    "residual",
    "classify_deviation",
    "detect_breakpoints",
    "select_breakpoint_count",
    "build_trend_model",
]
