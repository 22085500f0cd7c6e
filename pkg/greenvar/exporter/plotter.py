"""
Static SVG step plots of an estimate curve and the plot-point table behind them
"""

import csv
import io
import logging
from pathlib import Path
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import matplotlib
from matplotlib.figure import Figure

from greenvar.estimators.curve import survival_band
from greenvar.exporter.estimate_exporter import format_number, write_atomic
from greenvar.models.schema import EstimateCurve

logger = logging.getLogger(__name__)

FIGURES = ("survival", "greenwood", "r_hat", "survival_ci", "greenwood_ci")
PLOT_POINTS_FILE = "plot_points.csv"
PLOT_POINT_COLUMNS = ("t", "s", "g", "r", "s_lo", "s_hi", "ci_lo", "ci_hi")

_RC = {"svg.fonttype": "none", "svg.hashsalt": "greenvar", "path.simplify": False}

PathLike = Union[str, Path]


class StepSeries(NamedTuple):
    x: List[float]
    y: List[float]


def step_series(times: Sequence[float], values: Sequence[Optional[float]], initial: float,
                horizon: Optional[float] = None) -> StepSeries:
    """Right-continuous step vertices from the origin.

    Starts at (0, initial), stops at the last defined value and is carried
    flat to ``horizon`` when every value is defined.
    """
    x, y = [0.0], [initial]
    truncated = False
    for t, v in zip(times, values):
        if v is None:
            truncated = True
            break
        x.append(float(t))
        y.append(float(v))
    if not truncated and horizon is not None and horizon > x[-1]:
        x.append(float(horizon))
        y.append(y[-1])
    return StepSeries(x=x, y=y)


def last_defined_time(curve: EstimateCurve) -> Optional[float]:
    """Event time of the last point with a defined interval, None if all are defined"""
    first = curve.first_undefined()
    if first is None:
        return None
    defined = [p.t for p in curve.points if p.defined]
    return defined[-1] if defined else 0.0


class CurvePlotter:
    """Renders the five figures of one curve into an output directory"""

    def __init__(self, output_dir: PathLike, horizon: Optional[float] = None):
        self.output_dir = Path(output_dir)
        self.horizon = horizon

    def plot_all(self, curve: EstimateCurve) -> Dict[str, Path]:
        self.output_dir.mkdir(parents=True, exist_ok=True)
        times = curve.times
        band = survival_band(curve)
        cutoff = last_defined_time(curve)
        if cutoff is not None:
            logger.warning(f"Interval bands truncated at t={cutoff}")

        written: Dict[str, Path] = {}
        written["survival"] = self._line_figure(
            "survival", step_series(times, [p.s for p in curve.points], 1.0, self.horizon),
            "Kaplan-Meier survival", "S(t)")
        written["greenwood"] = self._line_figure(
            "greenwood", step_series(times, [p.g for p in curve.points], 0.0, self.horizon),
            "Greenwood variance", "G(t)")
        written["r_hat"] = self._line_figure(
            "r_hat", step_series(times, [p.r for p in curve.points], 0.0, self.horizon),
            "Asymptotic variance of the Greenwood estimator", "R(t)")

        s_lo = [b[0] if b and p.defined else None for b, p in zip(band, curve.points)]
        s_hi = [b[1] if b and p.defined else None for b, p in zip(band, curve.points)]
        written["survival_ci"] = self._band_figure(
            "survival_ci", curve,
            step_series(times, [p.s for p in curve.points], 1.0, self.horizon),
            step_series(times, s_lo, 1.0, self.horizon),
            step_series(times, s_hi, 1.0, self.horizon),
            cutoff, f"Survival with {self._level(curve)} Greenwood band", "S(t)")
        written["greenwood_ci"] = self._band_figure(
            "greenwood_ci", curve,
            step_series(times, [p.g for p in curve.points], 0.0, self.horizon),
            step_series(times, [p.ci_lo for p in curve.points], 0.0, self.horizon),
            step_series(times, [p.ci_hi for p in curve.points], 0.0, self.horizon),
            cutoff, f"Greenwood with {self._level(curve)} Wald interval", "G(t)")

        written["plot_points"] = write_atomic(self.output_dir / PLOT_POINTS_FILE,
                                              render_plot_points(curve, s_lo, s_hi))
        logger.info(f"Wrote {len(FIGURES)} figures to {self.output_dir}")
        return written

    @staticmethod
    def _level(curve: EstimateCurve) -> str:
        sided = "one-sided" if curve.convention == "paper" else "two-sided"
        return f"{100 * (1 - curve.alpha):g}% {sided}"

    def _line_figure(self, name: str, series: StepSeries, title: str, ylabel: str) -> Path:
        fig, ax = self._figure(title, ylabel)
        ax.step(series.x, series.y, where="post", color="C0", lw=1.5)
        return self._save(fig, name)

    def _band_figure(self, name: str, curve: EstimateCurve, centre: StepSeries,
                     lo: StepSeries, hi: StepSeries, cutoff: Optional[float],
                     title: str, ylabel: str) -> Path:
        fig, ax = self._figure(title, ylabel)
        ax.step(centre.x, centre.y, where="post", color="C0", lw=1.5)
        ax.fill_between(lo.x, lo.y, hi.y, step="post", color="C0", alpha=0.25, lw=0)
        if cutoff is not None:
            ax.axvline(cutoff, color="grey", ls=":", lw=1)
            ax.annotate(f"undefined beyond t={cutoff:g}", xy=(cutoff, 0.5),
                        xycoords=("data", "axes fraction"), rotation=90,
                        ha="right", va="center", fontsize=8, color="grey")
        return self._save(fig, name)

    @staticmethod
    def _figure(title: str, ylabel: str) -> Tuple[Figure, "matplotlib.axes.Axes"]:
        fig = Figure(figsize=(6.4, 4.0))
        ax = fig.add_subplot()
        ax.set_title(title)
        ax.set_xlabel("t")
        ax.set_ylabel(ylabel)
        ax.set_xlim(left=0.0)
        return fig, ax

    def _save(self, fig: Figure, name: str) -> Path:
        path = self.output_dir / f"{name}.svg"
        with matplotlib.rc_context(_RC):
            fig.savefig(path, format="svg", metadata={"Date": None})
        logger.debug(f"Figure written to {path}")
        return path


def render_plot_points(curve: EstimateCurve, s_lo: Sequence[Optional[float]],
                       s_hi: Sequence[Optional[float]]) -> str:
    """Origin row plus one row per event time; undefined values are empty cells"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(PLOT_POINT_COLUMNS)
    writer.writerow(["0.0", "1.0", "0.0", "0.0", "1.0", "1.0", "0.0", "0.0"])
    for p, lo, hi in zip(curve.points, s_lo, s_hi):
        writer.writerow([format_number(v) for v in (p.t, p.s, p.g, p.r, lo, hi, p.ci_lo, p.ci_hi)])
    return buffer.getvalue()
