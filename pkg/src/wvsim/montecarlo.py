"""Monte Carlo emulation of the single-photon experiment.

Each trial is one photon: it either fails a post-selection somewhere in
the chain (absorbed, no click) or survives all n blocks and produces one
click at a position drawn from the final conditional pointer density.

Sampling design
---------------
The final density |sum_k a_k chi_k|^2 is a coherent superposition with
cross terms and sign changes, not a probability mixture, so positions
are drawn by inverse-CDF lookup on the grid oracle's density (linear
interpolation inside a cell) rather than by picking a component Gaussian.

Acceptance is a Bernoulli thinning with the post-selection probability,
which for strongly anomalous settings is tiny (~1e-7): collecting 1e5
clicks means ~1e11 trials.  Rather than looping over every trial, the
indices of accepted trials are generated directly as a geometric-gap
walk, which has exactly the law of independent per-trial coin flips.
Each accepted trial then draws its click position from its own RNG
stream keyed by (master seed, trial index), so results are reproducible
trial by trial and independent of execution order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .analytic import ProtocolParams, pointer_std
from .errors import InvalidParameterError
from .grid import GridSpec, cdf, evolve_sequential, moments

# spawn_key tags: acceptance gap walk vs per-trial position streams.
_ACCEPT_STREAM = 0
_CLICK_STREAM = 1

_GAP_BATCH = 32768


@dataclass(frozen=True)
class DetectorModel:
    """Pixelated readout: reported positions are pixel centers."""

    pixel_pitch: float = 0.1
    origin: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.pixel_pitch) and self.pixel_pitch > 0):
            raise InvalidParameterError(f"pixel_pitch must be positive, got {self.pixel_pitch}")

    def pixel_index(self, x):
        return np.rint((np.asarray(x) - self.origin) / self.pixel_pitch).astype(int)

    def pixel_center(self, x):
        return self.origin + self.pixel_index(x) * self.pixel_pitch


@dataclass(frozen=True)
class ClickOutcome:
    """One trial: either absorbed, or a click with its pixelated position
    (and the continuous pre-pixelation sample kept for diagnostics)."""

    kind: str
    position: float | None = None
    raw_position: float | None = None

    def __post_init__(self):
        if self.kind not in ("absorbed", "click"):
            raise InvalidParameterError(f"unknown outcome kind {self.kind!r}")
        if self.kind == "click" and (self.position is None or self.raw_position is None):
            raise InvalidParameterError("click outcomes carry both positions")
        if self.kind == "absorbed" and self.position is not None:
            raise InvalidParameterError("absorbed outcomes carry no position")

    @classmethod
    def absorbed(cls) -> "ClickOutcome":
        return cls(kind="absorbed")

    @classmethod
    def click(cls, raw_position: float, position: float) -> "ClickOutcome":
        return cls(kind="click", position=position, raw_position=raw_position)


@dataclass(frozen=True)
class RunSummary:
    """Aggregate of a trial batch; statistics cover accepted clicks only."""

    trials: int
    accepted: int
    first_click: ClickOutcome | None
    mean: float
    std: float
    stderr: float
    histogram: tuple = field(default_factory=tuple)


@dataclass(frozen=True)
class _ConditionalSampler:
    """Precomputed inverse-CDF sampler for the final conditional density."""

    probability: float
    positions: np.ndarray = field(repr=False)
    cdf: np.ndarray = field(repr=False)
    mean: float = 0.0
    std: float = 0.0

    def draw(self, u: np.ndarray) -> np.ndarray:
        """Map uniforms in [0, 1) to positions, linear inside each cell."""
        c = self.cdf
        idx = np.clip(np.searchsorted(c, u), 1, c.size - 1)
        lo = c[idx - 1]
        hi = c[idx]
        frac = np.clip((u - lo) / np.where(hi > lo, hi - lo, 1.0), 0.0, 1.0)
        dx = self.positions[1] - self.positions[0]
        return self.positions[idx - 1] + frac * dx


@lru_cache(maxsize=16)
def _conditional_sampler(params: ProtocolParams, spec: GridSpec) -> _ConditionalSampler:
    wf, probability = evolve_sequential(params, spec)
    mean, std = moments(wf)
    return _ConditionalSampler(
        probability=probability,
        positions=spec.positions(),
        cdf=cdf(wf),
        mean=mean,
        std=std,
    )


def trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    """Position stream of one trial, keyed by (master seed, trial index)."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(_CLICK_STREAM, trial_index))
    return np.random.default_rng(ss)


def sample_click(
    rng: np.random.Generator,
    params: ProtocolParams,
    spec: GridSpec,
    detector: DetectorModel,
) -> ClickOutcome:
    """One trial: accept with the post-selection probability, then draw the
    click position from the conditional density.  Deterministic for a fixed
    generator state and parameters."""
    sampler = _conditional_sampler(params, spec)
    if rng.random() >= sampler.probability:
        return ClickOutcome.absorbed()
    raw = float(sampler.draw(np.asarray([rng.random()]))[0])
    return ClickOutcome.click(raw, float(detector.pixel_center(raw)))


def _accepted_indices(seed: int, count: int, probability: float) -> np.ndarray:
    """0-based indices of accepted trials among `count` Bernoulli trials,
    generated as a geometric-gap walk (identical in law to per-trial coin
    flips, but O(accepted) work instead of O(count))."""
    if probability >= 1.0:
        return np.arange(count, dtype=np.int64)
    gen = np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(_ACCEPT_STREAM,))
    )
    chunks = []
    total = 0
    while total < count:
        gaps = gen.geometric(probability, size=_GAP_BATCH)
        positions = np.cumsum(gaps) + total
        keep = positions <= count
        chunks.append(positions[keep])
        total = int(positions[-1])
    indices = np.concatenate(chunks) - 1
    return indices.astype(np.int64)


def run_trials(
    seed: int,
    count: int,
    params: ProtocolParams,
    spec: GridSpec,
    detector: DetectorModel,
) -> RunSummary:
    """Run `count` independent trials from a deterministic seed and summarize.

    first_click is the accepted outcome with the smallest trial index (the
    single-click reading of the run).  Zero accepted clicks produce an
    explicit empty summary with NaN statistics, not an error.
    """
    if count < 1:
        raise InvalidParameterError(f"count must be >= 1, got {count}")
    if seed < 0:
        raise InvalidParameterError(f"seed must be non-negative, got {seed}")
    sampler = _conditional_sampler(params, spec)
    indices = _accepted_indices(seed, count, sampler.probability)
    accepted = int(indices.size)
    if accepted == 0:
        return RunSummary(
            trials=count,
            accepted=0,
            first_click=None,
            mean=math.nan,
            std=math.nan,
            stderr=math.nan,
            histogram=(),
        )

    u = np.empty(accepted)
    for j, idx in enumerate(indices):
        u[j] = trial_rng(seed, int(idx)).random()
    raw = sampler.draw(u)
    pixel_idx = detector.pixel_index(raw)
    positions = detector.origin + pixel_idx * detector.pixel_pitch

    mean = float(np.mean(positions))
    if accepted >= 2:
        std = float(np.std(positions, ddof=1))
        stderr = std / math.sqrt(accepted)
    else:
        std = math.nan
        stderr = math.nan
    uniq, counts = np.unique(pixel_idx, return_counts=True)
    histogram = tuple(
        (float(detector.origin + k * detector.pixel_pitch), int(c))
        for k, c in zip(uniq, counts)
    )
    first = ClickOutcome.click(float(raw[0]), float(positions[0]))
    return RunSummary(
        trials=count,
        accepted=accepted,
        first_click=first,
        mean=mean,
        std=std,
        stderr=stderr,
        histogram=histogram,
    )


def first_click(
    seed: int,
    budget: int,
    params: ProtocolParams,
    spec: GridSpec,
    detector: DetectorModel,
) -> tuple[int, ClickOutcome] | None:
    """Trial index and outcome of the first accepted click, or None if no
    trial within `budget` passes post-selection.

    Walks the same acceptance stream as run_trials, so the result matches
    the first_click of any run_trials call with count >= index + 1."""
    if budget < 1:
        raise InvalidParameterError(f"budget must be >= 1, got {budget}")
    if seed < 0:
        raise InvalidParameterError(f"seed must be non-negative, got {seed}")
    sampler = _conditional_sampler(params, spec)
    if sampler.probability >= 1.0:
        idx = 0
    else:
        # Same acceptance stream and batch draw as _accepted_indices, so the
        # first gap (and hence the first index) matches run_trials exactly.
        gen = np.random.default_rng(
            np.random.SeedSequence(entropy=seed, spawn_key=(_ACCEPT_STREAM,))
        )
        idx = int(gen.geometric(sampler.probability, size=_GAP_BATCH)[0]) - 1
    if idx >= budget:
        return None
    raw = float(sampler.draw(np.asarray([trial_rng(seed, idx).random()]))[0])
    return idx, ClickOutcome.click(raw, float(detector.pixel_center(raw)))


@dataclass(frozen=True)
class AnomalyReport:
    """Is a single click anomalous, i.e. above the top eigenvalue by more
    than the single-shot pointer uncertainty?"""

    eigenvalue_bound: int
    click_position: float
    gap: float
    uncertainty: float
    anomalous: bool
    exceeds_uncertainty: bool


def anomaly_report(summary: RunSummary, params: ProtocolParams) -> AnomalyReport:
    """Judge the run's first click against the eigenvalue range [-n, n].

    gap = click position - n; the click is anomalous when the gap is
    positive, and conclusively so when the gap also exceeds the predicted
    single-shot uncertainty (the final pointer width)."""
    if summary.accepted < 1 or summary.first_click is None:
        raise InvalidParameterError("anomaly report needs at least one accepted click")
    position = summary.first_click.position
    gap = position - params.n
    uncertainty = pointer_std(params)
    return AnomalyReport(
        eigenvalue_bound=params.n,
        click_position=position,
        gap=gap,
        uncertainty=uncertainty,
        anomalous=gap > 0,
        exceeds_uncertainty=gap > uncertainty,
    )


def summary_csv_row(summary: RunSummary) -> str:
    """Fixed-order CSV row: trials, accepted, first_click_x, mean, std, stderr."""
    first = summary.first_click.position if summary.first_click is not None else math.nan
    fields = [summary.trials, summary.accepted, first, summary.mean, summary.std, summary.stderr]
    return ",".join(f"{v:.17g}" if isinstance(v, float) else str(v) for v in fields)


def write_histogram(summary: RunSummary, out) -> None:
    """Histogram as text: header '# pixel_center count', one pair per line."""
    out.write("# pixel_center count\n")
    for center, count in summary.histogram:
        out.write(f"{center:.17g} {count}\n")
