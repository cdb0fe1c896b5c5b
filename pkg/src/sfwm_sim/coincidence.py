"""Filter tables, coincidence histograms, CAR estimation and synthetic data.

The coincidence-to-accidental ratio is estimated histogram-style: bin the
idler-minus-signal arrival-time differences, average the 5 bins covering the
coincidence peak, and divide by the average of the remaining (accidental)
bins.  A flat histogram therefore has CAR = 1 exactly.

``predict_rates`` is the matching closed-form budget: true coincidences at
pair_rate * eta_s * eta_i, accidentals at singles_s * singles_i * bin_width,
CAR = 1 + coincidence/accidentals.  When comparing against the histogram
estimator remember its peak window spreads the true coincidences over
``peak_bins`` bins (pass peak_bins=5 for the default window).

``synthesize_timestamps`` generates matching Poisson test data: pair events
thinned per arm by the detector efficiencies plus independent noise/dark
counts, all timed from a seeded generator, so analysis pipelines can be
closed-loop tested against the predictor.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from math import inf
from pathlib import Path

import numpy as np

from .dispersion import angular_frequency_from_wavelength
from .errors import DataError, DomainError

CAR_PEAK_BINS = 5


@dataclass(frozen=True)
class FilterChannel:
    """One DWDM filter: ITU channel, center, insertion loss, 3 dB bandwidth."""

    itu_channel: str
    center_nm: float
    insertion_loss_db: float
    bandwidth_3db_nm: float

    def __post_init__(self) -> None:
        if not self.center_nm > 0.0:
            raise DomainError(f"{self.itu_channel}: center wavelength must be > 0")
        if not self.bandwidth_3db_nm > 0.0:
            raise DomainError(f"{self.itu_channel}: bandwidth must be > 0")
        if self.insertion_loss_db < 0.0:
            raise DomainError(f"{self.itu_channel}: insertion loss must be >= 0")

    @property
    def transmission(self) -> float:
        """Flat in-band power transmission."""
        return 10.0 ** (-self.insertion_loss_db / 10.0)

    def passband_nm(self) -> tuple[float, float]:
        """Rectangular passband (lo, hi) in nm: center +- half the bandwidth."""
        half = 0.5 * self.bandwidth_3db_nm
        return self.center_nm - half, self.center_nm + half

    def passband_omega(self) -> tuple[float, float]:
        """Passband as increasing angular frequencies (rad/s)."""
        lo_nm, hi_nm = self.passband_nm()
        return (
            angular_frequency_from_wavelength(hi_nm * 1e-9),
            angular_frequency_from_wavelength(lo_nm * 1e-9),
        )


@dataclass(frozen=True)
class FilterGroup:
    number: int
    signal: FilterChannel
    idler: FilterChannel


def filter_table_default() -> tuple[FilterGroup, ...]:
    """The four stock signal/idler DWDM filter pairs."""
    rows = (
        (1, ("C30", 1553.3, 2.9, 0.47), ("C27", 1555.7, 2.4, 0.59)),
        (2, ("C33", 1550.9, 3.1, 0.43), ("C24", 1558.2, 1.9, 0.45)),
        (3, ("C35", 1549.3, 2.7, 0.50), ("C22", 1559.8, 2.9, 0.47)),
        (4, ("C46", 1540.6, 3.3, 0.52), ("C11", 1568.8, 2.0, 0.51)),
    )
    return tuple(
        FilterGroup(num, FilterChannel(*sig), FilterChannel(*idl))
        for num, sig, idl in rows
    )


@dataclass(frozen=True, eq=False)
class CoincidenceHistogram:
    """Binned idler-minus-signal time differences."""

    bin_width_s: float
    bin_edges_s: np.ndarray = field(repr=False)
    counts: np.ndarray = field(repr=False)
    total_time_s: float = 0.0

    def __post_init__(self) -> None:
        edges = np.asarray(self.bin_edges_s, dtype=float)
        counts = np.asarray(self.counts)
        if not self.bin_width_s > 0.0:
            raise DomainError("bin width must be > 0")
        if edges.ndim != 1 or edges.size != counts.size + 1:
            raise DataError("need len(bin_edges) == len(counts) + 1")
        widths = np.diff(edges)
        if not np.allclose(widths, self.bin_width_s, rtol=1e-9, atol=0.0):
            raise DataError("histogram bins must be uniform")
        if np.any(counts < 0):
            raise DataError("counts must be >= 0")
        object.__setattr__(self, "bin_edges_s", edges)
        object.__setattr__(self, "counts", counts.astype(np.int64))

    @property
    def n_bins(self) -> int:
        return int(self.counts.size)

    @property
    def bin_centers_s(self) -> np.ndarray:
        return 0.5 * (self.bin_edges_s[:-1] + self.bin_edges_s[1:])

    @property
    def central_bin(self) -> int:
        """Index of the bin containing zero time difference."""
        return int(np.searchsorted(self.bin_edges_s, 0.0, side="right") - 1)


def _check_sorted(name: str, ts: np.ndarray) -> np.ndarray:
    ts = np.asarray(ts, dtype=float)
    if ts.ndim != 1:
        raise DataError(f"{name} timestamps must be 1-D")
    if ts.size > 1 and np.any(np.diff(ts) < 0.0):
        raise DataError(f"{name} timestamps are not sorted ascending")
    return ts


def build_histogram(
    signal_ts,
    idler_ts,
    bin_width_s: float,
    window_s: float,
    total_time_s: float | None = None,
) -> CoincidenceHistogram:
    """Histogram idler-signal time differences over [-window/2, +window/2).

    Timestamps must be sorted ascending; the window must be an integer
    multiple of the bin width.  Runs in O(N + M + matches) via a sorted
    two-pointer sweep.
    """
    signal = _check_sorted("signal", signal_ts)
    idler = _check_sorted("idler", idler_ts)
    if not bin_width_s > 0.0:
        raise DomainError("bin width must be > 0")
    n_bins_f = window_s / bin_width_s
    n_bins = int(round(n_bins_f))
    if n_bins < 1 or abs(n_bins_f - n_bins) > 1e-9 * n_bins:
        raise DomainError(
            f"window {window_s!r} s is not an integer multiple of bin width {bin_width_s!r} s"
        )
    half = 0.5 * window_s
    edges = -half + bin_width_s * np.arange(n_bins + 1)

    counts = np.zeros(n_bins, dtype=np.int64)
    if signal.size and idler.size:
        lo = np.searchsorted(idler, signal - half, side="left")
        hi = np.searchsorted(idler, signal + half, side="left")
        matches = hi - lo
        total = int(matches.sum())
        if total:
            sig_idx = np.repeat(np.arange(signal.size), matches)
            offsets = np.arange(total) - np.repeat(np.cumsum(matches) - matches, matches)
            diffs = idler[np.repeat(lo, matches) + offsets] - signal[sig_idx]
            bin_idx = np.floor((diffs + half) / bin_width_s).astype(np.int64)
            keep = (bin_idx >= 0) & (bin_idx < n_bins)
            counts = np.bincount(bin_idx[keep], minlength=n_bins).astype(np.int64)

    if total_time_s is None:
        spans = [ts[-1] - ts[0] for ts in (signal, idler) if ts.size > 1]
        total_time_s = max(spans) if spans else 0.0
    return CoincidenceHistogram(bin_width_s, edges, counts, total_time_s)


def car_from_histogram(
    hist: CoincidenceHistogram,
    peak_center_bin: int | None = None,
    peak_bins: int = CAR_PEAK_BINS,
    guard_bins: int = 0,
) -> float:
    """CAR = mean of the peak window / mean of all remaining bins.

    The window is ``peak_bins`` bins centered on ``peak_center_bin`` (default:
    the zero-delay bin).  ``guard_bins`` extra bins on each side are excluded
    from the accidental average.  Returns +inf when the accidental mean is 0
    while the peak is not.
    """
    counts = hist.counts
    if hist.n_bins < 3 * peak_bins:
        raise DomainError(
            f"need at least {3 * peak_bins} bins for a {peak_bins}-bin peak window, "
            f"got {hist.n_bins}"
        )
    if peak_bins < 1 or peak_bins % 2 == 0:
        raise DomainError("peak window must be an odd number of bins")
    if guard_bins < 0:
        raise DomainError("guard_bins must be >= 0")
    if int(counts.sum()) == 0:
        raise DataError("CAR is undefined for an all-zero histogram")
    center = hist.central_bin if peak_center_bin is None else int(peak_center_bin)
    half = peak_bins // 2
    lo, hi = center - half, center + half + 1
    if lo < 0 or hi > hist.n_bins:
        raise DomainError(
            f"peak window [{lo}, {hi}) falls outside the histogram ({hist.n_bins} bins)"
        )
    peak_mean = float(counts[lo:hi].mean())
    acc_mask = np.ones(hist.n_bins, dtype=bool)
    acc_mask[max(lo - guard_bins, 0) : min(hi + guard_bins, hist.n_bins)] = False
    if not np.any(acc_mask):
        raise DomainError("no accidental bins left outside peak and guard windows")
    acc_mean = float(counts[acc_mask].mean())
    if acc_mean == 0.0:
        return inf if peak_mean > 0.0 else 1.0
    return peak_mean / acc_mean


@dataclass(frozen=True)
class RateModel:
    """Closed-form coincidence budget for a filtered pair source."""

    pair_rate_hz: float
    bin_width_s: float
    efficiency_signal: float = 1.0
    efficiency_idler: float = 1.0
    noise_rate_signal_hz: float = 0.0
    noise_rate_idler_hz: float = 0.0
    dark_rate_signal_hz: float = 0.0
    dark_rate_idler_hz: float = 0.0

    def __post_init__(self) -> None:
        for name in (
            "pair_rate_hz",
            "noise_rate_signal_hz",
            "noise_rate_idler_hz",
            "dark_rate_signal_hz",
            "dark_rate_idler_hz",
        ):
            if getattr(self, name) < 0.0:
                raise DomainError(f"{name} must be >= 0")
        for name in ("efficiency_signal", "efficiency_idler"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise DomainError(f"{name} must be in [0, 1]")
        if not self.bin_width_s > 0.0:
            raise DomainError("bin_width_s must be > 0")

    @property
    def singles_signal_hz(self) -> float:
        return (
            self.efficiency_signal * (self.pair_rate_hz + self.noise_rate_signal_hz)
            + self.dark_rate_signal_hz
        )

    @property
    def singles_idler_hz(self) -> float:
        return (
            self.efficiency_idler * (self.pair_rate_hz + self.noise_rate_idler_hz)
            + self.dark_rate_idler_hz
        )


def predict_rates(model: RateModel, peak_bins: int = 1) -> dict[str, float]:
    """Singles, coincidence and accidental rates plus the predicted CAR.

    CAR = 1 + coincidence/(peak_bins * accidentals); with the default
    peak_bins=1 this is the plain one-bin budget, with peak_bins=5 it matches
    the histogram estimator's 5-bin peak average.
    """
    if peak_bins < 1:
        raise DomainError("peak_bins must be >= 1")
    coincidence = model.pair_rate_hz * model.efficiency_signal * model.efficiency_idler
    accidental = model.singles_signal_hz * model.singles_idler_hz * model.bin_width_s
    if accidental == 0.0:
        car = inf if coincidence > 0.0 else 1.0
    else:
        car = 1.0 + coincidence / (peak_bins * accidental)
    return {
        "singles_signal_hz": model.singles_signal_hz,
        "singles_idler_hz": model.singles_idler_hz,
        "coincidence_hz": coincidence,
        "accidental_hz": accidental,
        "car": car,
    }


def synthesize_timestamps(
    model: RateModel, duration_s: float, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Poisson pair events (thinned per arm) plus noise/darks, per channel.

    Pairs arrive jointly at pair_rate and are detected with the per-arm
    efficiencies; uncorrelated noise photons pass the same efficiencies and
    dark counts add directly.  Deterministic for a fixed seed.
    """
    if not duration_s > 0.0:
        raise DomainError("duration_s must be > 0")
    rng = np.random.default_rng(seed)

    def poisson_times(rate_hz: float) -> np.ndarray:
        if rate_hz == 0.0:
            return np.empty(0)
        n = rng.poisson(rate_hz * duration_s)
        return rng.random(n) * duration_s

    pair_times = poisson_times(model.pair_rate_hz)
    signal = pair_times[rng.random(pair_times.size) < model.efficiency_signal]
    idler = pair_times[rng.random(pair_times.size) < model.efficiency_idler]
    extra_signal = poisson_times(
        model.efficiency_signal * model.noise_rate_signal_hz + model.dark_rate_signal_hz
    )
    extra_idler = poisson_times(
        model.efficiency_idler * model.noise_rate_idler_hz + model.dark_rate_idler_hz
    )
    signal = np.sort(np.concatenate([signal, extra_signal]))
    idler = np.sort(np.concatenate([idler, extra_idler]))
    return signal, idler


def write_timestamps_csv(path: str | Path, signal_ts, idler_ts) -> None:
    """Write the two channels in the `channel,timestamp_s` interchange format."""
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("channel", "timestamp_s"))
        for name, ts in (("signal", signal_ts), ("idler", idler_ts)):
            for t in np.asarray(ts, dtype=float):
                writer.writerow((name, repr(float(t))))


def read_timestamps_csv(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    """Read `channel,timestamp_s` data; each channel must be monotone."""
    path = Path(path)
    streams: dict[str, list[float]] = {"signal": [], "idler": []}
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DataError(f"{path}: empty timestamp file")
        if [h.strip() for h in header] != ["channel", "timestamp_s"]:
            raise DataError(f"{path}: expected header 'channel,timestamp_s'")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise DataError(f"{path}:{lineno}: expected 2 columns")
            channel = row[0].strip()
            if channel not in streams:
                raise DataError(
                    f"{path}:{lineno}: unknown channel {channel!r} (signal|idler)"
                )
            try:
                streams[channel].append(float(row[1]))
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: bad timestamp {row[1]!r}") from exc
    if not streams["signal"] and not streams["idler"]:
        raise DataError(f"{path}: no timestamps found")
    signal = _check_sorted("signal", np.asarray(streams["signal"]))
    idler = _check_sorted("idler", np.asarray(streams["idler"]))
    return signal, idler
