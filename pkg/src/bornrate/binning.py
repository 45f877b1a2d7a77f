"""Finite binning of detection positions and the binned empirical cdf.

The real line is split into two outer regions that contain no observed
events and ``nbins`` equal-width interior bins spanning exactly the sample
range. Bins are half-open ``[lower_edge, upper_edge)`` except the last,
which is closed so the maximum event is counted. The empirical cdf at the
upper bin edges is a pure count ratio: the bin width cancels, so the values
are invariant under any affine rescaling of the axis.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    DegenerateDataError,
    InsufficientDataError,
    InvalidParameterError,
    OuterRegionViolationError,
)

__all__ = [
    "BinningScheme",
    "BinnedCounts",
    "EmpiricalCdf",
    "choose_binning",
    "bin_index",
    "bin_events",
    "empirical_cdf",
    "merge_counts",
    "write_binned_counts",
    "read_binned_counts",
]

OUTER_LOW = 0  # bin_index result for x below the finite region; above it is nbins + 1


@dataclass(frozen=True)
class BinningScheme:
    """``nbins`` equal bins covering ``[lower, upper]``."""

    lower: float
    upper: float
    nbins: int

    def __post_init__(self):
        if not isinstance(self.nbins, (int, np.integer)) or self.nbins < 1:
            raise InvalidParameterError(f"nbins must be an integer >= 1, got {self.nbins}")
        if not self.lower < self.upper:
            raise DegenerateDataError(
                f"binning region must have positive width, got [{self.lower}, {self.upper}]"
            )

    @property
    def width(self) -> float:
        return (self.upper - self.lower) / self.nbins

    @cached_property
    def upper_edges(self) -> np.ndarray:
        """Upper edge of each bin; the last equals ``upper`` exactly."""
        edges = self.lower + np.arange(1, self.nbins + 1) * self.width
        edges[-1] = self.upper
        edges.flags.writeable = False
        return edges

    @cached_property
    def interior_edges(self) -> np.ndarray:
        return self.upper_edges[:-1]


def choose_binning(log_or_positions, nbins: int) -> BinningScheme:
    """Tightest admissible scheme for the data: edges at the sample min/max.

    Requires at least two distinct positions; chosen once from the full
    record and reused for every prefix.
    """
    if not isinstance(nbins, (int, np.integer)) or nbins < 1:
        raise InvalidParameterError(f"nbins must be an integer >= 1, got {nbins}")
    positions = np.asarray(getattr(log_or_positions, "positions", log_or_positions),
                           dtype=float)
    if positions.size < 2:
        raise DegenerateDataError("binning needs at least 2 events")
    lower = float(np.min(positions))
    upper = float(np.max(positions))
    if lower == upper:
        raise DegenerateDataError(
            f"all events at {lower}: zero-width region cannot be binned"
        )
    return BinningScheme(lower, upper, int(nbins))


def bin_index(scheme: BinningScheme, x):
    """Bin number in ``1..nbins`` for interior ``x``; ``OUTER_LOW`` (0) below
    the region and ``nbins + 1`` above it.

    Total over the reals. An interior point on a bin edge belongs to the bin
    above it (half-open convention); ``upper`` itself lands in the last bin.
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    idx = np.searchsorted(scheme.interior_edges, x, side="right") + 1
    idx[x < scheme.lower] = OUTER_LOW
    idx[x > scheme.upper] = scheme.nbins + 1
    return int(idx[0]) if scalar else idx


@dataclass(frozen=True, eq=False)
class BinnedCounts:
    """Per-bin event counts under a fixed scheme."""

    counts: np.ndarray  # int64, length scheme.nbins
    scheme: BinningScheme

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def bin_events(log_or_positions, scheme: BinningScheme) -> BinnedCounts:
    """Count events per bin. Order-free: any permutation gives the same counts.

    Raises :class:`OuterRegionViolationError` if an event falls strictly
    outside ``[lower, upper]`` (the scheme does not belong to this data).
    """
    positions = np.asarray(getattr(log_or_positions, "positions", log_or_positions),
                           dtype=float)
    if positions.size and (
        np.min(positions) < scheme.lower or np.max(positions) > scheme.upper
    ):
        offender = positions[
            (positions < scheme.lower) | (positions > scheme.upper)
        ][0]
        raise OuterRegionViolationError(
            f"event at {offender!r} lies outside the binning region "
            f"[{scheme.lower}, {scheme.upper}]"
        )
    idx = np.searchsorted(scheme.interior_edges, positions, side="right")
    counts = np.bincount(idx, minlength=scheme.nbins).astype(np.int64)
    counts.flags.writeable = False
    return BinnedCounts(counts, scheme)


def merge_counts(a: BinnedCounts, b: BinnedCounts) -> BinnedCounts:
    """Combine counts from disjoint event chunks (associative, commutative)."""
    if a.scheme != b.scheme:
        raise InvalidParameterError("cannot merge counts built on different schemes")
    merged = a.counts + b.counts
    merged.flags.writeable = False
    return BinnedCounts(merged, a.scheme)


@dataclass(frozen=True, eq=False)
class EmpiricalCdf:
    """Cumulative count fraction at the upper bin edges."""

    edges: np.ndarray   # upper edge of bins 1..nbins
    values: np.ndarray  # cumulative fraction; values[-1] == 1.0 exactly


def empirical_cdf(counts: BinnedCounts) -> EmpiricalCdf:
    """Partial count sums over the total, evaluated at the upper bin edges.

    Partial sums stay in integer arithmetic; a single final division makes
    the last value exactly 1. No width factor enters, so the values are
    unchanged by rescaling counts or the coordinate axis.
    """
    total = counts.total
    if total < 1:
        raise InsufficientDataError("empirical cdf needs at least one event")
    partial = np.cumsum(counts.counts, dtype=np.int64)
    values = partial / total
    values.flags.writeable = False
    return EmpiricalCdf(counts.scheme.upper_edges, values)


# CSV form: scheme in "#" header comments, then one row per bin.

def write_binned_counts(counts: BinnedCounts, path) -> None:
    scheme = counts.scheme
    lines = [
        f"# lower={scheme.lower!r}",
        f"# upper={scheme.upper!r}",
        f"# nbins={scheme.nbins}",
        "bin,lower_edge,upper_edge,count",
    ]
    uppers = scheme.upper_edges
    lowers = np.concatenate([[scheme.lower], uppers[:-1]])
    lines.extend(
        f"{i},{lo:.17g},{hi:.17g},{c}"
        for i, (lo, hi, c) in enumerate(zip(lowers, uppers, counts.counts), start=1)
    )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")


def read_binned_counts(path) -> BinnedCounts:
    header = {}
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                header[key.strip()] = value
                continue
            if line.startswith("bin,"):
                continue
            rows.append(line.split(","))
    scheme = BinningScheme(
        float(header["lower"]), float(header["upper"]), int(header["nbins"])
    )
    counts = np.zeros(scheme.nbins, dtype=np.int64)
    for row in rows:
        counts[int(row[0]) - 1] = int(row[3])
    counts.flags.writeable = False
    return BinnedCounts(counts, scheme)
