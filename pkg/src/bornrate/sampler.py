"""Reproducible detection-event streams drawn from a screen distribution.

Sampling is inverse-transform: emission ``i`` consumes exactly one uniform
from a counter-based position stream and one from an independent thinning
stream, so a run is replayable bit-for-bit from ``(spec, efficiency,
emitted_count, seed)`` and the positions of surviving events do not depend on
the detector efficiency.

RNG contract (identifier stored in every event-log header): Philox4x64-10
keyed with ``(seed, stream)`` where stream 0 drives positions and stream 1
drives the thinning coins; each raw 64-bit word maps to a uniform via
``(word >> 11) * 2**-53``.
"""

from dataclasses import dataclass
import json
import math

import numpy as np
from numpy.random import Philox

from .errors import EventLogFormatError, InsufficientDataError, InvalidParameterError
from .wavefunction import WavefunctionSpec, spec_from_config, spec_json

__all__ = [
    "RNG_ALGORITHM",
    "DetectorModel",
    "DetectionEvent",
    "EventLog",
    "GoodnessOfFit",
    "sample_events",
    "goodness_of_fit",
    "dkw_bound",
    "derive_seed",
    "write_event_log",
    "read_event_log",
]

RNG_ALGORITHM = "philox4x64-10;streams=position:0,thinning:1;u=(word>>11)*2^-53"

_POSITION_STREAM = 0
_THINNING_STREAM = 1

_MASK64 = (1 << 64) - 1


def derive_seed(base_seed: int, index: int) -> int:
    """Deterministic per-replica seed: the ``index``-th splitmix64 output.

    splitmix64 advances ``state += 0x9E3779B97F4A7C15`` and mixes; replicas
    of a sweep use ``derive_seed(base_seed, r)`` so any cell can be
    regenerated in isolation.
    """
    if index < 0:
        raise InvalidParameterError("derive_seed index must be non-negative")
    state = (int(base_seed) + (index + 1) * 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _uniforms(seed: int, stream: int, count: int) -> np.ndarray:
    """``count`` uniforms in [0, 1) from the keyed Philox stream."""
    key = np.array([seed & _MASK64, stream], dtype=np.uint64)
    raw = Philox(key=key).random_raw(count)
    return (raw >> np.uint64(11)) * 2.0**-53


@dataclass(frozen=True)
class DetectorModel:
    """Detector with recording probability ``efficiency`` in [0, 1]."""

    efficiency: float = 1.0

    def __post_init__(self):
        e = self.efficiency
        if not (isinstance(e, (int, float)) and math.isfinite(e) and 0.0 <= e <= 1.0):
            raise InvalidParameterError(f"detector efficiency must lie in [0, 1], got {e}")


@dataclass(frozen=True)
class DetectionEvent:
    seq: int  # 1-based detection order
    x: float  # screen position


class EventLog:
    """Ordered detection record of one run plus its provenance metadata."""

    def __init__(self, positions, seed, spec, detector, emitted_count):
        positions = np.asarray(positions, dtype=float)
        if positions.ndim != 1:
            raise InvalidParameterError("positions must be a 1-d array")
        if positions.size > emitted_count:
            raise InvalidParameterError("more recorded events than emissions")
        positions = positions.copy()
        positions.flags.writeable = False
        self.positions = positions
        self.seed = int(seed)
        self.spec = spec
        self.detector = detector
        self.emitted_count = int(emitted_count)

    def __len__(self):
        return self.positions.size

    @property
    def events(self):
        """Materialized :class:`DetectionEvent` list (prefer ``positions`` in bulk code)."""
        return [DetectionEvent(i + 1, float(x)) for i, x in enumerate(self.positions)]

    def __eq__(self, other):
        if not isinstance(other, EventLog):
            return NotImplemented
        return (
            self.seed == other.seed
            and self.spec == other.spec
            and self.detector == other.detector
            and self.emitted_count == other.emitted_count
            and np.array_equal(self.positions, other.positions)
        )

    def __repr__(self):
        return (
            f"EventLog(n={len(self)}, emitted={self.emitted_count}, "
            f"e={self.detector.efficiency}, seed={self.seed})"
        )


def sample_events(dist, detector, emitted_count, seed) -> EventLog:
    """Emit ``emitted_count`` particles from ``dist`` and record each with
    probability ``detector.efficiency``.

    Identical arguments reproduce the identical log bit-for-bit; recorded
    positions appear in emission order.
    """
    if emitted_count < 0:
        raise InvalidParameterError("emitted_count must be non-negative")
    seed = int(seed) & _MASK64

    e = detector.efficiency
    if emitted_count == 0:
        recorded = np.empty(0)
    else:
        coins = _uniforms(seed, _THINNING_STREAM, emitted_count)
        accepted = coins < e
        position_u = _uniforms(seed, _POSITION_STREAM, emitted_count)
        recorded = dist._quantile_batch(position_u[accepted])
    return EventLog(recorded, seed, dist.spec, detector, emitted_count)


def dkw_bound(n: int, miss_probability: float = 0.001) -> float:
    """Sup-deviation band: exceeded with probability at most ``miss_probability``
    by ``2 exp(-2 n eps**2)``."""
    return math.sqrt(math.log(2.0 / miss_probability) / (2.0 * n))


@dataclass(frozen=True)
class GoodnessOfFit:
    sup_deviation: float
    n_events: int
    band: float                  # 99.9% sup-deviation band for this n
    within_band: bool


def goodness_of_fit(log: EventLog, dist) -> GoodnessOfFit:
    """Unbinned sampler self-check against the reference cdf.

    Evaluates the step empirical cdf at the event positions themselves and
    reports the largest discrepancy from ``dist.cdf``; the run is flagged
    when it exceeds the 99.9% band, which a faithful sampler hits about one
    run in a thousand.
    """
    n = len(log)
    if n == 0:
        raise InsufficientDataError("goodness_of_fit needs a non-empty event log")
    xs = np.sort(log.positions)
    ref = dist.cdf(xs)
    steps = np.arange(1, n + 1) / n
    d_raw = float(np.max(np.abs(steps - ref)))
    band = dkw_bound(n)
    return GoodnessOfFit(d_raw, n, band, d_raw <= band)


# ----------------------------------------------------------------------------
# event-log file format
# ----------------------------------------------------------------------------
#
#   # seed=<u64>
#   # e=<decimal>
#   # spec=<json>
#   # emitted=<int>
#   # rng=<algorithm identifier>
#   ... optional extra "# key=value" lines ...
#   seq,x
#   1,<x at 17 significant digits>
#
# parse(serialize(log)) == log exactly: %.17g round-trips every double.

def write_event_log(log: EventLog, path, extra_header=None) -> None:
    """Serialize an event log; see the module-level format comment."""
    lines = [
        f"# seed={log.seed}",
        f"# e={log.detector.efficiency!r}",
        f"# spec={spec_json(log.spec)}",
        f"# emitted={log.emitted_count}",
        f"# rng={RNG_ALGORITHM}",
    ]
    for key in sorted(extra_header or {}):
        lines.append(f"# {key}={extra_header[key]}")
    lines.append("seq,x")
    lines.extend(
        f"{i},{x:.17g}" for i, x in enumerate(log.positions, start=1)
    )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")


def read_event_log(path) -> EventLog:
    """Parse an event-log file back into an :class:`EventLog`.

    Raises :class:`EventLogFormatError` (with the offending line number) on
    malformed headers, missing metadata, or broken sequence numbering.
    """
    header = {}
    positions = []
    expected_seq = 1
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                key, sep, value = body.partition("=")
                if not sep:
                    raise EventLogFormatError(
                        f"{path}:{line_no}: header line without '='", line_no
                    )
                header[key.strip()] = value
                continue
            if line == "seq,x":
                continue
            seq_str, sep, x_str = line.partition(",")
            if not sep:
                raise EventLogFormatError(
                    f"{path}:{line_no}: expected 'seq,x' row", line_no
                )
            try:
                seq = int(seq_str)
                x = float(x_str)
            except ValueError:
                raise EventLogFormatError(
                    f"{path}:{line_no}: non-numeric event row {line!r}", line_no
                )
            if seq != expected_seq:
                raise EventLogFormatError(
                    f"{path}:{line_no}: sequence number {seq}, expected {expected_seq}",
                    line_no,
                )
            expected_seq += 1
            positions.append(x)

    for required in ("seed", "e", "spec", "emitted"):
        if required not in header:
            raise EventLogFormatError(f"{path}: missing '# {required}=' header")
    try:
        seed = int(header["seed"])
        efficiency = float(header["e"])
        emitted = int(header["emitted"])
        spec = spec_from_config(json.loads(header["spec"]))
    except (ValueError, json.JSONDecodeError) as exc:
        raise EventLogFormatError(f"{path}: malformed header ({exc})")
    xs = np.array(positions, dtype=float)
    L = spec.support_halfwidth
    if xs.size and (np.min(xs) < -L or np.max(xs) > L):
        raise EventLogFormatError(
            f"{path}: event position outside the spec support [-{L}, {L}]"
        )
    return EventLog(xs, seed, spec, DetectorModel(efficiency), emitted)
