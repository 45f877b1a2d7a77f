"""Screen-axis intensity models and their probability distributions.

A :class:`WavefunctionSpec` describes the squared-amplitude profile seen by a
detector along one screen coordinate:

* ``gaussian``     -- ``exp(-x**2 / (2 sigma**2))``
* ``single_slit``  -- ``sinc(beta x)**2`` (Fraunhofer envelope, composite
  dimensionless scale ``beta``)
* ``double_slit``  -- ``cos(delta x)**2 * sinc(beta x)**2`` (fringes at the
  composite frequency ``delta`` under the slit envelope)
* ``tabulated``    -- piecewise-linear interpolation of measured ``(x, I)``
  pairs

The profile is truncated to ``[-L, +L]`` and renormalized so it integrates to
one; :func:`validate` turns a spec into a :class:`BornDistribution` that
exposes ``pdf``, ``cdf`` and ``quantile``. The cdf is tabulated by adaptive
Simpson quadrature on a dense grid and evaluated between nodes by a monotone
piecewise-cubic interpolant, so ``cdf`` is non-decreasing by construction and
``quantile`` can bracket-solve it to high accuracy.
"""

from dataclasses import dataclass
import json
import math

import numpy as np
from scipy.interpolate import CubicHermiteSpline
from scipy.special import erfcinv, sici

from .errors import (
    DegenerateSpecError,
    DomainError,
    InvalidSpecError,
    TruncationError,
)
from .quadrature import cell_integrals

__all__ = [
    "WavefunctionSpec",
    "BornDistribution",
    "gaussian",
    "single_slit",
    "double_slit",
    "tabulated",
    "tabulated_from_csv",
    "validate",
    "spec_to_config",
    "spec_from_config",
]

KINDS = ("gaussian", "single_slit", "double_slit", "tabulated")

# Default ceiling on untruncated mass left outside [-L, L], as a fraction of
# the total. Applied to kinds with closed-form tails (gaussian) and to
# tabulated data; the slit envelopes decay only as 1/x**2, so for them the
# window is part of the model and the check runs only on request.
DEFAULT_TRUNCATION_TOL = 1e-12

_GRID_TARGET_ERR = 1e-12    # cdf interpolation error budget
_QUAD_TOL = 1e-10           # absolute tolerance for the cdf-grid quadrature
_QUANTILE_TOL = 1e-12       # |cdf(quantile(p)) - p| after the solve


@dataclass(frozen=True)
class WavefunctionSpec:
    """Parametric description of a screen intensity profile.

    Only the fields relevant to ``kind`` are set; the rest stay ``None``.
    ``support_halfwidth`` is the truncation halfwidth ``L``;
    ``truncation_tol`` overrides the default ceiling on untruncated tail mass
    (``None`` selects the per-kind default).
    """

    kind: str
    sigma: float | None = None
    beta: float | None = None
    delta: float | None = None
    table: tuple[tuple[float, float], ...] | None = None
    support_halfwidth: float = 10.0
    truncation_tol: float | None = None


def gaussian(sigma, support_halfwidth, truncation_tol=None):
    """Gaussian profile with standard deviation ``sigma``."""
    return WavefunctionSpec(
        kind="gaussian",
        sigma=float(sigma),
        support_halfwidth=float(support_halfwidth),
        truncation_tol=truncation_tol,
    )


def single_slit(beta, support_halfwidth, truncation_tol=None):
    """Single-slit envelope ``sinc(beta x)**2``."""
    return WavefunctionSpec(
        kind="single_slit",
        beta=float(beta),
        support_halfwidth=float(support_halfwidth),
        truncation_tol=truncation_tol,
    )


def double_slit(beta, delta, support_halfwidth, truncation_tol=None):
    """Two-slit fringes ``cos(delta x)**2`` under the ``sinc(beta x)**2`` envelope."""
    return WavefunctionSpec(
        kind="double_slit",
        beta=float(beta),
        delta=float(delta),
        support_halfwidth=float(support_halfwidth),
        truncation_tol=truncation_tol,
    )


def tabulated(table, support_halfwidth=None, truncation_tol=None):
    """Tabulated profile from ``(x, intensity)`` pairs.

    ``support_halfwidth`` defaults to the largest ``|x|`` in the table.
    """
    pairs = tuple((float(x), float(i)) for x, i in table)
    if support_halfwidth is None:
        if not pairs:
            raise InvalidSpecError("tabulated spec needs a non-empty table")
        support_halfwidth = max(abs(x) for x, _ in pairs)
    return WavefunctionSpec(
        kind="tabulated",
        table=pairs,
        support_halfwidth=float(support_halfwidth),
        truncation_tol=truncation_tol,
    )


def tabulated_from_csv(path, support_halfwidth=None, truncation_tol=None):
    """Load a tabulated spec from a two-column ``x,intensity`` CSV file.

    Lines starting with ``#`` and a leading non-numeric header row are
    skipped.
    """
    pairs = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise InvalidSpecError(
                    f"{path}:{line_no}: expected two comma-separated columns"
                )
            try:
                pairs.append((float(parts[0]), float(parts[1])))
            except ValueError:
                if line_no == 1:
                    continue  # column-header row
                raise InvalidSpecError(f"{path}:{line_no}: non-numeric row {line!r}")
    return tabulated(pairs, support_halfwidth, truncation_tol)


def spec_to_config(spec: WavefunctionSpec) -> dict:
    """JSON-compatible dict form of a spec (only the fields that are set)."""
    cfg = {"kind": spec.kind, "support_halfwidth": spec.support_halfwidth}
    for key in ("sigma", "beta", "delta", "truncation_tol"):
        value = getattr(spec, key)
        if value is not None:
            cfg[key] = value
    if spec.table is not None:
        cfg["table"] = [[x, i] for x, i in spec.table]
    return cfg


def spec_from_config(cfg: dict) -> WavefunctionSpec:
    """Rebuild a spec from its dict form (inverse of :func:`spec_to_config`)."""
    if not isinstance(cfg, dict) or "kind" not in cfg:
        raise InvalidSpecError("spec config must be a mapping with a 'kind' entry")
    kind = cfg["kind"]
    if kind not in KINDS:
        raise InvalidSpecError(f"unknown spec kind {kind!r}; expected one of {KINDS}")
    known = {"kind", "sigma", "beta", "delta", "table", "support_halfwidth",
             "truncation_tol"}
    unknown = set(cfg) - known
    if unknown:
        raise InvalidSpecError(f"unknown spec fields: {sorted(unknown)}")
    table = cfg.get("table")
    if table is not None:
        table = tuple((float(x), float(i)) for x, i in table)
    return WavefunctionSpec(
        kind=kind,
        sigma=cfg.get("sigma"),
        beta=cfg.get("beta"),
        delta=cfg.get("delta"),
        table=table,
        support_halfwidth=float(cfg.get("support_halfwidth", 10.0)),
        truncation_tol=cfg.get("truncation_tol"),
    )


def spec_json(spec: WavefunctionSpec) -> str:
    """Canonical single-line JSON form (sorted keys, exact float round-trip)."""
    return json.dumps(spec_to_config(spec), sort_keys=True, separators=(",", ":"))


# ----------------------------------------------------------------------------
# raw (unnormalized) intensity evaluation
# ----------------------------------------------------------------------------

def _require_positive(spec, name):
    value = getattr(spec, name)
    if value is None:
        raise InvalidSpecError(f"{spec.kind} spec requires {name}")
    if not math.isfinite(value) or value <= 0:
        raise InvalidSpecError(f"{spec.kind} spec: {name} must be positive, got {value}")
    return float(value)


def _check_fields(spec):
    if spec.kind not in KINDS:
        raise InvalidSpecError(f"unknown spec kind {spec.kind!r}; expected one of {KINDS}")
    L = spec.support_halfwidth
    if not math.isfinite(L) or L <= 0:
        raise InvalidSpecError(f"support_halfwidth must be positive, got {L}")
    if spec.truncation_tol is not None and not 0 < spec.truncation_tol < 1:
        raise InvalidSpecError(
            f"truncation_tol must lie in (0, 1), got {spec.truncation_tol}"
        )
    if spec.kind == "gaussian":
        _require_positive(spec, "sigma")
    elif spec.kind == "single_slit":
        _require_positive(spec, "beta")
    elif spec.kind == "double_slit":
        _require_positive(spec, "beta")
        _require_positive(spec, "delta")
    else:
        table = spec.table
        if table is None or len(table) < 3:
            raise InvalidSpecError("tabulated spec needs at least 3 (x, intensity) points")
        xs = np.array([x for x, _ in table], dtype=float)
        ys = np.array([i for _, i in table], dtype=float)
        if not np.all(np.isfinite(xs)) or not np.all(np.isfinite(ys)):
            raise InvalidSpecError("tabulated spec contains non-finite entries")
        if not np.all(np.diff(xs) > 0):
            raise InvalidSpecError("tabulated x values must be strictly increasing")
        if np.any(ys < 0):
            raise InvalidSpecError("tabulated intensities must be non-negative")
        if not np.any(ys > 0):
            raise DegenerateSpecError("tabulated intensity is identically zero")


def _raw_intensity(spec):
    """Vectorized unnormalized intensity on the whole real line."""
    if spec.kind == "gaussian":
        sigma = spec.sigma

        def f(x):
            return np.exp(-0.5 * (np.asarray(x, dtype=float) / sigma) ** 2)

    elif spec.kind == "single_slit":
        beta = spec.beta

        def f(x):
            # np.sinc(t) = sin(pi t) / (pi t), so rescale the argument
            return np.sinc(np.asarray(x, dtype=float) * (beta / np.pi)) ** 2

    elif spec.kind == "double_slit":
        beta, delta = spec.beta, spec.delta

        def f(x):
            x = np.asarray(x, dtype=float)
            return np.cos(delta * x) ** 2 * np.sinc(x * (beta / np.pi)) ** 2

    else:
        xs = np.array([x for x, _ in spec.table], dtype=float)
        ys = np.array([i for _, i in spec.table], dtype=float)

        def f(x):
            return np.interp(np.asarray(x, dtype=float), xs, ys, left=0.0, right=0.0)

    return f


# ----------------------------------------------------------------------------
# truncation checks
# ----------------------------------------------------------------------------

def _sinc2_one_sided_tail(beta, L):
    """Exact ``integral_L^inf sinc(beta t)**2 dt``.

    By parts: ``int sin(u)**2/u**2 du = -sin(u)**2/u + Si(2u)``, so the tail
    from ``z = beta L`` is ``(pi/2 + sin(z)**2/z - Si(2z)) / beta``.
    """
    z = beta * L
    si_2z, _ = sici(2.0 * z)
    return (0.5 * np.pi + np.sin(z) ** 2 / z - si_2z) / beta


def _check_truncation(spec, truncated_total):
    """Raise :class:`TruncationError` if too much untruncated mass is cut off.

    The gaussian tail has a closed form and is checked against the default
    tolerance. The slit envelopes decay as 1/x**2 (no practical window
    reaches the default), so they are checked only when the spec carries an
    explicit ``truncation_tol``. Tabulated data is checked exactly against
    the mass of table cells outside the window.
    """
    L = spec.support_halfwidth
    tol = spec.truncation_tol

    if spec.kind == "gaussian":
        tol = DEFAULT_TRUNCATION_TOL if tol is None else tol
        tail_fraction = math.erfc(L / (spec.sigma * math.sqrt(2.0)))
        if tail_fraction > tol:
            required = spec.sigma * math.sqrt(2.0) * float(erfcinv(tol))
            raise TruncationError(
                f"gaussian tail mass {tail_fraction:.3g} outside [-{L}, {L}] "
                f"exceeds tolerance {tol:.3g}; need support_halfwidth >= "
                f"{required:.6g}",
                required_halfwidth=required,
            )
    elif spec.kind in ("single_slit", "double_slit"):
        if tol is None:
            return
        # cos(delta x)**2 <= 1 makes the single-slit tail an upper bound for
        # the two-slit profile as well
        tail = 2.0 * _sinc2_one_sided_tail(spec.beta, L)
        tail_fraction = tail / (truncated_total + tail)
        if tail_fraction > tol:
            # asymptotic tail ~ 1/(beta**2 L), inverted for the message
            required = tail * L / (tol * (truncated_total + tail))
            raise TruncationError(
                f"{spec.kind} tail mass fraction {tail_fraction:.3g} outside "
                f"[-{L}, {L}] exceeds tolerance {tol:.3g}; need "
                f"support_halfwidth >= {required:.3g}",
                required_halfwidth=required,
            )
    else:
        tol = DEFAULT_TRUNCATION_TOL if tol is None else tol
        xs = np.array([x for x, _ in spec.table], dtype=float)
        ys = np.array([i for _, i in spec.table], dtype=float)
        # exact mass of the piecewise-linear table outside [-L, L]
        f = _raw_intensity(spec)
        knots = np.unique(np.concatenate([xs, [-L, L]]))
        mids = 0.5 * (knots[:-1] + knots[1:])
        widths = np.diff(knots)
        mass = widths * 0.5 * (f(knots[:-1]) + f(knots[1:]))
        outside = np.sum(mass[(mids < -L) | (mids > L)])
        total = np.sum(mass)
        if total > 0 and outside / total > tol:
            # widest extent of any table cell carrying mass
            carrying = (ys[:-1] + ys[1:]) > 0
            span = np.max(np.maximum(np.abs(xs[:-1]), np.abs(xs[1:]))[carrying])
            raise TruncationError(
                f"tabulated mass fraction {outside / total:.3g} lies outside "
                f"[-{L}, {L}]; need support_halfwidth >= {span:.6g}",
                required_halfwidth=float(span),
            )


# ----------------------------------------------------------------------------
# cdf grid construction
# ----------------------------------------------------------------------------

def _grid_nodes(spec):
    """Quadrature/interpolation nodes for the cdf table.

    Analytic kinds get a symmetric uniform grid (mirrored bitwise around 0)
    whose spacing targets an interpolation error of ``_GRID_TARGET_ERR``
    using a curvature bound on the normalized density's third derivative.
    Tabulated kinds get a uniform grid augmented with the table knots, so
    every cell integrand is a single linear piece and the Hermite cdf cells
    are exact.
    """
    L = spec.support_halfwidth
    if spec.kind == "tabulated":
        xs = np.array([x for x, _ in spec.table], dtype=float)
        knots = xs[(xs > -L) & (xs < L)]
        base = np.linspace(-L, L, 2001)
        return np.unique(np.concatenate([base, knots]))

    if spec.kind == "gaussian":
        curvature = 0.56 / spec.sigma**4
        feature = spec.sigma
    elif spec.kind == "single_slit":
        curvature = 0.35 * spec.beta**4
        feature = np.pi / (2.0 * spec.beta)
    else:
        curvature = 2.8 * spec.beta * (spec.beta + spec.delta) ** 3
        feature = np.pi / (2.0 * (spec.beta + spec.delta))

    h = (384.0 * _GRID_TARGET_ERR / curvature) ** 0.25
    h = min(h, 0.2 * feature)
    half_cells = int(np.clip(math.ceil(L / h), 1000, 500_000))
    half = np.linspace(0.0, L, half_cells + 1)
    return np.concatenate([-half[:0:-1], half])


def _monotone_derivatives(x, y, d):
    """Clamp node derivatives into the monotone region of cubic Hermite data.

    With secant slopes ``s_i >= 0``, any derivative pair inside
    ``[0, 3 s_i]`` keeps the cubic on ``[x_i, x_i+1]`` non-decreasing, so each
    node derivative is clipped to three times the smaller neighboring secant.
    Exact density values pass through unclamped wherever the grid resolves
    the profile, preserving the interpolant's accuracy.
    """
    s = np.diff(y) / np.diff(x)
    s = np.maximum(s, 0.0)
    cap = 3.0 * np.minimum(np.concatenate([s[:1], s]), np.concatenate([s, s[-1:]]))
    return np.clip(d, 0.0, cap)


class BornDistribution:
    """Validated, normalized screen distribution with tabulated cdf.

    Instances are immutable after construction and safe to share across
    workers. Build them with :func:`validate`.
    """

    def __init__(self, spec, nodes, cdf_values, norm, interpolant):
        self.spec = spec
        self.norm = norm
        self._x = nodes
        self._cdf = cdf_values
        self._interp = interpolant
        self._raw = _raw_intensity(spec)

    @property
    def support_halfwidth(self):
        return self.spec.support_halfwidth

    @property
    def cdf_grid(self):
        """Monotone ``(x, cdf)`` node table (read-only views)."""
        x = self._x.view()
        f = self._cdf.view()
        x.flags.writeable = False
        f.flags.writeable = False
        return x, f

    def pdf(self, x):
        """Normalized density; zero outside ``[-L, +L]``."""
        x = np.asarray(x, dtype=float)
        inside = np.abs(x) <= self.support_halfwidth
        out = np.where(inside, self._raw(x) * self.norm, 0.0)
        return float(out) if out.ndim == 0 else out

    def cdf(self, x):
        """Cumulative probability; exactly 0 below ``-L`` and 1 above ``+L``."""
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        L = self.support_halfwidth
        out = np.empty(x.shape, dtype=float)
        below = x <= -L
        above = x >= L
        mid = ~(below | above)
        out[below] = 0.0
        out[above] = 1.0
        if np.any(mid):
            out[mid] = np.clip(self._interp(x[mid]), 0.0, 1.0)
        # NaN input propagates rather than landing in a branch above
        out[np.isnan(x)] = np.nan
        return float(out[0]) if scalar else out

    def quantile(self, p):
        """Inverse cdf: the ``x`` with ``|cdf(x) - p| <= 1e-10``.

        ``quantile(0)`` and ``quantile(1)`` return the exact support edges.
        The solve brackets the containing grid cell and drives the cell's
        cubic to the target with safeguarded Newton/bisection steps.
        """
        p_arr = np.asarray(p, dtype=float)
        if np.any(np.isnan(p_arr)) or np.any(p_arr < 0.0) or np.any(p_arr > 1.0):
            raise DomainError("quantile probability must lie in [0, 1]")
        scalar = p_arr.ndim == 0
        out = self._quantile_batch(np.atleast_1d(p_arr))
        return float(out[0]) if scalar else out

    def _quantile_batch(self, p):
        if p.size == 0:
            return np.empty(0)
        x, F = self._x, self._cdf
        n = x.size
        k = np.searchsorted(F, p, side="right") - 1
        np.clip(k, 0, n - 2, out=k)

        c0, c1, c2, c3 = (self._interp.c[i, k] for i in range(4))
        lo = np.zeros(p.size)
        hi = x[k + 1] - x[k]
        denom = F[k + 1] - F[k]
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(denom > 0.0, hi * (p - F[k]) / denom, 0.5 * hi)
        np.clip(t, lo, hi, out=t)

        for _ in range(64):
            g = ((c0 * t + c1) * t + c2) * t + c3 - p
            if np.max(np.abs(g)) <= _QUANTILE_TOL:
                break
            neg = g < 0.0
            lo = np.where(neg, t, lo)
            hi = np.where(neg, hi, t)
            slope = (3.0 * c0 * t + 2.0 * c1) * t + c2
            with np.errstate(divide="ignore", invalid="ignore"):
                step = t - g / slope
            # closed-interval acceptance: a step landing exactly on a bracket
            # endpoint (e.g. the root itself) must not be bisected away
            mid = 0.5 * (lo + hi)
            t = np.where((step >= lo) & (step <= hi), step, mid)

        out = x[k] + t
        # pin the exact endpoints
        out[p == 0.0] = -self.support_halfwidth
        out[p == 1.0] = self.support_halfwidth
        return out

    def __repr__(self):
        return (
            f"BornDistribution({self.spec.kind}, L={self.support_halfwidth}, "
            f"nodes={self._x.size})"
        )

    # the raw-intensity closure is rebuilt from the spec on unpickle, so
    # distributions can ride through process pools
    def __getstate__(self):
        state = dict(self.__dict__)
        state.pop("_raw")
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        self._raw = _raw_intensity(self.spec)


def validate(spec: WavefunctionSpec) -> BornDistribution:
    """Check a spec's invariants and build its normalized distribution.

    Raises
    ------
    InvalidSpecError
        Missing/non-positive parameters or a malformed table.
    DegenerateSpecError
        Intensity that is identically zero (cannot normalize).
    TruncationError
        Window ``[-L, L]`` cuts off more untruncated mass than the
        truncation tolerance allows (names the required halfwidth).
    """
    _check_fields(spec)
    raw = _raw_intensity(spec)
    nodes = _grid_nodes(spec)

    cells = cell_integrals(raw, nodes, tol=_QUAD_TOL)
    np.maximum(cells, 0.0, out=cells)
    cum = np.concatenate([[0.0], np.cumsum(cells)])
    total = cum[-1]
    if not np.isfinite(total) or total <= 0.0:
        raise DegenerateSpecError(
            f"{spec.kind} intensity has no mass on [-{spec.support_halfwidth}, "
            f"{spec.support_halfwidth}]"
        )

    _check_truncation(spec, total)

    cdf_values = cum / total
    norm = 1.0 / total
    derivs = _monotone_derivatives(nodes, cdf_values, raw(nodes) * norm)
    interpolant = CubicHermiteSpline(nodes, cdf_values, derivs)
    return BornDistribution(spec, nodes, cdf_values, norm, interpolant)
