"""Intrinsic-dimension functionals built on concentration/separation profiles.

Three functionals are provided, all growing as the space concentrates:

* concentration dimension ``1 / (2 * int_0^diam alpha)**2``;
* separation dimension ``1 / (2 * int_0^{1/2} sep)**2``;
* distance-distribution dimension ``m**2 / (2 * sigma**2)`` with ``m`` and
  ``sigma**2`` the product-measure mean and variance of the distance.

Degenerate inputs (zero integral, zero variance) yield ``math.inf``
explicitly; no large sentinel values are used.  The module also brackets
the concentration distance from the space to a one-point space via the
profile's crossing with the line ``alpha = eps/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .concentration import ConcentrationProfile, SeparationProfile
from .errors import InputError
from .mmspace import MMSpace, product_distance_moments

_INTEGRAL_FLOOR = 0.0


def _truncated_integral(profile: ConcentrationProfile, upper: float) -> float:
    """Integral of alpha over [grid start, upper], following the profile's
    quadrature convention."""
    g = profile.eps_grid
    a = profile.alpha
    if upper >= g[-1]:
        return profile.integral()
    if upper <= g[0]:
        return 0.0
    hi = int(np.searchsorted(g, upper, side="right"))
    gt = np.concatenate([g[:hi], [upper]])
    if profile.step:
        at = a[: gt.size]  # right-continuous: value at the left knot rules
        return float(np.sum(at[:-1] * np.diff(gt)))
    a_up = float(np.interp(upper, g, a))
    at = np.concatenate([a[:hi], [a_up]])
    return float(np.trapezoid(at, gt))


def dim_concentration(profile: ConcentrationProfile, unit_range: bool = False) -> float:
    """Concentration dimension ``1 / (2 I)**2`` with ``I = int alpha``.

    The integral runs over ``[0, diameter]`` so the functional is defined
    for unnormalized spaces; ``unit_range=True`` truncates it to
    ``[0, 1]`` (identical whenever the diameter is at most 1).  Returns
    ``inf`` when the integral vanishes.
    """
    if profile.eps_grid.size == 0:
        raise InputError("empty concentration profile")
    i = _truncated_integral(profile, 1.0) if unit_range else profile.integral()
    if i <= _INTEGRAL_FLOOR:
        return math.inf
    return 1.0 / (2.0 * i) ** 2


def dim_separation(profile: SeparationProfile) -> float:
    """Separation dimension ``1 / (2 J)**2`` with ``J = int_0^{1/2} sep``.

    The profile value at its smallest grid point extends the integrand to
    ``kappa -> 0``; returns ``inf`` when the integral vanishes.
    """
    if profile.kappa_grid.size == 0:
        raise InputError("empty separation profile")
    j = profile.integral()
    if j <= _INTEGRAL_FLOOR:
        return math.inf
    return 1.0 / (2.0 * j) ** 2


def dim_chavez(space: MMSpace, include_diagonal: bool = True) -> float:
    """Distance-distribution dimension ``m**2 / (2 sigma**2)``.

    ``m`` and ``sigma**2`` are the mean and variance of the distance under
    the product measure (diagonal pairs included by default; pass
    ``include_diagonal=False`` to condition on distinct index pairs).
    Scale-invariant; ``inf`` when the variance vanishes, singletons
    included.
    """
    m, var = product_distance_moments(space, include_diagonal=include_diagonal)
    if var <= 0.0:
        return math.inf
    return m * m / (2.0 * var)


@dataclass(frozen=True)
class PointBracket:
    """Certified interval for the concentration distance to a point space.

    ``certified_upper`` is False when the underlying profile is only a
    lower bound on alpha, in which case ``hi`` falls back to the diameter.
    """

    lo: float
    hi: float
    certified_upper: bool

    @property
    def midpoint(self) -> float:
        return (self.lo + self.hi) / 2.0


def dconc_to_point_bracket(profile: ConcentrationProfile) -> PointBracket:
    """Bracket the concentration distance to a one-point space.

    Let ``eps*`` be the least grid point with ``alpha(eps) <= eps/2``.
    For an exact profile the distance lies in ``[eps*/2, eps*]``; for a
    lower-bound profile only the lower end is certified and the upper end
    is the diameter, flagged via ``certified_upper=False``.
    """
    if profile.eps_grid.size == 0:
        raise InputError("empty concentration profile")
    if profile.diameter == 0.0:
        return PointBracket(0.0, 0.0, True)
    below = profile.alpha <= profile.eps_grid / 2.0
    if not below.any():
        eps_star = float(profile.diameter)
    else:
        eps_star = float(profile.eps_grid[int(np.argmax(below))])
    if profile.mode == "exact":
        return PointBracket(eps_star / 2.0, eps_star, True)
    return PointBracket(eps_star / 2.0, float(profile.diameter), False)


@dataclass(frozen=True)
class DimensionReport:
    """All dimension functionals of one space plus the point bracket."""

    dim_concentration: float
    dim_separation: float
    dim_chavez: float
    dconc_to_point: tuple[float, float]
    provenance: dict

    def to_json_dict(self) -> dict:
        def enc(v: float):
            return "inf" if math.isinf(v) else v

        return {
            "dim_concentration": enc(self.dim_concentration),
            "dim_separation": enc(self.dim_separation),
            "dim_chavez": enc(self.dim_chavez),
            "dconc_to_point": [self.dconc_to_point[0], self.dconc_to_point[1]],
            "provenance": self.provenance,
        }


def dimension_report(space: MMSpace, alpha_profile: ConcentrationProfile,
                     sep_profile: SeparationProfile,
                     include_diagonal: bool = True) -> DimensionReport:
    """Assemble a report from precomputed profiles."""
    bracket = dconc_to_point_bracket(alpha_profile)
    provenance = {
        "alpha": alpha_profile.metadata(),
        "sep": sep_profile.metadata(),
        "chavez_include_diagonal": include_diagonal,
        "bracket_certified_upper": bracket.certified_upper,
        "n": space.n,
        "label": space.label,
    }
    return DimensionReport(
        dim_concentration=dim_concentration(alpha_profile),
        dim_separation=dim_separation(sep_profile),
        dim_chavez=dim_chavez(space, include_diagonal=include_diagonal),
        dconc_to_point=(bracket.lo, bracket.hi),
        provenance=provenance,
    )
