"""Scalar distribution zoo for the simulation designs.

Distributions are named by compact strings such as ``t(2)``,
``normal(0,1)``, ``logistic(0,5)``, ``laplace(0,1)``, ``gumbel(0,1)``,
``loc-scale-t(4,0,1)`` and ``hsd``.  The hyperbolic secant draw uses the
inverse CDF (2/pi) * log(tan(pi*u/2)).
"""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError


class BadDistParam(ConfigError):
    pass


@dataclass(frozen=True)
class Dist:
    kind: str
    params: tuple[float, ...]


_DEFAULT_PARAMS = {
    "t": None,  # requires nu
    "normal": (0.0, 1.0),
    "logistic": (0.0, 1.0),
    "laplace": (0.0, 1.0),
    "gumbel": (0.0, 1.0),
    "loc-scale-t": None,  # requires (nu, mu, s)
    "hsd": (0.0, 1.0),
}

_SPEC_RE = re.compile(r"^\s*([a-zA-Z-]+)\s*(?:\(([^)]*)\))?\s*$")


def parse_dist(spec: str) -> Dist:
    """Parse a distribution spec string into a validated Dist."""
    m = _SPEC_RE.match(spec)
    if not m:
        raise BadDistParam(f"cannot parse distribution spec {spec!r}")
    kind = m.group(1).lower()
    if kind == "lst":
        kind = "loc-scale-t"
    if kind not in _DEFAULT_PARAMS:
        raise BadDistParam(f"unknown distribution {kind!r}")
    raw = m.group(2)
    if raw is None or raw.strip() == "":
        params = _DEFAULT_PARAMS[kind]
        if params is None:
            raise BadDistParam(f"distribution {kind!r} requires parameters")
    else:
        try:
            params = tuple(float(tok) for tok in raw.split(","))
        except ValueError:
            raise BadDistParam(f"non-numeric parameter in {spec!r}") from None
    return validate_dist(Dist(kind, params))


def validate_dist(dist: Dist) -> Dist:
    k, p = dist.kind, dist.params
    if k == "t":
        if len(p) != 1 or p[0] <= 0:
            raise BadDistParam(f"t needs one positive dof, got {p}")
    elif k == "normal":
        if len(p) != 2 or p[1] <= 0:
            raise BadDistParam(f"normal needs (mu, sigma>0), got {p}")
    elif k == "logistic":
        if len(p) != 2 or p[1] <= 0:
            raise BadDistParam(f"logistic needs (mu, s>0), got {p}")
    elif k == "laplace":
        if len(p) != 2 or p[1] <= 0:
            raise BadDistParam(f"laplace needs (mu, b>0), got {p}")
    elif k == "gumbel":
        if len(p) != 2 or p[1] <= 0:
            raise BadDistParam(f"gumbel needs (mu, beta>0), got {p}")
    elif k == "loc-scale-t":
        if len(p) != 3 or p[0] <= 0 or p[2] <= 0:
            raise BadDistParam(f"loc-scale-t needs (nu>0, mu, s>0), got {p}")
    elif k == "hsd":
        if len(p) != 2 or p[1] <= 0:
            raise BadDistParam(f"hsd needs (mu, s>0), got {p}")
    else:
        raise BadDistParam(f"unknown distribution {k!r}")
    return dist


def sample_array(dist: Dist | str, shape, rng: np.random.Generator) -> np.ndarray:
    """Draw an array of the given shape from the distribution."""
    if isinstance(dist, str):
        dist = parse_dist(dist)
    else:
        validate_dist(dist)
    k, p = dist.kind, dist.params
    if k == "t":
        return rng.standard_t(p[0], size=shape)
    if k == "normal":
        return rng.normal(p[0], p[1], size=shape)
    if k == "logistic":
        return rng.logistic(p[0], p[1], size=shape)
    if k == "laplace":
        return rng.laplace(p[0], p[1], size=shape)
    if k == "gumbel":
        return rng.gumbel(p[0], p[1], size=shape)
    if k == "loc-scale-t":
        return p[1] + p[2] * rng.standard_t(p[0], size=shape)
    if k == "hsd":
        u = rng.random(size=shape)
        return p[0] + p[1] * (2.0 / np.pi) * np.log(np.tan(np.pi * u / 2.0))
    raise BadDistParam(f"unknown distribution {k!r}")


def sample_scalar(dist: Dist | str, rng: np.random.Generator) -> float:
    """One draw from the distribution."""
    return float(sample_array(dist, (), rng))
