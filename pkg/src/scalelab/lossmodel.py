"""Parametric loss surface in its three coordinate systems.

The surface L(n_total, d) = n_c/n_total**alpha + d_c/d**beta + e_irr is
evaluated directly, or re-expressed through the compute identity c = 6*n*d
in terms of (n_total, c_total), or through the parameter map in terms of
(n_nonembed, c_nonembed).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .params import THIRD, EmbedMap, total_from_nonembed

__all__ = [
    "LossSpec",
    "CHINCHILLA",
    "EPOCH",
    "SPEC_CATALOG",
    "loss_nd",
    "loss_nt_ct",
    "loss_ne_ce",
    "compute_flops",
    "load_loss_spec",
    "resolve_spec",
]


@dataclass(frozen=True)
class LossSpec:
    """Constants (n_c, d_c, alpha, beta, e_irr) of the loss surface."""

    n_c: float
    d_c: float
    alpha: float
    beta: float
    e_irr: float

    def __post_init__(self):
        if min(self.n_c, self.d_c, self.alpha, self.beta) <= 0:
            raise ValueError("n_c, d_c, alpha, beta must all be > 0")
        if self.e_irr < 0:
            raise ValueError("e_irr must be >= 0")


# The two compiled-in constant sets: the original total-parameter fit and the
# re-fitted constants from the later re-analysis.
CHINCHILLA = LossSpec(n_c=406.4, d_c=410.7, alpha=0.3392, beta=0.2849, e_irr=1.693)
EPOCH = LossSpec(n_c=482.0, d_c=2085.43, alpha=0.3478, beta=0.3658, e_irr=1.817)

SPEC_CATALOG = {"chinchilla": CHINCHILLA, "epoch": EPOCH}


def _check_positive(name, value):
    if np.any(np.asarray(value) <= 0):
        raise ValueError(f"{name} must be > 0")


def loss_nd(n_total, d, spec: LossSpec):
    """Loss at total parameters ``n_total`` and tokens ``d`` (nats)."""
    _check_positive("n_total", n_total)
    _check_positive("d", d)
    n = np.asarray(n_total, dtype=float)
    toks = np.asarray(d, dtype=float)
    out = spec.n_c / n**spec.alpha + spec.d_c / toks**spec.beta + spec.e_irr
    if np.isscalar(n_total) and np.isscalar(d):
        return float(out)
    return out


def loss_nt_ct(n_total, c_total, spec: LossSpec):
    """Loss at total parameters and total compute, via d = c/(6n)."""
    _check_positive("n_total", n_total)
    _check_positive("c_total", c_total)
    d = np.asarray(c_total, dtype=float) / (6.0 * np.asarray(n_total, dtype=float))
    return loss_nd(n_total, d if d.ndim else float(d), spec)


def loss_ne_ce(n_nonembed, c_nonembed, spec: LossSpec, embed_map: EmbedMap):
    """Loss at non-embedding parameters and non-embedding compute.

    The first term routes through the parameter map; the second uses the
    identity d = c_total/(6 n_total) = c_nonembed/(6 n_nonembed).  Requires
    delta = 1/3 so results stay consistent with the closed forms.
    """
    if embed_map.delta != THIRD:
        raise ValueError("loss_ne_ce requires delta = 1/3 (analytic form)")
    _check_positive("n_nonembed", n_nonembed)
    _check_positive("c_nonembed", c_nonembed)
    n_total = total_from_nonembed(n_nonembed, embed_map)
    d = np.asarray(c_nonembed, dtype=float) / (6.0 * np.asarray(n_nonembed, dtype=float))
    return loss_nd(n_total, d if d.ndim else float(d), spec)


def compute_flops(n, d):
    """Training FLOPs approximation c = 6*n*d (forward + backward)."""
    return 6.0 * n * d


def load_loss_spec(path) -> LossSpec:
    """Read a custom LossSpec from a JSON object file."""
    with open(path) as fh:
        raw = json.load(fh)
    try:
        return LossSpec(
            n_c=float(raw["n_c"]),
            d_c=float(raw["d_c"]),
            alpha=float(raw["alpha"]),
            beta=float(raw["beta"]),
            e_irr=float(raw["e_irr"]),
        )
    except KeyError as exc:
        raise ValueError(f"spec file missing key: {exc}") from exc


def resolve_spec(selector: str) -> LossSpec:
    """Map 'epoch'/'chinchilla' to catalog constants, anything else to a JSON path."""
    key = selector.lower()
    if key in SPEC_CATALOG:
        return SPEC_CATALOG[key]
    return load_loss_spec(selector)
