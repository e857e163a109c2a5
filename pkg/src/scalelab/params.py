"""Transformer parameter accounting and the total/non-embedding map.

Parameters are counted with the standard 12*l*d^2 rule for the transformer
blocks plus (h+v)*d for the embedding matrices.  The two counting bases are
related by the strictly increasing map

    n_total = n_nonembed + omega * n_nonembed**delta

whose coefficients can be fitted from a suite of model configurations or
derived in closed form from a fixed width/depth aspect ratio.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

__all__ = [
    "DEFAULT_OMEGA",
    "DEFAULT_EMBED_MAP",
    "ModelShape",
    "ParamSplit",
    "EmbedMap",
    "EmbedMapFit",
    "count_params",
    "total_from_nonembed",
    "nonembed_from_total",
    "fit_embed_map",
    "omega_from_shape",
    "load_model_configs",
    "bundled_config_path",
]

THIRD = 1.0 / 3.0

# Calibrated on the bundled model-configuration suite (see data/); downstream
# analytic defaults use this omega together with delta = 1/3.
DEFAULT_OMEGA = 47491.0


@dataclass(frozen=True)
class ModelShape:
    """Transformer sizing used for parameter counting.

    ``context_learned`` is the context length and must be 0 unless the
    positional embeddings are learned (fixed encodings carry no parameters).
    """

    d_model: int
    n_layers: int
    vocab: int = 0
    context_learned: int = 0

    def __post_init__(self):
        for name in ("d_model", "n_layers", "vocab", "context_learned"):
            value = getattr(self, name)
            if value != int(value):
                raise ValueError(f"{name} must be an integer, got {value!r}")
        if self.d_model < 1 or self.n_layers < 1:
            raise ValueError("degenerate shape: d_model and n_layers must be >= 1")
        if self.vocab < 0 or self.context_learned < 0:
            raise ValueError("vocab and context_learned must be >= 0")

    @property
    def aspect_ratio(self) -> float:
        return self.d_model / self.n_layers


@dataclass(frozen=True)
class ParamSplit:
    """Embedding / non-embedding parameter counts; total is their exact sum."""

    n_embed: float
    n_nonembed: float

    def __post_init__(self):
        if self.n_embed < 0 or self.n_nonembed < 0:
            raise ValueError("parameter counts must be >= 0")

    @property
    def n_total(self) -> float:
        return self.n_embed + self.n_nonembed


@dataclass(frozen=True)
class EmbedMap:
    """Coefficients of n_total = n_nonembed + omega * n_nonembed**delta.

    omega = 0 degenerates to the identity map (the two bases coincide).
    The analytic closed forms elsewhere in the package require delta = 1/3.
    """

    omega: float
    delta: float = THIRD

    def __post_init__(self):
        if self.omega < 0:
            raise ValueError("omega must be >= 0")
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")


DEFAULT_EMBED_MAP = EmbedMap(DEFAULT_OMEGA, THIRD)


@dataclass(frozen=True)
class EmbedMapFit:
    """Fitted map plus least-squares diagnostics (log-space residuals)."""

    embed_map: EmbedMap
    r_squared: float
    n_points: int


def count_params(shape: ModelShape) -> ParamSplit:
    """Count parameters: 12*l*d^2 non-embedding, (h+v)*d embedding."""
    n_nonembed = 12 * shape.n_layers * shape.d_model**2
    n_embed = (shape.context_learned + shape.vocab) * shape.d_model
    return ParamSplit(n_embed=n_embed, n_nonembed=n_nonembed)


def total_from_nonembed(n_nonembed, embed_map: EmbedMap):
    """Map a non-embedding count to the total count; strictly increasing.

    Accepts scalars or arrays; all inputs must be > 0.
    """
    n = np.asarray(n_nonembed, dtype=float)
    if np.any(n <= 0):
        raise ValueError("n_nonembed must be > 0")
    out = n + embed_map.omega * n**embed_map.delta
    return float(out) if np.isscalar(n_nonembed) else out


def nonembed_from_total(n_total: float, embed_map: EmbedMap, rel_tol: float = 1e-10) -> float:
    """Invert the parameter map by bisection on the monotone residual.

    Returns the unique n_nonembed with n_nonembed + omega*n_nonembed**delta
    equal to ``n_total`` to relative tolerance ``rel_tol``.
    """
    if n_total <= 0:
        raise ValueError("n_total must be > 0")
    if embed_map.omega == 0.0:
        return float(n_total)

    def residual(x):
        return x + embed_map.omega * x**embed_map.delta - n_total

    lo = min(n_total / 2.0, 1.0)
    # The root can sit far below 1 when omega dominates; expand the bracket.
    while residual(lo) > 0.0:
        lo /= 16.0
        if lo < 1e-300:
            raise ArithmeticError("failed to bracket the inverse map")
    hi = float(n_total)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if residual(mid) < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= rel_tol * hi:
            return 0.5 * (lo + hi)
    raise ArithmeticError("bisection did not converge")  # pragma: no cover


def fit_embed_map(splits: list[ParamSplit]) -> EmbedMapFit:
    """Fit omega, delta by OLS of log(n_embed) on log(n_nonembed).

    The assumed form n_total = n_nonembed + omega*n_nonembed**delta is linear
    in log space after subtracting the non-embedding count, so the fit is
    exact for noiseless data and fully deterministic.
    """
    if len(splits) < 2:
        raise ValueError("need >=2 configurations to fit the embedding map")
    n_embed = np.array([s.n_embed for s in splits], dtype=float)
    n_nonembed = np.array([s.n_nonembed for s in splits], dtype=float)
    if np.any(n_embed <= 0):
        raise ValueError("all configurations need n_embed > 0")
    if np.any(n_nonembed <= 0):
        raise ValueError("all configurations need n_nonembed > 0")
    if np.unique(n_nonembed).size < 2:
        raise ValueError("need >=2 distinct n_nonembed values")

    log_x = np.log(n_nonembed)
    log_y = np.log(n_embed)
    delta, log_omega = np.polyfit(log_x, log_y, 1)
    resid = log_y - (log_omega + delta * log_x)
    ss_tot = np.sum((log_y - log_y.mean()) ** 2)
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - np.sum(resid**2) / ss_tot
    return EmbedMapFit(
        embed_map=EmbedMap(float(np.exp(log_omega)), float(delta)),
        r_squared=float(r_squared),
        n_points=len(splits),
    )


def omega_from_shape(vocab: float, context_learned: float, aspect_ratio: float) -> float:
    """Closed-form omega = (v+h) * (A/12)**(1/3) for a fixed aspect ratio."""
    if aspect_ratio <= 0:
        raise ValueError("aspect_ratio must be > 0")
    if vocab + context_learned <= 0:
        raise ValueError("vocab + context_learned must be > 0")
    return (vocab + context_learned) * (aspect_ratio / 12.0) ** THIRD


def load_model_configs(path) -> list[ParamSplit]:
    """Read model configurations from CSV.

    Expected header: name,d_model,n_layers,vocab,context_learned[,n_nonembed].
    When the optional n_nonembed column is absent or empty it is computed
    from the shape via ``count_params``.
    """
    splits = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"name", "d_model", "n_layers", "vocab", "context_learned"}
        missing = required - set(reader.fieldnames or [])
        if missing:
            raise ValueError(f"config CSV missing columns: {sorted(missing)}")
        for row in reader:
            shape = ModelShape(
                d_model=int(row["d_model"]),
                n_layers=int(row["n_layers"]),
                vocab=int(row["vocab"]),
                context_learned=int(row["context_learned"]),
            )
            counted = count_params(shape)
            explicit = row.get("n_nonembed")
            if explicit is not None and explicit.strip():
                splits.append(ParamSplit(counted.n_embed, float(explicit)))
            else:
                splits.append(counted)
    if not splits:
        raise ValueError("config CSV contains no rows")
    return splits


def bundled_config_path() -> Path:
    """Path of the bundled model-configuration suite."""
    return Path(str(resources.files("scalelab.data") / "chinchilla_models.csv"))
