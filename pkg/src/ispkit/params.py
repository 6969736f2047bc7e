"""The 19 controllable pipeline parameters and their (de)serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DegenerateConstraintError, ParameterDomainError

PARAMS_FORMAT_VERSION = 1

# Flat vector layout: dg, wb_r, wb_b, ccm row-major (9), offset (3),
# gamma, tone_s, tone_p1, tone_p2.
PARAM_NAMES = (
    "dg",
    "wb_r",
    "wb_b",
    "ccm_11", "ccm_12", "ccm_13",
    "ccm_21", "ccm_22", "ccm_23",
    "ccm_31", "ccm_32", "ccm_33",
    "offset_1", "offset_2", "offset_3",
    "gamma",
    "tone_s", "tone_p1", "tone_p2",
)

N_PARAMS = 19

# Minimum |row sum| for which row normalization is considered well defined.
ROW_SUM_FLOOR = 1e-3


@dataclass(frozen=True)
class IspParams:
    """Parameter set for the five-stage pipeline.

    ``ccm`` rows are expected to sum to 1; use :func:`normalize_ccm_rows`
    to project an arbitrary matrix onto that constraint.
    """

    dg: float = 1.0
    wb_r: float = 1.0
    wb_b: float = 1.0
    ccm: np.ndarray = field(default_factory=lambda: np.eye(3))
    offset: np.ndarray = field(default_factory=lambda: np.zeros(3))
    gamma: float = 1.0
    tone_s: float = 1.0
    tone_p1: float = 1.0
    tone_p2: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "ccm", np.asarray(self.ccm, dtype=float).reshape(3, 3))
        object.__setattr__(self, "offset", np.asarray(self.offset, dtype=float).reshape(3))

    def validate(self) -> None:
        vec = self.to_vector()
        if not np.all(np.isfinite(vec)):
            raise ParameterDomainError("non-finite parameter value")
        for name in ("dg", "wb_r", "wb_b", "gamma", "tone_p1", "tone_p2"):
            if getattr(self, name) <= 0:
                raise ParameterDomainError(f"{name} must be > 0, got {getattr(self, name)}")

    def to_vector(self) -> np.ndarray:
        return np.concatenate((
            [self.dg, self.wb_r, self.wb_b],
            self.ccm.ravel(),
            self.offset,
            [self.gamma, self.tone_s, self.tone_p1, self.tone_p2],
        ))

    @classmethod
    def from_vector(cls, vec) -> "IspParams":
        vec = np.asarray(vec, dtype=float)
        if vec.shape != (N_PARAMS,):
            raise ParameterDomainError(f"expected {N_PARAMS} values, got shape {vec.shape}")
        return cls(
            dg=float(vec[0]),
            wb_r=float(vec[1]),
            wb_b=float(vec[2]),
            ccm=vec[3:12].reshape(3, 3),
            offset=vec[12:15].copy(),
            gamma=float(vec[15]),
            tone_s=float(vec[16]),
            tone_p1=float(vec[17]),
            tone_p2=float(vec[18]),
        )

    def to_dict(self) -> dict:
        d = {name: float(v) for name, v in zip(PARAM_NAMES, self.to_vector())}
        d["format_version"] = PARAMS_FORMAT_VERSION
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "IspParams":
        try:
            vec = [float(d[name]) for name in PARAM_NAMES]
        except KeyError as exc:
            raise ParameterDomainError(f"missing parameter field {exc}") from exc
        return cls.from_vector(vec)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "IspParams":
        return cls.from_dict(json.loads(text))


def default_params() -> IspParams:
    """Starting parameter set: mild gain, identity color, display gamma, S-curve."""
    return IspParams(
        dg=1.2,
        wb_r=1.0,
        wb_b=1.0,
        ccm=np.eye(3),
        offset=np.zeros(3),
        gamma=1.0 / 2.2,
        tone_s=3.0,
        tone_p1=2.0,
        tone_p2=3.0,
    )


def normalize_ccm_rows(params: IspParams) -> IspParams:
    """Project the CCM onto the rows-sum-to-one constraint.

    Idempotent; the identity matrix is a fixed point. Raises
    :class:`DegenerateConstraintError` if any |row sum| <= 1e-3.
    """
    sums = params.ccm.sum(axis=1)
    if np.any(np.abs(sums) <= ROW_SUM_FLOOR):
        raise DegenerateConstraintError(f"CCM row sums {sums} too close to zero to normalize")
    return replace(params, ccm=params.ccm / sums[:, None])
