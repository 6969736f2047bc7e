"""Greedy coordinate search over task vectors against a black-box error.

One evaluation per step: the current task vector is scored; on failure the
last coordinate step is reverted and the next coordinate tried; after a
full cycle of failures the whole vector is bumped up by the step size.
The loop runs until K+1 consecutive failures. The best-scoring vector seen
is returned (the final vector carries an unevaluated trailing step).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .decoder import DecoderWeights, decode
from .errors import ParameterDomainError
from .metrics import mse
from .pipeline import apply_pipeline


@dataclass(frozen=True)
class SearchConfig:
    t_init: np.ndarray
    step: float = 0.1
    max_fails: int = 100

    def __post_init__(self):
        object.__setattr__(self, "t_init", np.asarray(self.t_init, dtype=float).reshape(-1))

    def validate(self) -> None:
        if self.step <= 0:
            raise ParameterDomainError(f"step must be > 0, got {self.step}")
        if self.max_fails < 0:
            raise ParameterDomainError(f"max_fails must be >= 0, got {self.max_fails}")


@dataclass(frozen=True)
class TraceEntry:
    t: np.ndarray
    error: float
    improved: bool
    diagonal_jump: bool


@dataclass
class SearchTrace:
    entries: list[TraceEntry] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def to_lines(self) -> list[str]:
        lines = []
        for idx, e in enumerate(self.entries):
            tag = "improve" if e.improved else ("jump" if e.diagonal_jump else "fail")
            tvals = ",".join(repr(v) for v in e.t)
            lines.append(f"{idx}\t{tvals}\t{e.error!r}\t{tag}")
        return lines


@dataclass(frozen=True)
class SearchState:
    """Value-type state of one search; advanced one evaluation at a time."""

    t: np.ndarray
    best_t: np.ndarray
    best_error: float
    coord: int
    cycle_fails: int
    consecutive_fails: int
    evaluations: int
    max_fails: int
    step: float

    @property
    def finished(self) -> bool:
        return self.consecutive_fails > self.max_fails

    @classmethod
    def fresh(cls, cfg: SearchConfig) -> "SearchState":
        cfg.validate()
        t = cfg.t_init.copy()
        return cls(
            t=t,
            best_t=t.copy(),
            best_error=float("inf"),
            coord=0,
            cycle_fails=0,
            consecutive_fails=0,
            evaluations=0,
            max_fails=cfg.max_fails,
            step=cfg.step,
        )


def search_step(state: SearchState, oracle: Callable[[np.ndarray], float],
                trace: SearchTrace | None = None) -> SearchState:
    """One evaluation of the greedy loop body. No-op if already finished."""
    if state.finished:
        return state
    ndim = state.t.shape[0]
    t = state.t.copy()
    error = float(oracle(t))
    coord = state.coord
    cycle_fails = state.cycle_fails
    consecutive_fails = state.consecutive_fails
    best_t = state.best_t
    best_error = state.best_error
    diagonal = False
    if best_error < error:
        t[coord] -= state.step
        coord = (coord + 1) % ndim
        cycle_fails += 1
        consecutive_fails += 1
        if cycle_fails == ndim:
            t += state.step
            cycle_fails = 0
            diagonal = True
    else:
        best_error = error
        best_t = t.copy()
        cycle_fails = 0
        consecutive_fails = 0
    if trace is not None:
        trace.entries.append(TraceEntry(
            t=state.t.copy(),
            error=error,
            improved=consecutive_fails == 0,
            diagonal_jump=diagonal,
        ))
    t[coord] += state.step
    return replace(
        state,
        t=t,
        best_t=best_t,
        best_error=best_error,
        coord=coord,
        cycle_fails=cycle_fails,
        consecutive_fails=consecutive_fails,
        evaluations=state.evaluations + 1,
    )


def search_to_completion(cfg: SearchConfig, oracle: Callable[[np.ndarray], float]
                         ) -> tuple[np.ndarray, float, SearchTrace]:
    """Run the greedy loop on an arbitrary error oracle until termination."""
    state = SearchState.fresh(cfg)
    trace = SearchTrace()
    while not state.finished:
        state = search_step(state, oracle, trace)
    return state.best_t.copy(), state.best_error, trace


def make_mse_oracle(input_img, reference, w: DecoderWeights) -> Callable[[np.ndarray], float]:
    input_img = np.asarray(input_img, dtype=float)
    reference = np.asarray(reference, dtype=float)

    def oracle(t: np.ndarray) -> float:
        return mse(apply_pipeline(input_img, decode(t, w)), reference)

    return oracle


def greedy_search(input_img, reference, w: DecoderWeights, cfg: SearchConfig
                  ) -> tuple[np.ndarray, float, SearchTrace]:
    """Search task vectors minimizing rendered MSE against the reference."""
    return search_to_completion(cfg, make_mse_oracle(input_img, reference, w))


def best_of_candidates(input_img, candidates: Sequence, w: DecoderWeights,
                       metric: Callable[[np.ndarray], float]) -> np.ndarray:
    """Pick the candidate whose render maximizes ``metric``; first wins ties."""
    if len(candidates) == 0:
        raise ParameterDomainError("need at least one candidate task vector")
    input_img = np.asarray(input_img, dtype=float)
    best = None
    best_score = -float("inf")
    for cand in candidates:
        cand = np.asarray(cand, dtype=float)
        score = float(metric(apply_pipeline(input_img, decode(cand, w))))
        if score > best_score:
            best_score = score
            best = cand
    return best
