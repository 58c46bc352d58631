"""Recursive least squares with forgetting for the feedforward output layer."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, InvalidConfigError, LearnerDivergedError


@dataclass(eq=False)
class LearnerState:
    """Output layers and inverse-correlation estimate.

    Attributes
    ----------
    w_control : np.ndarray
        Weights used to compute the feedforward command.
    w_learned : np.ndarray
        Weights adapted by :func:`rls_update`.
    P : np.ndarray
        Running estimate of ``(sum phi phi^T + alpha I)^-1``, shape ``(d, d)``.
    alpha : float
        Learning rate; ``P`` starts at ``I / alpha``.
    forgetting : float
        Forgetting factor in (0, 1].
    last_error : float
        A-priori error of the most recent update (NaN before the first).
    """

    w_control: np.ndarray
    w_learned: np.ndarray
    P: np.ndarray
    alpha: float
    forgetting: float
    last_error: float = math.nan
    n_updates: int = 0

    @property
    def dim(self) -> int:
        return self.w_learned.size


def rls_init(r: int, delta: int, alpha: float, forgetting: float = 1.0 - 1e-6) -> LearnerState:
    """Zero weights of length ``r + delta`` and ``P = I / alpha``."""
    if not alpha > 0:
        raise InvalidConfigError(f"learning rate alpha must be > 0, got {alpha}")
    if not 0.0 < forgetting <= 1.0:
        raise InvalidConfigError(f"forgetting factor must lie in (0, 1], got {forgetting}")
    d = r + delta
    if d < 1:
        raise InvalidConfigError(f"regressor dimension r + delta must be >= 1, got {d}")
    w = np.zeros(d)
    return LearnerState(w_control=w.copy(), w_learned=w, P=np.eye(d) / alpha,
                        alpha=float(alpha), forgetting=float(forgetting))


def rls_update(state: LearnerState, regressor: np.ndarray, target: float) -> LearnerState:
    """One RLS step on the pair ``(regressor, target)``; mutates and returns ``state``.

    ``P`` is updated first and the a-priori error is then applied with the new
    ``P``, so the result equals regularized batch least squares when
    ``forgetting == 1``.
    """
    phi = np.asarray(regressor, dtype=float)
    if phi.shape != (state.dim,):
        raise ContractViolation(f"regressor shape {phi.shape} does not match learner dimension {state.dim}")
    lam = state.forgetting
    P = state.P
    Pphi = P @ phi
    denom = lam + phi @ Pphi
    if not (math.isfinite(denom) and denom > 0):
        raise LearnerDivergedError(f"RLS gain denominator is {denom!r}")
    P -= np.outer(Pphi, Pphi / denom)
    # divide by the forgetting factor and re-symmetrize in one pass
    np.multiply(P + P.T, 0.5 / lam, out=P)
    err = float(state.w_learned @ phi) - target
    state.w_learned -= err * (P @ phi)
    if not (math.isfinite(err) and math.isfinite(state.w_learned.sum())):
        raise LearnerDivergedError(f"non-finite weights after update (a-priori error {err!r})")
    state.last_error = err
    state.n_updates += 1
    return state


def sync_weights(state: LearnerState) -> LearnerState:
    """Copy the learned layer into the control layer."""
    state.w_control[:] = state.w_learned
    return state
