"""Univariate-observation dynamic linear model filter.

Kalman-style recursions for a p-dimensional state with a scalar
observation: predict (a, R), forecast (f, Q), update (m, C).  All value
types are immutable-in/new-out; a filter session is a plain sequence of
calls, so independent sessions parallelize freely.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NumericError

_SYM_TOL = 1e-10


def _as_vector(v, p: int, name: str) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.shape != (p,):
        raise ConfigError(f"{name} must have shape ({p},), got {a.shape}")
    return a


def _as_matrix(m, p: int, name: str) -> np.ndarray:
    a = np.asarray(m, dtype=float)
    if a.shape != (p, p):
        raise ConfigError(f"{name} must have shape ({p},{p}), got {a.shape}")
    return a


def _symmetrize(m: np.ndarray) -> np.ndarray:
    return (m + m.T) / 2.0


@dataclass
class ModelSpec:
    """Known quantities of the DLM: evolution matrix G, evolution
    covariance W and observational variance V."""

    state_dim: int
    G: np.ndarray
    W: np.ndarray
    V: float

    def __post_init__(self):
        if self.state_dim < 1:
            raise ConfigError("state_dim must be a positive integer")
        self.G = _as_matrix(self.G, self.state_dim, "G")
        self.W = _as_matrix(self.W, self.state_dim, "W")
        self.V = float(self.V)
        if not (np.isfinite(self.G).all() and np.isfinite(self.W).all()
                and np.isfinite(self.V)):
            raise ConfigError("ModelSpec entries must be finite")
        if self.V <= 0.0:
            raise ConfigError("V must be > 0")
        w = _symmetrize(self.W)
        scale = max(np.abs(w).max(), 1.0)
        if np.abs(self.W - self.W.T).max() > _SYM_TOL * scale:
            raise ConfigError("W must be symmetric")
        if np.linalg.eigvalsh(w).min() < -1e-10 * scale:
            raise ConfigError("W must be positive semi-definite")
        self.W = w

    @classmethod
    def identity_evolution(cls, state_dim: int, omega: float, V: float) -> "ModelSpec":
        """G = I with isotropic evolution variance omega on the diagonal."""
        eye = np.eye(state_dim)
        return cls(state_dim=state_dim, G=eye, W=omega * eye, V=V)


@dataclass
class StateEstimate:
    """Posterior N(m, C) for the state after some number of updates."""

    m: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        self.m = np.asarray(self.m, dtype=float)
        p = self.m.shape[0]
        self.m = _as_vector(self.m, p, "m")
        self.C = _as_matrix(self.C, p, "C")
        scale = max(np.abs(self.C).max(), 1.0)
        if np.abs(self.C - self.C.T).max() > _SYM_TOL * scale:
            raise ConfigError("C must be symmetric")


@dataclass
class PriorState:
    """Evolved prior N(a, R) for the state before the next observation."""

    a: np.ndarray
    R: np.ndarray


@dataclass
class Forecast:
    """One-step-ahead predictive N(f, Q) for the next observation."""

    f: float
    Q: float


def predict_state(spec: ModelSpec, state: StateEstimate) -> PriorState:
    """Evolve the posterior: a = G m, R = G C G' + W (symmetrized)."""
    p = spec.state_dim
    if state.m.shape != (p,):
        raise ConfigError(
            f"state dimension {state.m.shape[0]} does not match spec {p}")
    a = spec.G @ state.m
    R = _symmetrize(spec.G @ state.C @ spec.G.T + spec.W)
    if not (np.isfinite(a).all() and np.isfinite(R).all()):
        raise NumericError("non-finite prior state")
    return PriorState(a=a, R=R)


def forecast_obs(F: np.ndarray, prior: PriorState, V: float) -> Forecast:
    """One-step forecast under design vector F: f = F'a, Q = F'RF + V."""
    F = np.asarray(F, dtype=float)
    f = float(F @ prior.a)
    Q = float(F @ prior.R @ F + V)
    if not (np.isfinite(f) and np.isfinite(Q)):
        raise NumericError("non-finite forecast")
    if Q <= 0.0:
        raise NumericError(f"forecast variance Q={Q} is not positive")
    return Forecast(f=f, Q=Q)


def update(prior: PriorState, F: np.ndarray, V: float, fc: Forecast,
           y: float, joseph: bool = False) -> StateEstimate:
    """Incorporate observation y: e = y - f, A = RF/Q, m = a + Ae,
    C = R - Q A A' (symmetrized).

    With G = I the posterior-mean recursion m_{t-1} + A e coincides with
    a + A e, which is the form implemented here.  ``joseph`` switches to
    the numerically safer Joseph-stabilized covariance update.
    """
    if fc.Q <= 0.0:
        raise NumericError(f"forecast variance Q={fc.Q} is not positive")
    F = np.asarray(F, dtype=float)
    e = y - fc.f
    A = prior.R @ F / fc.Q
    m = prior.a + A * e
    if joseph:
        p = len(m)
        IKF = np.eye(p) - np.outer(A, F)
        C = IKF @ prior.R @ IKF.T + V * np.outer(A, A)
    else:
        C = prior.R - fc.Q * np.outer(A, A)
    C = _symmetrize(C)
    if not (np.isfinite(m).all() and np.isfinite(C).all()):
        raise NumericError("non-finite posterior state")
    return StateEstimate(m=m, C=C)


def step(spec: ModelSpec, state: StateEstimate, F: np.ndarray,
         y: float) -> tuple[StateEstimate, Forecast]:
    """One full filter cycle; returns the forecast made before seeing y."""
    prior = predict_state(spec, state)
    fc = forecast_obs(F, prior, spec.V)
    return update(prior, F, spec.V, fc, y), fc
