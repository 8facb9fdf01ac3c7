"""nu-one-class SVM on a precomputed kernel.

Solves the rescaled dual

    min  1/2 a^T K a   s.t.  0 <= a_i <= 1,  sum(a) = nu * l

by two-coordinate descent on the maximal-violating pair (second-order
working-set selection as in LIBSVM).  Decision values are
``sum_i a_i K(x_i, x) - rho``; zero counts as normal (+1).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .kernels import KernelMatrix

_TAU = 1e-12


class ConvergenceError(RuntimeError):
    """Iteration budget exhausted; carries the best iterate found so far."""

    def __init__(self, message, alphas, violation, iterations):
        super().__init__(message)
        self.alphas = alphas
        self.violation = violation
        self.iterations = iterations


@dataclass(frozen=True)
class SolverSettings:
    kkt_tolerance: float = 1e-6
    max_iterations: int = 10**7
    alpha_tol: float = 1e-8

    def __post_init__(self):
        if not (self.kkt_tolerance > 0 and self.max_iterations > 0 and self.alpha_tol > 0):
            raise ValueError(f"solver settings must all be positive: {self}")


@dataclass(frozen=True, eq=False)
class OcsvmModel:
    alphas: np.ndarray
    rho: float
    nu: float
    gamma: float | None = None
    kernel_kind: str | None = None
    alpha_tol: float = 1e-8
    iterations: int = 0
    violation: float = 0.0
    support_indices: np.ndarray = field(init=False)

    def __post_init__(self):
        a = np.asarray(self.alphas, dtype=float)
        object.__setattr__(self, "alphas", a)
        object.__setattr__(self, "support_indices", np.flatnonzero(a > self.alpha_tol))

    @property
    def n_train(self) -> int:
        return self.alphas.size

    def to_json(self) -> str:
        return json.dumps(
            {
                "nu": self.nu,
                "gamma": self.gamma,
                "rho": self.rho,
                "alphas": self.alphas.tolist(),
                "support_indices": self.support_indices.tolist(),
                "kernel_kind": self.kernel_kind,
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "OcsvmModel":
        doc = json.loads(text)
        return cls(doc["alphas"], doc["rho"], doc["nu"], doc.get("gamma"), doc.get("kernel_kind"))


def _values(k) -> np.ndarray:
    return k.values if isinstance(k, KernelMatrix) else np.asarray(k, dtype=float)


def dual_objective(alphas, k) -> float:
    a = np.asarray(alphas, dtype=float)
    return 0.5 * float(a @ _values(k) @ a)


def kkt_violation(alphas, gradient, alpha_tol: float = 0.0) -> float:
    """max over coordinates that can decrease of G minus min over those that can increase."""
    up = alphas < 1 - alpha_tol
    low = alphas > alpha_tol
    if not up.any() or not low.any():
        return 0.0
    return float(gradient[low].max() - gradient[up].min())


def fit(k, nu: float, settings: SolverSettings | None = None) -> OcsvmModel:
    settings = settings or SolverSettings()
    q = _values(k)
    l = q.shape[0]
    if q.ndim != 2 or q.shape != (l, l):
        raise ValueError(f"kernel must be square, got {q.shape}")
    if l < 2:
        raise ValueError("need at least two training samples")
    if not 0 < nu <= 1:
        raise ValueError(f"nu must lie in (0, 1], got {nu}")
    if not np.allclose(q, q.T, rtol=0, atol=1e-12):
        raise ValueError("kernel matrix is not symmetric")

    alpha = np.full(l, float(nu))
    grad = q @ alpha
    diag = np.diag(q).copy()
    eps = settings.kkt_tolerance

    it = 0
    while True:
        can_up = alpha < 1.0
        can_down = alpha > 0.0
        if not can_up.any() or not can_down.any():
            break
        g_up = np.where(can_up, grad, np.inf)
        i = int(np.argmin(g_up))
        g_min = g_up[i]
        g_down = np.where(can_down, grad, -np.inf)
        if g_down.max() - g_min <= eps:
            break
        if it >= settings.max_iterations:
            raise ConvergenceError(
                f"no convergence after {it} pair updates (violation {g_down.max() - g_min:.3e})",
                alpha.copy(),
                float(g_down.max() - g_min),
                it,
            )
        # second-order choice of the partner j among coordinates that can decrease
        b = g_down - g_min
        eta = diag[i] + diag - 2.0 * q[i]
        eta = np.where(eta > 0, eta, _TAU)
        score = np.where(b > 0, b * b / eta, -np.inf)
        j = int(np.argmax(score))

        # move t from j to i
        t = b[j] / eta[j]
        t = min(t, 1.0 - alpha[i], alpha[j])
        if t == 1.0 - alpha[i]:
            alpha[j] -= t
            alpha[i] = 1.0
        elif t == alpha[j]:
            alpha[i] += t
            alpha[j] = 0.0
        else:
            alpha[i] += t
            alpha[j] -= t
        grad += t * (q[:, i] - q[:, j])
        it += 1

    # refresh against drift accumulated by incremental updates
    grad = q @ alpha
    rho = _rho_from_gradient(alpha, grad, settings.alpha_tol)
    return OcsvmModel(
        alpha,
        rho,
        float(nu),
        getattr(k, "gamma", None),
        getattr(k, "kind", None),
        settings.alpha_tol,
        it,
        kkt_violation(alpha, grad),
    )


def _rho_from_gradient(alpha, grad, alpha_tol) -> float:
    free = (alpha > alpha_tol) & (alpha < 1 - alpha_tol)
    if free.any():
        return float(grad[free].mean())
    upper = alpha >= 1 - alpha_tol
    lower = alpha <= alpha_tol
    # rho lies in [max G over a_i = 1, min G over a_i = 0]
    lo = grad[upper].max() if upper.any() else None
    hi = grad[lower].min() if lower.any() else None
    if lo is None:
        return float(hi)
    if hi is None:
        return float(lo)
    return float(0.5 * (lo + hi))


def compute_rho(model: OcsvmModel, k) -> float:
    grad = _values(k) @ model.alphas
    return _rho_from_gradient(model.alphas, grad, model.alpha_tol)


def decision_value(model: OcsvmModel, k_row) -> float:
    k_row = np.asarray(k_row, dtype=float)
    if k_row.shape != (model.n_train,):
        raise ValueError(f"kernel row has length {k_row.size}, model was trained on {model.n_train}")
    return float(k_row @ model.alphas - model.rho)


def decision_function(model: OcsvmModel, k_rows) -> np.ndarray:
    """Decision values for a ``(n_eval, n_train)`` block of kernel rows."""
    k_rows = np.atleast_2d(np.asarray(k_rows, dtype=float))
    if k_rows.shape[1] != model.n_train:
        raise ValueError(f"kernel rows have {k_rows.shape[1]} columns, model was trained on {model.n_train}")
    return k_rows @ model.alphas - model.rho


def predict(model: OcsvmModel, k_rows) -> np.ndarray:
    """+1 for normal, -1 for anomaly."""
    return np.where(decision_function(model, k_rows) >= 0, 1, -1)
