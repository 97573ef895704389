"""Finite-difference gradients, Adam and derivative-free optimization of one restart."""

from __future__ import annotations

import logging
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from pcqo.engine.models import (
    DerivativeFreeMethod,
    OptimizerConfig,
    OptimizerMethod,
    RestartResult,
    RestartStatus,
)
from pcqo.exceptions import ContractViolationError, NumericContractError

LOGGER = logging.getLogger("pcqo.engine")

EnergyFn = Callable[[np.ndarray], float]


def _evaluate(energyfn: EnergyFn, params: np.ndarray) -> float:
    value = float(energyfn(params))
    if not np.isfinite(value):
        raise NumericContractError(f"Energy evaluated to {value} at params {np.array2string(params, precision=6)}")
    return value


def _check_step(fd_step: float):
    if not fd_step > 0:
        raise ContractViolationError(f"fd_step must be > 0, got {fd_step}")


def fd_gradient(energyfn: EnergyFn, params: Sequence[float], fd_step: float = 1e-3) -> np.ndarray:
    """Central differences ``(E(θ + h e_i) - E(θ - h e_i)) / 2h``."""
    _check_step(fd_step)
    theta = np.asarray(params, dtype=float).copy()
    grad = np.zeros_like(theta)
    for i in range(theta.size):
        shift = np.zeros_like(theta)
        shift[i] = fd_step
        grad[i] = (_evaluate(energyfn, theta + shift) - _evaluate(energyfn, theta - shift)) / (2.0 * fd_step)
    return grad


def richardson_gradient(energyfn: EnergyFn, params: Sequence[float], fd_step: float = 1e-3) -> np.ndarray:
    """Four-point stencil, exact for polynomials up to degree four."""
    _check_step(fd_step)
    theta = np.asarray(params, dtype=float).copy()
    grad = np.zeros_like(theta)
    for i in range(theta.size):
        shift = np.zeros_like(theta)
        shift[i] = fd_step
        grad[i] = (
            -_evaluate(energyfn, theta + 2 * shift)
            + 8 * _evaluate(energyfn, theta + shift)
            - 8 * _evaluate(energyfn, theta - shift)
            + _evaluate(energyfn, theta - 2 * shift)
        ) / (12.0 * fd_step)
    return grad


def initial_params(n_params: int, init_scale: float, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.uniform(-init_scale, init_scale, size=n_params)


def _resolve_n_params(energyfn: EnergyFn, n_params: Optional[int]) -> int:
    if n_params is None:
        n_params = getattr(energyfn, "n_params", None)
    if n_params is None:
        raise ContractViolationError("n_params is required when the energy function does not expose it")
    return int(n_params)


def _require_method(config: OptimizerConfig, method: OptimizerMethod):
    if config.method is not method:
        raise ContractViolationError(f"Optimizer {method.value} called with method={config.method.value}")


def adam_optimize(
    energyfn: EnergyFn,
    config: OptimizerConfig,
    n_params: Optional[int] = None,
    seed: Optional[int] = None,
    restart: int = 0,
) -> RestartResult:
    """Adam with bias correction over central-difference gradients.

    ``trace[t]`` is the energy before update ``t``. A restart is aborted as diverged
    once the energy stays above ``divergence_factor * max(|E0|, 1)`` for
    ``divergence_patience`` consecutive iterations.
    """
    _require_method(config, OptimizerMethod.ADAM)
    seed = config.seed if seed is None else seed
    theta = initial_params(_resolve_n_params(energyfn, n_params), config.init_scale, seed)
    start = theta.copy()
    m = np.zeros_like(theta)
    v = np.zeros_like(theta)

    initial_energy = _evaluate(energyfn, theta)
    limit = config.divergence_factor * max(abs(initial_energy), 1.0)
    trace: List[float] = []
    best_energy, best_params = initial_energy, theta.copy()
    evaluations = 1
    above = 0
    status, message = RestartStatus.OK, ""

    for t in range(1, config.max_iterations + 1):
        value = initial_energy if t == 1 else _evaluate(energyfn, theta)
        evaluations += 0 if t == 1 else 1
        trace.append(value)
        if value < best_energy or t == 1:
            best_energy, best_params = value, theta.copy()

        above = above + 1 if value > limit else 0
        if above >= config.divergence_patience:
            status = RestartStatus.DIVERGED
            message = f"energy above {limit:g} for {above} iterations"
            LOGGER.warning("Restart %d (seed %d) diverged at iteration %d: %s", restart, seed, t, message)
            break

        grad = fd_gradient(energyfn, theta, config.fd_step)
        evaluations += 2 * theta.size
        m = config.beta1 * m + (1 - config.beta1) * grad
        v = config.beta2 * v + (1 - config.beta2) * grad**2
        m_hat = m / (1 - config.beta1**t)
        v_hat = v / (1 - config.beta2**t)
        theta = theta - config.learning_rate * m_hat / (np.sqrt(v_hat) + config.eps)

    return RestartResult(
        restart=restart,
        seed=seed,
        method=OptimizerMethod.ADAM.value,
        trace=np.asarray(trace, dtype=float),
        initial_energy=initial_energy,
        best_energy=float(min(trace)) if trace else initial_energy,
        best_params=best_params,
        initial_params=start,
        final_params=theta,
        evaluations=evaluations,
        status=status,
        message=message,
    )


def _scipy_options(config: OptimizerConfig, budget: int, n_params: int) -> dict:
    if config.derivative_free_method is DerivativeFreeMethod.COBYLA:
        return {"maxiter": max(budget, n_params + 2), "rhobeg": config.rhobeg}
    return {"maxiter": budget, "maxfev": budget, "xatol": config.tolerance, "fatol": config.tolerance}


def derivative_free_optimize(
    energyfn: EnergyFn,
    config: OptimizerConfig,
    n_params: Optional[int] = None,
    seed: Optional[int] = None,
    restart: int = 0,
) -> RestartResult:
    """scipy COBYLA or Nelder-Mead; one trace entry per energy evaluation.

    When the minimizer stops without success before its budget is spent, it is
    restarted once from a perturbation of the best point with the remaining budget.
    """
    _require_method(config, OptimizerMethod.DERIVATIVE_FREE)
    seed = config.seed if seed is None else seed
    method = config.derivative_free_method.value
    rng = np.random.default_rng(seed)
    theta = rng.uniform(-config.init_scale, config.init_scale, size=_resolve_n_params(energyfn, n_params))
    start = theta.copy()
    initial_energy = _evaluate(energyfn, theta)
    budget = config.max_iterations

    trace: List[float] = []
    points: List[np.ndarray] = []

    def objective(x: np.ndarray) -> float:
        value = _evaluate(energyfn, x)
        trace.append(value)
        points.append(np.array(x, dtype=float))
        return value

    final = theta
    message = ""
    if budget > 0:
        result = minimize(
            objective,
            theta,
            method=method,
            tol=config.tolerance,
            options=_scipy_options(config, budget, theta.size),
        )
        final, message = np.asarray(result.x, dtype=float), str(result.message)
        remaining = budget - len(trace)
        if not result.success and "maximum" not in message.lower() and remaining > 0:
            perturbed = points[int(np.argmin(trace))] + rng.normal(0.0, max(config.init_scale, 1e-3), size=theta.size)
            LOGGER.warning(
                "Restart %d (seed %d): %s stopped early (%s); restarting from a perturbed best point",
                restart,
                seed,
                method,
                message,
            )
            result = minimize(
                objective,
                perturbed,
                method=method,
                tol=config.tolerance,
                options=_scipy_options(config, remaining, theta.size),
            )
            final, message = np.asarray(result.x, dtype=float), str(result.message)

    evaluations = len(trace) + 1
    del trace[budget:]
    best_index = int(np.argmin(trace)) if trace else None
    best_energy = trace[best_index] if trace else initial_energy
    return RestartResult(
        restart=restart,
        seed=seed,
        method=f"{OptimizerMethod.DERIVATIVE_FREE.value}/{method}",
        trace=np.asarray(trace, dtype=float),
        initial_energy=initial_energy,
        best_energy=best_energy,
        best_params=points[best_index] if trace else start,
        initial_params=start,
        final_params=final,
        evaluations=evaluations,
        message=message,
    )


def optimize(
    energyfn: EnergyFn,
    config: OptimizerConfig,
    n_params: Optional[int] = None,
    seed: Optional[int] = None,
    restart: int = 0,
) -> RestartResult:
    if config.method is OptimizerMethod.ADAM:
        return adam_optimize(energyfn, config, n_params, seed, restart)
    return derivative_free_optimize(energyfn, config, n_params, seed, restart)


__all__ = [
    "fd_gradient",
    "richardson_gradient",
    "initial_params",
    "adam_optimize",
    "derivative_free_optimize",
    "optimize",
]
