"""Derivative-free pattern search used by the sup and inf estimators."""

import numpy as np
from scipy.optimize import OptimizeResult


class _BudgetExhausted(Exception):
    pass


def pattern_search(
    f, x0, step=0.1, max_iter=40, shrink=0.5, max_evals=None, maximize=True, expand=1.0, max_step=None
):
    """Hooke-Jeeves pattern search with a shrinking step.

    An iteration makes an exploratory poll ``x +- step * e_i`` over every
    coordinate, keeping each improving move. After a successful poll a
    pattern move extrapolates along the last displacement, which lets the
    search follow curved ridges; after a failed poll the step shrinks.
    Points where ``f`` returns NaN count as infeasible.

    The sequence of evaluated points does not depend on ``max_evals``, so a
    larger evaluation budget always sees a superset of the points seen by a
    smaller one.

    Parameters
    ----------
    f : callable
        Objective taking a 1D array.
    x0 : array_like
        Starting point; should be feasible.
    step : float or array_like
        Initial step per coordinate.
    max_iter : int
        Number of exploratory polls.
    shrink : float
        Step reduction factor after an unsuccessful poll.
    max_evals : int, optional
        Hard cap on objective evaluations (including the start point).
    maximize : bool
        Maximize (default) or minimize.
    expand : float
        Step growth factor after a successful poll (capped by ``max_step``).

    Returns
    -------
    scipy.optimize.OptimizeResult
        With fields ``x``, ``fun``, ``nfev``, ``nit`` and ``history`` (best
        value after every evaluation).
    """
    sign = 1.0 if maximize else -1.0
    budget = np.inf if max_evals is None else max_evals
    history = []
    state = {"nfev": 0, "best": -np.inf, "x": np.array(x0, dtype=float)}

    def g(x):
        if state["nfev"] >= budget:
            raise _BudgetExhausted
        state["nfev"] += 1
        val = sign * float(f(x))
        if val != val:
            val = -np.inf
        if val > state["best"]:
            state["best"], state["x"] = val, x.copy()
        history.append(sign * state["best"])
        return val

    def explore(x, fx, steps):
        x = x.copy()
        for i in range(x.size):
            for direction in (1.0, -1.0):
                trial = x.copy()
                trial.flat[i] += direction * steps.flat[i]
                ft = g(trial)
                if ft > fx:
                    x, fx = trial, ft
                    break
            if fx == np.inf:
                break
        return x, fx

    steps = np.broadcast_to(np.asarray(step, dtype=float), state["x"].shape).copy()
    nit = 0
    try:
        base = state["x"].copy()
        fbase = g(base)
        while nit < max_iter and fbase != np.inf:
            nit += 1
            x, fx = explore(base, fbase, steps)
            if fx > fbase:
                if expand != 1.0:
                    steps *= expand
                    if max_step is not None:
                        np.minimum(steps, max_step, out=steps)
                # pattern moves along the successful displacement
                while fx != np.inf and nit < max_iter:
                    cand = x + (x - base)
                    base, fbase = x, fx
                    fc = g(cand)
                    y, fy = explore(cand, fc, steps)
                    nit += 1
                    if fy > fbase:
                        x, fx = y, fy
                    else:
                        break
                base, fbase = x, fx
            else:
                steps *= shrink
    except _BudgetExhausted:
        pass
    return OptimizeResult(
        x=state["x"], fun=sign * state["best"], nfev=state["nfev"], nit=nit, history=history
    )
