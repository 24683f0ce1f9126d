"""Estimator-style wrappers (``fit`` / ``transform`` / ``predict``).

``fit`` takes a measurement ensemble. The single-system estimator then maps
pure probe states to their guessing scores; the entanglement-assisted one
maps shared states to their optimal guessing probability and predicts
whether that probability witnesses steering.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .entangled import SolverConfig, b_value_optimal
from .single_system import OptimizerConfig, optimize_d, score_batch
from .validation import check_bipartite_states, check_ensemble, check_pure_states


class SingleSystemDistinguisher(TransformerMixin, BaseEstimator):
    """Optimal single-probe distinguishing probability of an ensemble.

    Parameters
    ----------
    restarts : int or None
        Local searches; ``None`` uses ``50 * (d - 1)``.
    max_evals : int
        Evaluation budget per local search.
    tol : float
        Simplex diameter at which a local search stops.
    seed : int
        Root seed; restart ``r`` uses its own derived stream.

    Attributes
    ----------
    value_ : float
    best_state_ : ndarray of shape (d,)
    report_ : DiscriminationReport
    """

    def __init__(self, restarts=None, max_evals=5000, tol=1e-9, seed=0):
        self.restarts = restarts
        self.max_evals = max_evals
        self.tol = tol
        self.seed = seed

    def fit(self, X, y=None, priors=None):
        ens = check_ensemble(X, priors)
        cfg = OptimizerConfig(self.restarts, self.max_evals, self.tol, self.seed)
        self.ensemble_ = ens
        self.report_ = optimize_d(ens, cfg)
        self.value_ = self.report_.value
        self.best_state_ = self.report_.best_state
        self.n_features_in_ = ens.dim
        return self

    def transform(self, X):
        """Score of each probe state, shape ``(n_samples,)``."""
        check_is_fitted(self, "ensemble_")
        states = check_pure_states(X, self.ensemble_.dim)
        return score_batch(states, self.ensemble_)

    def score(self, X=None, y=None):
        check_is_fitted(self, "value_")
        return self.value_


class EntanglementAssistedDistinguisher(BaseEstimator):
    """Entanglement-assisted distinguishing probability and steering witness.

    ``fit`` records the ensemble and its single-system value (computed with
    the optimizer unless ``d_value`` is given). ``transform`` returns the
    optimal value for each shared state; ``predict`` flags states whose value
    exceeds the single-system value by more than ``margin``.
    """

    def __init__(self, d_value=None, margin=1e-4, tol=1e-8, max_iter=10_000,
                 restarts=None, seed=0):
        self.d_value = d_value
        self.margin = margin
        self.tol = tol
        self.max_iter = max_iter
        self.restarts = restarts
        self.seed = seed

    def fit(self, X, y=None, priors=None):
        ens = check_ensemble(X, priors)
        self.ensemble_ = ens
        if self.d_value is None:
            report = optimize_d(ens, OptimizerConfig(restarts=self.restarts, seed=self.seed))
            self.d_value_ = report.value
        else:
            self.d_value_ = float(self.d_value)
        self.n_features_in_ = ens.dim
        return self

    def _reports(self, X):
        check_is_fitted(self, "ensemble_")
        cfg = SolverConfig(tol=self.tol, max_iter=self.max_iter)
        return [b_value_optimal(rho, self.ensemble_, cfg)
                for rho in check_bipartite_states(X, self.ensemble_.dim)]

    def transform(self, X):
        return np.array([r.value for r in self._reports(X)])

    def predict(self, X):
        return self.transform(X) > self.d_value_ + self.margin

    def decision_function(self, X):
        """Advantage over the single-system value (positive means steerable)."""
        return self.transform(X) - self.d_value_
