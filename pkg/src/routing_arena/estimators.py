"""Estimator-style wrappers so dynamics and analysis plug into sklearn tooling.

Hyperparameters live in ``__init__`` (readable through ``get_params``), the
game is the ``fit`` input, and results are exposed as trailing-underscore
attributes.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .analysis import analyze
from .dynamics import run_best_response
from .game import potential, social_cost
from .validation import check_game, check_initial, check_model, check_schedule


class BestResponseDynamics(BaseEstimator):
    """Run greedy best-response moves from an initial routing until no player improves.

    Parameters
    ----------
    model : str or CostModel, default="exp"
        ``exp``, ``max``, ``linear`` or ``poly:d``.
    schedule : str, default="rr"
        ``rr``, ``gain`` or ``random:SEED``.
    max_steps : int or None
        Move budget; None picks the model's default.

    Attributes
    ----------
    trace_ : DynamicsTrace
    routing_ : tuple of int
        Final routing.
    converged_ : bool
    n_steps_ : int
    potential_ : int
        Exponential potential of the final routing.
    social_cost_ : int
    """

    def __init__(self, model="exp", schedule="rr", max_steps=None):
        self.model = model
        self.schedule = schedule
        self.max_steps = max_steps

    def fit(self, game, initial=None):
        game = check_game(game)
        start = check_initial(game, initial)
        self.trace_ = run_best_response(game, start, check_model(self.model),
                                        check_schedule(self.schedule), self.max_steps)
        self.routing_ = self.trace_.final
        self.converged_ = self.trace_.converged
        self.n_steps_ = self.trace_.steps
        self.potential_ = potential(game, self.routing_)
        self.social_cost_ = social_cost(game, self.routing_)
        return self

    def predict(self, game=None, initial=None):
        """Final routing; refits first when a game is given."""
        if game is not None:
            self.fit(game, initial)
        check_is_fitted(self, "routing_")
        return self.routing_


class EquilibriumAnalyzer(BaseEstimator):
    """Exact optimum, Nash-routings, PoA and PoS of a game.

    ``method`` is ``auto``, ``exhaustive`` or ``milp``; ``cap`` bounds the
    number of profiles an exhaustive scan may visit; ``alpha`` scales the
    log-product bound that ``bound_`` reports on.
    """

    def __init__(self, model="exp", method="auto", cap=None, alpha=10):
        self.model = model
        self.method = method
        self.cap = cap
        self.alpha = alpha

    def fit(self, game):
        game = check_game(game)
        self.report_ = analyze(game, check_model(self.model), self.cap, self.method, self.alpha)
        self.optimal_sc_ = self.report_.optimal_sc
        self.nash_routings_ = self.report_.nash_routings
        self.poa_ = self.report_.poa
        self.pos_ = self.report_.pos
        self.bound_ = self.report_.bound
        return self

    def score(self, game=None):
        """Price of anarchy as a float (refits when a game is given)."""
        if game is not None:
            self.fit(game)
        check_is_fitted(self, "poa_")
        return float(self.poa_)
