"""Input checks shared by the estimators and the command line."""

from __future__ import annotations

import os

from .dynamics import Schedule
from .errors import ValidationError
from .game import CostModel, GameInstance, check_player, check_routing

__all__ = ["check_game", "check_model", "check_player", "check_routing", "check_schedule",
           "check_initial"]


def check_game(game) -> GameInstance:
    """Accept a GameInstance or a path to an instance file."""
    if isinstance(game, GameInstance):
        return game
    if isinstance(game, (str, os.PathLike)):
        from .formats import read_instance

        return read_instance(game)[0]
    raise ValidationError(f"expected a GameInstance or an instance path, got {type(game).__name__}")


def check_model(model) -> CostModel:
    return CostModel.parse(model)


def check_schedule(schedule) -> Schedule:
    return Schedule.parse(schedule)


def check_initial(game: GameInstance, initial) -> tuple[int, ...]:
    """``None`` means every player starts on its first strategy."""
    if initial is None:
        return (0,) * game.n_players
    return check_routing(game, initial)
