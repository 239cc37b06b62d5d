"""Generalized Push Fight: rules engine, mate-in-1 solvers and hardness-reduction generators."""

from .core import (BLACK_KING, BLACK_PAWN, DIRECTIONS, WHITE_KING, WHITE_PAWN, Board,
                   Color, Direction, FormatError, GameState, Kind, Piece, Square,
                   parse_board, render, serialize_board)
from .rules import (IllegalTurn, Outcome, PushResult, Turn, apply_turn, legal_moves,
                    legal_pushes, outcome)

__all__ = [
    "BLACK_KING", "BLACK_PAWN", "DIRECTIONS", "WHITE_KING", "WHITE_PAWN", "Board", "Color",
    "Direction", "FormatError", "GameState", "IllegalTurn", "Kind", "Outcome", "Piece",
    "PushResult", "Square", "Turn", "apply_turn", "legal_moves", "legal_pushes", "outcome",
    "parse_board", "render", "serialize_board",
]
