"""
Static knowledge about Domineering positions.

Two counts per player bound the rest of the game:

- the *safe* lower bound counts placements inside protected runs, i.e. runs
  of empty cells the opponent can never touch. With :attr:`Safety.CELLS` it
  packs stretches of immune cells instead, cells without an empty neighbour
  across the player's orientation, which the opponent cannot cover either;
- the *real* upper bound counts the most disjoint placements that still fit
  into the empty runs of the player's orientation.

Comparing them decides many positions without search.

>>> from domisolve.board import BoardDims, new_position, Player
>>> bounds(new_position(BoardDims(2, 1)))
KnowledgeBounds(safe_lower_v=1, safe_lower_h=0, real_upper_v=1, real_upper_h=0)
>>> static_verdict(new_position(BoardDims(2, 2)), Player.VERTICAL)
<StaticVerdict.UNKNOWN: 'unknown'>
"""

from dataclasses import dataclass
import enum

from domisolve.board import Player

#: Extra safe moves the mover needs over the opponent's real moves to win.
MOVER_WIN_MARGIN = 1


class StaticVerdict(enum.Enum):
    MOVER_WINS = 'mover-wins'
    MOVER_LOSES = 'mover-loses'
    UNKNOWN = 'unknown'


class Safety(enum.Enum):
    """Which cells the safe lower bound may pack dominoes into."""
    RUNS = 'runs'
    CELLS = 'cells'


@dataclass(frozen=True)
class KnowledgeBounds:
    safe_lower_v: int
    safe_lower_h: int
    real_upper_v: int
    real_upper_h: int

    def safe_lower(self, player):
        if player is Player.VERTICAL:
            return self.safe_lower_v
        return self.safe_lower_h

    def real_upper(self, player):
        if player is Player.VERTICAL:
            return self.real_upper_v
        return self.real_upper_h


# The helpers below work on raw occupancy integers so that the search can
# call them without building Position objects.

def _pack_vertical(geom, runs):
    """Sum of floor(length / 2) over the column runs contained in ``runs``."""
    cols = geom.cols
    frontier = runs & ~(runs << cols)
    total = 0
    while frontier:
        pairs = frontier & (runs >> cols)
        total += pairs.bit_count()
        frontier = (pairs << (2 * cols)) & runs
    return total


def _pack_horizontal(geom, runs):
    not_last = geom.not_last_col
    frontier = runs & ~((runs << 1) & geom.not_first_col)
    total = 0
    while frontier:
        pairs = frontier & (runs >> 1) & not_last
        total += pairs.bit_count()
        frontier = (((pairs << 1) & not_last) << 1) & runs
    return total


def _exposed_vertical(geom, empty):
    # cells Horizontal could still cover
    return empty & (((empty << 1) & geom.not_first_col)
                    | ((empty >> 1) & geom.not_last_col))


def _exposed_horizontal(geom, empty):
    cols = geom.cols
    return empty & ((empty << cols) | (empty >> cols))


def _protected_vertical(geom, empty):
    cols = geom.cols
    exposed = _exposed_vertical(geom, empty)
    while True:
        grown = exposed | (((exposed << cols) | (exposed >> cols)) & empty)
        if grown == exposed:
            return empty & ~exposed
        exposed = grown


def _protected_horizontal(geom, empty):
    exposed = _exposed_horizontal(geom, empty)
    while True:
        grown = exposed | ((((exposed << 1) & geom.not_first_col)
                            | ((exposed >> 1) & geom.not_last_col)) & empty)
        if grown == exposed:
            return empty & ~exposed
        exposed = grown


def safe_count(geom, occupied, player, safety=Safety.RUNS):
    empty = geom.full & ~occupied
    if player is Player.VERTICAL:
        if safety is Safety.CELLS:
            return _pack_vertical(geom,
                                  empty & ~_exposed_vertical(geom, empty))
        return _pack_vertical(geom, _protected_vertical(geom, empty))
    if safety is Safety.CELLS:
        return _pack_horizontal(geom,
                                empty & ~_exposed_horizontal(geom, empty))
    return _pack_horizontal(geom, _protected_horizontal(geom, empty))


def real_count(geom, occupied, player):
    empty = geom.full & ~occupied
    if player is Player.VERTICAL:
        return _pack_vertical(geom, empty)
    return _pack_horizontal(geom, empty)


def evaluate(geom, occupied, safety=Safety.RUNS):
    """``(real_v, real_h, safe_v, safe_h)`` of one occupancy."""
    v, h = Player.VERTICAL, Player.HORIZONTAL
    return (real_count(geom, occupied, v), real_count(geom, occupied, h),
            safe_count(geom, occupied, v, safety),
            safe_count(geom, occupied, h, safety))


def decide(real_mover, real_opponent, safe_mover, safe_opponent):
    """The verdict rules applied to counts already at hand."""
    if real_mover == 0:
        return StaticVerdict.MOVER_LOSES
    if real_opponent == 0:
        return StaticVerdict.MOVER_WINS
    if safe_mover >= real_opponent + MOVER_WIN_MARGIN:
        return StaticVerdict.MOVER_WINS
    if safe_opponent >= real_mover:
        return StaticVerdict.MOVER_LOSES
    return StaticVerdict.UNKNOWN


def verdict(geom, occupied, mover, safety=Safety.RUNS):
    opponent = mover.opponent
    real_mover = real_count(geom, occupied, mover)
    if real_mover == 0:
        return StaticVerdict.MOVER_LOSES
    real_opponent = real_count(geom, occupied, opponent)
    if real_opponent == 0:
        return StaticVerdict.MOVER_WINS
    return decide(real_mover, real_opponent,
                  safe_count(geom, occupied, mover, safety),
                  safe_count(geom, occupied, opponent, safety))


def safe_moves_lower(pos, player, safety=Safety.RUNS):
    """
    Number of moves ``player`` can make whatever the opponent does: every
    protected run of length L holds floor(L / 2) placements no opposing
    domino can ever cover.
    """
    return safe_count(pos.geometry, pos.occupied, player, safety)


def real_moves_upper(pos, player):
    """
    Upper bound on the moves ``player`` can still make: future placements
    are disjoint and stay inside the current empty runs.
    """
    return real_count(pos.geometry, pos.occupied, player)


def static_verdict(pos, to_move, safety=Safety.RUNS):
    return verdict(pos.geometry, pos.occupied, to_move, safety)


def bounds(pos, safety=Safety.RUNS):
    real_v, real_h, safe_v, safe_h = evaluate(pos.geometry, pos.occupied,
                                              safety)
    return KnowledgeBounds(safe_lower_v=safe_v, safe_lower_h=safe_h,
                           real_upper_v=real_v, real_upper_h=real_h)
