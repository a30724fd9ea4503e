"""
Domineering positions stored as integer bitboards.

Cell ``(row, col)`` of an ``m x n`` board is bit ``row * n + col`` of
``Position.occupied``; a set bit means the cell is covered by a domino.

>>> pos = parse_diagram('''
... .#.
... .#.
... ''')
>>> pos.dims
BoardDims(rows=2, cols=3)
>>> [str(m) for m in legal_moves(pos, Player.VERTICAL)]
['V@(0,0)', 'V@(0,2)']
>>> print(apply_move(pos, Move(Player.VERTICAL, 0, 2)))
.##
.##
"""

from dataclasses import dataclass
from functools import lru_cache
import enum

#: Maximal number of cells the solver handles.
CAPACITY = 256


class CapacityError(ValueError):
    pass


class IllegalMoveError(ValueError):
    pass


class InconsistencyError(ValueError):
    pass


class DiagramError(ValueError):
    pass


class Player(enum.Enum):
    VERTICAL = 'V'
    HORIZONTAL = 'H'

    @property
    def opponent(self):
        if self is Player.VERTICAL:
            return Player.HORIZONTAL
        return Player.VERTICAL

    @property
    def title(self):
        return self.name.capitalize()

    @classmethod
    def parse(cls, text):
        """
        Accept ``V``/``H`` or the full player name, case insensitive.

        >>> Player.parse('h'), Player.parse('Vertical')
        (<Player.HORIZONTAL: 'H'>, <Player.VERTICAL: 'V'>)
        """
        key = text.strip().upper()
        for player in cls:
            if key in (player.value, player.name):
                return player
        raise ValueError("unknown player '{}'".format(text))


class Symmetry(enum.IntEnum):
    """
    Board symmetries that keep both players' orientations.
    Transposition is not one of them: it swaps Vertical and Horizontal.
    """
    IDENTITY = 0
    MIRROR_COLS = 1
    MIRROR_ROWS = 2
    ROTATE_180 = 3


@dataclass(frozen=True)
class BoardDims:
    rows: int
    cols: int

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("board dimensions must be positive, got {}x{}"
                             .format(self.rows, self.cols))

    @property
    def area(self):
        return self.rows * self.cols

    @property
    def within_capacity(self):
        return self.area <= CAPACITY

    def transposed(self):
        return BoardDims(self.cols, self.rows)

    def __str__(self):
        return "{}x{}".format(self.rows, self.cols)


class Geometry(object):
    """
    Masks and cell permutations shared by every position of one board size.
    Use :func:`geometry` to get the cached instance.
    """

    __slots__ = ('dims', 'rows', 'cols', 'area', 'full',
                 'not_first_col', 'not_last_col', 'permutations')

    def __init__(self, dims):
        if not dims.within_capacity:
            raise CapacityError("{} board has {} cells, capacity is {}"
                                .format(dims, dims.area, CAPACITY))
        self.dims = dims
        self.rows = rows = dims.rows
        self.cols = cols = dims.cols
        self.area = area = rows * cols
        self.full = (1 << area) - 1
        first_col = 0
        for row in range(rows):
            first_col |= 1 << (row * cols)
        self.not_first_col = self.full & ~first_col
        self.not_last_col = self.full & ~(first_col << (cols - 1))

        permutations = []
        for sym in Symmetry:
            flip_cols = sym in (Symmetry.MIRROR_COLS, Symmetry.ROTATE_180)
            flip_rows = sym in (Symmetry.MIRROR_ROWS, Symmetry.ROTATE_180)
            perm = []
            for index in range(area):
                row, col = divmod(index, cols)
                if flip_rows:
                    row = rows - 1 - row
                if flip_cols:
                    col = cols - 1 - col
                perm.append(row * cols + col)
            permutations.append(tuple(perm))
        self.permutations = tuple(permutations)

    def permute(self, bits, sym):
        perm = self.permutations[sym]
        out = 0
        while bits:
            low = bits & -bits
            out |= 1 << perm[low.bit_length() - 1]
            bits ^= low
        return out

    def anchors(self, occupied, player):
        """Bitmask of the anchor cells of every legal placement."""
        empty = self.full & ~occupied
        if player is Player.VERTICAL:
            return empty & (empty >> self.cols)
        return empty & (empty >> 1) & self.not_last_col

    def move_mask(self, anchor, player):
        if player is Player.VERTICAL:
            return (1 << anchor) | (1 << (anchor + self.cols))
        return (1 << anchor) | (1 << (anchor + 1))


@lru_cache(maxsize=None)
def geometry(dims):
    return Geometry(dims)


def iter_bits(bits):
    """Yield the indices of the set bits of ``bits`` in increasing order."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


@dataclass(frozen=True)
class Move:
    player: Player
    row: int
    col: int

    def anchor(self, cols):
        return self.row * cols + self.col

    def cells(self):
        if self.player is Player.VERTICAL:
            return (self.row, self.col), (self.row + 1, self.col)
        return (self.row, self.col), (self.row, self.col + 1)

    @classmethod
    def from_anchor(cls, player, anchor, cols):
        row, col = divmod(anchor, cols)
        return cls(player, row, col)

    def __str__(self):
        return "{}@({},{})".format(self.player.value, self.row, self.col)


@dataclass(frozen=True)
class Position:
    """
    Occupancy of an ``m x n`` board. Every domino covers two cells, so the
    number of occupied cells is even.
    """
    dims: BoardDims
    occupied: int = 0

    def __post_init__(self):
        geom = geometry(self.dims)
        if self.occupied < 0 or self.occupied & ~geom.full:
            raise ValueError("occupancy {:#x} does not fit a {} board"
                             .format(self.occupied, self.dims))
        if self.occupied.bit_count() % 2:
            raise InconsistencyError(
                "occupancy {:#x} covers {} cells, not a whole number of "
                "dominoes".format(self.occupied, self.occupied.bit_count()))

    @property
    def geometry(self):
        return geometry(self.dims)

    @property
    def empty(self):
        return self.geometry.full & ~self.occupied

    def is_occupied(self, row, col):
        return bool(self.occupied >> (row * self.dims.cols + col) & 1)

    def __str__(self):
        return format_diagram(self)


def new_position(dims):
    """
    Empty position of the given size.

    >>> new_position(BoardDims(2, 2)).empty
    15
    """
    return Position(dims, 0)


def legal_moves(pos, player):
    geom = pos.geometry
    cols = geom.cols
    return [Move.from_anchor(player, anchor, cols)
            for anchor in iter_bits(geom.anchors(pos.occupied, player))]


def _placement_mask(pos, move):
    rows, cols = pos.dims.rows, pos.dims.cols
    (r0, c0), (r1, c1) = move.cells()
    if not (0 <= r0 and r1 < rows and 0 <= c0 and c1 < cols):
        return None
    return (1 << (r0 * cols + c0)) | (1 << (r1 * cols + c1))


def apply_move(pos, move):
    mask = _placement_mask(pos, move)
    if mask is None:
        raise IllegalMoveError("{} does not fit a {} board"
                               .format(move, pos.dims))
    if pos.occupied & mask:
        raise IllegalMoveError("{} covers an occupied cell".format(move))
    return Position(pos.dims, pos.occupied | mask)


def undo_move(pos, move):
    mask = _placement_mask(pos, move)
    if mask is None or pos.occupied & mask != mask:
        raise InconsistencyError("{} is not on the board".format(move))
    return Position(pos.dims, pos.occupied & ~mask)


def transform(pos, sym):
    if sym is Symmetry.IDENTITY:
        return pos
    return Position(pos.dims, pos.geometry.permute(pos.occupied, sym))


def canonical(pos):
    """
    Smallest occupancy (as an integer) among the four symmetry images,
    together with the first symmetry that reaches it.
    """
    geom = pos.geometry
    best, best_sym = pos.occupied, Symmetry.IDENTITY
    for sym in (Symmetry.MIRROR_COLS, Symmetry.MIRROR_ROWS,
                Symmetry.ROTATE_180):
        image = geom.permute(pos.occupied, sym)
        if image < best:
            best, best_sym = image, sym
    return Position(pos.dims, best), best_sym


def transpose(pos):
    """
    Reflect the board in its main diagonal: an ``m x n`` position becomes
    ``n x m`` and every vertical placement turns horizontal.
    """
    rows, cols = pos.dims.rows, pos.dims.cols
    occupied = 0
    for index in iter_bits(pos.occupied):
        row, col = divmod(index, cols)
        occupied |= 1 << (col * rows + row)
    return Position(pos.dims.transposed(), occupied)


def empty_runs(pos, player):
    """
    Maximal runs of empty cells along ``player``'s orientation, as
    ``(length, protected)`` pairs: rows top to bottom for Horizontal,
    columns left to right for Vertical.
    """
    rows, cols = pos.dims.rows, pos.dims.cols

    def empty(row, col):
        return (0 <= row < rows and 0 <= col < cols
                and not pos.is_occupied(row, col))

    if player is Player.HORIZONTAL:
        lines = [[(row, col) for col in range(cols)] for row in range(rows)]
        sides = ((-1, 0), (1, 0))
    else:
        lines = [[(row, col) for row in range(rows)] for col in range(cols)]
        sides = ((0, -1), (0, 1))

    runs = []
    for line in lines:
        length, protected = 0, True
        for row, col in line:
            if empty(row, col):
                length += 1
                if any(empty(row + dr, col + dc) for dr, dc in sides):
                    protected = False
            elif length:
                runs.append((length, protected))
                length, protected = 0, True
        if length:
            runs.append((length, protected))
    return runs


def parse_diagram(text):
    """
    Read a position from its text diagram: one line per row,
    ``.`` for an empty cell and ``#`` for a covered one.
    """
    lines = [line.strip() for line in text.strip().splitlines()]
    lines = [line for line in lines if line]
    if not lines:
        raise DiagramError("empty diagram")
    cols = len(lines[0])
    occupied = 0
    for row, line in enumerate(lines):
        if len(line) != cols:
            raise DiagramError("row {} has {} cells, expected {}"
                               .format(row + 1, len(line), cols))
        for col, char in enumerate(line):
            if char == '#':
                occupied |= 1 << (row * cols + col)
            elif char != '.':
                raise DiagramError("unexpected character '{}' in row {}"
                                   .format(char, row + 1))
    if occupied.bit_count() % 2:
        raise DiagramError("{} covered cells are not a whole number of "
                           "dominoes".format(occupied.bit_count()))
    dims = BoardDims(len(lines), cols)
    if not dims.within_capacity:
        raise CapacityError("{} board has {} cells, capacity is {}"
                            .format(dims, dims.area, CAPACITY))
    return Position(dims, occupied)


def format_diagram(pos):
    cols = pos.dims.cols
    return "\n".join(
        "".join('#' if pos.occupied >> (row * cols + col) & 1 else '.'
                for col in range(cols))
        for row in range(pos.dims.rows))


def random_playout(dims, rng, max_empty=None, to_move=None):
    """
    Play uniformly random legal moves from the empty ``dims`` board, players
    alternating, until at most ``max_empty`` cells are empty or the player to
    move is stuck. ``rng`` is a :class:`random.Random`; returns the position
    and the player to move in it.
    """
    geom = geometry(dims)
    occupied = 0
    mover = to_move or Player(rng.choice('VH'))
    while max_empty is None or (geom.full & ~occupied).bit_count() > max_empty:
        anchors = list(iter_bits(geom.anchors(occupied, mover)))
        if not anchors:
            break
        occupied |= geom.move_mask(rng.choice(anchors), mover)
        mover = mover.opponent
    return Position(dims, occupied), mover
