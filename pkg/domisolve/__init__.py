from domisolve.version import __version__
from domisolve.board import (BoardDims, Move, Player, Position, Symmetry,
                             apply_move, canonical, legal_moves, new_position,
                             parse_diagram, transform, transpose, undo_move)
from domisolve.knowledge import (Safety, StaticVerdict, bounds,
                                 real_moves_upper, safe_moves_lower,
                                 static_verdict)
from domisolve.tt import TranspositionTable, TTConfig, tt_hash, zobrist_init
from domisolve.search import (NodeLimitExceeded, SolveConfig, SolveReport,
                              brute_force_oracle, solve)
from domisolve.outcome import (Landscape, OutcomeClass, OutcomeKnowledge,
                               combine_horizontal, combine_vertical,
                               generate_landscape, ingest_known_results,
                               outcome_class, transpose_dual)
