from pathlib import Path
from unittest import TestCase
import io

from domisolve.board import BoardDims, Player
from domisolve.outcome import (ConflictError, DimensionError, Landscape,
                               LandscapeBuilder, LandscapeCell, OutcomeClass,
                               OutcomeKnowledge, Provenance, ResultsParseError,
                               UNKNOWN, combine_horizontal, combine_vertical,
                               generate_landscape, ingest_known_results,
                               outcome_class, transpose_dual)
from domisolve.search import SolveConfig
from domisolve.tt import TTConfig

V, H = Player.VERTICAL, Player.HORIZONTAL

TABLE = Path(__file__).parent.parent / 'data' / 'table3.csv'

CONFIG = SolveConfig(tt=TTConfig(index_bits=16))


class StrictLandscapeBuilder(LandscapeBuilder):
    def warn(self, msg, dims):
        raise RuntimeError("W: {} at [{} x {}]".format(msg, *dims))


def strict_landscape(max_m, max_n, base=None, budget=0):
    return StrictLandscapeBuilder(max_m, max_n, base, budget, CONFIG).build()


def label(text):
    return OutcomeKnowledge.from_label(text)


def cell(rows, cols, text):
    return LandscapeCell(BoardDims(rows, cols), label(text))


class TestOutcomeKnowledge(TestCase):

    def test_class_mapping(self):
        fields = {
            (V, V): OutcomeClass.V,
            (H, H): OutcomeClass.H,
            (V, H): OutcomeClass.N,
            (H, V): OutcomeClass.P,
        }
        for (when_v, when_h), outcome in fields.items():
            with self.subTest(outcome=outcome.value):
                knowledge = OutcomeKnowledge(when_v, when_h)
                self.assertTrue(knowledge.complete)
                self.assertIs(knowledge.outcome_class, outcome)
                self.assertEqual(knowledge.label, outcome.value)
                self.assertEqual(outcome.fields, (when_v, when_h))

    def test_partial_labels(self):
        self.assertEqual(OutcomeKnowledge(when_h_starts=H).label, 'NH')
        self.assertEqual(OutcomeKnowledge(when_v_starts=V).label, 'NV')
        self.assertEqual(OutcomeKnowledge(when_v_starts=H).label, 'PH')
        self.assertEqual(UNKNOWN.label, '')
        self.assertIsNone(UNKNOWN.outcome_class)

    def test_composite_labels(self):
        cases = {
            'NH': (None, H, frozenset()),
            'NV': (V, None, frozenset()),
            'NP': (None, None, {OutcomeClass.V, OutcomeClass.H}),
            '-V': (None, None, {OutcomeClass.V}),
            '-H': (None, None, {OutcomeClass.H}),
        }
        for text, (when_v, when_h, excludes) in cases.items():
            with self.subTest(label=text):
                knowledge = label(text)
                self.assertEqual(knowledge.when_v_starts, when_v)
                self.assertEqual(knowledge.when_h_starts, when_h)
                self.assertEqual(knowledge.excludes, frozenset(excludes))
                self.assertEqual(knowledge.label, text)
                self.assertEqual(knowledge.provenance, 'Ingested')

    def test_anomalous_label(self):
        knowledge = label('1')
        self.assertIs(knowledge.outcome_class, OutcomeClass.N)
        self.assertTrue(knowledge.anomaly)

    def test_bad_labels(self):
        for text in ('X', 'NN', '', '-N2'):
            with self.subTest(label=text):
                with self.assertRaises(ValueError):
                    label(text)

    def test_merge(self):
        merged = OutcomeKnowledge(when_h_starts=H, h_provenance=Provenance.RULE
                                  ).merge(OutcomeKnowledge.of_class(
                                      OutcomeClass.N))
        self.assertEqual(merged.label, 'N')
        self.assertEqual(merged.provenance, 'Solved+Rule')
        self.assertIs(merged.h_provenance, Provenance.RULE)

    def test_merge_exclusions(self):
        merged = label('-V').merge(label('-H'))
        self.assertEqual(merged.label, 'NP')
        self.assertIs(label('NP').merge(label('NH')).outcome_class,
                      OutcomeClass.N)

    def test_merge_conflicts(self):
        with self.assertRaises(ConflictError):
            label('V').merge(label('H'))
        with self.assertRaises(ConflictError):
            label('NP').merge(label('V'))


class TestOutcomeClass(TestCase):

    def test_small_boards(self):
        cases = [((1, 1), 'P'), ((2, 2), 'N'), ((5, 5), 'P'), ((3, 1), 'V'),
                 ((2, 4), 'H')]
        for (rows, cols), expected in cases:
            with self.subTest(dims=(rows, cols)):
                knowledge = outcome_class(BoardDims(rows, cols), CONFIG)
                self.assertEqual(knowledge.label, expected)
                self.assertEqual(knowledge.provenance, 'Solved')

    def test_budget_exhausted(self):
        reports = {}
        knowledge = outcome_class(BoardDims(5, 5),
                                  SolveConfig(node_limit=5), reports)
        self.assertEqual(knowledge.label, '')
        self.assertEqual(knowledge.provenance, 'Unknown')
        self.assertEqual(reports, {})

    def test_reports(self):
        reports = {}
        outcome_class(BoardDims(3, 3), CONFIG, reports)
        self.assertEqual(set(reports), set(Player))
        self.assertIs(reports[H].winner, H)


class TestTransposeDual(TestCase):

    def test_examples(self):
        self.assertEqual(transpose_dual(label('H')).label, 'V')
        self.assertEqual(transpose_dual(label('N')).label, 'N')
        self.assertEqual(transpose_dual(label('P')).label, 'P')
        self.assertEqual(transpose_dual(label('NH')).label, 'NV')
        self.assertEqual(transpose_dual(label('-V')).label, '-H')

    def test_involution(self):
        for text in ('N', 'P', 'V', 'H', 'NH', 'NV', 'NP', 'PH', 'PV',
                     '-V', '-H', '1'):
            with self.subTest(label=text):
                knowledge = label(text)
                self.assertEqual(transpose_dual(transpose_dual(knowledge)),
                                 knowledge)

    def test_matches_solver(self):
        for rows, cols in ((2, 3), (3, 4), (1, 5), (4, 5)):
            with self.subTest(dims=(rows, cols)):
                self.assertEqual(
                    transpose_dual(outcome_class(BoardDims(rows, cols),
                                                 CONFIG)),
                    outcome_class(BoardDims(cols, rows), CONFIG))


class TestCombination(TestCase):

    def test_horizontal(self):
        joined = combine_horizontal(cell(6, 17, 'H'), cell(6, 8, 'H'))
        self.assertEqual(joined.dims, BoardDims(6, 25))
        self.assertEqual(joined.label, 'H')
        self.assertEqual(joined.knowledge.provenance, 'Rule')
        self.assertEqual(
            combine_horizontal(cell(6, 17, 'H'), cell(6, 4, 'N')).label, 'NH')
        self.assertEqual(
            combine_horizontal(cell(1, 2, 'H'), cell(1, 2, 'H')).label, 'H')

    def test_no_vertical_facts_side_by_side(self):
        joined = combine_horizontal(cell(2, 1, 'V'), cell(2, 1, 'V'))
        self.assertEqual(joined.knowledge, UNKNOWN)

    def test_vertical(self):
        self.assertEqual(
            combine_vertical(cell(2, 1, 'V'), cell(2, 1, 'V')).label, 'V')
        joined = combine_vertical(cell(17, 6, 'V'), cell(8, 6, 'V'))
        self.assertEqual((joined.dims, joined.label), (BoardDims(25, 6), 'V'))
        self.assertEqual(
            combine_vertical(cell(4, 6, 'N'), cell(17, 6, 'V')).label, 'NV')

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionError):
            combine_horizontal(cell(2, 3, 'N'), cell(3, 3, 'N'))
        with self.assertRaises(DimensionError):
            combine_vertical(cell(2, 3, 'N'), cell(2, 2, 'N'))

    def check_rules(self, combine, make_dims):
        for short in (1, 2, 3):
            longest = 24 // short
            solved = {length: outcome_class(make_dims(short, length), CONFIG)
                      for length in range(1, longest + 1)}
            for p in range(1, longest):
                for q in range(1, longest - p + 1):
                    joined = combine(
                        LandscapeCell(make_dims(short, p), solved[p]),
                        LandscapeCell(make_dims(short, q), solved[q]))
                    expected = solved[p + q]
                    for starter in Player:
                        derived = joined.knowledge.winner(starter)
                        if derived is None:
                            continue
                        with self.subTest(short=short, p=p, q=q,
                                          starter=starter.value):
                            self.assertIs(derived, expected.winner(starter))

    def test_rules_agree_with_solver(self):
        self.check_rules(combine_horizontal,
                         lambda rows, cols: BoardDims(rows, cols))

    def test_dual_rules_agree_with_solver(self):
        self.check_rules(combine_vertical,
                         lambda cols, rows: BoardDims(rows, cols))


class TestIngest(TestCase):

    def test_rows(self):
        results = ingest_known_results(io.StringIO(
            "m,n,label\n"
            "# comment\n"
            "\n"
            "11,11,N\n"
            "8,14,NH\n"
            "13,13,NP\n"))
        self.assertEqual(results[BoardDims(11, 11)].label, 'N')
        self.assertEqual(results[BoardDims(8, 14)].when_h_starts, H)
        self.assertIsNone(results[BoardDims(8, 14)].when_v_starts)
        self.assertEqual(results[BoardDims(13, 13)].excludes,
                         frozenset((OutcomeClass.V, OutcomeClass.H)))
        self.assertTrue(all(k.provenance == 'Ingested'
                            for k in results.values()))

    def test_errors_name_the_row(self):
        cases = [
            ("m,n,label\n1,1,P\n1,2\n", 3),
            ("1,x,P\n", 1),
            ("1,1,Q\n", 1),
            ("1,1,P\n\n1,1,P\n", 3),
            ("0,1,P\n", 1),
        ]
        for text, row in cases:
            with self.subTest(text=text):
                with self.assertRaises(ResultsParseError) as context:
                    ingest_known_results(io.StringIO(text))
                self.assertEqual(context.exception.row, row)

    def test_anomaly_warning(self):
        with self.assertLogs('domisolve.outcome', 'WARNING') as logs:
            results = ingest_known_results(io.StringIO("2,27,1\n"))
        self.assertTrue(results[BoardDims(2, 27)].anomaly)
        self.assertIn("W:", logs.output[0])

    def test_published_table(self):
        with self.assertLogs('domisolve.outcome', 'WARNING'):
            results = ingest_known_results(TABLE)
        self.assertEqual(len(results), 589)
        self.assertEqual(results[BoardDims(11, 11)].label, 'N')
        self.assertEqual(results[BoardDims(6, 21)].label, 'NH')
        self.assertEqual(results[BoardDims(13, 13)].label, 'NP')
        self.assertTrue(results[BoardDims(2, 27)].anomaly)

    def test_missing_file(self):
        with self.assertRaises(OSError):
            ingest_known_results(TABLE.with_name('missing.csv'))


class TestLandscape(TestCase):

    def test_solved_block(self):
        with self.assertLogs('domisolve.outcome', 'WARNING'):
            table = ingest_known_results(TABLE)
        landscape = strict_landscape(6, 6, budget=10 ** 8)
        for found in landscape:
            with self.subTest(dims=str(found.dims)):
                self.assertEqual(found.label, table[found.dims].label)
                self.assertEqual(found.knowledge.provenance, 'Solved')
        self.assertEqual(landscape.cell(4, 4).label, 'N')
        self.assertEqual(landscape.cell(5, 6).label, 'H')
        self.assertEqual(landscape.cell(6, 5).label, 'V')

    def test_rules_from_base(self):
        base = {BoardDims(6, 17): label('H'), BoardDims(6, 8): label('H')}
        landscape = strict_landscape(6, 25, base)
        self.assertEqual(landscape.cell(6, 25).label, 'H')
        self.assertEqual(landscape.cell(6, 25).knowledge.provenance, 'Rule')
        self.assertEqual(landscape.cell(6, 17).knowledge.provenance,
                         'Ingested')

    def test_single_row(self):
        landscape = strict_landscape(1, 8, {BoardDims(1, 2): label('H')})
        for width in (2, 4, 6, 8):
            with self.subTest(width=width):
                self.assertEqual(landscape.cell(1, width).label, 'H')
        self.assertEqual(landscape.cell(1, 1).label, 'NP')
        self.assertEqual(landscape.cell(1, 3).label, '')

    def test_generic_facts(self):
        landscape = strict_landscape(4, 8)
        self.assertEqual(landscape.cell(3, 3).label, 'NP')
        self.assertEqual(landscape.cell(3, 6).label, 'PH')
        self.assertEqual(landscape.cell(4, 8).knowledge.when_v_starts, H)
        self.assertEqual(landscape.cell(4, 2).knowledge.when_h_starts, V)
        self.assertEqual(landscape.cell(3, 6).knowledge.provenance, 'Rule')

    def test_published_derivations(self):
        with self.assertLogs('domisolve.outcome', 'WARNING'):
            base = ingest_known_results(TABLE)
        derived = {21: 'NH', 25: 'H', 29: 'H', 31: 'H'}
        for width in derived:
            base.pop(BoardDims(6, width))
            base.pop(BoardDims(width, 6))
        landscape = generate_landscape(6, 31, base, budget=0, config=CONFIG)
        for width, expected in derived.items():
            with self.subTest(width=width):
                found = landscape.cell(6, width)
                self.assertEqual(found.label, expected)
                self.assertEqual(found.knowledge.provenance, 'Rule')

    def test_conflicts_are_reported(self):
        base = {BoardDims(2, 2): label('V')}
        with self.assertLogs('domisolve.outcome', 'WARNING') as logs:
            landscape = generate_landscape(2, 2, base)
        self.assertEqual(landscape.cell(2, 2).label, 'V')
        self.assertTrue(any('W:' in line for line in logs.output))
        with self.assertRaises(RuntimeError):
            strict_landscape(2, 2, base)

    def test_parallel_solves(self):
        serial = generate_landscape(3, 4, budget=10 ** 6, config=CONFIG)
        parallel = generate_landscape(3, 4, budget=10 ** 6, config=CONFIG,
                                      jobs=2)
        self.assertEqual(serial.to_csv(), parallel.to_csv())

    def test_limits(self):
        with self.assertRaises(DimensionError):
            generate_landscape(33, 2)

    def test_csv(self):
        landscape = Landscape(2, 2, {
            (1, 1): label('P').with_provenance(Provenance.SOLVED),
            (2, 1): label('1'),
        })
        self.assertEqual(landscape.to_csv().splitlines(), [
            'm,n,label,provenance',
            '1,1,P,Solved',
            '1,2,?,Unknown',
            '2,1,N,Ingested (anomaly)',
            '2,2,?,Unknown',
        ])

    def test_render(self):
        landscape = Landscape(2, 3, {(1, 2): label('H'), (2, 2): label('NH')})
        self.assertEqual(landscape.render().splitlines(), [
            '  |  1  2  3',
            '------------',
            '1 |  .  H  .',
            '2 |  . NH  .',
        ])

    def test_footnotes(self):
        with self.assertLogs('domisolve.outcome', 'WARNING'):
            base = ingest_known_results(TABLE)
        landscape = generate_landscape(31, 31, base)
        notes = landscape.footnotes()
        self.assertEqual(len(notes), 6)
        self.assertTrue(notes[0].startswith("1) [6 x n]"))
        self.assertIn(notes[-1], landscape.render())
