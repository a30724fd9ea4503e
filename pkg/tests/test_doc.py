import doctest
import unittest
import os

import domisolve.board
import domisolve.knowledge
import domisolve.outcome
import domisolve.search
import domisolve.tt


class TestDoctest(unittest.TestCase):
    def test_module_documentation(self):
        for module in (domisolve.board, domisolve.knowledge, domisolve.tt,
                       domisolve.search, domisolve.outcome):
            with self.subTest(module=module.__name__):
                failed, _ = doctest.testmod(module)
                self.assertEqual(failed, 0)

    def test_domisolve_readme(self):
        failed, _ = doctest.testfile(os.path.join("..", "README.rst"))
        self.assertEqual(failed, 0)
