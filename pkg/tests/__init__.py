"""
Test modules follow the package layout: one ``test_<module>.py`` per module
of ``domisolve``. Set ``DOMISOLVE_SLOW=1`` to include the long searches.
"""
