try:
    from setuptools import setup

    kw = {"test_suite": "tests"}
except ImportError:
    from distutils.core import setup

    kw = {}

import os

versionfile = os.path.join('domisolve', 'version.py')
exec(open(versionfile).read())

setup(
    name="domisolve",
    version=__version__,
    packages=["domisolve"],
    description="Solve Domineering boards and tabulate their outcome classes",
    long_description="""
A solver for the game of Domineering.

Domisolve decides who wins an m x n board with a boolean alpha-beta search
backed by static knowledge (safe and real move counts) and a symmetry
reducing transposition table. It also maintains the landscape of outcome
classes of rectangular boards, combining solved, imported and rule derived
results.""",
    license="BSD 3-Clause",
    install_requires=open("requirements.txt").read().splitlines(),
    entry_points={
        "console_scripts": ["domisolve = domisolve.cli:main"],
    },
    classifiers=[
        "Development Status :: 4 - Beta",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: BSD License",
        "Natural Language :: English",
        "Programming Language :: Python :: 3",
        "Topic :: Games/Entertainment :: Board Games"],
    python_requires=">=3.10",
    **kw
)
