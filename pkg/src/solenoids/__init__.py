"""Measured solenoids realizing real homology classes.

The ``circle`` subpackage builds Denjoy circle maps and measured partitions
of their Cantor set; ``solenoid`` glues blocks over that holonomy;
``currents`` and ``schwartzman`` compute the two homology classes a measured
solenoid carries and compare them.
"""

__version__ = "0.1.0"
