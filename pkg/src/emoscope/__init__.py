"""emoscope: a workbench for comparative analysis of EMO algorithm runs."""

__version__ = "0.1.0"
