"""Certified re-computation of the numeric bounds in a dimension-5 freeness argument.

Everything that enters a certificate is an exact rational or an interval with
rational endpoints; floating point is never used to decide an inequality.
"""

__version__ = "0.1.0"
