"""Exact computer algebra for higher BGW tau-functions.

Subpackages mirror the pipeline: algebra (exact polynomial ring), operators
(normal-ordered differential operators in the times), cutjoin (algebraic
topological recursion), zcalculus (Laurent series in z and Kac-Schwarz
operators), schur (Miwa-determinant oracle), verify (golden/constraint
suites), cli (command line front end).
"""

ENGINE_VERSION = "0.1.0"
