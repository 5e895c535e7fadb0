"""Darts 271 win-probability workbench.

Library layout:

- ``core``       board-legal scores, accuracy categories, game-state machine
- ``dataset``    throw-level CSV ingest, splitting, summary statistics
- ``numerics``   least squares, logistic fitting, counter-based randomness
- ``models``     the five win-probability models and the artifact bundle
- ``evaluation`` Brier tables, the betting game, report serialization
- ``synthgen``   synthetic seasons with planted skills and an oracle
- ``cli``        the ``darts271`` command
- ``service``    live-scoring HTTP API
"""

__version__ = "0.1.0"
