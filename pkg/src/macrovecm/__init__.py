"""Monthly macro time-series toolkit.

Unit-root and cointegration testing, error-correction model estimation,
and orthogonalized impulse responses with Monte Carlo confidence bands,
wired together by a reproducible, configuration-driven pipeline.
"""

__version__ = "0.1.0"
