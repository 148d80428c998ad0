"""Corpus annotation workbench.

Pipeline: ingest keyword-matched tweet archives, draw stratified random
samples, run human annotation sessions against a structured codebook, and
compute proportion summaries, inter-annotator agreement, and daily-timeline
peak reports.
"""

__version__ = "0.1.0"
