"""skillscope: batch corpus analytics for job postings.

Ingests multi-format posting dumps, cleans and filters them, extracts skill
mentions against a five-category lexicon, computes semantic framing against
augmentation/automation anchors, fits three topic models, and forecasts
yearly skill-rate series with ARIMA.
"""

__version__ = "0.1.0"
