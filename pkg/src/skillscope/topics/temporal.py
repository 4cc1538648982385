"""Temporal topic-weight matrix: share of each year's documents per topic,
with noise documents excluded from numerator and denominator."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .density import NOISE


@dataclass
class TemporalTopicMatrix:
    years: list[int]
    topics: list[int]
    counts: dict[int, dict[int, int]]    # year -> topic -> N_{y,t}
    weights: dict[int, dict[int, float]]  # year -> topic -> T_{y,t}


def temporal_weights(labels: Sequence[int], years: Sequence[int]) -> TemporalTopicMatrix:
    if len(labels) != len(years):
        raise ValueError("one label and one year per document required")
    counts: dict[int, dict[int, int]] = {}
    topics: set[int] = set()
    for label, year in zip(labels, years):
        if label == NOISE:
            continue
        topics.add(int(label))
        row = counts.setdefault(int(year), {})
        row[int(label)] = row.get(int(label), 0) + 1
    topic_list = sorted(topics)
    year_list = sorted(counts)  # years with only noise are omitted
    weights = {}
    full_counts = {}
    for year in year_list:
        row = counts[year]
        total = sum(row.values())
        full_counts[year] = {t: row.get(t, 0) for t in topic_list}
        weights[year] = {t: row.get(t, 0) / total for t in topic_list}
    return TemporalTopicMatrix(years=year_list, topics=topic_list,
                               counts=full_counts, weights=weights)
