"""Provider-agnostic LLM translation strategies and evaluation tooling."""

from ._mtforge import (
    MtforgeError,
    aggregate_ranks,
    bias_report,
    delta_report,
    parse_judge,
    parse_ranking,
    parse_scores,
    parse_translation,
    rotation_schedule,
    system_score,
    tally,
    translate_offline,
)

__all__ = [
    "MtforgeError",
    "aggregate_ranks",
    "bias_report",
    "delta_report",
    "parse_judge",
    "parse_ranking",
    "parse_scores",
    "parse_translation",
    "rotation_schedule",
    "system_score",
    "tally",
    "translate_offline",
]
