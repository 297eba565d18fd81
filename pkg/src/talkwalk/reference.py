"""Values reported for the HT 2011 deployment, for side-by-side comparison.

Informational only: the dataset is not public, so nothing here gates a run.
"""

HT2011 = {
    "stats": {
        "node_count": 68,
        "edge_count": 698,
        "average_degree": 20.53,
        "average_path_length": 1.76,
        "diameter": 4,
        "average_aggregated_contact_duration": 529.0,
        "sessions_attended": 194,
        "sessions_all_talks": 134,
        "sessions_changed": 14,
        "sessions_exactly_2": 13,
        "sessions_exactly_1": 33,
    },
    "baseline": {
        "majority.accuracy": 0.5405,
        "room.accuracy": 0.5953,
    },
    "hrpr": {
        "cosine_only.auc": 0.630,
        "cosine_only.accuracy": 0.610,
        "break_only.auc": 0.596,
        "presenter_only.auc": 0.474,
    },
    "sweep": {
        "unmerged_best.auc": 0.638,
        "unmerged_best.accuracy": 0.617,
        "merged_best.auc": 0.703,
        "merged_best.accuracy": 0.666,
        "merged_presenter_break_best.auc": 0.68,
    },
    "influence": {
        "coffee_break_contact": 0.655,
        "prior_contact": 0.5874,
        "contact_by_end": 0.555,
        "no_contact": 0.508,
        "presenter_ge_20": 0.61,
        "presenter_gt_960": 0.7778,
    },
}


def compare(section: str, ours: dict) -> list[dict]:
    """Rows ``{metric, ours, reference, delta}`` for metrics present in both."""
    ref = HT2011[section]
    rows = []
    for key, value in ref.items():
        mine = ours.get(key)
        rows.append({
            "metric": key,
            "ours": mine,
            "reference": float(value),
            "delta": None if mine is None else float(mine) - float(value),
        })
    return rows
