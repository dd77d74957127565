from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields


@dataclass
class SolveStats:
    """Search counters for one solve.

    ``clause_checks`` counts watch-list clause visits during propagation,
    the cost unit used to compare total and partial order search.
    ``locally_saved_total`` counts assignments kept by a partial-order
    backtrack that a total-order backtrack to the same level would have
    undone.
    """

    conflicts: int = 0
    decisions: int = 0
    propagations: int = 0
    clause_checks: int = 0
    undone_total: int = 0
    conflicts_multi_candidate: int = 0
    candidate_count_sum_when_multi: int = 0
    locally_saved_total: int = 0
    restarts: int = 0
    learned: int = 0
    deleted: int = 0
    wall_time: float = 0.0

    @property
    def undos_per_conflict(self) -> float:
        return self.undone_total / self.conflicts if self.conflicts else 0.0

    @property
    def checks_per_conflict(self) -> float:
        return self.clause_checks / self.conflicts if self.conflicts else 0.0

    @property
    def multi_candidate_ratio(self) -> float:
        return self.conflicts_multi_candidate / self.conflicts if self.conflicts else 0.0

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "SolveStats":
        kwargs = {}
        for f in fields(cls):
            if f.name in data and data[f.name] not in (None, ""):
                kwargs[f.name] = float(data[f.name]) if f.type == "float" else int(data[f.name])
        return cls(**kwargs)

    def to_json(self, exclude_time: bool = False) -> str:
        data = self.to_dict()
        if exclude_time:
            del data["wall_time"]
        return json.dumps(data, indent=2) + "\n"


STAT_FIELDS = [f.name for f in fields(SolveStats)]
