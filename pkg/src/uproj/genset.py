"""Named generator sets with their verification reports."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class GeneratorSet:
    """Ordered named generators of an invariant field, plus metadata."""

    entries: list  # list of (name, LocElem)
    dset: object  # DenominatorSet
    metadata: dict = field(default_factory=dict)
    report: dict = field(default_factory=lambda: {"checks": []})

    @property
    def names(self):
        return [n for n, _ in self.entries]

    @property
    def elements(self):
        return [e for _, e in self.entries]

    def __len__(self):
        return len(self.entries)

    def all_verified(self):
        return all(
            c["status"] == "pass"
            for c in self.report["checks"]
            if c["status"] != "inconclusive"
        )

    def to_json(self):
        return {
            "generators": [
                {"name": n, "element": e.to_json(), "text": str(e)}
                for n, e in self.entries
            ],
            "denominator_set": self.dset.to_json(),
            "metadata": self.metadata,
            "verification": self.report,
        }
