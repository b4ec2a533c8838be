"""Derivation trees recording which rule justified each judgment."""

import json
from dataclasses import dataclass


@dataclass(frozen=True)
class Derivation:
    judgment: str
    rule: str
    premises: tuple = ()

    def to_json(self):
        return {
            "judgment": self.judgment,
            "rule": self.rule,
            "premises": [p.to_json() for p in self.premises],
        }

    def dumps(self, indent=None):
        return json.dumps(self.to_json(), indent=indent, ensure_ascii=False)

    @classmethod
    def from_json(cls, data):
        return cls(data["judgment"], data["rule"],
                   tuple(cls.from_json(p) for p in data["premises"]))

    def size(self):
        return 1 + sum(p.size() for p in self.premises)

    def rules(self):
        """Rule names in pre-order."""
        out = [self.rule]
        for p in self.premises:
            out += p.rules()
        return out
