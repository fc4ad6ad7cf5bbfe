"""Canonical JSON form of an obstruction certificate.

Keys are written in a fixed order, steps in certificate order, and nothing
run-dependent (time, host, paths) is recorded, so the same input always
serialises to the same bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from . import __version__
from .obstruction import ObstructionCertificate

SCHEMA_VERSION = 1
STEP_KEYS = ("index", "name", "kind", "statement", "status", "evidence", "citation")


class CertificateFormatError(ValueError):
    pass


@dataclass(frozen=True)
class CertificateDocument:
    schema_version: int
    input: dict[str, int]
    steps: tuple[dict[str, Any], ...]
    verdict: str
    tool_version: str

    @classmethod
    def from_certificate(cls, cert: ObstructionCertificate) -> "CertificateDocument":
        steps = tuple(
            {
                "index": i,
                "name": s.name,
                "kind": s.kind.value,
                "statement": s.statement,
                "status": s.status.value,
                "evidence": s.evidence,
                "citation": s.citation,
            }
            for i, s in enumerate(cert.steps, 1)
        )
        return cls(SCHEMA_VERSION, {"N": cert.N, "d": cert.d, "p": cert.p}, steps,
                   cert.verdict.value, __version__)

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "input": {"N": self.input["N"], "d": self.input["d"], "p": self.input["p"]},
            "steps": [{k: s[k] for k in STEP_KEYS} for s in self.steps],
            "verdict": self.verdict,
            "tool_version": self.tool_version,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "CertificateDocument":
        try:
            raw = json.loads(text)
            if raw["schema_version"] != SCHEMA_VERSION:
                raise CertificateFormatError(f"unsupported schema version {raw['schema_version']}")
            steps = tuple({k: s[k] for k in STEP_KEYS} for s in raw["steps"])
            inp = {k: int(raw["input"][k]) for k in ("N", "d", "p")}
            return cls(raw["schema_version"], inp, steps, raw["verdict"], raw["tool_version"])
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise CertificateFormatError(f"malformed certificate: {exc}") from None

    def consistent(self) -> bool:
        """Verdict is RuledOut exactly when every step passed, and indices run 1..n."""
        all_pass = all(s["status"] == "Pass" for s in self.steps)
        indices_ok = [s["index"] for s in self.steps] == list(range(1, len(self.steps) + 1))
        return indices_ok and (self.verdict == "RuledOut") == all_pass
