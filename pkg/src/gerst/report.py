"""Machine-readable run reports.

A report echoes the command and configuration (including the seed), lists
one record per check with status and an exact defect or dimension detail,
and carries a schema version.  Everything except the wall-time fields is
deterministic given configuration and seed, so two runs can be compared
byte for byte via to_json(include_times=False).
"""

from __future__ import annotations

import json

SCHEMA_VERSION = 1


class RunReport:
    def __init__(self, command, configuration, checks, artifacts=None):
        self.command = list(command)
        self.configuration = configuration
        self.checks = sorted(checks, key=lambda c: c["name"])
        self.artifacts = artifacts or {}

    @property
    def failures(self) -> int:
        return sum(1 for c in self.checks if c["status"] != "pass")

    def payload(self, include_times=True) -> dict:
        checks = []
        for c in self.checks:
            rec = {"name": c["name"], "status": c["status"],
                   "detail": c.get("detail", "")}
            if include_times:
                rec["wall_ms"] = round(float(c.get("ms", 0.0)), 3)
            checks.append(rec)
        data = {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "configuration": self.configuration,
            "checks": checks,
            "failures": self.failures,
        }
        if self.artifacts:
            data["artifacts"] = self.artifacts
        return data

    def to_json(self, include_times=True) -> str:
        return json.dumps(self.payload(include_times), sort_keys=True,
                          separators=(",", ":"))

    def render_table(self) -> str:
        lines = ["command: %s" % " ".join(self.command),
                 "configuration: %s" % json.dumps(self.configuration,
                                                  sort_keys=True)]
        width = max([len(c["name"]) for c in self.checks] + [5])
        lines.append("%-*s  %-4s  %9s  %s" % (width, "check", "stat",
                                              "wall", "detail"))
        for c in self.checks:
            lines.append("%-*s  %-4s  %7.0fms  %s"
                         % (width, c["name"], c["status"],
                            float(c.get("ms", 0.0)), c.get("detail", "")))
        lines.append("failures: %d" % self.failures)
        return "\n".join(lines)
