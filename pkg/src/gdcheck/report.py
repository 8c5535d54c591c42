"""Text and JSON renderings of check reports."""

from __future__ import annotations

import json

from .profiles import Violation

FORMATS = ("text", "json")


def _text_line(v: Violation) -> str:
    when = v.time if v.time is not None else "*"
    bindings = ", ".join(f"{k}={val}" for k, val in v.witnesses)
    return f"{v.axiom} @ {when}: {v.message} [{bindings}]"


def to_records(report: list[Violation]) -> list[dict]:
    return [{"axiom": v.axiom, "severity": v.severity, "time": v.time,
             "witnesses": dict(v.witnesses), "message": v.message} for v in report]


def serialize_report(report: list[Violation], format: str = "text") -> str:
    """One line per violation (``text``) or a stable-key JSON array (``json``).

    A ``*`` time in text form means the violation holds at every time point.
    """
    if format == "text":
        return "".join(_text_line(v) + "\n" for v in report)
    if format == "json":
        return json.dumps(to_records(report), indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    raise ValueError(f"unknown report format {format!r}; expected one of {FORMATS}")


def parse_report_json(text: str) -> list[Violation]:
    return [Violation(r["axiom"], r["severity"], tuple(sorted(r["witnesses"].items())),
                      r["time"], r["message"]) for r in json.loads(text)]
