"""Command-line front end: ``gdcheck {check,expand,classify,witness}``.

Exit status: 0 clean, 1 violations (or witnesses found), 2 usage/parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import TextIO

from .definitions import expand_defined_class
from .errors import GdcheckError, ParseError
from .kb import KnowledgeBase
from .logic import DefinedAtom, Iff, Var
from .profiles import PROFILES, check, formula_witnesses, get_profile, has_errors
from .report import FORMATS, serialize_report
from .scenario import Scenario, classify_realizable
from .syntax import parse_formula, parse_kb, print_formula

EXIT_OK, EXIT_VIOLATIONS, EXIT_ERROR = 0, 1, 2
COMMANDS = ("check", "expand", "classify", "witness")


@dataclass
class CliConfig:
    command: str
    kb_paths: list[str] = field(default_factory=list)
    profile: str = "amended"
    format: str = "text"
    open_world: bool = False
    scenario_pair: tuple[str, str, str] | None = None
    target: str | None = None  # DC name for expand, axiom id or .fol path for witness

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.command == "check" and not self.kb_paths:
            raise ValueError("check needs at least one .kb file")
        if self.command == "classify" and self.scenario_pair is None:
            raise ValueError("classify needs BEFORE AFTER --focus ID")
        if self.command in ("expand", "witness") and not self.target:
            raise ValueError(f"{self.command} needs a target")
        if self.command == "witness" and len(self.kb_paths) != 1:
            raise ValueError("witness takes exactly one .kb file")
        if self.profile not in PROFILES:
            raise ValueError(f"unknown profile {self.profile!r}")
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}")


class _Failure(Exception):
    pass


def _load(path: str) -> KnowledgeBase:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise _Failure(f"{path}: cannot read: {exc}") from None
    try:
        return parse_kb(text)
    except ParseError as exc:
        raise _Failure(f"{path}:{exc}") from None


def _check_one(path: str, cfg: CliConfig) -> tuple[str, list]:
    return path, check(_load(path), get_profile(cfg.profile), open_world=cfg.open_world)


def _run_check(cfg: CliConfig, out: TextIO) -> int:
    with ThreadPoolExecutor() as pool:
        results = list(pool.map(lambda p: _check_one(p, cfg), cfg.kb_paths))
    if len(results) == 1:
        out.write(serialize_report(results[0][1], cfg.format))
    elif cfg.format == "json":
        merged = {p: json.loads(serialize_report(r, "json")) for p, r in results}
        out.write(json.dumps(merged, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        for p, r in results:
            out.write(f"== {p}\n")
            out.write(serialize_report(r, "text"))
    return EXIT_VIOLATIONS if any(has_errors(r) for _, r in results) else EXIT_OK


def _run_expand(cfg: CliConfig, out: TextIO) -> int:
    d = expand_defined_class(cfg.target)
    text = print_formula(Iff(DefinedAtom(d.name, Var(d.distinguished_var)), d.body))
    if cfg.format == "json":
        out.write(json.dumps({"name": d.name, "base_dc": d.base_dc, "formula": text},
                             indent=2, sort_keys=True) + "\n")
    else:
        out.write(text + "\n")
    return EXIT_OK


def _run_classify(cfg: CliConfig, out: TextIO) -> int:
    before_path, after_path, focus = cfg.scenario_pair
    c = classify_realizable(Scenario(_load(before_path), _load(after_path), focus))
    if cfg.format == "json":
        out.write(json.dumps({"focus": focus, "verdict": c.verdict,
                              "evidence": list(c.evidence)}, indent=2, sort_keys=True) + "\n")
    else:
        out.write(f"{focus}: {c.verdict}\nevidence: {', '.join(c.evidence)}\n")
    return EXIT_OK


def _run_witness(cfg: CliConfig, out: TextIO) -> int:
    kb = _load(cfg.kb_paths[0])
    target = cfg.target
    if target.endswith(".fol"):
        try:
            formula = parse_formula(Path(target).read_text(encoding="utf-8"))
        except OSError as exc:
            raise _Failure(f"{target}: cannot read: {exc}") from None
        except ParseError as exc:
            raise _Failure(f"{target}:{exc}") from None
    else:
        try:
            axiom = get_profile(cfg.profile).axiom(target)
        except KeyError:
            raise _Failure(f"no axiom {target!r} in profile {cfg.profile}") from None
        if axiom.formula is None:
            raise _Failure(f"axiom {target} is checked on scenarios, not on a single KB")
        formula = axiom.formula
    rows = formula_witnesses(kb, formula)
    if cfg.format == "json":
        payload = [{"time": t, "witnesses": b} for b, t in rows]
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        for b, t in rows:
            when = t if t is not None else "*"
            out.write(f"@ {when}: " + ", ".join(f"{k}={v}" for k, v in sorted(b.items())) + "\n")
    return EXIT_VIOLATIONS if rows else EXIT_OK


def run(config: CliConfig, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    try:
        config.validate()
        handler = {"check": _run_check, "expand": _run_expand,
                   "classify": _run_classify, "witness": _run_witness}[config.command]
        return handler(config, out)
    except (_Failure, GdcheckError, ValueError) as exc:
        err.write(f"gdcheck: error: {exc}\n")
        return EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--profile", choices=sorted(PROFILES), default="amended")
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--open-world", action="store_true",
                        help="report missing witnesses as warnings rather than errors")

    parser = argparse.ArgumentParser(
        prog="gdcheck",
        description="Validate BFO-style knowledge bases under strict or amended axioms.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("check", parents=[common], help="check KB files against a profile")
    p.add_argument("kb_paths", nargs="+", metavar="KB")
    p = sub.add_parser("expand", parents=[common], help="print the GDC-<DC> defined class")
    p.add_argument("target", metavar="DC")
    p = sub.add_parser("classify", parents=[common],
                       help="classify a ceased realizable entity from two snapshots")
    p.add_argument("before", metavar="BEFORE")
    p.add_argument("after", metavar="AFTER")
    p.add_argument("--focus", required=True, metavar="ID")
    p = sub.add_parser("witness", parents=[common],
                       help="list violating bindings of one axiom (or a .fol formula)")
    p.add_argument("target", metavar="AXIOM")
    p.add_argument("kb_paths", nargs=1, metavar="KB")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = CliConfig(
        command=args.command,
        kb_paths=list(getattr(args, "kb_paths", []) or []),
        profile=args.profile,
        format=args.format,
        open_world=args.open_world,
        scenario_pair=(args.before, args.after, args.focus) if args.command == "classify" else None,
        target=getattr(args, "target", None),
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
