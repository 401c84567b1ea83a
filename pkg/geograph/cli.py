#!/usr/bin/env python3

"""
geograph command line: solve, verdict, verify, catalog and describe over catalog spaces or space files.

Reports go to stdout (text, or json with --json), logs to stderr.
Exit code 0 on success, 1 on a negative verdict or a failed check, 2 on input errors.
"""

import json
import sys
import time
from dataclasses import dataclass, field
from logging import DEBUG, INFO
from typing import Dict, List, Optional, Tuple

import pandas as pd

from geograph.args import check_geograph_args, get_geograph_args
from geograph.enums import Command, Verdict
from geograph.errors import ArgumentError, GeographError, SpaceSpecError, UnknownSpaceError
from geograph.globals import SCHEMA_VERSION
from geograph.graphs import LinearFixedGraph, choose_graph, linear_graph_for_params, natred_f1, \
    reductivity_verdict, solve_linear_graph_symbolic
from geograph.logging import get_logger, set_basic_logger
from geograph.metrics import admissibility_sample
from geograph.space import SpaceSpecFile, catalog_names, load_catalog_space
from geograph.verify import ResidualReport, SampleConfig, run_battery

logger = get_logger()


@dataclass(frozen=True)
class RunReport:
    """
    Outcome of one command; deterministic given the space file and seed apart from elapsed
    """
    command: Command
    space: str
    seed: int
    samples: int
    sections: Dict = field(default_factory=dict)
    evidence: Tuple[ResidualReport, ...] = ()
    verdict: Optional[Verdict] = None
    failed: bool = False
    elapsed: float = 0.0

    @property
    def exit_code(self) -> int:
        if self.failed:
            return 1
        if self.verdict is not None and self.verdict is not Verdict.NATURALLY_REDUCTIVE:
            return 1
        return 0

    def to_dict(self) -> Dict:
        return {"schema_version": SCHEMA_VERSION, "command": self.command.value, "space": self.space,
                "seed": self.seed, "samples": self.samples,
                "verdict": self.verdict.value if self.verdict is not None else None,
                "sections": self.sections, "evidence": [report.to_dict() for report in self.evidence],
                "exit_code": self.exit_code, "elapsed_seconds": round(self.elapsed, 3)}


def catalog() -> List[SpaceSpecFile]:
    """
    Every built-in space, validated
    :return:
    """
    return [load_catalog_space(name) for name in catalog_names()]


def _solve(space_file: SpaceSpecFile, config: SampleConfig) -> Tuple[Dict, bool]:
    space, norm = space_file.space, space_file.norm
    sections = {}
    linsym = solve_linear_graph_symbolic(space, space_file.family)
    sections["family_graph"] = linsym.to_dict(space.h_labels)
    if linsym.consistent:
        sections["metric_graphs"] = [LinearFixedGraph(space, linear_graph_for_params(linsym, space_file.family,
                                                                                    params)).describe()
                                     for params in space_file.metrics]
    sections["natred_f1"] = [natred_f1(space, space_file.family, params).to_dict() for params in space_file.metrics]
    graph, notes = choose_graph(space, norm, linsym, config.seed)
    sections["finsler_graph"] = {"provenance": graph.provenance.value, "split_m": graph.space.m_labels,
                                 "graph": graph.describe(), "notes": notes}
    return sections, False


def _verify(space_file: SpaceSpecFile, config: SampleConfig) -> Tuple[Dict, List[ResidualReport], bool]:
    space, norm = space_file.space, space_file.norm
    linsym = solve_linear_graph_symbolic(space, space_file.family)
    graph, notes = choose_graph(space, norm, linsym, config.seed)
    admissibility = admissibility_sample(norm, config.count, config.seed)
    sections = {"graph": {"provenance": graph.provenance.value, "graph": graph.describe(), "notes": notes},
                "admissibility": admissibility.to_dict()}
    reports = run_battery(graph.space, norm, graph, config)
    failed = not admissibility.ok or not all(report.passed for report in reports)
    return sections, reports, failed


def run(command: Command, space_file: Optional[SpaceSpecFile], config: SampleConfig) -> RunReport:
    """
    Run one command
    :param command:
    :param space_file: None for catalog
    :param config:
    :return:
    """
    start = time.perf_counter()
    name = space_file.name if space_file is not None else ""
    sections: Dict = {}
    evidence: List[ResidualReport] = []
    verdict = None
    failed = False

    if command is Command.CATALOG:
        sections["catalog"] = [{"name": entry.name, "description": entry.description,
                                "dim_g": entry.space.algebra.dim, "dim_m": entry.space.dim_m,
                                "norm": entry.norm_options.get("family"), "metrics": len(entry.metrics),
                                "one_forms": len(entry.forms)}
                               for entry in catalog()]
    elif command is Command.DESCRIBE:
        sections["space"] = space_file.to_dict()
        sections["validation"] = space_file.space.validate().to_dict()
    elif command is Command.SOLVE:
        sections, failed = _solve(space_file, config)
    elif command is Command.VERIFY:
        sections, evidence, failed = _verify(space_file, config)
    elif command is Command.VERDICT:
        result = reductivity_verdict(space_file.space, space_file.norm, config)
        sections["verdict"] = result.to_dict()
        evidence = list(result.evidence)
        verdict = result.verdict

    return RunReport(command=command, space=name, seed=config.seed, samples=config.count, sections=sections,
                     evidence=tuple(evidence), verdict=verdict, failed=failed,
                     elapsed=time.perf_counter() - start)


def evidence_table(evidence) -> pd.DataFrame:
    return pd.DataFrame([{"check": report.check, "samples": report.samples, "max_residual": report.max_residual,
                          "threshold": report.threshold, "passed": report.passed, "detail": report.detail}
                         for report in evidence],
                        columns=["check", "samples", "max_residual", "threshold", "passed", "detail"])


def render_text(report: RunReport) -> str:
    """
    Human readable report
    :param report:
    :return:
    """
    lines = [f"geograph {report.command.value} space={report.space or '-'} seed={report.seed} "
             f"samples={report.samples}"]
    sections = report.sections

    if report.command is Command.CATALOG:
        lines.append(pd.DataFrame(sections["catalog"]).to_string(index=False))

    elif report.command is Command.DESCRIBE:
        lines.append(json.dumps(sections["space"], indent=2))
        lines.append("validation: " + ("ok" if sections["validation"]["ok"] else "failed"))

    elif report.command is Command.SOLVE:
        family_graph = sections["family_graph"]
        if family_graph["consistent"]:
            lines.append(f"family graph ({family_graph['kind']}):")
            lines.extend(f"  {line}" for line in family_graph["graph"])
            for index, metric_lines in enumerate(sections.get("metric_graphs", [])):
                lines.append(f"metric {index + 1}:")
                lines.extend(f"  {line}" for line in metric_lines)
        else:
            lines.append("family graph: inconsistent, no linear graph for generic parameters")
            lines.extend(f"  u={u} monomial={monomial}" for u, monomial in family_graph["equations"])
        for index, check in enumerate(sections["natred_f1"]):
            status = "pass" if check["passed"] else f"fail at {tuple(check['witness'])} value {check['value']}"
            lines.append(f"natural reductivity of metric {index + 1} in this split: {status}")
        finsler = sections["finsler_graph"]
        lines.append(f"finsler graph ({finsler['provenance']}, m = {', '.join(finsler['split_m'])}):")
        lines.extend(f"  {line}" for line in finsler["graph"])
        lines.extend(f"  note: {note}" for note in finsler["notes"])

    elif report.command is Command.VERIFY:
        lines.append(f"graph ({sections['graph']['provenance']}):")
        lines.extend(f"  {line}" for line in sections["graph"]["graph"])
        admissibility = sections["admissibility"]
        lines.append("admissibility: " + ("ok" if admissibility["ok"] else
                                          f"{len(admissibility['violations'])} violations"))

    elif report.command is Command.VERDICT:
        verdict = sections["verdict"]
        lines.append(f"verdict: {verdict['verdict']}")
        lines.append(f"graph ({verdict['provenance']}, m = {', '.join(verdict['split']['m_labels'])}):")
        lines.extend(f"  {line}" for line in verdict["graph"])
        if verdict["linear_graph"]:
            lines.append("linear graph:")
            lines.extend(f"  {line}" for line in verdict["linear_graph"])
        if verdict["witness"]:
            lines.append(f"witness y = {verdict['witness']}")
        lines.extend(f"note: {note}" for note in verdict["notes"])

    if report.evidence:
        lines.append(evidence_table(report.evidence).to_string(index=False))

    return "\n".join(lines)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Get args, check args, run and print
    :param argv: defaults to sys.argv
    :return: exit code
    """
    # Check / set log level
    if "--verbose" in (sys.argv if argv is None else argv):
        set_basic_logger(DEBUG)
    else:
        set_basic_logger(INFO)

    # Get / set check args
    try:
        args = check_geograph_args(get_geograph_args(argv))
    except (ArgumentError, SpaceSpecError, UnknownSpaceError, EnvironmentError) as error:
        print(f"geograph: error: {error}", file=sys.stderr)
        return 2

    try:
        report = run(args.command, args.space_file, SampleConfig(args.samples, args.seed))
    except EnvironmentError as error:
        print(f"geograph: error: {error}", file=sys.stderr)
        return 2
    except GeographError as error:
        print(f"geograph: {type(error).__name__}: {error}", file=sys.stderr)
        return 1

    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(render_text(report))

    logger.info(f"Finished {args.command.value} in {report.elapsed:.2f}s with exit code {report.exit_code}")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
