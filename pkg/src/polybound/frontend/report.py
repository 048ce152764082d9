"""Plain-text and JSON rendering of analysis results."""

from __future__ import annotations

import json

from ..analysis import AnalysisResult
from ..interp import Verdict


def worst_case_line(result: AnalysisResult) -> str:
    return f"WORST_CASE(?, {result.complexity.big_o()})"


def _rows(result: AnalysisResult) -> list:
    return [(t.id, f"{t.src} -> {t.tgt}", str(result.runtime[t.id])) for t in result.program.transitions]


def render_report(result: AnalysisResult, proof: bool = False, check=None) -> str:
    """TermComp-style first line, then one row per transition."""
    lines = [worst_case_line(result), "", "Global runtime bounds:"]
    rows = _rows(result)
    w_id = max(len(r[0]) for r in rows)
    w_edge = max(len(r[1]) for r in rows)
    for tid, edge, b in rows:
        lines.append(f"  {tid:<{w_id}}  {edge:<{w_edge}}  {b}")
    lines.append(f"Overall: {result.overall}")
    if check is not None:
        lines.append("")
        lines.append(f"Check: {check.verdict.value} ({check.states} initial states)")
        for sigma, tid, seen, claimed in check.violations[:10]:
            lines.append(f"  {tid} ran {seen} times from {sigma}, bound says {claimed}")
    if proof:
        lines.append("")
        lines.append("Derivation:")
        lines.extend(f"  {entry}" for entry in result.proof)
        if result.local:
            lines.append("Local twn bounds per entry:")
            for (cycle, r), eb in sorted(result.local.items()):
                lines.append(f"  [{cycle}] via {r}: {eb.bound}  (psi: {eb.psi}; {eb.note})")
    return "\n".join(lines) + "\n"


def report_dict(result: AnalysisResult, proof: bool = False, check=None) -> dict:
    out = {
        "worst_case": result.complexity.big_o(),
        "overall": str(result.overall),
        "transitions": [{"id": tid, "edge": edge, "bound": b} for tid, edge, b in _rows(result)],
    }
    if check is not None:
        out["check"] = {
            "verdict": check.verdict.value,
            "states": check.states,
            "violations": [
                {"sigma0": sigma, "transition": tid, "observed": seen, "bound": claimed}
                for sigma, tid, seen, claimed in check.violations
            ],
        }
    if proof:
        out["derivation"] = list(result.proof)
        out["local"] = [
            {"cycle": cycle, "entry": r, "bound": str(eb.bound), "psi": eb.psi, "note": eb.note}
            for (cycle, r), eb in sorted(result.local.items())
        ]
    return out


def render_json(result: AnalysisResult, proof: bool = False, check=None) -> str:
    return json.dumps(report_dict(result, proof, check), indent=2, sort_keys=True) + "\n"


def check_failed(check) -> bool:
    return check is not None and check.verdict is not Verdict.PASS
