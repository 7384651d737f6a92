"""Text and JSON rendering of check reports."""

from __future__ import annotations

from .. import __version__
from ..ontology.checks import CheckResult, TheoremReport


def fmt_float(x: float) -> str:
    return f"{x:.12g}"


def fmt_dev(x: float) -> str:
    return f"{x:.11e}"


def verdict(passed: bool) -> str:
    return "PASS" if passed else "FAIL"


def check_table(rows: list[CheckResult]) -> str:
    header = ("check", "ref", "deviation", "tolerance", "verdict")
    body = [(c.name, c.reference, fmt_dev(c.deviation), fmt_dev(c.tolerance), verdict(c.passed))
            for c in rows]
    widths = [max(len(r[i]) for r in [header] + body) for i in range(len(header))]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for r in body:
        lines.append("  ".join(v.ljust(w) for v, w in zip(r, widths)))
    return "\n".join(lines)


def render_text(report: TheoremReport, extra: list[CheckResult] = ()) -> str:
    out = [f"model: {report.model}", ""]
    out.append(check_table(list(report.checks)))
    out.append("")
    out.append("derived:")
    out.append(check_table([report.consistency] + list(extra)))
    out.append("")
    lines = [f"{c.name}: {verdict(c.passed)}" for c in report.checks]
    out.extend(lines)
    det = report.determination
    out.append("")
    out.append(f"psi-determination: {'determined' if det.determined else 'not determined'}")
    for lam, psis in det.support.items():
        out.append(f"  Lambda={lam} -> Psi in {{{', '.join(psis)}}}")
    out.append("")
    out.append(f"verdict: {report.verdict}")
    return "\n".join(out) + "\n"


def render_json(report: TheoremReport, tolerance: float, source: str | None = None,
                extra: list[CheckResult] = ()) -> dict:
    doc = {"tool": "ontocheck", "version": __version__}
    body = report.to_dict()
    body["derived"] = body["derived"] + [c.to_dict() for c in extra]
    doc.update(body)
    doc["tolerance"] = tolerance
    if source is not None:
        doc["source"] = source
    return doc
