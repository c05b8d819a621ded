"""Machine-readable reports: JSON payloads and a plain text rendering."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .exactalg import Poly, format_rat
from .ore import OreOp
from .ratfun import RatFun
from .stability import ChainReport, ChainStep, FirstOrderBounds, FirstOrderVerdict, SindReport

SCHEMA_VERSION = "1"


def to_jsonable(v: Any) -> Any:
    """Convert library values to JSON types; exact scalars become "a/b" strings."""
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if isinstance(v, Fraction):
        return format_rat(v)
    if isinstance(v, (Poly, RatFun, OreOp)):
        return v.to_str()
    if isinstance(v, dict):
        return {str(k): to_jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [to_jsonable(x) for x in v]
    raise TypeError(f"cannot serialize {type(v).__name__}")


def step_payload(step: ChainStep) -> dict[str, Any]:
    return {
        "operator": step.operator,
        "order": step.operator.order,
        "case": step.case,
        "certificate_l": step.certificate_l,
        "certificate_H": step.certificate_H,
    }


def chain_payload(r: ChainReport) -> dict[str, Any]:
    return {
        "base": r.base,
        "orders": list(r.orders),
        "steps": [step_payload(s) for s in r.steps],
        "verified_identity": r.verified_identity,
    }


def sind_payload(r: SindReport) -> dict[str, Any]:
    return {
        "operator": r.operator,
        "B": r.B,
        "missing_degrees": list(r.missing_degrees),
        "sind": r.sind,
        "witnesses": {str(i): {"p": p, "y": y} for i, (p, y) in sorted(r.witnesses.items())},
    }


def bounds_payload(b: FirstOrderBounds) -> dict[str, Any]:
    return {"lower": b.lower, "upper": b.upper, "exact": b.exact, "indicial_upper": b.indicial_upper}


def verdict_payload(v: FirstOrderVerdict) -> dict[str, Any]:
    form: dict[str, Any] = {"kind": v.form, "h": v.h}
    if v.form == "constant":
        form["alpha"] = v.alpha
    elif v.form == "pole":
        form["beta"] = v.beta
        form["c"] = v.c
    return {"stable": v.stable, "normal_form": form}


def make_report(command: str, inputs: dict[str, Any], payload: dict[str, Any], warnings=()) -> dict[str, Any]:
    out = dict(payload)
    out.update(
        schema_version=SCHEMA_VERSION,
        command=command,
        input=inputs,
        warnings=list(warnings),
    )
    return to_jsonable(out)


def emit_json(report: dict[str, Any]) -> str:
    return json.dumps(report, sort_keys=True)


def emit_text(report: dict[str, Any]) -> str:
    lines = [f"{report['command']} (schema {report['schema_version']})"]
    for k, v in sorted(report["input"].items()):
        lines.append(f"input {k}: {v}")
    if report["command"] == "chain":
        lines.append(f"L_0: ord={report['orders'][0]}, case=base, op={report['base']}")
        for i, s in enumerate(report["steps"], start=1):
            lines.append(f"L_{i}: ord={s['order']}, case={s['case']}, op={s['operator']}")
        lines.append(f"verified_identity: {str(report['verified_identity']).lower()}")
        skip = {"orders", "base", "steps", "verified_identity"}
    else:
        skip = set()
    skip |= {"command", "schema_version", "input", "warnings"}
    for k in sorted(report):
        if k in skip:
            continue
        v = report[k]
        lines.append(f"{k}: {v if isinstance(v, str) else json.dumps(v, sort_keys=True)}")
    for w in report["warnings"]:
        lines.append(f"warning: {w}")
    return "\n".join(lines)


def emit_report(report: dict[str, Any], fmt: str = "json") -> str:
    if fmt == "json":
        return emit_json(report)
    if fmt == "text":
        return emit_text(report)
    raise ValueError(f"unknown format {fmt!r}")
