"""Command-line front end.

Exit codes: 0 for a Valid verdict (and any successful non-check command),
1 for Invalid, 2 for errors, unsupported requests, and bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .bounds import (
    degree_scan,
    is_acyclic,
    is_simple,
    logbound_modular,
    logbound_polymatroid_dual,
    logbound_simple_entropic,
    logbound_step,
    parse_constraints,
    relation_from_csv,
)
from .core import CapExceeded, DomainError, evaluate
from .dsl import DslError, format_inequality, parse_inequality
from .functions import distribution_from_csv, entropic_from_distribution
from .reductions import (
    from_3coloring,
    from_3dmonsat,
    from_partition,
    parse_graph,
    parse_monsat,
    parse_partition,
)
from .validity import UnsupportedSemantics, Verdict, Witness, check

JSON_SCHEMA_VERSION = 1
WITNESS_TABLE_MAX_N = 12


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _witness_payload(witness: Witness) -> dict:
    uni = witness.function.universe
    payload: dict = {"kind": witness.kind, "description": witness.describe()}
    if witness.step_set is not None:
        payload["step_set"] = uni.label(witness.step_set)
    if witness.generators:
        payload["generators"] = [uni.label(g) for g in witness.generators]
    if witness.variable is not None:
        payload["variable"] = witness.variable
    if uni.n <= WITNESS_TABLE_MAX_N:
        payload["nonzero"] = {
            uni.label(m): str(witness.function[m])
            for m in range(1, uni.full_mask + 1)
            if witness.function[m]
        }
    return payload


def _certificate_lines(verdict: Verdict) -> list[str]:
    uni = verdict.certificate.universe
    lines = []
    for weight, axiom in verdict.certificate.parts:
        if axiom.kind == "nonneg":
            lines.append(f"{weight} * NonNeg({uni.label(axiom.sup)})")
        else:
            lines.append(
                f"{weight} * Mono({uni.label(axiom.sup)} >= "
                f"{uni.label(axiom.sub)})"
            )
    return lines


def _provenance(verdict: Verdict) -> dict:
    prov: dict = {"method": verdict.method}
    if verdict.iterations is not None:
        prov["iterations"] = verdict.iterations
    if verdict.lp_shape is not None:
        prov["lp_rows"], prov["lp_cols"] = verdict.lp_shape
    return prov


def _print_witness(witness: Witness) -> None:
    print(f"witness: {witness.describe()}")
    uni = witness.function.universe
    if uni.n > WITNESS_TABLE_MAX_N:
        return
    for m in range(1, uni.full_mask + 1):
        value = witness.function[m]
        if value:
            print(f"  {uni.label(m)}: {value}")


def cmd_check(args: argparse.Namespace) -> int:
    expr = parse_inequality(_read(args.file))
    verdict = check(expr, args.semantics)
    if args.json:
        doc: dict = {
            "schema": JSON_SCHEMA_VERSION,
            "command": "check",
            "valid": verdict.valid,
            "classes": list(verdict.semantics),
            "provenance": _provenance(verdict),
        }
        if verdict.witness is not None:
            doc["witness"] = _witness_payload(verdict.witness)
        if verdict.witness_absent:
            doc["witness_absent"] = True
        if verdict.certificate is not None and args.certificate:
            doc["certificate"] = _certificate_lines(verdict)
        if verdict.per_class is not None:
            doc["per_class"] = {
                name: {"valid": sub.valid, "method": sub.method}
                for name, sub in verdict.per_class.items()
            }
        print(json.dumps(doc, indent=2))
    else:
        state = "Valid" if verdict.valid else "Invalid"
        print(f"{state} over {', '.join(verdict.semantics)}")
        if verdict.per_class is not None:
            for name, sub in verdict.per_class.items():
                print(f"  {name}: {'Valid' if sub.valid else 'Invalid'}")
        if args.certificate:
            if verdict.certificate is not None:
                print("certificate:")
                for line in _certificate_lines(verdict):
                    print(f"  {line}")
            else:
                print("certificate: none recorded")
        if args.witness:
            if verdict.witness is not None:
                _print_witness(verdict.witness)
            elif verdict.witness_absent:
                print("witness: not recovered (size cap)")
    return 0 if verdict.valid else 1


_BOUND_METHODS = {
    "modular": logbound_modular,
    "simple": logbound_simple_entropic,
    "polymatroid": logbound_polymatroid_dual,
    "step": logbound_step,
}


def cmd_bound(args: argparse.Namespace) -> int:
    query, sigma = parse_constraints(_read(args.file))
    method = args.method
    if method == "auto":
        if is_simple(sigma):
            method = "simple"
        elif is_acyclic(sigma):
            method = "modular"
        else:
            method = "polymatroid"
            print(
                "note: cyclic, non-simple system; solving an "
                f"exponential-size program over {sigma.universe.n} variables",
                file=sys.stderr,
            )
    result = _BOUND_METHODS[method](query, sigma)
    value_text = "inf" if not result.is_finite else str(result.value)
    if args.json:
        doc = {
            "schema": JSON_SCHEMA_VERSION,
            "command": "bound",
            "method": result.method,
            "value": value_text,
            "value_float": float("inf")
            if not result.is_finite
            else float(result.value),
            "linear_value": result.linear_value(),
        }
        if result.weights is not None:
            doc["weights"] = [str(w) for w in result.weights]
        if result.lp_shape is not None:
            doc["lp_rows"], doc["lp_cols"] = result.lp_shape
        print(json.dumps(doc, indent=2))
    else:
        print(f"log-bound: {value_text}")
        if result.weights is not None:
            print(f"weights: {' '.join(str(w) for w in result.weights)}")
        print(f"2^value: {result.linear_value()}")
    return 0


_REDUCERS = {
    "monsat3": lambda text: from_3dmonsat(parse_monsat(text)),
    "coloring": lambda text: from_3coloring(parse_graph(text)),
    "partition": lambda text: from_partition(parse_partition(text)),
}


def cmd_reduce(args: argparse.Namespace) -> int:
    expr = _REDUCERS[args.kind](_read(args.file))
    text = format_inequality(expr) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")
    return 0


def _sparse_function_values(text: str) -> dict[str, Fraction]:
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    header = [c.strip() for c in rows[0]]
    if header != ["set", "value"]:
        raise DomainError("expected a 'set,value' header")
    out: dict[str, Fraction] = {}
    for cells in rows[1:]:
        if len(cells) != 2:
            raise DomainError(f"bad set-function row {cells!r}")
        out[cells[0].strip()] = Fraction(cells[1].strip())
    return out


def cmd_eval(args: argparse.Namespace) -> int:
    expr = parse_inequality(_read(args.ineq))
    data = _read(args.data)
    first = [c.strip() for c in data.splitlines()[0].split(",")] if data.strip() else []
    if first and first[-1] == "prob":
        dist = distribution_from_csv(data)
        vector = entropic_from_distribution(dist)
        total = 0.0
        for mask, coeff in expr.terms.items():
            names = expr.universe.names_of(mask)
            total += float(coeff) * vector[dist.universe.mask(names)]
        print(total)
    elif first == ["set", "value"]:
        table = _sparse_function_values(data)
        values: dict[int, Fraction] = {}
        for key, value in table.items():
            for ch in "{},":
                key = key.replace(ch, " ")
            names = [n for n in key.split() if n]
            values[expr.universe.mask(names)] = value
        if values.get(0, Fraction(0)) != 0:
            raise DomainError("the empty set must have value 0")
        full = {
            m: values.get(m, Fraction(0))
            for m in range(1, expr.universe.full_mask + 1)
        }
        print(evaluate(expr, full))
    else:
        raise DomainError(
            "data file must be a distribution CSV (last column 'prob') or "
            "a set-function table ('set,value')"
        )
    return 0


def cmd_degscan(args: argparse.Namespace) -> int:
    relation = relation_from_csv(Path(args.csv).stem, _read(args.csv))
    selector = args.conditional
    if "|" in selector:
        v_text, u_text = selector.split("|", 1)
    else:
        v_text, u_text = selector, ""
    target = [v.strip() for v in v_text.split(",") if v.strip()]
    condition = [v.strip() for v in u_text.split(",") if v.strip()]
    if not target:
        raise DomainError("empty degree target")
    print(degree_scan(relation, target, condition))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entroplex",
        description="Validity checking, degree bounds, and hardness "
        "reductions for information inequalities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide validity of an inequality file")
    p.add_argument("file")
    p.add_argument(
        "--class",
        dest="semantics",
        default="auto",
        choices=["modular", "normal", "step", "polymatroid", "monotone", "auto"],
    )
    p.add_argument("--certificate", action="store_true")
    p.add_argument("--witness", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("bound", help="log output-size bound of a constraint file")
    p.add_argument("file")
    p.add_argument(
        "--method",
        default="auto",
        choices=["modular", "simple", "polymatroid", "step", "auto"],
    )
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_bound)

    p = sub.add_parser("reduce", help="turn a hardness instance into an inequality")
    p.add_argument("kind", choices=sorted(_REDUCERS))
    p.add_argument("file")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_reduce)

    p = sub.add_parser("eval", help="evaluate an inequality on data")
    p.add_argument("ineq")
    p.add_argument("data")
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("degscan", help="max conditional degree of a relation CSV")
    p.add_argument("csv")
    p.add_argument("conditional", help="e.g. 'B|A' or 'A,B'")
    p.set_defaults(handler=cmd_degscan)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (DomainError, DslError, CapExceeded, UnsupportedSemantics) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 2
    except OSError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
