"""Command-line front end.

Exit codes: 0 ran to completion, 1 an identity or limit failed, 2 usage or
parse error.  ``--format structured`` prints one JSON document whose field
order is fixed; the human format is rendered from the same document.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import battery, catalog, limits
from .signatures import (
    CANONICAL,
    WordParseError,
    Word,
    extension_order,
    is_canonical,
    signature_chain,
    word_signature,
    word_to_axis_permutation,
)

OK, FAILURE, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(doc: dict, fmt: str, render) -> None:
    if fmt == "structured":
        print(json.dumps(doc, indent=2, ensure_ascii=False))
    else:
        print(render(doc))


def _parse_word(text: str) -> Word:
    try:
        return Word.parse(text)
    except WordParseError as exc:
        raise UsageError(f"parse error at column {exc.column}: {exc}") from None


# -- signature -------------------------------------------------------------------


def signature_document(text: str) -> dict:
    w = _parse_word(text)
    chain = signature_chain(CANONICAL, w)
    steps = [{"word": "", "signature": str(chain[0])}]
    for k, sig in enumerate(chain[1:], 1):
        steps.append({"word": str(w)[:k], "signature": str(sig)})
    doc = {"word": str(w), "chain": steps, "order": None}
    if is_canonical(w):
        doc["order"] = str(extension_order(w))
    return doc


def render_signature(doc: dict) -> str:
    lines = []
    for step in doc["chain"]:
        name = "f" if not step["word"] else f"f^{step['word']}"
        lines.append(f"{name:<{len(doc['word']) + 3}} : {step['signature']}")
    if doc["order"]:
        lines.append(f"order : {doc['order']}")
    return "\n".join(lines)


def cmd_signature(args) -> int:
    _emit(signature_document(args.word), args.format, render_signature)
    return OK


# -- word-check ------------------------------------------------------------------


def word_check_document(a_text: str, b_text: str) -> dict:
    a, b = _parse_word(a_text), _parse_word(b_text)
    sa, sb = word_signature(CANONICAL, a), word_signature(CANONICAL, b)
    pa, pb = word_to_axis_permutation(a), word_to_axis_permutation(b)
    return {
        "words": [str(a), str(b)],
        "signatures": [str(sa), str(sb)],
        "signatures_match": sa == sb,
        "axis_permutations": [list(pa.perm), list(pb.perm)],
        "permutations_match": pa.perm == pb.perm,
        "equal": sa == sb and pa.perm == pb.perm,
    }


def render_word_check(doc: dict) -> str:
    a, b = doc["words"]
    lines = [
        f"f^{a or '(empty)'} : {doc['signatures'][0]}",
        f"f^{b or '(empty)'} : {doc['signatures'][1]}",
        f"signatures: {'match' if doc['signatures_match'] else 'mismatch'}",
        "axis permutations: "
        + ("match" if doc["permutations_match"] else "mismatch")
        + f" {tuple(doc['axis_permutations'][0])} vs {tuple(doc['axis_permutations'][1])}",
        f"verdict: {'equal' if doc['equal'] else 'different'}",
    ]
    return "\n".join(lines)


def cmd_word_check(args) -> int:
    doc = word_check_document(args.word_a, args.word_b)
    _emit(doc, args.format, render_word_check)
    return OK if doc["equal"] else FAILURE


# -- limits ----------------------------------------------------------------------


def limits_document(name: str, N: int, H: int, tol: float) -> dict:
    if name not in catalog.CATALOG:
        raise UsageError(f"unknown example {name!r}; choose from {', '.join(catalog.names())}")
    try:
        report = battery.run_example(name, N, H, tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    consistent = limits.theorem21_consistency(report) if report.all_ok else None
    return limits.report_document(report, consistent)


def _fmt_value(value, labels):
    if value is None:
        return "-"
    if len(value) == 1:
        return f"{value[0]:.12g}"
    return ", ".join(f"{lab}={v:.12g}" for lab, v in zip(labels, value) if v != 0.0) or "all functionals 0"


def render_limits(doc: dict) -> str:
    p = doc["parameters"]
    lines = [f"map: {doc['map']}  (N={p['N']}, H={p['H']}, tol={p['tol']:g})"]
    lines.append(f"test functionals: {len(doc['functionals'])}")
    for r in doc["orders"]:
        head = f"  {r['order']}  f^{r['word']:<7} {r['status']:<21}"
        if r["status"] == limits.FAILED:
            lines.append(f"{head} {r['error']}")
        else:
            idx = ",".join(str(i) for i in r["stabilization_indices"])
            lines.append(f"{head} value {_fmt_value(r['value'], doc['functionals'])}  [indices {idx}; {'/'.join(r['methods'])}]")
    lines.append(f"probe points: {len(doc['probes']) + 1}")
    c = doc["classification"]
    lines.append(f"classification: {c['verdict']}")
    if c["witness"]:
        w = c["witness"]
        lines.append(f"  witness: {w['orders'][0]} vs {w['orders'][1]} at {w['point']}")
    lines.append(f"  t****s = s****t on all probes: {c['close_to_regular']}")
    if "criteria_consistent" in doc:
        lines.append(f"regularity criteria consistent: {doc['criteria_consistent']}")
    return "\n".join(lines)


def cmd_limits(args) -> int:
    doc = limits_document(args.example, args.trunc, args.horizon, args.tol)
    _emit(doc, args.format, render_limits)
    failed = any(r["status"] == limits.FAILED for r in doc["orders"])
    return FAILURE if failed or doc["classification"]["verdict"] is None else OK


# -- tensor-test -----------------------------------------------------------------


def _parse_dims(text: str):
    try:
        return battery.check_dims(int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"invalid dims {text!r}: {exc}") from None


def tensor_test_document(dims, seed: int, trials: int) -> dict:
    counts = battery.tensor_battery(dims, seed, trials)
    return {
        "dims": list(dims),
        "seed": seed,
        "trials": trials,
        "identities": {k: {"passed": p, "run": n} for k, (p, n) in counts.items()},
        "all_passed": all(p == n for p, n in counts.values()),
    }


def render_tensor_test(doc: dict) -> str:
    lines = [f"dims {tuple(doc['dims'])}, seed {doc['seed']}, {doc['trials']} trials"]
    for k, v in doc["identities"].items():
        lines.append(f"  {k:<17} {v['passed']}/{v['run']}")
    lines.append("all identities pass" if doc["all_passed"] else "FAILURES")
    return "\n".join(lines)


def cmd_tensor_test(args) -> int:
    if args.trials < 1:
        raise UsageError("trials must be positive")
    doc = tensor_test_document(_parse_dims(args.dims), args.seed, args.trials)
    _emit(doc, args.format, render_tensor_test)
    return OK if doc["all_passed"] else FAILURE


# -- report ----------------------------------------------------------------------


def cmd_report(args) -> int:
    if not args.all:
        raise UsageError("report needs --all")
    results = battery.run_all()
    if args.format == "structured":
        doc = {
            "criteria": [
                {"number": c.number, "name": c.name, "passed": c.passed, "detail": c.detail}
                for c in results
            ],
            "all_passed": all(c.passed for c in results),
        }
        print(json.dumps(doc, indent=2, ensure_ascii=False))
    else:
        for c in results:
            print(c.line())
        print(f"{sum(c.ok for c in results)}/{len(results)} criteria pass")
    return OK if all(c.ok for c in results) else FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aronberner", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", choices=("human", "structured"), default="human")

    p = sub.add_parser("signature", help="print the signature after each letter of a word")
    p.add_argument("word")
    fmt(p)
    p.set_defaults(func=cmd_signature)

    p = sub.add_parser("word-check", help="compare two words in the finite model")
    p.add_argument("word_a")
    p.add_argument("word_b")
    fmt(p)
    p.set_defaults(func=cmd_word_check)

    p = sub.add_parser("limits", help="six iterated limits of a catalog example")
    p.add_argument("--example", required=True)
    p.add_argument("--trunc", type=int, default=limits.DEFAULT_N, metavar="N")
    p.add_argument("--horizon", type=int, default=limits.DEFAULT_H, metavar="H")
    p.add_argument("--tol", type=float, default=limits.DEFAULT_TOL)
    fmt(p)
    p.set_defaults(func=cmd_limits)

    p = sub.add_parser("tensor-test", help="identity battery on seeded random tensors")
    p.add_argument("--dims", required=True, help="a,b,c,d with each in 1..16")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    fmt(p)
    p.set_defaults(func=cmd_tensor_test)

    p = sub.add_parser("report", help="run the acceptance battery")
    p.add_argument("--all", action="store_true")
    fmt(p)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(encoding="utf-8")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
