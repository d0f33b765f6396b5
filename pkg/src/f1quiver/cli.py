"""Command-line front end ``f1q``.

Reports go to stdout as sorted-key JSON (or ``--format text``); diagnostics go
to stderr. Exit codes: 0 ok, 2 unreadable input, 3 budget exceeded,
4 verification failure, 5 niceness not certified.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .corpus import CORPUS_BASES, generate_corpus
from .errors import F1QError, MalformedInput, TooLarge
from .gradings import nice_length, sufficient_conditions_report, universal_iteration
from .grassmannian import (
    DEFAULT_BUDGET as ORACLE_BUDGET,
)
from .grassmannian import (
    admissible,
    chi_table,
    count_points_fq,
    euler_characteristic,
    interpolated_chi,
)
from .hall import (
    HallAlgebra,
    coproduct,
    is_infinite_nice,
    nice_product,
    verify_affine_commutator,
    verify_tree_orientation_iso,
)
from .quiver import ProperPseudotree, Quiver, TypeATilde, Winding, classify_shape
from .rep import F1Rep, decompose, is_nilpotent, rep_from_winding

EXIT_VERIFICATION = 4


class VerificationFailed(F1QError):
    exit_code = EXIT_VERIFICATION


# ---------------------------------------------------------------------------
# input


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path}: {exc}") from exc


def load_quiver(path: str) -> Quiver:
    data = _read_json(path)
    if isinstance(data, dict) and "quiver" in data:
        data = data["quiver"]
    return Quiver.from_json(data)


def load_rep(path: str) -> F1Rep:
    """A representation file holds either ``{quiver, basis, maps}`` or a winding ``{gamma, base, vmap, amap}``."""
    data = _read_json(path)
    if isinstance(data, dict) and "gamma" in data:
        return rep_from_winding(Winding.from_json(data))
    return F1Rep.from_json(data)


def _parse_dim(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise MalformedInput(f"bad dimension vector {text!r}") from exc


def _budget(args) -> int | None:
    if args.budget is not None:
        return args.budget
    raw = os.environ.get("F1Q_BUDGET")
    return int(raw) if raw else None


# ---------------------------------------------------------------------------
# rendering


def _text_lines(value, prefix="") -> list[str]:
    if isinstance(value, dict):
        out = []
        for k in sorted(value):
            v = value[k]
            if isinstance(v, (dict, list)) and v:
                out.append(f"{prefix}{k}:")
                out += _text_lines(v, prefix + "  ")
            else:
                out.append(f"{prefix}{k}: {json.dumps(v, sort_keys=True)}")
        return out
    if isinstance(value, list):
        return [f"{prefix}- {json.dumps(v, sort_keys=True)}" for v in value]
    return [f"{prefix}{value}"]


def _nice_summary(cert_json: dict) -> str:
    if cert_json.get("nice_length") == "infinite":
        pairs = ",".join(f"({u},{v})" for u, v in cert_json["pairs"])
        return f"nice_length: infinite; pairs: {pairs}"
    return f"nice_length: {cert_json.get('nice_length')}"


def _emit(args, report, summary: list[str] | None = None):
    if args.format == "json":
        text = json.dumps(report, sort_keys=True, indent=2)
    else:
        text = "\n".join((summary or []) + _text_lines(report))
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


# ---------------------------------------------------------------------------
# commands


def cmd_quiver_check(args):
    q = load_quiver(args.path)
    shape = classify_shape(q)
    kind = type(shape).__name__
    report = {"shape": kind, "cycle_rank": q.cycle_rank, "connected": q.is_connected,
              "vertices": len(q.vertices), "arrows": len(q.arrows)}
    if isinstance(shape, TypeATilde):
        report["equioriented"] = shape.equioriented
    if isinstance(shape, ProperPseudotree):
        report["central_cycle"] = shape.central_cycle.to_json()
    _emit(args, report, [f"{kind}, rank {q.cycle_rank}"])


def cmd_rep_analyze(args):
    m = load_rep(args.path)
    cert = nice_length(m).to_json()
    states = universal_iteration(m) if m.winding.domain.is_connected and m.total_dim else []
    report = {
        "dim": list(m.dim),
        "nilpotent": is_nilpotent(m),
        "summands": [{"dim": list(p.dim), "key": p.key} for p in decompose(m)],
        "nice": cert,
        "lattice_ranks": [s.rank for s in states],
        "sufficient_conditions": {k: c.to_json() for k, c in sufficient_conditions_report(m).items()},
    }
    _emit(args, report, [_nice_summary(cert)])


def cmd_rep_euler(args):
    m = load_rep(args.path)
    if args.table:
        table = chi_table(m, args.assume_nice)
        entries = dict(table.entries)
        provenance = table.provenance
    else:
        if args.dim is None:
            raise MalformedInput("pass --dim or --table")
        d = _parse_dim(args.dim)
        value, provenance = euler_characteristic(m, d, args.assume_nice)
        entries = {d: value}
    report = {
        "chi": [{"chi": v, "dim": list(k)} for k, v in sorted(entries.items())],
        "provenance": provenance if isinstance(provenance, str) else provenance.to_json(),
    }
    summary = [f"chi{list(k)}: {v}" for k, v in sorted(entries.items())]
    if args.oracle:
        budget = _budget(args) or ORACLE_BUDGET
        checks = []
        mismatch = False
        for d, value in sorted(entries.items()):
            if not admissible(m, d):
                checks.append({"dim": list(d), "status": "skipped"})
                continue
            poly = interpolated_chi(m, d, budget)
            agree = poly.value_at_one == value
            mismatch |= not agree
            checks.append({"dim": list(d), "status": "agree" if agree else "disagree",
                           "polynomial": poly.to_json()})
        report["oracle"] = checks
        _emit(args, report, summary)
        if mismatch:
            raise VerificationFailed("finite-field oracle disagrees with the closed-subset count")
        return
    _emit(args, report, summary)


def cmd_rep_oracle(args):
    m = load_rep(args.path)
    d = _parse_dim(args.dim)
    budget = _budget(args) or ORACLE_BUDGET
    if args.prime:
        report = {"dim": list(d), "q": args.prime, "count": count_points_fq(m, d, args.prime, budget)}
    else:
        report = {"dim": list(d), "polynomial": interpolated_chi(m, d, budget).to_json()}
    _emit(args, report)


def _algebra(args, base: Quiver) -> HallAlgebra:
    return HallAlgebra(base, args.mode, _budget(args))


def _load_pair(args):
    a, b = load_rep(args.left), load_rep(args.right)
    alg = _algebra(args, a.base)
    return alg, alg.element(a), alg.element(b)


def cmd_hall_product(args):
    alg, x, y = _load_pair(args)
    _emit(args, {"element": alg.product(x, y).to_json()})


def cmd_hall_bracket(args):
    alg, x, y = _load_pair(args)
    _emit(args, {"element": alg.bracket(x, y).to_json()})


def cmd_hall_coproduct(args):
    m = load_rep(args.path)
    alg = _algebra(args, m.base)
    terms = coproduct(alg.element(m)).terms
    rows = [{"coeff": str(v), "left": {"class": a.key, "dim": list(a.dim)},
             "right": {"class": b.key, "dim": list(b.dim)}} for (a, b), v in terms.items()]
    rows.sort(key=lambda r: (r["left"]["dim"], r["left"]["class"], r["right"]["class"]))
    _emit(args, {"tensor": rows})


def cmd_hall_nice_quotient(args):
    a = load_rep(args.left)
    alg = _algebra(args, a.base)
    x = alg.element(a)
    if args.right is None:
        cls = next(iter(x.terms), None)
        dropped = cls is not None and is_infinite_nice(cls)
        _emit(args, {"dropped": dropped, "element": [] if dropped else x.to_json()})
        return
    y = alg.element(load_rep(args.right))
    full = alg.product(x, y)
    _emit(args, {"full": full.to_json(), "quotient": nice_product(x, y, alg.budget).to_json()})


def _finish_report(args, report):
    _emit(args, report.to_json())
    if not report.ok:
        raise VerificationFailed(f"{len(report.failures)} identities failed")


def cmd_hall_verify_tree_iso(args):
    q = load_quiver(args.path)
    arrows = [args.arrow] if args.arrow else [a.id for a in q.arrows]
    reports = {a: verify_tree_orientation_iso(q, a, args.bound, _budget(args)) for a in arrows}
    payload = {a: r.to_json() for a, r in reports.items()}
    _emit(args, payload)
    failed = sum(len(r.failures) for r in reports.values())
    if failed:
        raise VerificationFailed(f"{failed} intertwining identities failed")


def cmd_hall_verify_affine(args):
    q = load_quiver(args.path)
    _finish_report(args, verify_affine_commutator(q, args.bound, budget=_budget(args)))


def cmd_corpus_generate(args):
    bases = tuple(args.bases.split(",")) if args.bases else CORPUS_BASES
    corpus = generate_corpus(args.seed, args.count, bases=bases)
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    index = []
    for k, (name, m) in enumerate(corpus, 1):
        fname = f"rep_{k:03d}_{name}.json"
        (out / fname).write_text(json.dumps(m.to_json(), sort_keys=True, indent=2) + "\n")
        index.append({"base": name, "dim": list(m.dim), "file": fname})
    sys.stdout.write(json.dumps({"count": len(index), "files": index, "seed": args.seed},
                                sort_keys=True, indent=2) + "\n")


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--budget", type=int, help="enumeration budget (default: F1Q_BUDGET or built-in)")
    common.add_argument("--mode", choices=("all", "nilpotent"), default="all")

    parser = argparse.ArgumentParser(prog="f1q", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True)

    quiver = groups.add_parser("quiver").add_subparsers(dest="cmd", required=True)
    p = quiver.add_parser("check", parents=[common])
    p.add_argument("path")
    p.set_defaults(func=cmd_quiver_check)

    rep = groups.add_parser("rep").add_subparsers(dest="cmd", required=True)
    p = rep.add_parser("analyze", parents=[common])
    p.add_argument("path")
    p.set_defaults(func=cmd_rep_analyze)
    p = rep.add_parser("euler", parents=[common])
    p.add_argument("path")
    p.add_argument("--dim", help="comma separated dimension vector")
    p.add_argument("--table", action="store_true")
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--assume-nice", action="store_true")
    p.set_defaults(func=cmd_rep_euler)
    p = rep.add_parser("oracle", parents=[common])
    p.add_argument("path")
    p.add_argument("--dim", required=True)
    p.add_argument("--prime", type=int)
    p.set_defaults(func=cmd_rep_oracle)

    hall = groups.add_parser("hall").add_subparsers(dest="cmd", required=True)
    for name, func in (("product", cmd_hall_product), ("bracket", cmd_hall_bracket)):
        p = hall.add_parser(name, parents=[common])
        p.add_argument("left")
        p.add_argument("right")
        p.set_defaults(func=func)
    p = hall.add_parser("coproduct", parents=[common])
    p.add_argument("path")
    p.set_defaults(func=cmd_hall_coproduct)
    p = hall.add_parser("nice-quotient", parents=[common])
    p.add_argument("left")
    p.add_argument("right", nargs="?")
    p.set_defaults(func=cmd_hall_nice_quotient)
    p = hall.add_parser("verify-tree-iso", parents=[common])
    p.add_argument("path")
    p.add_argument("--arrow")
    p.add_argument("--bound", type=int)
    p.set_defaults(func=cmd_hall_verify_tree_iso)
    p = hall.add_parser("verify-affine", parents=[common])
    p.add_argument("path")
    p.add_argument("--bound", type=int, default=9)
    p.set_defaults(func=cmd_hall_verify_affine)

    corpus = groups.add_parser("corpus").add_subparsers(dest="cmd", required=True)
    p = corpus.add_parser("generate")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=24)
    p.add_argument("--bases", help="comma separated quiver names")
    p.add_argument("--output-dir", default="corpus")
    p.set_defaults(func=cmd_corpus_generate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except F1QError as exc:
        print(f"f1q: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except RecursionError as exc:  # pathological inputs
        print(f"f1q: {exc}", file=sys.stderr)
        return TooLarge.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
