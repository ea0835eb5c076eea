"""Command-line interface.

Subcommands: ``ad`` (dissimilarity of four operands), ``solve``
(analogical equations), ``search`` (k least-dissimilar triples),
``classify`` (benchmark the decision rule), ``bench`` (pivot-fraction
efficiency sweep), ``generate`` (synthetic labeled sequences).

Exit codes: 0 on success, 1 on usage errors, 2 on data or validation
errors.  Every value printed is produced by the corresponding library
call; the CLI does no arithmetic of its own.
"""

from __future__ import annotations

import argparse
import csv
import sys
from typing import List, Optional

import numpy as np

from . import core
from .alphabet import load_alphabet
from .classify import DecisionConfig, evaluate
from .dataio import (build_encoding_map, encode, encode_feature_row,
                     infer_schema, load_schema, parse_csv)
from .errors import AnalogyError
from .search import (ItemStore, brute_force_search, build_index,
                     fadana_search, select_base_prototypes)
from .sequences import (enumerate_solutions, export_dag, sequence_ad,
                        solve_sequence_equation)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _fmt(x) -> str:
    """Integers bare, reals with six significant digits."""
    f = float(x)
    if f == int(f) and abs(f) < 1e15:
        return str(int(f))
    return "%.6g" % f


def _parse_bits(text: str) -> List[int]:
    if not text or set(text) - {"0", "1"}:
        raise _UsageError(f"not a bit string: {text!r}")
    return [int(ch) for ch in text]


def _parse_real(text: str) -> List[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok != ""]
    except ValueError:
        raise _UsageError(f"not a comma-separated real vector: {text!r}")


def _format_witness(witness, gap: str) -> List[str]:
    rows = []
    for r in range(4):
        cells = [col[r] if col[r] != gap else "-" for col in witness]
        width = max((len(c) for c in cells), default=1)
        if width == 1:
            rows.append("".join(cells))
        else:
            rows.append(" ".join(c.rjust(width) for c in cells))
    return rows


# -- ad ----------------------------------------------------------------

def _cmd_ad(args) -> int:
    if args.mode == "bits":
        ops = [_parse_bits(t) for t in args.operands]
        if len({len(o) for o in ops}) != 1:
            raise _UsageError("bit operands must share one length")
        print(_fmt(core.vector_ad(*ops)))
    elif args.mode == "real":
        ops = [_parse_real(t) for t in args.operands]
        print(_fmt(core.real_ad(*ops, p=args.p)))
    else:
        if not args.alphabet:
            raise _UsageError("ad seq requires --alphabet")
        alpha = load_alphabet(args.alphabet)
        seqs = [alpha.parse(t) for t in args.operands]
        cost, witness = sequence_ad(*seqs, alpha)
        print(_fmt(cost))
        if args.witness:
            for line in _format_witness(witness, alpha.gap):
                print(line)
    return 0


# -- solve -------------------------------------------------------------

def _cmd_solve(args) -> int:
    if args.mode == "bits":
        ops = [_parse_bits(t) for t in args.operands]
        sol = core.solve_bitvector_equation(*ops)
        print("NO SOLUTION" if sol is None else "".join(str(b) for b in sol))
    elif args.mode == "set":
        ops = [set(t.split(",")) - {""} for t in args.operands]
        sol = core.solve_set_equation(*ops)
        print("NO SOLUTION" if sol is None else ",".join(sorted(sol)))
    elif args.mode == "real":
        ops = [_parse_real(t) for t in args.operands]
        print(",".join(_fmt(v) for v in core.solve_real_equation(*ops)))
    else:
        if not args.alphabet:
            raise _UsageError("solve seq requires --alphabet")
        alpha = load_alphabet(args.alphabet)
        seqs = [alpha.parse(t) for t in args.operands]
        cost, dag = solve_sequence_equation(*seqs, alpha)
        print(_fmt(cost))
        solutions = enumerate_solutions(dag, limit=args.max_solutions)
        for seq in sorted(solutions.sequences):
            print(alpha.format(seq))
        if solutions.truncated:
            print("# truncated at %d solutions" % args.max_solutions,
                  file=sys.stderr)
        if args.dot:
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(export_dag(dag))
    return 0


# -- search ------------------------------------------------------------

def _load_encoded(path, class_column, schema_path=None, extra_tables=()):
    table = parse_csv(path, class_column=class_column)
    if schema_path:
        schema = load_schema(schema_path)
    else:
        rows = table.rows
        for other in extra_tables:
            rows = rows + other.rows
        union = type(table)(columns=table.columns, rows=rows,
                            class_column=table.class_column)
        schema = infer_schema(union)
    mapping = build_encoding_map(schema)
    return table, schema, mapping, encode(table, schema, mapping)


def _cmd_search(args) -> int:
    _, schema, mapping, ds = _load_encoded(args.train, args.class_column,
                                           args.schema)
    query = encode_feature_row(schema, mapping, args.query.split(","))
    store = ItemStore(ds.items)
    if args.method == "brute":
        result = brute_force_search(store, query, args.k)
    else:
        n_pivots = max(1, round(args.base_frac * store.size))
        pivots = select_base_prototypes(store, n_pivots, args.seed)
        index = build_index(store, pivots)
        result = fadana_search(index, query, args.k)
    for (u, v, w), val in result.entries:
        print("(%d,%d,%d) %s" % (u, v, w, _fmt(val)))
    print("evaluations: %d" % result.ad_evaluations)
    return 0


# -- classify ----------------------------------------------------------

def _cmd_classify(args) -> int:
    if args.weighted and args.search == "fadana":
        raise _UsageError("--weighted requires --search exhaustive: "
                          "class-pair weights break the shared pruning metric")
    train_table = parse_csv(args.train, class_column=args.class_column)
    test_table = parse_csv(args.test, class_column=args.class_column)
    if args.schema:
        schema = load_schema(args.schema)
    else:
        union = type(train_table)(
            columns=train_table.columns,
            rows=train_table.rows + test_table.rows,
            class_column=train_table.class_column)
        schema = infer_schema(union)
    mapping = build_encoding_map(schema)
    train = encode(train_table, schema, mapping)
    test = encode(test_table, schema, mapping)
    cfg = DecisionConfig(
        k=args.k, weighted=args.weighted, search_mode=args.search,
        base_fraction=args.base_frac,
        tie_policy="reject" if args.tie == "reject" else "fallback_min_ad",
        pivot_seed=args.seed)
    report = evaluate(train, test, cfg)
    if report.undefined_accuracy:
        print("accuracy: undefined (empty test set)")
    else:
        print("accuracy: %.4f" % report.accuracy)
    print("rejects: %d" % report.rejects)
    for cls, recall in sorted(report.per_class_recall().items(), key=str):
        print("recall[%s]: %s" % (cls, "n/a" if recall is None
                                  else "%.4f" % recall))
    if report.mean_ad_evaluations is not None:
        print("mean_ad_evaluations: %.1f" % report.mean_ad_evaluations)
    if args.report:
        with open(args.report, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["index", "true", "predicted", "k_prime", "top_ad"])
            for idx, true, pred, k_prime, top in report.rows:
                writer.writerow([idx, true,
                                 "REJECT" if pred is None else pred,
                                 k_prime, _fmt(top) if top == top else "nan"])
    return 0


# -- bench -------------------------------------------------------------

def _cmd_bench(args) -> int:
    fractions = []
    for tok in args.base_fracs.split(","):
        f = float(tok)
        if not 0 < f <= 1:
            raise _UsageError(f"base fraction {f} outside (0, 1]")
        fractions.append(f)
    _, schema, mapping, ds = _load_encoded(args.train, args.class_column,
                                           args.schema)
    rng = np.random.default_rng(args.seed)
    if args.queries >= ds.size:
        raise _UsageError("need at least one training row left after "
                          "holding out the queries")
    held = np.sort(rng.choice(ds.size, size=args.queries, replace=False))
    mask = np.zeros(ds.size, dtype=bool)
    mask[held] = True
    store = ItemStore(ds.items[~mask])
    queries = ds.items[mask]
    m = store.size
    canonical = m * m * (m + 1) // 2
    rows = []
    for f in fractions:
        n_pivots = max(1, round(f * m))
        pivots = select_base_prototypes(store, n_pivots, args.seed)
        index = build_index(store, pivots)
        fracs = [fadana_search(index, q, args.k).ad_evaluations / canonical
                 for q in queries]
        rows.append((f, float(np.mean(fracs))))
    out = sys.stdout if args.out == "-" else open(args.out, "w",
                                                  encoding="utf-8", newline="")
    try:
        writer = csv.writer(out)
        writer.writerow(["base_fraction", "mean_online_ad_fraction"])
        for f, mean_frac in rows:
            writer.writerow(["%.6g" % f, "%.6g" % mean_frac])
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


# -- generate ----------------------------------------------------------

def _cmd_generate(args) -> int:
    alpha = load_alphabet(args.alphabet)
    groups: dict = {}
    with open(args.seeds, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line.strip():
                continue
            label, _, text = line.partition("\t")
            if not _:
                raise AnalogyError(
                    f"seed line has no tab separator: {line!r}")
            groups.setdefault(label, []).append(alpha.parse(text))
    rng = np.random.default_rng(args.seed)
    out_lines = []
    for label in sorted(groups):
        seeds = groups[label]
        n = len(seeds)
        if n < 3:
            print(f"warning: label {label!r} skipped: fewer than 3 seeds",
                  file=sys.stderr)
            continue
        triples = [(i, j, k)
                   for i in range(n) for j in range(n) for k in range(n)
                   if len({i, j, k}) == 3]
        emitted = set()
        for ti in rng.permutation(len(triples)):
            if len(emitted) >= args.per_class:
                break
            i, j, k = triples[ti]
            cost, dag = solve_sequence_equation(
                seeds[i], seeds[j], seeds[k], alpha)
            if cost > args.max_cost:
                continue
            for seq in sorted(enumerate_solutions(dag).sequences):
                if len(emitted) >= args.per_class:
                    break
                if seq in emitted:
                    continue
                emitted.add(seq)
                out_lines.append("%s\t%s\t%s" % (label, alpha.format(seq),
                                                 _fmt(cost)))
    text = "\n".join(out_lines) + ("\n" if out_lines else "")
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0


# -- parser ------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="analogykit",
                     description="Analogical dissimilarity toolbox")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ad = sub.add_parser("ad", help="dissimilarity of four operands")
    p_ad.add_argument("mode", choices=["bits", "real", "seq"])
    p_ad.add_argument("operands", nargs=4)
    p_ad.add_argument("--p", type=float, default=2.0,
                      help="norm order for real mode (default 2)")
    p_ad.add_argument("--alphabet", help="alphabet JSON for seq mode")
    p_ad.add_argument("--witness", action="store_true",
                      help="print an optimal alignment (seq mode)")
    p_ad.set_defaults(func=_cmd_ad)

    p_solve = sub.add_parser("solve", help="solve an analogical equation")
    p_solve.add_argument("mode", choices=["bits", "real", "set", "seq"])
    p_solve.add_argument("operands", nargs=3)
    p_solve.add_argument("--alphabet", help="alphabet JSON for seq mode")
    p_solve.add_argument("--dot", help="write the solution DAG in DOT format")
    p_solve.add_argument("--max-solutions", type=int, default=10000)
    p_solve.set_defaults(func=_cmd_solve)

    p_search = sub.add_parser("search",
                              help="k least-dissimilar triples for a query")
    p_search.add_argument("--train", required=True)
    p_search.add_argument("--class", dest="class_column", default="class")
    p_search.add_argument("--schema")
    p_search.add_argument("--query", required=True,
                          help="comma-separated feature cells, class omitted")
    p_search.add_argument("--k", type=int, default=1)
    p_search.add_argument("--method", choices=["brute", "fadana"],
                          default="brute")
    p_search.add_argument("--base-frac", type=float, default=0.15)
    p_search.add_argument("--seed", type=int, default=0)
    p_search.set_defaults(func=_cmd_search)

    p_cls = sub.add_parser("classify", help="evaluate the decision rule")
    p_cls.add_argument("--train", required=True)
    p_cls.add_argument("--test", required=True)
    p_cls.add_argument("--class", dest="class_column", default="class")
    p_cls.add_argument("--schema")
    p_cls.add_argument("--k", type=int, default=100)
    p_cls.add_argument("--weighted", action="store_true")
    p_cls.add_argument("--search", choices=["exhaustive", "fadana"],
                       default="exhaustive")
    p_cls.add_argument("--base-frac", type=float, default=0.15)
    p_cls.add_argument("--tie", choices=["reject", "min-ad"],
                       default="reject")
    p_cls.add_argument("--report", help="per-item CSV report path")
    p_cls.add_argument("--seed", type=int, default=0)
    p_cls.set_defaults(func=_cmd_classify)

    p_bench = sub.add_parser("bench", help="pivot-fraction efficiency sweep")
    p_bench.add_argument("--train", required=True)
    p_bench.add_argument("--class", dest="class_column", default="class")
    p_bench.add_argument("--schema")
    p_bench.add_argument("--base-fracs", required=True,
                         help="comma-separated fractions in (0, 1]")
    p_bench.add_argument("--queries", type=int, required=True)
    p_bench.add_argument("--k", type=int, default=1)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--out", default="-")
    p_bench.set_defaults(func=_cmd_bench)

    p_gen = sub.add_parser("generate",
                           help="synthetic labeled sequences by analogy")
    p_gen.add_argument("--alphabet", required=True)
    p_gen.add_argument("--seeds", required=True,
                       help="TSV file of label<TAB>sequence lines")
    p_gen.add_argument("--per-class", type=int, required=True)
    p_gen.add_argument("--max-cost", type=float, default=float("inf"))
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", default="-")
    p_gen.set_defaults(func=_cmd_generate)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (AnalogyError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
