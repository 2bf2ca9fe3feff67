"""Command-line interface.

Subcommands: induce, baseline (cp | ic), eval, grid-search, cv, ttest,
polysemy, stats, export-wcnf. Exit codes: 0 success, 1 usage error,
2 data error. Reruns on identical inputs write identical bytes.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import baselines, evaluation, polysemy
from .encoding import PipelineSets, encode_cognate_cnf, export_wcnf
from .lexicon import (
    ParseError,
    parse_dictionary,
    parse_gold_standard,
    parse_pair_file,
    invert_dictionary,
    write_pair_set,
    write_result_pairs,
)
from .pipeline import (
    DEFAULT_MAX_EDGES,
    HyperParams,
    parse_method,
    render_report,
    run_cycles,
    run_pipeline,
)
from .transgraph import build_transgraphs, component_stats, filter_big


def _method_arg(text: str):
    try:
        return parse_method(text)
    except ValueError as exc:  # surface the grammar message through argparse
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _threshold_arg(lo: float, hi: float | None):
    def convert(text: str) -> float:
        value = float(text)
        if value < lo or (hi is not None and value > hi):
            bound = f"{lo}..{hi}" if hi is not None else f">= {lo}"
            raise argparse.ArgumentTypeError(f"threshold must be {bound}")
        return value

    return convert


def _add_dict_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dict-ab", required=True, help="A->B dictionary (TSV)")
    p.add_argument("--dict-cb", required=True, help="C->B dictionary (TSV)")
    p.add_argument(
        "--invert-cb",
        action="store_true",
        help="treat --dict-cb as B->C and invert it",
    )
    p.add_argument("--lang-a", default="a", help="language tag of side A")
    p.add_argument("--lang-b", default="b", help="language tag of the pivot")
    p.add_argument("--lang-c", default="c", help="language tag of side C")
    p.add_argument(
        "--no-normalize",
        action="store_true",
        help="keep surfaces verbatim (no case folding or recomposition)",
    )


def _load_dicts(args):
    normalize = not args.no_normalize
    with open(args.dict_ab, encoding="utf-8") as f:
        dict_ab = parse_dictionary(f, args.lang_a, args.lang_b, normalize)
    if args.invert_cb:
        with open(args.dict_cb, encoding="utf-8") as f:
            dict_cb = invert_dictionary(
                parse_dictionary(f, args.lang_b, args.lang_c, normalize)
            )
    else:
        with open(args.dict_cb, encoding="utf-8") as f:
            dict_cb = parse_dictionary(f, args.lang_c, args.lang_b, normalize)
    return dict_ab, dict_cb


def _load_gold(args):
    with open(args.gold, encoding="utf-8") as f:
        return parse_gold_standard(f, args.lang_a, args.lang_c, not args.no_normalize)


def _build_transgraphs(args):
    dict_ab, dict_cb = _load_dicts(args)
    return filter_big(build_transgraphs(dict_ab, dict_cb), args.max_edges)


def _out(path: str):
    return open(path, "w", encoding="utf-8", newline="")


def _cmd_induce(args) -> int:
    dict_ab, dict_cb = _load_dicts(args)
    descriptor = args.method
    hp = HyperParams(args.cognate_threshold, args.synonym_threshold)
    result = run_pipeline(
        dict_ab, dict_cb, descriptor, hp, max_edges=args.max_edges, jobs=args.jobs
    )
    with _out(args.output) as f:
        write_result_pairs(result.pairs, f)
    if args.report:
        with _out(args.report) as f:
            f.write(render_report(result))
    return 0


def _cmd_baseline(args) -> int:
    dict_ab, dict_cb = _load_dicts(args)
    if args.baseline == "cp":
        tset = filter_big(build_transgraphs(dict_ab, dict_cb), args.max_edges)
        pairs = baselines.cartesian_product(tset, args.scope)
    else:
        pairs = baselines.inverse_consultation(dict_ab, dict_cb, args.delta)
    with _out(args.output) as f:
        write_pair_set(pairs, f)
    return 0


def _cmd_eval(args) -> int:
    with open(args.result, encoding="utf-8") as f:
        result = parse_pair_file(f, args.lang_a, args.lang_c, not args.no_normalize)
    with open(args.gold, encoding="utf-8") as f:
        gold = parse_gold_standard(f, args.lang_a, args.lang_c, not args.no_normalize)
    metrics = evaluation.score(result, gold, args.beta)
    sys.stdout.write(evaluation.metrics_tsv(metrics))
    return 0


def _cmd_grid_search(args) -> int:
    tset = _build_transgraphs(args)
    gold = _load_gold(args)
    descriptor = args.method
    best = evaluation.grid_search(tset, descriptor, gold, args.beta, args.exact)
    st = "-" if best.synonym_threshold is None else f"{best.synonym_threshold:.2f}"
    sys.stdout.write(
        f"cognate_threshold\t{best.cognate_threshold:.2f}\n"
        f"synonym_threshold\t{st}\n"
    )
    sys.stdout.write(evaluation.metrics_tsv(best.metrics))
    return 0


def _cmd_cv(args) -> int:
    tset = _build_transgraphs(args)
    gold = _load_gold(args)
    descriptor = args.method
    report = evaluation.cross_validate(
        tset, descriptor, gold, args.folds, args.beta, args.exact
    )
    rows = [["fold", "test_ids", "cognate_t", "synonym_t", "precision", "recall", "f_score"]]
    for fold in report.folds:
        st = "-" if fold.grid.synonym_threshold is None else f"{fold.grid.synonym_threshold:.2f}"
        ids = f"{fold.test_ids[0]}-{fold.test_ids[-1]}" if fold.test_ids else "-"
        rows.append(
            [
                str(fold.fold_index),
                ids,
                f"{fold.grid.cognate_threshold:.2f}",
                st,
                f"{fold.test_metrics.precision:.3f}",
                f"{fold.test_metrics.recall:.3f}",
                f"{fold.test_metrics.f_score:.3f}",
            ]
        )
    sys.stdout.write(evaluation.format_aligned(rows))
    sys.stdout.write(f"mean f_score: {report.mean_f:.3f}\n")
    return 0


def _cmd_ttest(args) -> int:
    xs = _read_numbers(args.xs)
    ys = _read_numbers(args.ys)
    report = evaluation.paired_t_test(xs, ys)
    sys.stdout.write(
        f"t\t{report.t_stat:.4f}\ndf\t{report.df}\n"
        f"p\t{report.p_value:.5f}\nmean_diff\t{report.mean_diff:.6f}\n"
    )
    return 0


def _read_numbers(path: str) -> list[float]:
    values = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                values.append(float(line))
            except ValueError as exc:
                raise ParseError(f"{path}: line {lineno}: not a number") from exc
    return values


def _cmd_polysemy(args) -> int:
    rows = polysemy.sweep(args.n_max)
    if args.output:
        with _out(args.output) as f:
            polysemy.write_sweep_csv(rows, f)
    else:
        polysemy.write_sweep_csv(rows, sys.stdout)
    return 0


def _cmd_stats(args) -> int:
    tset = _build_transgraphs(args)
    sys.stdout.write("id\ta_words\tpivots\tc_words\tedges\n")
    for g in tset.graphs:
        s = component_stats(g)
        sys.stdout.write(f"{g.id}\t{s.a_count}\t{s.b_count}\t{s.c_count}\t{s.edge_count}\n")
    for tg_id, edges in tset.skipped:
        sys.stdout.write(f"# skipped {tg_id}: {edges} edges\n")
    return 0


def _cmd_export_wcnf(args) -> int:
    tset = _build_transgraphs(args)
    descriptor = args.method
    os.makedirs(args.out_dir, exist_ok=True)
    wanted = None if args.transgraph_id is None else {args.transgraph_id}
    written = 0
    for g in tset.graphs:
        if wanted is not None and g.id not in wanted:
            continue
        cyc = run_cycles(g, descriptor)
        if not cyc.candidates:
            continue
        sets = PipelineSets(
            existing_edges={e.key for e in cyc.graph.edges},
            new_edges={k for c in cyc.candidates for k in c.missing_edges},
            candidates=list(cyc.candidates),
        )
        cnf = encode_cognate_cnf(
            cyc.graph, cyc.candidates, sets, uniqueness=descriptor.method != "M"
        )
        path = os.path.join(args.out_dir, f"tg{g.id}.wcnf")
        with _out(path) as f:
            export_wcnf(cnf, f)
        written += 1
    sys.stdout.write(f"wrote {written} formula file(s) to {args.out_dir}\n")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pivotlex",
        description="Induce bilingual dictionaries through a pivot language.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("induce", help="run the constraint pipeline")
    _add_dict_args(p)
    p.add_argument(
        "--method", required=True, type=_method_arg, help="descriptor like 2:S:H14"
    )
    p.add_argument("--cognate-threshold", type=_threshold_arg(0.0, None), default=None)
    p.add_argument("--synonym-threshold", type=_threshold_arg(0.0, 1.0), default=None)
    p.add_argument("--max-edges", type=int, default=DEFAULT_MAX_EDGES)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--report", help="write per-transgraph diagnostics here")
    p.set_defaults(func=_cmd_induce)

    p = sub.add_parser("baseline", help="Cartesian-product / inverse-consultation baselines")
    p.add_argument("baseline", choices=["cp", "ic"])
    _add_dict_args(p)
    p.add_argument("--scope", choices=["within", "across"], default="within")
    p.add_argument("--delta", type=int, default=baselines.DEFAULT_IC_DELTA)
    p.add_argument("--max-edges", type=int, default=DEFAULT_MAX_EDGES)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_baseline)

    p = sub.add_parser("eval", help="score a result file against a gold standard")
    p.add_argument("--result", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--lang-a", default="a")
    p.add_argument("--lang-c", default="c")
    p.add_argument("--no-normalize", action="store_true")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("grid-search", help="find the thresholds maximizing F")
    _add_dict_args(p)
    p.add_argument("--gold", required=True)
    p.add_argument("--method", required=True, type=_method_arg)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--max-edges", type=int, default=DEFAULT_MAX_EDGES)
    p.add_argument("--exact", action="store_true", help="re-run per grid point")
    p.set_defaults(func=_cmd_grid_search)

    p = sub.add_parser("cv", help="k-fold cross-validated threshold tuning")
    _add_dict_args(p)
    p.add_argument("--gold", required=True)
    p.add_argument("--method", required=True, type=_method_arg)
    p.add_argument("--folds", type=int, default=3)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--max-edges", type=int, default=DEFAULT_MAX_EDGES)
    p.add_argument("--exact", action="store_true")
    p.set_defaults(func=_cmd_cv)

    p = sub.add_parser("ttest", help="one-tailed paired t-test on two value files")
    p.add_argument("xs")
    p.add_argument("ys")
    p.set_defaults(func=_cmd_ttest)

    p = sub.add_parser("polysemy", help="pivot-polysemy precision model sweep")
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_polysemy)

    p = sub.add_parser("stats", help="per-transgraph size report")
    _add_dict_args(p)
    p.add_argument("--max-edges", type=int, default=DEFAULT_MAX_EDGES)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("export-wcnf", help="dump cognate-stage formulas as WCNF")
    _add_dict_args(p)
    p.add_argument("--method", required=True, type=_method_arg)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--transgraph-id", type=int, default=None)
    p.add_argument("--max-edges", type=int, default=DEFAULT_MAX_EDGES)
    p.set_defaults(func=_cmd_export_wcnf)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except (ParseError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run() -> None:  # console-script entry point
    sys.exit(main())


if __name__ == "__main__":
    run()
