"""Command-line front end.

Subcommands: evaluate (corpus scores + analyses), analyze (error and
answer-type breakdown only), normalize (transcript cleanup), wer
(word/char error rates for transcript pairs).

Exit codes: 0 success, 1 bad input data or usage, 2 unusable resource
file (feature table, lexicon, rules, ontology).
"""

from __future__ import annotations

import argparse
import sys

from . import harness
from .analysis import load_ontology
from .core import IngestionError, ResourceError
from .phonetics import default_resource_path, load_phonetics
from .textnorm import load_misspellings, load_reorder_rules

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_RESOURCE = 2


class _Parser(argparse.ArgumentParser):
    # usage problems are input problems: exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _add_resource_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--features", help="phoneme feature table (TSV)")
    parser.add_argument("--lexicon", help="pronunciation lexicon (CMU dict format)")
    parser.add_argument("--g2p-rules", help="letter-to-sound rules (TSV)")
    parser.add_argument("--ontology", help="slot ontology (JSON)")


def _add_eval_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--gold", required=True, help="gold corpus (JSON)")
    parser.add_argument("--pred", required=True, help="predictions (JSON lines)")
    _add_resource_flags(parser)
    parser.add_argument(
        "--near-miss-threshold",
        type=float,
        default=0.02,
        metavar="D",
        help="normalized distance below which a wrong value is a near miss",
    )
    parser.add_argument(
        "--pre-accumulated",
        action="store_true",
        help="prediction states are already dialogue-level; do not accumulate",
    )
    parser.add_argument(
        "--jobs", type=int, default=1, metavar="N",
        help="dialogues evaluated in parallel (output is identical either way)",
    )
    parser.add_argument("--report", metavar="PATH", help="write the JSON report here")
    parser.add_argument("--quiet", action="store_true", help="no summary table")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dsteval", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest="command", required=True)

    evaluate = commands.add_parser(
        "evaluate", help="score predictions against a gold corpus"
    )
    _add_eval_flags(evaluate)
    evaluate.add_argument(
        "--mode",
        choices=harness.MODES,
        default="both",
        help="which match scores to compute",
    )

    analyze = commands.add_parser(
        "analyze", help="error taxonomy, near misses, and answer-type accuracy"
    )
    _add_eval_flags(analyze)

    normalize = commands.add_parser(
        "normalize", help="normalize a transcript file (text lines or corpus JSON)"
    )
    normalize.add_argument("--in", dest="in_path", required=True, help="input file")
    normalize.add_argument(
        "--out", dest="out_path", help="output file (default: stdout)"
    )
    normalize.add_argument("--misspellings", help="correction table (TSV)")
    normalize.add_argument("--reorder-rules", help="word reorder rules (TSV)")

    wer = commands.add_parser(
        "wer", help="word or character error rate between two transcript files"
    )
    wer.add_argument("--ref", required=True, help="reference transcripts")
    wer.add_argument("--hyp", required=True, help="hypothesis transcripts")
    wer.add_argument(
        "--level", choices=("word", "char"), default="word", help="token granularity"
    )
    wer.add_argument("--report", metavar="PATH", help="write the JSON report here")
    wer.add_argument("--quiet", action="store_true", help="no per-line table")
    return parser


def _resolve_eval_resources(args):
    paths = {
        "features": args.features or default_resource_path("phoneme_features.tsv"),
        "lexicon": args.lexicon or default_resource_path("lexicon.dict"),
        "g2p_rules": args.g2p_rules or default_resource_path("g2p_rules.tsv"),
        "ipa": default_resource_path("arpabet_ipa.tsv"),
        "ontology": args.ontology or default_resource_path("ontology.json"),
    }
    resources = load_phonetics(
        features_path=paths["features"],
        lexicon_path=paths["lexicon"],
        rules_path=paths["g2p_rules"],
        ipa_path=paths["ipa"],
    )
    ontology = load_ontology(paths["ontology"])
    return resources, ontology, paths


def _dispatch(args) -> int:
    if args.command == "evaluate":
        resources, ontology, paths = _resolve_eval_resources(args)
        harness.run_evaluate(
            args.gold,
            args.pred,
            resources,
            ontology,
            paths,
            mode=args.mode,
            near_miss_threshold=args.near_miss_threshold,
            pre_accumulated=args.pre_accumulated,
            jobs=args.jobs,
            report_path=args.report,
            quiet=args.quiet,
        )
        return EXIT_OK
    if args.command == "analyze":
        resources, ontology, paths = _resolve_eval_resources(args)
        harness.run_analyze(
            args.gold,
            args.pred,
            resources,
            ontology,
            paths,
            near_miss_threshold=args.near_miss_threshold,
            pre_accumulated=args.pre_accumulated,
            jobs=args.jobs,
            report_path=args.report,
            quiet=args.quiet,
        )
        return EXIT_OK
    if args.command == "normalize":
        misspellings = load_misspellings(
            args.misspellings or default_resource_path("misspellings.tsv")
        )
        reorder = load_reorder_rules(
            args.reorder_rules or default_resource_path("reorder_rules.tsv")
        )
        harness.run_normalize(args.in_path, args.out_path, misspellings, reorder)
        return EXIT_OK
    if args.command == "wer":
        harness.run_wer(
            args.ref,
            args.hyp,
            level=args.level,
            report_path=args.report,
            quiet=args.quiet,
        )
        return EXIT_OK
    raise AssertionError(f"unhandled command {args.command!r}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_INPUT
    try:
        return _dispatch(args)
    except IngestionError as err:
        for problem in err.errors:
            print(f"error: {problem}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceError as err:
        print(f"resource error: {err}", file=sys.stderr)
        return EXIT_RESOURCE
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
