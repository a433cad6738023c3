# Standard Library
import sys
import json
import argparse
import datetime
from pathlib import Path
from typing import Optional, Sequence, get_args as literal_args

# Third-Party Library
import matplotlib.pyplot as plt

# My Library
from model.theory import Theory, resolve_theory
from model.equality import decide_equal
from model.free import mixed_signature, separate
from model.law import get_law, check_beck, micro_search, render_square, times_over_plus_rules
from model.nogo import CASCADE, Verdict, check, check_all, first_nolaw, parse_witnesses, render_verdict
from model.atlas import run_table, replay, export_report
from utils.helper import Bounds, get_logger, get_parser, get_bounds, plot_atlas
from utils.annotation import TableId, ReplayId, TheoremId
from utils.errors import DistLawError, ParseError, MalformedTermError, PreconditionError, WitnessError
from utils.dsl import parse_term, parse_theory, render_theory
from utils.term import render

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3

logger = get_logger(None)


class Inconclusive(Exception):
    pass


def header(S: Theory, T: Theory) -> str:
    return f"# law S∘T ⇒ T∘S with S = {S.name}, T = {T.name}"


def emit(args: argparse.Namespace, text: str) -> None:
    print(text)
    if args.out is not None:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
        logger.info(f"report written to {args.out}")


def dumps(data) -> str:
    return json.dumps(data, ensure_ascii=False, indent=2, sort_keys=True)


# ---------------------------------------------------------------- subcommands

def cmd_parse(args: argparse.Namespace, bounds: Bounds) -> None:
    presentation = parse_theory(Path(args.file).read_text(encoding="utf-8"))
    emit(args, render_theory(presentation, args.format).rstrip("\n"))


def cmd_eq(args: argparse.Namespace, bounds: Bounds) -> None:
    th = resolve_theory(args.theory)
    t1, t2 = parse_term(args.lhs, th.signature), parse_term(args.rhs, th.signature)
    verdict = decide_equal(th, t1, t2, bounds)
    if args.format == "json":
        emit(args, dumps({"theory": th.name, "lhs": render(t1), "rhs": render(t2), **verdict.to_json()}))
    else:
        lines = [f"{render(t1)} vs {render(t2)} in {th.name}: {verdict.status} ({verdict.evidence})"]
        lines += [f"  {form}" for form in verdict.forms]
        lines += [f"  {step.axiom} {step.direction} at {list(step.path)}: {render(step.result)}"
                  for step in verdict.proof]
        if verdict.model is not None:
            lines.append(f"  countermodel of size {verdict.model.size}: {verdict.model.to_json()}")
        emit(args, "\n".join(lines))
    if not verdict.decisive:
        raise Inconclusive(f"{render(t1)} = {render(t2)} is undecided at these bounds")


def cmd_nogo(args: argparse.Namespace, bounds: Bounds) -> None:
    S, T = resolve_theory(args.s), resolve_theory(args.t)
    if args.witness and args.theorem is None:
        raise WitnessError("witnesses need --theorem")
    verdicts: tuple[Verdict, ...]
    if args.theorem is not None:
        verdicts = (check(args.theorem, S, T, parse_witnesses(S, T, args.witness), bounds),)
    else:
        verdicts = check_all(S, T, bounds, stop_at_first=not args.all)
    final = first_nolaw(verdicts) or next((v for v in verdicts if v.kind == "UniqueCandidate"), verdicts[-1])
    if args.format == "json":
        emit(args, dumps({"direction": final.direction, "result": final.kind,
                          "verdicts": [v.to_json() for v in verdicts]}))
    else:
        emit(args, "\n".join([header(S, T)] + [render_verdict(v) for v in verdicts]))
    if final.kind not in ("NoLaw", "UniqueCandidate") and any(v.kind == "Inconclusive" for v in verdicts):
        raise Inconclusive(f"no decisive verdict for {final.direction}")


def cmd_verify_law(args: argparse.Namespace, bounds: Bounds) -> None:
    S, T = resolve_theory(args.s), resolve_theory(args.t)
    if args.micro:
        search = micro_search(S, T, bounds)
        text = dumps(search.to_json()) if args.format == "json" else \
            f"{header(S, T)}\nmicro search: {search.status}, {len(search.survivors)} surviving tables"
        emit(args, text)
        if search.status == "aborted":
            raise Inconclusive("the micro search ran out of budget")
        return
    report = check_beck(get_law(args.law, S, T), bounds)
    if args.format == "json":
        emit(args, dumps(report.to_json()))
    else:
        lines = [header(S, T)]
        lines += [f"  {o.axiom}: {o.status} ({o.checked} checked, {o.skipped} skipped)"
                  for o in report.outcomes]
        lines.append(render_square(report))
        emit(args, "\n".join(lines))
    if not report.complete:
        raise Inconclusive("Beck instances were skipped or not reached at these bounds")


def cmd_atlas(args: argparse.Namespace, bounds: Bounds) -> None:
    report = run_table(args.table, bounds)
    emit(args, export_report(report, "json" if args.format == "json" else "markdown").rstrip("\n"))
    if args.plot is not None:
        fig = plot_atlas(report)
        fig.savefig(args.plot, bbox_inches="tight")
        plt.close(fig)
        logger.info(f"heatmap saved to {args.plot}")
    if not report.complete:
        raise Inconclusive("partial report")


def cmd_replay(args: argparse.Namespace, bounds: Bounds) -> None:
    report = replay(args.replay)
    emit(args, dumps(report.to_json()) if args.format == "json" else report.render())
    if not report.passed:
        raise RuntimeError(f"replay {args.replay} does not reproduce")


def cmd_separate(args: argparse.Namespace, bounds: Bounds) -> None:
    S, T = resolve_theory(args.s), resolve_theory(args.t)
    mixed_sig = mixed_signature(S, T)
    mixed = parse_term(args.term, mixed_sig.signature)
    result = separate(S, T, times_over_plus_rules(S, T), mixed, bounds)
    if args.format == "json":
        emit(args, dumps({"direction": f"{S.name}∘{T.name} ⇒ {T.name}∘{S.name}", "mixed": render(mixed),
                          **result.to_json()}))
    else:
        emit(args, f"{header(S, T)}\n{render(mixed)} ⇝ {result}")


COMMANDS = {
    "parse": cmd_parse,
    "eq": cmd_eq,
    "nogo": cmd_nogo,
    "verify-law": cmd_verify_law,
    "atlas": cmd_atlas,
    "replay": cmd_replay,
    "separate": cmd_separate,
}


def run(args: argparse.Namespace) -> int:
    log_file = None
    if not args.no_log:
        log_dir = Path("log") / f"{args.command}-{datetime.datetime.now().strftime('%m-%d %H.%M')}"
        log_file = log_dir / "running.log"
    get_logger(log_file, quiet=args.quiet)
    for key, value in vars(args).items():
        logger.info(f"{key}: {value}")

    try:
        bounds = get_bounds(args.bounds)
        COMMANDS[args.command](args, bounds)
    except Inconclusive as e:
        if args.require_decisive:
            logger.warning(f"{e}, exiting with {EXIT_INCONCLUSIVE}")
            return EXIT_INCONCLUSIVE
        logger.warning(str(e))
    except (ParseError, MalformedTermError, PreconditionError, WitnessError, NotImplementedError,
            FileNotFoundError) as e:
        logger.error(f"{e.__class__.__name__}: {e}")
        return EXIT_USAGE
    except (DistLawError, RuntimeError) as e:
        logger.error(f"{e.__class__.__name__}: {e}")
        return EXIT_INTERNAL
    except Exception:
        logger.exception("internal error")
        return EXIT_INTERNAL
    logger.success(f"{args.command} finished")
    return EXIT_OK


def get_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    # universal flags, accepted after every subcommand
    common = get_parser()

    parser = argparse.ArgumentParser(description="Distributive laws between algebraic theories")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("parse", parents=[common], help="parse and pretty-print a .thy file")
    p.add_argument("file", type=str)

    p = commands.add_parser("eq", parents=[common], help="decide t1 = t2 in a theory")
    p.add_argument("theory", type=str, help="catalog id or .thy path")
    p.add_argument("lhs", type=str)
    p.add_argument("rhs", type=str)

    p = commands.add_parser("nogo", parents=[common], help="check the no-go theorems for S∘T ⇒ T∘S")
    p.add_argument("--s", type=str, required=True, help="inner theory S")
    p.add_argument("--t", type=str, required=True, help="outer theory T")
    p.add_argument("--theorem", type=str, default=None, choices=literal_args(TheoremId))
    p.add_argument("--witness", type=str, nargs="*", default=[], help="key=value, e.g. v=+@{1/2}(x,y) sigma=2,1")
    p.add_argument("--all", default=False, action="store_true",
                   help=f"run the whole cascade ({', '.join(CASCADE)}) instead of stopping at the first NoLaw")

    p = commands.add_parser("verify-law", parents=[common], help="check Beck's axioms for a candidate law")
    p.add_argument("--s", type=str, required=True)
    p.add_argument("--t", type=str, required=True)
    p.add_argument("--law", type=str, default="times-over-plus",
                   choices=["times-over-plus", "times-over-plus-rules", "exception-sweep", "manes-mulry-faulty"])
    p.add_argument("--micro", default=False, action="store_true", help="search all law tables at the bounds instead")

    p = commands.add_parser("atlas", parents=[common], help="classify a whole table")
    p.add_argument("--table", type=str, required=True, choices=literal_args(TableId))
    p.add_argument("--plot", type=str, default=None, help="save a heatmap of the computed labels")

    p = commands.add_parser("replay", parents=[common], help="recompute a published counterexample")
    p.add_argument("replay", type=str, choices=literal_args(ReplayId))

    p = commands.add_parser("separate", parents=[common], help="rewrite a mixed term into T over S")
    p.add_argument("--s", type=str, required=True)
    p.add_argument("--t", type=str, required=True)
    p.add_argument("term", type=str)

    return parser.parse_args(argv)


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(get_args(argv))


if __name__ == "__main__":
    sys.exit(main())
