"""Command-line entry point.

Exit codes: 0 success, 1 parse or validation failure, 2 solver cap exceeded
or ill-posed request.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import __version__
from .dispute import sequential_solve, shape_warnings, simultaneous_equilibria
from .efficiency import exposure_sweep, minimize_cost, relevant_set, surface_export
from .errors import SolverError, ValidationError
from .games import mixed_equilibria, pure_equilibria
from .modelfile import ModelDocument, parse_model
from .numeric import parse_number
from .report import (
    Report,
    dispute_report,
    frontier_report,
    game_report,
    optimizer_lines,
    optimum_report,
    regret_lines,
    render_csv,
    render_text,
    rule_table,
    surface_report,
    sweep_report,
)
from .sharing import (
    build_game,
    design_balanced_rule,
    fixed_share_rule,
    is_optimizer,
    pay_for_mistake_rule,
    regret_profile,
)


def _add_common(p: argparse.ArgumentParser, suppress: bool) -> None:
    kw = {"default": argparse.SUPPRESS} if suppress else {}
    p.add_argument("--format", choices=("table", "csv"), **(kw or {"default": "table"}))
    p.add_argument("--paper-rounding", action="store_true", **kw)
    p.add_argument("--exact", action="store_true", **kw)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="transcost", description="Transaction-cost optimum, sharing games and disputes.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def leaf(container, name, help_text):
        p = container.add_parser(name, help=help_text)
        p.add_argument("model", help="scenario file")
        _add_common(p, suppress=True)
        return p

    leaf(sub, "frontier", "relevant decision pairs with elimination certificates")
    p = leaf(sub, "optimum", "total-cost optimum at one exposure")
    p.add_argument("--exposure")
    p = leaf(sub, "sweep", "optimal cells as exposure varies")
    p.add_argument("--from", dest="e_from", required=True)
    p.add_argument("--to", dest="e_to", required=True)
    p = leaf(sub, "export-surface", "CSV of loss and total cost per feasible pair")
    p.add_argument("--exposure")

    game = sub.add_parser("game", help="transaction cost game under the file's sharing rule").add_subparsers(dest="action", required=True)
    p = leaf(game, "solve", "pure (and optionally mixed) equilibria")
    p.add_argument("--exposure")
    p.add_argument("--mixed", action="store_true")
    p.add_argument("--cap", type=int, default=8, help="largest strategy count for support enumeration")

    rule = sub.add_parser("rule", help="sharing-rule checks and construction").add_subparsers(dest="action", required=True)
    p = leaf(rule, "check-optimizer", "does the file's rule make best replies cost-minimal?")
    p.add_argument("--exposure")
    p = leaf(rule, "design", "construct a sharing rule")
    p.add_argument("--exposure")
    p.add_argument("--criterion", choices=("balanced", "pay-for-mistake", "fixed"), required=True)
    p.add_argument("--base", help="base share (pay-for-mistake) or share at the optimum (balanced)")
    p.add_argument("--share", help="constant share (fixed)")

    dispute = sub.add_parser("dispute", help="disputes over cost shares").add_subparsers(dest="action", required=True)
    p = leaf(dispute, "solve", "simultaneous equilibria or sequential path")
    p.add_argument("--mode", choices=("simultaneous", "sequential"), default="simultaneous")
    p.add_argument("--leader", type=int, choices=(1, 2), default=1)
    return parser


def _num(text: Optional[str], exact: bool, what: str):
    try:
        return parse_number(text, exact)
    except ValueError:
        raise ValidationError(f"{what}: not a number: {text!r}") from None


def _exposure(args, doc: ModelDocument):
    if getattr(args, "exposure", None) is not None:
        return _num(args.exposure, args.exact, "--exposure")
    if doc.exposure is None:
        raise ValidationError("no exposure: pass --exposure or set it under [scenario]")
    return doc.exposure


def _ttype(doc: ModelDocument):
    if doc.transaction_type is None:
        raise ValidationError("scenario file has no transaction type ([player1], [player2], [loss])")
    return doc.transaction_type


def _rule(doc: ModelDocument):
    if doc.rule is None:
        raise ValidationError("scenario file has no [rule] section")
    return doc.rule


def run(args) -> Report:
    doc = parse_model(args.model, exact=args.exact)
    paper = args.paper_rounding
    cmd = args.command
    if cmd == "frontier":
        t = _ttype(doc)
        return frontier_report(t, relevant_set(t))
    if cmd == "optimum":
        t = _ttype(doc)
        return optimum_report(t, minimize_cost(t, _exposure(args, doc)), paper)
    if cmd == "sweep":
        t = _ttype(doc)
        sw = exposure_sweep(t, _num(args.e_from, args.exact, "--from"), _num(args.e_to, args.exact, "--to"))
        return sweep_report(sw, paper)
    if cmd == "export-surface":
        t = _ttype(doc)
        return surface_report(surface_export(t, _exposure(args, doc)), paper)
    if cmd == "game":
        t, e = _ttype(doc), _exposure(args, doc)
        g = build_game(t, e, _rule(doc))
        mixed = mixed_equilibria(g, cap=args.cap) if args.mixed else None
        return game_report(t, g, pure_equilibria(g), mixed, paper)
    if cmd == "rule":
        t, e = _ttype(doc), _exposure(args, doc)
        if args.action == "check-optimizer":
            rule = _rule(doc)
        elif args.criterion == "balanced":
            hint = _num(args.base, args.exact, "--base") if args.base is not None else None
            rule = design_balanced_rule(t, e, hint)
        elif args.criterion == "pay-for-mistake":
            if args.base is None:
                raise ValidationError("--criterion pay-for-mistake needs --base")
            rule = pay_for_mistake_rule(t, e, _num(args.base, args.exact, "--base"))
        else:
            if args.share is None:
                raise ValidationError("--criterion fixed needs --share")
            rule = fixed_share_rule(_num(args.share, args.exact, "--share"), t.shape)
        grid, cells = rule_table(t, rule)
        rep = Report([grid], [cells])
        lines, check_tab = optimizer_lines(is_optimizer(rule, t, e))
        rep.text += lines
        rep.csv.append(check_tab)
        rep.text += [f"Note: {n}" for n in rule.notes]
        opt = minimize_cost(t, e)
        if len(opt.argmin) == 1 and min(t.shape) > 1:
            try:
                rlines, rtab = regret_lines(regret_profile(rule, t, e, opt.argmin[0]), paper)
            except SolverError:
                pass
            else:
                rep.text += rlines
                rep.csv.append(rtab)
        return rep
    if cmd == "dispute":
        if doc.dispute is None:
            raise ValidationError("scenario file has no [dispute] section")
        d = doc.dispute
        out = simultaneous_equilibria(d) if args.mode == "simultaneous" else sequential_solve(d, args.leader)
        return dispute_report(d, out, paper, shape_warnings(d))
    raise ValidationError(f"unknown command {cmd!r}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rep = run(args)
    except ValidationError as exc:
        for msg in exc.diagnostics:
            print(f"error: {msg}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    as_csv = args.format == "csv" or args.command == "export-surface"
    sys.stdout.write(render_csv(rep.csv) if as_csv else render_text(rep.text))
    return 0


if __name__ == "__main__":
    sys.exit(main())
