"""Rendering of command results as aligned text or CSV.

Every command yields a list of text items (titles, tables, lines) and a
list of CSV tables. ``paper`` rounding touches currency amounts only;
probabilities, shares and exposures always print at full precision.

CSV output is one or more tables, each introduced by a ``# name`` line and
separated by a blank line; every table has a header row. Column orders:

    frontier          i,j,z1,z2,pl,status,reason,certificate
    optimum           i,j,z1,z2,pl,tc,optimal
    sweep/segments    e_lo,e_hi,argmin,intercept,slope
    sweep/breakpoints exposure,argmin
    game/cells        i,j,cost1,cost2,equilibrium
    game/mixed        profile,player,strategy,probability,expected_cost
    rule/cells        i,j,c1,c2
    rule/check        optimizer,player,axis,index,payment_argmin,cost_argmin
    rule/regret       optimum,r1,r2,deviation1,deviation2,balanced
    dispute/cells     i,j,v1,v2,share,cost1,cost2
    dispute/outcome   mode,i,j,cost1,cost2,total,prisoners_dilemma
    dispute/replies   leader_move,follower_move,cost1,cost2
    surface           i,j,z1,z2,pl,tc,relevant
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .dispute import DisputeModel, DisputeOutcome, build_dispute_game
from .efficiency import SURFACE_COLUMNS, ExposureSweep, OptimumReport, RelevantSet
from .games import BimatrixGame, EquilibriumReport
from .model import TransactionType, tc_matrix
from .numeric import Number, format_full, format_number
from .sharing import OptimizerCheck, RegretProfile, SharingRule


@dataclass
class Table:
    title: str
    header: list[str]
    rows: list[list[str]] = field(default_factory=list)


Item = Union[Table, str]


@dataclass
class Report:
    text: list[Item] = field(default_factory=list)
    csv: list[Table] = field(default_factory=list)


def cell_str(cell) -> str:
    return f"({cell[0]},{cell[1]})"


def cells_str(cells) -> str:
    return ", ".join(cell_str(c) for c in cells) if cells else "none"


def render_text(items: Sequence[Item]) -> str:
    out: list[str] = []
    for item in items:
        if isinstance(item, str):
            out.append(item)
            continue
        if out and out[-1] != "":
            out.append("")
        out.append(item.title)
        grid = [item.header] + item.rows
        widths = [max(len(r[k]) for r in grid) for k in range(len(item.header))]
        for r in grid:
            out.append("  ".join(v.rjust(w) for v, w in zip(r, widths)).rstrip())
        out.append("")
    while out and out[-1] == "":
        out.pop()
    return "\n".join(out) + "\n"


def render_csv(tables: Sequence[Table]) -> str:
    buf = io.StringIO()
    for k, tab in enumerate(tables):
        if k:
            buf.write("\n")
        if len(tables) > 1:
            buf.write(f"# {tab.title}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(tab.header)
        w.writerows(tab.rows)
    return buf.getvalue()


def _grid(title, corner, row_labels, col_labels, cells) -> Table:
    return Table(title, [corner] + list(col_labels), [[lab] + list(r) for lab, r in zip(row_labels, cells)])


def _opt(x: Optional[Number], paper: bool) -> str:
    return "-" if x is None else format_number(x, paper)


# -- efficiency ---------------------------------------------------------------


def frontier_report(t: TransactionType, rs: RelevantSet) -> Report:
    rep = Report()
    rep.text.append(_grid(
        "Loss probability (rows: player 1, columns: player 2)",
        "P1\\P2",
        list(t.player1.labels),
        list(t.player2.labels),
        [[_opt(v, False) for v in row] for row in t.loss_matrix()],
    ))
    rows = []
    for p in rs.kept:
        rows.append([str(p.i), str(p.j), format_full(p.z1), format_full(p.z2), format_full(p.pl), "kept", "", ""])
    for el in rs.eliminated:
        p = el.point
        cert = el.certificate
        if isinstance(cert, dict):
            cert_s = ";".join(f"{cell_str(c)}:{format_full(w)}" for c, w in sorted(cert.items()))
        else:
            cert_s = cell_str(cert.cell)
        rows.append([str(p.i), str(p.j), format_full(p.z1), format_full(p.z2), format_full(p.pl), "eliminated", el.reason, cert_s])
    rows.sort(key=lambda r: (int(r[0]), int(r[1])))
    header = ["i", "j", "z1", "z2", "pl", "status", "reason", "certificate"]
    rep.text.append(Table(f"Decision pairs: {len(rs.kept)} relevant of {len(rs.kept) + len(rs.eliminated)}", header, rows))
    rep.csv.append(Table("frontier", header, rows))
    return rep


def optimum_report(t: TransactionType, opt: OptimumReport, paper: bool) -> Report:
    rep = Report()
    e = opt.exposure
    tcs = tc_matrix(t, e)
    rep.text.append(_grid(
        f"Total transaction cost at exposure {format_full(e)}",
        "P1\\P2",
        list(t.player1.labels),
        list(t.player2.labels),
        [[_opt(v, paper) for v in row] for row in tcs],
    ))
    rep.text.append(f"Optimum: {format_number(opt.value, paper)} at {cells_str(opt.argmin)}")
    rows = []
    for i, j in t.cells():
        rows.append([str(i), str(j), format_full(t.player1.costs[i]), format_full(t.player2.costs[j]),
                     format_full(t.loss[(i, j)]), format_number(tcs[i][j], paper), str(int((i, j) in opt.argmin))])
    rep.csv.append(Table("optimum", ["i", "j", "z1", "z2", "pl", "tc", "optimal"], rows))
    return rep


def sweep_report(sw: ExposureSweep, paper: bool) -> Report:
    rep = Report()
    seg_rows = [
        [format_full(s.e_lo), format_full(s.e_hi), " ".join(cell_str(c) for c in s.argmin),
         format_number(s.intercept, paper), format_full(s.slope)]
        for s in sw.segments
    ]
    bp_rows = [[format_full(b.exposure), " ".join(cell_str(c) for c in b.argmin)] for b in sw.breakpoints]
    seg = Table("Optimal cells by exposure", ["e_lo", "e_hi", "argmin", "intercept", "slope"], seg_rows)
    bps = Table("Breakpoints", ["exposure", "argmin"], bp_rows)
    rep.text += [seg, bps if bp_rows else "Breakpoints: none"]
    rep.csv += [Table("segments", seg.header, seg_rows), Table("breakpoints", bps.header, bp_rows)]
    return rep


def surface_report(rows: list[dict], paper: bool) -> Report:
    out = []
    for r in rows:
        out.append([str(r["i"]), str(r["j"]), format_full(r["z1"]), format_full(r["z2"]), format_full(r["pl"]),
                    format_number(r["tc"], paper), str(r["relevant"])])
    tab = Table("surface", list(SURFACE_COLUMNS), out)
    return Report([tab], [tab])


# -- games and rules ------------------------------------------------------------


def _bimatrix(title, g: BimatrixGame, row_labels, col_labels, paper) -> Table:
    n, m = g.shape
    cells = [
        [f"{format_number(g.cost1[i][j], paper)}, {format_number(g.cost2[i][j], paper)}" if g.is_allowed(i, j) else "-"
         for j in range(m)]
        for i in range(n)
    ]
    return _grid(title, "P1\\P2", row_labels, col_labels, cells)


def game_report(t: TransactionType, g: BimatrixGame, eq: Sequence, mixed: Optional[EquilibriumReport], paper: bool) -> Report:
    rep = Report()
    labels1 = list(t.player1.labels)
    labels2 = list(t.player2.labels)
    rep.text.append(_bimatrix("Payments (player 1, player 2)", g, labels1, labels2, paper))
    rep.text.append(f"Pure equilibria: {cells_str(eq)}")
    rows = [[str(i), str(j), format_number(g.cost1[i][j], paper), format_number(g.cost2[i][j], paper), str(int((i, j) in eq))]
            for i, j in g.cells()]
    rep.csv.append(Table("cells", ["i", "j", "cost1", "cost2", "equilibrium"], rows))
    if mixed is not None:
        mrows = []
        for k, prof in enumerate(mixed.mixed, start=1):
            p = " ".join(format_full(x) for x in prof.p)
            q = " ".join(format_full(x) for x in prof.q)
            rep.text.append(
                f"Mixed equilibrium {k}: p = ({p}), q = ({q}), expected payments "
                f"{format_number(prof.cost1, paper)} / {format_number(prof.cost2, paper)}, "
                f"expected total {format_number(prof.total, paper)}"
            )
            for i, x in enumerate(prof.p):
                mrows.append([str(k), "1", str(i), format_full(x), format_number(prof.cost1, paper)])
            for j, y in enumerate(prof.q):
                mrows.append([str(k), "2", str(j), format_full(y), format_number(prof.cost2, paper)])
        for note in mixed.notes:
            rep.text.append(f"Note: {note}")
        rep.csv.append(Table("mixed", ["profile", "player", "strategy", "probability", "expected_cost"], mrows))
    return rep


def rule_table(t: TransactionType, rule: SharingRule) -> tuple[Table, Table]:
    labels1 = list(t.player1.labels)
    labels2 = list(t.player2.labels)
    grid = _grid("Player 1 share of total cost", "P1\\P2", labels1, labels2, [[format_full(v) for v in r] for r in rule.c1])
    n, m = rule.shape
    rows = [[str(i), str(j), format_full(rule.c1[i][j]), format_full(rule.c2(i, j))] for i in range(n) for j in range(m)]
    return grid, Table("cells", ["i", "j", "c1", "c2"], rows)


def optimizer_lines(check: OptimizerCheck) -> tuple[list[str], Table]:
    header = ["optimizer", "player", "axis", "index", "payment_argmin", "cost_argmin"]
    if check.ok:
        return ["Optimizer: yes"], Table("check", header, [["yes", "", "", "", "", ""]])
    lines = ["Optimizer: no"]
    rows = []
    for w in check.violations:
        pay = " ".join(str(k) for k in w.payment_argmin)
        cost = " ".join(str(k) for k in w.cost_argmin)
        lines.append(f"  player {w.player} replies in {w.axis} {w.index}: payment argmin {{{pay}}} vs cost argmin {{{cost}}}")
        rows.append(["no", str(w.player), w.axis, str(w.index), pay, cost])
    return lines, Table("check", header, rows)


def regret_lines(rp: RegretProfile, paper: bool) -> tuple[list[str], Table]:
    lines = [
        f"Regret at optimum {cell_str(rp.optimum)}: player 1 {format_number(rp.r1, paper)} "
        f"(deviation {cell_str(rp.deviation1)}), player 2 {format_number(rp.r2, paper)} "
        f"(deviation {cell_str(rp.deviation2)}), {'balanced' if rp.balanced else 'unbalanced'}"
    ]
    if not rp.deviation_targets_agree:
        lines.append(
            f"  lowest total-cost deviations differ: {cells_str([rp.cost_deviation1])} / {cells_str([rp.cost_deviation2])}"
        )
    tab = Table("regret", ["optimum", "r1", "r2", "deviation1", "deviation2", "balanced"], [[
        cell_str(rp.optimum), format_number(rp.r1, paper), format_number(rp.r2, paper),
        cell_str(rp.deviation1), cell_str(rp.deviation2), str(int(rp.balanced)),
    ]])
    return lines, tab


# -- disputes -------------------------------------------------------------------


def dispute_report(d: DisputeModel, out: DisputeOutcome, paper: bool, warnings: Sequence[str] = ()) -> Report:
    rep = Report()
    g = build_dispute_game(d)
    labels1 = [format_full(v) for v in d.spend1]
    labels2 = [format_full(v) for v in d.spend2]
    rep.text.append(_grid(
        f"Player 1 share after dispute (stake {format_number(d.stake, paper)}, {d.institution})",
        "v1\\v2", labels1, labels2, [[_opt(v, False) for v in r] for r in d.share],
    ))
    rep.text.append(_bimatrix("Dispute payments (player 1, player 2)", g, labels1, labels2, paper))
    rows = [[str(i), str(j), format_full(d.spend1[i]), format_full(d.spend2[j]), format_full(d.share[i][j]),
             format_number(g.cost1[i][j], paper), format_number(g.cost2[i][j], paper)] for i, j in d.defined()]
    rep.csv.append(Table("cells", ["i", "j", "v1", "v2", "share", "cost1", "cost2"], rows))
    orows = []
    if out.mode == "sequential":
        (cell,) = out.cells
        p1, p2 = out.payments[cell]
        follower = 2 if out.leader == 1 else 1
        rtab = Table(f"Follower (player {follower}) best replies", ["leader_move", "follower_move", "cost1", "cost2"], [
            [str(r.leader_move), str(r.follower_move), format_number(r.payments[0], paper), format_number(r.payments[1], paper)]
            for r in out.replies
        ])
        rep.text.append(rtab)
        rep.text.append(f"Sequential path (leader player {out.leader}): {cell_str(cell)}")
        rep.text.append(f"Payments: {format_number(p1, paper)} / {format_number(p2, paper)}; "
                        f"grand total {format_number(out.totals[cell], paper)}")
        orows.append(["sequential", str(cell[0]), str(cell[1]), format_number(p1, paper), format_number(p2, paper),
                      format_number(out.totals[cell], paper), ""])
        rep.csv.append(Table("replies", rtab.header, rtab.rows))
    else:
        rep.text.append(f"Pure equilibria: {cells_str(out.cells)}")
        for cell in out.cells:
            p1, p2 = out.payments[cell]
            rep.text.append(f"  {cell_str(cell)}: payments {format_number(p1, paper)} / {format_number(p2, paper)}; "
                            f"grand total {format_number(out.totals[cell], paper)}")
            orows.append(["simultaneous", str(cell[0]), str(cell[1]), format_number(p1, paper), format_number(p2, paper),
                          format_number(out.totals[cell], paper), str(int(out.prisoners_dilemma))])
        rep.text.append(f"Prisoners' dilemma: {'yes' if out.prisoners_dilemma else 'no'}")
    for w in warnings:
        rep.text.append(f"Warning: {w}")
    rep.csv.append(Table("outcome", ["mode", "i", "j", "cost1", "cost2", "total", "prisoners_dilemma"], orows))
    return rep

