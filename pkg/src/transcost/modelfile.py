"""Reading and writing scenario files.

A scenario file is line oriented::

    document := line*
    line     := blank | comment | header | entry | row
    comment  := '#' any*                      (also allowed after content)
    header   := '[' section ']'
    entry    := key '=' value                 (key/value sections)
    row      := cell (whitespace cell)*       (matrix sections)
    cell     := number | '-'
    number   := sign? digits ('.' digits)? exponent?  |  sign? digits '/' digits

Sections:

    [scenario]       name = free text; exposure = number
    [player1]        costs = number+; labels = word+ (optional)
    [player2]        same as player1
    [loss]           matrix, rows = player 1 choices; '-' marks an infeasible pair
    [rule]           matrix of Player 1 shares
    [dispute]        spend1 = number+; spend2 = number+; stake = number;
                     institution = each-pays-own | proportional | loser-pays;
                     d1 = number (proportional only)
    [dispute.share]  matrix of Player 1 shares after dispute; '-' = not allowed

Numbers never depend on the locale: '.' is the only decimal mark.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from .dispute import EACH_PAYS_OWN, DisputeModel, Institution, dispute_diagnostics
from .errors import ValidationError
from .model import ChoiceSet, TransactionType, validate_type
from .numeric import Number, format_full, parse_number
from .sharing import SharingRule, rule_diagnostics

KEY_SECTIONS = {
    "scenario": {"name", "exposure"},
    "player1": {"costs", "labels"},
    "player2": {"costs", "labels"},
    "dispute": {"spend1", "spend2", "stake", "institution", "d1"},
}
MATRIX_SECTIONS = {"loss", "rule", "dispute.share"}


class ModelFileError(ValidationError):
    pass


@dataclass(frozen=True)
class ModelDocument:
    transaction_type: Optional[TransactionType] = None
    exposure: Optional[Number] = None
    rule: Optional[SharingRule] = None
    dispute: Optional[DisputeModel] = None
    name: str = ""


class _Section:
    def __init__(self, name: str, line: int):
        self.name = name
        self.line = line
        self.entries: dict[str, tuple[str, int]] = {}
        self.rows: list[tuple[list[str], int]] = []


def _split_sections(text: str, where: str, diags: list[str]) -> dict[str, _Section]:
    sections: dict[str, _Section] = {}
    current: Optional[_Section] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                diags.append(f"{where}:{lineno}: malformed section header {raw.strip()!r}")
                current = None
                continue
            name = line[1:-1].strip()
            if name not in KEY_SECTIONS and name not in MATRIX_SECTIONS:
                diags.append(f"{where}:{lineno}: unknown section [{name}]")
                current = None
            elif name in sections:
                diags.append(f"{where}:{lineno}: duplicate section [{name}]")
                current = None
            else:
                current = sections[name] = _Section(name, lineno)
            continue
        if current is None:
            diags.append(f"{where}:{lineno}: content outside a known section")
            continue
        if current.name in KEY_SECTIONS:
            key, sep, value = line.partition("=")
            key = key.strip()
            if not sep:
                diags.append(f"{where}:{lineno}: expected 'key = value' in [{current.name}]")
            elif key not in KEY_SECTIONS[current.name]:
                diags.append(f"{where}:{lineno}: unknown key {key!r} in [{current.name}]")
            elif key in current.entries:
                diags.append(f"{where}:{lineno}: duplicate key {key!r}")
            else:
                current.entries[key] = (value.strip(), lineno)
        else:
            current.rows.append((line.split(), lineno))
    return sections


def _numbers(tokens, where, lineno, exact, diags, allow_missing=False):
    out = []
    for tok in tokens:
        if allow_missing and tok == "-":
            out.append(None)
            continue
        try:
            out.append(parse_number(tok, exact))
        except ValueError:
            diags.append(f"{where}:{lineno}: not a number: {tok!r}")
            out.append(None)
    return out


def _matrix(sec, where, exact, diags, shape, allow_missing):
    rows = []
    n, m = shape
    if len(sec.rows) != n:
        diags.append(f"{where}:{sec.line}: [{sec.name}] has {len(sec.rows)} rows, expected {n}")
    for tokens, lineno in sec.rows:
        if len(tokens) != m:
            diags.append(f"{where}:{lineno}: [{sec.name}] row has {len(tokens)} cells, expected {m}")
        rows.append((_numbers(tokens, where, lineno, exact, diags, allow_missing), lineno))
    return rows


def _anchor(diags_in, rows, where, fallback_line):
    """Attach a line number to cell-level diagnostics such as 'at (i,j)'."""
    out = []
    for msg in diags_in:
        line = fallback_line
        if "at (" in msg:
            i = int(msg.split("at (", 1)[1].split(",", 1)[0])
            if 0 <= i < len(rows):
                line = rows[i][1]
        out.append(f"{where}:{line}: {msg}")
    return out


def parse_text(text: str, where: str = "<string>", exact: bool = False) -> ModelDocument:
    diags: list[str] = []
    secs = _split_sections(text, where, diags)

    def entry(sec, key, required=True):
        s = secs.get(sec)
        if s is None or key not in s.entries:
            if required and s is not None:
                diags.append(f"{where}:{s.line}: [{sec}] is missing '{key}'")
            return None, (s.line if s else 0)
        return s.entries[key]

    def number_list(sec, key, required=True):
        value, line = entry(sec, key, required)
        if value is None:
            return None
        return _numbers(value.split(), where, line, exact, diags)

    name = secs["scenario"].entries.get("name", ("", 0))[0] if "scenario" in secs else ""
    exposure = None
    if "scenario" in secs and "exposure" in secs["scenario"].entries:
        value, line = secs["scenario"].entries["exposure"]
        exposure = _numbers([value], where, line, exact, diags)[0]
        if exposure is not None and not exposure > 0:
            diags.append(f"{where}:{line}: exposure must be > 0")

    ttype = None
    players = [p for p in ("player1", "player2") if p in secs]
    if players or "loss" in secs:
        for p in ("player1", "player2", "loss"):
            if p not in secs:
                diags.append(f"{where}:1: transaction type needs [{p}]")
    if all(p in secs for p in ("player1", "player2", "loss")):
        costs1 = number_list("player1", "costs") or []
        costs2 = number_list("player2", "costs") or []
        labels = []
        for p, costs in (("player1", costs1), ("player2", costs2)):
            value, line = entry(p, "labels", required=False)
            labs = value.split() if value is not None else [str(k) for k in range(len(costs))]
            if len(labs) != len(costs):
                diags.append(f"{where}:{line}: {len(labs)} labels for {len(costs)} choices in [{p}]")
            labels.append(labs)
        rows = _matrix(secs["loss"], where, exact, diags, (len(costs1), len(costs2)), allow_missing=True)
        if not diags:
            loss = {(i, j): v for i, (r, _) in enumerate(rows) for j, v in enumerate(r) if v is not None}
            cand = TransactionType.unchecked(ChoiceSet(labels[0], costs1), ChoiceSet(labels[1], costs2), loss, name)
            found = validate_type(cand)
            if found:
                diags.extend(_anchor(found, rows, where, secs["loss"].line))
            else:
                ttype = TransactionType(cand.player1, cand.player2, loss, name)

    rule = None
    if "rule" in secs:
        if ttype is None and not diags:
            diags.append(f"{where}:{secs['rule'].line}: [rule] needs a transaction type")
        elif ttype is not None:
            rows = _matrix(secs["rule"], where, exact, diags, ttype.shape, allow_missing=False)
            if not diags:
                c1 = [r for r, _ in rows]
                found = rule_diagnostics(c1)
                if found:
                    diags.extend(_anchor(found, rows, where, secs["rule"].line))
                else:
                    rule = SharingRule(c1, context=name)

    dispute = None
    if "dispute" in secs or "dispute.share" in secs:
        if "dispute" not in secs or "dispute.share" not in secs:
            diags.append(f"{where}:1: a dispute needs both [dispute] and [dispute.share]")
        else:
            spend1 = number_list("dispute", "spend1") or []
            spend2 = number_list("dispute", "spend2") or []
            stake = number_list("dispute", "stake")
            inst, inst_line = entry("dispute", "institution", required=False)
            d1 = number_list("dispute", "d1", required=False)
            rows = _matrix(secs["dispute.share"], where, exact, diags, (len(spend1), len(spend2)), allow_missing=True)
            if stake is not None and len(stake) != 1:
                diags.append(f"{where}:{secs['dispute'].entries['stake'][1]}: stake takes one number")
            if not diags:
                try:
                    institution = Institution(inst or EACH_PAYS_OWN, d1[0] if d1 else None)
                except ValidationError as exc:
                    diags.extend(f"{where}:{inst_line or secs['dispute'].line}: {m}" for m in exc.diagnostics)
                else:
                    share = tuple(tuple(r) for r, _ in rows)
                    raw = DisputeModel.unchecked(spend1, spend2, share, stake[0], institution)
                    found = dispute_diagnostics(raw)
                    if found:
                        diags.extend(_anchor(found, rows, where, secs["dispute.share"].line))
                    else:
                        dispute = DisputeModel(tuple(spend1), tuple(spend2), share, stake[0], institution)

    if not secs and not diags:
        diags.append(f"{where}:1: empty scenario file")
    if diags:
        raise ModelFileError(diags)
    return ModelDocument(ttype, exposure, rule, dispute, name)


def parse_model(path: Union[str, Path], exact: bool = False) -> ModelDocument:
    """Load and validate a scenario file.

    Raises OSError when unreadable and ModelFileError (with every diagnostic,
    each prefixed ``path:line:``) when malformed or invalid.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return parse_text(text, str(path), exact)


def _cells(values) -> str:
    return " ".join("-" if v is None else format_full(v) for v in values)


def serialize(doc: ModelDocument) -> str:
    out = []
    if doc.name or doc.exposure is not None:
        out.append("[scenario]")
        if doc.name:
            out.append(f"name = {doc.name}")
        if doc.exposure is not None:
            out.append(f"exposure = {format_full(doc.exposure)}")
        out.append("")
    t = doc.transaction_type
    if t is not None:
        for key, cs in (("player1", t.player1), ("player2", t.player2)):
            out += [f"[{key}]", f"costs = {_cells(cs.costs)}", f"labels = {' '.join(cs.labels)}", ""]
        out.append("[loss]")
        out += [_cells(row) for row in t.loss_matrix()]
        out.append("")
    if doc.rule is not None:
        out.append("[rule]")
        out += [_cells(row) for row in doc.rule.c1]
        out.append("")
    d = doc.dispute
    if d is not None:
        out += ["[dispute]", f"spend1 = {_cells(d.spend1)}", f"spend2 = {_cells(d.spend2)}",
                f"stake = {format_full(d.stake)}", f"institution = {d.institution.kind}"]
        if d.institution.d1 is not None:
            out.append(f"d1 = {format_full(d.institution.d1)}")
        out += ["", "[dispute.share]"]
        out += [_cells(row) for row in d.share]
        out.append("")
    return "\n".join(out)
