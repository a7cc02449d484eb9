"""Regenerate golden outputs: python fixtures/worked/regen.py"""

import contextlib
import io
import json
from pathlib import Path

from transcost.cli import main

HERE = Path(__file__).parent


def run_case(case):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(case["args"] + [str(HERE / case["fixture"])])
    return code, buf.getvalue()


if __name__ == "__main__":
    for case in json.loads((HERE / "manifest.json").read_text()):
        code, out = run_case(case)
        assert code == 0, case
        (HERE / "golden" / f"{case['case']}.txt").write_text(out, encoding="utf-8")
        print(f"{case['case']}: {len(out.splitlines())} lines")
