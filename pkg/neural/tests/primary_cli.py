"""Drive the companion pipeline CLI over its documented surfaces."""

import json
import pathlib
import subprocess
import sys

PRIMARY = (sys.executable, "-m", "srp.cli")


def run_primary(*argv: str) -> None:
    subprocess.run([*PRIMARY, *argv], check=True, capture_output=True, text=True)


def primary_bleu(
    hyp_lines: list[list[str]], ref_lines: list[list[str]], tmp: pathlib.Path
) -> float:
    hyp = tmp / "hyp.txt"
    ref = tmp / "ref.txt"
    hyp.write_text("\n".join(" ".join(t) for t in hyp_lines) + "\n", encoding="utf-8")
    ref.write_text("\n".join(" ".join(t) for t in ref_lines) + "\n", encoding="utf-8")
    result = subprocess.run(
        [*PRIMARY, "evaluate", str(hyp), str(ref), "--json"],
        check=True,
        capture_output=True,
        text=True,
    )
    return float(json.loads(result.stdout)["bleu"])
