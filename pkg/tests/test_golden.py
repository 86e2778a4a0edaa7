"""Regression guard: CLI data files must match the committed golden copies.

The comparison ignores the timestamp header line; everything else,
including the 12-significant-digit numeric rendering, must be identical.
"""

from pathlib import Path

import pytest

from mirrorwave.cli import main

GOLDEN_DIR = Path(__file__).parent / "golden"

CASES = {
    "slow_mirror_profile.csv": "profile --vk 1.0 --v 0.8 --t 10 --xmin -150 --xmax 90 --points 241",
    "component_densities.csv": "components --vk 1.0 --v 0.5 --t 5 --xmin -80 --xmax 60 --points 141",
    "cornu.csv": "cornu --theta-min -3 --theta-max 3 --points 61",
    "visibility.csv": "visibility --vk 1.0 --t 50 --ratio-min 1.2 --ratio-max 5 --ratio-points 6",
}


def strip_timestamp(text: str) -> str:
    return "\n".join(l for l in text.splitlines() if not l.startswith("# generated"))


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_file(name, tmp_path):
    out = tmp_path / name
    rc = main(CASES[name].split() + ["--out", str(out)])
    assert rc == 0
    fresh = strip_timestamp(out.read_text())
    golden = strip_timestamp((GOLDEN_DIR / name).read_text())
    assert fresh == golden, f"{name} no longer matches its golden copy"
