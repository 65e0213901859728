"""Secondary acceptance: every figure script renders the run tables to a
non-empty image with metadata-derived overlays, byte-identically on rerun."""

import pytest

from rotorfigs import build_spec, render

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"

KINDS = (
    "otoc-growth",
    "time-reversal",
    "decomposition",
    "soliton-overlap",
    "soliton-map",
)


@pytest.mark.parametrize("kind", KINDS)
def test_figure_acceptance(kind, tables_dir, tmp_path):
    first = render(build_spec(kind, tables_dir, tmp_path / "first.png"))
    second = render(build_spec(kind, tables_dir, tmp_path / "second.png"))
    payload = first.read_bytes()
    ok = payload.startswith(PNG_MAGIC) and len(payload) > 2000
    identical = payload == second.read_bytes()
    print(f"ACCEPTANCE figure-{kind}: {'PASS' if ok and identical else 'FAIL'} "
          f"({len(payload)} bytes, rerun identical={identical})")
    assert ok
    assert identical
