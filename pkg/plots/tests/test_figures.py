import json

import pytest

from scarplots import fig_density, fig_dispersion, fig_revival, fig_scatter, fig_zne
from scarplots._artifacts import SchemaError, read_csv

SCRIPTS = {
    "scatter": (fig_scatter, "diagnostics.csv"),
    "density": (fig_density, "density.csv"),
    "revival": (fig_revival, "revival.csv"),
    "dispersion": (fig_dispersion, "dispersion.csv"),
    "zne": (fig_zne, "mitigation.csv"),
}


def invoke(module, indir, out, style="default"):
    return module.main(["--in", str(indir), "--out", str(out), "--style", style])


@pytest.mark.parametrize("name", sorted(SCRIPTS))
def test_renders_nonempty_images(name, golden, tmp_path):
    module, _ = SCRIPTS[name]
    stem = tmp_path / name
    assert invoke(module, golden, stem) == 0
    png = stem.with_suffix(".png")
    svg = stem.with_suffix(".svg")
    assert png.stat().st_size > 1000
    assert svg.stat().st_size > 1000
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    assert b"<svg" in svg.read_bytes()[:4096]


@pytest.mark.parametrize("style", ["default", "print", "talk"])
def test_styles(style, golden, tmp_path):
    stem = tmp_path / f"scatter_{style}"
    assert invoke(fig_scatter, golden, stem, style) == 0
    assert stem.with_suffix(".png").stat().st_size > 1000


@pytest.mark.parametrize("name", sorted(SCRIPTS))
def test_schema_mismatch_exits_2(name, tmp_path, capsys):
    module, filename = SCRIPTS[name]
    (tmp_path / filename).write_text("# seed = 0\nbogus,columns\n1,2\n")
    if name == "zne":
        (tmp_path / "zne_fit.json").write_text(json.dumps({"log_log": {}}))
    assert invoke(module, tmp_path, tmp_path / name) == 2
    assert "error:" in capsys.readouterr().err


@pytest.mark.parametrize("name", sorted(SCRIPTS))
def test_missing_artifact_exits_2(name, tmp_path):
    module, _ = SCRIPTS[name]
    assert invoke(module, tmp_path, tmp_path / name) == 2


def test_zne_bad_fit_json_exits_2(golden, tmp_path, capsys):
    src = (golden / "mitigation.csv").read_text()
    (tmp_path / "mitigation.csv").write_text(src)
    (tmp_path / "zne_fit.json").write_text(json.dumps({"log_log": {"intercept": 0.5}}))
    assert invoke(fig_zne, tmp_path, tmp_path / "zne") == 2


def test_scatter_accepts_overlap_columns(golden, tmp_path):
    # diagnostics.csv from the golden run carries a reference-overlap column
    # between the base columns and `marked`; the script must accept it
    header = (golden / "diagnostics.csv").read_text().splitlines()
    sample = next(line for line in header if line.startswith("index,"))
    assert "overlap_" in sample
    assert invoke(fig_scatter, golden, tmp_path / "s") == 0


def test_read_csv_rejects_ragged(tmp_path):
    p = tmp_path / "x.csv"
    p.write_text("a,b\n1,2\n3\n")
    with pytest.raises(SchemaError):
        read_csv(str(p), ["a", "b"])


def test_read_csv_rejects_empty_body(tmp_path):
    p = tmp_path / "x.csv"
    p.write_text("# seed = 1\na,b\n")
    with pytest.raises(SchemaError):
        read_csv(str(p), ["a", "b"])


def test_read_csv_metadata_and_values(tmp_path):
    p = tmp_path / "x.csv"
    p.write_text("# seed = 9\n# model = demo\na,b\n1.5,x\n2.5,y\n")
    metadata, columns = read_csv(str(p), ["a", "b"])
    assert metadata["seed"] == "9"
    assert metadata["model"] == "demo"
    assert columns["a"].tolist() == [1.5, 2.5]
    assert columns["b"].tolist() == ["x", "y"]
