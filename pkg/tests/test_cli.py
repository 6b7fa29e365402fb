import json
import os
import subprocess
import sys

import pytest

from msrcgr.cgr import dump_trajectory, encode_scale
from msrcgr.cli import main
from msrcgr.dataset import generate_dataset, write_fasta
from msrcgr.features import read_feature_csv

pytestmark = pytest.mark.filterwarnings("ignore:class")


def _err(capsys):
    return json.loads(capsys.readouterr().err.strip().splitlines()[-1])


@pytest.fixture(scope="module")
def gen_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("gen")
    assert main(["gen", "--per-class", "10", "--seed", "42", "-o", str(out)]) == 0
    return out


def test_gen_split_and_manifest(gen_dir):
    manifest = json.loads((gen_dir / "manifest.json").read_text())
    assert manifest["train"] == 56 and manifest["test"] == 14
    assert manifest["format"] == "msrcgr/1"
    assert manifest["config"]["per_class"] == 10
    train = (gen_dir / "train.fasta").read_text()
    assert train.startswith(';{"format":"msrcgr/1"')
    assert train.count(">") == 56


def test_gen_is_byte_identical(gen_dir):
    names = ("train.fasta", "test.fasta", "manifest.json")
    before = {n: (gen_dir / n).read_bytes() for n in names}
    assert main(["gen", "--per-class", "10", "--seed", "42", "-o", str(gen_dir)]) == 0
    assert {n: (gen_dir / n).read_bytes() for n in names} == before


def test_roundtrip_passes(gen_dir, tmp_path):
    report_path = tmp_path / "rt.json"
    assert main(["roundtrip", str(gen_dir / "test.fasta"), "--scales", "1,2,3", "-o", str(report_path)]) == 0
    report = json.loads(report_path.read_text())
    assert report["ok"] and report["scales"]["1"]["pass"] == 14
    assert all(row["bound_ok"] for row in report["scales"].values())


def test_roundtrip_protein_scale_four_needs_override(tmp_path, capsys):
    fasta = tmp_path / "p.fasta"
    write_fasta([r for r in generate_dataset(1, 1) if r.kind.value == "PROTEIN"], fasta)
    assert main(["roundtrip", str(fasta), "--scales", "4", "-o", str(tmp_path / "r.json")]) == 1
    assert _err(capsys)["error"] == "AlphabetTooLargeError"


def test_roundtrip_reports_corrupted_step(tmp_path, capsys):
    path = tmp_path / "t.json"
    dump_trajectory(encode_scale("ACGTTGCAAC", 2), path)
    data = json.loads(path.read_text())
    data["points"][4] = ["1/3", "0/1"]
    path.write_text(json.dumps(data))
    assert main(["roundtrip", "--trajectory", str(path), "-o", str(tmp_path / "r.json")]) == 1
    report = json.loads((tmp_path / "r.json").read_text())
    assert len(report["failures"]) == 1 and report["failures"][0]["step"] == 4


def test_roundtrip_reports_token_mismatch(tmp_path):
    path = tmp_path / "t.json"
    dump_trajectory(encode_scale("ACGTTGCAAC", 1), path)
    data = json.loads(path.read_text())
    data["tokens"][6] = "A" if data["tokens"][6] != "A" else "C"
    path.write_text(json.dumps(data))
    assert main(["roundtrip", "--trajectory", str(path), "-o", str(tmp_path / "r.json")]) == 1
    assert json.loads((tmp_path / "r.json").read_text())["failures"][0]["step"] == 7


def test_featurize_cgr(gen_dir, tmp_path):
    out = tmp_path / "cgr.csv"
    assert main(["featurize", str(gen_dir / "train.fasta"), "--set", "cgr", "-o", str(out)]) == 0
    ids, labels, cols, X = read_feature_csv(out)
    assert X.shape == (56, 24) and cols[0] == "k1_fx"
    assert '"command":"featurize"' in out.read_text().splitlines()[0]


def test_featurize_kmer_reuses_vocabulary(gen_dir, tmp_path):
    vocab = tmp_path / "v.json"
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["featurize", str(gen_dir / "train.fasta"), "--set", "kmer", "--vocab", str(vocab),
                 "-o", str(a)]) == 0
    saved = vocab.read_bytes()
    assert main(["featurize", str(gen_dir / "test.fasta"), "--set", "kmer", "--vocab", str(vocab),
                 "-o", str(b)]) == 0
    assert vocab.read_bytes() == saved
    assert read_feature_csv(a)[2] == read_feature_csv(b)[2]


def test_featurize_embed_cgr(gen_dir, tmp_path, capsys):
    emb = tmp_path / "e.csv"
    assert main(["random-embeddings", str(gen_dir / "train.fasta"), "-o", str(emb)]) == 0
    out = tmp_path / "f.csv"
    assert main(["featurize", str(gen_dir / "train.fasta"), "--set", "embed+cgr", "--embeddings",
                 str(emb), "-o", str(out)]) == 0
    assert read_feature_csv(out)[3].shape == (56, 344)
    # test ids are absent from an embedding file built on train ids
    assert main(["featurize", str(gen_dir / "test.fasta"), "--set", "embed+cgr", "--embeddings",
                 str(emb), "-o", str(tmp_path / "g.csv")]) == 1
    assert _err(capsys)["error"] == "AlignmentError"


def test_train_and_eval(gen_dir, tmp_path):
    tr, te = tmp_path / "tr.csv", tmp_path / "te.csv"
    main(["featurize", str(gen_dir / "train.fasta"), "--set", "cgr", "-o", str(tr)])
    main(["featurize", str(gen_dir / "test.fasta"), "--set", "cgr", "-o", str(te)])
    model, metrics = tmp_path / "m.json", tmp_path / "x.json"
    assert main(["train", str(tr), "--lambda", "0.5", "--max-iter", "50", "-o", str(model)]) == 0
    m = json.loads(model.read_text())
    assert m["config"]["lambda"] == 0.5 and len(m["classes"]) == 7
    assert main(["eval", str(model), str(te), "-o", str(metrics)]) == 0
    res = json.loads(metrics.read_text())
    assert 0 <= res["accuracy"] <= 1 and sum(map(sum, res["confusion"])) == 14


def test_train_on_empty_csv(tmp_path, capsys):
    empty = tmp_path / "empty.csv"
    empty.write_text("id,label,k1_fx\n")
    assert main(["train", str(empty), "-o", str(tmp_path / "m.json")]) == 1
    assert _err(capsys)["error"] == "DegenerateLabelsError"


def test_plotdata_point_counts(capsys):
    assert main(["plotdata", "ATCGATCGTAGC"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert [len(t["points"]) for t in payload["trajectories"]] == [13, 12, 11, 10]
    assert len(payload["features"]) == 24


def test_plotdata_single_symbol(capsys):
    assert main(["plotdata", "A", "--scales", "1"]) == 0
    (traj,) = json.loads(capsys.readouterr().out)["trajectories"]
    assert traj["tokens"] == ["A"] and len(traj["points"]) == 2 and traj["step"] == [0, 1]


def test_config_file_then_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# small run\nper_class = 3\nseed = 7\nratio = 0.5\n")
    out = tmp_path / "g"
    assert main(["gen", "--config", str(cfg), "--seed", "9", "-o", str(out)]) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config"]["seed"] == 9 and manifest["config"]["per_class"] == 3
    assert manifest["train"] == 14


def test_bad_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("seed = 1\nbogus = 2\n")
    assert main(["gen", "--config", str(cfg), "-o", str(tmp_path)]) == 1
    assert _err(capsys)["line"] == 2


def test_unwritable_output_is_io_error(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["gen", "--per-class", "2", "-o", str(blocker / "sub")]) == 2
    assert "error" in _err(capsys)


def test_invalid_symbol_position(capsys):
    assert main(["plotdata", "ACGXT"]) == 1
    err = _err(capsys)
    assert err["error"] == "InvalidTokenError" and err["position"] == 3


def test_module_entry_point(tmp_path):
    env = dict(os.environ, PYTHONWARNINGS="ignore")
    proc = subprocess.run([sys.executable, "-m", "msrcgr", "plotdata", "A", "--scales", "1"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["format"] == "msrcgr/1"
