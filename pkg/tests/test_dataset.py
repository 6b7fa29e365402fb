import warnings
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from msrcgr.alphabet import DNA_SYMBOLS, PROTEIN_SYMBOLS, Base
from msrcgr.dataset import (
    CHARGED_POLAR,
    HYDROPHOBIC,
    LABELS,
    SequenceRecord,
    class_counts,
    generate_dataset,
    generate_record,
    motif_pool,
    read_fasta,
    stratified_split,
    symbol_probabilities,
    write_fasta,
)
from msrcgr.errors import DegenerateClassError, ParseError


@pytest.fixture(scope="module")
def small():
    return generate_dataset(42, 100)


def test_counts_and_ids(small):
    assert len(small) == 700
    assert class_counts(small) == {lab: 100 for lab in LABELS}
    assert len({r.id for r in small}) == 700
    assert small[0].id == "DNA_UNIFORM-00000"


def test_length_bounds_and_alphabet(small):
    for r in small:
        if r.kind is Base.DNA:
            assert 50 <= len(r.residues) <= 201
            assert set(r.residues) <= set(DNA_SYMBOLS)
        else:
            assert 30 <= len(r.residues) <= 150
            assert set(r.residues) <= set(PROTEIN_SYMBOLS)


def test_symbol_probabilities_sum_to_one():
    for lab in LABELS:
        p = symbol_probabilities(lab)
        if p is not None:
            assert sum(p.values()) == pytest.approx(1.0, abs=1e-12)
    assert sum(symbol_probabilities("PROT_HYDROPHOBIC")[c] for c in HYDROPHOBIC) == pytest.approx(0.64)
    assert sum(symbol_probabilities("PROT_HYDROPHILIC")[c] for c in CHARGED_POLAR) == pytest.approx(0.72)


def _frequencies(label, n_symbols):
    counts, total, i = Counter(), 0, 0
    while total < n_symbols:
        r = generate_record(7, label, i)
        counts.update(r.residues)
        total += len(r.residues)
        i += 1
    return {c: v / total for c, v in counts.items()}


@pytest.mark.parametrize("label", [lab for lab in LABELS if lab != "DNA_REPETITIVE"])
def test_empirical_composition(label):
    freq = _frequencies(label, 100_000)
    for sym, p in symbol_probabilities(label).items():
        assert abs(freq.get(sym, 0.0) - p) <= 0.02, (sym, freq.get(sym), p)


@pytest.mark.slow
def test_at_rich_fraction_large_sample():
    records = [generate_record(42, "DNA_AT_RICH", i) for i in range(10_000)]
    at = sum(r.residues.count("A") + r.residues.count("T") for r in records)
    total = sum(len(r.residues) for r in records)
    assert 0.78 <= at / total <= 0.82


def test_repetitive_records_tile_a_pool_motif(small):
    pool = set(motif_pool(42))
    for r in small:
        if r.label == "DNA_REPETITIVE":
            motif = r.residues[:4]
            assert motif in pool
            assert r.residues == (motif * (len(r.residues) // 4 + 1))[: len(r.residues)]


def test_fresh_motif_mode():
    from msrcgr.dataset import SynthConfig

    cfg = SynthConfig(motif_pool_size=0)
    motifs = {generate_record(1, "DNA_REPETITIVE", i, cfg).residues[:4] for i in range(50)}
    assert len(motifs) > 8


def test_generation_is_deterministic(small):
    again = generate_dataset(42, 100)
    assert again == small
    assert generate_dataset(43, 100) != small


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(LABELS), st.integers(0, 10_000), st.integers(0, 2**32))
def test_record_independent_of_generation_order(label, index, seed):
    direct = generate_record(seed, label, index)
    # drawing other records first must not disturb this one
    for i in range(3):
        generate_record(seed, label, i)
    assert generate_record(seed, label, index) == direct


def test_split_sizes_and_disjointness():
    records = generate_dataset(42, 1000)
    split = stratified_split(records, 0.8, 42)
    assert class_counts(split.train) == {lab: 800 for lab in LABELS}
    assert class_counts(split.test) == {lab: 200 for lab in LABELS}
    assert not {r.id for r in split.train} & {r.id for r in split.test}
    again = stratified_split(records, 0.8, 42)
    assert [r.id for r in again.test] == [r.id for r in split.test]


@pytest.mark.filterwarnings("ignore:class")
def test_split_rounds_train_up():
    records = generate_dataset(0, 3)
    split = stratified_split(records, 0.8, 0)
    assert class_counts(split.train) == {lab: 3 for lab in LABELS}  # ceil(2.4) = 3
    assert not split.test


def test_split_single_record_class_warns():
    records = [SequenceRecord("x", "DNA_UNIFORM", "ACGTACGT", "DNA")]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        split = stratified_split(records, 0.8, 0)
    assert len(split.train) == 1 and not split.test
    assert any("test is empty" in str(w.message) for w in caught)


@pytest.mark.filterwarnings("ignore:class")
def test_split_degenerate_class():
    records = generate_dataset(0, 2)
    with pytest.raises(DegenerateClassError):
        stratified_split([r for r in records if r.label != "PROT_MIXED"], 0.8, 0, labels=LABELS)
    with pytest.raises(DegenerateClassError):
        stratified_split([], 0.8, 0)


def test_fasta_round_trip(tmp_path, small):
    path = tmp_path / "d.fasta"
    write_fasta(small, path, comment='{"seed": 42}')
    assert path.read_text().startswith(';{"seed": 42}\n')
    assert read_fasta(path) == small


def test_fasta_wraps_at_sixty(tmp_path):
    rec = SequenceRecord("r", "DNA_UNIFORM", "ACGT" * 40, "DNA")
    path = tmp_path / "w.fasta"
    write_fasta([rec], path)
    body = path.read_text().splitlines()[1:]
    assert [len(l) for l in body] == [60, 60, 40]


def test_fasta_illegal_symbol_reports_line(tmp_path):
    path = tmp_path / "bad.fasta"
    path.write_text(">a|DNA_UNIFORM|DNA\nACGT\nACNT\n")
    with pytest.raises(ParseError) as err:
        read_fasta(path)
    assert err.value.line == 3
    assert "line 3" in str(err.value) and "'N'" in str(err.value)


@pytest.mark.parametrize("text", [
    ">a|DNA_UNIFORM\nACGT\n",
    ">a|DNA_UNIFORM|RNA\nACGU\n",
    ">a|PROT_MIXED|DNA\nACGT\n",
    "ACGT\n>a|DNA_UNIFORM|DNA\nACGT\n",
    ">a|DNA_UNIFORM|DNA\n>b|DNA_UNIFORM|DNA\nACGT\n",
])
def test_fasta_malformed(tmp_path, text):
    path = tmp_path / "bad.fasta"
    path.write_text(text)
    with pytest.raises(ParseError):
        read_fasta(path)
