# Copyright 2026 The disfl Authors
# SPDX-License-Identifier: Apache-2.0

import math

import pytest

import disfl


def test_parse_and_labels():
    s = disfl.parse_annotation("[ it's + { uh } it's ] almost , like")
    assert s.disfluent
    assert str(s) == "[ it's + { uh } it's ] almost , like"
    labels = s.labels()
    assert labels.words == ["it's", "it's", "almost", "like"]
    assert labels.tags == ["RM", "O", "O", "O"]
    assert s.labels(preprocess=False).tags == ["RM", "IM", "O", "O", "O", "O"]


def test_malformed_annotation_raises_with_code():
    with pytest.raises(disfl.Error) as info:
        disfl.parse_annotation("[ a + b")
    assert info.value.code == "UnbalancedMarkers"


def test_token_prf():
    r = disfl.token_prf([["RM", "O", "O", "RM"]], [["RM", "RM", "O", "O"]])
    assert (r["tp"], r["fp"], r["fn"]) == (1, 1, 1)
    assert r["f1"] == 0.5
    with pytest.raises(disfl.Error) as info:
        disfl.token_prf([["O"]], [["O", "O"]])
    assert info.value.code == "AlignmentMismatch"


def test_parameter_and_size_accounting():
    base = disfl.ModelConfig(12, 768, 12, 30522)
    assert base.count_params() == 108_891_648
    small = disfl.ModelConfig(12, 128, 2, 5000)
    ratio = small.size_mib(quantized=True) / small.size_mib()
    assert 0.25 <= ratio <= 0.30


def test_train_tag_quantize_roundtrip(tmp_path):
    train = [s.labels() for s in disfl.synthesize(20, seed=1, p_disfluent=0.6)]
    dev = [s.labels() for s in disfl.synthesize(5, seed=2, p_disfluent=0.6)]
    train = [s for s in train if s.words]
    dev = [s for s in dev if s.words]
    vocab = disfl.train_wordpiece([s.words for s in train], 300)
    vocab.save(tmp_path / "vocab.txt")
    assert disfl.Vocab.load(tmp_path / "vocab.txt").digest == vocab.digest

    init = disfl.Checkpoint.init(disfl.ModelConfig(1, 32, 2, len(vocab), max_positions=64), vocab, seed=1)
    best, f1 = disfl.finetune(init, vocab, train, dev, lr=3e-3, batch_size=16, epochs=2)
    assert 0.0 <= f1 <= 1.0 and not math.isnan(f1)
    best.save(tmp_path / "m.dfl")
    loaded = disfl.Checkpoint.load(tmp_path / "m.dfl")
    assert loaded.digest == best.digest

    words = [s.words for s in dev]
    tags = loaded.tag(vocab, words)
    assert [len(t) for t in tags] == [len(w) for w in words]
    q = loaded.quantize()
    assert q.quantized
    assert q.size_mib < loaded.size_mib
    with pytest.raises(disfl.Error) as info:
        q.quantize()
    assert info.value.code == "AlreadyQuantized"


def test_label_tsv_roundtrip(tmp_path):
    seqs = [disfl.LabeledSequence(["a", "a", "b"], ["RM", "O", "O"])]
    disfl.write_labels_tsv(tmp_path / "x.tsv", seqs)
    back = disfl.read_labels_tsv(tmp_path / "x.tsv")
    assert back[0].words == ["a", "a", "b"]
    assert back[0].tags == ["RM", "O", "O"]
