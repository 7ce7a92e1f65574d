# Copyright 2026 The disfl Authors
# SPDX-License-Identifier: Apache-2.0

"""Tiny transformer encoders for token-level disfluency detection."""

from ._core import (
    AnnotatedSentence,
    Checkpoint,
    Error,
    LabeledSequence,
    ModelConfig,
    Tag,
    Vocab,
    finetune,
    parse_annotation,
    preprocess,
    read_labels_tsv,
    serialize_annotation,
    synthesize,
    token_prf,
    train_wordpiece,
    write_labels_tsv,
)

__all__ = [
    "AnnotatedSentence",
    "Checkpoint",
    "Error",
    "LabeledSequence",
    "ModelConfig",
    "Tag",
    "Vocab",
    "finetune",
    "parse_annotation",
    "preprocess",
    "read_labels_tsv",
    "serialize_annotation",
    "synthesize",
    "token_prf",
    "train_wordpiece",
    "write_labels_tsv",
]
__version__ = "0.1.0"
