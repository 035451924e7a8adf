"""Exercise the transformers inference path with a tiny local model.

Builds a throwaway WordPiece tokenizer and a randomly initialized
token-classification model on disk, so no network or pretrained weights are
needed. Predictions are arbitrary; the contracts under test are alignment,
label validity, and the truncation skip path.
"""
import json

import pytest

transformers = pytest.importorskip("transformers")
torch = pytest.importorskip("torch")

from entityswitch_runner.conll_files import read_column_file, words_of
from entityswitch_runner.runner import RunnerConfig, run

VOCAB = [
    "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
    "ritwika", "tomar", "visited", "dhanbad", ".",
    "hari", "bhoomi", "reported", "##ed", "##ar", "the",
]

LABELS = ["O", "B-PER", "I-PER", "B-LOC", "I-LOC", "B-ORG", "I-ORG", "B-MISC", "I-MISC"]


@pytest.fixture(scope="module")
def tiny_model_dir(tmp_path_factory):
    where = tmp_path_factory.mktemp("tiny-model")
    vocab_file = where / "vocab.txt"
    vocab_file.write_text("\n".join(VOCAB) + "\n", encoding="utf-8")
    tokenizer = transformers.BertTokenizerFast(vocab_file=str(vocab_file), do_lower_case=True)
    tokenizer.save_pretrained(where)
    torch.manual_seed(0)
    config = transformers.BertConfig(
        vocab_size=len(VOCAB),
        hidden_size=32,
        num_hidden_layers=1,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=64,
        num_labels=len(LABELS),
        id2label=dict(enumerate(LABELS)),
        label2id={label: i for i, label in enumerate(LABELS)},
    )
    transformers.BertForTokenClassification(config).save_pretrained(where)
    return where


GOLD = (
    "Ritwika NNP I-NP B-PER\n"
    "Tomar NNP I-NP I-PER\n"
    "visited VBD I-VP O\n"
    "Dhanbad NNP I-NP B-LOC\n"
    ". . O O\n"
    "\n"
    "Hari NNP I-NP B-ORG\n"
    "Bhoomi NNP I-NP I-ORG\n"
    "reported VBD I-VP O\n"
    "\n"
)


def write_manifest(tmp_path, scheme="BIO"):
    manifest = {
        "audit_id": "hf",
        "mode": "per_only",
        "scheme": scheme,
        "column_count": 4,
        "entries": [
            {"country_id": "India", "variant_index": 0,
             "gold_variant_path": "g.conll", "expected_pred_path": "p.conll"},
        ],
    }
    (tmp_path / "g.conll").write_text(GOLD, encoding="utf-8")
    (tmp_path / "manifest.json").write_text(json.dumps(manifest), encoding="utf-8")
    return tmp_path / "manifest.json"


def valid_bio(labels):
    prev = None
    for label in labels:
        if label == "O":
            prev = None
            continue
        prefix, etype = label.split("-", 1)
        if prefix == "I" and prev != etype:
            return False
        prev = etype
    return True


class TestTinyModel:
    def test_predictions_align_and_labels_are_valid(self, tiny_model_dir, tmp_path):
        manifest = write_manifest(tmp_path)
        report = run(manifest, RunnerConfig(model=str(tiny_model_dir), batch_size=2))
        assert report.written == ["p.conll"] and not report.skipped
        gold = read_column_file(tmp_path / "g.conll")
        pred = read_column_file(tmp_path / "p.conll")
        assert [words_of(pred, s) for s in pred.sentences] == [
            words_of(gold, s) for s in gold.sentences
        ]
        for sentence in pred.sentences:
            labels = [pred.lines[i].split()[-1] for i in sentence]
            allowed = set(LABELS) | {"O"}
            assert set(labels) <= allowed
            assert valid_bio(labels)

    def test_io_scheme_emission(self, tiny_model_dir, tmp_path):
        manifest = write_manifest(tmp_path, scheme="IO")
        run(manifest, RunnerConfig(model=str(tiny_model_dir)))
        pred = read_column_file(tmp_path / "p.conll")
        for sentence in pred.sentences:
            for i in sentence:
                label = pred.lines[i].split()[-1]
                assert label == "O" or label.startswith("I-")

    def test_truncation_skips_entry_and_reports(self, tiny_model_dir, tmp_path):
        tokenizer = transformers.AutoTokenizer.from_pretrained(tiny_model_dir)
        tokenizer.model_max_length = 6  # [CLS] + 4 pieces + [SEP]
        short_dir = tmp_path / "short-model"
        tokenizer.save_pretrained(short_dir)
        model = transformers.AutoModelForTokenClassification.from_pretrained(tiny_model_dir)
        model.save_pretrained(short_dir)

        long_sentence = "\n".join(f"visited VBD I-VP O" for _ in range(10)) + "\n\n"
        manifest = {
            "audit_id": "hf", "mode": "per_only", "scheme": "BIO", "column_count": 4,
            "entries": [{"country_id": "India", "variant_index": 0,
                         "gold_variant_path": "long.conll", "expected_pred_path": "long.pred.conll"}],
        }
        (tmp_path / "long.conll").write_text(long_sentence, encoding="utf-8")
        (tmp_path / "manifest.json").write_text(json.dumps(manifest), encoding="utf-8")
        report = run(tmp_path / "manifest.json", RunnerConfig(model=str(short_dir)))
        assert report.written == []
        assert len(report.skipped) == 1
        assert "long.conll" in report.skipped[0][0]
        assert not (tmp_path / "long.pred.conll").exists()
