import pytest
from pydantic import ValidationError

from corpus.models.corpus import Vocabulary
from corpus.service.vocab_service import apply_vocab, build_vocab, load_vocab, oov_rate, save_vocab
from utils.errors import ParseError


def test_most_frequent_token_wins():
    assert build_vocab([["a", "b", "a"]], limit=1).entries == (("a", 2),)


def test_ties_break_by_token_order():
    assert build_vocab([["b", "a"]], limit=2).entries == (("a", 1), ("b", 1))


def test_empty_input_gives_empty_vocabulary():
    vocab = build_vocab([], limit=5)
    assert len(vocab) == 0
    assert apply_vocab(["x"], vocab) == ["<unk>"]


def test_limit_truncates():
    lines = [[f"w{i}"] * (i + 1) for i in range(50)]
    vocab = build_vocab(lines, limit=30)
    assert len(vocab) == 30
    assert vocab.entries[0] == ("w49", 50)
    assert "w19" not in vocab and "w20" in vocab


def test_unknown_symbol_is_never_an_entry():
    vocab = build_vocab([["<unk>", "<unk>", "a"]], limit=5)
    assert vocab.entries == (("a", 1),)


def test_apply_replaces_only_oov():
    vocab = build_vocab([["a"]], limit=1)
    assert apply_vocab(["a", "z"], vocab) == ["a", "<unk>"]
    assert apply_vocab([], vocab) == []
    assert apply_vocab(["a", "a"], vocab) == ["a", "a"]


def test_custom_unk_token():
    vocab = build_vocab([["a"]], limit=1, unk_token="UNK")
    assert apply_vocab(["b"], vocab) == ["UNK"]


def test_vocabulary_rejects_misordered_entries():
    with pytest.raises(ValidationError):
        Vocabulary(entries=(("b", 1), ("a", 1)), limit=2)
    with pytest.raises(ValidationError):
        Vocabulary(entries=(("a", 1), ("b", 3)), limit=2)
    with pytest.raises(ValidationError):
        Vocabulary(entries=(("a", 1),), limit=2, unk_token="a")


def test_oov_rate():
    vocab = build_vocab([["a", "b"]], limit=1)
    assert oov_rate([["a", "b"], ["c", "a"]], vocab) == pytest.approx(0.5)
    assert oov_rate([], vocab) == 0.0


def test_save_and_load(tmp_path):
    vocab = build_vocab([["ca", "qa", "ca", "é"]], limit=10)
    save_vocab(vocab, tmp_path / "vocab.txt")

    assert (tmp_path / "vocab.txt").read_text(encoding="utf-8").splitlines()[0] == "#vocab v1"
    assert load_vocab(tmp_path / "vocab.txt", limit=10).entries == vocab.entries


def test_load_rejects_bad_count(tmp_path):
    (tmp_path / "vocab.txt").write_text("#vocab v1\na\t2\nb\tmany\n", encoding="utf-8")
    with pytest.raises(ParseError) as excinfo:
        load_vocab(tmp_path / "vocab.txt")
    assert excinfo.value.line_no == 3


def test_load_rejects_missing_header(tmp_path):
    (tmp_path / "vocab.txt").write_text("a\t2\n", encoding="utf-8")
    with pytest.raises(ParseError):
        load_vocab(tmp_path / "vocab.txt")
