from collections import Counter

import pytest
from pydantic import ValidationError

from tokenization.models.bpe import END_OF_WORD, MergeTable, WordFreq
from tokenization.service.bpe_service import (
    apply_merges,
    learn_merges,
    load_merges,
    mark_continuations,
    save_merges,
    segment_corpus,
    unsegment,
    unsegment_counted,
    word_freqs_from_lines,
)
from utils.errors import InputError, ParseError, UsageError
from utils.rng import XorShift64Star

FOUR_WORDS = [WordFreq(word="low", count=5), WordFreq(word="lower", count=2),
              WordFreq(word="newest", count=6), WordFreq(word="widest", count=3)]

ALPHABET = "acegiklmnpqrstuvy'@&"


def random_words(n: int, seed: int) -> list[str]:
    rng = XorShift64Star(seed)
    return ["".join(ALPHABET[rng.below(len(ALPHABET))] for _ in range(1 + rng.below(12))) for _ in range(n)]


def training_words() -> list[WordFreq]:
    stems = ["pissur", "qayag", "nuna", "tuntu", "kuig", "angute", "neqa", "mikelngu"]
    suffixes = ["", "yug", "llru", "nrit", "uq", "mi", "nek", "ka", "t", "ciq"]
    counts = Counter()
    for i, stem in enumerate(stems):
        for j, suffix in enumerate(suffixes):
            counts[stem + suffix] += 1 + (i * 7 + j * 3) % 11
    return [WordFreq(word=word, count=count) for word, count in sorted(counts.items())]


def replay_learner(words: list[WordFreq], n_merges: int, min_frequency: int = 2) -> list[tuple[str, str]]:
    """Brute force: recount every pair from scratch before each merge."""
    symbols = {wf.word: list(wf.word[:-1]) + [wf.word[-1] + END_OF_WORD] for wf in words}
    counts = {wf.word: wf.count for wf in words}
    merges: list[tuple[str, str]] = []
    while len(merges) < n_merges:
        pairs = Counter()
        for word, syms in symbols.items():
            for pair in zip(syms, syms[1:]):
                if pair not in merges:
                    pairs[pair] += counts[word]
        if not pairs:
            break
        best = min(pairs, key=lambda p: (-pairs[p], p))
        if pairs[best] < min_frequency:
            break
        merges.append(best)
        for word, syms in symbols.items():
            out, i = [], 0
            while i < len(syms):
                if i + 1 < len(syms) and (syms[i], syms[i + 1]) == best:
                    out.append(syms[i] + syms[i + 1])
                    i += 2
                else:
                    out.append(syms[i])
                    i += 1
            symbols[word] = out
    return merges


def sequential_apply(word: str, merges) -> list[str]:
    symbols = list(word[:-1]) + [word[-1] + END_OF_WORD]
    for left, right in merges:
        out, i = [], 0
        while i < len(symbols):
            if i + 1 < len(symbols) and symbols[i] == left and symbols[i + 1] == right:
                out.append(left + right)
                i += 2
            else:
                out.append(symbols[i])
                i += 1
        symbols = out
    symbols[-1] = symbols[-1][:-len(END_OF_WORD)]
    return [s + "@@" for s in symbols[:-1]] + symbols[-1:]


def test_single_pair_word():
    table = learn_merges([WordFreq(word="aa", count=1)], 1, min_frequency=1)
    assert table.merges == (("a", "a</w>"),)


def test_hapax_pairs_are_not_merged_by_default():
    table = learn_merges([WordFreq(word="aa", count=1)], 1)
    assert table.merges == ()


def test_first_merge_of_four_word_corpus():
    table = learn_merges(FOUR_WORDS, 1)
    assert table.merges == (("e", "s"),)
    # brute-force count over the four words: newest (6) + widest (3)
    assert replay_learner(FOUR_WORDS, 1) == [("e", "s")]


@pytest.mark.parametrize("n_merges", [10, 40, 200])
def test_every_merge_is_a_most_frequent_pair(n_merges):
    assert list(learn_merges(FOUR_WORDS, n_merges).merges) == replay_learner(FOUR_WORDS, n_merges)
    assert list(learn_merges(training_words(), n_merges).merges) == replay_learner(training_words(), n_merges)


def test_learning_is_deterministic(tmp_path):
    save_merges(learn_merges(training_words(), 60), tmp_path / "a.bpe")
    save_merges(learn_merges(list(reversed(training_words())), 60), tmp_path / "b.bpe")
    assert (tmp_path / "a.bpe").read_bytes() == (tmp_path / "b.bpe").read_bytes()


def test_learned_merges_never_exceed_request_and_grow_with_it():
    learned = [len(learn_merges(training_words(), n).merges) for n in (10, 15, 30, 100, 1000)]
    assert learned == sorted(learned)
    assert learned[:3] == [10, 15, 30]


def test_learn_rejects_bad_input():
    with pytest.raises(InputError):
        learn_merges([], 10)
    with pytest.raises(UsageError):
        learn_merges(FOUR_WORDS, 0)
    with pytest.raises(ValidationError):
        WordFreq(word="two words", count=1)


def test_apply_examples():
    assert apply_merges("aa", MergeTable(merges=(("a", "a</w>"),), requested=1, alphabet=frozenset("a"))) == ["aa"]
    assert apply_merges("ab", MergeTable(requested=1)) == ["a@@", "b"]


def test_apply_matches_sequential_replay():
    table = learn_merges(FOUR_WORDS, 10)
    for word in ["lowest", "newer", "wider", "slow", "zzz"]:
        assert apply_merges(word, table) == sequential_apply(word, table.merges)


def test_round_trip_over_random_words():
    words = random_words(1000, seed=11)
    for n_merges in (20, 60, 250):
        table = learn_merges(training_words(), n_merges)
        for word in words:
            assert unsegment(apply_merges(word, table)) == [word]


def test_output_vocabulary_bound():
    table = learn_merges(training_words(), 60)
    lines = [[wf.word for wf in training_words()], random_words(200, seed=3)]
    produced = {token for line in segment_corpus(lines, table) for token in line}
    alphabet = {ch for line in lines for word in line for ch in word}
    assert len(produced) <= 2 * len(alphabet) + len(table.merges)


def test_segment_corpus_keeps_lines():
    table = MergeTable(merges=(("a", "a</w>"),), requested=1, alphabet=frozenset("a"))
    assert segment_corpus([["aa"]], table) == [["aa"]]
    assert segment_corpus([[], ["ab", "aa"]], table) == [[], ["a@@", "b", "aa"]]


def test_unsegment_examples():
    assert unsegment(["lo@@", "west"]) == ["lowest"]
    assert unsegment(["a", "b"]) == ["a", "b"]
    assert unsegment_counted(["a", "lo@@"]) == (["a", "lo"], 1)


def test_final_piece_ending_in_marker_is_escaped():
    assert mark_continuations(["x@@"]) == ["x@@&"]
    assert mark_continuations(["a", "@@"]) == ["a@@", "@@&"]
    assert mark_continuations(["x@@&"]) == ["x@@&&"]
    assert mark_continuations(["a&", "b&"]) == ["a&@@", "b&"]
    assert mark_continuations([]) == []
    assert unsegment(["x@@&"]) == ["x@@"]
    assert unsegment(["a@@", "@@&", "b&"]) == ["a@@", "b&"]
    assert unsegment(["x@@&&"]) == ["x@@&"]


def test_words_ending_in_marker_round_trip():
    one_merge = MergeTable(merges=(("@", "@</w>"),), requested=1, alphabet=frozenset("x@"))
    assert apply_merges("x@@", one_merge) == ["x@@", "@@&"]
    assert unsegment(apply_merges("x@@", one_merge)) == ["x@@"]

    table = learn_merges([WordFreq(word="x@@", count=5)], 5)
    assert apply_merges("x@@", table) == ["x@@&"]
    for word in ["x@@", "@@", "@@@", "a@@&", "@@&&", "@", "&"]:
        assert unsegment(apply_merges(word, table)) == [word]
        assert unsegment(apply_merges(word, MergeTable(requested=1))) == [word]


def test_merge_table_rejects_bad_lineage():
    with pytest.raises(ValidationError):
        MergeTable(merges=(("ab", "c"),), requested=1, alphabet=frozenset("abc"))
    with pytest.raises(ValidationError):
        MergeTable(merges=(("a", "b"), ("a", "b")), requested=2, alphabet=frozenset("ab"))
    with pytest.raises(ValidationError):
        MergeTable(merges=(("a", "b"), ("ab", "c")), requested=1, alphabet=frozenset("abc"))


def test_save_and_load(tmp_path):
    table = learn_merges(training_words(), 40)
    save_merges(table, tmp_path / "t.bpe")

    header = (tmp_path / "t.bpe").read_text(encoding="utf-8").splitlines()[0]
    assert header == f"#bpe-merges v1 requested=40 learned={len(table.merges)}"
    loaded = load_merges(tmp_path / "t.bpe")
    assert loaded.merges == table.merges
    assert loaded.requested == 40
    for word in random_words(100, seed=5):
        assert apply_merges(word, loaded) == apply_merges(word, table)


@pytest.mark.parametrize("content,line_no", [
    ("not a header\n", 1),
    ("#bpe-merges v1 requested=2 learned=1\na b c\n", 2),
    ("#bpe-merges v1 requested=2 learned=1\nab c\n", 2),
    ("#bpe-merges v1 requested=2 learned=2\na b\n", 1),
])
def test_load_rejects_malformed_files(tmp_path, content, line_no):
    (tmp_path / "bad.bpe").write_text(content, encoding="utf-8")
    with pytest.raises(ParseError) as excinfo:
        load_merges(tmp_path / "bad.bpe")
    assert excinfo.value.line_no == line_no


def test_word_freqs_from_lines():
    freqs = word_freqs_from_lines([["b", "a"], ["a"]])
    assert [(wf.word, wf.count) for wf in freqs] == [("a", 2), ("b", 1)]
