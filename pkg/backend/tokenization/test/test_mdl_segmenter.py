import math
from itertools import combinations

import pytest

from tokenization.models.bpe import WordFreq
from tokenization.models.segmodel import Dampening, SegModel, TrainConfig
from tokenization.service.mdl_service import (
    MdlTrainer,
    char_code_lengths,
    dampen,
    load_model,
    model_cost,
    morph_cost,
    save_model,
    segment_lines,
    segment_viterbi,
    segment_word,
    train,
)
from utils.errors import InputError, ParseError

STEMS = ["pissur", "qayag", "nunak", "tuntu", "kuigp", "angut", "neqam", "yuarc", "caliv", "ayagn",
         "mikel", "qimug", "taqer", "elitn", "nayir", "ukvek", "aturv", "qanru", "iqvar", "yurar"]
SUFFIXES = ["yug", "llru", "nrit", "ciq", "vik", "mi", "nek", "ka", "uq", "tuq"]

TOY_LEXICON = SegModel(lexicon={"walk": 10, "jump": 8, "ed": 9, "ing": 9}, total_tokens=36,
                       char_costs={}, boundary_cost=0.0, analyses={})


def stem_suffix_words() -> list[WordFreq]:
    """200 stem x suffix types with Zipf-like counts."""
    words = [stem + suffix for stem in STEMS for suffix in SUFFIXES]
    return [WordFreq(word=word, count=max(1, 400 // rank)) for rank, word in enumerate(words, start=1)]


@pytest.fixture(scope="module")
def trained():
    trainer = MdlTrainer(TrainConfig(min_epochs=5, max_epochs=8, seed=3))
    model = trainer.train(stem_suffix_words())
    return trainer, model


def segmentations(word: str):
    for k in range(len(word)):
        for cuts in combinations(range(1, len(word)), k):
            bounds = (0,) + cuts + (len(word),)
            yield [word[a:b] for a, b in zip(bounds, bounds[1:])]


def test_single_type_is_not_split():
    model = train([WordFreq(word="abc", count=10)], TrainConfig())
    assert model.analyses == {"abc": ("abc",)}


def test_certain_event_costs_nothing_in_the_corpus_part():
    char_costs, boundary = char_code_lengths(["a"])
    model = SegModel(lexicon={"a": 1}, total_tokens=1, char_costs=char_costs, boundary_cost=boundary,
                     analyses={"a": ("a",)})
    lexicon_part = char_costs["a"] + boundary
    assert model_cost(model) == pytest.approx(lexicon_part, abs=1e-12)
    assert model_cost(model) > 0


def test_hand_built_model_cost():
    model = SegModel(lexicon={"ab": 3, "c": 1}, total_tokens=4, char_costs={"a": 1.0, "b": 2.0, "c": 3.0},
                     boundary_cost=0.5, analyses={"abc": ("ab", "c")})
    corpus = -(3 * math.log2(3 / 4) + 1 * math.log2(1 / 4))
    lexicon = (1.0 + 2.0 + 0.5) + (3.0 + 0.5)
    assert model_cost(model) == pytest.approx(corpus + lexicon, abs=1e-9)


def test_training_lowers_cost_monotonically(trained):
    trainer, model = trained
    history = trainer.history
    costs = [history.initial_cost] + [epoch.cost for epoch in history.epochs]

    assert len(history.epochs) >= 5
    assert all(later <= earlier + 1e-9 for earlier, later in zip(costs, costs[1:]))
    assert costs[-1] < history.initial_cost


def test_maintained_cost_matches_recomputation(trained):
    trainer, model = trained
    for epoch in trainer.history.epochs:
        assert abs(epoch.cost - epoch.scratch_cost) < 1e-6
    assert model_cost(model) == pytest.approx(trainer.history.epochs[-1].cost, abs=1e-6)


def test_initial_cost_is_the_unsplit_model(trained):
    trainer, _ = trained
    words = {wf.word: wf.count for wf in stem_suffix_words()}
    char_costs, boundary = char_code_lengths(words)
    unsplit = SegModel(lexicon=words, total_tokens=sum(words.values()), char_costs=char_costs,
                       boundary_cost=boundary, analyses={w: (w,) for w in words})
    assert trainer.history.initial_cost == pytest.approx(model_cost(unsplit), abs=1e-6)


def test_trained_model_is_consistent(trained):
    _, model = trained
    words = {wf.word: wf.count for wf in stem_suffix_words()}
    usage = {}
    for word, morphs in model.analyses.items():
        assert "".join(morphs) == word
        for morph in morphs:
            usage[morph] = usage.get(morph, 0) + words[word]
    assert usage == model.lexicon
    assert len(model.analyses) == 200


def test_training_is_deterministic(trained):
    _, model = trained
    again = MdlTrainer(TrainConfig(min_epochs=5, max_epochs=8, seed=3)).train(stem_suffix_words())
    assert again == model


def test_viterbi_matches_exhaustive_search(trained):
    _, model = trained
    words = [w for w in model.analyses if len(w) <= 10] + ["pissurka", "nunakqimug", "zzq"]
    for word in words:
        best = min(sum(morph_cost(m, model, 20.0) for m in seg) for seg in segmentations(word))
        found = segment_viterbi(word, model, 20.0)
        assert "".join(found) == word
        assert sum(morph_cost(m, model, 20.0) for m in found) == pytest.approx(best, abs=1e-9)


def test_viterbi_examples():
    assert segment_viterbi("walked", TOY_LEXICON, 20.0) == ["walk", "ed"]
    assert segment_viterbi("jumping", TOY_LEXICON, 20.0) == ["jump", "ing"]
    assert segment_viterbi("walk", TOY_LEXICON, 20.0) == ["walk"]
    assert segment_viterbi("", TOY_LEXICON, 20.0) == []


def test_segment_word_prefers_stored_analysis(trained):
    _, model = trained
    word = next(iter(model.analyses))
    assert segment_word(word, model) == list(model.analyses[word])
    assert "".join(segment_word("qimugnek", model)) == "qimugnek"


def test_segment_lines_marks_continuations():
    lines = segment_lines([["walked", "jump"], []], TOY_LEXICON, 20.0)
    assert lines == [["walk@@", "ed", "jump"], []]


def test_segment_lines_escapes_words_ending_in_marker():
    model = SegModel(lexicon={"x@@": 3, "walk": 2}, total_tokens=5, char_costs={}, boundary_cost=0.0, analyses={})
    assert segment_lines([["x@@", "walk"]], model, 20.0) == [["x@@&", "walk"]]


def test_train_rejects_empty_input():
    with pytest.raises(InputError):
        train([], TrainConfig())


def test_train_config_bounds():
    with pytest.raises(ValueError):
        TrainConfig(convergence_threshold=0)
    with pytest.raises(ValueError):
        TrainConfig(min_epochs=5, max_epochs=2)


def test_dampening():
    assert dampen(8, Dampening.NONE) == 8
    assert dampen(8, Dampening.LOG) == 4
    assert dampen(1, Dampening.LOG) == 1
    assert dampen(8, Dampening.ONES) == 1


def test_type_based_training_weights_every_word_once():
    trainer = MdlTrainer(TrainConfig(dampening=Dampening.ONES, max_epochs=3))
    model = trainer.train(stem_suffix_words())
    assert model.total_tokens == sum(len(morphs) for morphs in model.analyses.values())


def test_save_and_load(tmp_path, trained):
    _, model = trained
    save_model(model, tmp_path / "a.model")
    save_model(model, tmp_path / "b.model")

    assert (tmp_path / "a.model").read_bytes() == (tmp_path / "b.model").read_bytes()
    assert (tmp_path / "a.model").read_text(encoding="utf-8").startswith(f"#segmodel v1 total={model.total_tokens}\n")
    loaded = load_model(tmp_path / "a.model")
    assert loaded.lexicon == model.lexicon
    assert loaded.analyses == model.analyses
    assert model_cost(loaded) == pytest.approx(model_cost(model), abs=1e-9)


def test_load_without_analyses_costs_the_lexicon(tmp_path):
    (tmp_path / "lex.model").write_text("#segmodel v1 total=3\n2\tab\n1\tc\n#analyses\n", encoding="utf-8")
    loaded = load_model(tmp_path / "lex.model")
    assert loaded.analyses == {}

    char_costs, boundary = char_code_lengths(["ab", "c"])
    expected = SegModel(lexicon={"ab": 2, "c": 1}, total_tokens=3, char_costs=char_costs,
                        boundary_cost=boundary, analyses={})
    assert math.isfinite(model_cost(loaded))
    assert model_cost(loaded) == pytest.approx(model_cost(expected), abs=1e-9)
    assert segment_word("abc", loaded) == ["ab", "c"]


@pytest.mark.parametrize("content,line_no", [
    ("#segmodel v1 total=0\n#analyses\n", 1),
    ("#segmodel v2 total=1\n1\ta\n", 1),
    ("#segmodel v1 total=1\n1\ta\nbroken line\n", 3),
    ("#segmodel v1 total=1\nx\ta\n", 2),
    ("#segmodel v1 total=2\n1\tab\n1\tz\n#analyses\nab\tab\n", 1),
])
def test_load_rejects_malformed_files(tmp_path, content, line_no):
    (tmp_path / "bad.model").write_text(content, encoding="utf-8")
    with pytest.raises(ParseError) as excinfo:
        load_model(tmp_path / "bad.model")
    assert excinfo.value.line_no == line_no
