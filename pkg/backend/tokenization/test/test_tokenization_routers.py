from main import app


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_tokenize_and_detokenize(runner, tmp_path):
    source = write(tmp_path / "en.txt", "the dog hadn't eaten.\nthey'd haul\n")

    result = runner.invoke(app, ["tokenize", "--input", source, "--out", str(tmp_path / "en.tok")])
    assert result.exit_code == 0, result.output
    assert (tmp_path / "en.tok").read_text(encoding="utf-8") == "the dog had n't eaten .\nthey 'd haul\n"

    result = runner.invoke(app, ["tokenize", "--detok", "--input", str(tmp_path / "en.tok"),
                                 "--out", str(tmp_path / "en.detok")])
    assert result.exit_code == 0, result.output
    assert (tmp_path / "en.detok").read_text(encoding="utf-8") == "the dog hadn't eaten.\nthey'd haul\n"


def test_tokenize_apostrophe_mode_from_stdin(runner):
    result = runner.invoke(app, ["tokenize", "--mode", "apostrophe-preserving"], input="Yup'ik qaygimi.\n")
    assert result.exit_code == 0, result.output
    assert "Yup'ik qaygimi ." in result.output


def test_bpe_learn_apply_unsegment(runner, tmp_path):
    train = write(tmp_path / "train.tok", "low low low low low lower lower\n"
                                          "newest newest newest newest newest newest\n"
                                          "widest widest widest\n")
    table = str(tmp_path / "t.bpe")

    result = runner.invoke(app, ["bpe-learn", "--input", train, "--merges", "10", "--out", table])
    assert result.exit_code == 0, result.output
    assert (tmp_path / "t.bpe").read_text(encoding="utf-8").splitlines()[1] == "e s"

    result = runner.invoke(app, ["bpe-apply", "--table", table, "--input", train, "--out", str(tmp_path / "seg")])
    assert result.exit_code == 0, result.output
    assert "@@" in (tmp_path / "seg").read_text(encoding="utf-8")

    result = runner.invoke(app, ["bpe-unsegment", "--input", str(tmp_path / "seg"), "--out", str(tmp_path / "back")])
    assert result.exit_code == 0, result.output
    assert (tmp_path / "back").read_text(encoding="utf-8") == (tmp_path / "train.tok").read_text(encoding="utf-8")


def test_bpe_learn_rejects_zero_merges(runner, tmp_path):
    train = write(tmp_path / "train.tok", "aa aa\n")
    result = runner.invoke(app, ["bpe-learn", "--input", train, "--merges", "0", "--out", str(tmp_path / "t.bpe")])
    assert result.exit_code == 2


def test_bpe_apply_malformed_table_exits_3(runner, tmp_path):
    table = write(tmp_path / "t.bpe", "garbage\n")
    data = write(tmp_path / "d.tok", "a b\n")
    result = runner.invoke(app, ["bpe-apply", "--table", table, "--input", data])
    assert result.exit_code == 3


def test_morf_train_and_segment(runner, tmp_path):
    words = " ".join(f"{stem}{suffix}" for stem in ("walk", "jump", "talk", "kick", "pull")
                     for suffix in ("", "ed", "ing", "s"))
    train = write(tmp_path / "train.tok", f"{words}\n{words}\n")
    model = str(tmp_path / "m.model")

    result = runner.invoke(app, ["morf-train", "--input", train, "--out", model, "--seed", "2", "--max-epochs", "5"])
    assert result.exit_code == 0, result.output
    assert "morphs, cost" in result.output

    result = runner.invoke(app, ["morf-segment", "--model", model, "--input", train, "--out", str(tmp_path / "seg")])
    assert result.exit_code == 0, result.output
    segmented = (tmp_path / "seg").read_text(encoding="utf-8").splitlines()
    assert [" ".join(line.split()).replace("@@ ", "") for line in segmented] == [words, words]


def test_morf_train_empty_input_exits_3(runner, tmp_path):
    train = write(tmp_path / "empty.tok", "\n")
    result = runner.invoke(app, ["morf-train", "--input", train, "--out", str(tmp_path / "m.model")])
    assert result.exit_code == 3


def test_parse_with_bundled_grammar(runner, tmp_path):
    data = write(tmp_path / "ypk.tok", "pissuryullrunrituk zzz\n")

    result = runner.invoke(app, ["parse", "--input", data, "--out", str(tmp_path / "parsed")])
    assert result.exit_code == 0, result.output
    assert (tmp_path / "parsed").read_text(encoding="utf-8") == "pissur@@ yu@@ llru@@ nrit@@ uk zzz\n"

    result = runner.invoke(app, ["parse", "--input", data, "--emit-glosses", "--out", str(tmp_path / "glossed")])
    assert result.exit_code == 0, result.output
    assert (tmp_path / "glossed").read_text(encoding="utf-8").startswith("pissur|hunt@@ yu|want@@ llru|PAST@@")


def test_parse_reports_rule_file_errors(runner, tmp_path):
    rules = write(tmp_path / "bad.rules", "base\tnuna\tland\nbase\tnuna\tland\n")
    data = write(tmp_path / "ypk.tok", "nuna\n")
    result = runner.invoke(app, ["parse", "--input", data, "--rules", rules])
    assert result.exit_code == 3
