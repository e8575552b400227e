import numpy as np
import pytest

from ldc.lexicon import (EmbeddingFileError, PAD, Vocab, build_vocab,
                         load_embeddings, load_lexicon, pad_batch, tokenize)


class TestTokenize:
    def test_punctuation_split(self):
        assert tokenize("You are hungry!") == ["you", "are", "hungry", "!"]

    def test_empty_input_gives_pad(self):
        assert tokenize("") == [PAD]
        assert tokenize("   ") == [PAD]

    def test_multiword_item(self):
        assert tokenize("sliced red hot pepper") == ["sliced", "red", "hot", "pepper"]

    def test_whitespace_collapsed(self):
        assert tokenize("a   b\t c\n d") == ["a", "b", "c", "d"]

    def test_idempotent_on_joined_output(self):
        samples = [
            "You are hungry! Let's check: the cookbook, now.",
            "", "  ", "a--b", "don't panic!!", "slice the carrot with knife",
            "-= Kitchen =- You see a stove.",
        ]
        for s in samples:
            once = tokenize(s)
            twice = tokenize(" ".join(once))
            assert once == twice, s


class TestLexicon:
    def test_bundled_lexicon_loads(self):
        lex = load_lexicon()
        assert len(lex.foods) >= 300
        assert "red hot pepper" in lex.foods

    def test_adjective_sets_disjoint(self):
        lex = load_lexicon()
        assert not set(lex.cut_adjectives) & set(lex.heat_adjectives)

    def test_pools_partition_foods(self):
        lex = load_lexicon()
        assert set(lex.game_pool) | set(lex.holdout_pool) == set(lex.foods)
        assert not set(lex.game_pool) & set(lex.holdout_pool)
        assert len(lex.game_pool) >= 100 and len(lex.holdout_pool) >= 100

    def test_no_state_adjectives_inside_names(self):
        lex = load_lexicon()
        banned = set(lex.cut_adjectives) | set(lex.heat_adjectives) | {"raw"}
        for food in lex.foods:
            assert not banned & set(food.split()), food

    def test_small_file_rejected(self, tmp_path):
        p = tmp_path / "foods.txt"
        p.write_text("apple\nbanana\n")
        with pytest.raises(Exception):
            load_lexicon(p)


class TestVocab:
    def test_reserved_ids(self):
        v = Vocab(["b", "a"])
        assert v.id_of[PAD] == 0
        assert v.id_of["<unk>"] == 1
        assert v.id_of["a"] == 2

    def test_unknown_maps_to_unk(self):
        v = Vocab(["a"])
        assert v.encode(["zzz"]) == [1]

    def test_build_vocab_deterministic(self):
        lex = load_lexicon()
        v1 = build_vocab(lex)
        v2 = build_vocab(lex)
        assert v1.id_of == v2.id_of

    def test_vocab_covers_engine_words(self):
        v = build_vocab(load_lexicon())
        for word in ["cookbook", "knife", "stove", "oven", "bbq", "meal",
                     "north", "sliced", "pepper", "door"]:
            assert word in v.id_of, word


class TestEmbeddings:
    def test_file_rows_copied(self, tmp_path):
        v = Vocab(["pepper", "carrot"])
        vals = [str(0.01 * i) for i in range(100)]
        (tmp_path / "emb.txt").write_text("pepper " + " ".join(vals) + "\n")
        m = load_embeddings(tmp_path / "emb.txt", v, seed=3)
        np.testing.assert_allclose(m[v.id_of["pepper"]],
                                   np.array(vals, dtype=np.float32))

    def test_absent_file_random_init(self, tmp_path):
        v = Vocab(["pepper"])
        m = load_embeddings(tmp_path / "missing.txt", v, seed=3)
        assert m.shape == (len(v), 100)
        assert np.all(np.abs(m) <= 0.1)

    def test_wrong_field_count_reports_line(self, tmp_path):
        v = Vocab(["pepper"])
        good = "carrot " + " ".join(["0.0"] * 100)
        bad = "pepper " + " ".join(["0.0"] * 99)
        (tmp_path / "emb.txt").write_text(good + "\n" + bad + "\n")
        with pytest.raises(EmbeddingFileError, match=":2:"):
            load_embeddings(tmp_path / "emb.txt", v)

    def test_out_of_file_words_random(self, tmp_path):
        v = Vocab(["pepper", "carrot"])
        (tmp_path / "emb.txt").write_text(
            "pepper " + " ".join(["1.0"] * 100) + "\n")
        m1 = load_embeddings(tmp_path / "emb.txt", v, seed=5)
        m2 = load_embeddings(None, v, seed=5)
        np.testing.assert_array_equal(m1[v.id_of["carrot"]], m2[v.id_of["carrot"]])


def test_pad_batch_shapes_and_lengths():
    batch, lengths = pad_batch([[3, 4, 5], [7], []])
    assert batch.shape == (3, 3)
    assert lengths.tolist() == [3, 1, 1]
    assert batch[1].tolist() == [7, 0, 0]
