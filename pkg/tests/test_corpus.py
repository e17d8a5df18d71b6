"""Loader behavior: formats, validation, round trips."""

import pytest
from conftest import toy_citation_set

from citesum.corpus import (
    IdfTable,
    ParseError,
    SourceKind,
    ValidationError,
    load_citation_set,
    load_factoid_annotation,
    load_idf_table,
    load_nugget_spans,
    load_run_config,
    load_stopwords,
    save_citation_set,
    RunConfig,
)


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestCitationSet:
    def test_nine_record_fixture(self, nine_citations):
        assert len(nine_citations) == 9
        assert nine_citations.ids == [f"s{i}" for i in range(1, 10)]

    def test_order_preserved_and_word_count(self, tmp_path):
        path = write(
            tmp_path,
            "cs.jsonl",
            '{"id": "b", "text": "two words", "source_doc": "d"}\n'
            '{"id": "a", "text": "one", "source_doc": "d"}\n',
        )
        cs = load_citation_set(path)
        assert cs.ids == ["b", "a"]
        assert [s.word_count for s in cs.sentences] == [2, 1]

    def test_empty_file_rejected(self, tmp_path):
        path = write(tmp_path, "empty.jsonl", "")
        with pytest.raises(ValidationError, match="no sentences"):
            load_citation_set(path)

    def test_duplicate_ids_rejected(self, tmp_path):
        path = write(
            tmp_path,
            "dup.jsonl",
            '{"id": "s1", "text": "x", "source_doc": "d"}\n'
            '{"id": "s1", "text": "y", "source_doc": "d"}\n',
        )
        with pytest.raises(ValidationError, match="duplicate"):
            load_citation_set(path)

    def test_malformed_line_names_line_number(self, tmp_path):
        path = write(
            tmp_path,
            "bad.jsonl",
            '{"id": "s1", "text": "x", "source_doc": "d"}\nnot json\n',
        )
        with pytest.raises(ParseError, match=":2"):
            load_citation_set(path)

    def test_missing_field_rejected(self, tmp_path):
        path = write(tmp_path, "missing.jsonl", '{"id": "s1"}\n')
        with pytest.raises(ValidationError, match="text"):
            load_citation_set(path)

    def test_round_trip(self, tmp_path, nine_citations):
        out = tmp_path / "round.jsonl"
        save_citation_set(nine_citations, out)
        again = load_citation_set(out, target_id=nine_citations.target_id)
        assert again == nine_citations

    def test_source_kind(self, tmp_path):
        path = write(tmp_path, "ab.jsonl", '{"id": "s1", "text": "x", "source_doc": "d"}\n')
        cs = load_citation_set(path, SourceKind.ABSTRACTS)
        assert cs.source_kind is SourceKind.ABSTRACTS


class TestFactoidAnnotation:
    def test_table_fixture(self, nine_citations, nine_factoids):
        assert nine_factoids.factoid_ids == frozenset({"f1", "f2", "f3"})
        assert nine_factoids.factoids_of("s6") == frozenset({"f1", "f2"})
        assert nine_factoids.factoids_of("s9") == frozenset()

    def test_unannotated_sentences_get_empty_set(self, nine_factoids, nine_citations):
        assert set(nine_factoids.sentence_factoids) == set(nine_citations.ids)

    def test_unknown_sentence_rejected(self, tmp_path, nine_citations):
        path = write(tmp_path, "ann.tsv", "s99\tf1\n")
        with pytest.raises(ValidationError, match="s99"):
            load_factoid_annotation(path, nine_citations)

    def test_zero_factoids_is_legal(self, tmp_path, nine_citations):
        path = write(tmp_path, "ann.tsv", "\n")
        ann = load_factoid_annotation(path, nine_citations)
        assert ann.factoid_ids == frozenset()

    def test_weights_validated(self, tmp_path, nine_citations):
        ann_path = write(tmp_path, "ann.tsv", "s1\tf1\n")
        bad_weights = write(tmp_path, "wbad.tsv", "f2\t1.0\n")
        with pytest.raises(ValidationError, match="unknown factoid"):
            load_factoid_annotation(ann_path, nine_citations, bad_weights)
        nonpos = write(tmp_path, "wneg.tsv", "f1\t0\n")
        with pytest.raises(ValidationError, match="non-positive"):
            load_factoid_annotation(ann_path, nine_citations, nonpos)
        good = write(tmp_path, "w.tsv", "f1\t8\n")
        ann = load_factoid_annotation(ann_path, nine_citations, good)
        assert ann.factoid_weights == {"f1": 8.0}


class TestIdfTable:
    def test_read_back(self, tmp_path):
        path = write(tmp_path, "idf.tsv", "the\t0.01\nparsing\t4.2\n")
        table = load_idf_table(path)
        assert table.idf("parsing") == 4.2

    def test_unseen_term_gets_max_observed(self, tmp_path):
        path = write(tmp_path, "idf.tsv", "the\t0.01\nparsing\t4.2\n")
        assert load_idf_table(path).idf("zyzzyva") == 4.2

    def test_negative_idf_rejected(self, tmp_path):
        path = write(tmp_path, "idf.tsv", "w\t-1.0\n")
        with pytest.raises(ValidationError, match="negative"):
            load_idf_table(path)

    def test_direct_construction_validates(self):
        with pytest.raises(ValidationError):
            IdfTable({"w": -0.5})


class TestNuggetSpans:
    def test_load_and_merge(self, tmp_path, nine_citations):
        path = write(
            tmp_path,
            "spans.tsv",
            "ann1\ts1\t0\t11\nann1\ts1\t4\t20\nann1\ts2\t5\t16\n",
        )
        annotations = load_nugget_spans(path, nine_citations)
        ann = annotations["ann1"]
        assert ann.spans_of("s1") == ((0, 20),)  # overlapping rows merged
        assert ann.spans_of("s2") == ((5, 16),)
        assert ann.spans_of("s3") == ()

    def test_out_of_bounds_rejected(self, tmp_path, nine_citations):
        path = write(tmp_path, "spans.tsv", "ann1\ts9\t0\t100000\n")
        with pytest.raises(ValidationError, match="out of bounds"):
            load_nugget_spans(path, nine_citations)

    def test_unknown_sentence_rejected(self, tmp_path, nine_citations):
        path = write(tmp_path, "spans.tsv", "ann1\tsX\t0\t3\n")
        with pytest.raises(ValidationError, match="sX"):
            load_nugget_spans(path, nine_citations)

    def test_codepoint_boundary_enforced(self, tmp_path):
        cs = toy_citation_set(["café time"])  # 'caf\xc3\xa9 time' in bytes
        path = write(tmp_path, "spans.tsv", "ann1\ts1\t0\t4\n")
        with pytest.raises(ValidationError, match="codepoint"):
            load_nugget_spans(path, cs)
        ok = write(tmp_path, "ok.tsv", "ann1\ts1\t0\t5\n")
        assert load_nugget_spans(ok, cs)["ann1"].spans_of("s1") == ((0, 5),)


class TestRunConfig:
    def test_defaults(self):
        cfg = RunConfig()
        assert cfg.lexrank_edge_threshold == 0.10
        assert cfg.lexrank_damping == 0.85
        assert cfg.divrank_lambda == 0.90
        assert cfg.divrank_alpha == 0.25
        assert cfg.divrank_beta == 0.1
        assert cfg.random_trials == 100

    def test_validation(self):
        with pytest.raises(ValidationError):
            RunConfig(lexrank_damping=1.5)
        with pytest.raises(ValidationError):
            RunConfig(summary_budget_words=0)

    def test_config_file_and_overrides(self, tmp_path):
        path = write(
            tmp_path,
            "run.cfg",
            "# a comment\nlexrank_damping = 0.5\nsummary_budget_words = 250\nlowercase = false\n",
        )
        cfg = load_run_config(path)
        assert cfg.lexrank_damping == 0.5
        assert cfg.summary_budget_words == 250
        assert cfg.lowercase is False
        cfg2 = load_run_config(path, {"lexrank_damping": 0.7, "random_seed": None})
        assert cfg2.lexrank_damping == 0.7  # flags win

    def test_unknown_key_rejected(self, tmp_path):
        path = write(tmp_path, "run.cfg", "no_such_option = 3\n")
        with pytest.raises(ValidationError, match="no_such_option"):
            load_run_config(path)

    def test_stopwords_loaded(self, tmp_path):
        sw = write(tmp_path, "stop.txt", "the\nand\n# comment\n\n")
        assert load_stopwords(sw) == frozenset({"the", "and"})
