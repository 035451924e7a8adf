import random

import pytest

from entityswitch.conll_io import extract_mentions, parse_corpus, serialize_corpus
from entityswitch.inventory import CountryInventory, FirstName, NamingRule
from entityswitch.per_switch import (
    NameRole,
    build_alias_table,
    classify_role,
    generate_per_variants,
    replace_per,
    replacement_tokens,
    resolve_alias,
)

from helpers import NAME_TOKENS, WORDS, mk_corpus


def per_doc(sentences):
    return mk_corpus([sentences], scheme="IO").documents[0]


def mentions_of(doc, etype="PER"):
    return [m for m in extract_mentions(doc) if m.etype == etype]


def label_pairs(text, name_tokens, fillers=("went", "home")):
    sentence = []
    for tok in name_tokens:
        sentence.append((tok, "I-PER"))
    for tok in fillers:
        sentence.append((tok, "O"))
    return sentence


class TestAliasTable:
    def test_full_name_with_last_name_occurrence(self):
        doc = per_doc([
            label_pairs(None, ["Hassan", "Abbas"]),
            label_pairs(None, ["Abbas"]),
        ])
        table = build_alias_table(doc)
        assert table.full_names == (("Hassan", "Abbas"),)
        abbas = mentions_of(doc)[1]
        assert classify_role(abbas, table) is NameRole.LAST_ONLY

    def test_lone_single_name_is_unseen(self):
        doc = per_doc([label_pairs(None, ["Weah"])])
        table = build_alias_table(doc)
        assert table.full_names == ()
        assert classify_role(mentions_of(doc)[0], table) is NameRole.UNSEEN_SINGLE

    def test_contained_name_resolves_against_longer_name(self):
        doc = per_doc([
            label_pairs(None, ["John", "Ronald", "Reuel", "Tolkien"]),
            label_pairs(None, ["Ronald", "Reuel", "Tolkien"]),
        ])
        table = build_alias_table(doc)
        assert table.full_names == (("John", "Ronald", "Reuel", "Tolkien"),)
        role, owner = resolve_alias(mentions_of(doc)[1], table)
        assert role is NameRole.LAST_ONLY
        assert owner == ("john", "ronald", "reuel", "tolkien")

    def test_registration_is_longest_first_regardless_of_order(self):
        doc = per_doc([
            label_pairs(None, ["Ronald", "Reuel", "Tolkien"]),
            label_pairs(None, ["John", "Ronald", "Reuel", "Tolkien"]),
        ])
        table = build_alias_table(doc)
        assert table.full_names == (("John", "Ronald", "Reuel", "Tolkien"),)

    def test_matching_is_case_insensitive(self):
        doc = per_doc([
            label_pairs(None, ["Hassan", "Abbas"]),
            label_pairs(None, ["ABBAS"]),
        ])
        table = build_alias_table(doc)
        assert classify_role(mentions_of(doc)[1], table) is NameRole.LAST_ONLY

    def test_shared_part_resolves_to_earliest_name(self, caplog):
        doc = per_doc([
            label_pairs(None, ["John", "Smith"]),
            label_pairs(None, ["Anna", "Smith"]),
            label_pairs(None, ["Smith"]),
        ])
        with caplog.at_level("WARNING"):
            table = build_alias_table(doc)
        role, owner = resolve_alias(mentions_of(doc)[2], table)
        assert role is NameRole.LAST_ONLY
        assert owner == ("john", "smith")
        assert any("shared" in record.message for record in caplog.records)


class TestClassifyRole:
    def setup_method(self):
        self.doc = per_doc([
            label_pairs(None, ["Hassan", "Abbas"]),
            label_pairs(None, ["Hassan"]),
            label_pairs(None, ["Abbas"]),
            label_pairs(None, ["Madonna"]),
        ])
        self.table = build_alias_table(self.doc)

    def test_first_only(self):
        assert classify_role(mentions_of(self.doc)[1], self.table) is NameRole.FIRST_ONLY

    def test_last_only(self):
        assert classify_role(mentions_of(self.doc)[2], self.table) is NameRole.LAST_ONLY

    def test_unseen_single(self):
        assert classify_role(mentions_of(self.doc)[3], self.table) is NameRole.UNSEEN_SINGLE

    def test_rejects_non_per(self):
        corpus = mk_corpus([[[("Rome", "I-LOC")]]])
        with pytest.raises(ValueError):
            classify_role(extract_mentions(corpus.documents[0])[0], self.table)


class TestReplacementTokens:
    def test_roles_slice_the_target(self):
        target = ("Ritwika", "Tomar")
        assert replacement_tokens(target, NameRole.FULL_NAME) == target
        assert replacement_tokens(target, NameRole.FIRST_ONLY) == ("Ritwika",)
        assert replacement_tokens(target, NameRole.LAST_ONLY) == ("Tomar",)
        assert replacement_tokens(target, NameRole.UNSEEN_SINGLE) == ("Ritwika",)

    def test_single_token_target_fills_every_role(self):
        target = ("Sukarno",)
        for role in NameRole:
            assert replacement_tokens(target, role) == ("Sukarno",)

    def test_multi_token_last_name(self):
        target = ("Anna", "de", "la", "Cruz")
        assert replacement_tokens(target, NameRole.LAST_ONLY) == ("de", "la", "Cruz")

    def test_unseen_single_configurable_to_last(self):
        target = ("Ritwika", "Tomar")
        assert replacement_tokens(target, NameRole.UNSEEN_SINGLE, "last") == ("Tomar",)


class TestReplacePer:
    def test_switch_example_sentence(self):
        corpus = mk_corpus([[
            [("Defender", "O"), ("Hassan", "I-PER"), ("Abbas", "I-PER"),
             ("rose", "O"), ("to", "O"), ("intercept", "O"), ("a", "O"), ("cross", "O")],
        ]])
        out = replace_per(corpus, "Ritwika Tomar")
        tokens = out.documents[0].sentences[0].tokens
        assert [t.surface for t in tokens] == [
            "Defender", "Ritwika", "Tomar", "rose", "to", "intercept", "a", "cross",
        ]
        mentions = mentions_of(out.documents[0])
        assert [(m.token_start, m.token_end, m.surface) for m in mentions] == [(1, 3, "Ritwika Tomar")]

    def test_identity_when_target_is_the_documents_name(self):
        corpus = mk_corpus([[
            label_pairs(None, ["Hassan", "Abbas"]),
            label_pairs(None, ["Hassan"]),
            label_pairs(None, ["Abbas"]),
        ]], n_aux=2)
        assert replace_per(corpus, "Hassan Abbas") == corpus

    def test_roles_replaced_consistently(self):
        corpus = mk_corpus([[
            label_pairs(None, ["Hassan", "Abbas"]),
            label_pairs(None, ["Abbas"]),
        ]])
        out = replace_per(corpus, "John Smith")
        surfaces = [m.surface for m in mentions_of(out.documents[0])]
        assert surfaces == ["John Smith", "Smith"]

    def test_non_per_tokens_byte_identical(self):
        corpus = parse_corpus(
            "Hassan NNP I-NP B-PER\nAbbas NNP I-NP I-PER\nmet VBD I-VP O\n"
            "Rome NNP I-NP B-LOC\ntoday NN I-NP O\n",
            4, "BIO",
        )
        out = replace_per(corpus, "Priya Khemka Nair")
        out_tokens = out.documents[0].sentences[0].tokens
        in_tokens = corpus.documents[0].sentences[0].tokens
        assert out_tokens[3:] == in_tokens[2:]  # met, Rome, today untouched

    def test_inserted_tokens_get_placeholder_aux_and_bio_labels(self):
        corpus = parse_corpus("Weah NNP I-NP B-PER\nscored VBD I-VP O\n", 4, "BIO")
        out = replace_per(corpus, "Dheeraj Uniyal")
        tok = out.documents[0].sentences[0].tokens[0]
        assert tok.aux == ("NNP", "I-NP")
        assert tok.label == "B-PER"

    def test_output_reparses_cleanly(self):
        corpus = parse_corpus(
            "Nader NNP I-NP B-PER\nJokhadar NNP I-NP I-PER\nscored VBD I-VP O\n\n"
            "Jokhadar NNP I-NP B-PER\ncelebrated VBD I-VP O\n",
            4, "BIO",
        )
        out = replace_per(corpus, "Ritwika Tomar")
        assert parse_corpus(serialize_corpus(out), 4, "BIO") == out

    def test_token_count_delta_matches_role_arithmetic(self):
        corpus = mk_corpus([[label_pairs(None, ["Hassan", "Abbas"], fillers=["x"])]])
        out = replace_per(corpus, "Anna de la Cruz")
        assert len(out.documents[0].sentences[0].tokens) == 3 + (4 - 2)

    def test_empty_target_rejected(self):
        with pytest.raises(ValueError):
            replace_per(mk_corpus([[[("a", "O")]]]), "  ")

    def test_all_caps_mention_gets_inventory_casing(self):
        corpus = mk_corpus([[
            [("BOSS", "O"), ("HAVELANGE", "I-PER"), ("STANDS", "O")],
        ]])
        out = replace_per(corpus, "Dheeraj Uniyal")
        assert [t.surface for t in out.documents[0].sentences[0].tokens] == [
            "BOSS", "Dheeraj", "STANDS",
        ]


class TestGeneratePerVariants:
    def make_inv(self, n_first=20):
        return CountryInventory(
            country_id="X",
            rule=NamingRule.STANDARD,
            first_names=tuple(FirstName(f"F{i}") for i in range(n_first)),
            family_names=tuple(f"L{i}" for i in range(10)),
            locs=(),
            orgs=(),
        )

    def corpus(self):
        return mk_corpus([[label_pairs(None, ["Hassan", "Abbas"])]])

    def test_twenty_names_give_twenty_variants(self):
        variants = generate_per_variants(self.corpus(), self.make_inv(), seed=1)
        assert len(variants) == 20

    def test_one_name_gives_one_variant(self):
        variants = generate_per_variants(self.corpus(), self.make_inv(1), seed=1)
        assert len(variants) == 1

    def test_same_seed_gives_identical_bytes(self):
        runs = [
            [serialize_corpus(c) for _, c in generate_per_variants(self.corpus(), self.make_inv(), seed=5)]
            for _ in range(2)
        ]
        assert runs[0] == runs[1]


def test_role_consistency_randomized():
    rng = random.Random(812)
    for _ in range(100):
        pool = rng.sample(NAME_TOKENS, 6)
        n = rng.randint(2, 4)
        full = pool[:n]
        target = " ".join(rng.sample([t.upper() for t in NAME_TOKENS], rng.randint(1, 3)))
        target_tokens = tuple(target.split())
        doc_spec = [
            label_pairs(None, full, fillers=rng.sample(WORDS, 2)),
            label_pairs(None, [full[0]], fillers=rng.sample(WORDS, 2)),
            label_pairs(None, full[1:], fillers=rng.sample(WORDS, 2)),
        ]
        corpus = mk_corpus([doc_spec])
        out = replace_per(corpus, target)
        got = [m.surface for m in mentions_of(out.documents[0])]
        expected_full = " ".join(target_tokens)
        expected_first = target_tokens[0]
        expected_last = " ".join(target_tokens[1:]) if len(target_tokens) > 1 else target_tokens[0]
        assert got == [expected_full, expected_first, expected_last]
