from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from newsbalance.corpus import MonthKey
from newsbalance.errors import ConfigError
from newsbalance.tagging import (
    CONTENT,
    HEADLINE,
    PartyLexicon,
    build_monthly_documents,
    get_document,
    load_party_lexicons,
    match_parties,
)

from conftest import make_article


class TestMatchParties:
    def test_direct_acronym_hit(self, lexicons):
        assert match_parties("The BJP announced a new plan", lexicons) == {"bjp"}

    def test_keyword_in_both_documents(self, lexicons):
        # NDA belongs to the bjp keyword set
        assert match_parties("Congress and NDA clashed", lexicons) == {"congress", "bjp"}

    def test_whole_token_boundary(self, lexicons):
        # "INC" must not fire inside "success" (nor lowercase "inc")
        assert match_parties("He achieved success", lexicons) == set()
        assert match_parties("the inc. results improved", lexicons) == set()
        assert match_parties("INC won the seat", lexicons) == {"congress"}

    def test_acronyms_case_sensitive(self, lexicons):
        assert match_parties("nda upa abvp nsui", lexicons) == set()

    def test_proper_names_case_insensitive(self, lexicons):
        assert match_parties("the congress rallied", lexicons) == {"congress"}
        assert match_parties("BHARATIYA JANATA PARTY wins", lexicons) == {"bjp"}

    def test_multiword_phrase(self, lexicons):
        assert match_parties("The United Progressive Alliance meets today", lexicons) == {"congress"}

    def test_hyphenated_compound_matches(self, lexicons):
        assert match_parties("A Congress-led front advanced", lexicons) == {"congress"}

    def test_accepts_tokens(self, lexicons):
        assert match_parties(["BJP", "wins"], lexicons) == {"bjp"}


class TestLexiconLoading:
    def test_duplicate_phrase_rejected(self, tmp_path):
        path = tmp_path / "lex.json"
        path.write_text('{"a": ["X"], "b": ["X"]}', encoding="utf-8")
        with pytest.raises(ConfigError):
            load_party_lexicons(path)

    def test_empty_phrases_rejected(self):
        with pytest.raises(ConfigError):
            PartyLexicon(party_id="a", phrases=())

    def test_shipped_defaults(self, lexicons):
        assert [lex.party_id for lex in lexicons] == ["bjp", "congress"]
        assert "BJP" in lexicons[0].phrases
        assert "United Progressive Alliance" in lexicons[1].phrases


class TestBuildMonthlyDocuments:
    def test_headline_mode_single_party(self, lexicons):
        article = make_article(headline="BJP sweeps local polls", content="Neutral text.")
        docs = build_monthly_documents([article], lexicons, HEADLINE)
        month = MonthKey(2010, 1)
        assert len(get_document(docs, month, "bjp", HEADLINE).units) == 1
        assert len(get_document(docs, month, "congress", HEADLINE).units) == 0

    def test_dual_mention_in_both(self, lexicons):
        article = make_article(content="BJP blamed Congress. Unrelated line.")
        docs = build_monthly_documents([article], lexicons, CONTENT)
        month = MonthKey(2010, 1)
        bjp_doc = get_document(docs, month, "bjp", CONTENT)
        congress_doc = get_document(docs, month, "congress", CONTENT)
        assert len(bjp_doc.units) == 1 and len(congress_doc.units) == 1
        assert bjp_doc.units[0].text == congress_doc.units[0].text

    def test_sentence_counting(self, lexicons):
        article = make_article(
            published="2014-05-10",
            content="BJP gained ground. BJP held a rally. Nothing here.",
        )
        docs = build_monthly_documents([article], lexicons, CONTENT)
        doc = get_document(docs, MonthKey(2014, 5), "bjp", CONTENT)
        assert len(doc.units) == 2
        assert doc.total_words == sum(u.word_count for u in doc.units)

    def test_bad_mode_rejected(self, lexicons):
        with pytest.raises(ConfigError):
            build_monthly_documents([], lexicons, "paragraph")

    def test_monotonic_under_addition(self, lexicons):
        first = make_article(id="a1", content="BJP spoke.")
        second = make_article(id="a2", content="Congress replied. BJP answered.")
        docs_one = build_monthly_documents([first], lexicons, CONTENT)
        docs_two = build_monthly_documents([first, second], lexicons, CONTENT)
        for key, doc in docs_one.items():
            texts = {(u.article_id, u.index) for u in doc.units}
            bigger = {(u.article_id, u.index) for u in docs_two[key].units}
            assert texts <= bigger

    def test_swap_lexicons_swaps_documents(self, lexicons):
        articles = [
            make_article(id="a1", headline="BJP wins", content="Congress protested."),
            make_article(id="a2", headline="Congress regroups", content="BJP celebrated."),
        ]
        swapped = [lexicons[1], lexicons[0]]
        for mode in (HEADLINE, CONTENT):
            docs = build_monthly_documents(articles, lexicons, mode)
            docs_swapped = build_monthly_documents(articles, swapped, mode)
            assert {k: [u.text for u in d.units] for k, d in docs.items()} == {
                k: [u.text for u in d.units] for k, d in docs_swapped.items()
            }

    def test_units_rematch_their_lexicon(self, lexicons, bundled_articles):
        sample = bundled_articles[:200]
        docs = build_monthly_documents(sample, lexicons, CONTENT)
        by_id = {lex.party_id: lex for lex in lexicons}
        for (_, party_id), doc in docs.items():
            for unit in doc.units:
                assert party_id in match_parties(list(unit.tokens), [by_id[party_id]])

    def test_order_insensitive(self, lexicons, bundled_articles):
        sample = list(bundled_articles[:120])
        forward = build_monthly_documents(sample, lexicons, CONTENT)
        backward = build_monthly_documents(list(reversed(sample)), lexicons, CONTENT)
        assert forward.keys() == backward.keys()
        for key in forward:
            assert [u.text for u in forward[key].units] == [u.text for u in backward[key].units]


@given(
    st.lists(
        st.sampled_from(["BJP", "Congress", "voters", "rally", "NDA", "spoke"]),
        min_size=1,
        max_size=12,
    )
)
def test_match_parties_subset_of_token_vocab(tokens):
    lexicons = [
        PartyLexicon("bjp", ("BJP", "NDA")),
        PartyLexicon("congress", ("Congress",)),
    ]
    found = match_parties(tokens, lexicons)
    expected = set()
    if "BJP" in tokens or "NDA" in tokens:
        expected.add("bjp")
    if "Congress" in tokens:
        expected.add("congress")
    assert found == expected
