import pytest

from frc.backends import ElicitationRequest, Lexicon, LexiconBackend, lexicon_membership
from frc.backends.lexicon import entry_hits, units
from frc.errors import MalformedResponse
from frc.fuzzy import BINARY, ClassSet
from frc.text import clauses, find_phrases, leading_marker, normalize, tokenize


class TestText:
    def test_tokens_are_lowercase_with_offsets(self):
        toks = tokenize("The Food wasn't GOOD")
        assert [t.text for t in toks] == ["the", "food", "wasn't", "good"]
        assert toks[3].start == 16 and toks[3].end == 20

    def test_cjk_one_char_per_token(self):
        assert [t.text for t in tokenize("菜很好吃")] == ["菜", "很", "好", "吃"]

    @pytest.mark.parametrize("text,expected", [
        ("The food was good, but the service was slow.",
         ["The food was good", "but the service was slow"]),
        ("Though dissatisfied, still acceptable.", ["Though dissatisfied", "still acceptable"]),
        ("good but bad", ["good", "but bad"]),
        ("菜很好吃，但是服务很慢。", ["菜很好吃", "但是服务很慢"]),
    ])
    def test_clauses(self, text, expected):
        assert clauses(text) == expected

    def test_leading_marker(self):
        assert leading_marker("but the service was slow") == "but"
        assert leading_marker("但是服务很慢") == "但是"
        assert leading_marker("the service") is None

    def test_normalize(self):
        assert normalize("  Very   GOOD! ") == "very good"
        assert normalize("好 吃") == "好吃"

    def test_find_phrases_prefers_longer(self):
        found = find_phrases("It was not bad at all", ["bad", "not bad"])
        assert [(p, s) for s, _, p in found] == [("not bad", 7)]


class TestLexiconMembership:
    """Hand-checked values under the small fixture lexicon."""

    @pytest.mark.parametrize("text,expected", [
        ("good", (0.6, 0.0)),
        ("very good", (0.9, 0.0)),
        ("not good", (0.0, 0.6)),
        ("slightly good", (0.3, 0.0)),
        ("extremely terrible", (0.0, 1.0)),  # 0.9 * 1.8 clamped
        ("not very good", (0.0, 0.9)),
        ("unknown words only", (0.0, 0.0)),
        ("非常好吃", (1.0, 0.0)),  # 0.7 * 1.8 clamped
        ("不好吃", (0.0, 0.7)),
    ])
    def test_values(self, toy_lexicon, text, expected):
        got = lexicon_membership(text, BINARY, toy_lexicon)
        assert got.values == pytest.approx(expected, abs=1e-12)

    def test_window_is_two_units(self, toy_lexicon):
        # "very" is three units away from "good"
        assert lexicon_membership("very much so good", BINARY, toy_lexicon).values == (0.6, 0.0)

    def test_modifier_does_not_cross_clause(self, toy_lexicon):
        assert lexicon_membership("very, good", BINARY, toy_lexicon).values == (0.6, 0.0)

    def test_max_over_entries(self, toy_lexicon):
        assert lexicon_membership("good and great but slow", BINARY,
                                  toy_lexicon).values == (0.8, 0.5)

    def test_multiword_modifier_is_one_unit(self, toy_lexicon):
        us = units(tokenize("a bit slow"), toy_lexicon)
        assert [u.kind for u in us] == ["modifier", "entry"]
        assert lexicon_membership("a bit slow", BINARY, toy_lexicon).values == pytest.approx((0.0, 0.3))

    def test_token_list_input(self, toy_lexicon):
        assert lexicon_membership(["very", "good"], BINARY, toy_lexicon).values == pytest.approx((0.9, 0.0))

    @pytest.mark.parametrize("bad", [{"entries": {"x": {"positive": 1.5}}},
                                     {"modifiers": {"x": 0.0}}, {"modifiers": {"x": 2.5}}])
    def test_validation(self, bad):
        with pytest.raises(ValueError):
            Lexicon.from_dict(bad)

    def test_raising_strength_never_lowers_degrees(self, toy_lexicon):
        texts = ["good", "not good", "very good but slow", "slightly good, terrible"]
        stronger = toy_lexicon.with_entry("good", {"positive": 0.75})
        for t in texts:
            a = lexicon_membership(t, BINARY, toy_lexicon)
            b = lexicon_membership(t, BINARY, stronger)
            assert all(y >= x for x, y in zip(a, b))

    def test_round_trip(self, toy_lexicon):
        assert Lexicon.from_dict(toy_lexicon.to_dict()) == toy_lexicon

    def test_entry_span_covers_modifiers(self, toy_lexicon):
        text = "The food was not very good"
        (hit,) = entry_hits(text, BINARY, toy_lexicon)
        assert text[slice(*hit.span())] == "not very good"
        assert hit.negated and hit.factor == 1.5


class TestLexiconBackend:
    def ask(self, backend, kind, text, classes=BINARY, **ctx):
        return backend.elicit(ElicitationRequest(kind, text, classes, context=ctx))

    def test_dp_great_food(self, toy_backend):
        assert self.ask(toy_backend, "dp_label", "great food!") == "positive"

    def test_dissatisfied_leans_negative(self, toy_backend):
        mu = self.ask(toy_backend, "keyword_membership", "dissatisfied")
        assert mu.of("negative", BINARY) > mu.of("positive", BINARY)

    def test_dp_without_evidence(self):
        empty = LexiconBackend(Lexicon(), "empty")
        with pytest.raises(MalformedResponse):
            self.ask(empty, "dp_label", "meh")
        with_other = ClassSet.of("positive", "negative", includes_other=True)
        assert self.ask(empty, "dp_label", "meh", with_other) == "other"

    def test_cot_on_simplex(self, toy_backend):
        for text in ["great", "good but bad", "nothing here"]:
            r = self.ask(toy_backend, "cot_probabilities", text)
            assert abs(sum(r.probabilities) - 1.0) <= 1e-6

    def test_cot_balanced_conflict(self, toy_backend):
        r = self.ask(toy_backend, "cot_probabilities", "good but bad")
        assert r.probabilities == pytest.approx((0.5, 0.5))

    def test_keyword_extraction_spans(self, toy_backend):
        got = self.ask(toy_backend, "keyword_extraction", "The food was not good but very tasty")
        assert got == ["not good", "very tasty"]

    def test_weights_follow_evidence_and_markers(self, toy_backend):
        subs = [{"text": "Though dissatisfied", "memberships": {"positive": 0.0, "negative": 0.6}},
                {"text": "still acceptable", "memberships": {"positive": 0.4, "negative": 0.0}}]
        r = self.ask(toy_backend, "weight_assignment", "x", subunits=subs)
        assert r.raw == ((0.005, 1.0), (0.5, 0.01))
        assert len(r.notes) == 2 and "concessive" in r.notes[0]

    def test_deterministic(self, toy_backend):
        a = self.ask(toy_backend, "keyword_extraction", "good, not bad, very slow")
        b = self.ask(toy_backend, "keyword_extraction", "good, not bad, very slow")
        assert a == b
