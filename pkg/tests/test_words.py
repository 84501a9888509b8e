from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectradim.errors import InvalidInputError
from spectradim.words import ForbiddenSet, Word, as_word, contains_factor, reduce, reverse

word_text = st.text(alphabet="12", min_size=1, max_size=6)


def avoiding(words, n):
    return {"".join(t) for t in product("12", repeat=n)
            if not any(w in "".join(t) for w in words)}


def test_parse_with_center():
    w = Word.parse("12*111122")
    assert w.digits == (1, 2, 1, 1, 1, 1, 2, 2)
    assert w.center == 1
    assert w.left == (1,)
    assert w.right == (1, 1, 1, 1, 2, 2)
    assert str(w) == "12*111122"


def test_parse_rejects_other_digits():
    with pytest.raises(InvalidInputError):
        Word.parse("1231")


def test_reverse_mirrors_center():
    w = reverse("21222")
    assert w.text == "22212"
    c = reverse(Word.parse("212*11"))
    assert str(c) == "112*12"


def test_contains_factor():
    assert contains_factor("2112112", "121")
    assert not contains_factor("2211", "121")


def test_worked_example_reduction():
    saved = ["1121112*111212", "2121112*111211", "2121112*11121", "121112*111212",
             "112*12", "212*11", "212*1", "12*12"]
    fs = ForbiddenSet.of(saved)
    assert set(reduce(fs).texts) == {"1212", "2121"}


def test_forbidden_set_dedupes_and_orders():
    fs = ForbiddenSet.of(["121", "212", "121"])
    assert [w.text for w in fs] == ["121", "212"]
    assert fs.reversal_closed
    assert not ForbiddenSet.of(["21222"]).reversal_closed
    assert ForbiddenSet.of(["21222"]).closure().reversal_closed


@settings(max_examples=60)
@given(st.lists(word_text, min_size=1, max_size=6))
def test_reduce_idempotent(texts):
    fs = ForbiddenSet.of(texts)
    once = reduce(fs)
    assert reduce(once).sorted_texts() == once.sorted_texts()


@settings(max_examples=40, deadline=None)
@given(st.lists(word_text, min_size=1, max_size=5))
def test_reduce_preserves_language(texts):
    fs = ForbiddenSet.of(texts)
    red = reduce(fs)
    assert avoiding(fs.texts, 10) == avoiding(red.texts, 10)


def test_reduce_language_exhaustive_length_12():
    fs = ForbiddenSet.of(["1121112*111212", "2121112*111211", "12*12", "212*1", "121112"])
    assert avoiding(fs.texts, 12) == avoiding(reduce(fs).texts, 12)


def test_as_word_accepts_tuples():
    assert as_word((1, 2, 2)).text == "122"
