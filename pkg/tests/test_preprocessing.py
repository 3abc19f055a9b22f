import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elfkit.preprocessing import NameNormalizer, PreprocessMode, normalize_name, tokenize

LOWER = PreprocessMode.LOWER_ONLY
EXT = PreprocessMode.EXTENDED


class TestLowerOnly:
    def test_lowercases(self):
        assert normalize_name("Interproximal AB", LOWER) == "interproximal ab"

    def test_keeps_punctuation(self):
        assert normalize_name("A.B.C., Ltd.", LOWER) == "a.b.c., ltd."

    def test_unicode_aware(self):
        assert normalize_name("KÖNIGIN ÅSA", LOWER) == "königin åsa"


class TestExtended:
    @pytest.mark.parametrize(
        "raw, expected",
        [
            ("RUBICON TECHNOLOGY MANAGEMENT L.L.C.", "rubicon technology management llc"),
            ("Selbstfahrer Union G.m.b.H.", "selbstfahrer union gmbh"),
            ("LOCKWOOD RIVERFRONT HOTEL, LLC", "lockwood riverfront hotel llc"),
            ("Meyer & Müller GmbH & Co. KG", "meyer and muller gmbh and co kg"),
            ('Holding "Atlas" AG', "holding atlas ag"),
            ("ACME (Holdings) - North/South; Ltd.", "acme holdings north south ltd"),
            ("  Multi   Space\tName  ", "multi space name"),
            ("Grönwalls Lantbrukstjänst", "gronwalls lantbrukstjanst"),
            ("Crédit Agricole S.A.", "credit agricole sa"),
            ("A+B Logistik", "a+b logistik"),  # only padded " + " becomes "and"
            ("A + B Logistik", "a and b logistik"),
        ],
    )
    def test_harmonization(self, raw, expected):
        assert normalize_name(raw, EXT) == expected

    def test_non_latin_untouched(self):
        assert normalize_name("むつ小川原風力合同会社", EXT) == "むつ小川原風力合同会社"
        assert normalize_name("ООО «Вектор»", EXT) == "ооо вектор"  # Cyrillic kept, guillemets dropped

    def test_empty_only_when_no_alnum(self):
        assert normalize_name("-- ;; //", EXT) == ""
        assert normalize_name("x -", EXT) == "x"

    def test_trailing_nonalnum_stripped(self):
        assert normalize_name("Acme Corp...", EXT) == "acme corp"


@settings(max_examples=300)
@given(st.text(max_size=60))
def test_idempotent_both_modes(text):
    for mode in (LOWER, EXT):
        once = normalize_name(text, mode)
        assert normalize_name(once, mode) == once


@settings(max_examples=300)
@given(st.text(max_size=60))
def test_never_introduces_uppercase(text):
    for mode in (LOWER, EXT):
        out = normalize_name(text, mode)
        assert out == out.lower()


@settings(max_examples=300)
@given(st.text(max_size=60))
def test_extended_output_clean(text):
    out = normalize_name(text, EXT)
    assert not re.search(r"[-();/,]", out)
    assert "  " not in out
    assert out == out.strip()


class TestTokenize:
    def test_whitespace_split(self):
        assert tokenize("giant weilerswist g21 gmbh") == ["giant", "weilerswist", "g21", "gmbh"]

    def test_empty(self):
        assert tokenize("") == []

    def test_no_delimiters_single_token(self):
        assert tokenize("むつ小川原風力合同会社") == ["むつ小川原風力合同会社"]

    @given(st.text(max_size=60))
    def test_join_retokenize_fixpoint(self, text):
        tokens = tokenize(text)
        assert all(tokens), "no empty tokens"
        assert tokenize(" ".join(tokens)) == tokens


class TestMode:
    def test_from_string(self):
        assert PreprocessMode.from_string("lower") is LOWER
        assert PreprocessMode.from_string("extended") is EXT
        assert PreprocessMode.from_string(EXT) is EXT

    def test_unknown_mode_rejected(self):
        with pytest.raises(ValueError, match="unknown preprocessing mode"):
            PreprocessMode.from_string("fancy")


class TestNameNormalizer:
    def test_transform(self):
        out = NameNormalizer(mode="extended").fit([]).transform(["Foo G.m.b.H."])
        assert out == ["foo gmbh"]

    def test_sklearn_params(self):
        normalizer = NameNormalizer(mode="lower")
        assert normalizer.get_params() == {"mode": "lower"}
        normalizer.set_params(mode="extended")
        assert normalizer.transform(["A B"]) == ["a b"]

    def test_bad_mode_raises_on_fit(self):
        with pytest.raises(ValueError):
            NameNormalizer(mode="nope").fit(["x"])
