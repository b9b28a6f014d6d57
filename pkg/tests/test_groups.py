import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles as O
from conftest import F2, PATH, PENTAGON, Z, ZxZ
from rdlab import (BackendMismatch, ConfigError, CyclicGroup, Element, FreeGroup, GraphProduct,
                   NotAFactorization, WeightedAbelianGroup, WrongBackend, config_digest,
                   group_from_config, inverse, is_factorization, length, load_group, multiply,
                   syllable_length)
from strategies import free_elements, gp_elements, syllable_words, vectors

a, b = F2.generators()
Z3w = WeightedAbelianGroup((3, 3, 3))


def pz(*syllables):
    """Path-graph element from (vertex, exponent) pairs."""
    return PATH.word([(v, (e,)) for v, e in syllables])


# ---------------------------------------------------------------- free

def test_free_product_reduces():
    assert multiply(a * b, ~b * a) == a * a
    assert str(a * a) == "a1^2"


def test_free_inverse_and_length():
    assert inverse(a * b) == ~b * ~a
    assert length(a * a * ~b) == 3


def test_free_parse_roundtrip():
    g = F2.parse("a1^2 a2^-1 a1")
    assert str(g) == "a1^2 a2^-1 a1"
    assert F2.parse(str(g)) == g
    assert F2.parse("1") == F2.identity


def test_rank_one_generator_is_a():
    assert str(FreeGroup(1).word([1, 1])) == "a^2"


@given(free_elements(), free_elements())
def test_free_matches_naive_reduction(g, h):
    def letters(x):
        return "".join("ab"[abs(c) - 1] if c > 0 else "AB"[abs(c) - 1] for c in x.payload)
    assert letters(g * h) == O.free_reduce_naive(letters(g) + letters(h))


# ------------------------------------------------------------- abelian

def test_weighted_examples():
    v = Z3w.vector(1, -2, 0)
    assert inverse(v) == Z3w.vector(-1, 2, 0)
    assert length(v) == 9
    assert str(v) == "(1,-2,0)"


def test_rational_weights_are_exact():
    G = WeightedAbelianGroup(("3/2", 1))
    assert G.vector(1, 1).length == Fraction(5, 2)
    assert G.vector(2, 0).length == 3 and isinstance(G.vector(2, 0).length, int)


def test_weight_below_one_rejected():
    with pytest.raises(ValueError):
        WeightedAbelianGroup((1, 0.5))


def test_cyclic_group():
    C = CyclicGroup(5)
    t = C.parse("t")
    assert C.parse("t^4") == ~t
    assert (t * t * t).length == 2
    assert str(t * t * t * t * t) == "1"


# ----------------------------------------------------- graph products

def test_path_multiply_example():
    assert multiply(pz((0, 1), (1, 1)), pz((1, -1), (2, 1))) == pz((0, 1), (2, 1))


def test_path_length_example():
    assert length(pz((0, 1), (2, 1), (1, 1))) == 6


def test_syllable_length_examples():
    assert syllable_length(PATH.identity) == 0
    assert syllable_length(pz((0, 1), (1, 2))) == 2
    assert syllable_length(pz((0, 1), (1, 1), (1, -1), (2, 1))) == 2


def test_syllable_length_needs_graph_product():
    with pytest.raises(WrongBackend):
        syllable_length(a)


def test_is_factorization_examples():
    au, av = pz((0, 1)), pz((1, 1))
    assert is_factorization(au * av, [au, av])
    assert not is_factorization(au, [au * av, ~av])
    with pytest.raises(NotAFactorization):
        is_factorization(au, [av])


def test_graph_product_serialization():
    G = GraphProduct.build(3, [(0, 1)], [FreeGroup(1)] * 3)
    g = G.word([(0, (1, 1)), (2, (-1,))])
    assert str(g) == "v0:a^2 | v2:a^-1"
    assert G.parse(str(g)) == g


def test_backend_mismatch():
    with pytest.raises(BackendMismatch):
        a * Z.vector(1)


@given(syllable_words(max_len=6))
def test_normal_form_matches_shuffle_oracle(word):
    assert PENTAGON.reduce(word) == O.gp_normal_form(PENTAGON, word)


@given(syllable_words(max_len=5))
def test_length_matches_brute_force(word):
    g = Element(PENTAGON, PENTAGON.reduce(word))
    assert g.length == O.gp_length(PENTAGON, word)
    assert syllable_length(g) == O.gp_syllable_length(PENTAGON, word)


@given(syllable_words(max_len=8), st.randoms(use_true_random=False))
def test_confluence_under_random_shuffles(word, rnd):
    # apply random legal swaps of commuting neighbours; the normal form must not move
    w = list(word)
    for _ in range(20):
        if len(w) < 2:
            break
        i = rnd.randrange(len(w) - 1)
        if PENTAGON.adjacent(w[i][0], w[i + 1][0]):
            w[i], w[i + 1] = w[i + 1], w[i]
    assert PENTAGON.reduce(w) == PENTAGON.reduce(word)


@given(syllable_words())
def test_canonicalization_idempotent(word):
    x = PENTAGON.reduce(word)
    assert PENTAGON.reduce(x) == x


@given(gp_elements(), gp_elements(), gp_elements())
def test_graph_product_group_laws(g, h, k):
    assert (g * h) * k == g * (h * k)
    assert g * ~g == PENTAGON.identity
    assert g * PENTAGON.identity == g
    assert (g * h).length <= g.length + h.length
    assert (~g).length == g.length
    assert syllable_length(g * h) <= syllable_length(g) + syllable_length(h)


@given(free_elements(), free_elements(), free_elements())
def test_free_group_laws(g, h, k):
    assert (g * h) * k == g * (h * k)
    assert (g * h).length <= g.length + h.length
    assert (~g).length == g.length


@given(vectors(Z3w), vectors(Z3w))
def test_abelian_group_laws(g, h):
    assert g * h == h * g
    assert (g * h).length <= g.length + h.length
    assert (g * ~g).is_identity()


@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20))
def test_complete_graph_is_direct_product(x1, y1, x2, y2):
    A, B = ZxZ.vertex_groups

    def pair(x, y):
        return ZxZ.word([(0, A.word([1] * x if x > 0 else [-1] * -x)),
                         (1, B.word([1] * y if y > 0 else [-1] * -y))])

    g, h = pair(x1, y1), pair(x2, y2)
    assert g * h == pair(x1 + x2, y1 + y2)
    assert ZxZ.component(g * h, 0) == A.word([1] * (x1 + x2) if x1 + x2 > 0 else [-1] * -(x1 + x2))
    lam = (x1 != 0) + (y1 != 0)
    assert g.length == abs(x1) + abs(y1) + lam


# -------------------------------------------------------------- config

def test_config_accepts_free():
    assert group_from_config({"type": "free", "rank": 2}) == F2


def test_config_rejects_half_weight():
    with pytest.raises(ConfigError) as e:
        group_from_config({"type": "weighted_abelian", "weights": [1, 0.5]})
    assert "below 1" in str(e.value)


def test_config_rejects_duplicate_edge_and_lists_all_issues():
    cfg = {"type": "graph_product", "vertices": 3, "edges": [[0, 1], [1, 0], [2, 2]],
           "vertex_groups": [{"type": "free", "rank": 1}] * 2}
    with pytest.raises(ConfigError) as e:
        group_from_config(cfg)
    text = " ".join(e.value.issues)
    assert "duplicate edge" in text and "loop" in text and "exactly 3" in text


def test_config_rejects_unknown_keys_and_nesting():
    nested = {"type": "graph_product", "vertices": 1, "edges": [],
              "vertex_groups": [{"type": "free", "rank": 1}]}
    cfg = {"type": "graph_product", "vertices": 1, "edges": [], "vertex_groups": [nested],
           "colour": 1}
    with pytest.raises(ConfigError) as e:
        group_from_config(cfg)
    assert len(e.value.issues) == 2


def test_config_roundtrip_and_digest(tmp_path):
    p = tmp_path / "g.json"
    p.write_text(json.dumps(PENTAGON.config()))
    g = load_group(p)
    assert g == PENTAGON
    assert config_digest(g) == config_digest(PENTAGON)
    assert config_digest(g) != config_digest(F2)


def test_load_group_bad_json(tmp_path):
    p = tmp_path / "g.json"
    p.write_text("{")
    with pytest.raises(ConfigError):
        load_group(p)
