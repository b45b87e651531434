import pytest

from leavitt import (
    ParseError,
    Path,
    classify_word,
    generator_word,
    ghost_sort_key,
    parse_graph,
    parse_path,
    path_sort_key,
    periodic_word,
    tail_equivalent,
    thue_morse_word,
)
from leavitt.errors import PreconditionError

from conftest import ROSE2, ROSEINF, SINK3


def test_parse_graph_sections_and_comments():
    g = parse_graph(
        """
        # a rose with two petals
        [vertices]
        v
        [arrows]
        x1: v -> v
        x2: v -> v   # second petal
        """
    )
    assert list(g.vertices) == ["v"]
    assert sorted(a.name for a in g.out_arrows("v")) == ["x1", "x2"]


def test_parse_graph_rejects_dangling_arrow():
    with pytest.raises(ParseError):
        parse_graph("[vertices]\nv\n[arrows]\ne: v -> w\n")


def test_vertex_classification(sink3, roseinf, rose2):
    assert sink3.classify_vertex("w") == "sink"
    assert sink3.classify_vertex("u") == "regular"
    assert sink3.classify_vertex("v") == "regular"
    assert roseinf.classify_vertex("v") == "infinite_emitter"
    assert rose2.classify_vertex("v") == "regular"
    assert sink3.is_sink("w")


def test_special_arrow_is_least_named(rose2, sink3):
    assert rose2.special_arrow("v").name == "x1"
    assert sink3.special_arrow("v").name == "g"


def test_path_operations(rose2):
    p = parse_path(rose2, "x1.x2")
    assert (p.source, p.target, len(p)) == ("v", "v", 2)
    assert str(p.drop_last()) == "x1"
    assert str(p.drop_first()) == "x2"
    q2 = p.concat(parse_path(rose2, "x1"))
    assert str(q2) == "x1.x2.x1"
    vert = Path.vertex("v")
    assert vert.is_vertex and len(vert) == 0
    assert str(vert.concat(p)) == str(p.concat(vert)) == "x1.x2"


def test_parse_path_rejects_unknown_arrow(rose2):
    with pytest.raises(ParseError):
        parse_path(rose2, "x1.zz")


def test_sort_keys_order_by_length_first(rose2):
    paths = sorted(rose2.all_paths(3), key=path_sort_key)
    lens = [len(p) for p in paths]
    assert lens == sorted(lens)
    # the ghost order compares reversed words, so x2.x1 precedes x1.x2
    a = parse_path(rose2, "x2.x1")
    b = parse_path(rose2, "x1.x2")
    assert ghost_sort_key(a) < ghost_sort_key(b)
    assert path_sort_key(b) < path_sort_key(a)


def test_all_paths_counts(rose2, sink3):
    assert len(rose2.all_paths(3)) == 1 + 2 + 4 + 8
    # sink graph: paths are constrained by the cycle shape
    names = {str(p) for p in sink3.all_paths(2)}
    assert "e.g" in names and "g.e" in names and "e.h" in names
    assert "h.e" not in names


def test_family_cap_slices_infinite_graphs():
    g = parse_graph(ROSEINF)
    assert len(g.all_paths(2, 2)) == 7
    assert len(g.all_paths(2, 3)) == 13
    arrows = g.all_arrows(4)
    assert [a.index for a in arrows] == [0, 1, 2, 3]
    assert str(arrows[0]) == "f[0]"


def test_periodic_word_shift_law(rose2):
    c = parse_path(rose2, "x1.x2")
    w = periodic_word(c)
    assert w.source == "v"
    assert [a.name for a in w.window(5)] == ["x1", "x2", "x1", "x2", "x1"]
    assert [a.name for a in w.shift(1).window(4)] == ["x2", "x1", "x2", "x1"]
    # shifting by the period returns the same word
    assert w.shift(2).window(6) == w.window(6)
    kind, cycle = classify_word(w)
    assert kind == "rational"
    assert str(cycle) == "x1.x2"


def test_periodic_word_requires_closed_path(sink3):
    with pytest.raises(PreconditionError):
        periodic_word(parse_path(sink3, "e.h"))


def test_thue_morse_is_witnessed_irrational(rose2):
    x1, x2 = sorted(rose2.out_arrows("v"), key=lambda a: a.key)
    w = thue_morse_word(rose2, x1, x2)
    names = [a.name for a in w.window(8)]
    assert names == ["x1", "x2", "x2", "x1", "x2", "x1", "x1", "x2"]
    kind, _ = classify_word(w)
    assert kind == "irrational_witnessed"
    # the shift of an aperiodic word stays tail equivalent to it
    assert tail_equivalent(w, w.shift(3))


def test_generator_word_with_prefix(rose2):
    x1, x2 = sorted(rose2.out_arrows("v"), key=lambda a: a.key)

    def bits(i):
        return x2 if i % 3 == 0 else x1

    w = generator_word("mod3", bits, "v")
    assert [a.name for a in w.window(4)] == ["x2", "x1", "x1", "x2"]
    w2 = w.prepend(x1)
    assert [a.name for a in w2.window(3)] == ["x1", "x2", "x1"]
    assert tail_equivalent(w, w2)


def test_tail_equivalence_distinguishes_words(rose2):
    wa = periodic_word(parse_path(rose2, "x1"))
    wb = periodic_word(parse_path(rose2, "x2"))
    assert not tail_equivalent(wa, wb)
    assert tail_equivalent(wa, wa.prepend(parse_path(rose2, "x2").arrows[0]))
