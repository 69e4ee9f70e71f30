from outerspine import textio
from outerspine.marked import MarkedGraph
from outerspine.retract_aut import PointedMarkedGraph, pointed_equivalent
from outerspine.retract_split import (SplittingBlueprint,
                                      default_retraction_data)
from outerspine.words import basis_word, word, identity_word
from outerspine import graphs


def test_word_roundtrip():
    w = word([1, -2, 3], 3)
    assert textio.parse_word(textio.print_word(w), 3) == w
    assert textio.print_word(identity_word(3)) == "1"
    assert textio.parse_word("1", 3) == identity_word(3)
    assert textio.parse_word("a1 a2^-1 a3", 3) == w


def test_graph_roundtrip():
    g = graphs.theta_graph()
    text = textio.print_graph(g)
    g2 = textio.parse_graph(text)
    assert g2.edges == g.edges
    assert g2.vertices == g.vertices
    assert textio.print_graph(g2) == text


def test_marked_roundtrip():
    G = MarkedGraph(graphs.theta_graph(), 0, [(1, -3), (2, -3)])
    text = textio.print_marked(G)
    G2 = textio.parse_marked(text)
    assert G2.marking == G.marking
    assert G2.basepoint == G.basepoint
    assert textio.print_marked(G2) == text


def test_pointed_roundtrip():
    x = PointedMarkedGraph.pointed_rose(3)
    text = textio.print_marked(x, pointed=True)
    assert "basepoint: v0" in text
    x2 = textio.parse_marked(text, pointed=True)
    assert pointed_equivalent(x, x2) is not None
    assert textio.print_marked(x2, pointed=True) == text


def test_blueprint_roundtrip():
    bp = SplittingBlueprint("loop",
                            ((basis_word(1, 3), basis_word(2, 3)),), 3, 3)
    data = default_retraction_data(bp)
    text = textio.print_blueprint(data)
    data2 = textio.parse_blueprint(text)
    assert data2.blueprint == bp
    assert data2.rays == data.rays
    assert textio.print_blueprint(data2) == text


def test_blueprint_literal_example():
    text = ('splitting { type: loop; vertex A = a1 a2; stable: a3; '
            'ray1: prefix "", period a3; ray2: prefix "", period a3^-1 }')
    data = textio.parse_blueprint(text)
    assert data.blueprint.kind == "loop"
    assert data.blueprint.stable == 3
    assert data.rays[0].period == basis_word(3, 3)
    assert data.rays[1].period == basis_word(3, 3).inverse()


def test_segment_blueprint_roundtrip():
    bp = SplittingBlueprint("segment",
                            ((basis_word(1, 3),),
                             (basis_word(2, 3), basis_word(3, 3))), 0, 3)
    data = default_retraction_data(bp)
    text = textio.print_blueprint(data)
    data2 = textio.parse_blueprint(text)
    assert data2.blueprint == bp


def test_derive_basepoint():
    G = MarkedGraph(graphs.theta_graph(), 0, [(1, -3), (2, -3)])
    text = textio.print_marked(G)  # no basepoint line for unpointed
    assert "basepoint" not in text
    G2 = textio.parse_marked(text)
    assert G2.basepoint == 0
