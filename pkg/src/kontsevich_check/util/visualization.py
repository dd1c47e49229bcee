import logging

from graphviz import Digraph

from kontsevich_check.core.diagram import CIRCLE


def diagram_graph(d, name='diagram'):
    """Graphviz picture of a diagram: skeleton components as bold chains of
    their univalent vertices, diagram edges dashed."""
    dot = Digraph(name=name, comment=repr(d.skeleton))
    for ci, seq in enumerate(d.univalent):
        comp = d.skeleton.components[ci]
        with dot.subgraph(name='cluster_{}'.format(ci)) as sub:
            sub.attr(label='{} {}'.format(comp.kind, ci + 1), style='dotted')
            start = 'c{}_start'.format(ci)
            sub.node(start, '', shape='point')
            prev = start
            for v, s in seq:
                node_str = 'v{}'.format(v)
                # Reversed local orientation is drawn hollow.
                sub.node(node_str, str(v), shape='circle',
                         style='filled' if s > 0 else 'solid',
                         fillcolor='lightgrey')
                sub.edge(prev, node_str, penwidth='3', arrowhead='none')
                prev = node_str
            if comp.kind == CIRCLE:
                sub.edge(prev, start, penwidth='3')
            else:
                end = 'c{}_end'.format(ci)
                sub.node(end, '', shape='point')
                sub.edge(prev, end, penwidth='3')
    owner = d.owners()
    for v, hs in d.trivalent:
        dot.node('v{}'.format(v), 'w{}'.format(v), shape='triangle')
    for h, k in d.edges:
        dot.edge('v{}'.format(owner[h][0]), 'v{}'.format(owner[k][0]),
                 style='dashed', arrowhead='none', constraint='false')
    return dot


def render_diagram(d, fname):
    dot = diagram_graph(d, fname)
    dot.render(fname, view=False)
    logging.info("Wrote files %s and %s.pdf", fname, fname)
    return dot


def render_basis(basis, prefix):
    """One picture per basis diagram, named prefix_<index>."""
    return [render_diagram(d, '{}_{}'.format(prefix, i))
            for i, d in enumerate(basis.elements)]
