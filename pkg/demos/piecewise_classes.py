"""
Piecewise polynomials on the Gelfand-Zetlin fan
===============================================

A class assigns a polynomial to each vertex. Three independent checks decide
membership: divisibility along edges, agreement on walls of the normal fan,
and agreement on every shared cone.
"""

from toricstrata import corpus, gkm_graph, hilbert_function
from toricstrata.cohomology import free_module_dims, gkm_check_H, poincare_from_hilbert, pp_check
from toricstrata.io import corpus_element, point_str
from toricstrata.retraction import betti_numbers, find_retraction
from toricstrata.symbolic import parse

P = corpus("gz3")
G = gkm_graph(P)
for e in G.edges:
    print(f"edge {point_str(P.vertices[e.v])} -- {point_str(P.vertices[e.w])}  weight {e.weight}")

x = corpus_element("table1_row4", P.num_vertices)
print("row 4:", [str(p) for p in x.assignments])
print("gkm:", gkm_check_H(G, x, "Z") == [], " walls:", pp_check(P, x, "walls") == [])

# break it at one vertex
y = x.replace(5, x[5] + parse("u1", ["u1", "u2", "u3"]))
for v in gkm_check_H(G, y):
    print(v)

# graded dimensions against the free-module count
dims = hilbert_function(P, 4)
b = betti_numbers(find_retraction(P))
print("hilbert:", dims)
print("free module:", free_module_dims(b, 3, 4))
print("recovered:", poincare_from_hilbert(P, dims))
