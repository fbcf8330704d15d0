"""
Retracting the Gelfand-Zetlin polytope
======================================

The 3-dimensional Gelfand-Zetlin polytope has seven vertices, one of them
(1,1,1) sitting on four facets. It is not simple, but it can still be taken
apart one free vertex at a time.
"""

from toricstrata import corpus, find_retraction, is_simple
from toricstrata.io import point_str
from toricstrata.retraction import betti_numbers
from toricstrata.singularity import is_divisive_sequence

P = corpus("gz3")
print("f-vector:", P.face_lattice.f_vector)
print("simple:", is_simple(P))

# replay a removal order by vertex index
order = [0, 1, 2, 5, 3, 4, 6]
seq = find_retraction(P, order)
L = P.face_lattice
for step in seq.steps:
    E = sorted(L.faces[step.max_face].vertex_set)
    print(f"remove {point_str(P.vertices[step.vertex])}  k={step.k}  E={E}")

# each step contributes a cell of real dimension 2k
print(betti_numbers(seq))

# at every step the projected normals form a lattice basis, so no orbifold points
report = is_divisive_sequence(P, seq)
for d in report.steps:
    print(f"j={d.j} mus={d.mus} K={d.group}")
print("divisive along this order:", report.divisive_for_sequence)
