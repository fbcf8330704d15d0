"""
Orbifold groups of two lattice triangles
========================================

Both triangles below give weighted projective planes. Whether some removal
order avoids every singular point depends on the edge lengths.
"""

from itertools import permutations

from toricstrata import corpus, find_retraction
from toricstrata.retraction import InvalidHint
from toricstrata.singularity import is_divisive, is_divisive_sequence

for name in ("triangle_1_2", "triangle_2_3"):
    P = corpus(name)
    print(name, [tuple(int(x) for x in v) for v in P.vertices])
    for order in permutations(range(3)):
        try:
            seq = find_retraction(P, order)
        except InvalidHint:
            continue
        groups = [str(d.group) for d in is_divisive_sequence(P, seq).steps]
        print("  order", order, "groups", groups)
    verdict = is_divisive(P)
    print("  divisive:", verdict.divisive, "witness:", verdict.witness.order if verdict.witness else None)
