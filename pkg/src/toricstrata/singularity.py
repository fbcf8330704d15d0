"""Local lattice data of a retraction: projected normals and orbifold groups.

At a step with free vertex ``v`` and maximal face ``E`` of dimension ``k``,
the lattice is projected along the saturated span of the normals of the
facets containing ``E``, which leaves ``Z^k``. The images of the normals of
the ``k`` facets cutting out ``v`` inside ``E`` generate a finite-index
sublattice; the quotient is the orbifold group of the step. A sequence is
divisive when every such group is trivial.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .linalg import (
    FiniteAbelianGroup,
    abelian_quotient,
    quotient_projection,
    rank,
    saturate,
)
from .polytope import LatticePolytope, is_simple
from .retraction import (
    NotAlmostSimple,
    RetractionSequence,
    RetractionStep,
    _search,
    find_retraction,
)


class DegenerateStep(ValueError):
    pass


@dataclass(frozen=True)
class OrbifoldDatum:
    j: int
    vertex: int
    cutting_facets: tuple
    mus: tuple
    group: FiniteAbelianGroup


@dataclass(frozen=True)
class SingularityReport:
    steps: tuple
    divisive_for_sequence: bool
    simple: bool


@dataclass(frozen=True)
class DivisiveVerdict:
    divisive: bool
    witness: RetractionSequence | None
    explored: int

    def __bool__(self):
        return self.divisive


def cutting_facets(P: LatticePolytope, step: RetractionStep) -> tuple:
    """Facets ``F_1..F_k`` with ``v = ∩ (E ∩ F_i)``, one per facet of ``E`` at ``v``.

    When several facets of ``P`` cut the same facet of ``E`` the one with the
    smallest index is taken.
    """
    L = P.face_lattice
    E = L.faces[step.max_face]
    if step.k == 0:
        return ()
    chosen = {}
    for fi in P.facets_at(step.vertex):
        if fi in E.facet_set:
            continue
        cut = E.vertex_set & frozenset(v for v in range(P.num_vertices) if P.incidence[v][fi])
        if L.faces[L.face_index(cut)].dim == step.k - 1:
            chosen.setdefault(cut, fi)
    facets = tuple(sorted(chosen.values()))
    if len(facets) != step.k:
        raise DegenerateStep(f"expected {step.k} cutting facets at vertex {step.vertex}, found {len(facets)}")
    return facets


def step_projection(P: LatticePolytope, step: RetractionStep) -> tuple:
    """``(projection, mus)`` for one retraction step.

    The images of the primitive normals are kept as they are; dividing them
    by their content would change the group.
    """
    n = P.ambient_dim
    E = P.face_lattice.faces[step.max_face]
    normals = [P.facets[i].normal for i in sorted(E.facet_set)]
    proj = quotient_projection(saturate(normals, n), n)
    mus = tuple(proj @ P.facets[i].normal for i in cutting_facets(P, step))
    if mus and rank(mus) < len(mus):
        raise DegenerateStep("projected normals are linearly dependent")
    return proj, mus


def orbifold_group(P: LatticePolytope, step: RetractionStep) -> FiniteAbelianGroup:
    _, mus = step_projection(P, step)
    return abelian_quotient(mus, step.k)


def is_divisive_sequence(P: LatticePolytope, seq: RetractionSequence) -> SingularityReport:
    data = []
    ell = len(seq.steps)
    for pos, step in enumerate(seq.steps):
        _, mus = step_projection(P, step)
        data.append(
            OrbifoldDatum(
                j=ell - pos,
                vertex=step.vertex,
                cutting_facets=cutting_facets(P, step),
                mus=mus,
                group=abelian_quotient(mus, step.k),
            )
        )
    return SingularityReport(tuple(data), all(d.group.is_trivial for d in data), is_simple(P))


def is_divisive(P: LatticePolytope) -> DivisiveVerdict:
    """Search for a retraction sequence whose orbifold groups are all trivial."""
    find_retraction(P)  # raises NotAlmostSimple
    found, explored = _search(P, accept=lambda C, step: orbifold_group(P, step).is_trivial)
    return DivisiveVerdict(bool(found), found[0] if found else None, explored)


@lru_cache(maxsize=64)
def divisive_cached(P: LatticePolytope) -> bool:
    try:
        return is_divisive(P).divisive
    except NotAlmostSimple:
        return False

