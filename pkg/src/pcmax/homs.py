"""Group maps given by generator images, with homomorphism validation.

A GroupMap stores one image per generator of its domain presentation and a
validation state:

    unvalidated -> homomorphism -> endomorphism -> automorphism
                                                -> inner

Validation means every defining relation of the domain maps to an equality
in the codomain; it is re-checkable idempotently.  Composition reads left
to right: `f.then(g)` applies f first.
"""

from __future__ import annotations

from .errors import HomCheckFailed, PresentationError
from .pcgroup import Element, PcPresentation

_KIND_RANK = {"unvalidated": 0, "homomorphism": 1, "endomorphism": 2,
              "automorphism": 3, "inner": 3}


class GroupMap:
    __slots__ = ("domain", "codomain", "images", "kind", "inner_by",
                 "derivation", "_pow_cache")

    def __init__(self, domain: PcPresentation, images, kind="unvalidated",
                 codomain: PcPresentation | None = None, inner_by=None):
        self.domain = domain
        self.codomain = codomain or domain
        images = tuple(images)
        if len(images) != domain.n:
            raise PresentationError("one image per generator is required")
        self.images = images
        self.kind = kind
        self.inner_by = inner_by
        self.derivation = None
        self._pow_cache = None

    # -- evaluation ---------------------------------------------------------

    def _image_power(self, idx: int, e: int) -> Element:
        if self._pow_cache is None:
            self._pow_cache = [None] * self.domain.n
        cache = self._pow_cache[idx]
        if cache is None:
            cache = [self.codomain.identity, self.images[idx]]
            self._pow_cache[idx] = cache
        while len(cache) <= e:
            cache.append(self.codomain.multiply(cache[-1], self.images[idx]))
        return cache[e]

    def evaluate(self, x: Element) -> Element:
        acc = self.codomain.identity
        for idx, e in enumerate(x):
            if e:
                acc = self.codomain.multiply(acc, self._image_power(idx, e))
        return acc

    def then(self, other: "GroupMap") -> "GroupMap":
        """Composition, self first: x -> other(self(x))."""
        if other.domain is not self.codomain:
            raise PresentationError("composition domains do not match")
        images = tuple(other.evaluate(im) for im in self.images)
        if self.kind == "inner" and other.kind == "inner":
            g = self.codomain.multiply(self.inner_by, other.inner_by)
            return GroupMap(self.domain, images, "inner",
                            codomain=other.codomain, inner_by=g)
        rank = min(_KIND_RANK[self.kind], _KIND_RANK[other.kind])
        kind = {0: "unvalidated", 1: "homomorphism", 2: "endomorphism",
                3: "automorphism"}[rank]
        if kind != "unvalidated" and self.domain is not other.codomain:
            kind = "homomorphism"
        return GroupMap(self.domain, images, kind, codomain=other.codomain)

    def is_identity(self) -> bool:
        return self.domain is self.codomain and self.images == self.domain.generators

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupMap)
            and self.domain is other.domain
            and self.codomain is other.codomain
            and self.images == other.images
        )

    def __hash__(self):
        return hash((id(self.domain), id(self.codomain), self.images))

    def __repr__(self) -> str:
        return f"GroupMap(kind={self.kind}, images={list(self.images)})"


def identity_map(pres: PcPresentation) -> GroupMap:
    return GroupMap(pres, pres.generators, "automorphism")


def check_homomorphism(domain: PcPresentation, images,
                       codomain: PcPresentation | None = None,
                       chain_derived: bool = False) -> GroupMap:
    """Verify all defining relations under the substitution a_i -> images[i].

    Returns the map with its kind upgraded to homomorphism/endomorphism;
    raises HomCheckFailed naming the first violated relation.

    `chain_derived` may be set by callers that computed images[i] for i >= 2
    as commutator(images[i-1], images[0]) on a presentation satisfying the
    standard chain convention [a_i, a_1] = a_{i+1}: the relation checks for
    those pairs would recompute the defining expression and compare it with
    itself, so they are skipped.  All other relations are still checked.
    """
    gmap = GroupMap(domain, images, codomain=codomain)
    cod = gmap.codomain
    p = domain.p
    skip_chain = chain_derived and cod is domain and domain.has_standard_chain()
    for i in range(1, domain.n + 1):
        lhs = cod.power(gmap.images[i - 1], p)
        rhs = gmap.evaluate(domain.power_tails[i - 1])
        if lhs != rhs:
            raise HomCheckFailed(f"a_{i}^p = tail")
    for j in range(2, domain.n + 1):
        for i in range(1, j):
            if skip_chain and i == 1 and j < domain.n:
                continue
            lhs = cod.commutator(gmap.images[j - 1], gmap.images[i - 1])
            tail = domain.commutator_tails.get((j, i))
            rhs = gmap.evaluate(tail) if tail is not None else cod.identity
            if lhs != rhs:
                raise HomCheckFailed(f"[a_{j}, a_{i}] = tail")
    gmap.kind = "endomorphism" if cod is domain else "homomorphism"
    return gmap


def inner_automorphism(pres: PcPresentation, g: Element) -> GroupMap:
    """Conjugation x -> g^-1 x g; always an automorphism, no check needed."""
    images = tuple(pres.conjugate(a, g) for a in pres.generators)
    return GroupMap(pres, images, "inner", inner_by=g)


def certify_automorphism(gmap: GroupMap, frattini_pivots=None) -> GroupMap:
    """Upgrade a validated endomorphism to an automorphism, or raise.

    Fast route: when the Frattini subgroup is known to be the suffix
    subgroup on the given pivot set (as validated for standard maximal-class
    presentations, where it is <a_3, ..., a_n>), surjectivity follows from
    the image matrix on the complementary coordinates being invertible
    mod p.  Generic route: the subgroup generated by the images has full
    order, which for an endomorphism of a finite group is surjectivity and
    hence bijectivity.
    """
    if gmap.kind in ("automorphism", "inner"):
        return gmap
    if gmap.kind != "endomorphism":
        raise PresentationError("only validated endomorphisms can be certified")
    pres = gmap.domain
    if frattini_pivots is not None:
        free = [i for i in range(1, pres.n + 1) if i not in frattini_pivots]
        mat = [[gmap.images[c - 1][r - 1] for c in free] for r in free]
        if _det_mod(mat, pres.p):
            gmap.kind = "automorphism"
            return gmap
        raise HomCheckFailed("images do not generate the group modulo Frattini")
    image = pres.subgroup_from_generators(gmap.images)
    if image.order_exponent == pres.n:
        gmap.kind = "automorphism"
        return gmap
    raise HomCheckFailed("images generate a proper subgroup")


def _det_mod(mat, p: int) -> int:
    m = [row[:] for row in mat]
    size = len(m)
    det = 1
    for col in range(size):
        piv = next((r for r in range(col, size) if m[r][col] % p), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        inv = pow(m[col][col], -1, p)
        det = det * m[col][col] % p
        for r in range(col + 1, size):
            f = m[r][col] * inv % p
            if f:
                m[r] = [(x - f * y) % p for x, y in zip(m[r], m[col])]
    return det % p
