"""Exact arithmetic for finite p-groups given by weighted power-commutator
presentations.

A presentation has generators a_1, ..., a_n, each of relative order p, and
relations

    a_i^p     = tail_i        (a normal form supported on indices > i)
    [a_j, a_i] = tail_{j,i}   (j > i; a normal form supported on indices > j)

Every group element has a unique normal form a_1^{e_1} ... a_n^{e_n} with
0 <= e_i < p; normal forms are computed by collection from the left.  The
support restrictions make the rewriting terminate, and the overlap tests in
`consistency_check` certify confluence, i.e. that the presentation defines a
group of order exactly p^n.  Only presentations that pass the consistency
test may be fed to the higher layers.

Conventions fixed here and used everywhere else:

* words and products read left to right: `multiply(a, b)` is "a then b";
* `conjugate(a, b) = b^-1 a b` and `commutator(a, b) = a^-1 b^-1 a b`;
* the suffix subgroups Gamma_k = <a_k, ..., a_n> form a central series, so
  every suffix subgroup is normal and its layers are elementary abelian.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .errors import PresentationError

ALLOWED_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61)
MAX_GENERATORS = 64


class Element(tuple):
    """Normal-form element: entry i-1 is the exponent of generator a_i."""

    __slots__ = ()

    def is_identity(self) -> bool:
        return not any(self)

    def leading_index(self) -> int:
        """1-based index of the first nonzero exponent; 0 for the identity."""
        for i, e in enumerate(self):
            if e:
                return i + 1
        return 0

    def __repr__(self) -> str:
        if not any(self):
            return "<1>"
        parts = [f"a{i + 1}" + (f"^{e}" if e != 1 else "") for i, e in enumerate(self) if e]
        return "<" + "*".join(parts) + ">"


# A word is a sequence of (generator index, signed exponent) pairs, read left
# to right.
Word = list


@dataclass
class ConsistencyReport:
    ok: bool
    overlaps_checked: int
    failure: str | None = None

    def __bool__(self) -> bool:
        return self.ok


class PcPresentation:
    """A weighted power-commutator presentation of a finite p-group.

    Treated as immutable after construction; all operations are pure
    functions of their inputs, so concurrent use is safe.
    """

    def __init__(self, p, n, power_tails, commutator_tails, labels=None):
        if p not in ALLOWED_PRIMES:
            raise PresentationError(f"p must be a prime with 3 <= p <= 61, got {p}")
        if not 1 <= n <= MAX_GENERATORS:
            raise PresentationError(f"generator count must be in 1..{MAX_GENERATORS}, got {n}")
        self.p = p
        self.n = n

        if len(power_tails) != n:
            raise PresentationError(f"expected {n} power tails, got {len(power_tails)}")
        pts = []
        for i, tail in enumerate(power_tails, start=1):
            pts.append(self._check_tail(tail, min_support=i + 1, what=f"power tail of a_{i}"))
        self.power_tails = tuple(pts)

        cts = {}
        for (j, i), tail in dict(commutator_tails).items():
            if not (1 <= i < j <= n):
                raise PresentationError(f"commutator pair ({j}, {i}) out of range")
            t = self._check_tail(tail, min_support=j + 1, what=f"tail of [a_{j}, a_{i}]")
            if any(t):
                cts[(j, i)] = t
        self.commutator_tails = cts

        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n:
                raise PresentationError("wrong number of generator labels")
            if any((not lab) or any(c.isspace() for c in lab) for lab in labels):
                raise PresentationError("labels must be nonempty and whitespace-free")
        self.labels = labels or tuple(f"a{i}" for i in range(1, n + 1))

        self.identity = Element((0,) * n)
        self.generators = tuple(
            Element(tuple(1 if k == i else 0 for k in range(n))) for i in range(n)
        )
        # Letter forms of the tails, for the collector.
        self._pt_letters = tuple(
            tuple((k + 1, e) for k, e in enumerate(t) if e) for t in self.power_tails
        )
        self._conj_letters = {
            pair: ((pair[0], 1),) + tuple((k + 1, e) for k, e in enumerate(t) if e)
            for pair, t in self.commutator_tails.items()
        }
        # Smallest k such that all generators of index >= k commute pairwise;
        # products supported there collect by plain exponent addition.
        self._abelian_start = max((i + 1 for (_, i) in self.commutator_tails), default=1)
        self._standard_chain = None  # lazy; see has_standard_chain()

    def _check_tail(self, tail, min_support, what):
        t = tuple(int(e) for e in tail)
        if len(t) != self.n:
            raise PresentationError(f"{what}: expected vector of length {self.n}")
        if any(not 0 <= e < self.p for e in t):
            raise PresentationError(f"{what}: entries must lie in [0, {self.p})")
        if any(e for e in t[: min_support - 1]):
            raise PresentationError(f"{what}: support must start at index {min_support}")
        return Element(t)

    # -- basic views ------------------------------------------------------

    def order_exponent(self) -> int:
        return self.n

    def element(self, exponents) -> Element:
        t = tuple(int(e) for e in exponents)
        if len(t) != self.n or any(not 0 <= e < self.p for e in t):
            raise PresentationError("invalid exponent vector")
        return Element(t)

    def generator(self, i: int) -> Element:
        if not 1 <= i <= self.n:
            raise PresentationError(f"generator index {i} out of range 1..{self.n}")
        return self.generators[i - 1]

    def commutator_tail(self, j: int, i: int) -> Element:
        return self.commutator_tails.get((j, i), self.identity)

    def random_element(self, rng) -> Element:
        return Element(tuple(rng.randrange(self.p) for _ in range(self.n)))

    def label_of(self, i: int) -> str:
        return self.labels[i - 1]

    # -- collection -------------------------------------------------------

    def collect(self, word) -> Element:
        """Normal form of a word of (generator index, signed exponent) pairs."""
        for g, _ in word:
            if not 1 <= g <= self.n:
                raise PresentationError(f"generator index {g} out of range 1..{self.n}")
        vec = [0] * self.n
        stack = [(g, int(e)) for g, e in reversed(list(word))]
        self._collect(vec, stack)
        return Element(vec)

    def _collect(self, vec, stack):
        # Collection from the left.  `vec` is the collected prefix in normal
        # form; `stack` holds the uncollected rest of the word, the top of
        # the stack being the leftmost remaining letter.
        p = self.p
        n = self.n
        pt = self._pt_letters
        conj = self._conj_letters
        while stack:
            g, e = stack.pop()
            if not e:
                continue
            if e < 0:
                # a_g^-1 = a_g^{p-1} * (a_g^p)^-1, one inverse letter at a time;
                # the inverse of the tail word reads right to left, so pushing
                # its letters in forward order makes the last one pop first
                if e < -1:
                    stack.append((g, e + 1))
                tail = pt[g - 1]
                if tail:
                    stack.extend((k, -c) for k, c in tail)
                stack.append((g, p - 1))
                continue
            top = 0
            for j in range(n, g, -1):
                if vec[j - 1]:
                    top = j
                    break
            if not top:
                total = vec[g - 1] + e
                vec[g - 1] = total % p
                q = total // p
                if q:
                    tail = pt[g - 1]
                    if tail:
                        rev = tuple(reversed(tail))
                        for _ in range(q):
                            stack.extend(rev)
                continue
            # There is a nonzero block above g.  If everything in the block
            # commutes with a_g and no power overflow occurs, add in place.
            if vec[g - 1] + e < p:
                clean = True
                for j in range(g + 1, top + 1):
                    if vec[j - 1] and (j, g) in conj:
                        clean = False
                        break
                if clean:
                    vec[g - 1] += e
                    continue
            # General step: move a single a_g past the block, conjugating
            # the block and pushing it back for recollection.
            if e > 1:
                stack.append((g, e - 1))
            buf = []
            for j in range(g + 1, top + 1):
                ej = vec[j - 1]
                if not ej:
                    continue
                vec[j - 1] = 0
                cl = conj.get((j, g))
                if cl is None:
                    buf.append((j, ej))
                else:
                    for _ in range(ej):
                        buf.extend(cl)
            vec[g - 1] += 1
            overflow = vec[g - 1] == p
            if overflow:
                vec[g - 1] = 0
            stack.extend(reversed(buf))
            if overflow:
                tail = pt[g - 1]
                if tail:
                    stack.extend(reversed(tail))

    # -- element operations ------------------------------------------------

    def multiply(self, a: Element, b: Element) -> Element:
        if not any(b):
            return a
        if not any(a):
            return b
        vec = list(a)
        stack = [(i + 1, b[i]) for i in range(self.n - 1, -1, -1) if b[i]]
        self._collect(vec, stack)
        return Element(vec)

    def invert(self, a: Element) -> Element:
        if not any(a):
            return a
        vec = [0] * self.n
        # letters of the inverse word, a_n^{-e_n} ... a_1^{-e_1}
        stack = [(i + 1, -a[i]) for i in range(self.n) if a[i]]
        self._collect(vec, stack)
        return Element(vec)

    def power(self, a: Element, k: int) -> Element:
        if k < 0:
            a = self.invert(a)
            k = -k
        result = self.identity
        base = a
        while k:
            if k & 1:
                result = self.multiply(result, base)
            k >>= 1
            if k:
                base = self.multiply(base, base)
        return result

    def conjugate(self, a: Element, b: Element) -> Element:
        """b^-1 * a * b."""
        lead = min(x.leading_index() or self.n + 1 for x in (a, b))
        if lead >= self._abelian_start:
            return a
        return self.multiply(self.multiply(self.invert(b), a), b)

    def commutator(self, a: Element, b: Element) -> Element:
        """a^-1 * b^-1 * a * b."""
        lead = min(x.leading_index() or self.n + 1 for x in (a, b))
        if lead >= self._abelian_start:
            return self.identity
        ab = self.multiply(a, b)
        ba = self.multiply(b, a)
        return self.multiply(self.invert(ba), ab)

    def element_order(self, a: Element) -> int:
        order = 1
        x = a
        while any(x):
            x = self.power(x, self.p)
            order *= self.p
        return order

    # -- consistency --------------------------------------------------------

    def consistency_check(self) -> ConsistencyReport:
        """Run the standard overlap tests for a weighted pc presentation.

        All of the following must collect to equal normal forms:

            a_k (a_j a_i) = (a_k a_j) a_i    for k > j > i
            a_j^p a_i     = a_j^{p-1} (a_j a_i)   for j > i
            a_j (a_i^p)   = (a_j a_i) a_i^{p-1}   for j > i
            a_i^p a_i     = a_i (a_i^p)

        Failures are reported in-band, naming the first bad overlap.
        """
        p = self.p
        checked = 0

        def letters(el):
            return [(k + 1, e) for k, e in enumerate(el) if e]

        for k in range(3, self.n + 1):
            for j in range(2, k):
                for i in range(1, j):
                    checked += 1
                    ji = self.collect([(j, 1), (i, 1)])
                    lhs = self.collect([(k, 1)] + letters(ji))
                    kj = self.collect([(k, 1), (j, 1)])
                    rhs = self.collect(letters(kj) + [(i, 1)])
                    if lhs != rhs:
                        return ConsistencyReport(
                            False, checked, f"associativity overlap a_{k}(a_{j} a_{i})"
                        )
        for j in range(2, self.n + 1):
            for i in range(1, j):
                checked += 1
                lhs = self.collect([(j, p - 1)] + letters(self.collect([(j, 1), (i, 1)])))
                rhs = self.collect(letters(self.power_tails[j - 1]) + [(i, 1)])
                if lhs != rhs:
                    return ConsistencyReport(False, checked, f"power overlap a_{j}^p a_{i}")
                checked += 1
                lhs = self.collect([(j, 1)] + letters(self.power_tails[i - 1]))
                rhs = self.collect(letters(self.collect([(j, 1), (i, 1)])) + [(i, p - 1)])
                if lhs != rhs:
                    return ConsistencyReport(False, checked, f"power overlap a_{j} a_{i}^p")
        for i in range(1, self.n + 1):
            checked += 1
            lhs = self.collect(letters(self.power_tails[i - 1]) + [(i, 1)])
            rhs = self.collect([(i, 1)] + letters(self.power_tails[i - 1]))
            if lhs != rhs:
                return ConsistencyReport(False, checked, f"power overlap a_{i}^p a_{i}")
        return ConsistencyReport(True, checked)

    def has_standard_chain(self) -> bool:
        """True if [a_i, a_1] = a_{i+1} exactly for i = 2..n-1 and [a_n, a_1] = 1.

        This is the generator convention under which a_1, a_2 generate the
        group and the remaining generators are the iterated commutators with
        a_1; derivation-backed maps are only defined on such presentations.
        """
        if self._standard_chain is None:
            ok = not self.commutator_tails.get((self.n, 1))
            for i in range(2, self.n):
                if self.commutator_tail(i, 1) != self.generators[i]:
                    ok = False
                    break
            self._standard_chain = ok
        return self._standard_chain

    # -- subgroups ----------------------------------------------------------

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, ())

    def full_subgroup(self) -> "Subgroup":
        return Subgroup(self, self.generators)

    def suffix_subgroup(self, k: int) -> "Subgroup":
        """<a_k, ..., a_n>; a normal subgroup for every k."""
        if not 1 <= k <= self.n + 1:
            raise PresentationError(f"suffix start {k} out of range")
        return Subgroup(self, self.generators[k - 1 :])

    def subgroup_from_generators(self, gens, normal_closure=False) -> "Subgroup":
        """Echelonized basis of <gens> (or of its normal closure).

        The basis is closed under powers and conjugation among members, so
        membership testing reduces to sifting.  With `normal_closure` the
        basis is additionally closed under conjugation by all presentation
        generators.
        """
        basis = []
        queue = [g for g in gens]
        while queue:
            x = queue.pop()
            x = _sift(self, basis, x)
            if not any(x):
                continue
            lead = x.leading_index()
            c = x[lead - 1]
            if c != 1:
                x = self.power(x, pow(c, -1, self.p))
            pos = 0
            while pos < len(basis) and basis[pos].leading_index() < lead:
                pos += 1
            basis.insert(pos, x)
            queue.append(self.power(x, self.p))
            for b in basis:
                if b is not x:
                    queue.append(self.conjugate(x, b))
                    queue.append(self.conjugate(b, x))
            if normal_closure:
                for g in self.generators:
                    queue.append(self.conjugate(x, g))
        return Subgroup(self, _canonicalize(self, basis))

    def lower_central_series(self) -> "SeriesChain":
        """gamma_1 = G, gamma_{i+1} = [gamma_i, G], down to the trivial group."""
        terms = [self.full_subgroup()]
        while terms[-1].order_exponent:
            prev = terms[-1]
            comms = [
                self.commutator(x, g) for x in prev.basis for g in self.generators
            ]
            nxt = self.subgroup_from_generators(comms, normal_closure=True)
            if nxt.order_exponent >= prev.order_exponent:
                raise PresentationError("lower central series does not descend")
            terms.append(nxt)
        return SeriesChain(self, tuple(terms))

    def centralizer_mod(self, H: "Subgroup", K: "Subgroup", budget: int = 10**6) -> "Subgroup":
        """{g in G : [h, g] in K for all h generating H}, for K normal, K <= H.

        Runs over canonical coset representatives of G/K (the condition is
        constant on K-cosets), so the index [G : K] must stay within
        `budget`.
        """
        for b in K.basis:
            if not H.contains(b):
                raise PresentationError("K is not contained in H")
        if not K.is_normal():
            raise PresentationError("K is not normal")
        index = self.p ** (self.n - K.order_exponent)
        if index > budget:
            raise PresentationError(
                f"index of K is {index}, beyond the enumeration budget {budget}"
            )
        reps = self._coset_reps(K)
        good = [g for g in reps if all(K.contains(self.commutator(h, g)) for h in H.basis)]
        return self.subgroup_from_generators(list(K.basis) + good)

    def _coset_reps(self, K: "Subgroup"):
        start = _coset_canon(self, K, self.identity)
        seen = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for g in frontier:
                for a in self.generators:
                    r = _coset_canon(self, K, self.multiply(g, a))
                    if r not in seen:
                        seen.add(r)
                        nxt.append(r)
            frontier = nxt
        return sorted(seen)

    def quotient_by_term(self, k: int) -> "PcPresentation":
        """Quotient by the suffix subgroup <a_{k+1}, ..., a_n>.

        Returns the truncated presentation on the first k generators.  By
        the generator ordering convention the suffix subgroup is the series
        term being factored; callers that rely on that identification check
        it against the computed series.
        """
        if not 1 <= k <= self.n:
            raise PresentationError(f"quotient size {k} out of range 1..{self.n}")
        if k == self.n:
            return self
        pts = [t[:k] for t in self.power_tails[:k]]
        cts = {
            (j, i): t[:k]
            for (j, i), t in self.commutator_tails.items()
            if j <= k
        }
        quo = PcPresentation(self.p, k, pts, cts, labels=self.labels[:k])
        report = quo.consistency_check()
        if not report.ok:
            raise PresentationError(
                f"truncation at {k} is not consistent ({report.failure}); "
                "the suffix subgroup is not a valid series term"
            )
        return quo

    # -- identity / serialization -------------------------------------------

    def canonical_text(self) -> str:
        lines = [f"pcmax-group 1", f"p {self.p}", f"n {self.n}"]
        lines.append("labels " + " ".join(self.labels))
        for i in range(1, self.n + 1):
            row = " ".join(str(e) for e in self.power_tails[i - 1])
            lines.append(f"power {i} : {row}")
        for j in range(2, self.n + 1):
            for i in range(1, j):
                row = " ".join(str(e) for e in self.commutator_tail(j, i))
                lines.append(f"comm {j} {i} : {row}")
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()

    def __repr__(self) -> str:
        return f"PcPresentation(p={self.p}, n={self.n})"


def _sift(pres, basis, x):
    """Reduce x against an echelon basis, clearing pivots in ascending order."""
    for b in basis:
        lead = b.leading_index()
        c = x[lead - 1]
        if c:
            x = pres.multiply(pres.power(b, -c), x)
    return x


def _canonicalize(pres, basis):
    """Full reduction: leading coefficients 1, later pivots cleared."""
    basis = list(basis)
    pivots = [b.leading_index() for b in basis]
    for m in range(len(basis) - 1, -1, -1):
        b = basis[m]
        for k in range(m + 1, len(basis)):
            c = b[pivots[k] - 1]
            if c:
                b = pres.multiply(b, pres.power(basis[k], -c))
        basis[m] = b
    return tuple(basis)


class Subgroup:
    """A subgroup held as a canonical echelonized basis.

    Basis members have strictly increasing leading indices with leading
    coefficient 1; |H| = p^order_exponent with order_exponent = len(basis).
    """

    def __init__(self, pres: PcPresentation, basis):
        self.pres = pres
        self.basis = tuple(basis)
        self._pivots = tuple(b.leading_index() for b in self.basis)
        # basis of plain generator vectors => elements are plain tuples
        self._unit_basis = all(
            sum(b) == 1 and b[piv - 1] == 1 for b, piv in zip(self.basis, self._pivots)
        )
        self._abelian = None
        self._normal = None
        # contiguous suffix <a_k, ..., a_n>: coset membership is a prefix test
        self._suffix_start = (
            self._pivots[0]
            if self._unit_basis
            and self._pivots == tuple(range(self._pivots[0], pres.n + 1))
            else None
        ) if self.basis else pres.n + 1

    def suffix_start(self):
        """k when this subgroup is exactly <a_k, ..., a_n>, else None."""
        return self._suffix_start

    @property
    def order_exponent(self) -> int:
        return len(self.basis)

    def order(self) -> int:
        return self.pres.p ** len(self.basis)

    def sift(self, x: Element) -> Element:
        if self._unit_basis and self.contains(x):
            return self.pres.identity
        return _sift(self.pres, self.basis, x)

    def contains(self, x: Element) -> bool:
        if self._unit_basis:
            # the member set is exactly the vectors supported on the pivots
            pivots = set(self._pivots)
            return all(e == 0 for i, e in enumerate(x, start=1) if i not in pivots)
        return not any(_sift(self.pres, self.basis, x))

    __contains__ = contains

    def elements(self):
        """All p^k members, as ordered products over the basis."""
        pres = self.pres
        if self._unit_basis:
            import itertools

            zero = [0] * pres.n
            for combo in itertools.product(range(pres.p), repeat=len(self._pivots)):
                vec = zero[:]
                for piv, c in zip(self._pivots, combo):
                    vec[piv - 1] = c
                yield Element(vec)
            return
        els = [pres.identity]
        for b in reversed(self.basis):
            powers = [pres.identity]
            for _ in range(pres.p - 1):
                powers.append(pres.multiply(powers[-1], b))
            els = [pres.multiply(pw, x) for pw in powers for x in els]
        yield from els

    def random_element(self, rng) -> Element:
        x = self.pres.identity
        for b in self.basis:
            c = rng.randrange(self.pres.p)
            if c:
                x = self.pres.multiply(x, self.pres.power(b, c))
        return x

    def is_abelian(self) -> bool:
        if self._abelian is None:
            self._abelian = not any(
                any(self.pres.commutator(a, b))
                for i, a in enumerate(self.basis)
                for b in self.basis[i + 1 :]
            )
        return self._abelian

    def is_normal(self) -> bool:
        if self._normal is None:
            self._normal = all(
                self.contains(self.pres.conjugate(b, g))
                for b in self.basis
                for g in self.pres.generators
            )
        return self._normal

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subgroup)
            and self.pres is other.pres
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((id(self.pres), self.basis))

    def __repr__(self) -> str:
        return f"Subgroup(order=p^{self.order_exponent}, pivots={list(self._pivots)})"


class SeriesChain:
    """A descending chain of normal subgroups; index 1 is the whole group."""

    def __init__(self, pres: PcPresentation, terms):
        self.pres = pres
        self.terms = tuple(terms)

    def term(self, i: int) -> Subgroup:
        """i-th term, with the convention that terms beyond the chain are trivial."""
        if i < 1:
            raise PresentationError(f"series index {i} must be >= 1")
        if i <= len(self.terms):
            return self.terms[i - 1]
        return self.pres.trivial_subgroup()

    def __len__(self) -> int:
        return len(self.terms)

    def order_exponents(self):
        return tuple(t.order_exponent for t in self.terms)

    def nilpotency_class(self) -> int:
        return len(self.terms) - 1

    def __repr__(self) -> str:
        return f"SeriesChain(order_exponents={list(self.order_exponents())})"


def _coset_canon(pres, K, g):
    """Canonical representative of gK: pivot coordinates cleared by right
    multiplication with basis members of K."""
    for b in K.basis:
        c = g[b.leading_index() - 1]
        if c:
            g = pres.multiply(g, pres.power(b, -c))
    return g
