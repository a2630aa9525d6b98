"""Witt vectors of finite length over small finite fields, and the presented
symbol groups built from them.

Ring operations come from the universal Witt polynomials, computed once per
(p, length) by the exact ghost-component recursion (every division by p is
asserted exact).  Frobenius is componentwise p-th power (the base fields are
perfect), Verschiebung is the shift, and F(V(a)) = p * a.
"""

from __future__ import annotations

import itertools

from .presentation import (
    FinAbGroup,
    GroupPresentation,
    group_from_cayley,
    group_from_presentation,
)


class MismatchedParameters(ValueError):
    """Witt vectors from different rings."""


class OutOfSupportedRange(ValueError):
    """Parameters outside the supported (q, i, n) envelope."""


# -- integer polynomials for the universal laws ----------------------------


class _ZPoly:
    """Tiny sparse integer polynomial: dict exponent tuple -> int."""

    __slots__ = ("n", "terms")

    def __init__(self, n, terms=None):
        self.n = n
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    @classmethod
    def var(cls, n, i):
        e = tuple(1 if k == i else 0 for k in range(n))
        return cls(n, {e: 1})

    @classmethod
    def const(cls, n, c):
        return cls(n, {(0,) * n: c})

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return _ZPoly(self.n, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __mul__(self, other):
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return _ZPoly(self.n, out)

    def scale(self, c):
        return _ZPoly(self.n, {e: c * v for e, v in self.terms.items()})

    def __pow__(self, k):
        acc = _ZPoly.const(self.n, 1)
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def divexact(self, c):
        out = {}
        for e, v in self.terms.items():
            if v % c:
                raise AssertionError("Witt polynomial recursion: inexact division")
            out[e] = v // c
        return _ZPoly(self.n, out)

    def eval_int(self, values):
        total = 0
        for e, c in self.terms.items():
            term = c
            for v, k in zip(values, e):
                term *= v**k
            total += term
        return total

    def eval_gf(self, gf, values):
        total = gf.zero
        for e, c in self.terms.items():
            cc = c % gf.p
            if not cc:
                continue
            term = gf.from_int(cc)
            for v, k in zip(values, e):
                if k:
                    term = gf.mul(term, gf.pow(v, k))
            total = gf.add(total, term)
        return total


def _witt_universal(p, length):
    """(sum, product, negation) polynomial lists for W_length, over 2*length
    integer variables (X then Y; negation uses only X)."""
    n = 2 * length
    X = [_ZPoly.var(n, j) for j in range(length)]
    Y = [_ZPoly.var(n, length + j) for j in range(length)]

    def ghost(vec, k):
        acc = _ZPoly.const(n, 0)
        for j in range(k + 1):
            acc = acc + (vec[j] ** (p ** (k - j))).scale(p**j)
        return acc

    sums, prods, negs = [], [], []
    for k in range(length):
        s = ghost(X, k) + ghost(Y, k)
        m = ghost(X, k) * ghost(Y, k)
        g = ghost(X, k).scale(-1)
        for j in range(k):
            s = s - (sums[j] ** (p ** (k - j))).scale(p**j)
            m = m - (prods[j] ** (p ** (k - j))).scale(p**j)
            g = g - (negs[j] ** (p ** (k - j))).scale(p**j)
        sums.append(s.divexact(p**k))
        prods.append(m.divexact(p**k))
        negs.append(g.divexact(p**k))
    return sums, prods, negs


_UNIVERSAL_CACHE = {}


def witt_universal_polynomials(p, length):
    key = (p, length)
    if key not in _UNIVERSAL_CACHE:
        _UNIVERSAL_CACHE[key] = _witt_universal(p, length)
    return _UNIVERSAL_CACHE[key]


def ghost_components(p, vec):
    """Integer ghost components of an integer vector."""
    out = []
    for k in range(len(vec)):
        out.append(sum(p**j * vec[j] ** (p ** (k - j)) for j in range(k + 1)))
    return out


def witt_add_int(p, a, b):
    """Universal addition evaluated over the integers (no reduction)."""
    sums, _, _ = witt_universal_polynomials(p, len(a))
    vals = list(a) + list(b)
    return [s.eval_int(vals) for s in sums]


def witt_mul_int(p, a, b):
    _, prods, _ = witt_universal_polynomials(p, len(a))
    vals = list(a) + list(b)
    return [s.eval_int(vals) for s in prods]


# -- small finite fields -----------------------------------------------------


_QUADRATIC_MODULUS = {
    # x^2 + c1 x + c0 irreducible over F_p, stored as (c0, c1)
    2: (1, 1),
    3: (1, 0),
    5: (2, 0),
    7: (1, 0),
    11: (1, 0),
    13: (2, 0),
    17: (3, 0),
}


class GaloisField:
    """F_{p^e} for e in {1, 2}; elements are tuples of residues."""

    def __init__(self, p, e=1):
        if e not in (1, 2):
            raise OutOfSupportedRange("only F_p and F_{p^2} are supported")
        if p not in _QUADRATIC_MODULUS:
            raise ValueError(f"unsupported characteristic {p}")
        self.p = p
        self.e = e
        self.q = p**e
        self.zero = (0,) * e
        self.one = (1,) + (0,) * (e - 1)
        self.modulus = _QUADRATIC_MODULUS[p] if e == 2 else None

    def from_int(self, c):
        return (c % self.p,) + (0,) * (self.e - 1)

    def elements(self):
        return [tuple(v) for v in itertools.product(range(self.p), repeat=self.e)]

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        p = self.p
        if self.e == 1:
            return ((a[0] * b[0]) % p,)
        c0, c1 = self.modulus
        # (a0 + a1 z)(b0 + b1 z) with z^2 = -c1 z - c0
        z2_0, z2_1 = (-c0) % p, (-c1) % p
        hi = a[1] * b[1]
        lo = a[0] * b[0]
        mid = a[0] * b[1] + a[1] * b[0]
        return ((lo + hi * z2_0) % p, (mid + hi * z2_1) % p)

    def pow(self, a, k):
        acc = self.one
        base = a
        while k:
            if k & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            k >>= 1
        return acc

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("inverse of zero field element")
        return self.pow(a, self.q - 2)

    def frobenius(self, a):
        return self.pow(a, self.p)

    def units(self):
        return [a for a in self.elements() if a != self.zero]


# -- Witt rings and vectors ---------------------------------------------------


class WittRing:
    """W_i(F_q): fixed-length Witt vectors with cached universal laws."""

    def __init__(self, p, e, length):
        if length < 1:
            raise ValueError("length must be >= 1")
        self.gf = GaloisField(p, e)
        self.p = p
        self.length = length
        self.sums, self.prods, self.negs = witt_universal_polynomials(p, length)

    def vector(self, comps):
        return WittVector(self, tuple(comps))

    def zero(self):
        return self.vector((self.gf.zero,) * self.length)

    def one(self):
        return self.vector((self.gf.one,) + (self.gf.zero,) * (self.length - 1))

    def teichmuller(self, a):
        return self.vector((a,) + (self.gf.zero,) * (self.length - 1))

    def elements(self):
        for comps in itertools.product(self.gf.elements(), repeat=self.length):
            yield self.vector(comps)

    def __eq__(self, other):
        return (
            isinstance(other, WittRing)
            and (self.p, self.gf.e, self.length) == (other.p, other.gf.e, other.length)
        )

    def __hash__(self):
        return hash(("WittRing", self.p, self.gf.e, self.length))


class WittVector:
    """Element of W_i(F_q)."""

    __slots__ = ("ring", "comps")

    def __init__(self, ring, comps):
        if len(comps) != ring.length:
            raise MismatchedParameters("wrong component count")
        self.ring = ring
        self.comps = tuple(comps)

    def _check(self, other):
        if self.ring != other.ring:
            raise MismatchedParameters("Witt vectors from different rings")

    def __eq__(self, other):
        return (
            isinstance(other, WittVector)
            and self.ring == other.ring
            and self.comps == other.comps
        )

    def __hash__(self):
        return hash((self.ring, self.comps))

    def __repr__(self):
        return f"WittVector{self.comps!r}"

    def _eval(self, polys, other):
        gf = self.ring.gf
        vals = list(self.comps) + list(other.comps)
        return WittVector(self.ring, tuple(s.eval_gf(gf, vals) for s in polys))

    def __add__(self, other):
        self._check(other)
        return self._eval(self.ring.sums, other)

    def __mul__(self, other):
        self._check(other)
        return self._eval(self.ring.prods, other)

    def __neg__(self):
        gf = self.ring.gf
        vals = list(self.comps) + [gf.zero] * self.ring.length
        return WittVector(self.ring, tuple(s.eval_gf(gf, vals) for s in self.ring.negs))

    def __sub__(self, other):
        return self + (-other)


def witt_add(a, b):
    return a + b


def witt_mul(a, b):
    return a * b


def witt_frobenius(a):
    """Componentwise p-th power; a ring endomorphism over perfect fields."""
    gf = a.ring.gf
    return WittVector(a.ring, tuple(gf.frobenius(c) for c in a.comps))


def witt_verschiebung(a):
    """Shift: V(a_0, ..., a_{i-2}, .) = (0, a_0, ..., a_{i-2})."""
    gf = a.ring.gf
    return WittVector(a.ring, (gf.zero,) + a.comps[: a.ring.length - 1])


def additive_order(a):
    ring = a.ring
    acc = a
    k = 1
    zero = ring.zero()
    while acc != zero:
        acc = acc + a
        k += 1
        if k > ring.gf.q ** ring.length + 1:
            raise AssertionError("additive order runaway")
    return k


# -- presented symbol groups ---------------------------------------------------


def _q_to_pe(q):
    for p in _QUADRATIC_MODULUS:
        for e in (1, 2):
            if p**e == q:
                return p, e
    raise OutOfSupportedRange(f"unsupported field size {q}")


MAX_HSYM_GENERATORS = 4096


def hsym_group(q, i, n):
    """The group presented by symbols [a, b_1..b_{n-1}] with a in W_i(F_q)
    and the b_j in F_q^*: additivity in a, multiplicativity in each b slot,
    the Teichmuller-slot relation, the Artin-Schreier-Witt relation
    [F(a) - a, ...] = 0, and alternation; invariant factors via the shared
    cokernel machinery."""
    p, e = _q_to_pe(q)
    if i < 1 or i > 3 or n < 1 or n > 2:
        raise OutOfSupportedRange("need 1 <= i <= 3 and 1 <= n <= 2")
    ring = WittRing(p, e, i)
    gf = ring.gf
    witt_elems = list(ring.elements())
    if len(witt_elems) * max(1, (gf.q - 1)) ** (n - 1) > MAX_HSYM_GENERATORS:
        raise OutOfSupportedRange("presentation too large")
    widx = {w.comps: k for k, w in enumerate(witt_elems)}
    units = gf.units()
    bslots = list(itertools.product(units, repeat=n - 1))
    gens = [(w.comps, bs) for w in witt_elems for bs in bslots]
    col = {g: k for k, g in enumerate(gens)}
    rows = []

    def bump(row, g, v):
        c = col[g]
        nv = row.get(c, 0) + v
        if nv:
            row[c] = nv
        else:
            row.pop(c, None)

    # additivity in the Witt slot
    for bs in bslots:
        for w1 in witt_elems:
            for w2 in witt_elems:
                row = {}
                bump(row, ((w1 + w2).comps, bs), 1)
                bump(row, (w1.comps, bs), -1)
                bump(row, (w2.comps, bs), -1)
                if row:
                    rows.append(row)
    # multiplicativity in each b slot
    for slot in range(n - 1):
        for w in witt_elems:
            for rest in itertools.product(units, repeat=n - 2):
                for b1 in units:
                    for b2 in units:
                        bs0 = rest[:slot] + (gf.mul(b1, b2),) + rest[slot:]
                        bs1 = rest[:slot] + (b1,) + rest[slot:]
                        bs2 = rest[:slot] + (b2,) + rest[slot:]
                        row = {}
                        bump(row, (w.comps, bs0), 1)
                        bump(row, (w.comps, bs1), -1)
                        bump(row, (w.comps, bs2), -1)
                        if row:
                            rows.append(row)
    # Teichmuller slot: [(0,..,a,..,0), a, b_2..] = 0
    if n >= 2:
        for r in range(i):
            for a in units:
                comps = [gf.zero] * i
                comps[r] = a
                for rest in itertools.product(units, repeat=n - 2):
                    rows.append({col[(tuple(comps), (a,) + rest)]: 1})
    # Artin-Schreier-Witt: [F(a) - a, bs] = 0
    for w in witt_elems:
        img = witt_frobenius(w) - w
        for bs in bslots:
            rows.append({col[(img.comps, bs)]: 1})
    # alternation (only bites for n >= 3, kept for shape)
    if n >= 3:
        for w in witt_elems:
            for bs in bslots:
                if len(set(bs)) < len(bs):
                    rows.append({col[(w.comps, bs)]: 1})
    pres = GroupPresentation([str(g) for g in gens], rows)
    return group_from_presentation(pres, char_hint=p**i)


def artin_schreier_witt_cokernel(q, i):
    """Independent oracle: coker(F - 1 on W_i(F_q)) by full enumeration."""
    p, e = _q_to_pe(q)
    ring = WittRing(p, e, i)
    elems = list(ring.elements())
    image = {(witt_frobenius(w) - w).comps for w in elems}
    cosets = {}
    for w in elems:
        coset = frozenset((ring.vector(m) + w).comps for m in image)
        cosets.setdefault(coset, w)
    coset_list = list(cosets)
    rep = {c: cosets[c] for c in coset_list}
    lookup = {}
    for c in coset_list:
        for member in c:
            lookup[member] = c

    def add_fn(c1, c2):
        return lookup[(rep[c1] + rep[c2]).comps]

    zero_coset = lookup[ring.zero().comps]
    return group_from_cayley(coset_list, add_fn, zero_coset)
