"""Exact domain types shared by all modules.

Multiplicities live in the naturals extended by the single infinite value
``OMEGA``; indices are kept as exact prime-power factorizations or the
symbol ``INFINITE``.  Everything here is an immutable value with no I/O.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple, Union


class _Omega:
    """The countably infinite multiplicity.  A single shared instance."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "w"

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, _Omega)

    def __gt__(self, other):
        if isinstance(other, _Omega):
            return False
        if isinstance(other, int):
            return True
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, (_Omega, int)):
            return True
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, (_Omega, int)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __hash__(self):
        return hash("_Omega")


OMEGA = _Omega()
Mult = Union[int, _Omega]


class _Infinite:
    """Marker for an infinite cardinality, index, or exponent."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "inf"

    def __hash__(self):
        return hash("_Infinite")


INFINITE = _Infinite()


def is_omega(m: Mult) -> bool:
    return isinstance(m, _Omega)


def mult_add(a: Mult, b: Mult) -> Mult:
    if is_omega(a) or is_omega(b):
        return OMEGA
    return a + b


def mult_sort_key(m: Mult) -> Tuple[int, int]:
    return (1, 0) if is_omega(m) else (0, m)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> Dict[int, int]:
    """Factor a positive integer into {prime: exponent}."""
    if n < 1:
        raise ValueError("can only factor positive integers")
    out: Dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def p_adic_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# Index classes


@dataclass(frozen=True)
class Index:
    """An exact subgroup index: a factored finite natural, or infinite.

    ``factors`` is a sorted tuple of (prime, exponent) pairs; ``None`` means
    the index is infinite.  Multiplication is exact, with Infinite absorbing.
    """

    factors: Optional[Tuple[Tuple[int, int], ...]]

    @staticmethod
    def one() -> "Index":
        return Index(())

    @staticmethod
    def infinite() -> "Index":
        return Index(None)

    @staticmethod
    def from_factors(factors: Dict[int, int]) -> "Index":
        items = tuple(sorted((p, e) for p, e in factors.items() if e > 0))
        return Index(items)

    @staticmethod
    def prime_power(p: int, e: int) -> "Index":
        if e == 0:
            return Index.one()
        return Index(((p, e),))

    @staticmethod
    def of(n: int) -> "Index":
        return Index.from_factors(prime_factors(n))

    @property
    def is_infinite(self) -> bool:
        return self.factors is None

    @property
    def is_one(self) -> bool:
        return self.factors == ()

    def value(self) -> int:
        if self.factors is None:
            raise ValueError("infinite index has no integer value")
        out = 1
        for p, e in self.factors:
            out *= p ** e
        return out

    def __mul__(self, other: "Index") -> "Index":
        if self.factors is None or other.factors is None:
            return Index.infinite()
        merged: Dict[int, int] = dict(self.factors)
        for p, e in other.factors:
            merged[p] = merged.get(p, 0) + e
        return Index.from_factors(merged)

    def __repr__(self) -> str:
        if self.factors is None:
            return "Infinite"
        if not self.factors:
            return "Finite(1)"
        return "Finite(%d)" % self.value()


# ---------------------------------------------------------------------------
# Group descriptions


@dataclass(frozen=True)
class TailSpec:
    """Unbounded p-length: multiplicity ``mult`` at every exponent > cutoff."""

    cutoff: int
    mult: Mult


@dataclass(frozen=True)
class PrimeTailShape:
    """A fixed per-prime shape applied to every prime not otherwise listed.

    ``cyclic_pattern`` maps exponent n to a multiplicity; ``tf_mult`` and
    ``div_mult`` are the torsion-free-local and divisible multiplicities.
    """

    cyclic_pattern: Tuple[Tuple[int, Mult], ...] = ()
    tf_mult: Mult = 0
    div_mult: Mult = 0

    @property
    def is_trivial(self) -> bool:
        return not self.cyclic_pattern and self.tf_mult == 0 and self.div_mult == 0

    def pattern_dict(self) -> Dict[int, Mult]:
        return dict(self.cyclic_pattern)


def _freeze_pattern(pattern: Dict[int, Mult]) -> Tuple[Tuple[int, Mult], ...]:
    return tuple(sorted((n, m) for n, m in pattern.items() if m != 0))


def make_prime_tail(cyclic_pattern: Optional[Dict[int, Mult]] = None,
                    tf_mult: Mult = 0, div_mult: Mult = 0) -> PrimeTailShape:
    return PrimeTailShape(_freeze_pattern(cyclic_pattern or {}), tf_mult, div_mult)


@dataclass(frozen=True)
class SzmielewDescription:
    """Symbolic abelian group given by its Szmielew data.

    cyclic maps (prime, exponent) to the multiplicity of Z(p^n); tf and div
    map a prime to the multiplicities of Z_(p) and Z(p^inf); q_mult is the
    multiplicity of Q.  cyclic_tail holds the unbounded-length primes and
    prime_tail, when present, a uniform shape for all unlisted primes.
    """

    cyclic: Tuple[Tuple[Tuple[int, int], Mult], ...] = ()
    tf: Tuple[Tuple[int, Mult], ...] = ()
    div: Tuple[Tuple[int, Mult], ...] = ()
    q_mult: Mult = 0
    cyclic_tail: Tuple[Tuple[int, TailSpec], ...] = ()
    prime_tail: Optional[PrimeTailShape] = None

    def cyclic_dict(self) -> Dict[Tuple[int, int], Mult]:
        return dict(self.cyclic)

    def tf_dict(self) -> Dict[int, Mult]:
        return dict(self.tf)

    def div_dict(self) -> Dict[int, Mult]:
        return dict(self.div)

    def tail_dict(self) -> Dict[int, TailSpec]:
        return dict(self.cyclic_tail)

    @property
    def is_trivial(self) -> bool:
        return (not self.cyclic and not self.tf and not self.div
                and self.q_mult == 0 and not self.cyclic_tail
                and self.prime_tail is None)

    def primes(self) -> List[int]:
        """All primes explicitly mentioned, ascending."""
        ps = {p for (p, _n) in self.cyclic_dict()}
        ps.update(self.tf_dict())
        ps.update(self.div_dict())
        ps.update(self.tail_dict())
        return sorted(ps)

    def max_exponent(self) -> int:
        """Largest cyclic exponent / tail cutoff / tail-shape exponent."""
        out = 0
        for (_p, n), _m in self.cyclic:
            out = max(out, n)
        for _p, spec in self.cyclic_tail:
            out = max(out, spec.cutoff)
        if self.prime_tail is not None:
            for n, _m in self.prime_tail.cyclic_pattern:
                out = max(out, n)
        return out


def make_description(cyclic: Optional[Dict[Tuple[int, int], Mult]] = None,
                     tf: Optional[Dict[int, Mult]] = None,
                     div: Optional[Dict[int, Mult]] = None,
                     q_mult: Mult = 0,
                     cyclic_tail: Optional[Dict[int, TailSpec]] = None,
                     prime_tail: Optional[PrimeTailShape] = None) -> SzmielewDescription:
    """Build a description in canonical form (zero entries dropped, sorted)."""
    cyc = tuple(sorted(((pn, m) for pn, m in (cyclic or {}).items() if m != 0),
                       key=lambda kv: kv[0]))
    tf_t = tuple(sorted((p, m) for p, m in (tf or {}).items() if m != 0))
    div_t = tuple(sorted((p, m) for p, m in (div or {}).items() if m != 0))
    tail_t = tuple(sorted((cyclic_tail or {}).items()))
    if prime_tail is not None and prime_tail.is_trivial:
        prime_tail = None
    return SzmielewDescription(cyc, tf_t, div_t, q_mult, tail_t, prime_tail)


def direct_sum(a: SzmielewDescription, b: SzmielewDescription) -> SzmielewDescription:
    """The direct sum of two descriptions, multiplicities added exactly.

    Tails at a common prime are merged at the larger cutoff; blocks of the
    lower tail that fall below the new cutoff become explicit cyclic entries.
    """
    if a.prime_tail is not None and b.prime_tail is not None:
        pa, pb = a.prime_tail, b.prime_tail
        pat = pa.pattern_dict()
        for n, m in pb.pattern_dict().items():
            pat[n] = mult_add(pat.get(n, 0), m)
        prime_tail: Optional[PrimeTailShape] = make_prime_tail(
            pat, mult_add(pa.tf_mult, pb.tf_mult), mult_add(pa.div_mult, pb.div_mult))
    else:
        prime_tail = a.prime_tail or b.prime_tail

    cyclic = a.cyclic_dict()
    for pn, m in b.cyclic_dict().items():
        cyclic[pn] = mult_add(cyclic.get(pn, 0), m)
    tf = a.tf_dict()
    for p, m in b.tf_dict().items():
        tf[p] = mult_add(tf.get(p, 0), m)
    div = a.div_dict()
    for p, m in b.div_dict().items():
        div[p] = mult_add(div.get(p, 0), m)

    tails: Dict[int, TailSpec] = {}
    all_tail_primes = set(a.tail_dict()) | set(b.tail_dict())
    for p in all_tail_primes:
        sa = a.tail_dict().get(p)
        sb = b.tail_dict().get(p)
        max_exp = max([n for (q, n) in cyclic if q == p], default=0)
        cut = max([s.cutoff for s in (sa, sb) if s is not None] + [max_exp])
        total: Mult = 0
        for spec in (sa, sb):
            if spec is None:
                continue
            # explicit blocks for the stretch the raised cutoff now covers
            for n in range(spec.cutoff + 1, cut + 1):
                cyclic[(p, n)] = mult_add(cyclic.get((p, n), 0), spec.mult)
            total = mult_add(total, spec.mult)
        tails[p] = TailSpec(cut, total)

    return make_description(cyclic, tf, div, mult_add(a.q_mult, b.q_mult),
                            tails, prime_tail)


# ---------------------------------------------------------------------------
# Positive-primitive formulas


@dataclass(frozen=True, order=True)
class Tor:
    """The atom ``m x = 0``."""

    m: int


@dataclass(frozen=True, order=True)
class Div:
    """The atom ``p^r | p^s x`` with 0 <= s < r."""

    p: int
    r: int
    s: int


Atom = Union[Tor, Div]


def atom_sort_key(a: Atom) -> Tuple:
    if isinstance(a, Tor):
        return (0, a.m, 0, 0)
    return (1, a.p, a.r, a.s)


@dataclass(frozen=True)
class PPFormula:
    """A conjunction of canonical atoms; the empty conjunction is the whole group."""

    atoms: Tuple[Atom, ...] = ()

    @staticmethod
    def top() -> "PPFormula":
        return PPFormula(())

    @staticmethod
    def of(*atoms: Atom) -> "PPFormula":
        return PPFormula(tuple(sorted(atoms, key=atom_sort_key)))

    @property
    def is_top(self) -> bool:
        return not self.atoms

    def conjoin(self, other: "PPFormula") -> "PPFormula":
        return PPFormula.of(*(self.atoms + other.atoms))

    def mentioned_primes(self) -> List[int]:
        ps = set()
        for a in self.atoms:
            if isinstance(a, Div):
                ps.add(a.p)
            else:
                ps.update(prime_factors(a.m) if a.m > 1 else {})
        return sorted(ps)


def tor(m: int) -> PPFormula:
    return PPFormula.of(Tor(m))


def div(p: int, r: int, s: int) -> PPFormula:
    return PPFormula.of(Div(p, r, s))


def check_atom(a: Atom) -> Optional[str]:
    """Return a violation message for a malformed atom, else None."""
    if isinstance(a, Tor):
        if a.m < 1:
            return "tor(%d): modulus must be >= 1" % a.m
        return None
    if not is_prime(a.p):
        return "div(%d,%d,%d): %d is not prime" % (a.p, a.r, a.s, a.p)
    if not (0 <= a.s < a.r):
        return "div(%d,%d,%d): requires 0 <= s < r" % (a.p, a.r, a.s)
    return None


def validate_formula(f: PPFormula) -> List[str]:
    return [msg for a in f.atoms for msg in [check_atom(a)] if msg is not None]


# ---------------------------------------------------------------------------
# Description validation


def validate(desc: SzmielewDescription) -> List[str]:
    """Every violated invariant of a description; empty list means valid."""
    errs: List[str] = []
    for (p, n), m in desc.cyclic:
        if not is_prime(p):
            errs.append("cyclic base %d is not prime" % p)
        if n < 1:
            errs.append("cyclic exponent must be >= 1 (got %d at prime %d)" % (n, p))
        if not is_omega(m) and m < 0:
            errs.append("negative multiplicity at Z(%d^%d)" % (p, n))
    for p, m in desc.tf:
        if not is_prime(p):
            errs.append("tf base %d is not prime" % p)
        if not is_omega(m) and m < 0:
            errs.append("negative multiplicity at Z_(%d)" % p)
    for p, m in desc.div:
        if not is_prime(p):
            errs.append("div base %d is not prime" % p)
        if not is_omega(m) and m < 0:
            errs.append("negative multiplicity at Z(%d^inf)" % p)
    cyc = desc.cyclic_dict()
    for p, spec in desc.cyclic_tail:
        if not is_prime(p):
            errs.append("tail base %d is not prime" % p)
        if spec.mult == 0:
            errs.append("tail(%d): multiplicity must be >= 1" % p)
        if not is_omega(spec.mult) and spec.mult < 0:
            errs.append("tail(%d): negative multiplicity" % p)
        listed = [n for (q, n) in cyc if q == p]
        if listed and spec.cutoff < max(listed):
            errs.append("tail(%d): cutoff %d below listed exponent %d"
                        % (p, spec.cutoff, max(listed)))
    if not is_omega(desc.q_mult) and desc.q_mult < 0:
        errs.append("negative Q multiplicity")
    if desc.prime_tail is not None:
        for n, m in desc.prime_tail.cyclic_pattern:
            if n < 1:
                errs.append("prime-tail exponent must be >= 1 (got %d)" % n)
    return errs
