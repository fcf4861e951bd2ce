"""Blockwise evaluation of p.p. formulas to exact subgroup profiles.

A description is first materialized into a finite list of blocks: explicit
cyclic blocks, torsion-free and divisible blocks, a residual tail block per
unbounded-length prime, and one residual block for an all-primes tail.
Tails are split far enough that every formula atom acts uniformly on the
residual, which makes the (a, b) pair coordinates exact.

Local subgroup coordinates per block kind (None encodes the extreme value):
  cyc (p, n): depth d, the subgroup p^d Z(p^n)
  tf p:       depth a for p^a Z_(p), or None for the zero subgroup
  div p:      torsion bound b (the p^b-torsion of Z(p^inf)), None for whole
  q:          True (whole) or False (zero)
  tail (p,T): pair (a, b); at block n > T the depth is max(a, n - b)
  ptail:      True (whole) or False (zero on every residual prime)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple, Union

from .core import (INFINITE, Index, Mult, PPFormula, SzmielewDescription,
                   Div, Tor, _Infinite, is_omega, mult_add,
                   p_adic_valuation, prime_factors)

Block = Tuple[str, tuple, Mult]


def _formula_requirements(desc: SzmielewDescription,
                          formulas: Iterable[PPFormula]
                          ) -> Tuple[Dict[int, int], Tuple[int, ...]]:
    """Tail split bounds per prime and the extra primes to instantiate."""
    atoms = [a for f in formulas for a in f.atoms]
    tail_bounds: Dict[int, int] = {}
    mentioned = set()
    for a in atoms:
        if isinstance(a, Div):
            tail_bounds[a.p] = max(tail_bounds.get(a.p, 0), a.r)
            mentioned.add(a.p)
        else:
            for p, e in prime_factors(a.m).items():
                tail_bounds[p] = max(tail_bounds.get(p, 0), e)
                mentioned.add(p)
    extra: Tuple[int, ...] = ()
    if desc.prime_tail is not None:
        extra = tuple(sorted(mentioned - set(desc.primes())))
    return tail_bounds, extra


def materialize(desc: SzmielewDescription, tail_bounds: Dict[int, int],
                extra_primes: Tuple[int, ...]) -> Tuple[Block, ...]:
    """Split tails at the given bounds and instantiate extra primes."""
    blocks: List[Block] = []
    cyclic = desc.cyclic_dict()
    tails = desc.tail_dict()
    for p, spec in sorted(tails.items()):
        split = max(spec.cutoff, tail_bounds.get(p, 0))
        for n in range(spec.cutoff + 1, split + 1):
            cyclic[(p, n)] = mult_add(cyclic.get((p, n), 0), spec.mult)
    listed = set(desc.primes())
    if desc.prime_tail is not None:
        shape = desc.prime_tail
        for p in extra_primes:
            if p in listed:
                continue
            for n, m in shape.cyclic_pattern:
                cyclic[(p, n)] = m
    for (p, n), m in sorted(cyclic.items()):
        blocks.append(("cyc", (p, n), m))
    for p, spec in sorted(tails.items()):
        split = max(spec.cutoff, tail_bounds.get(p, 0))
        blocks.append(("tail", (p, split), spec.mult))
    tf = desc.tf_dict()
    dv = desc.div_dict()
    if desc.prime_tail is not None:
        for p in extra_primes:
            if p in listed:
                continue
            shape = desc.prime_tail
            if shape.tf_mult != 0:
                tf[p] = shape.tf_mult
            if shape.div_mult != 0:
                dv[p] = shape.div_mult
    for p, m in sorted(tf.items()):
        blocks.append(("tf", (p,), m))
    for p, m in sorted(dv.items()):
        blocks.append(("div", (p,), m))
    if desc.q_mult != 0:
        blocks.append(("q", (), desc.q_mult))
    if desc.prime_tail is not None and not desc.prime_tail.is_trivial:
        excluded = tuple(sorted(listed | set(extra_primes)))
        blocks.append(("ptail", (desc.prime_tail, excluded), 1))
    return tuple(blocks)


# ---------------------------------------------------------------------------
# Atom tables


def _atom_local(kind: str, data: tuple, atom):
    if kind == "cyc":
        p, n = data
        if isinstance(atom, Div):
            if atom.p != p:
                return 0
            if n <= atom.s:
                return 0
            if n <= atom.r:
                return n - atom.s
            return atom.r - atom.s
        return max(n - p_adic_valuation(atom.m, p), 0)
    if kind == "tf":
        (p,) = data
        if isinstance(atom, Div):
            return atom.r - atom.s if atom.p == p else 0
        return None  # torsion kills a torsion-free block
    if kind == "div":
        (p,) = data
        if isinstance(atom, Div):
            return None  # divisible: whole
        return p_adic_valuation(atom.m, p)
    if kind == "q":
        return isinstance(atom, Div)
    if kind == "tail":
        p, _split = data
        if isinstance(atom, Div):
            return (atom.r - atom.s, None) if atom.p == p else (0, None)
        return (0, p_adic_valuation(atom.m, p))
    if kind == "ptail":
        return isinstance(atom, Div)
    raise AssertionError("unknown block kind %r" % kind)


_WHOLE = {"cyc": 0, "tf": 0, "div": None, "q": True,
          "tail": (0, None), "ptail": True}


def _local_meet(kind: str, a, b):
    if kind == "cyc":
        return max(a, b)
    if kind == "tf":
        if a is None or b is None:
            return None
        return max(a, b)
    if kind == "div":
        if a is None:
            return b
        if b is None:
            return a
        return min(a, b)
    if kind in ("q", "ptail"):
        return a and b
    # tail pairs
    bb = (a[1] if b[1] is None else b[1] if a[1] is None else min(a[1], b[1]))
    return (max(a[0], b[0]), bb)


def _eval_block(kind: str, data: tuple, formula: PPFormula):
    v = _WHOLE[kind]
    for atom in formula.atoms:
        v = _local_meet(kind, v, _atom_local(kind, data, atom))
    return v


@dataclass(frozen=True)
class SubgroupProfile:
    """Exact p.p.-definable subgroup, one local coordinate per block."""

    desc: SzmielewDescription
    formula: PPFormula
    blocks: Tuple[Block, ...]
    locals: tuple


def eval_formula(desc: SzmielewDescription, formula: PPFormula,
                 tail_bounds: Optional[Dict[int, int]] = None,
                 extra_primes: Tuple[int, ...] = ()) -> SubgroupProfile:
    req_bounds, req_extra = _formula_requirements(desc, [formula])
    for p, t in (tail_bounds or {}).items():
        req_bounds[p] = max(req_bounds.get(p, 0), t)
    extras = tuple(sorted(set(req_extra) | set(extra_primes)))
    blocks = materialize(desc, req_bounds, extras)
    locs = tuple(_eval_block(kind, data, formula) for kind, data, _m in blocks)
    return SubgroupProfile(desc, formula, blocks, locs)


def _common(h: SubgroupProfile, k: SubgroupProfile
            ) -> Tuple[Tuple[Block, ...], tuple, tuple]:
    """Re-evaluate both formulas over one shared materialization."""
    if h.desc != k.desc:
        raise ValueError("profiles over different descriptions")
    bounds, extra = _formula_requirements(h.desc, [h.formula, k.formula])
    blocks = materialize(h.desc, bounds, extra)
    lh = tuple(_eval_block(kind, data, h.formula) for kind, data, _m in blocks)
    lk = tuple(_eval_block(kind, data, k.formula) for kind, data, _m in blocks)
    return blocks, lh, lk


def meet(h: SubgroupProfile, k: SubgroupProfile) -> SubgroupProfile:
    blocks, lh, lk = _common(h, k)
    lm = tuple(_local_meet(kind, a, b)
               for (kind, _d, _m), a, b in zip(blocks, lh, lk))
    return SubgroupProfile(h.desc, h.formula.conjoin(k.formula), blocks, lm)


# ---------------------------------------------------------------------------
# Index classes


def _tail_depth(a: int, b: Optional[int], n: int) -> int:
    return a if b is None else max(a, n - b)


def _block_index(kind: str, data: tuple, mult: Mult, vh, vk) -> Index:
    """Exact index of the smaller local subgroup vk inside vh, with mult copies."""
    if kind == "cyc":
        p, _n = data
        e = vk - vh
        if e == 0:
            return Index.one()
        return Index.infinite() if is_omega(mult) else Index.prime_power(p, e * mult)
    if kind == "tf":
        (p,) = data
        if vh == vk:
            return Index.one()
        if vk is None:
            return Index.infinite()
        e = vk - vh
        return Index.infinite() if is_omega(mult) else Index.prime_power(p, e * mult)
    if kind == "div":
        (p,) = data
        if vh == vk:
            return Index.one()
        if vh is None:
            return Index.infinite()
        e = vh - vk
        return Index.infinite() if is_omega(mult) else Index.prime_power(p, e * mult)
    if kind == "q":
        if vh == vk:
            return Index.one()
        return Index.infinite()
    if kind == "ptail":
        if vh == vk:
            return Index.one()
        return Index.infinite()
    # tail: compare asymptotics of the per-block exponent e(n)
    p, split = data
    (ah, bh), (ak, bk) = vh, vk
    if bh is None and bk is None:
        limit = ak - ah
    elif bh is not None and bk is not None:
        limit = bh - bk
    elif bk is not None:  # bh infinite, bk finite
        return Index.infinite()
    else:
        raise AssertionError("tail index with non-nested pair")
    if limit > 0:
        return Index.infinite()
    # limit 0: finitely many exceptional blocks
    horizon = max(split,
                  ah + (bh if bh is not None else 0),
                  ak + (bk if bk is not None else 0))
    total = 0
    for n in range(split + 1, horizon + 1):
        e = _tail_depth(ak, bk, n) - _tail_depth(ah, bh, n)
        if e > 0:
            if is_omega(mult):
                return Index.infinite()
            total += e * mult
    return Index.prime_power(p, total) if total else Index.one()


def index_class(h: SubgroupProfile, k: SubgroupProfile) -> Index:
    """The exact index [h : h meet k]."""
    blocks, lh, lk = _common(h, k)
    out = Index.one()
    for (kind, data, mult), a, b in zip(blocks, lh, lk):
        m = _local_meet(kind, a, b)
        out = out * _block_index(kind, data, mult, a, m)
        if out.is_infinite:
            return out
    return out


# ---------------------------------------------------------------------------
# Cardinality and exponent


@dataclass(frozen=True)
class ProfileStats:
    cardinality: Index
    exponent: Union[int, _Infinite]  # least m with m H = 0, or INFINITE


def profile_stats(h: SubgroupProfile) -> ProfileStats:
    card = Index.one()
    exps: Dict[int, int] = {}
    unbounded = False
    for (kind, data, mult), v in zip(h.blocks, h.locals):
        if kind == "cyc":
            p, n = data
            size = n - v
            if size > 0:
                card = card * (Index.infinite() if is_omega(mult)
                               else Index.prime_power(p, size * mult))
                exps[p] = max(exps.get(p, 0), size)
        elif kind == "tf":
            if v is not None:
                card = Index.infinite()
                unbounded = True
        elif kind == "div":
            (p,) = data
            if v is None:
                card = Index.infinite()
                unbounded = True
            elif v > 0:
                card = card * (Index.infinite() if is_omega(mult)
                               else Index.prime_power(p, v * mult))
                exps[p] = max(exps.get(p, 0), v)
        elif kind == "q":
            if v:
                card = Index.infinite()
                unbounded = True
        elif kind == "tail":
            p, _split = data
            a, b = v
            if b is None:
                card = Index.infinite()
                unbounded = True
            elif b > 0:
                # infinitely many blocks, each eventually of size p^b
                card = Index.infinite()
                exps[p] = max(exps.get(p, 0), b)
        else:  # ptail
            if v:
                card = Index.infinite()
                unbounded = True
    if unbounded:
        return ProfileStats(card, INFINITE)
    exponent = 1
    for p, e in sorted(exps.items()):
        exponent *= p ** e
    return ProfileStats(card, exponent)


# ---------------------------------------------------------------------------
# JSON dump


def _local_json(kind: str, v):
    if kind == "cyc":
        return {"depth": v}
    if kind == "tf":
        return {"depth": "zero" if v is None else v}
    if kind == "div":
        return {"bound": "inf" if v is None else v}
    if kind in ("q", "ptail"):
        return {"whole": v}
    return {"a": v[0], "b": "inf" if v[1] is None else v[1]}


def profile_json(h: SubgroupProfile) -> dict:
    from .core import is_omega as _isw
    from .dsl import render_formula, render_group
    blocks = []
    for (kind, data, mult), v in zip(h.blocks, h.locals):
        entry = {"kind": kind, "mult": "w" if _isw(mult) else mult}
        if kind == "cyc":
            entry["p"], entry["n"] = data
        elif kind in ("tf", "div"):
            entry["p"] = data[0]
        elif kind == "tail":
            entry["p"], entry["split"] = data
        entry["local"] = _local_json(kind, v)
        blocks.append(entry)
    stats = profile_stats(h)
    return {
        "group": render_group(h.desc),
        "formula": render_formula(h.formula),
        "blocks": blocks,
        "cardinality": index_json(stats.cardinality),
        "exponent": "inf" if isinstance(stats.exponent, _Infinite) else stats.exponent,
    }


def index_json(i: Index):
    if i.is_infinite:
        return "inf"
    return {"value": i.value(),
            "factors": [{"p": p, "e": e} for p, e in i.factors]}
