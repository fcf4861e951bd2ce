"""Brute-force verification of inp-pattern depth via the index criterion.

A family of p.p. subgroups witnesses depth k exactly when every
leave-one-out intersection has infinite index over the full intersection.
The search enumerates the canonical candidate pool, deduplicates formulas
by their evaluated profile, and explores families depth-first with three
prunings, all of which preserve exhaustiveness:

  - a formula of finite index can never appear in a valid family;
  - validity is closed downward, so supersets of invalid families die;
  - every member of a valid family is the unique deepest local subgroup at
    some block, which bounds the depth by a per-block slot count.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .core import (Index, PPFormula, SzmielewDescription, div, is_omega, tor)
from .normalize import normalize
from .ppeval import (_block_index, _eval_block, _formula_requirements,
                     _local_meet, _tail_depth, _WHOLE, materialize)

DEFAULT_MAX_POOL = 50000


class PoolOverflowError(RuntimeError):
    """The candidate pool exceeds the configured cap (env SZK_MAX_POOL)."""


def _max_pool() -> int:
    raw = os.environ.get("SZK_MAX_POOL")
    return int(raw) if raw else DEFAULT_MAX_POOL


def _pool_primes(strict: SzmielewDescription) -> List[int]:
    primes = strict.primes()
    if strict.prime_tail is not None:
        # one representative unlisted prime stands in for all of them
        q = 2
        while q in primes:
            q += 1
            while not _is_prime(q):
                q += 1
        primes = sorted(primes + [q])
    if not primes:
        primes = [2]
    return primes


def _is_prime(n: int) -> bool:
    from .core import is_prime
    return is_prime(n)


def _enumerate_formulas(primes: Sequence[int], B: int) -> List[PPFormula]:
    """tor of prime-power products over distinct primes, then single div atoms.

    This order decides which formula represents a profile class after
    deduplication: torsion atoms win ties against divisibility atoms.
    """
    tors: List[int] = []
    for k in range(1, len(primes) + 1):
        for subset in itertools.combinations(primes, k):
            for exps in itertools.product(range(1, B + 1), repeat=k):
                m = 1
                for p, e in zip(subset, exps):
                    m *= p ** e
                tors.append(m)
    out = [tor(m) for m in sorted(tors)]
    for p in primes:
        for r in range(1, B + 1):
            for s in range(r):
                out.append(div(p, r, s))
    return out


def _search_key(f: PPFormula) -> int:
    # divisibility candidates are tried first during the family search
    from .core import Div as _Div
    return 0 if len(f.atoms) == 1 and isinstance(f.atoms[0], _Div) else 1


def _materialize_for_pool(strict: SzmielewDescription, primes: Sequence[int],
                          B: int):
    bounds = {p: B for p in primes}
    extra: Tuple[int, ...] = ()
    if strict.prime_tail is not None:
        listed = set(strict.primes())
        extra = tuple(sorted(set(primes) - listed))
    return materialize(strict, bounds, extra)


def _locals_of(blocks, formula: PPFormula) -> tuple:
    return tuple(_eval_block(kind, data, formula) for kind, data, _m in blocks)


def _meet_locals(blocks, a: tuple, b: tuple) -> tuple:
    return tuple(_local_meet(kind, x, y)
                 for (kind, _d, _m), x, y in zip(blocks, a, b))


def _index_of(blocks, big: tuple, small: tuple) -> Index:
    out = Index.one()
    for (kind, data, mult), x, y in zip(blocks, big, small):
        out = out * _block_index(kind, data, mult, x, y)
        if out.is_infinite:
            return out
    return out


def _block_inf(kind: str, data: tuple, mult, vh, vk) -> bool:
    """Whether the per-block index of vk inside vh is infinite."""
    if vh == vk:
        return False
    if kind == "cyc":
        return is_omega(mult)
    if kind == "tf":
        return vk is None or is_omega(mult)
    if kind == "div":
        return vh is None or is_omega(mult)
    if kind in ("q", "ptail"):
        return True
    # tail pairs
    (ah, bh), (ak, bk) = vh, vk
    if bh is None and bk is not None:
        return True
    limit = (ak - ah) if bh is None else (bh - bk)
    if limit > 0:
        return True
    if not is_omega(mult):
        return False
    _p, split = data
    horizon = max(split,
                  ah + (bh if bh is not None else 0),
                  ak + (bk if bk is not None else 0))
    for n in range(split + 1, horizon + 1):
        if _tail_depth(ak, bk, n) > _tail_depth(ah, bh, n):
            return True
    return False


def _index_infinite(blocks, big: tuple, small: tuple) -> bool:
    for (kind, data, mult), x, y in zip(blocks, big, small):
        if _block_inf(kind, data, mult, x, y):
            return True
    return False


def _whole_locals(blocks) -> tuple:
    return tuple(_WHOLE[kind] for kind, _d, _m in blocks)


def candidate_pool(desc: SzmielewDescription, B: int) -> List[PPFormula]:
    """Canonical single-atom pool plus coprime tor-products, profile-deduped."""
    if B < 1:
        raise ValueError("pool bound must be >= 1")
    strict = normalize(desc)
    primes = _pool_primes(strict)
    formulas = _enumerate_formulas(primes, B)
    if len(formulas) > _max_pool():
        raise PoolOverflowError(
            "candidate pool has %d formulas, cap is %d (set SZK_MAX_POOL)"
            % (len(formulas), _max_pool()))
    blocks = _materialize_for_pool(strict, primes, B)
    seen = set()
    out = []
    for f in formulas:
        key = _locals_of(blocks, f)
        if key not in seen:
            seen.add(key)
            out.append(f)
    return out


@dataclass(frozen=True)
class InpVerdict:
    valid: bool
    transcript: Tuple[Index, ...]      # leave-one-out index per member


def verify_inp(desc: SzmielewDescription, family: Sequence[PPFormula]) -> InpVerdict:
    if not family:
        raise ValueError("family must be non-empty")
    strict = normalize(desc)
    bounds, extra = _formula_requirements(strict, family)
    blocks = materialize(strict, bounds, extra)
    locs = [_locals_of(blocks, f) for f in family]
    transcript = []
    for i in range(len(family)):
        rest = _whole_locals(blocks)
        for j, lj in enumerate(locs):
            if j != i:
                rest = _meet_locals(blocks, rest, lj)
        full = _meet_locals(blocks, rest, locs[i])
        transcript.append(_index_of(blocks, rest, full))
    return InpVerdict(all(t.is_infinite for t in transcript), tuple(transcript))


@dataclass(frozen=True)
class BreadthResult:
    depth: int
    witness: Tuple[PPFormula, ...]
    pool_bound: int
    exhausted: bool


def _slot_bound(blocks) -> int:
    """Upper bound on any valid family's size from unique-extreme slots.

    Each member of a valid family must be the strict extreme at some block:
    the unique deepest on a chain block, or the unique depth-offset maximum
    or torsion-bound minimum on a tail block.  A finite-multiplicity tail
    admits only one of the two: an offset jump with matching bounds has a
    finite limit, so it needs multiplicity omega to go infinite, and the
    all-unbounded configuration the offset slot needs excludes any member
    with a finite bound there.
    """
    total = 0
    for kind, _data, mult in blocks:
        if kind == "cyc":
            total += 1 if is_omega(mult) else 0
        elif kind == "tail":
            total += 2 if is_omega(mult) else 1
        else:
            total += 1
    return total


def _slots_of(blocks) -> List[Tuple[int, str]]:
    """One entry per way a family member can be the strict extreme at a block.

    Modes: "max" (unique deepest on an omega chain), "tfzero" / "divzero" /
    "bool" (the member hits the degenerate local while every other member
    stays clear of it), "divmin" / "tailb" (unique minimal torsion bound),
    "taila" (unique maximal depth offset on a tail).
    """
    out: List[Tuple[int, str]] = []
    for bi, (kind, _data, mult) in enumerate(blocks):
        if kind == "cyc":
            out.append((bi, "max"))
        elif kind == "tf":
            out.append((bi, "max" if is_omega(mult) else "tfzero"))
        elif kind == "div":
            out.append((bi, "divmin" if is_omega(mult) else "divzero"))
        elif kind in ("q", "ptail"):
            out.append((bi, "bool"))
        else:
            out.append((bi, "tailb"))
            out.append((bi, "taila"))
    return out


def _tf_key(v):
    return (1, 0) if v is None else (0, v)


def _can_occupy(mode: str, mult, v) -> bool:
    if mode == "max":
        return _tf_key(v) > (0, 0)
    if mode == "tfzero":
        return v is None
    if mode == "divzero":
        return v is not None
    if mode == "bool":
        return v is False
    if mode == "divmin":
        return v is not None
    if mode == "tailb":
        return v[1] is not None
    # taila: a positive offset; a finite-multiplicity tail additionally needs
    # every bound unbounded, including the occupant's own
    return v[0] >= 1 and (is_omega(mult) or v[1] is None)


def _beats(mode: str, mult, vx, vy) -> bool:
    """Whether member y (local vy) loses to the slot occupant x (local vx)."""
    if mode == "max":
        return _tf_key(vy) < _tf_key(vx)
    if mode == "tfzero":
        return vy is not None
    if mode == "divzero":
        return vy is None
    if mode == "bool":
        return vy is True
    if mode == "divmin":
        return vy is None or vy > vx
    if mode == "tailb":
        return vy[1] is None or vy[1] > vx[1]
    return vy[0] < vx[0] and (is_omega(mult) or vy[1] is None)


def breadth_search(desc: SzmielewDescription, B: int, maxK: int) -> BreadthResult:
    if B < 1 or maxK < 1:
        raise ValueError("pool bound and depth cap must be >= 1")
    strict = normalize(desc)
    primes = _pool_primes(strict)
    formulas = _enumerate_formulas(primes, B)
    if len(formulas) > _max_pool():
        raise PoolOverflowError(
            "candidate pool has %d formulas, cap is %d (set SZK_MAX_POOL)"
            % (len(formulas), _max_pool()))
    blocks = _materialize_for_pool(strict, primes, B)
    # finite-multiplicity cyclic blocks can never contribute an infinite
    # index, so validity only depends on the locals of the other blocks
    rblocks = tuple(b for b in blocks
                    if b[0] != "cyc" or is_omega(b[2]))
    whole = _whole_locals(rblocks)

    # dedup by relevant profile, drop finite-index subgroups
    cands: List[Tuple[PPFormula, tuple]] = []
    seen = set()
    for f in formulas:
        key = _locals_of(rblocks, f)
        if key in seen:
            continue
        seen.add(key)
        if _index_infinite(rblocks, whole, key):
            cands.append((f, key))
    cands.sort(key=lambda fk: _search_key(fk[0]))
    blocks = rblocks

    ub = min(_slot_bound(blocks), len(cands))
    target = min(maxK, ub)
    slots = _slots_of(blocks)

    def family_valid(idxs: List[int]) -> bool:
        for i in idxs:
            rest = whole
            for j in idxs:
                if j != i:
                    rest = _meet_locals(blocks, rest, cands[j][1])
            full = _meet_locals(blocks, rest, cands[i][1])
            if not _index_infinite(blocks, rest, full):
                return False
        return True

    def solve(chosen_slots: Tuple[int, ...]) -> Optional[List[int]]:
        """Find a family occupying exactly these slots, or prove none exists.

        Members are searched as equivalence classes of candidates sharing
        their locals at the participating blocks; validity at these slots
        only depends on those locals, and any family witnessed elsewhere is
        found under the slot set naming its actual witness blocks.
        """
        S = [slots[si] for si in chosen_slots]
        bis = sorted({bi for bi, _mode in S})
        classes: List[Tuple[int, tuple]] = []      # (candidate index, projection)
        proj_seen = set()
        for ci, (_f, key) in enumerate(cands):
            proj = tuple(key[bi] for bi in bis)
            if proj not in proj_seen:
                proj_seen.add(proj)
                classes.append((ci, proj))
        pos = {bi: k for k, bi in enumerate(bis)}
        mults = [blocks[bi][2] for bi, _mode in S]
        at = [pos[bi] for bi, _mode in S]
        t = len(S)

        domains: List[List[int]] = []
        for k, (_bi, mode) in enumerate(S):
            domains.append([c for c in range(len(classes))
                            if _can_occupy(mode, mults[k], classes[c][1][at[k]])])

        # prune every class that cannot lose to any possible occupant of a
        # slot, iterating to a fixed point
        changed = True
        while changed:
            changed = False
            for k, (_bi, mode) in enumerate(S):
                if not domains[k]:
                    return None
                vals = [classes[c][1][at[k]] for c in domains[k]]
                if mode == "max":
                    top = max(_tf_key(v) for v in vals)
                    ok = lambda v: _tf_key(v) < top
                elif mode == "divmin":
                    mn = min(v for v in vals)
                    ok = lambda v: v is None or v > mn
                elif mode == "tailb":
                    mn = min(v[1] for v in vals)
                    ok = lambda v: v[1] is None or v[1] > mn
                elif mode == "taila":
                    top = max(v[0] for v in vals)
                    if is_omega(mults[k]):
                        ok = lambda v: v[0] < top
                    else:
                        ok = lambda v: v[0] < top and v[1] is None
                elif mode == "tfzero":
                    ok = lambda v: v is not None
                elif mode == "divzero":
                    ok = lambda v: v is None
                else:
                    ok = lambda v: v is True
                for j in range(t):
                    if j == k:
                        continue
                    kept = [c for c in domains[j] if ok(classes[c][1][at[k]])]
                    if len(kept) != len(domains[j]):
                        domains[j] = kept
                        changed = True

        order = sorted(range(t), key=lambda k: len(domains[k]))

        def assign(step: int, doms: List[List[int]],
                   picked: List[Tuple[int, int]]) -> Optional[List[int]]:
            if step == t:
                reps = sorted(classes[c][0] for _k, c in picked)
                return reps if family_valid(reps) else None
            k = order[step]
            for c in doms[k]:
                vx = classes[c][1][at[k]]
                nxt = list(doms)
                dead = False
                for later in order[step + 1:]:
                    lk, lmode = later, S[later][1]
                    kept = []
                    for z in doms[later]:
                        if z == c:
                            continue
                        vz = classes[z][1]
                        if (_beats(S[k][1], mults[k], vx, vz[at[k]])
                                and _beats(lmode, mults[lk],
                                           vz[at[lk]], classes[c][1][at[lk]])):
                            kept.append(z)
                    if not kept:
                        dead = True
                        break
                    nxt[later] = kept
                if dead:
                    continue
                got = assign(step + 1, nxt, picked + [(k, c)])
                if got is not None:
                    return got
            return None

        return assign(0, domains, [])

    best: List[int] = []
    for t in range(1, target + 1):
        found = None
        for chosen in itertools.combinations(range(len(slots)), t):
            tails_used = [slots[si][0] for si in chosen]
            if len(set(tails_used)) < t:
                # both modes of one tail block; only an omega tail allows it
                dup = [bi for bi in set(tails_used) if tails_used.count(bi) > 1]
                if any(not is_omega(blocks[bi][2]) for bi in dup):
                    continue
            found = solve(chosen)
            if found is not None:
                break
        if found is None:
            break
        best = found
    capped = len(best) >= maxK and maxK < ub
    witness = tuple(cands[i][0] for i in best)
    return BreadthResult(len(best), witness, B, exhausted=not capped)


# ---------------------------------------------------------------------------
# JSON


def verdict_json(v: InpVerdict) -> dict:
    from .ppeval import index_json
    return {"valid": v.valid,
            "transcript": [index_json(t) for t in v.transcript]}


def breadth_json(r: BreadthResult) -> dict:
    from .dsl import render_formula
    return {"depth": r.depth,
            "witness": [render_formula(f) for f in r.witness],
            "pool_bound": r.pool_bound,
            "exhausted": r.exhausted}
