"""Closed-form dp-rank, classification predicates, vc-density, seed witnesses.

dp_rank computes the value twice, once by the four-case dispatch and once by
the epsilon equation, and asserts they agree; a disagreement is an internal
error (CLI exit code 2), never a user error.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple, Union

from .core import PPFormula, SzmielewDescription, div, is_omega, tor
from .normalize import DerivedSets, derived_sets, derived_sets_json, normalize


def gap_count(ns: Iterable[int]) -> int:
    """Size of a maximum subset with pairwise differences >= 2.

    Greedy ascending scan; optimal because taking the least available
    element never blocks more later choices than any alternative.
    """
    count = 0
    last = None
    for n in sorted(set(ns)):
        if last is None or n - last >= 2:
            count += 1
            last = n
    return count


@dataclass(frozen=True)
class WitnessFamily:
    tag: str
    formulas: Tuple[PPFormula, ...]


@dataclass(frozen=True)
class RankReport:
    dp: Optional[int]                  # None means infinite
    strong: bool
    case_tag: Union[int, str]          # 1..4, "finite-group", or "infinite"
    derived: DerivedSets
    epsilons: Dict[str, int]
    partition: Dict[str, Tuple[int, ...]]
    witnesses: Tuple[WitnessFamily, ...]


@dataclass(frozen=True)
class Classification:
    strong: bool
    finite_dp: bool
    dp_minimal: bool


def _is_torsion_free(strict: SzmielewDescription) -> bool:
    shape = strict.prime_tail
    return (not strict.cyclic and not strict.div and not strict.cyclic_tail
            and (shape is None or (not shape.cyclic_pattern and shape.div_mult == 0)))


def _has_bounded_exponent(strict: SzmielewDescription) -> bool:
    return (not strict.tf and not strict.div and strict.q_mult == 0
            and not strict.cyclic_tail and strict.prime_tail is None)


def _finite_dp(strict: SzmielewDescription, ds: DerivedSets) -> bool:
    return not (ds.tf_inf_infinite or ds.d_inf_infinite or ds.u_pairs_infinite
                or ds.u_inf_at_infinite)


def _strong(ds: DerivedSets) -> bool:
    return not (ds.tf_inf_infinite or ds.u_pairs_infinite or ds.u_inf_at_infinite)


def _partition(strict: SzmielewDescription, ds: DerivedSets
               ) -> Dict[str, Tuple[int, ...]]:
    cyclic_primes = sorted({p for (p, _n), _m in strict.cyclic}
                           | set(ds.u_inf))
    p1 = tuple(sorted(ds.u_inf))
    p2 = tuple(p for p in cyclic_primes
               if p not in ds.u_inf and ds.u_inf_at.get(p))
    p3 = tuple(p for p in cyclic_primes if p not in p1 and p not in p2)
    return {"P1": p1, "P2": p2, "P3": p3}


def _epsilons(strict: SzmielewDescription, ds: DerivedSets) -> Dict[str, int]:
    shape = strict.prime_tail
    has_tf = bool(strict.tf) or (shape is not None and shape.tf_mult != 0)
    has_div = bool(strict.div) or (shape is not None and shape.div_mult != 0)
    return {
        "U": 1 if ds.u_inf else 0,
        "Exp": 0 if _has_bounded_exponent(strict) else 1,
        "Tf": 1 if has_tf else 0,
        "D": 1 if has_div else 0,
    }


def _gap_sum(ds: DerivedSets) -> int:
    return sum(gap_count(ns) for ns in ds.u_inf_at.values())


def _epsilon_value(strict: SzmielewDescription, ds: DerivedSets,
                   eps: Dict[str, int]) -> int:
    gaps = _gap_sum(ds)
    head = gaps + len(ds.u_inf)
    lone = (1 - max(eps["U"], eps["Tf"], eps["D"])) * eps["Exp"]
    tail_term = max(eps["Tf"], eps["D"]) * max(1 - eps["U"],
                                               len(ds.tf_inf), len(ds.d_inf))
    return head + lone + tail_term


def _case_value(strict: SzmielewDescription, ds: DerivedSets
                ) -> Tuple[Union[int, str], int]:
    gaps = _gap_sum(ds)
    if ds.u_inf:
        return 4, gaps + len(ds.u_inf) + max(len(ds.tf_inf), len(ds.d_inf))
    if _is_torsion_free(strict):
        return 1, max(1, len(ds.tf_inf))
    if _has_bounded_exponent(strict):
        return 2, gaps
    return 3, gaps + max(1, len(ds.tf_inf), len(ds.d_inf))


def seed_witnesses(desc: SzmielewDescription) -> Tuple[WitnessFamily, ...]:
    """Constructive inp-families certifying the closed-form contributions.

    Each family is valid on its own (checked downstream by the oracle); the
    tag names what the family certifies, and its size equals that term.
    """
    strict = normalize(desc)
    ds = derived_sets(strict)
    out: List[WitnessFamily] = []
    if ds.tf_inf:
        fams = tuple(div(p, 1, 0) for p in sorted(ds.tf_inf))
        out.append(WitnessFamily("tf-quotients", fams))
    if ds.d_inf:
        primes = sorted(ds.d_inf)
        fams = []
        for p in primes:
            others = [q for q in primes if q != p]
            m = 1
            for q in others:
                m *= q
            fams.append(tor(m if others else p))
        out.append(WitnessFamily("divisible-socles", tuple(fams)))
    for p in sorted(ds.u_inf_at):
        ns = ds.u_inf_at[p]
        if not ns:
            continue
        exps = []
        last = None
        for n in sorted(ns):
            if last is None or n - last >= 2:
                exps.append(n + 1)
                last = n
        fams = tuple(div(p, e, e - i) for i, e in enumerate(exps, start=1))
        out.append(WitnessFamily("cyclic-gaps:%d" % p, fams))
    if ds.u_inf:
        fams = tuple(div(p, 1, 0) for p in sorted(ds.u_inf))
        out.append(WitnessFamily("unbounded-length", fams))
    for p in sorted(ds.u_inf_at_infinite):
        fams = tuple(div(p, 2 * n, n) for n in (1, 3, 7))
        out.append(WitnessFamily("non-strong-prefix:%d" % p, fams))
    return tuple(out)


def dp_rank(desc: SzmielewDescription) -> RankReport:
    strict = normalize(desc)
    ds = derived_sets(strict)
    eps = _epsilons(strict, ds)
    partition = _partition(strict, ds)
    witnesses = seed_witnesses(strict)
    strong = _strong(ds)

    finite_group = (_has_bounded_exponent(strict)
                    and all(not is_omega(m) for _pn, m in strict.cyclic))
    if finite_group:
        return RankReport(0, strong, "finite-group", ds, eps, partition, witnesses)
    if not _finite_dp(strict, ds):
        return RankReport(None, strong, "infinite", ds, eps, partition, witnesses)

    case, value = _case_value(strict, ds)
    eps_value = _epsilon_value(strict, ds, eps)
    if value != eps_value:
        raise AssertionError(
            "case equation %d gives %d but epsilon equation gives %d"
            % (case, value, eps_value))
    return RankReport(value, strong, case, ds, eps, partition, witnesses)


def classify(desc: SzmielewDescription) -> Classification:
    strict = normalize(desc)
    ds = derived_sets(strict)
    strong = _strong(ds)
    finite_dp = _finite_dp(strict, ds)
    report = dp_rank(strict)
    if finite_dp and not strong:
        raise AssertionError("finite dp-rank must imply strong")
    finitely_many_torsion = not (ds.d_inf_infinite or ds.u_pairs_infinite)
    if (strong and finitely_many_torsion) != finite_dp:
        raise AssertionError("strongness corollary violated")
    if finite_dp != (report.dp is not None):
        raise AssertionError("finite-dp predicate disagrees with dp_rank")
    return Classification(strong, finite_dp, report.dp == 1)


@dataclass(frozen=True)
class VcReport:
    values: Dict[int, Optional[int]]   # None means infinite


def vc_density(desc: SzmielewDescription, ms: Iterable[int]) -> VcReport:
    report = dp_rank(desc)
    out: Dict[int, Optional[int]] = {}
    for m in ms:
        if m < 1:
            raise ValueError("vc-density argument must be >= 1")
        out[m] = None if report.dp is None else m * report.dp
    return VcReport(out)


# ---------------------------------------------------------------------------
# JSON


def rank_json(r: RankReport) -> dict:
    from .dsl import render_formula
    return {
        "dp": "inf" if r.dp is None else r.dp,
        "strong": r.strong,
        "case": r.case_tag,
        "epsilons": r.epsilons,
        "partition": {k: list(v) for k, v in r.partition.items()},
        "derived": derived_sets_json(r.derived),
        "witness": [{"tag": w.tag,
                     "formulas": [render_formula(f) for f in w.formulas]}
                    for w in r.witnesses],
    }


def classify_json(c: Classification) -> dict:
    return {"strong": c.strong, "finite_dp": c.finite_dp,
            "dp_minimal": c.dp_minimal}


def vc_json(v: VcReport) -> dict:
    return {"values": [{"m": m, "vc": "inf" if x is None else x}
                       for m, x in sorted(v.values.items())]}
