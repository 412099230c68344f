"""Which formulas stay true once announced while false.

The syntactic test searches for a disjunctive lying form witness; the
semantic test decides believable 01-validity on canonical KD45 models.
The two must agree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

from .errors import BetaChoiceIncomplete
from .formula import Formula, conj, diamond, disj, neg, parse_sigma
from .normalform import (
    DEFAULT_AGENT,
    Disjunct,
    DnfFormula,
    _and,
    decide_single_agent,
    disjunct_clarity,
    enumerate_canonical,
    lit_formula,
    lit_neg,
    single_agent_of,
    sigma_valid_single_agent,
    to_dnf,
    _decidable,
    _lit_key,
)
from .formula import atoms_of, build_sigma_check
from .semantics import extension, believed_update


def _lits(ls) -> Formula:
    return conj(*(lit_formula(l) for l in sorted(ls, key=_lit_key)))


def _alpha(d: Disjunct) -> Formula:
    return _lits(d.alpha)


def _modal(d: Disjunct, agent) -> Formula:
    return d.modal_part().to_formula(agent)


@dataclass(frozen=True)
class DlfWitness:
    S: tuple
    T: tuple
    beta_choice: Mapping = field(hash=False)
    chi: Formula = field(hash=False)


def chi_parts(phi: DnfFormula, S, T, beta_choice, agent):
    ds = phi.disjuncts
    for i in T:
        if i not in beta_choice:
            raise BetaChoiceIncomplete(f"no box chosen for disjunct {i} of T")
        if beta_choice[i] not in ds[i].boxes:
            raise BetaChoiceIncomplete(f"chosen box is not a conjunct of disjunct {i}")

    def t(i):
        d = ds[i]
        return conj(
            _alpha(d),
            *(disj(*(diamond(agent, conj(_alpha(ds[j]), _lits(g))) for j in S)) for g in d.diamonds),
        )

    others = [i for i in range(len(ds)) if i not in T]
    chi1 = conj(*(t(i) for i in T), *(neg(t(i)) for i in others))
    chi2 = conj(
        *(_modal(ds[j], agent) for j in S),
        *(neg(_modal(ds[j], agent)) for j in range(len(ds)) if j not in S),
    )
    chi3 = conj(
        *(
            disj(*(diamond(agent, conj(_alpha(ds[j]), _lits(map(lit_neg, beta_choice[i])))) for j in S))
            for i in T
        )
    )
    return chi1, chi2, chi3


def build_chi(phi: DnfFormula, S, T, beta_choice, agent: str = DEFAULT_AGENT) -> Formula:
    """The formula  ~phi & D phi & chi1 & chi2 & chi3  for disjunct index sets S, T."""
    f = phi.to_formula(agent)
    chi1, chi2, chi3 = chi_parts(phi, tuple(S), tuple(T), dict(beta_choice), agent)
    return conj(neg(f), diamond(agent, f), chi1, chi2, chi3)


def _clear_only(ds):
    return [d for d in ds if disjunct_clarity(d) is None]


def _clear_conjunction(parts):
    """Does the DNF of the conjunction of ``parts`` (each a list of
    disjuncts) have a clear disjunct?  A merge is clear only if its pieces
    are, so unclear pieces are dropped as soon as they appear."""
    cur = None
    for p in parts:
        p = _clear_only(p)
        cur = p if cur is None else _clear_only(_and(cur, p))
        if not cur:
            return False
    return True


def dlf_witness_search(phi, agent: str | None = None):
    """First (S, T, beta choice) whose chi is clear, or ``None``.

    Candidates are tried by |S|+|T|, then lexicographically by index tuples.
    ``phi`` may be a formula (normalised first) or a DnfFormula.
    """
    if not isinstance(phi, DnfFormula):
        agent = agent or single_agent_of(phi)
        phi = to_dnf(phi)
    agent = agent or DEFAULT_AGENT
    ds = phi.disjuncts
    n = len(ds)
    f = phi.to_formula(agent)
    base = to_dnf(conj(neg(f), diamond(agent, f))).disjuncts
    base = _clear_only(base)
    if not base:
        return None
    boxed = [i for i in range(n) if ds[i].boxes]
    subsets = [c for r in range(n + 1) for c in itertools.combinations(range(n), r)]
    t_subsets = [c for r in range(len(boxed) + 1) for c in itertools.combinations(boxed, r)]
    order = sorted(
        ((S, T) for S in subsets for T in t_subsets),
        key=lambda st: (len(st[0]) + len(st[1]), st[0], st[1]),
    )
    chi2_cache = {}
    for S, T in order:
        if S not in chi2_cache:
            _, chi2, _ = chi_parts(phi, S, (), {}, agent)
            chi2_cache[S] = _clear_only(to_dnf(chi2).disjuncts)
        if not chi2_cache[S]:
            continue
        for choice in itertools.product(*(ds[i].boxes for i in T)):
            beta = dict(zip(T, choice))
            chi1, _, chi3 = chi_parts(phi, S, T, beta, agent)
            parts = [base, chi2_cache[S], to_dnf(chi1).disjuncts, to_dnf(chi3).disjuncts]
            if _clear_conjunction(parts):
                return DlfWitness(S, T, beta, build_chi(phi, S, T, beta, agent))
    return None


def is_believable_true_lie(f: Formula, method: str = "semantic") -> bool:
    if method == "syntactic":
        return dlf_witness_search(f) is None
    if method == "semantic":
        return sigma_valid_single_agent(f, "01", "KD45", believable=True)
    raise ValueError(f"method must be 'syntactic' or 'semantic', not {method!r}")


NAMES = {"11": "successful", "10": "self_refuting", "01": "true_lie", "00": "impossible_lie"}


def classify_validities(f: Formula, c: str = "KD45") -> dict:
    """For each of the four two-step patterns: plain/believable x valid/nontrivially valid."""
    agent = single_agent_of(f)
    out = {}
    for sigma, name in NAMES.items():
        row = {}
        for bel, label in ((False, "plain"), (True, "believable")):
            valid = decide_single_agent(build_sigma_check(f, sigma, "valid", bel, [agent]), c, "valid")[0]
            sat = decide_single_agent(
                build_sigma_check(f, sigma, "satisfiable", bel, [agent]), c, "satisfiable"
            )[0]
            row[label] = {"valid": valid, "nontrivially_valid": valid and sat}
        out[name] = row
    return out


# -- sigma-validity tables ----------------------------------------------------------


def canonical_traces(f: Formula, c: str, length: int):
    """Per canonical model: (truth of f, truth of D f) at the point after 0..length-1 updates."""
    agent = _decidable(f)
    dia = diamond(agent, f)
    traces = []
    for cm in enumerate_canonical(atoms_of(f), c):
        m = cm.to_pointed(agent).model
        steps = []
        for _ in range(length):
            steps.append(("pt" in extension(m, f), "pt" in extension(m, dia)))
            m = believed_update(m, f)
        traces.append(steps)
    return traces


def sigma_valid_on_trace(steps, sigma, believable: bool = False) -> bool:
    """Does the sigma-check implication hold at a model with this trace?"""
    bits = parse_sigma(sigma)
    n = len(bits)
    first, bel = steps[0]
    if first != bool(bits[0]) or (believable and not bel):
        return True
    for k in range(1, n):
        truth, bel = steps[k]
        if truth != bool(bits[k]):
            return False
        if believable and k < n - 1 and not bel:
            return False
    return True


@dataclass
class ValidityProfile:
    table: dict
    maximal: list

    def valid(self):
        return [s for s, v in self.table.items() if v]


def validity_profile(f: Formula, c: str = "KD45", max_len: int = 8, believable: bool = False) -> ValidityProfile:
    """sigma-validity of ``f`` for every sigma with 2 <= |sigma| <= max_len.

    ``maximal`` lists the valid strings with no valid one-digit extension
    inside the table, which is where completion classes end.
    """
    if max_len < 2:
        raise ValueError("max_len must be at least 2")
    traces = canonical_traces(f, c, max_len)
    table = {}
    for n in range(2, max_len + 1):
        for bits in itertools.product("01", repeat=n):
            s = "".join(bits)
            table[s] = all(sigma_valid_on_trace(t, s, believable) for t in traces)
    maximal = [
        s for s, v in table.items()
        if v and len(s) < max_len and not table[s + "0"] and not table[s + "1"]
    ]
    return ValidityProfile(table, maximal)
