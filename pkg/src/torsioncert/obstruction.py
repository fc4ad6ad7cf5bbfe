"""Obstruction certificates for cyclic torsion Z/NZ over degree-d number fields.

A certificate walks the reduction argument at a prime p: the hypotheses on
(N, p), the gonality and J_1(N)(Q)-finiteness gates, impossibility of
additive reduction, the cited theorems that exclude multiplicative
reduction, and finally an exact trace analysis over every residue field
F_{p^f}, f = 1..d, that excludes good reduction.  Every computed step
carries its evidence; cited theorems are recorded as premises, never
recomputed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Optional

from .arith import is_prime
from .gf import make_field
from .modcurves import GONALITY, decomposition_table, gonality_exceeds
from .traces import admissible_trace, hasse_bounds, multiples_in_hasse
from .weierstrass import ENUMERATION_CAP, EnumerationCapError, WeierstrassCurve, curves_with_point_of_order

DEFAULT_DEGREE = 3
DEFAULT_PRIME = 3
#: Largest order of the component group of an additive fibre.
ADDITIVE_COMPONENT_BOUND = 4


class GonalityDataError(ValueError):
    """No gonality data for the requested degree."""


class StepKind(str, enum.Enum):
    COMPUTED = "ComputedCheck"
    TABLE = "TablePremise"
    THEOREM = "TheoremPremise"


class Status(str, enum.Enum):
    PASS = "Pass"
    FAIL = "Fail"


class Verdict(str, enum.Enum):
    RULED_OUT = "RuledOut"
    INCONCLUSIVE = "Inconclusive"


class Premise(str, enum.Enum):
    FREY_INJECTIVITY = "FreyInjectivity"
    KATZ_SPECIALIZATION = "KatzSpecialization"
    MANIN_DRINFELD = "ManinDrinfeld"
    SERRE_MILNE = "SerreMilne"
    TORSION_REDUCTION_INJECTIVE = "TorsionReductionInjective"
    IGUSA_GOOD_REDUCTION = "IgusaGoodReduction"
    ADDITIVE_COMPONENT_BOUND = "AdditiveComponentBound"


PREMISES: dict[Premise, tuple[str, str]] = {
    Premise.FREY_INJECTIVITY: (
        "If Gon(X) > d then P_1+...+P_d -> [P_1+...+P_d - d*inf] is injective on X^(d)(K) "
        "for every number field K",
        "Frey, generalised to symmetric powers of modular curves",
    ),
    Premise.KATZ_SPECIALIZATION: (
        "For an abelian variety A/K and a prime of K above p with ramification index < p - 1, "
        "reduction A(K)_tors -> A(F_p-bar) is injective; p does not ramify in Q(zeta_N) since p does not divide N",
        "Katz, specialization lemma (appendix)",
    ),
    Premise.MANIN_DRINFELD: (
        "The difference of two cusps of a congruence modular curve has finite order in its Jacobian; "
        "the cusps of X_1(N) are defined over Q(zeta_N)",
        "Manin; Drinfeld; Ogg",
    ),
    Premise.SERRE_MILNE: (
        "A K-rational point of Y_1(N), char K not dividing N, is represented by a K-rational pair (E, +-P)",
        "Serre-Milne (as stated by Ogg)",
    ),
    Premise.TORSION_REDUCTION_INJECTIVE: (
        "For m prime to char(k), reduction E(K)[m] -> E~(k) on the Neron model fibre is injective",
        "reduction of torsion on Neron models",
    ),
    Premise.IGUSA_GOOD_REDUCTION: (
        "X_1(N) has good reduction at every prime p not dividing N",
        "Igusa",
    ),
    Premise.ADDITIVE_COMPONENT_BOUND: (
        f"Under additive reduction E~(k)^0 = G_a(k) has p^f points (f <= d) and the component group "
        f"has order at most {ADDITIVE_COMPONENT_BOUND}",
        "Kodaira-Neron classification of special fibres",
    ),
}


@dataclass(frozen=True)
class CertificateStep:
    name: str
    kind: StepKind
    statement: str
    status: Status
    evidence: Optional[dict[str, Any]] = None
    citation: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS


@dataclass(frozen=True)
class ObstructionCertificate:
    N: int
    d: int
    p: int
    steps: tuple[CertificateStep, ...] = field(default_factory=tuple)

    @property
    def verdict(self) -> Verdict:
        return Verdict.RULED_OUT if all(s.passed for s in self.steps) else Verdict.INCONCLUSIVE

    def failing_steps(self) -> list[CertificateStep]:
        return [s for s in self.steps if not s.passed]

    def step(self, name: str) -> CertificateStep:
        for s in self.steps:
            if s.name == name:
                return s
        raise KeyError(name)


def _status(ok: bool) -> Status:
    return Status.PASS if ok else Status.FAIL


def _computed(name: str, statement: str, ok: bool, evidence: dict) -> CertificateStep:
    return CertificateStep(name, StepKind.COMPUTED, statement, _status(ok), evidence)


def additive_reduction_impossible(N: int, p: int, d: int) -> CertificateStep:
    """N divides no p^f * g with 1 <= f <= d and 1 <= g <= 4."""
    products = []
    for f in range(1, d + 1):
        for g in range(1, ADDITIVE_COMPONENT_BOUND + 1):
            v = p**f * g
            products.append({"f": f, "g": g, "value": v, "divisible": v % N == 0})
    hits = [r["value"] for r in products if r["divisible"]]
    return _computed(
        "reduction.additive",
        f"N={N} divides no p^f*g with 1<=f<={d}, 1<=g<={ADDITIVE_COMPONENT_BOUND}: "
        "additive reduction cannot carry a point of order N",
        not hits,
        {"products": products, "divisible_by_N": hits},
    )


def good_reduction_obstruction(N: int, p: int, d: int) -> CertificateStep:
    """For every residue degree f, no multiple of N in the Hasse interval of
    F_{p^f} has an admissible trace.

    A point of order N on E~(F_q) forces N | |E~(F_q)|; this necessary
    condition is what gets checked, so a Pass is conservative.
    """
    if N % p == 0:
        raise ValueError(f"good-reduction analysis needs p not dividing N (p={p}, N={N})")
    fields = []
    ok = True
    for f in range(1, d + 1):
        q = p**f
        candidates = sorted(multiples_in_hasse(N, p, f))
        rejected, surviving = [], []
        for m in candidates:
            tq = admissible_trace(q + 1 - m, p, f)
            if tq.admissible:
                surviving.append({"m": m, "trace": tq.t, "condition": tq.matched_condition})
            else:
                rejected.append({"m": m, "trace": tq.t})
        ok = ok and not surviving
        fields.append(
            {
                "f": f,
                "q": q,
                "hasse_interval": list(hasse_bounds(q)),
                "multiples_of_N": candidates,
                "rejected": rejected,
                "surviving": surviving,
            }
        )
    return _computed(
        "reduction.good",
        f"for f=1..{d}, no order divisible by N={N} is realised by an elliptic curve over F_{p}^f "
        "(Hasse interval, then admissible traces)",
        ok,
        {"residue_fields": fields},
    )


def _skipped(name: str, statement: str, reason: str) -> CertificateStep:
    return CertificateStep(name, StepKind.COMPUTED, statement, Status.FAIL, {"skipped": reason})


def check_torsion(N: int, d: int = DEFAULT_DEGREE, p: int = DEFAULT_PRIME) -> ObstructionCertificate:
    if N < 1:
        raise ValueError("N must be positive")
    if not 1 <= d <= 3:
        raise GonalityDataError(f"no gonality data for degree d={d}; supported: 1, 2, 3")

    steps: list[CertificateStep] = []
    p_prime = is_prime(p)
    steps.append(_computed("hypothesis.level", f"N={N} > 4", N > 4, {"N": N}))
    steps.append(_computed("hypothesis.prime", f"p={p} is a prime > 2", p_prime and p > 2,
                           {"p": p, "is_prime": p_prime}))
    steps.append(_computed("hypothesis.coprime", f"p={p} does not divide N={N}", N % p != 0,
                           {"N_mod_p": N % p}))

    listed = sorted(GONALITY.at_most(d))
    steps.append(CertificateStep(
        "gate.gonality", StepKind.TABLE,
        f"Gon(X_1({N})) > {d}: N is absent from the list of levels with gonality <= {d}",
        _status(gonality_exceeds(N, d)),
        {"N": N, "d": d, "levels_with_gonality_at_most_d": listed},
        "classification of X_1(N) with gonality 1 (genus 0), 2 (Ishii-Momose), 3 (Jeon-Kim-Schweizer)",
    ))

    row = decomposition_table().get(N)
    if row is None:
        finite, factors = "unknown", None
    else:
        finite = row.finite_over_q
        factors = [{"dimension": f.dimension, "multiplicity": f.multiplicity, "L_vanishes": f.l_vanishes}
                   for f in row.factors]
    steps.append(CertificateStep(
        "gate.j1_finite", StepKind.TABLE,
        f"J_1({N})(Q) is finite: L(A_i, 1) != 0 for every simple factor A_i of J_1({N})",
        _status(finite is True),
        {"N": N, "finite": finite, "factors": factors},
        "J_1(N) decomposition table with L(A_i,1) flags; Kato: L(A,1) != 0 implies A(Q) finite",
    ))

    steps.append(additive_reduction_impossible(N, p, d))

    for premise in Premise:
        statement, citation = PREMISES[premise]
        steps.append(CertificateStep(f"premise.{premise.value}", StepKind.THEOREM,
                                     f"[assumed] {statement}", Status.PASS, None, citation))

    good_statement = f"for f=1..{d}, no elliptic curve over F_{p}^f has order divisible by N={N}"
    if not p_prime:
        steps.append(_skipped("reduction.good", good_statement, "p is not prime"))
    elif N % p == 0:
        steps.append(_skipped("reduction.good", good_statement, "p divides N"))
    else:
        steps.append(good_reduction_obstruction(N, p, d))
    return ObstructionCertificate(N, d, p, tuple(steps))


def counterexamples(N: int, p: int, d: int) -> dict[int, list[WeierstrassCurve]]:
    """Curves over F_{p^f}, f = 1..d, whose group exponent is divisible by N."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p**d > ENUMERATION_CAP:
        raise EnumerationCapError(f"p^d = {p**d} exceeds the enumeration cap {ENUMERATION_CAP}")
    return {f: curves_with_point_of_order(make_field(p, f), N) for f in range(1, d + 1)}


def cross_validate(N: int, p: int, d: int) -> bool:
    """True iff exhaustive enumeration finds no curve over F_{p^f}, f <= d, with a point of order N."""
    return not any(counterexamples(N, p, d).values())
