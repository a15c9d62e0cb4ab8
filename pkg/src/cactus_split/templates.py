"""Grammar systems for families of cactus graphs.

Two constructions are provided for each (plane|free) x (rooted|unrooted)
combination: the general three-rule template with a dissymmetry root for the
unrooted case, and the compact one- or two-rule grammars.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import counts, evaluate
from .errors import GrammarValidationError
from .grammar import (
    IN_OMEGA,
    IN_OMEGA_MINUS_1,
    GrammarSystem,
    Op,
    OmegaSpec,
    Ref,
    Z,
    add,
    at_least,
    mul,
    root_valuation,
    validate,
)

EMBEDDINGS = ("plane", "free")
ROOTINGS = ("rooted", "unrooted")
LABELINGS = ("labeled", "unlabeled")
FORMS = ("template", "simplified")

# operator roles: X builds the cycle of pendant blocks at a cut vertex, Y the
# pendant blocks hanging from a polygon corner, Zop the chain inside a polygon,
# W the polygon seen as a whole in the unrooted root.
OPERATOR_TABLE = {
    "plane": {"X": "Cyc", "Y": "Seq", "Zop": "Seq", "W": "Cyc"},
    "free": {"X": "Set", "Y": "Set", "Zop": "USeq", "W": "UCyc"},
}


@dataclass(frozen=True)
class FamilySpec:
    embedding: str
    rooting: str
    labeling: str
    omega: OmegaSpec
    form: str = "template"

    def __post_init__(self):
        for value, allowed, what in (
            (self.embedding, EMBEDDINGS, "embedding"),
            (self.rooting, ROOTINGS, "rooting"),
            (self.labeling, LABELINGS, "labeling"),
            (self.form, FORMS, "form"),
        ):
            if value not in allowed:
                raise ValueError(f"{what} must be one of {allowed}, got {value!r}")
        if not isinstance(self.omega, OmegaSpec):
            raise TypeError("omega must be an OmegaSpec")

    @property
    def name(self) -> str:
        return f"{self.embedding}-{self.rooting}-{self.labeling}"


def _check_omega(omega: OmegaSpec) -> None:
    probs = omega.problems()
    if probs:
        raise GrammarValidationError(probs)


def _finish(system: GrammarSystem) -> GrammarSystem:
    diags = validate(system)
    if diags:
        raise GrammarValidationError(diags)
    return system


def build_template(spec: FamilySpec) -> GrammarSystem:
    _check_omega(spec.omega)
    ops = OPERATOR_TABLE[spec.embedding]
    P, S_C, S_X = Ref("P"), Ref("S_C"), Ref("S_X")
    rules = [
        ("S_C", Op(ops["X"], at_least(2), P)),
        ("S_X", mul(Z, Op(ops["Y"], at_least(1), P))),
        ("P", Op(ops["Zop"], IN_OMEGA_MINUS_1, add(Z, S_X))),
    ]
    if spec.rooting == "rooted":
        rules.insert(0, ("G", mul(Z, add(P, S_C))))
        root = ((1, Ref("G")),)
        system = GrammarSystem(tuple(rules), root, spec.labeling, spec.omega, "G")
    else:
        rules = [
            ("T_S", mul(Z, S_C)),
            ("T_P", Op(ops["W"], IN_OMEGA, add(Z, S_X))),
            ("T_SP", mul(P, S_X)),
        ] + rules
        root = ((1, Ref("T_S")), (1, Ref("T_P")), (-1, Ref("T_SP")))
        system = GrammarSystem(tuple(rules), root, spec.labeling, spec.omega, "G", (("G", root),))
    return _finish(system)


def build_simplified(spec: FamilySpec) -> GrammarSystem:
    _check_omega(spec.omega)
    G, Q, B = Ref("G"), Ref("Q"), Ref("B")
    mode, omega = spec.labeling, spec.omega
    if spec.embedding == "free" and spec.rooting == "rooted":
        rules = (("G", mul(Z, Op("Set", at_least(1), Op("USeq", IN_OMEGA_MINUS_1, add(Z, G))))),)
        return _finish(GrammarSystem(rules, ((1, G),), mode, omega, "G"))
    if spec.embedding == "plane" and spec.rooting == "rooted":
        rules = (
            ("G", mul(Z, Op("Cyc", at_least(1), Op("Seq", IN_OMEGA_MINUS_1, Q)))),
            ("Q", mul(Z, Op("Seq", at_least(0), Op("Seq", IN_OMEGA_MINUS_1, Q)))),
        )
        return _finish(GrammarSystem(rules, ((1, G),), mode, omega, "G"))
    if spec.embedding == "free":
        rules = (("Q", mul(Z, Op("Set", at_least(0), Op("USeq", IN_OMEGA_MINUS_1, Q)))),)
        root = (
            (1, Op("UCyc", IN_OMEGA, Q)),
            (-1, mul(Q, Op("USeq", IN_OMEGA_MINUS_1, Q))),
            (1, Q),
            (-1, Z),
        )
        return _finish(GrammarSystem(rules, root, mode, omega, "G", (("G", root),)))
    # plane unrooted; (Q - Z) * B is expanded so the root stays a signed sum of products
    rules = (
        ("Q", mul(Z, Op("Seq", at_least(0), B))),
        ("B", Op("Seq", IN_OMEGA_MINUS_1, Q)),
    )
    root = (
        (1, Op("Cyc", IN_OMEGA, Q)),
        (1, mul(Z, Op("Cyc", at_least(2), B))),
        (-1, mul(Q, B)),
        (1, mul(Z, B)),
    )
    return _finish(GrammarSystem(rules, root, mode, omega, "G", (("G", root),)))


def build(spec: FamilySpec) -> GrammarSystem:
    return build_template(spec) if spec.form == "template" else build_simplified(spec)


@dataclass(frozen=True)
class FamilyCounts:
    """Raw grammar coefficients plus where the grammar starts producing objects.

    ``grammar_min_size`` is the root valuation; ``family_min_size`` is 1 (the
    single vertex is a cactus with no cycles). When they differ the grammar
    omits the small members and ``counts`` is not padded.
    """

    counts: tuple[int, ...]
    grammar_min_size: float
    family_min_size: int = 1

    @property
    def omits_small_members(self) -> bool:
        return self.grammar_min_size > self.family_min_size


def family_counts(spec: FamilySpec, order: int) -> FamilyCounts:
    system = build(spec)
    env = evaluate(system, order)
    return FamilyCounts(tuple(counts(env)), root_valuation(system))
