"""Step-by-step replay of Isbell's chain of equalities under a chosen set of cones.

The chain, for endomorphisms f, g, h and the right-bracketing cone (p1r, p2r):

    S1  p1r . (f x (g x h))  =  f . p1r
    S2  f . p1r              =  p1r . ((f x g) x h)      (naturality and alpha = id)
    S3  p1r . ((f x g) x h)  =  (f x g) . p1r
    S4  p1r epic, so f = f x g

Each step is evaluated separately so a report shows which one breaks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .kernel import Category, CategoryError
from .universal import (
    BinaryCone,
    BracketingChoice,
    associator,
    is_identity,
    pair,
    times,
)

PASS, FAIL, SKIPPED, ILL_TYPED, HYPOTHESIS_FAILED = (
    "pass",
    "fail",
    "skipped",
    "ill-typed",
    "hypothesis-failed",
)

STATEMENTS = {
    "S1": "p1r . (f x (g x h)) = f . p1r",
    "S2": "f . p1r = p1r . ((f x g) x h)",
    "S3": "p1r . ((f x g) x h) = (f x g) . p1r",
    "S4": "p1r is epic, hence f = f x g",
}


def times_left(cat: Category, choice: BracketingChoice, f, g, h):
    """``(f x g) x h`` with respect to ``cone_ab`` and ``cone_l``."""
    fg = times(cat, choice.cone_ab, choice.cone_ab, f, g)
    return times(cat, choice.cone_l, choice.cone_l, fg, h)


def times_right(cat: Category, choice: BracketingChoice, f, g, h):
    """``f x (g x h)`` with respect to ``cone_bc`` and ``cone_r``."""
    gh = times(cat, choice.cone_bc, choice.cone_bc, g, h)
    return times(cat, choice.cone_r, choice.cone_r, f, gh)


def product_equations(cat: Category, choice: BracketingChoice, f, g, h):
    """The projection equations that define both bracketed products, as (label, lhs, rhs)."""
    ab, bc, lc, rc = choice.cone_ab, choice.cone_bc, choice.cone_l, choice.cone_r
    fg = times(cat, ab, ab, f, g)
    gh = times(cat, bc, bc, g, h)
    tl = times(cat, lc, lc, fg, h)
    tr = times(cat, rc, rc, f, gh)
    c = cat.compose_all
    return [
        ("pl1 . TL = (f x g) . pl1", c(lc.left, tl), c(fg, lc.left)),
        ("pl2 . TL = h . pl2", c(lc.right, tl), c(h, lc.right)),
        ("pab1 . (f x g) = f . pab1", c(ab.left, fg), c(f, ab.left)),
        ("pab2 . (f x g) = g . pab2", c(ab.right, fg), c(g, ab.right)),
        ("pr1 . TR = f . pr1", c(rc.left, tr), c(f, rc.left)),
        ("pr2 . TR = (g x h) . pr2", c(rc.right, tr), c(gh, rc.right)),
        ("pbc1 . (g x h) = g . pbc1", c(bc.left, gh), c(g, bc.left)),
        ("pbc2 . (g x h) = h . pbc2", c(bc.right, gh), c(h, bc.right)),
    ]


def check_naturality(cat: Category, choice: BracketingChoice, f, g, h, alpha=None):
    """``alpha . ((f x g) x h) == (f x (g x h)) . alpha``, with a witness when it fails."""
    if alpha is None:
        alpha = associator(cat, choice)
    lhs = cat.compose(alpha, times_left(cat, choice, f, g, h))
    rhs = cat.compose(times_right(cat, choice, f, g, h), alpha)
    witness = cat.disagreement(lhs, rhs)
    return witness is None, witness


@dataclass
class Step:
    step: str
    status: str
    detail: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "step": self.step,
            "statement": STATEMENTS[self.step],
            "status": self.status,
            "detail": self.detail,
        }


@dataclass
class ChainReport:
    model: str
    choice: str
    alpha_is_identity: bool
    naturality: bool
    steps: list[Step]
    alpha: str
    extras: dict = field(default_factory=dict)

    def step(self, name) -> Step:
        return next(s for s in self.steps if s.step == name)

    def verdicts(self) -> dict[str, str]:
        return {s.step: s.status for s in self.steps}

    def to_dict(self):
        return {
            "model": self.model,
            "choice": self.choice,
            "alpha": self.alpha,
            "alpha_is_identity": self.alpha_is_identity,
            "naturality": self.naturality,
            "steps": [s.to_dict() for s in self.steps],
            **self.extras,
        }


def _compare(cat, lhs, rhs):
    w = cat.disagreement(lhs, rhs)
    return (PASS, {}) if w is None else (FAIL, {"witness": w})


def isbell_chain_report(
    model: str,
    cat: Category,
    choice: BracketingChoice,
    f,
    g,
    h,
    choice_name: str = "custom",
) -> ChainReport:
    c = cat.compose_all
    ab, rc = choice.cone_ab, choice.cone_r
    p1r = rc.left
    alpha = associator(cat, choice)
    alpha_id = is_identity(cat, alpha)
    natural, nat_witness = check_naturality(cat, choice, f, g, h, alpha)
    tl = times_left(cat, choice, f, g, h)
    tr = times_right(cat, choice, f, g, h)
    fg = times(cat, ab, ab, f, g)
    same_apex = choice.cone_l.apex == rc.apex
    steps = []

    status, detail = _compare(cat, c(p1r, tr), c(f, p1r))
    steps.append(Step("S1", status, detail))

    s2 = {"naturality": PASS if natural else FAIL, "alpha_is_identity": alpha_id}
    if nat_witness is not None:
        s2["naturality_witness"] = nat_witness
    if not same_apex:
        steps.append(Step("S2", ILL_TYPED, {**s2, "reason": "the two bracketings have different apexes"}))
    elif not alpha_id:
        s2["reason"] = "alpha = id hypothesis fails"
        s2["alpha_witness"] = cat.disagreement(alpha, cat.identity(cat.src(alpha)))
        steps.append(Step("S2", HYPOTHESIS_FAILED, s2))
    else:
        status, detail = _compare(cat, c(f, p1r), c(p1r, tl))
        if not natural:
            status = FAIL
        steps.append(Step("S2", status, {**s2, **detail}))

    # (f x g) . p1r needs A = A x B, and p1r . TL needs one common apex
    if not same_apex or ab.apex != cat.dst(p1r):
        steps.append(
            Step("S3", ILL_TYPED, {"reason": f"(f x g) lives on {ab.apex}, p1r lands in {cat.dst(p1r)}"})
        )
    else:
        status, detail = _compare(cat, c(p1r, tl), c(fg, p1r))
        steps.append(Step("S3", status, detail))

    if all(s.status == PASS for s in steps):
        try:
            epi = cat.is_epi(p1r)
        except CategoryError as exc:
            steps.append(Step("S4", SKIPPED, {"reason": str(exc)}))
        else:
            w = cat.disagreement(f, fg) if cat.dst(f) == ab.apex else {"reason": "f and f x g are not parallel"}
            detail = {"p1r_is_epi": epi, "f_equals_f_x_g": w is None}
            if w is not None:
                detail["witness"] = w
            steps.append(Step("S4", PASS if epi and w is None else FAIL, detail))
    else:
        steps.append(Step("S4", SKIPPED, {"reason": "S1-S3 do not all hold"}))

    return ChainReport(
        model=model,
        choice=choice_name,
        alpha_is_identity=alpha_id,
        naturality=natural,
        steps=steps,
        alpha=cat.describe(alpha),
        extras={
            "probes": {"f": cat.describe(f), "g": cat.describe(g), "h": cat.describe(h)},
            "cones": choice.describe(cat),
        },
    )


@dataclass
class LiteralAlphaReport:
    solvable: bool
    alpha: str | None
    alpha_is_identity: bool | None
    constraint: str
    witness: dict | None

    def to_dict(self):
        return {
            "solvable": self.solvable,
            "alpha": self.alpha,
            "alpha_is_identity": self.alpha_is_identity,
            "constraint": self.constraint,
            "witness": self.witness,
        }


def literal_alpha_check(cat: Category, self_cone: BinaryCone) -> LiteralAlphaReport:
    """Solve ``p1 a = p1 p1``, ``p1 p2 a = p2 p1``, ``p2 a = p2 p2`` for ``a``.

    The first and last equations pin ``a`` to ``<p1 p1, p2 p2>``; the middle one
    then holds iff ``p1 p2 p2 = p2 p1``.
    """
    p1, p2 = self_cone.left, self_cone.right
    c = cat.compose_all
    candidate = pair(cat, self_cone, c(p1, p1), c(p2, p2))
    constraint = "p1 . p2 . p2 = p2 . p1"
    w = cat.disagreement(c(p1, p2, p2), c(p2, p1))
    if w is not None:
        return LiteralAlphaReport(False, None, None, constraint, w)
    return LiteralAlphaReport(True, cat.describe(candidate), is_identity(cat, candidate), constraint, None)
