"""Brute-force entailment oracle and a generator of small random instances.

The oracle searches breadth-first over the four declarative rules (local,
global, quote-down via CodeC, splice-up via CodeC) with a bound on the number
of rule applications.  It shares no code with the level-normalising solver.
"""

from collections import deque
import random

from stagec.syntax.types import BOOL, INT, ClassC, CodeC, TCon, TVar
from stagec.typecheck.entail import EntailError, entail
from stagec.typecheck.env import Axiom, ClassInfo, EvBind, Fresh, Theory

ORACLE_DEPTH = 6
CLASSES = {
    "Show": ClassInfo("Show", "a", "show", TCon("String")),
    "Eq": ClassInfo("Eq", "a", "eq", BOOL),
}
TYPES = [INT, BOOL, TVar("a"), TCon("List", (INT,)), TCon("List", (TVar("a"),))]
HEADS = [("Show", INT), ("Eq", BOOL), ("Show", TCon("List", (TVar("b"),))),
         ("Eq", TCon("List", (INT,))), ("Eq", TVar("b"))]


def given(name, constraint, level):
    """A given at an arbitrary level (the elaborator itself only makes level 0)."""
    b = object.__new__(EvBind)
    object.__setattr__(b, "name", name)
    object.__setattr__(b, "constraint", constraint)
    object.__setattr__(b, "level", level)
    return b


def wrap(c, depth):
    for _ in range(depth):
        c = CodeC(c)
    return c


def _instantiate(pattern, target, binders):
    """One-way match of an axiom head argument; returns a mapping or None."""
    mapping = {}

    def go(p, t):
        if isinstance(p, TVar) and p.name in binders:
            if p.name in mapping:
                return mapping[p.name] == t
            mapping[p.name] = t
            return True
        if isinstance(p, TCon) and isinstance(t, TCon):
            return p.name == t.name and len(p.args) == len(t.args) and \
                all(go(x, y) for x, y in zip(p.args, t.args))
        return p == t

    return mapping if go(pattern, target) else None


def _rules(goal, givens, axioms):
    """Every way one rule reduces ``goal``; each result is a tuple of subgoals."""
    c, n = goal
    if any(g.constraint == c and g.level == n for g in givens):
        yield ()
    if isinstance(c, ClassC):
        for ax in axioms:
            if ax.head.cls == c.cls:
                m = _instantiate(ax.head.arg, c.arg, set(ax.binders))
                if m is not None:
                    yield tuple((ctx, n) for ctx in ax.context)
    if isinstance(c, CodeC):
        yield ((c.inner, n + 1),)
    yield ((CodeC(c), n - 1),)


def brute_force(givens, axioms, wanted, level, bound=ORACLE_DEPTH) -> bool:
    """Breadth-first search over rule applications, at most ``bound`` of them."""
    queue = deque([(((wanted, level),), 0)])
    seen = set()
    while queue:
        goals, used = queue.popleft()
        if not goals:
            return True
        if used == bound or (goals, used) in seen:
            continue
        seen.add((goals, used))
        first, rest = goals[0], goals[1:]
        for sub in _rules(first, givens, axioms):
            queue.append((sub + rest, used + 1))
    return False


def random_instance(rng: random.Random):
    givens = tuple(
        given(f"g{i}", wrap(ClassC(rng.choice(list(CLASSES)), rng.choice(TYPES)),
                            rng.randint(0, 3)), rng.randint(-2, 2))
        for i in range(rng.randint(0, 4)))
    axioms = []
    for i in range(rng.randint(0, 3)):
        cls, arg = rng.choice(HEADS)
        binders = ("b",) if "b" in repr(arg) else ()
        axioms.append(Axiom(f"ax{i}", binders, (), ClassC(cls, arg)))
    wanted = wrap(ClassC(rng.choice(list(CLASSES)), rng.choice(TYPES)), rng.randint(0, 3))
    return givens, axioms, wanted, rng.randint(-2, 2)


def solver_accepts(givens, axioms, wanted, level) -> bool:
    theory = Theory(classes=dict(CLASSES), axioms=list(axioms))
    try:
        _, tsp = entail(theory, givens, level, wanted, Fresh())
    except EntailError as err:
        assert err.code == "NoEvidence"
        return False
    assert all(k < level for k in tsp), "splice points must sit below the use level"
    return True


def compare(n: int, seed: int = 2024):
    """Run ``n`` random instances; returns (disagreements, accepted count)."""
    rng = random.Random(seed)
    disagreements, accepted = [], 0
    for _ in range(n):
        inst = random_instance(rng)
        expected = brute_force(*inst)
        actual = solver_accepts(*inst)
        accepted += actual
        if expected != actual:
            disagreements.append(inst)
    return disagreements, accepted
