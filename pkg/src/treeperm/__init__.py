"""Exact computation with finite-state automorphisms of rooted regular trees."""
from .perm import Perm
from .automata import (
    DEFAULT_LIMIT,
    Exceeded,
    MealyMachine,
    StateSystem,
    TreeAutomorphism,
    act,
    compose,
    equal,
    from_recursion,
    identity,
    inverse,
    is_trivial,
    load_machine,
    machine_of,
    minimize,
    order_bounded,
    parse_machine,
    portrait,
    section,
    states,
)

__all__ = [
    "DEFAULT_LIMIT", "Exceeded", "MealyMachine", "Perm", "StateSystem", "TreeAutomorphism",
    "act", "compose", "equal", "from_recursion", "identity", "inverse", "is_trivial",
    "load_machine", "machine_of", "minimize", "order_bounded", "parse_machine", "portrait",
    "section", "states",
]
