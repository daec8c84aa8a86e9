"""Expression trees for the species language.

An expression is built from primitive species, bound names, and the closed
operations: sum, product, substitution, derivative, pointing, and cardinality
restriction.  Trees are immutable values; equal trees compare and hash equal.
"""

from dataclasses import dataclass
from enum import Enum, unique

from .errors import DuplicateName, UnboundName

__all__ = [
    "PrimitiveKind",
    "SpeciesExpr",
    "Primitive",
    "Name",
    "Sum",
    "Product",
    "Substitute",
    "Derivative",
    "Pointing",
    "RestrictCard",
    "Environment",
    "TOKEN_TO_KIND",
    "RESERVED",
    "print_expr",
]


@unique
class PrimitiveKind(Enum):
    """The built-in species, named by the structures they put on a label set."""

    ZERO = "O"            # no structures at all
    ONE = "1"             # one structure on the empty set only
    SINGLETON = "X"       # one structure on each 1-element set
    SET = "E"             # the underlying set itself
    NONEMPTY_SET = "Ep"   # sets, nonempty only
    KSET = "Ek"           # sets of one fixed cardinality k
    LIST = "L"            # linear orders
    NONEMPTY_LIST = "Lp"  # linear orders, nonempty only
    CYCLE = "C"           # cyclic orders
    PERMUTATION = "S"     # bijections of the set to itself
    DERANGEMENT = "Der"   # fixed-point-free permutations
    INVOLUTION = "Inv"    # self-inverse permutations
    ENDOFUNCTION = "End"  # arbitrary self-maps
    PARTITION = "Part"    # partitions into nonempty blocks
    SUBSET = "P"          # a chosen subset (with its complement)
    KSUBSET = "Pk"        # subsets of one fixed cardinality k
    GRAPH = "Gra"         # simple graphs on the set
    DIGRAPH = "Gro"       # directed graphs, loops allowed


#: Kinds that carry an integer parameter, written Kind[k].
PARAMETRIC = frozenset({PrimitiveKind.KSET, PrimitiveKind.KSUBSET})

TOKEN_TO_KIND = {kind.value: kind for kind in PrimitiveKind}

#: Identifiers that may not be bound by a definitions file.
RESERVED = frozenset(TOKEN_TO_KIND) | {"pt"}


class SpeciesExpr:
    """Abstract base for expression nodes."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Primitive(SpeciesExpr):
    kind: PrimitiveKind
    param: int | None = None

    def __post_init__(self):
        if self.kind in PARAMETRIC:
            if self.param is None or self.param < 0:
                raise ValueError(
                    f"{self.kind.value} requires a nonnegative integer parameter"
                )
        elif self.param is not None:
            raise ValueError(f"{self.kind.value} takes no parameter")


@dataclass(frozen=True, slots=True)
class Name(SpeciesExpr):
    ident: str


@dataclass(frozen=True, slots=True)
class Sum(SpeciesExpr):
    left: SpeciesExpr
    right: SpeciesExpr


@dataclass(frozen=True, slots=True)
class Product(SpeciesExpr):
    left: SpeciesExpr
    right: SpeciesExpr


@dataclass(frozen=True, slots=True)
class Substitute(SpeciesExpr):
    outer: SpeciesExpr
    inner: SpeciesExpr


@dataclass(frozen=True, slots=True)
class Derivative(SpeciesExpr):
    inner: SpeciesExpr


@dataclass(frozen=True, slots=True)
class Pointing(SpeciesExpr):
    inner: SpeciesExpr


@dataclass(frozen=True, slots=True)
class RestrictCard(SpeciesExpr):
    """The same structures, kept only on label sets whose size satisfies
    |A| <relation> bound, with relation one of '==', '>=', '<='."""

    inner: SpeciesExpr
    relation: str
    bound: int

    def __post_init__(self):
        if self.relation not in ("==", ">=", "<="):
            raise ValueError(f"unknown cardinality relation {self.relation!r}")
        if self.bound < 0:
            raise ValueError("cardinality bound must be nonnegative")

    def admits(self, n):
        if self.relation == "==":
            return n == self.bound
        if self.relation == ">=":
            return n >= self.bound
        return n <= self.bound


class Environment:
    """A set of named definitions Name -> SpeciesExpr.

    Right-hand sides may reference any name of the environment, including
    later ones and themselves; recursion is resolved when series are computed
    or structures enumerated, not here.
    """

    def __init__(self, defs=()):
        self._defs = {}
        pairs = defs.items() if isinstance(defs, dict) else defs
        for name, rhs in pairs:
            self.bind(name, rhs)

    def bind(self, name, rhs):
        if name in RESERVED:
            raise DuplicateName(f"'{name}' is reserved and cannot be redefined")
        if name in self._defs:
            raise DuplicateName(f"'{name}' is defined twice")
        if not isinstance(rhs, SpeciesExpr):
            raise TypeError("definition right-hand side must be a SpeciesExpr")
        self._defs[name] = rhs

    def __contains__(self, name):
        return name in self._defs

    def __getitem__(self, name):
        try:
            return self._defs[name]
        except KeyError:
            raise UnboundName(f"no definition for '{name}'") from None

    def __len__(self):
        return len(self._defs)

    def __iter__(self):
        return iter(self._defs)

    def items(self):
        return self._defs.items()

    def names(self):
        return list(self._defs)

    def merged(self, other):
        """A new environment holding both sets of definitions."""
        merged = Environment(self._defs)
        for name, rhs in other.items():
            merged.bind(name, rhs)
        return merged

    def __repr__(self):
        return f"Environment({sorted(self._defs)})"


# -- printing --------------------------------------------------------------

_SUM, _PROD, _POSTFIX = 1, 2, 3


def print_expr(expr):
    """Render an expression in the concrete grammar.

    parse_expr(print_expr(t)) == t for every tree in the grammar's image;
    nodes with no concrete syntax (RestrictCard, substitution with a compound
    outer) render in a readable fallback form instead.
    """
    return _pp(expr, 0)


def _pp(e, ctx):
    if isinstance(e, Primitive):
        if e.kind is PrimitiveKind.ZERO:
            return "0"
        if e.kind in PARAMETRIC:
            return f"{e.kind.value}[{e.param}]"
        return e.kind.value
    if isinstance(e, Name):
        return e.ident
    if isinstance(e, Sum):
        # Right operand one level up keeps the reparse left-associated.
        body = f"{_pp(e.left, _SUM)} + {_pp(e.right, _SUM + 1)}"
        return f"({body})" if ctx > _SUM else body
    if isinstance(e, Product):
        body = f"{_pp(e.left, _PROD)}*{_pp(e.right, _PROD + 1)}"
        return f"({body})" if ctx > _PROD else body
    if isinstance(e, Derivative):
        return f"{_pp(e.inner, _POSTFIX)}'"
    if isinstance(e, Pointing):
        return f"pt({_pp(e.inner, 0)})"
    if isinstance(e, Substitute):
        outer = e.outer
        if isinstance(outer, Primitive) and outer.kind not in PARAMETRIC:
            head = outer.kind.value
        elif isinstance(outer, Name):
            head = outer.ident
        else:
            head = f"({_pp(outer, 0)})"
        return f"{head}({_pp(e.inner, 0)})"
    if isinstance(e, RestrictCard):
        return f"restrict({_pp(e.inner, 0)}, n {e.relation} {e.bound})"
    raise TypeError(f"not a species expression: {e!r}")
