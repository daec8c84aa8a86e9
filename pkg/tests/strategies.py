"""Shared hypothesis strategies for building random species expressions."""

from hypothesis import strategies as st

from species.expr import Derivative, Pointing, Product, Substitute, Sum
from species.parser import parse_expr

_PRIM_LEAVES = ["0", "1", "X", "E", "Ep", "L", "Lp", "C", "S",
                "Der", "Inv", "End", "Part", "P", "Gra", "Gro",
                "Ek[2]", "Ek[3]", "Pk[2]"]
_NAME_LEAVES = ["F", "G2", "Tree"]
_CALL_HEADS = ["E", "Ep", "L", "C", "S"]


def grammar_exprs(include_names=True, max_leaves=6):
    """Random trees from the concrete-grammar fragment of the language.

    Cardinality restrictions are excluded (they have no surface syntax), and
    substitution heads are kept to token form so that printing re-parses.
    """
    leaf_pool = _PRIM_LEAVES + (_NAME_LEAVES if include_names else [])
    heads = _CALL_HEADS + (_NAME_LEAVES if include_names else [])
    leaves = st.sampled_from(leaf_pool).map(parse_expr)

    def compound(children):
        return st.one_of(
            st.tuples(children, children).map(lambda p: Sum(*p)),
            st.tuples(children, children).map(lambda p: Product(*p)),
            st.tuples(
                st.sampled_from(heads).map(parse_expr), children
            ).map(lambda p: Substitute(*p)),
            children.map(Derivative),
            children.map(Pointing),
        )

    return st.recursive(leaves, compound, max_leaves=max_leaves)
