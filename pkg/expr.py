"""
Expr module for KID Verifier.
Implements the Expr class: closed-form expression trees over chart variables
that evaluate to floats or lift to jets at a point.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import jet as jets
from errors import DomainError
from jet import Jet

logger = logging.getLogger(__name__)

Scalar = Union[int, float, Fraction]

_UNARY_OPS = ("sqrt", "sin", "cos", "exp")
_BINARY_OPS = ("add", "sub", "mul", "div")


@dataclass(frozen=True, eq=False, slots=True)
class Expr:
    """
    Node of an immutable expression DAG.

    Responsibility: Represent chart-component formulas
    - Nodes: var, const, add, sub, mul, div, pow (rational), sqrt, sin, cos, exp
    - Evaluate to a float, or lift to a Jet of any order
    - Light constant folding while building (0 + x, 1 * x, const op const)

    OOP Principles Applied:
    - Composite Pattern: Every node is an Expr over child Exprs
    - Immutability: Shared subtrees are safe to reuse across fields
    - Operator Overloading: Formulas read like the mathematics

    Attributes:
        op: Node kind
        args: Child nodes
        payload: Constant value, variable index, or rational exponent
    """

    op: str
    args: tuple["Expr", ...] = ()
    payload: object = None

    # Inspection

    @property
    def is_const(self) -> bool:
        return self.op == "const"

    def is_value(self, value: float) -> bool:
        return self.op == "const" and self.payload == value

    def variables(self) -> frozenset[int]:
        """Indices of every chart variable the expression reads."""
        return frozenset(node.payload for node in _postorder([self]) if node.op == "var")

    def depends_on(self, index: int) -> bool:
        return index in self.variables()

    # Evaluation

    def evaluate(self, point: Sequence[float]) -> float:
        """
        Evaluate at a point.

        Raises:
            DomainError: Division by zero, negative radicand, or overflow
        """
        return evaluate_all([self], point)[0]

    def lift(self, point: Sequence[float], order: int) -> Jet:
        """
        Taylor jet of the expression at a point.

        Args:
            point: Chart coordinates
            order: Truncation order

        Returns:
            Jet over len(point) variables
        """
        return lift_all([self], point, order)[0]

    def shift(self, offset: int) -> "Expr":
        """Copy with every variable index moved by offset (embedding into a product chart)."""
        rebuilt: dict[int, Expr] = {}
        for node in _postorder([self]):
            if node.op == "var":
                rebuilt[id(node)] = var(node.payload + offset)
            elif node.args:
                rebuilt[id(node)] = Expr(node.op, tuple(rebuilt[id(a)] for a in node.args),
                                         node.payload)
            else:
                rebuilt[id(node)] = node
        return rebuilt[id(self)]

    # Construction

    def __add__(self, other) -> "Expr":
        other = wrap(other)
        if self.is_value(0):
            return other
        if other.is_value(0):
            return self
        if self.is_const and other.is_const:
            return const(self.payload + other.payload)
        return Expr("add", (self, other))

    def __radd__(self, other) -> "Expr":
        return wrap(other) + self

    def __sub__(self, other) -> "Expr":
        other = wrap(other)
        if other.is_value(0):
            return self
        if self.is_const and other.is_const:
            return const(self.payload - other.payload)
        return Expr("sub", (self, other))

    def __rsub__(self, other) -> "Expr":
        return wrap(other) - self

    def __mul__(self, other) -> "Expr":
        other = wrap(other)
        if self.is_value(0) or other.is_value(0):
            return const(0.0)
        if self.is_value(1):
            return other
        if other.is_value(1):
            return self
        if self.is_const and other.is_const:
            return const(self.payload * other.payload)
        return Expr("mul", (self, other))

    def __rmul__(self, other) -> "Expr":
        return wrap(other) * self

    def __truediv__(self, other) -> "Expr":
        other = wrap(other)
        if other.is_value(1):
            return self
        if self.is_value(0) and not other.is_value(0):
            return const(0.0)
        if self.is_const and other.is_const and other.payload != 0:
            return const(self.payload / other.payload)
        return Expr("div", (self, other))

    def __rtruediv__(self, other) -> "Expr":
        return wrap(other) / self

    def __neg__(self) -> "Expr":
        if self.is_const:
            return const(-self.payload)
        return const(-1.0) * self

    def __pow__(self, exponent: Scalar) -> "Expr":
        """Raises DomainError unless the exponent is a rational with denominator at most 1000."""
        p = Fraction(exponent).limit_denominator(1000)
        if float(p) != exponent:
            raise DomainError(f"exponent {exponent} is not a small-denominator rational")
        if p == 0:
            return const(1.0)
        if p == 1:
            return self
        return Expr("pow", (self,), p)

    def __repr__(self) -> str:
        if self.op == "var":
            return f"x{self.payload}"
        if self.op == "const":
            return repr(self.payload)
        if self.op == "pow":
            return f"({self.args[0]!r})**({self.payload})"
        symbols = {"add": "+", "sub": "-", "mul": "*", "div": "/"}
        if self.op in symbols:
            return f"({self.args[0]!r} {symbols[self.op]} {self.args[1]!r})"
        return f"{self.op}({self.args[0]!r})"


# Leaf and function constructors

def var(index: int) -> Expr:
    if index < 0:
        raise ValueError(f"variable index must be non-negative, got {index}")
    return Expr("var", (), index)


def const(value: float) -> Expr:
    return Expr("const", (), float(value))


def wrap(value) -> Expr:
    return value if isinstance(value, Expr) else const(value)


def sqrt(e) -> Expr:
    e = wrap(e)
    if e.is_const and e.payload > 0:
        return const(math.sqrt(e.payload))
    return Expr("sqrt", (e,))


def sin(e) -> Expr:
    e = wrap(e)
    return const(math.sin(e.payload)) if e.is_const else Expr("sin", (e,))


def cos(e) -> Expr:
    e = wrap(e)
    return const(math.cos(e.payload)) if e.is_const else Expr("cos", (e,))


def exp(e) -> Expr:
    e = wrap(e)
    return const(math.exp(e.payload)) if e.is_const else Expr("exp", (e,))


def total(terms: Iterable) -> Expr:
    """Balanced sum; keeps trees shallow for long series."""
    items = [wrap(t) for t in terms]
    if not items:
        return const(0.0)
    while len(items) > 1:
        paired = [items[i] + items[i + 1] for i in range(0, len(items) - 1, 2)]
        if len(items) % 2:
            paired.append(items[-1])
        items = paired
    return items[0]


# DAG traversal

def _postorder(roots: Sequence[Expr]) -> list[Expr]:
    """Children before parents, each shared node once."""
    seen: set[int] = set()
    ordered: list[Expr] = []
    stack = [(root, False) for root in reversed(roots)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            ordered.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for child in reversed(node.args):
            if id(child) not in seen:
                stack.append((child, False))
    return ordered


def _float_power(base: float, p: Fraction) -> float:
    if p.denominator != 1 and base < 0:
        raise DomainError(f"rational power {p} of negative value {base}")
    if p < 0 and base == 0:
        raise DomainError(f"negative power {p} of zero")
    return base ** float(p)


def evaluate_all(exprs: Sequence[Expr], point: Sequence[float]) -> list[float]:
    """Evaluate several expressions at one point, sharing common subtrees."""
    values: dict[int, float] = {}
    try:
        for node in _postorder(exprs):
            args = [values[id(a)] for a in node.args]
            if node.op == "var":
                if node.payload >= len(point):
                    raise DomainError(f"x{node.payload} outside a {len(point)}-dimensional point")
                result = float(point[node.payload])
            elif node.op == "const":
                result = node.payload
            elif node.op == "add":
                result = args[0] + args[1]
            elif node.op == "sub":
                result = args[0] - args[1]
            elif node.op == "mul":
                result = args[0] * args[1]
            elif node.op == "div":
                if args[1] == 0.0:
                    raise DomainError(f"division by zero in {node!r}")
                result = args[0] / args[1]
            elif node.op == "pow":
                result = _float_power(args[0], node.payload)
            elif node.op == "sqrt":
                if args[0] < 0.0:
                    raise DomainError(f"sqrt of negative value {args[0]}")
                result = math.sqrt(args[0])
            else:
                result = getattr(math, node.op)(args[0])
            values[id(node)] = result
    except OverflowError as exc:
        raise DomainError(f"overflow while evaluating: {exc}") from exc
    return [values[id(e)] for e in exprs]


def lift_all(exprs: Sequence[Expr], point: Sequence[float], order: int) -> list[Jet]:
    """
    Lift several expressions to jets at one point, sharing common subtrees.

    Args:
        exprs: Expressions over chart variables
        point: Base point (its length fixes the jet dimension)
        order: Truncation order

    Returns:
        One Jet per expression
    """
    dim = len(point)
    lifted: dict[int, Jet] = {}
    for node in _postorder(exprs):
        args = [lifted[id(a)] for a in node.args]
        if node.op == "var":
            if node.payload >= dim:
                raise DomainError(f"x{node.payload} outside a {dim}-dimensional point")
            result = Jet.variable(node.payload, float(point[node.payload]), dim, order)
        elif node.op == "const":
            result = Jet.constant(node.payload, dim, order)
        elif node.op == "add":
            result = args[0] + args[1]
        elif node.op == "sub":
            result = args[0] - args[1]
        elif node.op == "mul":
            result = args[0] * args[1]
        elif node.op == "div":
            result = args[0] / args[1]
        elif node.op == "pow":
            result = jets.power(args[0], float(node.payload))
        else:
            result = getattr(jets, node.op)(args[0])
        lifted[id(node)] = result
    return [lifted[id(e)] for e in exprs]


def lift(e: Expr, point: Sequence[float], order: int) -> Jet:
    """Module-level alias of Expr.lift."""
    return e.lift(point, order)


# Symbolic linear algebra for small matrices

def determinant(matrix: Sequence[Sequence[Expr]]) -> Expr:
    """Cofactor expansion along the first row (n <= 6)."""
    n = len(matrix)
    if n == 1:
        return wrap(matrix[0][0])
    terms = []
    for j in range(n):
        entry = wrap(matrix[0][j])
        if entry.is_value(0):
            continue
        minor = [[matrix[r][c] for c in range(n) if c != j] for r in range(1, n)]
        term = entry * determinant(minor)
        terms.append(term if j % 2 == 0 else -term)
    return total(terms)


def inverse(matrix: Sequence[Sequence[Expr]]) -> list[list[Expr]]:
    """Adjugate over determinant."""
    n = len(matrix)
    det = determinant(matrix)
    if n == 1:
        return [[const(1.0) / det]]
    result = [[const(0.0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[matrix[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            cofactor = determinant(minor)
            if (i + j) % 2:
                cofactor = -cofactor
            result[j][i] = cofactor / det
    return result


def same_tree(left: Expr, right: Expr) -> bool:
    """Structural equality of two expression DAGs (same ops, payloads and children)."""
    pending = [(left, right)]
    checked: set[tuple[int, int]] = set()
    while pending:
        a, b = pending.pop()
        if a is b or (id(a), id(b)) in checked:
            continue
        checked.add((id(a), id(b)))
        if a.op != b.op or a.payload != b.payload or len(a.args) != len(b.args):
            return False
        pending.extend(zip(a.args, b.args))
    return True
