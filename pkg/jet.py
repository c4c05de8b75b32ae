"""
Jet module for KID Verifier.
Implements the Jet class: truncated multivariate Taylor polynomials carrying
exact-to-rounding partial derivatives of a (possibly tensor-valued) function at a point.
"""

import itertools
import logging
import math
from functools import lru_cache
from typing import Union

import numpy as np

import config
from errors import DomainError, OrderError

logger = logging.getLogger(__name__)

Operand = Union["Jet", float, int, np.ndarray]

_RESERVED_INDEX = "z"


# Multi-index tables (cached per (dim, order))

@lru_cache(maxsize=None)
def multi_indices(dim: int, order: int) -> tuple[tuple[int, ...], ...]:
    """
    Exponent vectors of total degree <= order in graded order.

    Lower orders are prefixes of higher ones, so truncation is slicing.

    Args:
        dim: Number of chart variables
        order: Maximum total degree

    Returns:
        Tuple of exponent tuples, degree 0 first
    """
    exponents = []
    for degree in range(order + 1):
        for combo in itertools.combinations_with_replacement(range(dim), degree):
            exponent = [0] * dim
            for axis in combo:
                exponent[axis] += 1
            exponents.append(tuple(exponent))
    return tuple(exponents)


@lru_cache(maxsize=None)
def coefficient_count(dim: int, order: int) -> int:
    """Number of coefficients of a jet: C(dim + order, order)."""
    return math.comb(dim + order, order)


@lru_cache(maxsize=None)
def _index_map(dim: int, order: int) -> dict[tuple[int, ...], int]:
    return {exponent: i for i, exponent in enumerate(multi_indices(dim, order))}


@lru_cache(maxsize=None)
def _product_table(dim: int, order: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Left/right coefficient indices of every admissible pair and the scatter matrix."""
    exponents = multi_indices(dim, order)
    index = _index_map(dim, order)
    left, right, target = [], [], []
    for i, a in enumerate(exponents):
        degree_a = sum(a)
        for j, b in enumerate(exponents):
            if degree_a + sum(b) > order:
                break
            left.append(i)
            right.append(j)
            target.append(index[tuple(x + y for x, y in zip(a, b))])
    scatter = np.zeros((len(target), len(exponents)))
    scatter[np.arange(len(target)), target] = 1.0
    return np.array(left), np.array(right), scatter


@lru_cache(maxsize=None)
def _derivative_table(dim: int, order: int, axis: int) -> tuple[np.ndarray, np.ndarray]:
    index = _index_map(dim, order)
    source, factor = [], []
    for exponent in multi_indices(dim, order - 1):
        bumped = list(exponent)
        bumped[axis] += 1
        source.append(index[tuple(bumped)])
        factor.append(float(bumped[axis]))
    return np.array(source), np.array(factor)


@lru_cache(maxsize=None)
def _partials_table(dim: int, order: int, degree: int) -> tuple[np.ndarray, np.ndarray]:
    index = _index_map(dim, order)
    shape = (dim,) * degree
    positions = np.empty(shape, dtype=int)
    factors = np.empty(shape)
    for axes in itertools.product(range(dim), repeat=degree):
        exponent = [0] * dim
        for axis in axes:
            exponent[axis] += 1
        positions[axes] = index[tuple(exponent)]
        factors[axes] = math.prod(math.factorial(k) for k in exponent)
    return positions, factors


class Jet:
    """
    Truncated Taylor polynomial of order K in `dim` variables.

    Responsibility: Exact derivative bookkeeping at one point
    - Store coefficients (mixed partial / multi-index factorial)
    - Truncated products, quotients and transcendental compositions
    - Tensor-valued jets: leading axes are tensor slots, the last axis
      runs over multi-indices

    OOP Principles Applied:
    - Encapsulation: Coefficients are read-only after construction
    - Operator Overloading: Jets combine like numbers
    - Immutability: Every operation returns a new Jet

    Attributes:
        _coeffs: Array of shape (*tensor_shape, coefficient_count)
        _dim: Number of chart variables
        _order: Truncation order K
    """

    __slots__ = ("_coeffs", "_dim", "_order")
    __array_ufunc__ = None

    def __init__(self, coeffs, dim: int, order: int):
        """
        Initialize a Jet from raw coefficients.

        Args:
            coeffs: Array whose last axis has coefficient_count(dim, order) entries
            dim: Number of chart variables
            order: Truncation order

        Raises:
            OrderError: If order is negative or above config.MAX_JET_ORDER
            DomainError: If a coefficient is not finite
        """
        if order < 0 or order > config.MAX_JET_ORDER:
            raise OrderError(f"jet order {order} outside 0..{config.MAX_JET_ORDER}")
        array = np.array(coeffs, dtype=float)
        if array.ndim == 0 or array.shape[-1] != coefficient_count(dim, order):
            raise ValueError(
                f"expected last axis of length {coefficient_count(dim, order)}, got {array.shape}"
            )
        if not np.all(np.isfinite(array)):
            raise DomainError("jet coefficients are not finite")
        array.setflags(write=False)
        self._coeffs = array
        self._dim = dim
        self._order = order

    # Constructors

    @classmethod
    def constant(cls, value, dim: int, order: int) -> "Jet":
        """Jet of a constant (scalar or array-valued)."""
        value = np.asarray(value, dtype=float)
        coeffs = np.zeros(value.shape + (coefficient_count(dim, order),))
        coeffs[..., 0] = value
        return cls(coeffs, dim, order)

    @classmethod
    def variable(cls, axis: int, value: float, dim: int, order: int) -> "Jet":
        """Jet of the coordinate function x_axis at a point where it equals value."""
        if not 0 <= axis < dim:
            raise ValueError(f"variable index {axis} outside 0..{dim - 1}")
        coeffs = np.zeros(coefficient_count(dim, order))
        coeffs[0] = value
        if order >= 1:
            coeffs[1 + axis] = 1.0
        return cls(coeffs, dim, order)

    # Accessors

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def order(self) -> int:
        return self._order

    @property
    def shape(self) -> tuple[int, ...]:
        """Tensor shape (coefficient axis excluded)."""
        return self._coeffs.shape[:-1]

    @property
    def value(self) -> np.ndarray:
        """Order-0 coefficient: the function value at the base point."""
        return self._coeffs[..., 0]

    def coefficient(self, exponent: tuple[int, ...]) -> np.ndarray:
        """Coefficient of one multi-index (partial divided by factorials)."""
        if sum(exponent) > self._order:
            raise OrderError(f"multi-index {exponent} exceeds order {self._order}")
        return self._coeffs[..., _index_map(self._dim, self._order)[tuple(exponent)]]

    def partials(self, degree: int) -> np.ndarray:
        """
        All partial derivatives of one total degree.

        Args:
            degree: Derivative degree (0..order)

        Returns:
            Array of shape (*tensor_shape, dim, ..., dim) with `degree` trailing axes
        """
        if degree > self._order:
            raise OrderError(f"degree {degree} exceeds order {self._order}")
        positions, factors = _partials_table(self._dim, self._order, degree)
        return self._coeffs[..., positions] * factors

    # Structural operations

    def truncate(self, order: int) -> "Jet":
        if order > self._order:
            raise OrderError(f"cannot raise order {self._order} to {order}")
        if order == self._order:
            return self
        return Jet(self._coeffs[..., :coefficient_count(self._dim, order)], self._dim, order)

    def derivative(self, axis: int) -> "Jet":
        """
        Partial derivative along one variable; the order drops by one.

        Raises:
            OrderError: If the jet has order 0
        """
        if self._order == 0:
            raise OrderError("cannot differentiate an order-0 jet")
        source, factor = _derivative_table(self._dim, self._order, axis)
        return Jet(self._coeffs[..., source] * factor, self._dim, self._order - 1)

    def differential(self) -> "Jet":
        """Stack of first partials with the derivative axis first."""
        return stack([self.derivative(axis) for axis in range(self._dim)])

    def transpose(self, *axes: int) -> "Jet":
        return Jet(self._coeffs.transpose(*axes, len(axes)), self._dim, self._order)

    def sum(self, axis: int) -> "Jet":
        if axis < 0:
            raise ValueError("negative axes are ambiguous for jets")
        return Jet(self._coeffs.sum(axis=axis), self._dim, self._order)

    def __getitem__(self, key) -> "Jet":
        if not isinstance(key, tuple):
            key = (key,)
        if any(k is Ellipsis for k in key):
            raise TypeError("jet indexing does not support Ellipsis")
        return Jet(self._coeffs[key + (slice(None),)], self._dim, self._order)

    # Arithmetic

    def __add__(self, other: Operand) -> "Jet":
        if isinstance(other, Jet):
            a, b = align(self, other)
            return Jet(a.coeffs + b.coeffs, a.dim, a.order)
        value = np.asarray(other, dtype=float)
        shape = np.broadcast_shapes(self.shape, value.shape)
        coeffs = np.array(np.broadcast_to(self._coeffs, shape + self._coeffs.shape[-1:]))
        coeffs[..., 0] += value
        return Jet(coeffs, self._dim, self._order)

    __radd__ = __add__

    def __neg__(self) -> "Jet":
        return Jet(-self._coeffs, self._dim, self._order)

    def __sub__(self, other: Operand) -> "Jet":
        return self + (-other)

    def __rsub__(self, other: Operand) -> "Jet":
        return (-self) + other

    def __mul__(self, other: Operand) -> "Jet":
        if isinstance(other, Jet):
            a, b = align(self, other)
            left, right, scatter = _product_table(a.dim, a.order)
            return Jet((a.coeffs[..., left] * b.coeffs[..., right]) @ scatter, a.dim, a.order)
        value = np.asarray(other, dtype=float)
        return Jet(self._coeffs * value[..., None], self._dim, self._order)

    __rmul__ = __mul__

    def __truediv__(self, other: Operand) -> "Jet":
        if isinstance(other, Jet):
            return self * reciprocal(other)
        value = np.asarray(other, dtype=float)
        if np.any(value == 0.0):
            raise DomainError("division of a jet by zero")
        return Jet(self._coeffs / value[..., None], self._dim, self._order)

    def __rtruediv__(self, other: Operand) -> "Jet":
        return reciprocal(self) * other

    def __pow__(self, exponent: float) -> "Jet":
        return power(self, exponent)

    def allclose(self, other: "Jet", rtol: float = 1e-12, atol: float = 1e-12) -> bool:
        a, b = align(self, other)
        return bool(np.allclose(a.coeffs, b.coeffs, rtol=rtol, atol=atol))

    def __repr__(self) -> str:
        return f"Jet(dim={self._dim}, order={self._order}, shape={self.shape})"


# Free functions

def align(a: Jet, b: Jet) -> tuple[Jet, Jet]:
    """Truncate two jets to their common (minimum) order."""
    if a.dim != b.dim:
        raise ValueError(f"jets over {a.dim} and {b.dim} variables cannot be combined")
    order = min(a.order, b.order)
    return a.truncate(order), b.truncate(order)


def stack(jets: list[Jet], axis: int = 0) -> Jet:
    """Stack jets along a new leading tensor axis."""
    if axis < 0:
        raise ValueError("negative axes are ambiguous for jets")
    order = min(j.order for j in jets)
    dim = jets[0].dim
    return Jet(np.stack([j.truncate(order).coeffs for j in jets], axis=axis), dim, order)


def contract(subscripts: str, *operands: Operand) -> Jet:
    """
    Einstein summation over tensor axes of jets and constant arrays.

    Subscripts name tensor axes only; at most two operands may be jets.

    Args:
        subscripts: numpy.einsum subscripts with explicit output, e.g. "ij,jk->ik"
        operands: Jets or arrays

    Returns:
        Jet of the contracted tensor
    """
    if _RESERVED_INDEX in subscripts:
        raise ValueError(f"index '{_RESERVED_INDEX}' is reserved for the coefficient axis")
    inputs, output = subscripts.replace(" ", "").split("->")
    specs = inputs.split(",")
    jets = [op for op in operands if isinstance(op, Jet)]
    if not jets:
        raise TypeError("contract needs at least one jet operand")
    if len(jets) == 1:
        jet = jets[0]
        terms = [spec + _RESERVED_INDEX if isinstance(op, Jet) else spec
                 for spec, op in zip(specs, operands)]
        arrays = [op.coeffs if isinstance(op, Jet) else np.asarray(op, dtype=float)
                  for op in operands]
        raw = np.einsum(",".join(terms) + "->" + output + _RESERVED_INDEX, *arrays)
        return Jet(raw, jet.dim, jet.order)
    if len(operands) != 2:
        raise ValueError("contract supports two jet operands without extra arrays")
    a, b = align(*operands)
    left, right, scatter = _product_table(a.dim, a.order)
    z = _RESERVED_INDEX
    raw = np.einsum(f"{specs[0]}{z},{specs[1]}{z}->{output}{z}",
                    a.coeffs[..., left], b.coeffs[..., right])
    return Jet(raw @ scatter, a.dim, a.order)


def _compose(u: Jet, taylor: list[np.ndarray]) -> Jet:
    """Horner evaluation of sum_k taylor[k] (u - u0)^k; exact since u - u0 is nilpotent."""
    shifted = u - u.value
    result = Jet.constant(taylor[u.order], u.dim, u.order)
    for k in range(u.order - 1, -1, -1):
        result = result * shifted + taylor[k]
    return result


def exp(u: Jet) -> Jet:
    base = np.exp(u.value)
    return _compose(u, [base / math.factorial(k) for k in range(u.order + 1)])


def sin(u: Jet) -> Jet:
    s, c = np.sin(u.value), np.cos(u.value)
    cycle = (s, c, -s, -c)
    return _compose(u, [cycle[k % 4] / math.factorial(k) for k in range(u.order + 1)])


def cos(u: Jet) -> Jet:
    s, c = np.sin(u.value), np.cos(u.value)
    cycle = (c, -s, -c, s)
    return _compose(u, [cycle[k % 4] / math.factorial(k) for k in range(u.order + 1)])


def power(u: Jet, exponent: float) -> Jet:
    """
    Real power via the generalized binomial series.

    Raises:
        DomainError: Non-integer power of a non-positive value, or a negative
            integer power of zero
    """
    p = float(exponent)
    base = np.asarray(u.value, dtype=float)
    is_integer = p.is_integer()
    if not is_integer and np.any(base <= 0.0):
        raise DomainError(f"power {p} of a non-positive value")
    if is_integer and p < 0 and np.any(base == 0.0):
        raise DomainError(f"power {p} of zero")
    taylor = []
    binomial = 1.0
    for k in range(u.order + 1):
        if is_integer and p >= 0 and k > p:
            taylor.append(np.zeros_like(base))
        else:
            taylor.append(binomial * base ** (p - k))
        binomial *= (p - k) / (k + 1)
    return _compose(u, taylor)


def sqrt(u: Jet) -> Jet:
    if np.any(np.asarray(u.value) <= 0.0):
        raise DomainError("sqrt of a jet with non-positive value")
    return power(u, 0.5)


def reciprocal(u: Jet) -> Jet:
    if np.any(np.asarray(u.value) == 0.0):
        raise DomainError("division by a jet with zero value")
    return power(u, -1.0)


def matrix_inverse(a: Jet) -> Jet:
    """
    Inverse of a square-matrix jet by the Neumann series around its value.

    Raises:
        DomainError: If the value matrix is singular
    """
    try:
        inverse0 = np.linalg.inv(a.value)
    except np.linalg.LinAlgError as exc:
        raise DomainError("matrix jet has a singular value") from exc
    step = contract("ij,jk->ik", -inverse0, a - a.value)
    term = Jet.constant(inverse0, a.dim, a.order)
    result = term
    for _ in range(a.order):
        term = contract("ij,jk->ik", step, term)
        result = result + term
    return result


_BINARY = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": lambda a, b: a / b,
    "pow": lambda a, b: power(a, b),
}
_UNARY = {"sqrt": sqrt, "sin": sin, "cos": cos, "exp": exp}


def jet_arith(a: Jet, b: Operand, op: str) -> Jet:
    """
    Apply a named operation to jets.

    Args:
        a: Left operand
        b: Right operand (ignored by unary operations; the exponent for "pow")
        op: One of +, -, *, /, pow, sqrt, sin, cos, exp

    Returns:
        Resulting jet
    """
    if op in _UNARY:
        return _UNARY[op](a)
    if op in _BINARY:
        return _BINARY[op](a, b)
    raise ValueError(f"unknown jet operation '{op}'")
