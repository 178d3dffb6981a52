"""
The *-algebra of smeared linearized fields.

Elements are finite linear combinations of words in generators [gamma](f).
Words are kept in normal form: labels sorted by key, out-of-order neighbours
swapped with the commutator [g(f1), g(f2)] = -2i E(f1^s, f2_bar^s) 1.
"""

import hashlib
import threading
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from src.background.spacetime import Background
from src.fields.tensors import RankTwo, SymField2, as_tensor, symmetric_part
from src.symplectic.observables import (
    DivergenceClass, Observable, make_observable, pauli_jordan_pairing, propagated_solution,
)
from src.symplectic.structure import presymplectic, presymplectic_magnitude
from src.utils.config import get_tolerances
from src.utils.errors import ContractError
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

Word = Tuple[str, ...]
UNIT: Word = ()


def label_key(f: RankTwo) -> str:
    """Content hash of a test tensor's variance and components."""
    tensor = as_tensor(f)
    digest = hashlib.sha1()
    digest.update(tensor.variance.encode())
    digest.update(str(tensor.data.shape).encode())
    digest.update(np.ascontiguousarray(tensor.data, dtype=complex).tobytes())
    return digest.hexdigest()[:16]


@dataclass(frozen=True, eq=False)
class GeneratorLabel:
    """A registered test tensor with its observable and generated solution E f_bar^s."""
    key: str
    observable: Observable
    solution: SymField2
    conjugate_key: Optional[str] = None

    @property
    def f(self) -> RankTwo:
        return self.observable.f

    def to_dict(self) -> Dict[str, Any]:
        return {
            'key': self.key,
            'ref': f"{self.key}.json",
            'conjugate_key': self.conjugate_key,
            **self.observable.to_dict(),
        }


def _prune(terms: Mapping[Word, complex]) -> Dict[Word, complex]:
    threshold = get_tolerances().prune_threshold
    return {word: coeff for word, coeff in terms.items() if abs(coeff) > threshold}


class AlgebraElement:
    """Immutable map from normal-ordered words to complex coefficients."""

    __slots__ = ("_terms", "algebra")

    def __init__(self, algebra: 'CCRAlgebra', terms: Optional[Mapping[Word, complex]] = None):
        self.algebra = algebra
        self._terms = _prune(terms or {})

    @property
    def terms(self) -> Dict[Word, complex]:
        return dict(self._terms)

    @property
    def degree(self) -> int:
        return max((len(word) for word in self._terms), default=0)

    def coefficient(self, word: Sequence[str] = UNIT) -> complex:
        return self._terms.get(tuple(word), 0.0)

    def is_zero(self) -> bool:
        return not self._terms

    def _combine(self, other: 'AlgebraElement', sign: float) -> 'AlgebraElement':
        if other.algebra is not self.algebra:
            raise ValueError("elements belong to different algebras")
        terms = dict(self._terms)
        for word, coeff in other._terms.items():
            terms[word] = terms.get(word, 0.0) + sign * coeff
        return AlgebraElement(self.algebra, terms)

    def __add__(self, other: 'AlgebraElement') -> 'AlgebraElement':
        return self._combine(other, 1.0)

    def __sub__(self, other: 'AlgebraElement') -> 'AlgebraElement':
        return self._combine(other, -1.0)

    def __neg__(self) -> 'AlgebraElement':
        return AlgebraElement(self.algebra, {word: -coeff for word, coeff in self._terms.items()})

    def __mul__(self, other: Union['AlgebraElement', complex]) -> 'AlgebraElement':
        if isinstance(other, AlgebraElement):
            return self.algebra.product(self, other)
        return AlgebraElement(self.algebra, {word: coeff * other for word, coeff in self._terms.items()})

    def __rmul__(self, scalar: complex) -> 'AlgebraElement':
        return self * scalar

    def __repr__(self) -> str:
        return f"AlgebraElement({len(self._terms)} terms, degree {self.degree})"

    def to_dict(self) -> Dict[str, Any]:
        words = sorted(self._terms, key=lambda word: (len(word), word))
        keys = sorted({key for word in words for key in word})
        return {
            'words': [list(word) for word in words],
            'coeffs': [[float(np.real(self._terms[w])), float(np.imag(self._terms[w]))] for w in words],
            'labels': {key: self.algebra.label(key).to_dict() for key in keys},
        }


@dataclass
class NullReport:
    """Outcome of null certification against a probe set."""
    null: bool
    null_labels: List[str] = field(default_factory=list)
    linear_ratio: float = 0.0
    residual_coefficient: float = 0.0
    probe_ratios: Dict[str, float] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.null

    def to_dict(self) -> Dict[str, Any]:
        return {
            'null': self.null,
            'null_labels': list(self.null_labels),
            'linear_ratio': self.linear_ratio,
            'residual_coefficient': self.residual_coefficient,
            'probe_ratios': dict(self.probe_ratios),
        }


class CCRAlgebra:
    """
    Algebra context on one background: the label registry and a memo of
    Pauli-Jordan pairings shared across threads.
    """

    def __init__(self, bg: Background, sigma: Optional[int] = None):
        self.bg = bg
        self.sigma = bg.grid.nt // 2 if sigma is None else sigma
        self._labels: Dict[str, GeneratorLabel] = {}
        self._pairings: Dict[Tuple[str, str], complex] = {}
        self._lock = threading.Lock()

    # ------------------------------------------------------------------
    # Labels
    # ------------------------------------------------------------------

    def label(self, key: str) -> GeneratorLabel:
        try:
            return self._labels[key]
        except KeyError:
            raise KeyError(f"unknown generator label {key}") from None

    @property
    def labels(self) -> Dict[str, GeneratorLabel]:
        with self._lock:
            return dict(self._labels)

    def register(self, f: RankTwo, label: str = "") -> GeneratorLabel:
        """Register a test tensor whose symmetric part is divergence-free."""
        key = label_key(f)
        with self._lock:
            existing = self._labels.get(key)
        if existing is not None:
            return existing
        observable = make_observable(self.bg, f, label or key)
        if observable.divergence_class is DivergenceClass.UNRESTRICTED:
            raise ContractError(
                f"generator needs a divergence-free symmetric part; "
                f"measured divergence {observable.divergence_norm:.3e}",
                measured=observable.divergence_norm,
                tolerance=get_tolerances().divergence_ratio * observable.gradient_norm,
            )
        conjugate_key = label_key(_conjugate(f))
        entry = GeneratorLabel(key, observable, propagated_solution(self.bg, observable), conjugate_key)
        with self._lock:
            entry = self._labels.setdefault(key, entry)
        logger.debug(f"🏷️ Registered generator {key} ({observable.divergence_class.value})")
        return entry

    # ------------------------------------------------------------------
    # Elements
    # ------------------------------------------------------------------

    def unit(self) -> 'AlgebraElement':
        return AlgebraElement(self, {UNIT: 1.0})

    def zero(self) -> 'AlgebraElement':
        return AlgebraElement(self)

    def scalar(self, value: complex) -> 'AlgebraElement':
        return AlgebraElement(self, {UNIT: value})

    def generator(self, f: RankTwo, label: str = "") -> 'AlgebraElement':
        """Degree-one element [gamma](f); antisymmetric f gives the zero element."""
        if not np.any(symmetric_part(f).components):
            return self.zero()
        entry = self.register(f, label)
        return AlgebraElement(self, {(entry.key,): 1.0})

    def pairing(self, key1: str, key2: str) -> complex:
        """E(f1^s, f2_bar^s), memoized; antisymmetric in the two labels."""
        if key1 == key2:
            return 0.0
        with self._lock:
            cached = self._pairings.get((key1, key2))
        if cached is not None:
            return cached
        value = pauli_jordan_pairing(self.bg, self.label(key1).f, self.label(key2).f)
        with self._lock:
            self._pairings[(key1, key2)] = value
            self._pairings[(key2, key1)] = -value
        return value

    def commutator_coefficient(self, key1: str, key2: str) -> complex:
        """c in [g(f1), g(f2)] = c 1."""
        return -2.0j * self.pairing(key1, key2)

    def normal_order(self, terms: Mapping[Word, complex]) -> Dict[Word, complex]:
        pending: List[Tuple[Word, complex]] = list(terms.items())
        result: Dict[Word, complex] = {}
        while pending:
            word, coeff = pending.pop()
            position = next((i for i in range(len(word) - 1) if word[i] > word[i + 1]), None)
            if position is None:
                result[word] = result.get(word, 0.0) + coeff
                continue
            left, right = word[position], word[position + 1]
            swapped = word[:position] + (right, left) + word[position + 2:]
            pending.append((swapped, coeff))
            contracted = self.commutator_coefficient(left, right)
            if contracted != 0.0:
                pending.append((word[:position] + word[position + 2:], coeff * contracted))
        return _prune(result)

    def product(self, a: 'AlgebraElement', b: 'AlgebraElement') -> 'AlgebraElement':
        terms: Dict[Word, complex] = {}
        for word_a, coeff_a in a.terms.items():
            for word_b, coeff_b in b.terms.items():
                word = word_a + word_b
                terms[word] = terms.get(word, 0.0) + coeff_a * coeff_b
        return AlgebraElement(self, self.normal_order(terms))

    def adjoint(self, a: 'AlgebraElement') -> 'AlgebraElement':
        """Reverse words, conjugate coefficients and map f to its complex conjugate."""
        terms: Dict[Word, complex] = {}
        for word, coeff in a.terms.items():
            image = tuple(self._conjugate_key(key) for key in reversed(word))
            terms[image] = terms.get(image, 0.0) + np.conj(coeff)
        return AlgebraElement(self, self.normal_order(terms))

    def _conjugate_key(self, key: str) -> str:
        entry = self.label(key)
        if entry.conjugate_key == key:
            return key
        return self.register(_conjugate(entry.f)).key

    # ------------------------------------------------------------------
    # Null certification
    # ------------------------------------------------------------------

    def _probe_solutions(self, probes: Iterable[Union[RankTwo, Observable]]) -> List[SymField2]:
        solutions = []
        for probe in probes:
            observable = probe if isinstance(probe, Observable) else make_observable(self.bg, probe)
            solutions.append(propagated_solution(self.bg, observable))
        return solutions

    def _linear_ratio(self, combination: Mapping[str, complex], probe: SymField2) -> float:
        value, scale = 0.0, 0.0
        for key, coeff in combination.items():
            solution = self.label(key).solution
            value += coeff * presymplectic(self.bg, solution, probe, self.sigma)
            scale += abs(coeff) * presymplectic_magnitude(self.bg, solution, probe, self.sigma)
        if scale == 0.0:
            return 0.0
        return abs(value) / scale

    def is_null(self, a: 'AlgebraElement',
                probes: Sequence[Union[RankTwo, Observable]]) -> NullReport:
        """
        Certify that an element vanishes in the quotient algebra.

        The degree-one part is null when its generated solution is
        symplectically orthogonal to every probe solution; higher words are
        dropped when they contain a certified-null generator and must
        otherwise cancel.
        """
        if not probes:
            raise ContractError("null certification needs at least one probe")
        limit = get_tolerances().null_ratio
        probe_solutions = self._probe_solutions(probes)

        keys = sorted({key for word in a.terms for key in word})
        probe_ratios: Dict[str, float] = {}
        null_labels = []
        for key in keys:
            ratio = max(self._linear_ratio({key: 1.0}, probe) for probe in probe_solutions)
            probe_ratios[key] = ratio
            if ratio <= limit:
                null_labels.append(key)

        linear = {word[0]: coeff for word, coeff in a.terms.items() if len(word) == 1}
        linear_ratio = max((self._linear_ratio(linear, probe) for probe in probe_solutions),
                           default=0.0) if linear else 0.0

        residual = 0.0
        for word, coeff in a.terms.items():
            if len(word) == 1 or any(key in null_labels for key in word):
                continue
            residual = max(residual, abs(coeff))
        null = linear_ratio <= limit and residual <= get_tolerances().prune_threshold
        logger.debug(f"🔍 Null check: linear ratio {linear_ratio:.3e}, residual {residual:.3e} -> {null}")
        return NullReport(null, null_labels, linear_ratio, residual, probe_ratios)

    # ------------------------------------------------------------------
    # Serialization
    # ------------------------------------------------------------------

    def element_from_dict(self, data: Mapping[str, Any]) -> 'AlgebraElement':
        terms: Dict[Word, complex] = {}
        for word, (real, imag) in zip(data['words'], data['coeffs']):
            for key in word:
                self.label(key)
            terms[tuple(word)] = complex(real, imag)
        return AlgebraElement(self, self.normal_order(terms))


def _conjugate(f: RankTwo) -> RankTwo:
    tensor = as_tensor(f)
    if isinstance(f, SymField2):
        return SymField2(f.grid, np.conj(f.components))
    return type(tensor)(tensor.grid, np.conj(tensor.data), tensor.variance)


# ============================================================================
# Functional Interface
# ============================================================================

def generator(algebra: CCRAlgebra, f: RankTwo, label: str = "") -> AlgebraElement:
    return algebra.generator(f, label)


def product(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a.algebra.product(a, b)


def adjoint(a: AlgebraElement) -> AlgebraElement:
    return a.algebra.adjoint(a)


def commutator(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return product(a, b) - product(b, a)


def is_null(a: AlgebraElement, probes: Sequence[Union[RankTwo, Observable]]) -> NullReport:
    return a.algebra.is_null(a, probes)
