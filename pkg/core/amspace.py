# core/amspace.py
"""Truncated angular-momentum bases at arbitrarily large quantum numbers.

A single-sphere label is (shell, anchor, offset) with l = l_ref + shell and
m = anchors[anchor] + offset. l_ref may be ~1e23, far past the integer
resolution of a float, so l - m and l + m are always assembled from the exact
anchor differences plus small integers, never by subtracting two huge m values.
Operators are dense numpy arrays over the window (or the product basis).
"""

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .exceptions import DomainError, WindowError

logger = logging.getLogger(__name__)

HERMITIAN_TOLERANCE = 1e-12


# ===================================================================
# LADDER ELEMENTS
# ===================================================================

def ladder_element(l, m, sign=+1):
    """<l, m+-1| L+- |l, m> in the product form sqrt((l -+ m)(l +- m + 1))."""
    if abs(m) > l:
        raise DomainError(f'|m|={abs(m)} exceeds l={l}')
    if sign > 0:
        return math.sqrt((l - m) * (l + m + 1))
    return math.sqrt((l + m) * (l - m + 1))


def _ladder_from_gaps(l_minus_m, l_plus_m, sign):
    # Same product form, fed with gaps that were computed without cancellation
    if sign > 0:
        return math.sqrt(l_minus_m * (l_plus_m + 1))
    return math.sqrt(l_plus_m * (l_minus_m + 1))


# ===================================================================
# WINDOWS
# ===================================================================

@dataclass(frozen=True, order=True)
class Label:
    shell: int
    anchor: int
    offset: int


class BasisWindow:
    """Finite set of (l, m) labels around a list of m anchors.

    Anchors closer than the window width are merged into one contiguous
    segment. Labels outside the physical ladder (|m| > l) are never created.
    With shell_half_width > 0 the window spans shells l_ref-w_l .. l_ref+w_l
    with the same m anchors in every shell.
    """

    def __init__(self, l_ref, anchors, half_width, shell_half_width=0):
        if l_ref < 0:
            raise DomainError(f'l_ref must be nonnegative, got {l_ref}')
        if half_width < 0 or shell_half_width < 0:
            raise DomainError('window half-widths must be nonnegative')
        self.l_ref = float(l_ref)
        self.half_width = int(half_width)
        self.shell_half_width = int(shell_half_width)

        values = sorted({float(a) for a in anchors})
        if not values:
            raise DomainError('a window needs at least one anchor')
        if 2 * self.l_ref != math.floor(2 * self.l_ref):
            raise DomainError(f'l_ref must be an integer or half-integer, got {self.l_ref}')
        for value in values:
            if abs(value) > self.l_ref:
                raise DomainError(f'anchor {value} outside [-l, l] for l={self.l_ref}')
            if self.l_ref - value != math.floor(self.l_ref - value):
                raise DomainError(f'l - m must be an integer, got l={self.l_ref}, m={value}')

        # (anchor value, lowest offset, highest offset) per merged segment
        segments = []
        for value in values:
            if segments:
                first, lo, hi = segments[-1]
                gap = value - first
                if gap == math.floor(gap) and gap - self.half_width <= hi + 1:
                    segments[-1] = (first, lo, max(hi, int(gap) + self.half_width))
                    continue
            segments.append((value, -self.half_width, self.half_width))
        self.anchors = tuple(segment[0] for segment in segments)
        self.requested_anchors = tuple(values)

        labels = []
        for shell in range(-self.shell_half_width, self.shell_half_width + 1):
            for anchor_index, (value, lo, hi) in enumerate(segments):
                for offset in range(lo, hi + 1):
                    label = Label(shell, anchor_index, offset)
                    l_minus_m, l_plus_m = self._gaps(label)
                    if l_minus_m >= 0 and l_plus_m >= 0 and self.l_ref + shell >= 0:
                        labels.append(label)
        self.labels = tuple(labels)
        self._index = {label: i for i, label in enumerate(self.labels)}

        gaps = np.array([self._gaps(label) for label in self.labels], dtype=float)
        self.l_minus_m = gaps[:, 0]
        self.l_plus_m = gaps[:, 1]
        self.l_values = np.array([self.l_ref + label.shell for label in self.labels])
        self.m_values = np.array([self.anchors[label.anchor] + label.offset for label in self.labels])

    def _gaps(self, label):
        anchor = self.anchors[label.anchor]
        return ((self.l_ref - anchor) + (label.shell - label.offset),
                (self.l_ref + anchor) + (label.shell + label.offset))

    @property
    def dimension(self):
        return len(self.labels)

    def __len__(self):
        return len(self.labels)

    def __repr__(self):
        return (f'BasisWindow(l_ref={self.l_ref:g}, anchors={self.anchors}, '
                f'half_width={self.half_width}, shell_half_width={self.shell_half_width})')

    def anchor_index(self, m):
        """Index of the merged segment containing m, and m's offset inside it."""
        m = float(m)
        for i, value in enumerate(self.anchors):
            gap = m - value
            if gap == math.floor(gap) and Label(0, i, int(gap)) in self._index:
                return i, int(gap)
        raise WindowError(f'm={m} is not inside {self!r}')

    def index(self, label):
        try:
            return self._index[label]
        except KeyError:
            raise WindowError(f'{label} is not inside {self!r}') from None

    def index_of_m(self, m, shell=0):
        anchor, offset = self.anchor_index(m)
        return self.index(Label(shell, anchor, offset))

    def neighbour(self, i, delta_m, delta_shell=0):
        label = self.labels[i]
        return self._index.get(Label(label.shell + delta_shell, label.anchor, label.offset + delta_m))

    def m_relative(self, reference):
        """m - reference per label, assembled from anchor gaps and offsets."""
        return np.array([(self.anchors[label.anchor] - reference) + label.offset for label in self.labels])

    def edge_mask(self):
        """Labels whose L+ or L- target exists physically but lies outside the window."""
        mask = np.zeros(self.dimension, dtype=bool)
        for i in range(self.dimension):
            for sign in (+1, -1):
                element = _ladder_from_gaps(self.l_minus_m[i], self.l_plus_m[i], sign)
                if element > 0 and self.neighbour(i, sign) is None:
                    mask[i] = True
        return mask

    def shell_indices(self, shell):
        return [i for i, label in enumerate(self.labels) if label.shell == shell]


class TruncatedProductBasis:
    """Product of two windows; dense index = i_a * dim_b + i_b."""

    def __init__(self, window_a, window_b):
        self.window_a = window_a
        self.window_b = window_b

    @property
    def dims(self):
        return self.window_a.dimension, self.window_b.dimension

    @property
    def dimension(self):
        return self.window_a.dimension * self.window_b.dimension

    def index(self, i_a, i_b):
        return i_a * self.window_b.dimension + i_b

    def labels(self, index):
        i_a, i_b = divmod(index, self.window_b.dimension)
        return self.window_a.labels[i_a], self.window_b.labels[i_b]

    def index_of_m(self, m_a, m_b, shell_a=0, shell_b=0):
        return self.index(self.window_a.index_of_m(m_a, shell_a), self.window_b.index_of_m(m_b, shell_b))

    def window(self, sphere):
        if sphere.upper() == 'A':
            return self.window_a
        if sphere.upper() == 'B':
            return self.window_b
        raise DomainError(f"sphere must be 'A' or 'B', got {sphere!r}")


def symmetric_basis(l_a, l_b, m_a, m_b, half_width, shell_half_width=0):
    """Product basis whose windows are anchored at +-m_a and +-m_b.

    l and m are rounded to the nearest integer, which is exact above 2**53.
    """
    l_a, l_b, m_a, m_b = (float(round(value)) for value in (l_a, l_b, m_a, m_b))
    window_a = BasisWindow(l_a, (m_a, -m_a), half_width, shell_half_width)
    window_b = BasisWindow(l_b, (m_b, -m_b), half_width, shell_half_width)
    return TruncatedProductBasis(window_a, window_b)


# ===================================================================
# OPERATORS
# ===================================================================

class SingleSphereOperators(NamedTuple):
    L_plus: np.ndarray
    L_minus: np.ndarray
    L_z: np.ndarray
    L_x: np.ndarray
    L_y: np.ndarray


def ladder_matrix(window, sign, scale=1.0):
    """L+ (sign=+1) or L- (sign=-1) with hard truncation at the window edges."""
    dim = window.dimension
    matrix = np.zeros((dim, dim))
    for i in range(dim):
        target = window.neighbour(i, sign)
        if target is None:
            continue
        matrix[target, i] = _ladder_from_gaps(window.l_minus_m[i], window.l_plus_m[i], sign) / scale
    return matrix


def build_single_sphere_operators(window, scale=1.0):
    """L+, L-, Lz, Lx, Ly on one window, every element divided by scale."""
    L_plus = ladder_matrix(window, +1, scale)
    L_minus = ladder_matrix(window, -1, scale)
    L_z = np.diag(np.array([window.anchors[label.anchor] / scale + label.offset / scale
                            for label in window.labels]))
    L_x = (L_plus + L_minus) / 2
    L_y = (L_plus - L_minus) / 2j
    return SingleSphereOperators(L_plus, L_minus, L_z, L_x, L_y)


def is_hermitian(matrix, tolerance=HERMITIAN_TOLERANCE):
    scale = np.max(np.abs(matrix)) if matrix.size else 0.0
    if scale == 0:
        return True
    return np.max(np.abs(matrix - matrix.conj().T)) <= tolerance * scale


def build_interaction_hamiltonian(basis, alpha):
    """H_I / hbar in 1/s: -(alpha/2)(L_A+ L_B- + L_A- L_B+ - 4 L_Az L_Bz)."""
    if alpha < 0:
        raise DomainError(f'alpha must be nonnegative, got {alpha}')
    ops_a = build_single_sphere_operators(basis.window_a)
    ops_b = build_single_sphere_operators(basis.window_b)
    if alpha == 0:
        return np.zeros((basis.dimension, basis.dimension))

    # Fold sqrt(alpha) into each factor so no intermediate reaches l^2
    root = math.sqrt(alpha)
    flip = (np.kron(root * ops_a.L_plus, root * ops_b.L_minus)
            + np.kron(root * ops_a.L_minus, root * ops_b.L_plus))
    zz = np.kron(root * np.diag(ops_a.L_z), root * np.diag(ops_b.L_z))
    hamiltonian = -0.5 * flip + 2.0 * np.diag(zz)
    if not is_hermitian(hamiltonian):
        raise DomainError('interaction Hamiltonian failed the Hermiticity check')
    return hamiltonian


def apply_ladder_power(state, basis, sphere, sign, q, scale=1.0):
    """(L+-)^q on one sphere of a product-basis vector.

    Returns (vector, truncation_loss): the unnormalized image (possibly zero
    at a ladder edge) and the fraction of weight dropped at window edges.
    q=0 returns a copy of the state.
    """
    if q < 0:
        raise DomainError(f'ladder power must be nonnegative, got {q}')
    window = basis.window(sphere)
    ladder = ladder_matrix(window, sign, scale)
    # Weight that would leave the window, per source label
    leak = np.zeros(window.dimension)
    for i in range(window.dimension):
        if window.neighbour(i, sign) is None:
            leak[i] = _ladder_from_gaps(window.l_minus_m[i], window.l_plus_m[i], sign) / scale

    amplitudes = np.asarray(state, dtype=complex).reshape(basis.dims)
    if sphere.upper() == 'B':
        amplitudes = amplitudes.T
    kept_fraction = 1.0
    for _ in range(q):
        lost = float(np.sum(np.abs(leak[:, None] * amplitudes) ** 2))
        amplitudes = ladder @ amplitudes
        kept = float(np.sum(np.abs(amplitudes) ** 2))
        if lost > 0:
            kept_fraction *= kept / (kept + lost)
    if sphere.upper() == 'B':
        amplitudes = amplitudes.T
    loss = 1.0 - kept_fraction
    if loss > 1e-8:
        logger.warning('ladder power q=%d on sphere %s dropped %.3e of the weight', q, sphere, loss)
    return amplitudes.reshape(-1).copy(), loss
