# core/wigner.py
"""Wigner 3-j symbols.

wigner3j_oracle evaluates the Racah formula with log-factorials for small
quantum numbers. The dipole helpers cover the (1, l, l+1) triples needed by
the black-body jump operators in closed form, fed with exact l - m and l + m
gaps so they stay accurate at l ~ 1e23.
"""

import math

from scipy.special import gammaln

from .exceptions import DomainError

ORACLE_MAX_J = 64
BRANCHES = (-1, 0, +1)


def _is_half_integer(value):
    return abs(2 * value - round(2 * value)) < 1e-12


def _is_integer(value):
    return abs(value - round(value)) < 1e-12


def _log_factorial(n):
    return float(gammaln(n + 1))


def _selection_rules_hold(j1, j2, j3, m1, m2, m3):
    if not _is_integer(m1 + m2 + m3) or round(m1 + m2 + m3) != 0:
        return False
    if not _is_integer(j1 + j2 + j3):
        return False
    if j3 < abs(j1 - j2) or j3 > j1 + j2:
        return False
    for j, m in ((j1, m1), (j2, m2), (j3, m3)):
        if abs(m) > j or not _is_integer(j - m):
            return False
    return True


def wigner3j_oracle(j1, j2, j3, m1, m2, m3):
    """Racah formula; exactly 0 when a selection rule fails."""
    values = (j1, j2, j3, m1, m2, m3)
    if not all(_is_half_integer(v) for v in values):
        raise DomainError(f'3-j arguments must be integers or half-integers, got {values}')
    if min(j1, j2, j3) < 0:
        raise DomainError(f'j values must be nonnegative, got {(j1, j2, j3)}')
    if max(j1, j2, j3) > ORACLE_MAX_J:
        raise DomainError(f'oracle limited to j <= {ORACLE_MAX_J}; use wigner3j_dipole for large l')
    if not _selection_rules_hold(j1, j2, j3, m1, m2, m3):
        return 0.0

    # All factorial arguments below are integers once the selection rules hold
    j1, j2, j3, m1, m2, m3 = (round(2 * v) / 2 for v in values)
    log_prefactor = 0.5 * (
        _log_factorial(j1 + j2 - j3) + _log_factorial(j1 - j2 + j3) + _log_factorial(-j1 + j2 + j3)
        - _log_factorial(j1 + j2 + j3 + 1)
        + _log_factorial(j1 + m1) + _log_factorial(j1 - m1)
        + _log_factorial(j2 + m2) + _log_factorial(j2 - m2)
        + _log_factorial(j3 + m3) + _log_factorial(j3 - m3))

    t_low = int(round(max(0, j2 - j3 - m1, j1 - j3 + m2)))
    t_high = int(round(min(j1 + j2 - j3, j1 - m1, j2 + m2)))
    terms = []
    for t in range(t_low, t_high + 1):
        log_denominator = (
            _log_factorial(t) + _log_factorial(j3 - j2 + t + m1) + _log_factorial(j3 - j1 + t - m2)
            + _log_factorial(j1 + j2 - j3 - t) + _log_factorial(j1 - t - m1) + _log_factorial(j2 - t + m2))
        terms.append((-1) ** t * math.exp(log_prefactor - log_denominator))
    phase = (-1) ** int(round(j1 - j2 - m3))
    return phase * math.fsum(terms)


def _check_dipole_arguments(l, branch, l_minus_m, l_plus_m):
    if branch not in BRANCHES:
        raise DomainError(f'branch (m\' - m) must be one of {BRANCHES}, got {branch}')
    if l < 0:
        raise DomainError(f'l must be nonnegative, got {l}')
    if l_minus_m < 0 or l_plus_m < 0:
        raise DomainError(f'|m| exceeds l={l}')


def _gaps(l, m, l_minus_m, l_plus_m):
    if l_minus_m is None:
        l_minus_m = l - m
    if l_plus_m is None:
        l_plus_m = l + m
    return l_minus_m, l_plus_m


def wigner3j_dipole(l, branch, m, l_minus_m=None, l_plus_m=None):
    """(1 l l+1; -branch, -m, m+branch) in closed form.

    Pass l_minus_m and l_plus_m explicitly when l is too large for l - m to
    be formed in floating point.
    """
    l_minus_m, l_plus_m = _gaps(l, m, l_minus_m, l_plus_m)
    _check_dipole_arguments(l, branch, l_minus_m, l_plus_m)
    common = (2 * l + 1) * (2 * l + 3)
    if branch == +1:
        magnitude = math.sqrt((l_plus_m + 1) * (l_plus_m + 2) / (common * (2 * l + 2)))
    elif branch == -1:
        magnitude = math.sqrt((l_minus_m + 1) * (l_minus_m + 2) / (common * (2 * l + 2)))
    else:
        magnitude = math.sqrt((l_plus_m + 1) * (l_minus_m + 1) / (common * (l + 1)))
    # (-1)^(1 - l - m') with m' = m + branch, read off the parity of l + m
    parity = int(math.fmod(l_plus_m + branch + 1, 2)) % 2
    return magnitude if parity == 0 else -magnitude


def dipole_coefficient(l, branch, l_minus_m, l_plus_m):
    """Fused M_{l,l+1,m} (1 l l+1; 0 0 0) (1 l l+1; -branch, -m, m') for <l,m|d|l+1,m'>.

    The product of a ~l prefactor and two ~1/sqrt(l) symbols reduces to an
    O(1) expression; the imaginary unit of the m' = m - 1 component is not
    included.
    """
    _check_dipole_arguments(l, branch, l_minus_m, l_plus_m)
    common = (2 * l + 1) * (2 * l + 3)
    if branch == +1:
        return -math.sqrt((l_plus_m + 1) * (l_plus_m + 2) / (2 * common))
    if branch == -1:
        return -math.sqrt((l_minus_m + 1) * (l_minus_m + 2) / (2 * common))
    return math.sqrt((l_plus_m + 1) * (l_minus_m + 1) / common)
