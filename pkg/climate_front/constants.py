# -*- mode:python; coding:utf-8; -*-
# created: 2026-10-17

__all__ = [
    'CSV_FORMAT',
    'DERIVATIVE_RTOL',
    'MONOTONE_SLACK',
    'BOUND_RTOL',
    'SPEED_BRACKET_MARGIN',
    'SPEED_SCAN_SIZE',
    'MAX_BISECTION_ITERATIONS',
    'TRUNCATION_START',
    'TRUNCATION_MAX_DOUBLINGS',
    'DEFAULT_DX_SCALE',
    'CRITICAL_SPEED_MATCH',
    'TRIVIAL_BRANCH_RTOL',
    'ORACLE_REFINEMENT',
    'ORACLE_MAX_HALVINGS',
]

# 12 significant digits for every numeric output
CSV_FORMAT = '%.12g'

# u0'(0) and u0'(h0) checks, relative to max(u0) / h0
DERIVATIVE_RTOL = 1e-6
# allowed increase between neighbouring values of a decreasing profile
MONOTONE_SLACK = 1e-10
# relative slack of the max{a/b, |u0|} bound on the density
BOUND_RTOL = 1e-6

# nominal c0 bracket is [m, 1 - m] * 2 sqrt(ad)
SPEED_BRACKET_MARGIN = 1e-6
# pre-flight scan of f(c) = -mu(a) q_c'(0) - c
SPEED_SCAN_SIZE = 8
MAX_BISECTION_ITERATIONS = 60
# c is treated as c0 when |c - c0| <= CRITICAL_SPEED_MATCH * c0
CRITICAL_SPEED_MATCH = 1e-8

# first truncation radius is TRUNCATION_START * sqrt(d / a)
TRUNCATION_START = 20.0
TRUNCATION_MAX_DOUBLINGS = 8
# default BVP mesh is DEFAULT_DX_SCALE * sqrt(d / a)
DEFAULT_DX_SCALE = 2e-3
# Newton result below this fraction of the plateau is the zero branch
TRIVIAL_BRANCH_RTOL = 1e-8

# the explicit oracle refines the main solver mesh by this factor
ORACLE_REFINEMENT = 4
ORACLE_MAX_HALVINGS = 4
