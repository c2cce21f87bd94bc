#!/usr/bin/env python
# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
Errors raised by the exact knot and grope calculus.

Precondition failures derive from :class:`ValueError`, failures to decide a
sign or an equality derive from :class:`ArithmeticError`, and failures of
internal cross-checks derive from :class:`RuntimeError`.  The command line maps
these three families onto exit codes 1, 2 and 3.
"""


class GropetowerError(Exception):
    """base class of every error raised by gropetower"""


class PreconditionError(GropetowerError, ValueError):
    """the caller supplied input outside an operation's domain"""


class InvalidSeifertMatrix(PreconditionError):
    pass


class JumpPoint(PreconditionError):
    """the angle is a root of the Alexander polynomial (or a step jump)"""

    def __init__(self, msg, angle=None):
        super(JumpPoint, self).__init__(msg)
        self.angle = angle


class UndefinedHeight(PreconditionError):
    pass


class CapExceeded(PreconditionError):
    """an enumeration would exceed its configured cap"""

    def __init__(self, msg, required=None, cap=None):
        super(CapExceeded, self).__init__(msg)
        self.required = required
        self.cap = cap


class Unsupported(PreconditionError):
    pass


class MissingHypothesis(PreconditionError):
    """a certificate hypothesis flag such as (G1) is not asserted"""

    def __init__(self, msg, hypotheses=()):
        super(MissingHypothesis, self).__init__(msg)
        self.hypotheses = tuple(hypotheses)


class CatalogError(PreconditionError):
    """a catalog or certificate document failed validation"""

    def __init__(self, msg, pointer=''):
        super(CatalogError, self).__init__(
            '{ptr}: {msg}'.format(ptr=pointer or '/', msg=msg))
        self.pointer = pointer


class NoCertificate(GropetowerError):
    """the obstruction margin is not positive; this is not a membership proof"""

    def __init__(self, msg, margin=None):
        super(NoCertificate, self).__init__(msg)
        self.margin = margin


class PrecisionExhausted(GropetowerError, ArithmeticError):
    def __init__(self, msg, prec=None):
        super(PrecisionExhausted, self).__init__(msg)
        self.prec = prec


class Undecidable(PrecisionExhausted):
    """two exact reals could not be separated at the precision cap"""


class InternalConsistencyError(GropetowerError, RuntimeError):
    pass


class InconsistentGrid(InternalConsistencyError):
    pass


class InfiniteHomology(PreconditionError):
    """the branched cover has infinite first homology (Δ vanishes at a root of unity)"""
