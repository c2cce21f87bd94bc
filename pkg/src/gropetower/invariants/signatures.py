#!/usr/bin/env python
# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
Even step functions on the unit circle.
"""
from dataclasses import dataclass

from .angles import RationalTurn
from .angles import angles_equal
from .angles import compare_cos
from .angles import sort_angles
from .exceptions import JumpPoint


@dataclass(frozen=True)
class StepSignature(object):
    """
    Step function σ on (0, π] with ``σ(θ) = Σ delta`` over jumps below θ,
    extended evenly to the circle.

    jumps : tuple of (ExactAngle, int)
        sorted by increasing θ, distinct angles, nonzero even deltas
    """

    jumps: tuple = ()

    @classmethod
    def from_jumps(cls, jumps):
        merged = []
        for angle, delta in jumps:
            for k, (seen, total) in enumerate(merged):
                if angles_equal(seen, angle):
                    merged[k] = (seen, total + delta)
                    break
            else:
                merged.append((angle, delta))
        merged = [(a, d) for a, d in merged if d != 0]
        ordered = sort_angles([a for a, _ in merged])
        deltas = []
        for angle in ordered:
            deltas.append(next(d for a, d in merged if a is angle))
        return cls(tuple(zip(ordered, deltas)))

    @classmethod
    def zero(cls):
        return cls()

    def is_zero(self):
        return not self.jumps

    def __add__(self, other):
        return StepSignature.from_jumps(self.jumps + other.jumps)

    def __neg__(self):
        return StepSignature(tuple((a, -d) for a, d in self.jumps))

    def scale(self, k):
        if k == 0:
            return StepSignature()
        return StepSignature(tuple((a, k * d) for a, d in self.jumps))

    def total(self):
        """value on the far side of every jump"""
        return sum(d for _, d in self.jumps)

    def __call__(self, angle):
        return step_eval(self, angle)


def step_eval(sig, angle):
    """σ at an exact angle; raises JumpPoint on a jump"""
    value = 0
    for jump, delta in sig.jumps:
        order = compare_cos(jump, angle)
        if order == 0:
            msg = "{a} is a jump point of the signature".format(a=angle)
            raise JumpPoint(msg, angle=angle)
        if order > 0:
            value += delta
    return value


def sum_over_roots(sig, p):
    """
    Σ_{r=0}^{p-1} σ(2πr/p); the terms for r and p - r coincide, so only
    0 < r < p/2 are evaluated (and r = p/2 once for even p).
    """
    if p < 2:
        msg = "sum over roots needs p >= 2, got {p}".format(p=p)
        raise ValueError(msg)
    total = 0
    for r in range(1, (p + 1) // 2):
        total += 2 * step_eval(sig, RationalTurn(r, p))
    if p % 2 == 0:
        total += step_eval(sig, RationalTurn(1, 2))
    return total
