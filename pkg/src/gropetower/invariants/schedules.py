#!/usr/bin/env python
# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
Critical-level schedules of pushed capped gropes.

A pushed grope in a product ``Y × I`` meets the levels ``Y × {t}`` in a
sequence of critical levels of four types:

A{g}
    a surface stage of genus g, contributing 2g - 1 two-handles
B
    a plumbing point where a meridional disk lands, contributing none
R{k}
    a horizontal disk punctured by k strands, contributing k - 1
S
    a punctured vertical sheet of a concordance, contributing one
"""
import logging
from dataclasses import dataclass

import pandas as pd

from .exceptions import PreconditionError
from .gropes import Cap
from .gropes import GropeTree
from .gropes import grope_height

logger = logging.getLogger(__name__)

KINDS = ('pushed_3d_satellite', 'pushed_3d_concordance', 'product')


@dataclass(frozen=True)
class Level(object):
    kind: str
    param: int = None

    def __post_init__(self):
        if self.kind not in ('A', 'B', 'R', 'S'):
            msg = "unknown level type {k}".format(k=self.kind)
            raise ValueError(msg)
        if self.kind in ('A', 'R') and (self.param is None or self.param < 1):
            msg = "level {k} needs a parameter >= 1, got {p}".format(k=self.kind, p=self.param)
            raise ValueError(msg)
        if self.kind in ('B', 'S') and self.param is not None:
            msg = "level {k} takes no parameter".format(k=self.kind)
            raise ValueError(msg)

    @classmethod
    def parse(cls, text):
        """``'A{2}'``, ``'R{3}'``, ``'B'`` or ``'S'``"""
        text = text.strip()
        if '{' in text:
            kind, rest = text.split('{', 1)
            return cls(kind, int(rest.rstrip('}')))
        return cls(text)

    def __str__(self):
        if self.param is None:
            return self.kind
        return '{k}{{{p}}}'.format(k=self.kind, p=self.param)


@dataclass(frozen=True)
class AbrsSchedule(object):
    levels: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'levels', tuple(
            lev if isinstance(lev, Level) else Level.parse(lev) for lev in self.levels))

    def __len__(self):
        return len(self.levels)

    def __iter__(self):
        return iter(self.levels)

    def __str__(self):
        return '[' + ', '.join(str(lev) for lev in self.levels) + ']'


def level_handles(level):
    if level.kind == 'A':
        return 2 * level.param - 1
    if level.kind == 'B':
        return 0
    if level.kind == 'R':
        return level.param - 1
    return 1


def handle_count(schedule):
    """number of 2-handles in the relative handle decomposition of the exterior"""
    return sum(level_handles(lev) for lev in schedule)


def level_cells(level):
    """
    (vertices, edges, faces) of a spine of the level's piece: a wedge of
    2g circles for A{g}, a circle for B, a wedge of k circles for R{k} and
    of two circles for S
    """
    if level.kind == 'A':
        return 1, 2 * level.param, 0
    if level.kind == 'B':
        return 1, 1, 0
    if level.kind == 'R':
        return 1, level.param, 0
    return 1, 2, 0


def level_euler_characteristic(level):
    v, e, f = level_cells(level)
    return v - e + f


def _satellite_levels(G):
    levels = []
    if G.genus:
        levels.append(Level('A', G.genus))
    for pair in G.pairs:
        for branch in pair:
            if isinstance(branch, Cap):
                if branch.strands:
                    levels.append(Level('R', branch.strands))
                    levels.extend([Level('B')] * branch.strands)
            else:
                levels.extend(_satellite_levels(branch))
    return levels


def schedule_of(G, kind, children=()):
    """
    Canonical schedule of a pushed grope: depth first by stage, then by pair
    index.  For ``kind='product'`` pass the factors ``((G1, kind1), (G2, kind2))``;
    every B level of the outer factor is replaced by a copy of the inner
    factor's schedule.
    """
    if kind not in KINDS:
        msg = "unknown construction kind {k}".format(k=kind)
        raise PreconditionError(msg)
    if kind == 'product':
        if len(children) != 2:
            raise PreconditionError("a product schedule needs exactly two factors")
        (inner, inner_kind), (outer, outer_kind) = children
        total = grope_height(inner) + grope_height(outer) if outer.genus else grope_height(inner)
        if grope_height(G) != total:
            msg = "grope of height {h} is not the product of its factors ({t})".format(
                h=grope_height(G), t=total)
            raise PreconditionError(msg)
        inner_levels = schedule_of(inner, inner_kind).levels
        levels = []
        for lev in schedule_of(outer, outer_kind):
            if lev.kind == 'B':
                levels.extend(inner_levels)
            else:
                levels.append(lev)
        return AbrsSchedule(tuple(levels))
    if not isinstance(G, GropeTree):
        raise PreconditionError("schedules are defined for gropes only")
    if G.genus == 0:
        return AbrsSchedule()
    if kind == 'pushed_3d_satellite':
        if G.boundary_components != 1:
            msg = "a satellite grope is disk-like, got {b} boundary components".format(
                b=G.boundary_components)
            raise PreconditionError(msg)
        return AbrsSchedule(tuple(_satellite_levels(G)))
    if G.boundary_components not in (1, 2):
        msg = "a concordance grope has one or two boundary components, got {b}".format(
            b=G.boundary_components)
        raise PreconditionError(msg)
    return AbrsSchedule((Level('S'),) + tuple(_satellite_levels(G)))


def schedule_frame(schedule):
    """one row per level: level, parameters, handle count"""
    rows = [{'level': lev.kind,
             'parameters': '' if lev.param is None else str(lev.param),
             'handle_count': level_handles(lev)} for lev in schedule]
    return pd.DataFrame(rows, columns=['level', 'parameters', 'handle_count'])
