#!/usr/bin/env python
# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
Combinatorial capped gropes and Whitney towers.

A :class:`GropeTree` is a surface stage with a sequence of dual pairs; each
side of a pair is either a :class:`Cap` or another (disk-like) GropeTree.
Every surface and cap has a label, and intersections are recorded on caps
as multisets of labels of the sheets they meet.  Nodes are addressed by
paths of ``(pair_index, side)`` steps from the base, ``side`` being 0 for
the left and 1 for the right branch.

Heights are handled as twice-values, so ``3`` stands for 1.5.
"""
import logging
from collections import Counter
from dataclasses import dataclass
from dataclasses import field
from dataclasses import replace
from fractions import Fraction

from .exceptions import InternalConsistencyError
from .exceptions import PreconditionError
from .exceptions import UndefinedHeight

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class HalfInt(object):
    """h ∈ {1, 1.5, 2, ...} stored as ``twice_value = 2h``"""

    twice_value: int

    def __post_init__(self):
        if self.twice_value < 2:
            msg = "heights start at 1, got twice-value {t}".format(t=self.twice_value)
            raise ValueError(msg)

    @classmethod
    def of(cls, value):
        twice = Fraction(value) * 2
        if twice.denominator != 1:
            msg = "{v} is not a half-integer".format(v=value)
            raise ValueError(msg)
        return cls(int(twice))

    @property
    def value(self):
        return Fraction(self.twice_value, 2)

    @property
    def floor(self):
        return self.twice_value // 2

    def is_integer(self):
        return self.twice_value % 2 == 0

    def __add__(self, other):
        return HalfInt(self.twice_value + other.twice_value)

    def __str__(self):
        if self.is_integer():
            return str(self.twice_value // 2)
        return '{n}.5'.format(n=self.twice_value // 2)


@dataclass(frozen=True)
class HandleDelta(object):
    """handles of each index attached to the exterior by an operation"""

    counts: tuple = ()

    @classmethod
    def of(cls, **kwargs):
        """``HandleDelta.of(h2=3)``"""
        return cls.from_dict({int(k[1:]): v for k, v in kwargs.items()})

    @classmethod
    def from_dict(cls, counts):
        if any(v < 0 for v in counts.values()):
            msg = "handle counts must be nonnegative, got {c}".format(c=counts)
            raise ValueError(msg)
        return cls(tuple(sorted((k, v) for k, v in counts.items() if v)))

    def as_dict(self):
        return dict(self.counts)

    def __getitem__(self, index):
        return self.as_dict().get(index, 0)

    def __add__(self, other):
        total = Counter(self.as_dict())
        total.update(other.as_dict())
        return HandleDelta.from_dict(dict(total))

    def low_index_free(self):
        """no handles of index 0 or 1"""
        return self[0] == 0 and self[1] == 0


@dataclass(frozen=True)
class Cap(object):
    label: str
    intersections: tuple = ()
    strands: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'intersections', tuple(sorted(self.intersections)))
        if self.strands < 0:
            raise ValueError("strand count must be nonnegative")


@dataclass(frozen=True)
class GropeTree(object):
    """
    A surface stage with ``len(pairs)`` dual pairs.  ``boundary_components`` is
    0, 1 or 2 for sphere-, disk- and annulus-like gropes; subgropes are
    disk-like.  ``body_intersections`` holds intersections carried by cap
    material merged into the surface by contraction.
    """

    label: str
    pairs: tuple = ()
    boundary_components: int = 1
    body_intersections: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, 'pairs', tuple(tuple(p) for p in self.pairs))
        object.__setattr__(self, 'body_intersections', tuple(sorted(self.body_intersections)))
        if self.boundary_components not in (0, 1, 2):
            msg = "boundary_components must be 0, 1 or 2, got {b}".format(
                b=self.boundary_components)
            raise ValueError(msg)
        if any(len(p) != 2 for p in self.pairs):
            raise ValueError("every dual pair has exactly two branches")

    @property
    def genus(self):
        return len(self.pairs)


def _twice(branch):
    if isinstance(branch, Cap):
        return 0
    if not branch.pairs:
        msg = "surface {label} has genus 0".format(label=branch.label)
        raise UndefinedHeight(msg)
    return min(_pair_twice(left, right) for left, right in branch.pairs)


def _pair_twice(left, right):
    tl, tr = _twice(left), _twice(right)
    return 2 + min(tl, tr) + (tl != tr)


def grope_height(G):
    """min over base pairs of ``1 + min(hL, hR) + ½·[hL ≠ hR]``, caps counting 0"""
    return HalfInt(_twice(G))


def iter_nodes(G, path=()):
    """yield (path, node) for every surface and cap, depth first"""
    yield path, G
    if isinstance(G, GropeTree):
        for i, pair in enumerate(G.pairs):
            for side, branch in enumerate(pair):
                for item in iter_nodes(branch, path + ((i, side),)):
                    yield item


def get_node(G, path):
    node = G
    for i, side in path:
        if not isinstance(node, GropeTree) or i >= len(node.pairs):
            msg = "no node at path {p}".format(p=list(path))
            raise PreconditionError(msg)
        node = node.pairs[i][side]
    return node


def replace_node(G, path, new):
    if not path:
        return new
    (i, side), rest = path[0], path[1:]
    pairs = list(G.pairs)
    pair = list(pairs[i])
    pair[side] = replace_node(pair[side], rest, new)
    pairs[i] = tuple(pair)
    return replace(G, pairs=tuple(pairs))


def _parents(G):
    """label -> label of the surface the node is attached to (None for the base)"""
    out = {}
    for path, node in iter_nodes(G):
        out[node.label] = get_node(G, path[:-1]).label if path else None
    return out


def labels(G):
    return [node.label for _, node in iter_nodes(G)]


def caps(G):
    return [(path, node) for path, node in iter_nodes(G) if isinstance(node, Cap)]


def total_intersections(G):
    total = 0
    for _, node in iter_nodes(G):
        if isinstance(node, Cap):
            total += len(node.intersections)
        else:
            total += len(node.body_intersections)
    return total


def validate_grope(G):
    """labels unique, references resolve, non-base subgropes have positive genus"""
    seen = labels(G)
    dupes = [k for k, v in Counter(seen).items() if v > 1]
    if dupes:
        msg = "duplicate labels {d}".format(d=sorted(dupes))
        raise PreconditionError(msg)
    known = set(seen)
    for path, node in iter_nodes(G):
        refs = node.intersections if isinstance(node, Cap) else node.body_intersections
        missing = [r for r in refs if r not in known]
        if missing:
            msg = "{label} meets unknown sheets {m}".format(label=node.label, m=missing)
            raise PreconditionError(msg)
        if path and isinstance(node, GropeTree):
            if node.genus == 0:
                msg = "subgrope {label} has genus 0".format(label=node.label)
                raise PreconditionError(msg)
            if node.boundary_components != 1:
                msg = "subgrope {label} is not disk-like".format(label=node.label)
                raise PreconditionError(msg)
    return G


def is_top_stage(node):
    return isinstance(node, GropeTree) and node.genus > 0 and \
        all(isinstance(b, Cap) for pair in node.pairs for b in pair)


def contract(G, path, mode='symmetric', pair_index=0):
    """
    Contract one dual pair of the top-stage surface at ``path``.

    Symmetric contraction uses two parallel copies of each cap, so caps with
    a and b intersections leave 2a + 2b; asymmetric contraction keeps two
    copies of the left cap only.  A surface that loses its last pair becomes
    a cap carrying everything accumulated on it.
    """
    surface = get_node(G, path)
    if not is_top_stage(surface):
        msg = "node at {p} is not a top-stage surface".format(p=list(path))
        raise PreconditionError(msg)
    if not 0 <= pair_index < surface.genus:
        msg = "pair index {i} out of range".format(i=pair_index)
        raise PreconditionError(msg)
    left, right = surface.pairs[pair_index]
    if mode == 'symmetric':
        carried = left.intersections * 2 + right.intersections * 2
        strands = 2 * (left.strands + right.strands)
    elif mode == 'asymmetric':
        carried = left.intersections * 2
        strands = 2 * left.strands
    else:
        msg = "unknown contraction mode {m}".format(m=mode)
        raise ValueError(msg)
    delta = HandleDelta.of(h2=len(left.intersections) + len(right.intersections))
    consumed = {left.label, right.label}
    pairs = surface.pairs[:pair_index] + surface.pairs[pair_index + 1:]
    body = surface.body_intersections + carried
    if pairs or not path:
        new = replace(surface, pairs=pairs, body_intersections=body)
        if strands:
            new = _with_strands_on_first_cap(new, strands)
    else:
        new = Cap(surface.label, body, strands)
    out = replace_node(G, path, new)
    return _redirect(out, consumed, surface.label), delta


def _with_strands_on_first_cap(surface, strands):
    for path, node in iter_nodes(surface):
        if isinstance(node, Cap):
            return replace_node(surface, path, replace(node, strands=node.strands + strands))
    return surface


def _redirect(G, old_labels, new_label):
    """re-point references to consumed caps at the sheet that absorbed them"""
    def fix(refs):
        return tuple(new_label if r in old_labels else r for r in refs)

    out = G
    for path, node in list(iter_nodes(G)):
        if isinstance(node, Cap):
            if any(r in old_labels for r in node.intersections):
                out = replace_node(out, path, replace(node, intersections=fix(node.intersections)))
        elif any(r in old_labels for r in node.body_intersections):
            current = get_node(out, path)
            out = replace_node(out, path, replace(
                current, body_intersections=fix(current.body_intersections)))
    return out


def contract_all(G, path, mode='symmetric'):
    """contract every pair of the top stage at ``path``"""
    delta = HandleDelta()
    node = get_node(G, path)
    while isinstance(node, GropeTree) and node.genus > 0:
        G, step = contract(G, path, mode=mode)
        delta = delta + step
        node = get_node(G, path)
    return G, delta


def _collapse(G, path, mode):
    """turn the branch at ``path`` into a cap"""
    node = get_node(G, path)
    if isinstance(node, Cap):
        return G, HandleDelta()
    delta = HandleDelta()
    for i, pair in enumerate(node.pairs):
        for side in (0, 1):
            G, step = _collapse(G, path + ((i, side),), mode)
            delta = delta + step
    G, step = contract_all(G, path, mode)
    return G, delta + step


def _lower_branch(G, path, target, mode):
    """bring the twice-height of the branch at ``path`` down to ``target``"""
    node = get_node(G, path)
    current = _twice(node)
    if current == target:
        return G, HandleDelta()
    if current < target:
        msg = "cannot raise {label} from {c} to {t}".format(label=node.label, c=current, t=target)
        raise InternalConsistencyError(msg)
    if target == 0:
        return _collapse(G, path, mode)
    delta = HandleDelta()
    for i in range(node.genus):
        node = get_node(G, path)
        left, right = node.pairs[i]
        if _pair_twice(left, right) == target:
            continue
        tl, tr = _twice(left), _twice(right)
        if target % 2 == 0:
            goals = (target - 2, target - 2)
        elif tl >= tr:
            goals = (target - 1, target - 3)
        else:
            goals = (target - 3, target - 1)
        for side, goal in enumerate(goals):
            G, step = _lower_branch(G, path + ((i, side),), goal, mode)
            delta = delta + step
    return G, delta


def lower_height(x, target, mode='symmetric'):
    """
    Return a grope (by contractions) or a tower (by removing Whitney disks)
    whose height is exactly ``target``, with the accumulated HandleDelta.
    """
    if not isinstance(target, HalfInt):
        target = HalfInt.of(target)
    if isinstance(x, TowerTree):
        return _lower_tower(x, target)
    current = grope_height(x)
    if target >= current:
        msg = "target height {t} is not below the current height {c}".format(
            t=target, c=current)
        raise PreconditionError(msg)
    G, delta = _lower_branch(x, (), target.twice_value, mode)
    if grope_height(G) != target:
        msg = "lowering reached {h} instead of {t}".format(h=grope_height(G), t=target)
        raise InternalConsistencyError(msg)
    return G, delta


def push_down(G, cap_path, index):
    """
    Replace the ``index``-th intersection of the cap at ``cap_path`` with a
    sheet S by two intersections with the surface S is attached to.
    """
    cap = get_node(G, cap_path)
    if not isinstance(cap, Cap):
        msg = "node at {p} is not a cap".format(p=list(cap_path))
        raise PreconditionError(msg)
    if not cap.intersections:
        msg = "cap {label} has no intersections to push".format(label=cap.label)
        raise PreconditionError(msg)
    if not 0 <= index < len(cap.intersections):
        msg = "intersection index {i} out of range".format(i=index)
        raise PreconditionError(msg)
    sheet = cap.intersections[index]
    parent = _parents(G).get(sheet, KeyError)
    if parent is KeyError:
        msg = "cap {label} meets unknown sheet {s}".format(label=cap.label, s=sheet)
        raise PreconditionError(msg)
    if parent is None:
        msg = "intersection of {label} with {s} is already on the base".format(
            label=cap.label, s=sheet)
        raise PreconditionError(msg)
    refs = list(cap.intersections)
    del refs[index]
    refs.extend([parent, parent])
    out = replace_node(G, cap_path, replace(cap, intersections=tuple(refs)))
    return out, HandleDelta.of(h2=1)


def push_all_to_base(G):
    """push every cap intersection down until it meets the base surface"""
    delta = HandleDelta()
    base = G.label
    while True:
        for path, node in caps(G):
            off = [k for k, r in enumerate(node.intersections) if r != base]
            if off:
                G, step = push_down(G, path, off[0])
                delta = delta + step
                break
        else:
            return G, delta


def is_dyadic(G):
    for path, node in iter_nodes(G):
        if isinstance(node, Cap) and len(node.intersections) > 1:
            return False
        if path and isinstance(node, GropeTree) and node.genus != 1:
            return False
    return True


def _relabel(branch, suffix):
    if isinstance(branch, Cap):
        return replace(branch, label=branch.label + suffix)
    pairs = tuple(tuple(_relabel(b, suffix) for b in pair) for pair in branch.pairs)
    return replace(branch, label=branch.label + suffix, pairs=pairs)


def _split_parts(branch):
    """split a branch into pieces with one pair or at most one intersection each"""
    if isinstance(branch, Cap):
        if len(branch.intersections) <= 1:
            return [branch], HandleDelta()
        parts = [Cap('{l}/{k}'.format(l=branch.label, k=k + 1), (ref,),
                     branch.strands if k == 0 else 0)
                 for k, ref in enumerate(branch.intersections)]
        return parts, HandleDelta()
    inner, delta = _split_surface(branch)
    if inner.genus <= 1:
        return [inner], delta
    parts = [replace(inner, label='{l}/{k}'.format(l=inner.label, k=k + 1), pairs=(pair,),
                     body_intersections=inner.body_intersections if k == 0 else ())
             for k, pair in enumerate(inner.pairs)]
    return parts, delta


def _split_surface(surface):
    delta = HandleDelta()
    pairs = []
    for left, right in surface.pairs:
        lparts, dl = _split_parts(left)
        rparts, dr = _split_parts(right)
        delta = delta + dl + dr
        if len(lparts) == 1 and len(rparts) == 1:
            pairs.append((lparts[0], rparts[0]))
            continue
        for i, lp in enumerate(lparts):
            for j, rp in enumerate(rparts):
                pairs.append((_relabel(lp, '~{j}'.format(j=j + 1)) if len(rparts) > 1 else lp,
                              _relabel(rp, '~{i}'.format(i=i + 1)) if len(lparts) > 1 else rp))
        delta = delta + HandleDelta.of(h2=len(lparts) * len(rparts) - 1)
    return replace(surface, pairs=tuple(pairs)), delta


def split(G):
    """
    Dyadic normal form: all cap intersections pushed to the base, every
    non-base surface of genus one, every cap with at most one intersection.
    Height is unchanged.
    """
    G, delta = push_all_to_base(G)
    out, step = _split_surface(G)
    if not is_dyadic(out) or grope_height(out) != grope_height(G):
        raise InternalConsistencyError("grope splitting broke the dyadic form or the height")
    return out, delta + step


def _branch(k, label, cap_strands):
    if k == 0:
        return Cap(label, (), cap_strands)
    return GropeTree(label, ((_branch(k - 1, label + '.0L', cap_strands),
                              _branch(k - 1, label + '.0R', cap_strands)),))


def model_grope(height, genus=1, boundary_components=1, cap_strands=0, label='S'):
    """
    The uniform capped grope of the given height: height n has branches of
    height n - 1 on both sides of every base pair, height n.5 has n and n - 1.
    """
    if not isinstance(height, HalfInt):
        height = HalfInt.of(height)
    n = height.floor
    pairs = []
    for i in range(genus):
        left = '{l}.{i}L'.format(l=label, i=i)
        right = '{l}.{i}R'.format(l=label, i=i)
        if height.is_integer():
            pairs.append((_branch(n - 1, left, cap_strands), _branch(n - 1, right, cap_strands)))
        else:
            pairs.append((_branch(n, left, cap_strands), _branch(n - 1, right, cap_strands)))
    return GropeTree(label, tuple(pairs), boundary_components)


def product(G1, G2):
    """
    Replace every cap of ``G2`` that meets the strands k times by k parallel
    copies of the disk-like satellite grope ``G1``; heights add.
    """
    if G1.boundary_components != 1:
        msg = "the satellite factor must be disk-like, got {b} boundary components".format(
            b=G1.boundary_components)
        raise PreconditionError(msg)
    if G2.boundary_components == 0:
        msg = "the second factor must be a satellite grope or a concordance, got a " \
              "sphere-like {label}".format(label=G2.label)
        raise PreconditionError(msg)
    if G2.genus == 0:
        return G1
    out = G2
    for path, cap in caps(G2):
        if cap.strands == 0:
            continue
        pairs = []
        for k in range(cap.strands):
            prefix = '{c}*{k}:'.format(c=cap.label, k=k + 1)
            pairs.extend(_prefixed(G1, prefix).pairs)
        branch = GropeTree(cap.label, tuple(pairs), 1)
        if cap.intersections:
            first_path, first = caps(branch)[0]
            branch = replace_node(branch, first_path, replace(
                first, intersections=first.intersections + cap.intersections))
        out = replace_node(out, path, branch)
    return out


def _prefixed(G, prefix):
    def walk(node):
        if isinstance(node, Cap):
            return replace(node, label=prefix + node.label,
                           intersections=tuple(prefix + r for r in node.intersections))
        return replace(node, label=prefix + node.label,
                       pairs=tuple(tuple(walk(b) for b in pair) for pair in node.pairs),
                       body_intersections=tuple(prefix + r for r in node.body_intersections))
    return walk(G)


# Whitney towers

@dataclass(frozen=True)
class WhitneyDisk(object):
    """
    pairs : (sheet, sheet)
        the two sheets whose pair of intersection points the disk pairs up
    own_intersections : tuple
        one entry per intersection point of the disk, naming the sheet met
    """

    name: str
    pairs: tuple
    own_intersections: tuple = ()
    height_label: int = None

    def __post_init__(self):
        object.__setattr__(self, 'pairs', tuple(sorted(self.pairs)))
        object.__setattr__(self, 'own_intersections', tuple(sorted(self.own_intersections)))


@dataclass(frozen=True)
class TowerTree(object):
    """base sheets (height one), intersection points among them, Whitney disks"""

    base_sheets: tuple = ('B',)
    base_points: tuple = ()
    disks: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'base_points', tuple(sorted(tuple(sorted(p))
                                                             for p in self.base_points)))


def sheet_heights(T):
    heights = {name: 1 for name in T.base_sheets}
    pending = list(T.disks)
    while pending:
        progressed = False
        for disk in list(pending):
            a, b = disk.pairs
            if a in heights and b in heights:
                if heights[a] != heights[b]:
                    msg = "Whitney disk {d} pairs sheets of heights {x} and {y}".format(
                        d=disk.name, x=heights[a], y=heights[b])
                    raise UndefinedHeight(msg)
                heights[disk.name] = heights[a] + 1
                if disk.height_label is not None and disk.height_label != heights[disk.name]:
                    msg = "Whitney disk {d} is labelled {lab} but has height {h}".format(
                        d=disk.name, lab=disk.height_label, h=heights[disk.name])
                    raise UndefinedHeight(msg)
                pending.remove(disk)
                progressed = True
        if not progressed:
            msg = "Whitney disks {d} pair sheets that never get a height".format(
                d=[d.name for d in pending])
            raise UndefinedHeight(msg)
    return heights


def tower_points(T):
    points = Counter(T.base_points)
    for disk in T.disks:
        for sheet in disk.own_intersections:
            points[tuple(sorted((disk.name, sheet)))] += 1
    return points


def _tower_satisfies(T, heights, points, paired, twice):
    n = twice // 2
    if twice % 2 == 0:
        if any(h > n for h in heights.values()):
            return False
        for (a, b), count in points.items():
            if heights[a] != heights[b] or heights[a] > n:
                return False
            if heights[a] < n and paired[(a, b)] * 2 != count:
                return False
        return True
    if any(h > n + 1 for h in heights.values()):
        return False
    for (a, b), count in points.items():
        if heights[a] <= n and heights[b] <= n:
            if heights[a] != heights[b] or paired[(a, b)] * 2 != count:
                return False
    for disk in T.disks:
        if heights[disk.name] == n + 1:
            if any(heights[s] < n for s in disk.own_intersections):
                return False
    return True


def tower_height(T):
    """largest h whose integer or n.5 clauses the tower satisfies"""
    heights = sheet_heights(T)
    points = tower_points(T)
    paired = Counter(disk.pairs for disk in T.disks)
    for pair, count in paired.items():
        if points[pair] < 2 * count:
            msg = "Whitney disks on {p} pair more points than exist".format(p=pair)
            raise PreconditionError(msg)
    top = max(heights.values())
    for twice in range(2 * top, 1, -1):
        if _tower_satisfies(T, heights, points, paired, twice):
            return HalfInt(twice)
    raise UndefinedHeight("the tower satisfies no height clause")


def _tower_chain(base, c, height, free):
    """
    One chain of Whitney disks W2, ..., W(top) over ``base``.  ``free``
    intersection points sit on the top disk: self-intersections at an
    integer height, points with the disk below at height n.5.
    """
    n = height.floor
    top = n + (0 if height.is_integer() else 1)
    if top == 1:
        return [(base, base)] * free, []

    def name(k):
        return 'W{k}.{c}'.format(k=k, c=c)

    disks = []
    for k in range(2, top + 1):
        below = base if k == 2 else name(k - 1)
        if k < top:
            own = (name(k), name(k))
        elif height.is_integer():
            own = (name(k),) * free
        else:
            own = (below,) * (1 + free)
        disks.append(WhitneyDisk(name(k), (below, below), own, k))
    return [(base, base), (base, base)], disks


def model_tower(height, chains=1):
    """
    Chains of Whitney disks W2, ..., Wn on one base sheet; height n leaves an
    unpaired self-intersection on the top disk, height n.5 adds a disk
    W(n+1) that meets Wn.
    """
    if not isinstance(height, HalfInt):
        height = HalfInt.of(height)
    base_points = []
    disks = []
    for c in range(chains):
        points, chain = _tower_chain('B', c, height, 1 if height.is_integer() else 0)
        base_points.extend(points)
        disks.extend(chain)
    return TowerTree(('B',), tuple(base_points), tuple(disks))


def _lower_tower(T, target):
    current = tower_height(T)
    if target >= current:
        msg = "target height {t} is not below the current height {c}".format(
            t=target, c=current)
        raise PreconditionError(msg)
    heights = sheet_heights(T)
    n = target.floor
    keep_up_to = n if target.is_integer() else n + 1
    kept = [d for d in T.disks if heights[d.name] <= keep_up_to]
    removed = len(T.disks) - len(kept)
    gone = {d.name for d in T.disks} - {d.name for d in kept}
    kept = [replace(d, own_intersections=tuple(s for s in d.own_intersections if s not in gone))
            for d in kept]
    delta = HandleDelta.of(h2=removed)
    if not target.is_integer():
        # finger move of a top disk into a height n sheet
        tops = [d for d in kept if heights[d.name] == n + 1]
        lows = sorted(s for s, h in heights.items() if h == n and s not in gone)
        if not tops or not lows:
            raise InternalConsistencyError("no disk to finger-move for an n.5 target")
        first = tops[0]
        moved = replace(first, own_intersections=first.own_intersections + (lows[0], lows[0]))
        kept[kept.index(first)] = moved
        delta = delta + HandleDelta.of(h3=1)
    out = TowerTree(T.base_sheets, T.base_points, tuple(kept))
    if tower_height(out) != target:
        msg = "disk removal reached {h} instead of {t}".format(h=tower_height(out), t=target)
        raise InternalConsistencyError(msg)
    return out, delta


def _free_points(disk, paired):
    """split ``disk.own_intersections`` into points paired by higher disks and free ones"""
    reserve = Counter()
    for (a, b), count in paired.items():
        if disk.name in (a, b):
            other = b if a == disk.name else a
            reserve[other] += 2 * count
    held, free = [], []
    for sheet in disk.own_intersections:
        if reserve[sheet] > 0:
            reserve[sheet] -= 1
            held.append(sheet)
        else:
            free.append(sheet)
    return held, free


def split_tower(T):
    """
    Whitney-disk splitting: a disk with k > 1 free intersection points is
    traded, by k - 1 finger moves, for k parallel disks with one free point
    each.  Each finger move adds a pair of points between the two paired
    sheets and one 3-handle; points paired by higher disks stay put.
    """
    height = tower_height(T)
    paired = Counter(disk.pairs for disk in T.disks)
    names = {disk.name for disk in T.disks}
    base_points = list(T.base_points)
    extra_own = Counter()
    kept, copies = [], []
    for disk in T.disks:
        held, free = _free_points(disk, paired)
        kept.append(replace(disk, own_intersections=tuple(held + free[:1])))
        for k, sheet in enumerate(free[1:]):
            copy = '{d}/{k}'.format(d=disk.name, k=k + 2)
            point = copy if sheet == disk.name else sheet
            copies.append(WhitneyDisk(copy, disk.pairs, (point,), disk.height_label))
            a, b = disk.pairs
            if a in names:
                extra_own[(a, b)] += 2
            elif b in names:
                extra_own[(b, a)] += 2
            else:
                base_points.extend([(a, b), (a, b)])
    disks = []
    for disk in kept:
        grown = [other for (host, other), count in sorted(extra_own.items())
                 if host == disk.name for _ in range(count)]
        disks.append(replace(disk, own_intersections=disk.own_intersections + tuple(grown)))
    out = TowerTree(T.base_sheets, tuple(base_points), tuple(disks + copies))
    if tower_height(out) != height:
        raise InternalConsistencyError("tower splitting changed the height")
    if copies:
        logger.debug("split %d Whitney disks off by finger moves", len(copies))
    return out, HandleDelta.of(h3=len(copies))


def _grope_to_tower(G):
    """one disk chain per base pair; cap intersections become free points on the top disk"""
    height = grope_height(G)
    base_points = []
    disks = []
    for c, pair in enumerate(G.pairs):
        free = sum(total_intersections(branch) for branch in pair)
        points, chain = _tower_chain(G.label, c, height, free)
        base_points.extend(points)
        disks.extend(chain)
    return TowerTree((G.label,), tuple(base_points), tuple(disks))


def tower_chains(T):
    """
    For each Whitney disk pairing base points, the number of free points on
    the disks stacked over it that no higher disk pairs.  A height n.5
    tower keeps one point of each top disk as its meeting with the sheet
    below, which is not counted.
    """
    height = tower_height(T)
    heights = sheet_heights(T)
    paired = Counter(disk.pairs for disk in T.disks)
    children = {disk.name: [] for disk in T.disks}
    for disk in T.disks:
        for sheet in set(disk.pairs):
            if sheet in children:
                children[sheet].append(disk)
    seen = set()
    out = []
    for root in T.disks:
        if not set(root.pairs) <= set(T.base_sheets):
            continue
        free = 0
        stack = [root]
        while stack:
            disk = stack.pop()
            if disk.name in seen:
                continue
            seen.add(disk.name)
            stack.extend(children[disk.name])
            if children[disk.name]:
                continue
            points = len(_free_points(disk, paired)[1])
            if not height.is_integer() and heights[disk.name] == height.floor + 1:
                points = max(points - 1, 0)
            free += points
        out.append(free)
    return out


def _tower_to_grope(T):
    """one base pair per chain; free points become cap intersections with the base"""
    height = tower_height(T)
    base = T.base_sheets[0]
    counts = tower_chains(T) or [len(T.base_points)]
    G = model_grope(height, genus=len(counts), label=base)
    for i, count in enumerate(counts):
        slots = [path for path, _ in caps(G) if path[0][0] == i]
        for k in range(count):
            path = slots[min(k, len(slots) - 1)]
            cap = get_node(G, path)
            G = replace_node(G, path, replace(cap, intersections=cap.intersections + (base,)))
    return G


def schneiderman(x):
    """
    Grope to tower or tower to grope, height preserved.  Gropes are first
    brought to dyadic form with all cap intersections on the base, then each
    base pair becomes a chain of Whitney disks carrying the pair's cap
    intersections as free points.  Towers are first split, then each chain
    over the base becomes a base pair whose caps meet the base once per
    free point.  Tri-sheet moves and cap surgeries inside the
    transformation leave the exterior unchanged.
    """
    if isinstance(x, GropeTree):
        height = grope_height(x)
        normal, delta = split(x)
        out = _grope_to_tower(normal)
        if tower_height(out) != height:
            raise InternalConsistencyError("grope to tower changed the height")
        return out, delta
    if isinstance(x, TowerTree):
        height = tower_height(x)
        normal, delta = split_tower(x)
        out = _tower_to_grope(normal)
        if grope_height(out) != height:
            raise InternalConsistencyError("tower to grope changed the height")
        return out, delta
    msg = "schneiderman expects a GropeTree or a TowerTree, got {t}".format(
        t=type(x).__name__)
    raise PreconditionError(msg)
