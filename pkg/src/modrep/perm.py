"""Permutation groups given by generators.

Deterministic (non-randomized) Schreier-Sims with base points chosen as the
smallest moved points, so transversals, words and everything built on top of
them are byte-stable across runs.  Brute-force utilities (normalizers, Sylow
subgroups, conjugacy classes, subgroup classification) enumerate elements and
hard-fail above their caps instead of degrading.
"""

from __future__ import annotations

from math import lcm

import numpy as np

from .config import CONFIG
from .errors import CapExceeded, InputError

__all__ = [
    "Perm",
    "GroupHandle",
    "Subgroup",
    "orbit",
    "evaluate_word",
    "right_transversal",
    "enumerate_elements",
    "conjugacy_classes_small",
    "normalizer_small",
    "sylow_small",
    "subgroups_of_small",
    "subgroup_class_reps_in",
]


class Perm:
    """A permutation of 0..degree-1, stored as the image array."""

    __slots__ = ("images", "_key")

    def __init__(self, images, _validate=True):
        arr = np.array(images, dtype=np.int32)
        if _validate and sorted(arr.tolist()) != list(range(len(arr))):
            raise InputError("images are not a bijection on 0..degree-1")
        arr.setflags(write=False)
        self.images = arr
        self._key = arr.tobytes()

    @classmethod
    def identity(cls, degree):
        return cls(np.arange(degree, dtype=np.int32), _validate=False)

    @classmethod
    def from_cycles(cls, degree, cycles):
        img = np.arange(degree, dtype=np.int32)
        for cyc in cycles:
            for i, pt in enumerate(cyc):
                img[pt] = cyc[(i + 1) % len(cyc)]
        return cls(img)

    @property
    def degree(self):
        return len(self.images)

    def __mul__(self, other):
        """Left-to-right composition: point^(a*b) = (point^a)^b."""
        if self.degree != other.degree:
            raise InputError("degree mismatch in permutation product")
        return Perm(other.images[self.images], _validate=False)

    def inverse(self):
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(self.degree, dtype=np.int32)
        return Perm(inv, _validate=False)

    def act(self, point):
        return int(self.images[point])

    def is_identity(self):
        return bool(np.array_equal(self.images, np.arange(self.degree, dtype=np.int32)))

    def cycles(self):
        seen = [False] * self.degree
        out = []
        for i in range(self.degree):
            if seen[i] or self.images[i] == i:
                seen[i] = True
                continue
            cyc = [i]
            seen[i] = True
            j = int(self.images[i])
            while j != i:
                cyc.append(j)
                seen[j] = True
                j = int(self.images[j])
            out.append(tuple(cyc))
        return out

    def order(self):
        cyc = self.cycles()
        return lcm(*(len(c) for c in cyc)) if cyc else 1

    def smallest_moved(self):
        diff = np.nonzero(self.images != np.arange(self.degree, dtype=np.int32))[0]
        return int(diff[0]) if len(diff) else None

    def __eq__(self, other):
        return isinstance(other, Perm) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        cyc = self.cycles()
        if not cyc:
            return "Perm(id)"
        return "Perm(" + "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) + ")"


def _invert_word(word):
    # letter k >= 0 means generator k; letter k < 0 means inverse of generator -k-1
    return tuple(-w - 1 for w in reversed(word))


def evaluate_word(group: "GroupHandle", word) -> Perm:
    """Product of group generators addressed by a word.

    Letters >= 0 index generators; a letter l < 0 means the inverse of
    generator -l-1.  The empty word is the identity.
    """
    out = Perm.identity(group.degree)
    for letter in word:
        idx = letter if letter >= 0 else -letter - 1
        if idx >= len(group.generators):
            raise InputError(f"word letter {letter} out of range")
        g = group.generators[idx]
        out = out * (g if letter >= 0 else g.inverse())
    return out


# ---------------------------------------------------------------------------
# orbits
# ---------------------------------------------------------------------------

def orbit(gens, point, degree=None):
    """Orbit of a point with Schreier words: {point: word} transporting point."""
    if degree is None:
        if not gens:
            raise InputError("orbit of an empty generator list needs a degree")
        degree = gens[0].degree
    if not 0 <= point < degree:
        raise InputError("point outside the domain")
    words = {point: ()}
    queue = [point]
    while queue:
        c = queue.pop(0)
        for gi, g in enumerate(gens):
            img = g.act(c)
            if img not in words:
                words[img] = words[c] + (gi,)
                queue.append(img)
    return words


# ---------------------------------------------------------------------------
# stabilizer chain (deterministic Schreier-Sims, bottom-up verification)
# ---------------------------------------------------------------------------

class _Level:
    """One level of the chain: base point, orbit tree under the effective gens."""

    __slots__ = ("base", "orbit", "tree", "_count")

    def __init__(self, base):
        self.base = base
        self.orbit = {}
        self.tree = {}
        self._count = -1  # number of strong generators the orbit was built with


class _Chain:
    def __init__(self, degree):
        self.degree = degree
        self.strong = []       # (Perm, word, depth): fixes bases < depth, moves base[depth]
        self.levels = []       # list[_Level]

    def effective_gens(self, i):
        return [(g, w) for (g, w, d) in self.strong if d >= i]

    def rebuild_orbit(self, i):
        lvl = self.levels[i]
        lvl.orbit = {lvl.base: ()}
        lvl.tree = {lvl.base: None}
        gens = self.effective_gens(i)
        queue = [lvl.base]
        while queue:
            c = queue.pop(0)
            for gi, (g, _) in enumerate(gens):
                img = g.act(c)
                if img not in lvl.orbit:
                    lvl.orbit[img] = None
                    lvl.tree[img] = (c, gi)
                    queue.append(img)
        lvl._count = len(self.strong)

    def transversal(self, i, point):
        """(Perm u, word) with base_i^u = point, from the BFS tree."""
        lvl = self.levels[i]
        gens = self.effective_gens(i)
        path = []
        c = point
        while lvl.tree[c] is not None:
            parent, gi = lvl.tree[c]
            path.append(gi)
            c = parent
        path.reverse()
        u = Perm.identity(self.degree)
        word = ()
        for gi in path:
            g, w = gens[gi]
            u = u * g
            word = word + w
        return u, word

    def sift(self, g, word, start=0):
        """Sift from a level; returns (residue, word, stuck_level)."""
        i = start
        while i < len(self.levels):
            base = self.levels[i].base
            img = g.act(base)
            if img == base:
                i += 1
                continue
            if img not in self.levels[i].orbit:
                return g, word, i
            u, uw = self.transversal(i, img)
            g = g * u.inverse()
            word = word + _invert_word(uw)
            i += 1
        return g, word, len(self.levels)

    def add_strong(self, g, word):
        """Insert a new strong generator; returns the level it lives at."""
        depth = 0
        for lvl in self.levels:
            if g.act(lvl.base) != lvl.base:
                break
            depth += 1
        if depth == len(self.levels):
            mv = g.smallest_moved()
            self.levels.append(_Level(mv))
        self.strong.append((g, tuple(word), depth))
        return depth

    def build(self, generators):
        for gi, g in enumerate(generators):
            self.add_strong(g, (gi,))
        if not self.levels:
            return
        for i in range(len(self.levels)):
            self.rebuild_orbit(i)
        i = len(self.levels) - 1
        while i >= 0:
            if self.levels[i]._count != len(self.strong):
                self.rebuild_orbit(i)
            stuck = self._scan_level(i)
            if stuck is None:
                i -= 1
            else:
                residue, rword = stuck
                j = self.add_strong(residue, rword)
                for k in range(j, len(self.levels)):
                    self.rebuild_orbit(k)
                i = min(j, len(self.levels) - 1)

    def _scan_level(self, i):
        """Check all Schreier generators of level i; return a failing residue or None."""
        lvl = self.levels[i]
        gens = self.effective_gens(i)
        for point in list(lvl.orbit.keys()):
            u, uw = self.transversal(i, point)
            for gi, (s, sw) in enumerate(gens):
                target = s.act(point)
                v, vw = self.transversal(i, target)
                sg = u * s * v.inverse()
                if sg.is_identity():
                    continue
                sgw = uw + sw + _invert_word(vw)
                residue, rword, j = self.sift(sg, sgw, start=i + 1)
                if not residue.is_identity():
                    return residue, rword
        return None


class GroupHandle:
    """A permutation group with a lazily built deterministic stabilizer chain."""

    def __init__(self, generators, degree=None):
        gens = list(generators)
        if degree is None:
            if not gens:
                raise InputError("a trivial group needs an explicit degree")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise InputError("generators have mixed degrees")
        self.degree = degree
        self.generators = [g for g in gens if not g.is_identity()]
        self._chain = None
        self._order = None
        self._elements = None

    @property
    def chain(self) -> _Chain:
        if self._chain is None:
            ch = _Chain(self.degree)
            ch.build(self.generators)
            self._chain = ch
            order = 1
            for i, lvl in enumerate(ch.levels):
                order *= len(lvl.orbit)
            self._order = order
        return self._chain

    def order(self) -> int:
        self.chain
        return self._order

    def sift(self, x: Perm):
        """(residue, word); residue is the identity iff x is a member, and then
        evaluate_word(self, word) == x."""
        if x.degree != self.degree:
            raise InputError("degree mismatch")
        ch = self.chain
        g = x
        factors = []
        i = 0
        while i < len(ch.levels):
            base = ch.levels[i].base
            img = g.act(base)
            if img == base:
                i += 1
                continue
            if img not in ch.levels[i].orbit:
                return g, None
            u, uw = ch.transversal(i, img)
            g = g * u.inverse()
            factors.append(uw)
            i += 1
        if not g.is_identity():
            return g, None
        word = ()
        for uw in reversed(factors):
            word = word + uw
        return g, word

    def membership(self, x: Perm) -> bool:
        residue, _ = self.sift(x)
        return residue.is_identity()

    def factor_word(self, x: Perm):
        residue, word = self.sift(x)
        if word is None:
            raise InputError("element is not a member of the group")
        return word

    def elements(self, cap=None):
        """All elements in deterministic BFS order (identity first)."""
        cap = cap if cap is not None else CONFIG.enumeration_cap
        n = self.order()
        if n > cap:
            raise CapExceeded(f"group order {n} exceeds cap {cap}; supply data instead")
        if self._elements is None:
            ident = Perm.identity(self.degree)
            seen = {ident._key}
            out = [ident]
            queue = [ident]
            while queue:
                cur = queue.pop(0)
                for g in self.generators:
                    nxt = cur * g
                    if nxt._key not in seen:
                        seen.add(nxt._key)
                        out.append(nxt)
                        queue.append(nxt)
            self._elements = out
        return self._elements

    def __repr__(self):
        return f"GroupHandle(degree={self.degree}, gens={len(self.generators)})"


# ---------------------------------------------------------------------------
# subgroups
# ---------------------------------------------------------------------------

class Subgroup:
    """A subgroup of a parent GroupHandle, by explicit perms or by words.

    Every supplied generator is membership-checked against the parent at
    construction; silent trust of data files is forbidden.
    """

    def __init__(self, parent: GroupHandle, gens=None, words=None, name=None):
        if (gens is None) == (words is None):
            raise InputError("give exactly one of explicit generators or words")
        self.parent = parent
        self.name = name
        if words is not None:
            self.words = [tuple(w) for w in words]
            gens = [evaluate_word(parent, w) for w in self.words]
        else:
            self.words = None
            gens = list(gens)
            for g in gens:
                if not parent.membership(g):
                    raise InputError("subgroup generator fails membership in the parent")
        self.gens = gens
        self._group = None

    @classmethod
    def whole(cls, parent, name="G"):
        gens = list(parent.generators) or [Perm.identity(parent.degree)]
        return cls(parent, gens=gens, name=name)

    @classmethod
    def trivial(cls, parent, name="1"):
        return cls(parent, gens=[Perm.identity(parent.degree)], name=name)

    @property
    def group(self) -> GroupHandle:
        if self._group is None:
            self._group = GroupHandle(self.gens, degree=self.parent.degree)
        return self._group

    def order(self):
        return self.group.order()

    def contains(self, x: Perm) -> bool:
        return self.group.membership(x)

    def gen_words_in_parent(self):
        """Words (in parent generators) for this subgroup's generators."""
        if self.words is not None:
            return list(self.words)
        return [self.parent.factor_word(g) for g in self.gens]

    def action_words(self):
        """Words aligned with self.group.generators (identity gens dropped)."""
        if self.words is not None:
            pairs = [(evaluate_word(self.parent, w), w) for w in self.words]
            return [w for g, w in pairs if not g.is_identity()]
        return [self.parent.factor_word(g) for g in self.gens if not g.is_identity()]

    def conjugate(self, x: Perm) -> "Subgroup":
        xi = x.inverse()
        return Subgroup(self.parent, gens=[xi * g * x for g in self.gens],
                        name=f"{self.name}^g" if self.name else None)

    def element_keys(self):
        return frozenset(e._key for e in self.group.elements())

    def __repr__(self):
        return f"Subgroup({self.name or '?'}, order={self.order()})"


# ---------------------------------------------------------------------------
# transversals
# ---------------------------------------------------------------------------

def _canonical_coset_key(h: GroupHandle, x: Perm) -> bytes:
    """Canonical key of the right coset H*x, via H's stabilizer chain."""
    ch = h.chain
    g = x
    for i in range(len(ch.levels)):
        imgs = g.images
        best_pt, best_val = None, None
        for o in ch.levels[i].orbit:
            v = int(imgs[o])
            if best_val is None or v < best_val:
                best_val, best_pt = v, o
        if best_pt != ch.levels[i].base:
            u, _ = ch.transversal(i, best_pt)
            g = u * g
    return g._key


def right_transversal(g: GroupHandle, h: Subgroup):
    """Deterministic right-coset representatives of h in g, identity first.

    Representatives come from a BFS tree over cosets (child = parent * gen);
    coset identity is decided through h's stabilizer chain.
    """
    for gen in h.gens:
        if not g.membership(gen):
            raise InputError("not a subgroup: generator fails membership in the parent")
    hg = h.group
    index, rem = divmod(g.order(), hg.order())
    if rem:
        raise InputError("subgroup order does not divide group order")
    if index > CONFIG.transversal_cap:
        raise CapExceeded(f"index {index} exceeds transversal cap {CONFIG.transversal_cap}")
    ident = Perm.identity(g.degree)
    reps = [ident]
    parents = [None]
    seen = {_canonical_coset_key(hg, ident): 0}
    queue = [0]
    while queue:
        ci = queue.pop(0)
        for gi, gen in enumerate(g.generators):
            nxt = reps[ci] * gen
            key = _canonical_coset_key(hg, nxt)
            if key not in seen:
                seen[key] = len(reps)
                reps.append(nxt)
                parents.append((ci, gi))
                queue.append(len(reps) - 1)
    if len(reps) != index:
        raise AssertionError("transversal size mismatch (chain bug)")
    return TransversalData(reps, parents, seen, hg)


class TransversalData:
    """Coset representatives plus the BFS tree and a coset lookup."""

    def __init__(self, reps, parents, key_to_index, subgroup_handle):
        self.reps = reps
        self.parents = parents
        self._keys = key_to_index
        self._sub = subgroup_handle

    def __len__(self):
        return len(self.reps)

    def __iter__(self):
        return iter(self.reps)

    def __getitem__(self, i):
        return self.reps[i]

    def coset_index(self, x: Perm) -> int:
        key = _canonical_coset_key(self._sub, x)
        idx = self._keys.get(key)
        if idx is None:
            raise InputError("element lies in no known coset (not a group member?)")
        return idx


# ---------------------------------------------------------------------------
# brute-force small-group utilities
# ---------------------------------------------------------------------------

def enumerate_elements(g: GroupHandle, cap=None):
    return g.elements(cap=cap)


def conjugacy_classes_small(g: GroupHandle, cap=None):
    """(reps, sizes, class_of) with class_of mapping element keys to indices."""
    elts = g.elements(cap=cap)
    class_of = {}
    reps, sizes = [], []
    for e in elts:
        if e._key in class_of:
            continue
        idx = len(reps)
        class_of[e._key] = idx
        members = [e]
        queue = [e]
        while queue:
            cur = queue.pop(0)
            for s in g.generators:
                conj = s.inverse() * cur * s
                if conj._key not in class_of:
                    class_of[conj._key] = idx
                    members.append(conj)
                    queue.append(conj)
        reps.append(e)
        sizes.append(len(members))
    return reps, sizes, class_of


def normalizer_small(g: GroupHandle, s: Subgroup, cap=None) -> GroupHandle:
    cap = cap if cap is not None else CONFIG.normalizer_cap
    if g.order() > cap:
        raise CapExceeded(f"normalizer enumeration cap {cap} exceeded; supply data instead")
    s_keys = s.element_keys()
    normalizing = []
    for x in g.elements():
        xi = x.inverse()
        if all((xi * gen * x)._key in s_keys for gen in s.gens):
            normalizing.append(x)
    gens = []
    cur = None
    for x in normalizing:
        if x.is_identity():
            continue
        if cur is not None and cur.membership(x):
            continue
        gens.append(x)
        cur = GroupHandle(gens, degree=g.degree)
        if cur.order() == len(normalizing):
            break
    handle = cur if cur is not None else GroupHandle([], degree=g.degree)
    if handle.order() != len(normalizing):
        raise AssertionError("normalizer generation failed to close")
    return handle


def _p_part(n, p):
    out = 1
    while n % p == 0:
        out *= p
        n //= p
    return out


def sylow_small(g: GroupHandle, p: int, cap=None) -> Subgroup:
    """A Sylow p-subgroup by deterministic exhaustive growth."""
    cap = cap if cap is not None else CONFIG.enumeration_cap
    target = _p_part(g.order(), p)
    ident = Perm.identity(g.degree)
    if target == 1:
        return Subgroup(g, gens=[ident], name=f"Syl{p}")
    elts = g.elements(cap=cap)
    current = {ident._key: ident}
    gens = []

    def closure(base_elems, extra):
        out = dict(base_elems)
        out[extra._key] = extra
        frontier = [extra]
        while frontier:
            cur = frontier.pop()
            for other in list(out.values()):
                for prod in (cur * other, other * cur):
                    if prod._key not in out:
                        out[prod._key] = prod
                        frontier.append(prod)
        return out

    while len(current) < target:
        progressed = False
        for x in elts:
            if x._key in current:
                continue
            o = x.order()
            if o != _p_part(o, p):
                continue
            xi = x.inverse()
            if not all((xi * e * x)._key in current for e in current.values()):
                continue
            new = closure(current, x)
            if len(new) == _p_part(len(new), p) and len(new) <= target:
                current = new
                gens.append(x)
                progressed = True
                break
        if not progressed:
            raise AssertionError("Sylow construction stalled")
    return Subgroup(g, gens=gens, name=f"Syl{p}")


def subgroups_of_small(s: Subgroup, cap: int = 512):
    """All subgroups of a small group, ordered by (order, element keys)."""
    grp = s.group
    if grp.order() > cap:
        raise CapExceeded(f"subgroup enumeration cap {cap} exceeded")
    elts = grp.elements()
    ident = Perm.identity(grp.degree)

    def closure_set(gens):
        out = {ident._key}
        frontier = [ident]
        while frontier:
            cur = frontier.pop()
            for g in gens:
                nxt = cur * g
                if nxt._key not in out:
                    out.add(nxt._key)
                    frontier.append(nxt)
        return frozenset(out)

    trivial = frozenset([ident._key])
    found = {trivial: []}
    frontier = [(trivial, [])]
    while frontier:
        cur_set, cur_gens = frontier.pop(0)
        for x in elts:
            if x._key in cur_set:
                continue
            gens = cur_gens + [x]
            new_set = closure_set(gens)
            if new_set not in found:
                found[new_set] = gens
                frontier.append((new_set, gens))
    subs = [Subgroup(s.parent, gens=gens or [ident]) for gens in found.values()]
    subs.sort(key=lambda sub: (sub.order(), sorted(sub.element_keys())))
    return subs


def subgroup_class_reps_in(p_group: Subgroup, ambient: GroupHandle, order=None, cap=None):
    """Representatives of ambient-conjugacy classes of subgroups of p_group.

    With `order` given, only subgroups of that order are classified.
    """
    cap = cap if cap is not None else CONFIG.normalizer_cap
    if ambient.order() > cap:
        raise CapExceeded("ambient group too large for conjugation classification")
    subs = subgroups_of_small(p_group)
    if order is not None:
        subs = [s for s in subs if s.order() == order]
    amb = ambient.elements()
    remaining = {s.element_keys(): s for s in subs}
    reps = []
    while remaining:
        key = next(iter(remaining))
        rep = remaining.pop(key)
        reps.append(rep)
        rep_elems = [e for e in rep.group.elements()]
        for x in amb:
            xi = x.inverse()
            conj_key = frozenset((xi * e * x)._key for e in rep_elems)
            remaining.pop(conj_key, None)
    return reps
