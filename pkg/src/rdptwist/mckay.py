"""Character tables, McKay graphs, Dynkin recognition, graph automorphisms
and the action of a normalizer on the McKay graph of a normal subgroup."""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field

from .fieldtower import FieldError, FieldTower, adjoin_cyclotomic, find_root_of_unity
from .groupmodels import EtaleGroupModel, MuGroup


class McKayError(FieldError):
    pass


class NonTerminating(McKayError):
    pass


class MissingRootsOfUnity(McKayError):
    pass


class NotADEShape(McKayError):
    pass


class KernelMismatch(McKayError):
    pass


class NotSurjective(McKayError):
    pass


class UnsupportedFold(McKayError):
    pass


# ---------------------------------------------------------------------------
# character tables


class CharacterTable:
    """Irreducible characters as vectors of class values."""

    def __init__(self, group: EtaleGroupModel, characters, rho_index: int):
        self.group = group
        self.classes = group.conjugacy_classes()
        self.characters = characters
        self.rho_index = rho_index
        self._inverse_class = _inverse_class_map(group)

    @property
    def dims(self) -> list[int]:
        return [int(chi[0].to_base()) for chi in self.characters]

    def __len__(self):
        return len(self.characters)

    def inner(self, chi, psi) -> int:
        return _inner(self.group, self.classes, self._inverse_class, chi, psi)

    def is_orthonormal(self) -> bool:
        k = len(self.characters)
        return all(
            self.inner(self.characters[i], self.characters[j]) == (1 if i == j else 0)
            for i in range(k)
            for j in range(k)
        )

    def value(self, chi_index: int, element_index: int):
        cls = self.group_class_of(element_index)
        return self.characters[chi_index][cls]

    def group_class_of(self, element_index: int) -> int:
        if not hasattr(self, "_class_of"):
            self._class_of = {}
            for c, members in enumerate(self.classes):
                for m in members:
                    self._class_of[m] = c
        return self._class_of[element_index]

    def to_json(self) -> dict:
        return {
            "group": self.group.name,
            "class_sizes": [len(c) for c in self.classes],
            "dims": self.dims,
            "characters": [[str(v) for v in chi] for chi in self.characters],
        }


def _inverse_class_map(G: EtaleGroupModel) -> list[int]:
    classes = G.conjugacy_classes()
    class_of = {}
    for c, members in enumerate(classes):
        for m in members:
            class_of[m] = c
    return [class_of[G.inv(members[0])] for members in classes]


def _inner(G, classes, inv_class, chi, psi) -> int:
    T = chi[0].tower
    acc = T.zero()
    for c, members in enumerate(classes):
        acc = acc + chi[c] * psi[inv_class[c]] * len(members)
    val = (acc / G.order).to_base()
    if getattr(val, "denominator", 1) != 1:
        raise McKayError(f"non-integral inner product {val}")
    return int(val)


def _ensure_roots(G: EtaleGroupModel) -> EtaleGroupModel:
    """Base change to a tower containing primitive roots of unity of the exponent."""
    e = G.exponent()
    if find_root_of_unity(G.tower, e) is not None:
        return G
    if G.tower.p:
        raise MissingRootsOfUnity("character tables are computed in characteristic 0")
    tower = G.tower
    for q, k in _factor(e):
        if find_root_of_unity(tower, q**k) is None:
            tower, _ = adjoin_cyclotomic(tower, q**k)
    if find_root_of_unity(tower, e) is None:
        raise MissingRootsOfUnity(f"could not adjoin a primitive {e}-th root of unity")
    H = G.base_change(tower)
    H.name = G.name
    return H


def _factor(n):
    out, d = [], 2
    while d * d <= n:
        k = 0
        while n % d == 0:
            n //= d
            k += 1
        if k:
            out.append((d, k))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def _linear_characters(G: EtaleGroupModel, classes, zeta, e):
    """All homomorphisms G -> mu_e, as class-value vectors."""
    T = G.tower
    roots = [zeta**k for k in range(e)]
    # a generating set by greedy closure
    gens = []
    reached = {G.identity_index}
    for i in range(G.order):
        if i in reached:
            continue
        gens.append(i)
        reached = _closure(G, gens)
        if len(reached) == G.order:
            break
    options = []
    for g in gens:
        o = G.element_order(g)
        options.append([k for k in range(e) if (k * o) % e == 0])
    found = []
    t = G.table
    for choice in itertools.product(*options):
        val = {G.identity_index: 0}
        queue = deque([G.identity_index])
        ok = True
        while queue and ok:
            a = queue.popleft()
            for g, k in zip(gens, choice):
                b = t[a][g]
                v = (val[a] + k) % e
                if b in val:
                    if val[b] != v:
                        ok = False
                        break
                else:
                    val[b] = v
                    queue.append(b)
        if not ok:
            continue
        if all((val[t[a][b]] - val[a] - val[b]) % e == 0 for a in range(G.order) for b in gens):
            found.append([roots[val[members[0]]] for members in classes])
    return found


def _closure(G, gens):
    reached = {G.identity_index}
    frontier = [G.identity_index]
    t = G.table
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = t[a][g]
                if b not in reached:
                    reached.add(b)
                    nxt.append(b)
        frontier = nxt
    return reached


def character_table(G: EtaleGroupModel, max_rounds: int = 50) -> CharacterTable:
    """Irreducible characters by decomposing products and Adams operations.

    Starts from the linear characters and the trace of the defining
    embedding; candidates are products, chi(g^k) for k prime to |G|,
    exterior and symmetric squares, and differences of leftovers.  A
    remainder of norm one after projecting out known irreducibles is a new
    irreducible.  Stops when the squared dimensions sum to |G|.
    """
    G = _ensure_roots(G)
    T = G.tower
    classes = G.conjugacy_classes()
    inv_class = _inverse_class_map(G)
    reps = [members[0] for members in classes]
    power_class = {}
    class_of = {}
    for c, members in enumerate(classes):
        for m in members:
            class_of[m] = c

    def pclass(c, k):
        key = (c, k)
        if key not in power_class:
            power_class[key] = class_of[G.power(reps[c], k)]
        return power_class[key]

    e = G.exponent()
    zeta = find_root_of_unity(T, e)
    irr = []

    def inner(a, b):
        return _inner(G, classes, inv_class, a, b)

    def add_if_new(chi):
        rem = list(chi)
        for psi in irr:
            m = inner(rem, psi)
            if m:
                rem = [r - psi[c] * m for c, r in enumerate(rem)]
        if all(v.is_zero() for v in rem):
            return None
        norm = inner(rem, rem)
        if norm == 1:
            if (rem[0].to_base()) < 0:
                rem = [-v for v in rem]
            irr.append(rem)
            return True
        return rem

    for chi in _linear_characters(G, classes, zeta, e):
        add_if_new(chi)
    rho = [G.elements[r].trace() for r in reps]
    add_if_new(rho)
    total = sum(int(chi[0].to_base()) ** 2 for chi in irr)
    pool = []
    rounds = 0
    units = [k for k in range(2, G.order) if math.gcd(k, G.order) == 1]
    while total < G.order:
        rounds += 1
        if rounds > max_rounds:
            raise NonTerminating("character table search did not terminate")
        known = list(irr)
        cands = []
        for a in known:
            cands.append([a[c] * rho[c] for c in range(len(classes))])
            for k in units:
                cands.append([a[pclass(c, k)] for c in range(len(classes))])
            sq = [a[c] * a[c] for c in range(len(classes))]
            ad2 = [a[pclass(c, 2)] for c in range(len(classes))]
            half = T.coerce("1/2")
            cands.append([(sq[c] - ad2[c]) * half for c in range(len(classes))])
            cands.append([(sq[c] + ad2[c]) * half for c in range(len(classes))])
        for a, b in itertools.combinations_with_replacement(known, 2):
            cands.append([a[c] * b[c] for c in range(len(classes))])
        for chi in cands:
            res = add_if_new(chi)
            if isinstance(res, list):
                pool.append(res)
        # leftovers: reduce against new irreducibles and try differences
        fresh = []
        for chi in pool:
            res = add_if_new(chi)
            if isinstance(res, list):
                fresh.append(res)
        pool = fresh[:40]
        for a, b in itertools.combinations(pool, 2):
            add_if_new([x - y for x, y in zip(a, b)])
        total = sum(int(chi[0].to_base()) ** 2 for chi in irr)
    if total != G.order:
        raise McKayError("squared dimensions overshoot the group order")
    # canonical order: by dimension, then trivial first, then by string form
    irr.sort(key=lambda chi: (int(chi[0].to_base()), not all(v == 1 for v in chi), [str(v) for v in chi]))
    rho_index = next(k for k, chi in enumerate(irr) if chi == rho)
    return CharacterTable(G, irr, rho_index)


# ---------------------------------------------------------------------------
# McKay graphs


@dataclass
class McKayGraph:
    dims: list
    adjacency: list
    trivial: int = 0
    rho: int | None = None
    name: str = ""

    @property
    def size(self) -> int:
        return len(self.dims)

    def null_vector_holds(self) -> bool:
        n = self.size
        return all(
            sum(self.adjacency[i][j] * self.dims[j] for j in range(n)) == 2 * self.dims[i] for i in range(n)
        )

    def remove_vertex(self, v: int) -> McKayGraph:
        keep = [i for i in range(self.size) if i != v]
        adj = [[self.adjacency[i][j] for j in keep] for i in keep]
        rho = None if self.rho is None or self.rho == v else keep.index(self.rho)
        return McKayGraph([self.dims[i] for i in keep], adj, trivial=-1, rho=rho, name=self.name)

    def edges(self):
        n = self.size
        return [(i, j, self.adjacency[i][j]) for i in range(n) for j in range(i, n) if self.adjacency[i][j]]

    def to_dot(self) -> str:
        lines = [f'graph "{self.name or "mckay"}" {{']
        for i, d in enumerate(self.dims):
            attrs = [f'label="{d}@{i}"']
            if i == self.trivial:
                attrs.append("shape=doublecircle")
            elif i == self.rho:
                attrs.append("shape=box")
            else:
                attrs.append("shape=circle")
            lines.append(f"  v{i} [{', '.join(attrs)}];")
        for i, j, m in self.edges():
            for _ in range(m):
                lines.append(f"  v{i} -- v{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "dims": self.dims,
            "adjacency": self.adjacency,
            "trivial": self.trivial,
            "rho": self.rho,
        }


def mckay_graph(G, table: CharacterTable | None = None) -> McKayGraph:
    if isinstance(G, MuGroup):
        n = G.n
        adj = [[0] * n for _ in range(n)]
        for i in range(n):
            adj[i][(i + 1) % n] += 1
            adj[i][(i - 1) % n] += 1
        if n == 1:
            adj = [[2]]
        return McKayGraph([1] * n, adj, 0, None, G.name)
    table = table or character_table(G)
    irr = table.characters
    rho = irr[table.rho_index]
    k = len(irr)
    prod = [[a * r for a, r in zip(chi, rho)] for chi in irr]
    adj = [[table.inner(prod[j], irr[i]) for j in range(k)] for i in range(k)]
    trivial = next(i for i, chi in enumerate(irr) if all(v == 1 for v in chi))
    return McKayGraph(table.dims, adj, trivial, table.rho_index, G.name)


# ---------------------------------------------------------------------------
# Dynkin labels


@dataclass(frozen=True)
class DynkinLabel:
    family: str
    rank: int
    affine: bool = False

    def __str__(self):
        return f"{self.family}{self.rank}" + ("~" if self.affine else "")

    def pretty(self) -> str:
        return ("~" if self.affine else "") + f"{self.family}_{self.rank}"

    @classmethod
    def parse(cls, s: str) -> DynkinLabel:
        s = s.strip()
        affine = s.endswith("~") or s.startswith("~")
        s = s.strip("~").replace("_", "")
        return cls(s[0].upper(), int(s[1:]), affine)


def beta(n: int) -> int:
    """n/2 for even n, (n-1)/2 for odd n (the orbit count of the flip on A_{n-1})."""
    return n // 2


def _neighbors(adj, i):
    return [j for j in range(len(adj)) if j != i and adj[i][j]]


def _is_connected(adj) -> bool:
    n = len(adj)
    if n == 0:
        return False
    seen = {0}
    stack = [0]
    while stack:
        a = stack.pop()
        for b in _neighbors(adj, a):
            if b not in seen:
                seen.add(b)
                stack.append(b)
    return len(seen) == n


def _arms(adj, center):
    """Lengths of the paths hanging off a branch vertex."""
    arms = []
    for start in _neighbors(adj, center):
        length, prev, cur = 1, center, start
        while True:
            nxt = [j for j in _neighbors(adj, cur) if j != prev]
            if len(nxt) != 1:
                if nxt:
                    return None
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    return sorted(arms)


def classify_shape(adj) -> DynkinLabel:
    """Recognise a connected graph as a finite or affine ADE diagram."""
    n = len(adj)
    if not _is_connected(adj):
        raise NotADEShape("graph is not connected")
    if n == 1:
        if adj[0][0] == 0:
            return DynkinLabel("A", 1)
        if adj[0][0] == 2:
            return DynkinLabel("A", 0, True)
        raise NotADEShape("loop")
    if any(adj[i][i] for i in range(n)):
        raise NotADEShape("loops")
    if n == 2 and adj[0][1] == 2:
        return DynkinLabel("A", 1, True)
    if any(adj[i][j] > 1 for i in range(n) for j in range(n)):
        raise NotADEShape("multiple edges")
    degrees = [len(_neighbors(adj, i)) for i in range(n)]
    edges = sum(degrees) // 2
    if edges == n:
        if all(d == 2 for d in degrees):
            return DynkinLabel("A", n - 1, True)
        raise NotADEShape("cycle with branches")
    if edges != n - 1:
        raise NotADEShape("not a tree or a cycle")
    branch = [i for i in range(n) if degrees[i] >= 3]
    if not branch:
        return DynkinLabel("A", n)
    if len(branch) == 1:
        c = branch[0]
        if degrees[c] == 4:
            if n == 5:
                return DynkinLabel("D", 4, True)
            raise NotADEShape("degree-4 vertex")
        if degrees[c] > 4:
            raise NotADEShape("high degree vertex")
        arms = _arms(adj, c)
        if arms is None:
            raise NotADEShape("branching arm")
        if arms[0] == 1 and arms[1] == 1:
            return DynkinLabel("D", n)
        finite = {(1, 2, 2): ("E", 6), (1, 2, 3): ("E", 7), (1, 2, 4): ("E", 8)}
        affine = {(2, 2, 2): ("E", 6), (1, 3, 3): ("E", 7), (1, 2, 5): ("E", 8)}
        key = tuple(arms)
        if key in finite:
            return DynkinLabel(*finite[key])
        if key in affine:
            return DynkinLabel(*affine[key], True)
        raise NotADEShape(f"arms {arms}")
    if len(branch) == 2 and all(degrees[b] == 3 for b in branch):
        leaves_ok = all(sum(1 for j in _neighbors(adj, b) if degrees[j] == 1) == 2 for b in branch)
        if leaves_ok:
            return DynkinLabel("D", n - 1, True)
    raise NotADEShape("unrecognised tree")


def classify_dynkin(graph: McKayGraph, remove_trivial: bool = False) -> DynkinLabel:
    """Affine label of the full McKay graph, or finite label after removing the trivial vertex."""
    if remove_trivial:
        g = graph.remove_vertex(graph.trivial)
        if g.size == 0:
            raise NotADEShape("empty graph")
        return classify_shape(g.adjacency)
    label = classify_shape(graph.adjacency)
    if not label.affine:
        raise NotADEShape(f"full McKay graph is finite type {label}")
    if not graph.null_vector_holds():
        raise NotADEShape("dimension vector is not a null vector")
    return label


# ---------------------------------------------------------------------------
# automorphisms


def graph_automorphisms(graph: McKayGraph) -> list[tuple]:
    """Vertex permutations preserving adjacency and dimension labels."""
    n = graph.size
    adj, dims = graph.adjacency, graph.dims
    result = []

    def extend(perm, used):
        k = len(perm)
        if k == n:
            result.append(tuple(perm))
            return
        for v in range(n):
            if v in used or dims[v] != dims[k]:
                continue
            if adj[k][k] != adj[v][v]:
                continue
            if all(adj[k][j] == adj[v][perm[j]] for j in range(k)):
                perm.append(v)
                used.add(v)
                extend(perm, used)
                perm.pop()
                used.discard(v)

    extend([], set())
    return result


def compose(p, q):
    """(p o q)(i) = p[q[i]]."""
    return tuple(p[i] for i in q)


def permutation_group_order(perms) -> int:
    return len(set(perms))


def _is_cyclic(perms) -> bool:
    n = len(perms)
    for p in perms:
        k, cur = 1, p
        ident = tuple(range(len(p)))
        while cur != ident:
            cur = compose(cur, p)
            k += 1
        if k == n:
            return True
    return n == 1


def describe_group(perms) -> str:
    n = len(set(perms))
    if n == 1:
        return "trivial"
    if _is_cyclic(perms):
        return f"Z/{n}"
    if n == 6:
        return "S3"
    return f"order {n}"


# ---------------------------------------------------------------------------
# normalizer action


@dataclass
class NormalizerAction:
    coset_reps: list
    permutations: list
    kernel: list
    image: list
    automorphisms: list
    bijective: bool
    quotient_name: str
    details: dict = field(default_factory=dict)


def normalizer_action_on_graph(N: EtaleGroupModel, G: EtaleGroupModel) -> NormalizerAction:
    """The permutation of irreducibles of G induced by conjugation by elements of N.

    chi -> chi o conj_n with conj_n(g) = n^{-1} g n, which makes n -> permutation
    a homomorphism.  Checks that the kernel is exactly G, that the induced
    map from N/G is an isomorphism onto the automorphisms of the McKay graph
    with the trivial vertex removed, comparing multiplication tables.
    """
    sub = [N.index(g) for g in G.elements]
    sub_set = set(sub)
    t = N.table
    for n_ in range(N.order):
        ninv = N.inv(n_)
        if any(t[t[ninv][s]][n_] not in sub_set for s in sub):
            raise McKayError("subgroup is not normal")
    table = character_table(G)
    Gt = table.group  # possibly base-changed
    classes = table.classes
    graph = mckay_graph(Gt, table)
    reduced = graph.remove_vertex(graph.trivial)
    keep = [i for i in range(graph.size) if i != graph.trivial]
    autos = graph_automorphisms(reduced)

    # map element of G (as matrix over N's tower) to class index in G's table
    pos_in_G = {N.index(g): k for k, g in enumerate(G.elements)}
    class_of = {}
    for c, members in enumerate(classes):
        for m in members:
            class_of[m] = c

    perms = []
    for n_ in range(N.order):
        ninv = N.inv(n_)
        cls_map = []
        for members in classes:
            g_in_N = sub[members[0]]
            h = t[t[ninv][g_in_N]][n_]
            cls_map.append(class_of[pos_in_G[h]])
        perm = []
        for chi in table.characters:
            new = [chi[cls_map[c]] for c in range(len(classes))]
            perm.append(table.characters.index(new))
        perms.append(tuple(perm))
    # homomorphism check
    for a in range(N.order):
        for b in range(N.order):
            if perms[t[a][b]] != compose(perms[a], perms[b]):
                raise McKayError("induced map is not a homomorphism")
    ident = tuple(range(len(table.characters)))
    kernel = sorted(i for i in range(N.order) if perms[i] == ident)
    if set(kernel) != sub_set:
        raise KernelMismatch(f"kernel has {len(kernel)} elements, subgroup has {len(sub)}")
    # cosets and their images
    reps, coset_of = [], {}
    for i in range(N.order):
        if i in coset_of:
            continue
        reps.append(i)
        for s in sub:
            coset_of[t[i][s]] = len(reps) - 1
    images = []
    for r in reps:
        full = perms[r]
        red = tuple(keep.index(full[v]) for v in keep)
        images.append(red)
    # multiplication table comparison between N/G and the image
    for a, ra in enumerate(reps):
        for b, rb in enumerate(reps):
            c = coset_of[t[ra][rb]]
            if images[c] != compose(images[a], images[b]):
                raise McKayError("coset images do not multiply correctly")
    image_set = set(images)
    injective = len(image_set) == len(reps)
    if not image_set <= set(autos):
        raise McKayError("induced permutation is not a graph automorphism")
    surjective = image_set == set(autos)
    if not surjective:
        raise NotSurjective(f"image has {len(image_set)} of {len(autos)} automorphisms")
    return NormalizerAction(
        coset_reps=reps,
        permutations=images,
        kernel=kernel,
        image=sorted(image_set),
        automorphisms=autos,
        bijective=injective and surjective,
        quotient_name=describe_group(images),
    )


# ---------------------------------------------------------------------------
# folding


def fold(label: DynkinLabel, subgroup_order: int) -> DynkinLabel:
    """Non-split label attached to a split finite label and the order of the Galois image."""
    if label.affine:
        raise UnsupportedFold("fold expects a finite label")
    if subgroup_order == 1:
        return label
    f, r = label.family, label.rank
    if f == "A" and subgroup_order == 2:
        n = r + 1
        return DynkinLabel("B", beta(n))
    if f == "D" and r == 4 and subgroup_order in (3, 6):
        return DynkinLabel("G", 2)
    if f == "D" and r == 4 and subgroup_order == 2:
        return DynkinLabel("C", 3)
    if f == "D" and r >= 5 and subgroup_order == 2:
        return DynkinLabel("C", r - 1)
    if f == "E" and r == 6 and subgroup_order == 2:
        return DynkinLabel("F", 4)
    raise UnsupportedFold(f"no folding of {label} by a group of order {subgroup_order}")


def orbit_fold(graph: McKayGraph, perms) -> tuple[int, list]:
    """Orbit count of a group of automorphisms on a reduced graph.

    An independent check for the D and E folds: the number of orbits equals
    the rank of the folded diagram.
    """
    n = graph.size
    group = _closure_perms(perms, n)
    seen, orbits = set(), []
    for v in range(n):
        if v in seen:
            continue
        orb = sorted({p[v] for p in group})
        seen.update(orb)
        orbits.append(orb)
    return len(orbits), orbits


def _closure_perms(perms, n):
    ident = tuple(range(n))
    group = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for p in perms:
                b = compose(p, a)
                if b not in group:
                    group.add(b)
                    nxt.append(b)
        frontier = nxt
    return group
