"""Path pushing, support refinement and Schreier generators over a group oracle.

An oracle describes a group G with an ordered generating set S = (s_1..s_N)
and a projection theta: G -> Z^d sending every letter to a unit vector or
to 0.  Paths are right-Cayley-graph words read from a start word; the
vertex after k steps is start * l_1 ... l_k.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Iterator, Sequence

from .endomorphisms import WordLengthExceeded, alphabet, equals, inverse_sword
from .constants import ConstantsProfile, r_of
from .free_words import free_reduce


class PushFailure(AssertionError):
    """A modification step broke the decrease property; carries the vertex."""

    def __init__(self, msg: str, vertex: list[int] | None = None):
        super().__init__(msg)
        self.vertex = vertex


class BudgetExhausted(PushFailure):
    """A step or length budget ran out before the procedure finished."""


class NoAdmissibleLetter(RuntimeError):
    pass


# ------------------------------------------------------------------ oracles

class GroupOracle:
    """Interface used by the engines; subclasses fill in the group."""
    N: int          # number of letters
    dim: int        # rank of G/K

    def theta_unit(self, a: int) -> tuple[int, int] | None:
        """(coordinate, sign) with theta(a) = sign * e_coordinate, or None if 0."""
        raise NotImplementedError

    def evaluate(self, word: Sequence[int]):
        raise NotImplementedError

    def equal(self, g, h) -> bool:
        raise NotImplementedError

    def commutes(self, a: int, b: int) -> bool:
        raise NotImplementedError

    def nonneg_form(self, word: Sequence[int], chi: Sequence[int]) -> tuple[int, ...]:
        """A form of ``word`` all of whose prefixes have chi >= 0 (chi linear on Z^d)."""
        raise NotImplementedError

    def name(self, a: int) -> str:
        return f"s{abs(a)}" + ("" if a > 0 else "^-1")

    def theta(self, word: Iterable[int]) -> list[int]:
        v = [0] * self.dim
        for a in word:
            u = self.theta_unit(a)
            if u:
                v[u[0]] += u[1]
        return v

    def chi_letter(self, chi: Sequence[int], a: int):
        u = self.theta_unit(a)
        return 0 if u is None else u[1] * chi[u[0]]

    def same(self, u: Sequence[int], v: Sequence[int]) -> bool:
        return self.equal(self.evaluate(u), self.evaluate(v))


class IAOracle(GroupOracle):
    """IA_n with the Magnus generators; theta in generator coordinates.

    Non-negative forms come from the bounded construction with phi = id,
    which needs the character to be non-zero on the four letters of Z.
    """

    def __init__(self, n: int, profile: ConstantsProfile | None = None, budget: int | None = 4000):
        self.n = n
        self.S = alphabet(n)
        self.N = self.dim = self.S.N
        self.profile = profile or ConstantsProfile.toy()
        self.budget = budget
        self.last_forms: list = []

    def theta_unit(self, a):
        return (abs(a) - 1, 1 if a > 0 else -1)

    def evaluate(self, word):
        return self.S.apply_word(word, self.budget)

    def equal(self, g, h):
        return equals(g, h)

    def commutes(self, a, b):
        return self.S.commutes(a, b)

    def name(self, a):
        return self.S.name(a)

    def character(self, chi: Sequence[int]):
        from .abelianized import Character, basis
        B = basis(self.n)
        return Character(self.n, [Fraction(s * c) for s, c in zip(B.signs, chi)])

    def nonneg_form(self, word, chi):
        from .nonneg import bounded_nonneg_form
        res = bounded_nonneg_form(word, self.character(chi), self.profile)
        self.last_forms.append(res)
        return res.word


class HeisenbergOracle(GroupOracle):
    """The integer Heisenberg group, elements (a, b, c) = unitriangular matrices
    [[1, a, c], [0, 1, b], [0, 0, 1]]; K is the centre.

    ``letters`` lists the generators as triples; the default is x, y.  The
    pair ({x, y}, Z) is never chain-centralizing (x and y do not commute), so
    non-negative forms use u^N w c^m u^-N with u the chi-maximal letter and
    c = [x, y].
    """
    X, Y = (1, 0, 0), (0, 1, 0)

    def __init__(self, letters: Sequence[tuple[int, int, int]] | None = None):
        self.letters = tuple(letters) if letters else (self.X, self.Y)
        self.N = len(self.letters)
        self.dim = 2
        for g in self.letters:
            if (abs(g[0]) + abs(g[1])) > 1:
                raise ValueError("letters must project to unit vectors or 0")

    @staticmethod
    def mul(g, h):
        return (g[0] + h[0], g[1] + h[1], g[2] + h[2] + g[0] * h[1])

    @staticmethod
    def inv(g):
        return (-g[0], -g[1], -g[2] + g[0] * g[1])

    def theta_unit(self, a):
        g = self.letters[abs(a) - 1]
        e = 1 if a > 0 else -1
        if g[0]:
            return (0, e * g[0])
        if g[1]:
            return (1, e * g[1])
        return None

    def element(self, a: int):
        g = self.letters[abs(a) - 1]
        return g if a > 0 else self.inv(g)

    def evaluate(self, word):
        g = (0, 0, 0)
        for a in word:
            g = self.mul(g, self.element(a))
        return g

    def equal(self, g, h):
        return tuple(g) == tuple(h)

    def commutes(self, a, b):
        g, h = self.element(a), self.element(b)
        return self.mul(g, h) == self.mul(h, g)

    def name(self, a):
        base = {self.X: "x", self.Y: "y"}.get(self.letters[abs(a) - 1], f"s{abs(a)}")
        return base if a > 0 else base + "^-1"

    def _xy_codes(self):
        x = self.letters.index(self.X) + 1
        y = self.letters.index(self.Y) + 1
        return x, y

    def nonneg_form(self, word, chi):
        word = free_reduce(word)
        if min(_prefix_chi(self, word, chi)) >= 0:
            return word
        x, y = self._xy_codes()
        cands = [x, -x, y, -y]
        u = max(cands, key=lambda a: self.chi_letter(chi, a))
        if self.chi_letter(chi, u) <= 0:
            raise ValueError("zero character")
        g = self.evaluate(word)
        comm = (-x, -y, x, y)               # c = [x, y] = (0, 0, 1)
        for N in range(0, 4 * len(word) + 8):
            uN = self.evaluate([u] * N)
            # c^m = [w, u^N] so that u^N w c^m u^-N = w
            m = self.mul(self.mul(self.mul(self.inv(g), self.inv(uN)), g), uN)[2]
            cm = list(comm) * m if m >= 0 else list(inverse_sword(comm)) * (-m)
            cand = free_reduce([u] * N + list(word) + cm + [-u] * N)
            if min(_prefix_chi(self, cand, chi)) >= 0:
                return cand
        raise AssertionError("no non-negative form found")


def _prefix_chi(oracle: GroupOracle, word, chi) -> list:
    out = [0]
    for a in word:
        out.append(out[-1] + oracle.chi_letter(chi, a))
    return out


# -------------------------------------------------------------------- paths

@dataclass
class CayleyPath:
    steps: tuple[int, ...]
    start: tuple[int, ...] = ()

    def __len__(self):
        return len(self.steps)

    def word(self) -> tuple[int, ...]:
        return self.start + self.steps

    def to_json(self) -> dict:
        return {"start": list(self.start), "steps": list(self.steps)}

    @classmethod
    def from_json(cls, d) -> "CayleyPath":
        return cls(tuple(d["steps"]), tuple(d.get("start", ())))


@dataclass
class PathStats:
    l1: list[int]
    l2: list[int]
    linf: list[int]
    supp: list[int]


def path_stats(oracle: GroupOracle, path: CayleyPath) -> PathStats:
    """Per-vertex norms in one incremental pass (no dense vertex matrix)."""
    v: dict[int, int] = {}
    for a in path.start:
        u = oracle.theta_unit(a)
        if u:
            v[u[0]] = v.get(u[0], 0) + u[1]
    hist: dict[int, int] = {}
    l1 = l2 = supp = 0
    for x in v.values():
        if x:
            ax = abs(x)
            l1 += ax
            l2 += x * x
            supp += 1
            hist[ax] = hist.get(ax, 0) + 1
    linf = max(hist) if hist else 0
    out = PathStats([l1], [l2], [linf], [supp])
    for a in path.steps:
        u = oracle.theta_unit(a)
        if u:
            c, e = u
            old = v.get(c, 0)
            new = old + e
            v[c] = new
            ao, an = abs(old), abs(new)
            l1 += an - ao
            l2 += new * new - old * old
            if ao:
                hist[ao] -= 1
            else:
                supp += 1
            if an:
                hist[an] = hist.get(an, 0) + 1
            else:
                supp -= 1
            if an > linf:
                linf = an
            elif ao == linf and hist.get(ao, 0) == 0:
                linf = ao - 1 if ao > 0 else 0
                while linf > 0 and hist.get(linf, 0) == 0:
                    linf -= 1
        out.l1.append(l1)
        out.l2.append(l2)
        out.linf.append(linf)
        out.supp.append(supp)
    return out


def vertex_theta(oracle: GroupOracle, path: CayleyPath, i: int) -> list[int]:
    return oracle.theta(path.start + path.steps[:i])


def _push_metric(st: PathStats, R: int) -> tuple[int, int]:
    outside = [q for q, m in zip(st.l2, st.linf) if m > R]
    if not outside:
        return (-1, 0)
    top = max(outside)
    return (top, outside.count(top))


def _first_max_index(vals: Sequence[int], ok: Callable[[int], bool]) -> int:
    best, bi = None, -1
    for i, v in enumerate(vals):
        if ok(i) and (best is None or v > best):
            best, bi = v, i
    return bi


def push_path(path: CayleyPath, R: int, oracle: GroupOracle, r: int | None = None,
              max_steps: int = 100000, reduce: bool = True, verify_local: bool = True,
              transcript: list | None = None) -> CayleyPath:
    """Push a path into theta^-1(B_inf(R)) keeping its endpoints.

    Each modification picks the out-of-ball vertex g of largest l2 norm and
    replaces the two edges around it by the detour
    t^-r, (form of t^r y1 t^-r)^-1, form of t^r y2 t^-r, t^r.
    The metric (largest out-of-ball l2, its multiplicity) must drop strictly
    at every step; ``reduce`` also cancels backtracks, which only deletes
    vertices.
    """
    if r is None:
        r = r_of(getattr(oracle, "profile", ConstantsProfile.toy()))
    if not 1 <= r <= R:
        raise ValueError("need 1 <= r <= R")
    st = path_stats(oracle, path)
    if st.linf[0] > R or st.linf[-1] > R:
        raise ValueError("endpoints must lie in the ball")
    steps = list(path.steps)
    metric = _push_metric(st, R)
    count = 0
    while metric[1]:
        if count >= max_steps:
            raise BudgetExhausted(f"step budget {max_steps} exhausted")
        count += 1
        i = _first_max_index(st.l2, lambda k: st.linf[k] > R)
        cur = CayleyPath(tuple(steps), path.start)
        g = vertex_theta(oracle, cur, i)
        y1 = -steps[i - 1]
        y2 = steps[i]
        chi = [-x for x in g]
        c = max(range(len(g)), key=lambda k: abs(g[k]))
        t = _letter_for(oracle, c, 1 if g[c] > 0 else -1)
        w1 = oracle.nonneg_form((t,) * r + (y1,) + (-t,) * r, chi)
        w2 = oracle.nonneg_form((t,) * r + (y2,) + (-t,) * r, chi)
        detour = [-t] * r + list(inverse_sword(w1)) + list(w2) + [t] * r
        if verify_local and not _locally_equal(oracle, detour, [-y1, y2]):
            raise PushFailure("detour does not represent y1^-1 y2", g)
        new_steps = steps[:i - 1] + detour + steps[i + 1:]
        if reduce:
            new_steps = list(free_reduce(new_steps))
        new_st = path_stats(oracle, CayleyPath(tuple(new_steps), path.start))
        new_metric = _push_metric(new_st, R)
        if not (new_metric[1] == 0 or new_metric < metric):
            raise PushFailure(f"metric did not decrease: {metric} -> {new_metric}", g)
        if transcript is not None:
            transcript.append({"vertex": i, "t": t, "y1": y1, "y2": y2,
                               "detour": detour, "reduce": reduce,
                               "metric_before": list(metric), "metric_after": list(new_metric)})
        steps, st, metric = new_steps, new_st, new_metric
    return CayleyPath(tuple(steps), path.start)


def _letter_for(oracle: GroupOracle, coord: int, sign: int) -> int:
    for m in range(1, oracle.N + 1):
        u = oracle.theta_unit(m)
        if u and u[0] == coord:
            return m if u[1] == sign else -m
    raise ValueError("no letter projects onto this coordinate")


def _locally_equal(oracle: GroupOracle, u, v) -> bool:
    try:
        return oracle.same(u, v)
    except WordLengthExceeded:
        # too large to compose; theta agreement is the fallback evidence
        return oracle.theta(u) == oracle.theta(v)


def replay_push(path: CayleyPath, R: int, oracle: GroupOracle, transcript: list) -> CayleyPath:
    """Re-apply a push transcript, re-checking every logged step."""
    steps = list(path.steps)
    metric = _push_metric(path_stats(oracle, path), R)
    for rec in transcript:
        i = rec["vertex"]
        if [-steps[i - 1], steps[i]] != [rec["y1"], rec["y2"]]:
            raise PushFailure("transcript does not match the path")
        if not _locally_equal(oracle, rec["detour"], [-rec["y1"], rec["y2"]]):
            raise PushFailure("logged detour is not equal to the segment")
        steps = steps[:i - 1] + list(rec["detour"]) + steps[i + 1:]
        if rec["reduce"]:
            steps = list(free_reduce(steps))
        new_metric = _push_metric(path_stats(oracle, CayleyPath(tuple(steps), path.start)), R)
        if list(new_metric) != rec["metric_after"] or not (new_metric[1] == 0 or new_metric < metric):
            raise PushFailure("logged metric does not replay")
        metric = new_metric
    return CayleyPath(tuple(steps), path.start)


# -------------------------------------------------------- support refinement

def support_refine(path: CayleyPath, R: int, support_bound: int, oracle: GroupOracle,
                   max_steps: int = 100000, transcript: list | None = None) -> CayleyPath:
    """Bring every vertex to support <= support_bound, staying in B_inf(R).

    At the vertex of largest support (then largest l1), insert
    u = s_m^-sign(a_m) around the two edges, for the first s_m with a_m != 0,
    s_m not in {y1, y2}^{+-1} and commuting with y1 and y2.
    """
    steps = list(path.steps)
    for count in range(max_steps + 1):
        cur = CayleyPath(tuple(steps), path.start)
        st = path_stats(oracle, cur)
        if max(st.linf) > R:
            raise ValueError("path leaves the ball")
        if max(st.supp) <= support_bound:
            return cur
        if st.supp[0] > support_bound or st.supp[-1] > support_bound:
            raise ValueError("endpoints exceed the support bound")
        if count == max_steps:
            break
        top = max(st.supp)
        i = _first_max_index(st.l1, lambda k: st.supp[k] == top)
        g = vertex_theta(oracle, cur, i)
        y1, y2 = -steps[i - 1], steps[i]
        u = admissible_letter(oracle, g, y1, y2)
        if u is None:
            raise NoAdmissibleLetter(f"no admissible letter at vertex {i}")
        new_steps = steps[:i - 1] + [u, -y1, y2, -u] + steps[i + 1:]
        local = [u, -y1, y2, -u]
        if not _locally_equal(oracle, local, [-y1, y2]):
            raise PushFailure("support detour is not equal to the segment", g)
        # the new vertices g y1 u, g u, g u y2 sit below g in (support, l1);
        # g u itself keeps the support and loses one from l1
        gv = list(g)
        key = (_supp(gv), _l1(gv))
        gu = _segment_thetas(oracle, gv, y1, y2, u)[1]
        if _supp(gu) > key[0] or _l1(gu) >= key[1]:
            raise PushFailure("support refinement did not shrink the vertex", g)
        for vtx in _segment_thetas(oracle, gv, y1, y2, u):
            if (_supp(vtx), _l1(vtx)) >= key:
                raise PushFailure("support refinement did not shrink the vertex", g)
        if transcript is not None:
            transcript.append({"vertex": i, "u": u, "y1": y1, "y2": y2})
        steps = new_steps
    raise BudgetExhausted(f"step budget {max_steps} exhausted")


def _supp(v):
    return sum(1 for x in v if x)


def _l1(v):
    return sum(abs(x) for x in v)


def _segment_thetas(oracle, g, y1, y2, u):
    def add(v, a):
        w = list(v)
        t = oracle.theta_unit(a)
        if t:
            w[t[0]] += t[1]
        return w
    gy1 = add(g, y1)
    return [add(gy1, u), add(g, u), add(add(g, u), y2)]


def admissible_letter(oracle: GroupOracle, g: Sequence[int], y1: int, y2: int,
                      commutes: Callable[[int, int], bool] | None = None) -> int | None:
    commutes = commutes or oracle.commutes
    banned = {abs(y1), abs(y2)}
    for m in range(1, oracle.N + 1):
        t = oracle.theta_unit(m)
        if not t or m in banned:
            continue
        a = g[t[0]] * t[1]
        if a == 0:
            continue
        if commutes(m, y1) and commutes(m, y2):
            return -m if a > 0 else m
    return None


# ------------------------------------------------------------ Schreier sets

class SchreierSet:
    """A finite subset F of Z^N closed under shrinking coordinates toward 0."""
    N: int

    def contains(self, a: Sequence[int]) -> bool:
        raise NotImplementedError

    def points(self) -> Iterator[tuple[int, ...]]:
        raise NotImplementedError

    def tails(self, start: int) -> Iterator[tuple[int, ...]]:
        """Points of F vanishing before coordinate ``start`` (0-based)."""
        for p in self.points():
            if not any(p[:start]):
                yield p

    def count_tails(self, start: int) -> int:
        return sum(1 for _ in self.tails(start))

    def is_schreier(self) -> bool:
        if not self.contains((0,) * self.N):
            return False
        for p in self.points():
            for k, x in enumerate(p):
                if x:
                    q = list(p)
                    q[k] -= 1 if x > 0 else -1
                    if not self.contains(q):
                        return False
        return True


class BoxSchreierSet(SchreierSet):
    """{|a_m| <= radius, |supp| <= support_bound}."""

    def __init__(self, N: int, radius: int, support_bound: int | None = None):
        self.N = N
        self.radius = radius
        self.support_bound = N if support_bound is None else min(support_bound, N)

    def contains(self, a):
        return (len(a) == self.N and all(abs(x) <= self.radius for x in a)
                and sum(1 for x in a if x) <= self.support_bound)

    def count_tails(self, start: int) -> int:
        """sum_{k <= s} C(L, k) (2R)^k with L = N - start."""
        L = self.N - start
        if self.radius == 0:
            return 1
        return sum(comb(L, k) * (2 * self.radius) ** k for k in range(min(L, self.support_bound) + 1))

    def size(self) -> int:
        return self.count_tails(0)

    def tails(self, start: int):
        L = self.N - start
        vals = [v for v in range(-self.radius, self.radius + 1) if v]

        def rec(pos: int, left: int, cur: list):
            if pos == L:
                yield (0,) * start + tuple(cur)
                return
            cur.append(0)
            yield from rec(pos + 1, left, cur)
            cur.pop()
            if left:
                for v in vals:
                    cur.append(v)
                    yield from rec(pos + 1, left - 1, cur)
                    cur.pop()

        yield from rec(0, self.support_bound, [])

    def points(self):
        return self.tails(0)


class FiniteSchreierSet(SchreierSet):
    def __init__(self, N: int, pts: Iterable[Sequence[int]]):
        self.N = N
        self.pts = {tuple(p) for p in pts}

    def contains(self, a):
        return tuple(a) in self.pts

    def points(self):
        return iter(sorted(self.pts))


# -------------------------------------------------------- Nielsen normal form

@dataclass
class NielsenSplit:
    S1: list[int]                        # S1[c] = letter with theta = e_c
    S2: dict[int, int]                   # letter -> d(s)
    S3: list[int]
    words: dict[int, tuple[int, ...]]    # new generator -> word in the input letters
    log: list[tuple] = field(default_factory=list)

    def kind(self, a: int) -> str:
        a = abs(a)
        if a in self.S2:
            return "S2"
        if a in self.S3:
            return "S3"
        return "S1"


def nielsen_normalize(images: Sequence[Sequence[int]]) -> NielsenSplit:
    """Right Nielsen moves bringing theta(S) to the shape E or E u {0}.

    ``images[k]`` is theta of letter k+1.  When the input already has that
    shape no move is made and duplicates of basis vectors form S2.
    """
    vecs = [list(v) for v in images]
    if not vecs:
        raise ValueError("empty generating set")
    d = len(vecs[0])
    words = {k + 1: (k + 1,) for k in range(len(vecs))}
    log: list[tuple] = []

    def unit_of(v):
        nz = [(c, x) for c, x in enumerate(v) if x]
        if not nz:
            return "zero"
        if len(nz) == 1 and nz[0][1] == 1:
            return nz[0][0]
        return None

    if any(unit_of(v) is None for v in vecs) or {unit_of(v) for v in vecs} - {"zero"} != set(range(d)):
        pivots: list[int] = []
        for c in range(d):
            active = [k for k in range(len(vecs)) if k not in pivots]
            while True:
                nz = [k for k in active if vecs[k][c]]
                if not nz:
                    raise ValueError("theta(S) does not generate the lattice")
                p = min(nz, key=lambda k: (abs(vecs[k][c]), k))
                others = [k for k in nz if k != p]
                if not others:
                    break
                for k in others:
                    q = vecs[k][c] // vecs[p][c]
                    _nielsen_move(vecs, words, log, k, p, -q)
            if abs(vecs[p][c]) != 1:
                raise ValueError("theta(S) does not generate the lattice")
            if vecs[p][c] == -1:
                vecs[p] = [-x for x in vecs[p]]
                words[p + 1] = inverse_sword(words[p + 1])
                log.append(("invert", p + 1))
            pivots.append(p)
        # back substitution clears the later coordinates of each pivot
        for ci in range(d - 1, -1, -1):
            for cj in range(ci):
                p, q = pivots[cj], pivots[ci]
                if vecs[p][ci]:
                    _nielsen_move(vecs, words, log, p, q, -vecs[p][ci])
    S1: list[int | None] = [None] * d
    S2: dict[int, int] = {}
    S3: list[int] = []
    for k, v in enumerate(vecs):
        u = unit_of(v)
        if u == "zero":
            S3.append(k + 1)
        elif S1[u] is None:
            S1[u] = k + 1
        else:
            S2[k + 1] = u + 1
    return NielsenSplit([int(x) for x in S1], S2, S3, words, log)


def _nielsen_move(vecs, words, log, k, p, e):
    """s_k <- s_k s_p^e."""
    if e == 0:
        return
    vecs[k] = [x + e * y for x, y in zip(vecs[k], vecs[p])]
    piece = words[p + 1] if e > 0 else inverse_sword(words[p + 1])
    words[k + 1] = free_reduce(words[k + 1] + piece * abs(e))
    log.append(("right", k + 1, p + 1, e))


# ------------------------------------------------------------ K-generators

@dataclass(frozen=True)
class KGenerator:
    """(a) [s_i, s_j]^{t}, (b) (s^-1 s_d(s))^{t}, (c) s^{t}; t = s_1^a_1 ... s_N^a_N.

    Letters i, j, s refer to the oracle's alphabet; ``exps`` follows the
    order of S1.
    """
    kind: str
    core: tuple[int, ...]
    exps: tuple[int, ...]

    def conjugator(self, split: NielsenSplit) -> tuple[int, ...]:
        return transversal_word(self.exps, split)

    def word(self, split: NielsenSplit) -> tuple[int, ...]:
        t = self.conjugator(split)
        if self.kind == "a":
            i, j = self.core
            core = (-i, -j, i, j)
        elif self.kind == "b":
            s, sd = self.core
            core = (-s, sd)
        else:
            core = (self.core[0],)
        return inverse_sword(t) + core + t

    def to_json(self) -> dict:
        return {"kind": self.kind, "core": list(self.core), "exps": list(self.exps)}


def transversal_word(exps: Sequence[int], split: NielsenSplit) -> tuple[int, ...]:
    out: list[int] = []
    for c, a in enumerate(exps):
        s = split.S1[c]
        out.extend([s if a > 0 else -s] * abs(a))
    return tuple(out)


def oracle_split(oracle: GroupOracle) -> NielsenSplit:
    imgs = []
    for a in range(1, oracle.N + 1):
        v = [0] * oracle.dim
        u = oracle.theta_unit(a)
        if u:
            v[u[0]] = u[1]
        imgs.append(v)
    split = nielsen_normalize(imgs)
    if split.log:
        raise ValueError("oracle letters must already have the shape E or E u {0}")
    return split


def enumerate_K_generators(F: SchreierSet, split: NielsenSplit) -> Iterator[KGenerator]:
    """All generators of types (a), (b), (c), without repetition."""
    d = len(split.S1)
    for i in range(d):
        for tail in F.tails(i):
            for j in range(i + 1, d):
                yield KGenerator("a", (split.S1[i], split.S1[j]), tail)
    if split.S2 or split.S3:
        for p in F.points():
            for s, dd in sorted(split.S2.items()):
                yield KGenerator("b", (s, split.S1[dd - 1]), p)
            for s in split.S3:
                yield KGenerator("c", (s,), p)


def count_K_generators(F: SchreierSet, split: NielsenSplit) -> int:
    d = len(split.S1)
    total = sum((d - 1 - i) * F.count_tails(i) for i in range(d))
    if split.S2 or split.S3:
        total += (len(split.S2) + len(split.S3)) * F.count_tails(0)
    return total


def case1_expansion(exps: Sequence[int], j: int, split: NielsenSplit) -> list[tuple[KGenerator, int]]:
    """[u, s_j]^v as a product of type (a) generators, where t = u v and u
    collects the first j coordinates (j is 0-based here)."""
    out: list[tuple[KGenerator, int]] = []
    sj = split.S1[j]
    exps = list(exps)
    for i in range(j):
        a = exps[i]
        si = split.S1[i]
        for q in range(1, abs(a) + 1):
            tail = [0] * i + exps[i:]
            if a > 0:
                # [s_i, s_j]^{s_i^(a-q) ...}
                tail[i] = a - q
                out.append((KGenerator("a", (si, sj), tuple(tail)), 1))
            else:
                # [s_i^-1, s_j]^w = ([s_i, s_j]^{s_i^-1 w})^-1, w = s_i^(a+q) ...
                tail[i] = a + q - 1
                out.append((KGenerator("a", (si, sj), tuple(tail)), -1))
    return out


def schreier_generator(s: int, exps: Sequence[int], split: NielsenSplit) -> list[tuple[KGenerator, int]]:
    """overline(st)^-1 s t for a positive letter s and t = transversal(exps)."""
    kind = split.kind(s)
    if kind == "S3":
        return [(KGenerator("c", (s,), tuple(exps)), 1)]
    if kind == "S1":
        j = split.S1.index(s)
        return [(g, -e) for g, e in reversed(case1_expansion(exps, j, split))]
    dd = split.S2[s]
    Y = schreier_generator(split.S1[dd - 1], exps, split)
    return Y + [(KGenerator("b", (s, split.S1[dd - 1]), tuple(exps)), -1)]


def rewrite_in_SK(word: Sequence[int], F: SchreierSet, oracle: GroupOracle,
                  split: NielsenSplit | None = None) -> list[tuple[KGenerator, int]]:
    """Express k (theta(k) = 0) as a product of K-generators with conjugators in F.

    The right path l_1 ... l_m is read as the left path of suffixes
    y_i = l_{m-i+1} ... l_m, whose vertices have theta = -theta(prefix).
    """
    split = split or oracle_split(oracle)
    word = tuple(word)
    if any(oracle.theta(word)):
        raise ValueError("theta(k) != 0")
    m = len(word)
    y = [0] * oracle.dim
    factors_by_step: list[list[tuple[KGenerator, int]]] = []
    for i in range(m):
        sigma = word[m - 1 - i]
        prev = list(y)
        u = oracle.theta_unit(sigma)
        if u:
            y[u[0]] += u[1]
        for v in (prev, y):
            if not F.contains(tuple(v)):
                raise ValueError("path leaves F")
        if sigma > 0:
            facs = schreier_generator(sigma, tuple(prev), split)
        else:
            facs = [(g, -e) for g, e in reversed(schreier_generator(-sigma, tuple(y), split))]
        factors_by_step.append(facs)
    out: list[tuple[KGenerator, int]] = []
    for facs in reversed(factors_by_step):
        out.extend(facs)
    for g, _ in out:
        if not F.contains(g.exps):
            raise AssertionError("generator conjugator outside F")
    return out


def generators_word(gens: Sequence[tuple[KGenerator, int]], split: NielsenSplit) -> tuple[int, ...]:
    out: list[int] = []
    for g, e in gens:
        w = g.word(split)
        out.extend(w if e > 0 else inverse_sword(w))
    return tuple(out)


def format_generator(g: KGenerator, e: int, oracle: GroupOracle, split: NielsenSplit) -> str:
    t = " ".join(oracle.name(a) for a in g.conjugator(split)) or "1"
    if g.kind == "a":
        body = f"[{oracle.name(g.core[0])},{oracle.name(g.core[1])}]"
    elif g.kind == "b":
        body = f"({oracle.name(-g.core[0])} {oracle.name(g.core[1])})"
    else:
        body = oracle.name(g.core[0])
    s = f"{body}^{{{t}}}"
    return s if e > 0 else f"({s})^-1"
