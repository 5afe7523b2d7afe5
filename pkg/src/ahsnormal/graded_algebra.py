"""Construction of the |1|-graded semisimple Lie algebras behind AHS structures.

Five families are supported, each a real semisimple Lie algebra with a
grading g = g_{-1} + g_0 + g_1 in which g_{-1} and g_1 are abelian and
dual to each other under an invariant pairing:

* ``conformal``     so(m+1, 1), g_{-1} = R^m, g_0 = co(m)
* ``grassmannian``  sl(p+q), g_{-1} = Mat(q, p), g_0 = s(gl(p) + gl(q))
* ``projective``    sl(q+1), g_{-1} = R^q, g_0 = gl(q)
* ``lagrangian``    sp(2m), g_{-1} = Sym^2 R^m, g_0 = gl(m)
* ``spinorial``     so(m, m), g_{-1} = Lambda^2 R^m, g_0 = gl(m)

Structure constants are assembled from explicit bracket rules on basis
generators and stored as a dense tensor whose entries are exact dyadic
rationals, so antisymmetry, the grading, and the Jacobi identity hold
exactly in float64 arithmetic.  A block-matrix realization of each family
serves as an independent oracle (:func:`cross_check_matrix_rep`).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

KINDS = ("conformal", "grassmannian", "projective", "lagrangian", "spinorial")


class ParameterError(ValueError):
    """Raised when structure-kind parameters are outside the valid range."""


@dataclass
class GradedElement:
    """An element of g split into its graded components (coordinate vectors)."""

    m1: np.ndarray
    z0: np.ndarray
    p1: np.ndarray

    def full(self) -> np.ndarray:
        return np.concatenate([self.m1, self.z0, self.p1])

    @staticmethod
    def from_full(alg: "GradedLieAlgebra", v: np.ndarray) -> "GradedElement":
        n, n0, _ = alg.dims
        return GradedElement(v[:n].copy(), v[n : n + n0].copy(), v[n + n0 :].copy())

    @staticmethod
    def zero(alg: "GradedLieAlgebra") -> "GradedElement":
        n, n0, n1 = alg.dims
        return GradedElement(np.zeros(n), np.zeros(n0), np.zeros(n1))


@dataclass(eq=False)
class GradedLieAlgebra:
    """A |1|-graded semisimple Lie algebra in a fixed ordered basis.

    Attributes:
        kind: one of :data:`KINDS`.
        params: the validated structure parameters, e.g. ``{"p": 2, "q": 3}``.
        dims: ``(dim g_{-1}, dim g_0, dim g_1)``.
        labels: human-readable basis labels, flat across the three grades in
            order g_{-1}, g_0, g_1.
        C: dense structure tensor, ``[b_i, b_j] = sum_k C[i, j, k] b_k``.
            All entries are exact dyadic rationals.
        pairing: matrix ``P[u, a] = <z_u, x_a>`` of the invariant pairing
            between g_1 and g_{-1} (diagonal in every family).
        g0_blocks: per-family block realization of the g_0 basis, used for
            block traces and coordinate conversion.
        normalizable: False only for the rank-one grassmannian case
            sl(2) = grassmannian(1, 1), where the normalization problem
            degenerates.
        projective_type: True for the gradings with nonvanishing first
            Spencer cohomology in the relevant degree (projective kind,
            grassmannian with p = 1 and q >= 2, spinorial with m = 3).
    """

    kind: str
    params: dict
    dims: tuple[int, int, int]
    labels: list[str]
    C: np.ndarray
    pairing: np.ndarray
    g0_blocks: dict[str, np.ndarray]
    normalizable: bool
    projective_type: bool
    _meta: dict = field(default_factory=dict)

    # -- index helpers -------------------------------------------------

    @property
    def n_total(self) -> int:
        return int(sum(self.dims))

    def grade_slice(self, grade: int) -> slice:
        n, n0, n1 = self.dims
        if grade == -1:
            return slice(0, n)
        if grade == 0:
            return slice(n, n + n0)
        if grade == 1:
            return slice(n + n0, n + n0 + n1)
        raise ValueError(f"grade must be -1, 0 or 1, got {grade}")

    def block(self, gx: int, gy: int) -> np.ndarray:
        """Structure-tensor block C[g_x basis, g_y basis, g_{x+y} basis]."""
        gz = gx + gy
        if abs(gz) > 1:
            raise ValueError("bracket grade out of range")
        return self.C[self.grade_slice(gx), self.grade_slice(gy), self.grade_slice(gz)]

    # -- core operations -----------------------------------------------

    def bracket_full(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("i,j,ijk->k", x, y, self.C)

    def bracket(self, x: GradedElement, y: GradedElement) -> GradedElement:
        return GradedElement.from_full(self, self.bracket_full(x.full(), y.full()))

    def dual_basis(self) -> np.ndarray:
        """Matrix M with row a = g_1 coordinates of the dual vector z^a.

        The defining property is ``<z^a, x_b> = delta_ab``, i.e. ``M @ pairing
        = identity``.  The pairing is diagonal in every family, so M is the
        inverse diagonal.
        """
        return np.linalg.inv(self.pairing)


def build_algebra(kind: str, **params) -> GradedLieAlgebra:
    """Build one of the five graded algebras with validated parameters.

    Raises:
        ParameterError: unknown kind, missing parameters, or parameters
            outside the structure's validity range.
    """
    expected = {"conformal": {"m"}, "grassmannian": {"p", "q"}, "projective": {"q"},
                "lagrangian": {"m"}, "spinorial": {"m"}}
    if kind not in expected:
        raise ParameterError(f"unknown structure kind {kind!r}; expected one of {KINDS}")
    extra = set(params) - expected[kind]
    if extra:
        raise ParameterError(f"unexpected parameters {sorted(extra)} for kind {kind!r}")
    if kind == "conformal":
        m = _want_int(params, "m", kind)
        if m < 3:
            raise ParameterError(f"conformal requires m >= 3, got m = {m}")
        return _build_conformal(m)
    if kind == "grassmannian":
        p = _want_int(params, "p", kind)
        q = _want_int(params, "q", kind)
        if not (1 <= p <= q):
            raise ParameterError(f"grassmannian requires q >= p >= 1, got p = {p}, q = {q}")
        return _build_grassmannian(p, q)
    if kind == "projective":
        q = _want_int(params, "q", kind)
        if q < 2:
            raise ParameterError(f"projective requires q >= 2, got q = {q}")
        return _build_projective(q)
    if kind == "lagrangian":
        m = _want_int(params, "m", kind)
        if m < 3:
            raise ParameterError(f"lagrangian requires m >= 3, got m = {m}")
        return _build_lagrangian(m)
    m = _want_int(params, "m", kind)
    if m < 3:
        raise ParameterError(f"spinorial requires m >= 3, got m = {m}")
    return _build_spinorial(m)


def _want_int(params: dict, name: str, kind: str) -> int:
    if name not in params:
        raise ParameterError(f"structure kind {kind!r} requires parameter {name!r}")
    value = params[name]
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise ParameterError(f"parameter {name!r} must be an integer, got {value!r}")
    return int(value)


# ---------------------------------------------------------------------------
# conformal: so(m+1, 1) in a light-cone basis
# ---------------------------------------------------------------------------


def _build_conformal(m: int) -> GradedLieAlgebra:
    n = m
    rot = [(k, l) for k in range(m) for l in range(m) if k < l]
    n0 = 1 + len(rot)
    N = n + n0 + n

    labels = [f"x{i + 1}" for i in range(m)]
    labels += ["Z0"] + [f"F({k + 1},{l + 1})" for k, l in rot]
    labels += [f"z{j + 1}" for j in range(m)]

    rot_idx = {kl: 1 + t for t, kl in enumerate(rot)}

    def f_coeff(i: int, j: int) -> tuple[int, float]:
        """Index and sign of F_ij in the ordered basis (F_ij = -F_ji)."""
        if i < j:
            return rot_idx[(i, j)], 1.0
        return rot_idx[(j, i)], -1.0

    C = np.zeros((N, N, N))
    o0, o1 = n, n + n0

    def put(i: int, j: int, k: int, v: float) -> None:
        C[i, j, k] += v
        C[j, i, k] -= v

    # [x_i, z_j] = -delta_ij Z0 + F_ij
    for i in range(m):
        for j in range(m):
            if i == j:
                put(i, o1 + j, o0, -1.0)
            else:
                t, s = f_coeff(i, j)
                put(i, o1 + j, o0 + t, s)

    # [Z0, x_j] = -x_j ; [Z0, z_j] = +z_j
    for j in range(m):
        put(o0, j, j, -1.0)
        put(o0, o1 + j, o1 + j, 1.0)

    # [F_kl, x_j] = delta_lj x_k - delta_kj x_l, and the same so(m) pattern
    # on g_1 (required by invariance of the pairing):
    # [F_kl, z_j] = delta_lj z_k - delta_kj z_l
    for (k, l), t in ((kl, rot_idx[kl]) for kl in rot):
        for j in range(m):
            if l == j:
                put(o0 + t, j, k, 1.0)
                put(o0 + t, o1 + j, o1 + k, 1.0)
            if k == j:
                put(o0 + t, j, l, -1.0)
                put(o0 + t, o1 + j, o1 + l, -1.0)

    # [F_ij, F_kl] = d_jk F_il - d_ik F_jl - d_jl F_ik + d_il F_jk
    for (i, j), t1 in ((kl, rot_idx[kl]) for kl in rot):
        for (k, l), t2 in ((kl, rot_idx[kl]) for kl in rot):
            if t2 <= t1:
                continue
            for (a, b), coef in (((i, l), float(j == k)), ((j, l), -float(i == k)),
                                 ((i, k), -float(j == l)), ((j, k), float(i == l))):
                if coef != 0.0 and a != b:
                    u, s = f_coeff(a, b)
                    put(o0 + t1, o0 + t2, o0 + u, coef * s)

    a_vec = np.zeros(n0)
    a_vec[0] = 1.0
    E_mats = np.zeros((n0, m, m))
    for (k, l), t in ((kl, rot_idx[kl]) for kl in rot):
        E_mats[t][k, l] = 1.0
        E_mats[t][l, k] = -1.0

    return GradedLieAlgebra(
        kind="conformal",
        params={"m": m},
        dims=(n, n0, n),
        labels=labels,
        C=C,
        pairing=np.eye(m),
        g0_blocks={"a": a_vec, "E": E_mats},
        normalizable=True,
        projective_type=False,
    )


# ---------------------------------------------------------------------------
# grassmannian: sl(p+q) with the block grading
# ---------------------------------------------------------------------------


def _build_grassmannian(p: int, q: int) -> GradedLieAlgebra:
    n = p * q
    n0 = p * p + q * q - 1
    N = 2 * n + n0

    # g_{-1} basis x^a_i <-> E_{ia} in Mat(q, p); flat index a*q + i.
    # g_1  basis z^i_a <-> E_{ai} in Mat(p, q); same flat grid, so the
    # trace-form pairing matrix is the identity.
    labels = [f"x^{a + 1}_{i + 1}" for a in range(p) for i in range(q)]
    g0_labels: list[str] = []
    A_mats = []
    D_mats = []
    for u in range(p):
        for v in range(p):
            if u != v:
                A = np.zeros((p, p))
                A[v, u] = 1.0
                A_mats.append(A)
                D_mats.append(np.zeros((q, q)))
                g0_labels.append(f"a^{u + 1}_{v + 1}")
    for u in range(q):
        for v in range(q):
            if u != v:
                D = np.zeros((q, q))
                D[v, u] = 1.0
                A_mats.append(np.zeros((p, p)))
                D_mats.append(D)
                g0_labels.append(f"d^{u + 1}_{v + 1}")
    for k in range(p + q - 1):
        A = np.zeros((p, p))
        D = np.zeros((q, q))
        if k < p:
            A[k, k] = 1.0
        else:
            D[k - p, k - p] = 1.0
        if k + 1 < p:
            A[k + 1, k + 1] = -1.0
        else:
            D[k + 1 - p, k + 1 - p] = -1.0
        A_mats.append(A)
        D_mats.append(D)
        g0_labels.append(f"H{k + 1}")
    labels += g0_labels
    labels += [f"z^{i + 1}_{a + 1}" for a in range(p) for i in range(q)]

    A_mats = np.array(A_mats)
    D_mats = np.array(D_mats)

    off_p = [(u, v) for u in range(p) for v in range(p) if u != v]
    off_q = [(u, v) for u in range(q) for v in range(q) if u != v]

    def pair_to_coords(A: np.ndarray, D: np.ndarray) -> np.ndarray:
        """Coordinates of (A, D) in s(gl(p)+gl(q)); requires tr A + tr D = 0."""
        v = np.zeros(n0)
        t = 0
        for u, w in off_p:
            v[t] = A[w, u]
            t += 1
        for u, w in off_q:
            v[t] = D[w, u]
            t += 1
        d = np.concatenate([np.diag(A), np.diag(D)])
        v[t:] = np.cumsum(d)[:-1]
        return v

    C = np.zeros((N, N, N))
    o0, o1 = n, n + n0

    def put(i: int, j: int, vec: np.ndarray, off: int) -> None:
        C[i, j, off : off + len(vec)] += vec
        C[j, i, off : off + len(vec)] -= vec

    def mflat(a: int, i: int) -> int:
        return a * q + i

    # [x^a_i, z^j_b] = (A, D) = (-delta_ij E_ba, delta_ab E_ij)
    for a in range(p):
        for i in range(q):
            for b in range(p):
                for j in range(q):
                    A = np.zeros((p, p))
                    D = np.zeros((q, q))
                    if i == j:
                        A[b, a] -= 1.0
                    if a == b:
                        D[i, j] += 1.0
                    if A.any() or D.any():
                        put(mflat(a, i), o1 + mflat(b, j), pair_to_coords(A, D), o0)

    # g_0 acting on g_{-1}: X -> D X - X A ; on g_1: Z -> A Z - Z D.
    for c in range(n0):
        Ac, Dc = A_mats[c], D_mats[c]
        for a in range(p):
            for i in range(q):
                X = np.zeros((q, p))
                X[i, a] = 1.0
                M = Dc @ X - X @ Ac
                vec = np.array([M[ii, aa] for aa in range(p) for ii in range(q)])
                put(o0 + c, mflat(a, i), vec, 0)
                Z = np.zeros((p, q))
                Z[a, i] = 1.0
                M = Ac @ Z - Z @ Dc
                vec = np.array([M[aa, ii] for aa in range(p) for ii in range(q)])
                put(o0 + c, o1 + mflat(a, i), vec, o1)

    # g_0 internal brackets, componentwise gl commutators.
    for c1 in range(n0):
        for c2 in range(c1 + 1, n0):
            A = A_mats[c1] @ A_mats[c2] - A_mats[c2] @ A_mats[c1]
            D = D_mats[c1] @ D_mats[c2] - D_mats[c2] @ D_mats[c1]
            if A.any() or D.any():
                put(o0 + c1, o0 + c2, pair_to_coords(A, D), o0)

    return GradedLieAlgebra(
        kind="grassmannian",
        params={"p": p, "q": q},
        dims=(n, n0, n),
        labels=labels,
        C=C,
        pairing=np.eye(n),
        g0_blocks={"A": A_mats, "D": D_mats},
        normalizable=p + q >= 3,
        projective_type=(p == 1 and q >= 2),
    )


# ---------------------------------------------------------------------------
# projective: sl(q+1)
# ---------------------------------------------------------------------------


def _build_projective(q: int) -> GradedLieAlgebra:
    n = q
    n0 = q * q
    N = 2 * n + n0

    labels = [f"x{i + 1}" for i in range(q)]
    labels += [f"h({i + 1},{j + 1})" for i in range(q) for j in range(q)]
    labels += [f"z{j + 1}" for j in range(q)]

    def h_idx(i: int, j: int) -> int:
        return i * q + j

    C = np.zeros((N, N, N))
    o0, o1 = n, n + n0

    def put(i: int, j: int, k: int, v: float) -> None:
        C[i, j, k] += v
        C[j, i, k] -= v

    # [x_i, z_j] = h(j, i) + delta_ij * sum_k h(k, k)
    for i in range(q):
        for j in range(q):
            put(i, o1 + j, o0 + h_idx(j, i), 1.0)
            if i == j:
                for k in range(q):
                    put(i, o1 + j, o0 + h_idx(k, k), 1.0)

    # [h(i,j), x_k] = delta_ik x_j ; [h(i,j), z_k] = -delta_jk z_i
    for i in range(q):
        for j in range(q):
            put(o0 + h_idx(i, j), i, j, 1.0)
            put(o0 + h_idx(i, j), o1 + j, o1 + i, -1.0)

    # [h(i,j), h(k,l)] = delta_il h(k,j) - delta_kj h(i,l)
    for i in range(q):
        for j in range(q):
            for k in range(q):
                for l in range(q):
                    c1, c2 = h_idx(i, j), h_idx(k, l)
                    if c2 <= c1:
                        continue
                    if i == l:
                        put(o0 + c1, o0 + c2, o0 + h_idx(k, j), 1.0)
                    if k == j:
                        put(o0 + c1, o0 + c2, o0 + h_idx(i, l), -1.0)

    F_mats = np.zeros((n0, q, q))
    for i in range(q):
        for j in range(q):
            F_mats[h_idx(i, j)][j, i] = 1.0

    return GradedLieAlgebra(
        kind="projective",
        params={"q": q},
        dims=(n, n0, n),
        labels=labels,
        C=C,
        pairing=np.eye(n),
        g0_blocks={"F": F_mats},
        normalizable=True,
        projective_type=True,
    )


# ---------------------------------------------------------------------------
# lagrangian: sp(2m), g_{-1} = Sym^2 R^m
# ---------------------------------------------------------------------------


def _sym_pairs(m: int) -> list[tuple[int, int]]:
    return [(k, l) for k in range(m) for l in range(k, m)]


def _build_lagrangian(m: int) -> GradedLieAlgebra:
    pairs = _sym_pairs(m)
    pidx = {kl: t for t, kl in enumerate(pairs)}
    n = len(pairs)
    n0 = m * m
    N = 2 * n + n0

    labels = [f"x({k + 1},{l + 1})" for k, l in pairs]
    labels += [f"h({i + 1},{j + 1})" for i in range(m) for j in range(m)]
    labels += [f"z({k + 1},{l + 1})" for k, l in pairs]

    def h_idx(i: int, j: int) -> int:
        return i * m + j

    def sflat(a: int, b: int) -> int:
        return pidx[(a, b) if a <= b else (b, a)]

    C = np.zeros((N, N, N))
    o0, o1 = n, n + n0

    def put(i: int, j: int, k: int, v: float) -> None:
        C[i, j, k] += v
        C[j, i, k] -= v

    # [z(s,t), x(k,l)] = -1/4 (d_sk h(t,l) + d_sl h(t,k) + d_tk h(s,l) + d_tl h(s,k))
    for s, t in pairs:
        for k, l in pairs:
            zi, xi = o1 + pidx[(s, t)], pidx[(k, l)]
            for du, hv in (((s, k), (t, l)), ((s, l), (t, k)),
                           ((t, k), (s, l)), ((t, l), (s, k))):
                if du[0] == du[1]:
                    put(zi, xi, o0 + h_idx(*hv), -0.25)

    # [h(p,w), x(k,l)] = d_pk x(w,l) + d_pl x(w,k)
    # [z(s,t), h(p,w)] = d_tw z(p,s) + d_sw z(p,t)
    for pp in range(m):
        for w in range(m):
            hc = o0 + h_idx(pp, w)
            for k, l in pairs:
                if pp == k:
                    put(hc, pidx[(k, l)], sflat(w, l), 1.0)
                if pp == l:
                    put(hc, pidx[(k, l)], sflat(w, k), 1.0)
            for s, t in pairs:
                zi = o1 + pidx[(s, t)]
                if t == w:
                    put(zi, hc, o1 + sflat(pp, s), 1.0)
                if s == w:
                    put(zi, hc, o1 + sflat(pp, t), 1.0)

    _fill_gl_internal(C, m, o0, put)

    P = np.diag([1.0 if k == l else 0.5 for k, l in pairs])
    A_mats = np.zeros((n0, m, m))
    for i in range(m):
        for j in range(m):
            A_mats[h_idx(i, j)][j, i] = 1.0

    return GradedLieAlgebra(
        kind="lagrangian",
        params={"m": m},
        dims=(n, n0, n),
        labels=labels,
        C=C,
        pairing=P,
        g0_blocks={"A": A_mats},
        normalizable=True,
        projective_type=False,
    )


def _fill_gl_internal(C: np.ndarray, m: int, o0: int, put) -> None:
    """gl(m) internal brackets [h(i,j), h(k,l)] = d_il h(k,j) - d_kj h(i,l)."""
    for i in range(m):
        for j in range(m):
            for k in range(m):
                for l in range(m):
                    c1, c2 = i * m + j, k * m + l
                    if c2 <= c1:
                        continue
                    if i == l:
                        put(o0 + c1, o0 + c2, o0 + k * m + j, 1.0)
                    if k == j:
                        put(o0 + c1, o0 + c2, o0 + i * m + l, -1.0)


# ---------------------------------------------------------------------------
# spinorial: so(m, m), g_{-1} = Lambda^2 R^m
# ---------------------------------------------------------------------------


def _alt_pairs(m: int) -> list[tuple[int, int]]:
    return [(k, l) for k in range(m) for l in range(m) if k < l]


def _build_spinorial(m: int) -> GradedLieAlgebra:
    pairs = _alt_pairs(m)
    pidx = {kl: t for t, kl in enumerate(pairs)}
    n = len(pairs)
    n0 = m * m
    N = 2 * n + n0

    labels = [f"x({k + 1},{l + 1})" for k, l in pairs]
    labels += [f"h({i + 1},{j + 1})" for i in range(m) for j in range(m)]
    labels += [f"z({k + 1},{l + 1})" for k, l in pairs]

    def h_idx(i: int, j: int) -> int:
        return i * m + j

    def aflat(a: int, b: int) -> tuple[int, float] | None:
        if a == b:
            return None
        if a < b:
            return pidx[(a, b)], 1.0
        return pidx[(b, a)], -1.0

    C = np.zeros((N, N, N))
    o0, o1 = n, n + n0

    def put(i: int, j: int, k: int, v: float) -> None:
        C[i, j, k] += v
        C[j, i, k] -= v

    # [z(s,t), x(k,l)] = 1/4 (-d_sl h(t,k) + d_tl h(s,k) + d_sk h(t,l) - d_tk h(s,l))
    for s, t in pairs:
        for k, l in pairs:
            zi, xi = o1 + pidx[(s, t)], pidx[(k, l)]
            for du, hv, sg in (((s, l), (t, k), -1.0), ((t, l), (s, k), 1.0),
                               ((s, k), (t, l), 1.0), ((t, k), (s, l), -1.0)):
                if du[0] == du[1]:
                    put(zi, xi, o0 + h_idx(*hv), 0.25 * sg)

    # [h(p,w), x(k,l)] = d_pk x(w,l) - d_pl x(w,k)
    # [z(s,t), h(p,w)] = d_tw z(s,p) - d_sw z(t,p)
    for pp in range(m):
        for w in range(m):
            hc = o0 + h_idx(pp, w)
            for k, l in pairs:
                if pp == k:
                    r = aflat(w, l)
                    if r is not None:
                        put(hc, pidx[(k, l)], r[0], r[1])
                if pp == l:
                    r = aflat(w, k)
                    if r is not None:
                        put(hc, pidx[(k, l)], r[0], -r[1])
            for s, t in pairs:
                zi = o1 + pidx[(s, t)]
                if t == w:
                    r = aflat(s, pp)
                    if r is not None:
                        put(zi, hc, o1 + r[0], r[1])
                if s == w:
                    r = aflat(t, pp)
                    if r is not None:
                        put(zi, hc, o1 + r[0], -r[1])

    _fill_gl_internal(C, m, o0, put)

    A_mats = np.zeros((n0, m, m))
    for i in range(m):
        for j in range(m):
            A_mats[h_idx(i, j)][j, i] = 1.0

    return GradedLieAlgebra(
        kind="spinorial",
        params={"m": m},
        dims=(n, n0, n),
        labels=labels,
        C=C,
        pairing=0.5 * np.eye(n),
        g0_blocks={"A": A_mats},
        normalizable=True,
        projective_type=(m == 3),
    )


# ---------------------------------------------------------------------------
# generic structural diagnostics
# ---------------------------------------------------------------------------


def grading_residual(alg: GradedLieAlgebra) -> float:
    """Max |C| entry violating the grading (target grade != sum of grades)."""
    worst = 0.0
    for gx in (-1, 0, 1):
        for gy in (-1, 0, 1):
            blockxy = alg.C[alg.grade_slice(gx), alg.grade_slice(gy), :]
            for gz in (-1, 0, 1):
                if gz == gx + gy:
                    continue
                part = blockxy[:, :, alg.grade_slice(gz)]
                if part.size:
                    worst = max(worst, float(np.abs(part).max()))
    return worst


def jacobi_residual(alg: GradedLieAlgebra) -> float:
    """Max |[[x,y],z] + [[y,z],x] + [[z,x],y]| over all basis triples."""
    C = alg.C
    worst = 0.0
    for i in range(alg.n_total):
        t1 = np.einsum("jm,mkl->jkl", C[i], C)
        t2 = np.einsum("jkm,ml->jkl", C, C[:, i, :])
        t3 = np.einsum("km,mjl->kjl", C[:, i, :], C).transpose(1, 0, 2)
        worst = max(worst, float(np.abs(t1 + t2 + t3).max()))
    return worst


def center_dim(alg: GradedLieAlgebra) -> int:
    """Dimension of the center of the reductive part g_0."""
    n0 = alg.dims[1]
    sl0 = alg.grade_slice(0)
    M = alg.C[sl0, sl0, sl0].reshape(n0, n0 * n0).T
    return n0 - int(np.linalg.matrix_rank(M, tol=1e-10))


def faithfulness_ranks(alg: GradedLieAlgebra) -> dict[str, tuple[int, int]]:
    """Ranks of the two injectivity witnesses.

    Returns a dict with entries ``(rank, expected)`` for the g_0 action on
    g_{-1} and for the map g_1 -> Hom(g_{-1}, g_0), Z -> [Z, .].
    """
    n, n0, n1 = alg.dims
    act = alg.block(0, -1).reshape(n0, n * n).T
    zmap = alg.block(1, -1).reshape(n1, n * n0).T
    return {
        "g0_on_gm1": (int(np.linalg.matrix_rank(act, tol=1e-10)), n0),
        "g1_to_hom": (int(np.linalg.matrix_rank(zmap, tol=1e-10)), n1),
    }


def ad_exp(alg: GradedLieAlgebra, Z: np.ndarray, x: GradedElement) -> GradedElement:
    """Adjoint action of exp(Z), Z in g_1, as the exact finite series.

    ad(Z) raises the grade, so ad(Z)^3 = 0 on every element and the
    exponential series terminates after the quadratic term.
    """
    n, n0, n1 = alg.dims
    zfull = np.zeros(alg.n_total)
    zfull[alg.grade_slice(1)] = Z
    acc = x.full()
    term = acc
    for k in (1, 2):
        term = alg.bracket_full(zfull, term) / k
        acc = acc + term
    return GradedElement.from_full(alg, acc)


# ---------------------------------------------------------------------------
# block-matrix realization oracle
# ---------------------------------------------------------------------------


def matrix_representation(alg: GradedLieAlgebra) -> np.ndarray:
    """Embed every basis element as a matrix in the defining representation.

    The embedding is exact (integer or dyadic entries).  Per graded-sector
    scalars are allowed: for the projective family the g_0 part is scaled by
    q + 1 to stay integral, which rescales brackets sector by sector but
    keeps each sector's scalar constant; :func:`cross_check_matrix_rep`
    solves for and verifies those scalars.
    """
    n, n0, n1 = alg.dims
    kind, prm = alg.kind, alg.params
    if kind == "grassmannian":
        p, q = prm["p"], prm["q"]
        s = p + q
        rep = np.zeros((alg.n_total, s, s))
        t = 0
        for a in range(p):
            for i in range(q):
                rep[t][p + i, a] = 1.0
                t += 1
        for c in range(n0):
            rep[t][:p, :p] = alg.g0_blocks["A"][c]
            rep[t][p:, p:] = alg.g0_blocks["D"][c]
            t += 1
        for a in range(p):
            for i in range(q):
                rep[t][a, p + i] = 1.0
                t += 1
        return rep
    if kind == "projective":
        q = prm["q"]
        s = q + 1
        rep = np.zeros((alg.n_total, s, s))
        for i in range(q):
            rep[i][1 + i, 0] = 1.0
            rep[n + n0 + i][0, 1 + i] = 1.0
        for c in range(n0):
            F = alg.g0_blocks["F"][c]
            M = np.zeros((s, s))
            M[1:, 1:] = (q + 1) * F
            M -= np.trace(F) * np.eye(s)
            rep[n + c] = M
        return rep
    if kind == "conformal":
        m = prm["m"]
        s = m + 2
        rep = np.zeros((alg.n_total, s, s))
        for i in range(m):
            rep[i][1 + i, 0] = 1.0
            rep[i][m + 1, 1 + i] = -1.0
            rep[n + n0 + i][0, 1 + i] = 1.0
            rep[n + n0 + i][1 + i, m + 1] = -1.0
        rep[n][0, 0] = 1.0
        rep[n][m + 1, m + 1] = -1.0
        for c in range(1, n0):
            rep[n + c][1 : m + 1, 1 : m + 1] = alg.g0_blocks["E"][c]
        return rep
    if kind in ("lagrangian", "spinorial"):
        m = prm["m"]
        s = 2 * m
        sign = 1.0 if kind == "lagrangian" else -1.0
        pairs = _sym_pairs(m) if kind == "lagrangian" else _alt_pairs(m)
        rep = np.zeros((alg.n_total, s, s))
        for t, (k, l) in enumerate(pairs):
            B = np.zeros((m, m))
            B[k, l] += 0.5
            B[l, k] += 0.5 * sign
            rep[t][:m, m:] = B
            rep[n + n0 + t][m:, :m] = B
        for c in range(n0):
            A = alg.g0_blocks["A"][c]
            rep[n + c][:m, :m] = A
            rep[n + c][m:, m:] = -A.T
        return rep
    raise ValueError(f"no matrix realization for kind {alg.kind!r}")


def cross_check_matrix_rep(alg: GradedLieAlgebra) -> dict:
    """Compare the structure tensor against the block-matrix realization.

    For every basis pair the matrix commutator must equal the embedded
    table bracket up to one fixed scalar per graded sector.  The comparison
    is done by exact cross-multiplication (no division), so a faithful
    transcription yields max_discrepancy == 0.0 exactly.

    Returns:
        dict with ``sector_scalars`` (one float per sector with nonzero
        brackets) and ``max_discrepancy``.
    """
    rep = matrix_representation(alg)
    scalars: dict[str, float] = {}
    refs: dict[tuple[int, int], tuple[float, float]] = {}
    worst = 0.0
    idx = {g: range(alg.grade_slice(g).start, alg.grade_slice(g).stop) for g in (-1, 0, 1)}
    for gx in (-1, 0, 1):
        for gy in (-1, 0, 1):
            for i in idx[gx]:
                for j in idx[gy]:
                    if j <= i:
                        continue
                    table = np.einsum("k,kuv->uv", alg.C[i, j], rep)
                    mat = rep[i] @ rep[j] - rep[j] @ rep[i]
                    tmax, mmax = np.abs(table).max(), np.abs(mat).max()
                    if tmax == 0.0 and mmax == 0.0:
                        continue
                    if tmax == 0.0 or mmax == 0.0:
                        worst = max(worst, tmax, mmax)
                        continue
                    key = (gx, gy)
                    if key not in refs:
                        flat = np.abs(table).argmax()
                        refs[key] = (mat.flat[flat], table.flat[flat])
                        scalars[f"({gx},{gy})"] = mat.flat[flat] / table.flat[flat]
                    m0, t0 = refs[key]
                    worst = max(worst, float(np.abs(mat * t0 - table * m0).max()))
    return {"sector_scalars": scalars, "max_discrepancy": worst}


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def serialize(alg: GradedLieAlgebra) -> dict:
    """JSON-ready description: dims, labels, pairing, sparse structure constants.

    Structure constants are emitted as (i, j, k, value) quadruples for the
    nonzero entries with i < j; the i > j half follows by antisymmetry.
    """
    triples = []
    nz = np.argwhere(alg.C != 0.0)
    for i, j, k in nz:
        if i < j:
            triples.append([int(i), int(j), int(k), float(alg.C[i, j, k])])
    return {
        "kind": alg.kind,
        "params": dict(alg.params),
        "dims": list(alg.dims),
        "labels": list(alg.labels),
        "pairing": alg.pairing.tolist(),
        "structure_constants": triples,
    }
