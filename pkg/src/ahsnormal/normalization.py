"""Normalization of soldered Cartan connections: curvature traces and the
deformation tensor.

Given the grade-0 part kappa0 of the curvature of a soldered Cartan
connection, the normal connection differs from it by a unique grade-1
one-cochain Gamma (the deformation tensor), characterized by

    Tr(kappa0 - delta kappa0(Gamma)) = 0,

where delta kappa0(Gamma)(X, Y) = [Gamma(X), Y] - [Gamma(Y), X] is the
curvature shift induced by deforming the connection and Tr is the Ricci-type
trace pairing two-cochains down to bilinear forms on g_{-1}.  The module
computes Gamma along two independent routes:

* closed-form trace formulas, one per structure kind, and
* a linear-solve oracle that assembles the map Gamma -> Tr(delta
  kappa0(Gamma)) on a basis and inverts it.

Conventions fixed here and recorded in CLI metadata: the normalized
curvature is kbar = k - delta(k); the trace data T[a, b] always has its
row index a as the *first* curvature argument; the conformal and projective
families embed a Riemann tensor R into kappa0 with signs -1 and +1
respectively (kappa0(X, Y) acts on g_{-1} as -R(X, Y) and +R(X, Y)), the
sign being pinned by the constant-curvature spot values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graded_algebra import GradedLieAlgebra
from .spencer import OneCochain, TwoCochain, _check_two, spencer_dstar


class NonUniquenessError(RuntimeError):
    """The normalization problem has a nontrivial kernel (e.g. sl(2))."""

    def __init__(self, message: str, kernel_dim: int = 0):
        super().__init__(message)
        self.kernel_dim = kernel_dim


@dataclass
class CurvatureData:
    """Curvature input for normalization.

    Either grade component may be absent.  For the conformal and projective
    kinds a raw Riemann tensor R[i, j, k, l] (endomorphism indices first),
    its Ricci contraction, and the scalar curvature may be carried along.
    ``torsion_free`` records whether the raw tensor is expected to satisfy
    the first Bianchi identity.
    """

    kind: str
    params: dict
    kappa_m1: TwoCochain | None = None
    kappa0: TwoCochain | None = None
    riemann: np.ndarray | None = None
    ricci: np.ndarray | None = None
    scalar: float | None = None
    torsion_free: bool = False


@dataclass
class DeformationTensor:
    """The grade-1 one-cochain Gamma with bookkeeping."""

    kind: str
    params: dict
    gamma: OneCochain
    method: str


# ---------------------------------------------------------------------------
# trace operators
# ---------------------------------------------------------------------------


def trace_kappa0(alg: GradedLieAlgebra, kappa0: TwoCochain) -> np.ndarray:
    """Ricci-type trace (Tr k)(X, Y) = sum_a <z^a, k(x_a, X)(Y)> as an (n, n) array.

    Row index = first argument X.  Because {z^a} is dual to {x_a}, the
    pairing collapses and the contraction needs only the g_0 action on
    g_{-1}; this is deliberately a different code path from the Spencer
    codifferential, so the identity ``Tr k = <d* k, .>`` is a genuine
    cross-check between the two.
    """
    _check_two(alg, kappa0)
    if kappa0.grade != 0:
        raise ValueError("trace_kappa0 expects a grade-0 two-cochain")
    act = alg.block(0, -1)
    return np.einsum("iac,cbi->ab", kappa0.data, act)


def trace_kappa0_via_dstar(alg: GradedLieAlgebra, kappa0: TwoCochain) -> np.ndarray:
    """Same bilinear form computed through the codifferential and the pairing."""
    ds = spencer_dstar(alg, kappa0)
    return ds.data @ alg.pairing


def trace_g0(alg: GradedLieAlgebra, phi: TwoCochain) -> np.ndarray:
    """g_0-trace data: (Tr_g0 phi)(X, Y) = tr(ad(phi(X, Y))|g_{-1})."""
    _check_two(alg, phi)
    if phi.grade != 0:
        raise ValueError("trace_g0 expects a grade-0 two-cochain")
    act = alg.block(0, -1)
    tr_vec = np.einsum("caa->c", act)
    return np.einsum("abc,c->ab", phi.data, tr_vec)


def block_trace_g0(alg: GradedLieAlgebra, phi: TwoCochain, block: str = "D") -> np.ndarray:
    """Plain block trace of the g_0 values, for the kinds with block g_0.

    For the grassmannian family ``block`` selects the gl(p) block ("A") or
    the gl(q) block ("D"); the two determine each other because the values
    are trace-free overall.
    """
    _check_two(alg, phi)
    if phi.grade != 0:
        raise ValueError("block_trace_g0 expects a grade-0 two-cochain")
    if block not in alg.g0_blocks:
        raise ValueError(f"algebra kind {alg.kind!r} has no {block!r} block")
    mats = alg.g0_blocks[block]
    tr_vec = np.einsum("caa->c", mats)
    return np.einsum("abc,c->ab", phi.data, tr_vec)


# ---------------------------------------------------------------------------
# curvature shift under deformation
# ---------------------------------------------------------------------------


def deformation_delta_kappa0(alg: GradedLieAlgebra, gamma: OneCochain) -> TwoCochain:
    """Curvature shift delta kappa0(Gamma)(X, Y) = [Gamma(X), Y] - [Gamma(Y), X].

    Evaluated directly from the bracket table; it coincides with the Spencer
    differential of Gamma viewed as a grade-1 one-cochain, and the test
    suite asserts the agreement of the two paths.
    """
    if gamma.grade != 1:
        raise ValueError("the deformation tensor is a grade-1 one-cochain")
    n = alg.dims[0]
    if gamma.data.shape != (n, alg.dims[2]):
        raise ValueError("deformation tensor shape does not match algebra")
    B = alg.block(1, -1)
    half = np.einsum("au,ubc->abc", gamma.data, B)
    return TwoCochain(0, half - half.transpose(1, 0, 2))


def torsion_is_harmonic(alg: GradedLieAlgebra, torsion: TwoCochain, tol: float = 1e-10) -> dict:
    """Check d*(torsion) = 0, the grade -1 half of the normalization condition."""
    if torsion.grade != -1:
        raise ValueError("torsion lives in grade -1")
    res = spencer_dstar(alg, torsion)
    scale = max(1.0, float(np.abs(torsion.data).max()))
    residual = float(np.abs(res.data).max())
    return {"residual": residual, "scale": scale, "passed": bool(residual <= tol * scale)}


# ---------------------------------------------------------------------------
# closed-form deformation tensors
# ---------------------------------------------------------------------------


def ricci_from_riemann(R: np.ndarray) -> np.ndarray:
    """Ricci contraction Ric[j, k] = sum_l R[l, j, l, k]."""
    R = np.asarray(R, dtype=float)
    if R.ndim != 4:
        raise ValueError("Riemann tensor must have four indices")
    return np.einsum("ljlk->jk", R)


def gamma_conformal(m: int, ricci: np.ndarray, scalar: float) -> DeformationTensor:
    """Conformal deformation tensor from Ricci data.

    Gamma_ij = -1/(m-2) * (Ric_ij - delta_ij * scalar / (2(m-1))), applied
    entrywise.  The inversion is exact when the Ricci data is symmetric
    (which holds for curvature operators built from torsion-free, Bianchi
    respecting Riemann tensors).
    """
    if m < 3:
        raise NonUniquenessError(f"conformal trace inversion needs m >= 3, got {m}")
    ricci = np.asarray(ricci, dtype=float)
    if ricci.shape != (m, m):
        raise ValueError(f"ricci must be {m} x {m}")
    G = (-1.0 / (m - 2)) * (ricci - (float(scalar) / (2 * (m - 1))) * np.eye(m))
    return DeformationTensor("conformal", {"m": m}, OneCochain(1, G), "closed_form")


def gamma_projective(q: int, riemann: np.ndarray) -> DeformationTensor:
    """Projective deformation tensor from a Riemann-type tensor R[i, j, k, l].

    Writing Ric for the contraction R[l, j, l, k], the tensor is
    Gamma_jk = (Ric_jk + q * Ric_kj) / (q^2 - 1).  On data with symmetric
    Ricci this reduces to the familiar (q - 1)-denominator expression; the
    antisymmetric part's coefficient is fixed by the trace-map inversion and
    is validated against the linear-solve oracle.
    """
    if q < 2:
        raise NonUniquenessError(f"projective trace inversion needs q >= 2, got {q}")
    ric = ricci_from_riemann(riemann)
    if ric.shape != (q, q):
        raise ValueError(f"Riemann tensor must be {q}^4")
    G = (ric + q * ric.T) / (q * q - 1.0)
    return DeformationTensor("projective", {"q": q}, OneCochain(1, G), "closed_form")


def gamma_grassmannian(p: int, q: int, trace_r: np.ndarray, trace_g0_2: np.ndarray) -> DeformationTensor:
    """Grassmannian deformation tensor from the two trace datasets.

    ``trace_r`` is the Ricci-type trace data of kappa0 and ``trace_g0_2``
    the plain gl(q)-block trace data, both as (pq, pq) arrays whose row
    index is the first curvature argument, with the flat index a*q + i for
    the basis vector x^a_i.  With s = p + q:

    Gamma[a,k,c,l] = (s*T[a,k,c,l] + 2*T[c,k,a,l] + s*G2[c,k,a,l] + 2*G2[a,k,c,l]) / (s^2 - 4)
    """
    s = p + q
    if s < 3 or p < 1:
        raise NonUniquenessError(
            f"grassmannian trace inversion needs p + q >= 3, got p = {p}, q = {q}",
            kernel_dim=1,
        )
    n = p * q
    T4 = np.asarray(trace_r, dtype=float).reshape(p, q, p, q)
    G24 = np.asarray(trace_g0_2, dtype=float).reshape(p, q, p, q)
    Ts = T4.transpose(2, 1, 0, 3)
    G2s = G24.transpose(2, 1, 0, 3)
    G4 = (s * T4 + 2.0 * Ts + s * G2s + 2.0 * G24) / (s * s - 4.0)
    return DeformationTensor(
        "grassmannian", {"p": p, "q": q}, OneCochain(1, G4.reshape(n, n)), "closed_form"
    )


def _sym_pairs(m: int) -> list[tuple[int, int]]:
    return [(k, l) for k in range(m) for l in range(k, m)]


def _alt_pairs(m: int) -> list[tuple[int, int]]:
    return [(k, l) for k in range(m) for l in range(m) if k < l]


def gamma_lagrangian(m: int, trace_r: np.ndarray) -> DeformationTensor:
    """Lagrangian deformation tensor from the Ricci-type trace data alone.

    ``trace_r`` is indexed by the ordered symmetric pairs k <= l.  With
    T[a,b,c,d] the data expanded to all index pairs,

    Gamma[p,q,k,l] = (m*T[k,l,p,q] + T[q,l,p,k] + T[q,k,p,l]) / (m(m+1) - 2)

    in all-pairs coefficients; the formula inverts the trace map exactly on
    deformation tensors that are symmetric under exchange of the input and
    output symmetric pairs, which is the class produced by normalizing an
    admissible connection.
    """
    if m < 3:
        raise NonUniquenessError(f"lagrangian trace inversion needs m >= 3, got {m}")
    pairs = _sym_pairs(m)
    n = len(pairs)
    trace_r = np.asarray(trace_r, dtype=float)
    if trace_r.shape != (n, n):
        raise ValueError(f"trace data must be {n} x {n}")
    T4 = np.zeros((m, m, m, m))
    for s, (a, b) in enumerate(pairs):
        for t, (c, d) in enumerate(pairs):
            v = trace_r[s, t]
            for aa, bb in ((a, b), (b, a)):
                for cc, dd in ((c, d), (d, c)):
                    T4[aa, bb, cc, dd] = v
    G4 = (
        m * np.einsum("klpq->pqkl", T4)
        + np.einsum("qlpk->pqkl", T4)
        + np.einsum("qkpl->pqkl", T4)
    ) / (m * (m + 1) - 2.0)
    G4 = 0.5 * (G4 + G4.transpose(1, 0, 2, 3))
    G4 = 0.5 * (G4 + G4.transpose(0, 1, 3, 2))
    G = np.zeros((n, n))
    for t, (i, j) in enumerate(pairs):
        for u, (s, tt) in enumerate(pairs):
            G[t, u] = (1.0 if s == tt else 2.0) * G4[s, tt, i, j]
    return DeformationTensor("lagrangian", {"m": m}, OneCochain(1, G), "closed_form")


def gamma_spinorial(m: int, trace_r: np.ndarray) -> DeformationTensor:
    """Spinorial deformation tensor from the Ricci-type trace data alone.

    ``trace_r`` is indexed by the ordered alternating pairs k < l.  With
    T[a,b,c,d] the data expanded antisymmetrically to all index pairs,

    Gamma[p,q,k,l] = (m*T[k,l,p,q] + T[q,l,p,k] - T[q,k,p,l]) / (2 - m(m-1))

    in all-pairs coefficients, exact on pair-exchange symmetric deformation
    tensors as in the lagrangian case.  Note the denominator sign: for the
    exterior-square grading the trace of the curvature shift reproduces the
    deformation tensor with an overall minus, the opposite of the
    symmetric-square (lagrangian) case where the factor is +(m(m+1) - 2).
    """
    if m < 3:
        raise NonUniquenessError(f"spinorial trace inversion needs m >= 3, got {m}")
    pairs = _alt_pairs(m)
    n = len(pairs)
    trace_r = np.asarray(trace_r, dtype=float)
    if trace_r.shape != (n, n):
        raise ValueError(f"trace data must be {n} x {n}")
    T4 = np.zeros((m, m, m, m))
    for s, (a, b) in enumerate(pairs):
        for t, (c, d) in enumerate(pairs):
            v = trace_r[s, t]
            T4[a, b, c, d] = v
            T4[b, a, c, d] = -v
            T4[a, b, d, c] = -v
            T4[b, a, d, c] = v
    G4 = (
        m * np.einsum("klpq->pqkl", T4)
        + np.einsum("qlpk->pqkl", T4)
        - np.einsum("qkpl->pqkl", T4)
    ) / (2.0 - m * (m - 1))
    G4 = 0.5 * (G4 - G4.transpose(1, 0, 2, 3))
    G4 = 0.5 * (G4 - G4.transpose(0, 1, 3, 2))
    G = np.zeros((n, n))
    for t, (i, j) in enumerate(pairs):
        for u, (s, tt) in enumerate(pairs):
            G[t, u] = 2.0 * G4[s, tt, i, j]
    return DeformationTensor("spinorial", {"m": m}, OneCochain(1, G), "closed_form")


def gamma_closed_form(alg: GradedLieAlgebra, kappa0: TwoCochain) -> DeformationTensor:
    """Dispatch to the structure kind's closed-form formula, extracting the
    required trace data from kappa0."""
    T = trace_kappa0(alg, kappa0)
    kind = alg.kind
    if kind == "conformal":
        ric = -T
        return gamma_conformal(alg.params["m"], ric, float(np.trace(ric)))
    if kind == "projective":
        q = alg.params["q"]
        if q < 2:
            raise NonUniquenessError("projective trace inversion needs q >= 2")
        # T = Ric^T for curvature embedded with the projective sign, so the
        # Riemann-based formula becomes (q*T + T^T) / (q^2 - 1).
        G = (q * T + T.T) / (q * q - 1.0)
        return DeformationTensor("projective", {"q": q}, OneCochain(1, G), "closed_form")
    if kind == "grassmannian":
        G2 = block_trace_g0(alg, kappa0, "D")
        return gamma_grassmannian(alg.params["p"], alg.params["q"], T, G2)
    if kind == "lagrangian":
        return gamma_lagrangian(alg.params["m"], T)
    if kind == "spinorial":
        return gamma_spinorial(alg.params["m"], T)
    raise ValueError(f"no closed form for kind {kind!r}")


# ---------------------------------------------------------------------------
# curvature embeddings for the raw-tensor kinds
# ---------------------------------------------------------------------------


def curvature_from_riemann(alg: GradedLieAlgebra, R: np.ndarray) -> TwoCochain:
    """Embed a Riemann-type tensor R[i, j, k, l] as a grade-0 two-cochain.

    kappa0(x_k, x_l) is the g_0 element acting on g_{-1} as -R(x_k, x_l)
    for the conformal kind and +R(x_k, x_l) for the projective kind; the
    signs are pinned by the constant-curvature spot values and recorded in
    the CLI metadata.
    """
    R = np.asarray(R, dtype=float)
    n = alg.dims[0]
    if R.shape != (n, n, n, n):
        raise ValueError(f"Riemann tensor must have shape {(n, n, n, n)}")
    if alg.kind == "conformal":
        m = alg.params["m"]
        data = np.zeros((n, n, alg.dims[1]))
        rot = _alt_pairs(m)
        for t, (u, v) in enumerate(rot):
            data[:, :, 1 + t] = -R[u, v, :, :]
        return TwoCochain(0, data)
    if alg.kind == "projective":
        q = alg.params["q"]
        data = np.einsum("jikl->klij", R).reshape(n, n, q * q)
        return TwoCochain(0, data)
    raise ValueError(f"kind {alg.kind!r} does not take raw Riemann input")


# ---------------------------------------------------------------------------
# oracle: assemble and solve the trace map
# ---------------------------------------------------------------------------


def trace_map_matrix(alg: GradedLieAlgebra) -> np.ndarray:
    """Dense matrix of Gamma -> Tr(delta kappa0(Gamma)), assembled column by
    column over the standard basis of g_{-1}^* (x) g_1."""
    n, _, n1 = alg.dims
    M = np.zeros((n * n, n * n1))
    for c in range(n):
        for u in range(n1):
            E = np.zeros((n, n1))
            E[c, u] = 1.0
            col = trace_kappa0(alg, deformation_delta_kappa0(alg, OneCochain(1, E)))
            M[:, c * n1 + u] = col.reshape(-1)
    return M


def trace_g0_map_matrix(alg: GradedLieAlgebra) -> np.ndarray:
    """Dense matrix of Gamma -> Tr_g0(delta kappa0(Gamma)), same index layout."""
    n, _, n1 = alg.dims
    M = np.zeros((n * n, n * n1))
    for c in range(n):
        for u in range(n1):
            E = np.zeros((n, n1))
            E[c, u] = 1.0
            col = trace_g0(alg, deformation_delta_kappa0(alg, OneCochain(1, E)))
            M[:, c * n1 + u] = col.reshape(-1)
    return M


def oracle_gamma(
    alg: GradedLieAlgebra,
    kappa0: TwoCochain,
    tol: float = 1e-9,
    trace_matrix: np.ndarray | None = None,
) -> DeformationTensor:
    """Solve Tr(delta kappa0(Gamma)) = Tr(kappa0) for Gamma by least squares.

    ``trace_matrix`` may carry a precomputed :func:`trace_map_matrix` to
    amortize the assembly over many solves on the same algebra.

    Raises:
        NonUniquenessError: the assembled trace map has a nontrivial kernel
            (the sl(2) case).
        ValueError: the solve leaves a residual beyond tolerance, i.e. the
            trace data is not in the range of the map.
    """
    n, _, n1 = alg.dims
    M = trace_map_matrix(alg) if trace_matrix is None else trace_matrix
    s = np.linalg.svd(M, compute_uv=False)
    smax = s[0] if s.size else 0.0
    kernel_dim = int((s <= tol * max(smax, 1.0)).sum())
    if kernel_dim > 0:
        raise NonUniquenessError(
            f"trace map has a {kernel_dim}-dimensional kernel; "
            "the normalization problem is degenerate for this structure",
            kernel_dim=kernel_dim,
        )
    b = trace_kappa0(alg, kappa0).reshape(-1)
    x, *_ = np.linalg.lstsq(M, b, rcond=None)
    residual = float(np.abs(M @ x - b).max())
    scale = max(1.0, float(np.abs(b).max()))
    if residual > tol * scale:
        raise ValueError(f"trace data outside the range of the trace map (residual {residual:.3e})")
    return DeformationTensor(alg.kind, dict(alg.params), OneCochain(1, x.reshape(n, n1)), "oracle")


def uniqueness_certificate(alg: GradedLieAlgebra, tol: float = 1e-9) -> dict:
    """Kernel dimensions certifying uniqueness of the normalization.

    Reports the kernel of the Ricci-type trace map alone and of that map
    stacked with the g_0-trace map.  Both are zero precisely on the valid
    parameter ranges; sl(2) has a one-dimensional kernel.
    """
    M = trace_map_matrix(alg)
    S = np.vstack([M, trace_g0_map_matrix(alg)])

    def kdim(A: np.ndarray) -> int:
        sv = np.linalg.svd(A, compute_uv=False)
        smax = sv[0] if sv.size else 0.0
        return int(A.shape[1] - (sv > tol * max(smax, 1.0)).sum())

    k_trace = kdim(M)
    k_stacked = kdim(S)
    return {
        "kind": alg.kind,
        "params": dict(alg.params),
        "trace_map_kernel_dim": k_trace,
        "stacked_kernel_dim": k_stacked,
        "kernel_dim": k_trace,
        "unique": bool(k_trace == 0),
        "normalizable": alg.normalizable,
    }


def fiber_constancy_check(
    alg: GradedLieAlgebra,
    kappa0: TwoCochain,
    kappa_m1: TwoCochain,
    tau: np.ndarray,
    tol: float = 1e-10,
) -> dict:
    """The normalization condition does not depend on the fiber coordinate.

    Moving up the fiber by exp(tau), tau in g_1, shifts the grade-0
    curvature component by the bracket of tau with the grade -1 component:
    kappa0' = kappa0 - [tau, kappa_m1(., .)].  When kappa_m1 is harmonic
    (d* kappa_m1 = 0), the codifferential of the shift vanishes, so
    d* kappa0' = d* kappa0 and the normalization condition is fiberwise
    constant.  ``tau`` is the g_1 coordinate vector of the displacement at
    the point being modeled.

    Raises:
        ValueError: kappa_m1 is not harmonic, so the statement's hypothesis
            fails.
    """
    _check_two(alg, kappa_m1)
    if kappa_m1.grade != -1:
        raise ValueError("kappa_m1 must be a grade -1 two-cochain")
    tau = np.asarray(tau, dtype=float).reshape(-1)
    if tau.shape != (alg.dims[2],):
        raise ValueError("tau must be a g_1 coordinate vector")
    harm = torsion_is_harmonic(alg, kappa_m1, tol=1e-9)
    if not harm["passed"]:
        raise ValueError(
            f"kappa_m1 is not harmonic (d* residual {harm['residual']:.3e}); "
            "fiber constancy presupposes a harmonic grade -1 component"
        )
    shift = np.einsum("u,abk,ukc->abc", tau, kappa_m1.data, alg.block(1, -1))
    moved = TwoCochain(0, kappa0.data - shift)
    d1 = spencer_dstar(alg, moved).data
    d0 = spencer_dstar(alg, kappa0).data
    scale = max(1.0, float(np.abs(d0).max()))
    residual = float(np.abs(d1 - d0).max())
    return {"residual": residual, "scale": scale, "passed": bool(residual <= tol * scale)}
