"""Batched alternating-maximization engines for product-state overlaps.

Both engines maximize <psi_1 .. psi_m| W |psi_1 .. psi_m> over product states
by sweeping the parties: with every party but one frozen, the objective is a
Rayleigh quotient of an effective local Hermitian matrix, so the exact update
is that matrix's top eigenvector and the objective can never decrease.  Every
update is guarded by a monotonicity assertion.

The qubit-pair engine specializes two-qubit systems.  In Bloch coordinates
the witness table splits into two single-party rows and a 3 x 3 correlation
block, the effective local matrix is (t I + w . sigma) / 2, and its top
eigenvector is simply the Bloch unit vector along w, so each update is a
closed-form renormalization with no eigensolver.  All instances (directions x
restarts) advance together as flat numpy rows with an active-set mask.
"""

from __future__ import annotations

import itertools
import string

import numpy as np

from .errors import ValidationError

MONOTONE_GUARD = 1e-9


def _assert_monotone(new, old):
    slack = MONOTONE_GUARD * np.maximum(1.0, np.abs(old))
    if np.any(new < old - slack):
        worst = float((old - new).max())
        raise RuntimeError(
            f"see-saw objective decreased by {worst:.3e}; the local update is corrupted"
        )


def _canonical_phase(vecs: np.ndarray) -> np.ndarray:
    """Rotate each row so its largest-magnitude entry is real nonnegative."""
    idx = np.argmax(np.abs(vecs), axis=-1)
    pivot = np.take_along_axis(vecs, idx[..., None], axis=-1)[..., 0]
    mag = np.abs(pivot)
    phase = np.where(mag > 0, pivot / np.where(mag > 0, mag, 1.0), 1.0)
    return vecs * np.conj(phase)[..., None]


def _top_eig_2x2(mats: np.ndarray):
    """Top eigenvalue / unit eigenvector of batched 2x2 Hermitian matrices."""
    a = mats[..., 0, 0].real
    d = mats[..., 1, 1].real
    b = mats[..., 0, 1]
    half = 0.5 * (a - d)
    rad = np.sqrt(half * half + np.abs(b) ** 2)
    lam = 0.5 * (a + d) + rad
    v0 = b
    v1 = (lam - a).astype(complex)
    norm = np.sqrt(np.abs(v0) ** 2 + np.abs(v1) ** 2)
    # norm == 0 happens only for b == 0 with the top eigenvalue in slot 0
    degenerate = norm < 1e-300
    v0 = np.where(degenerate, 1.0, v0)
    v1 = np.where(degenerate, 0.0, v1)
    norm = np.where(degenerate, 1.0, norm)
    vec = np.stack([v0 / norm, v1 / norm], axis=-1)
    return lam, _canonical_phase(vec)


def _top_eig(mats: np.ndarray, local_dim: int):
    if local_dim == 2:
        return _top_eig_2x2(mats)
    w, v = np.linalg.eigh(mats)
    return w[..., -1], _canonical_phase(v[..., :, -1])


# ---------------------------------------------------------------------------
# starts


def random_bloch(rng: np.random.Generator, shape) -> np.ndarray:
    g = rng.standard_normal(tuple(shape) + (3,))
    norms = np.linalg.norm(g, axis=-1)
    bad = norms < 1e-12
    if np.any(bad):
        g[bad] = (1.0, 0.0, 0.0)
        norms = np.linalg.norm(g, axis=-1)
    return g / norms[..., None]


def axis_pairs():
    """The 36 axis-aligned Bloch start pairs for a two-qubit see-saw."""
    axes = np.array(
        [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]],
        dtype=float,
    )
    u = np.repeat(axes, 6, axis=0)
    v = np.tile(axes, (6, 1))
    return u, v


def random_kets(rng: np.random.Generator, dims, shape) -> list[np.ndarray]:
    kets = []
    for d in dims:
        g = rng.standard_normal(tuple(shape) + (d,)) + 1j * rng.standard_normal(
            tuple(shape) + (d,)
        )
        norms = np.linalg.norm(g, axis=-1)
        bad = norms < 1e-12
        if np.any(bad):
            g[bad] = np.eye(d, dtype=complex)[0]
            norms = np.linalg.norm(g, axis=-1)
        kets.append(g / norms[..., None])
    return kets


def computational_starts(dims, cap: int = 36) -> list[np.ndarray]:
    """One-hot product starts, row-major over basis combinations, capped."""
    combos = list(itertools.islice(itertools.product(*[range(d) for d in dims]), cap))
    out = []
    for party, d in enumerate(dims):
        eye = np.eye(d, dtype=complex)
        out.append(np.stack([eye[c[party]] for c in combos]))
    return out


# ---------------------------------------------------------------------------
# qubit-pair engine (flat rows, active set)


def seesaw_qubit_pair(c, b, A, u0, v0, tol: float = 1e-12, max_iters: int = 500):
    """Maximize c.u + b.v + v.A.u over unit Bloch vectors u, v per flat row.

    c, b: (N, 3); A: (N, 3, 3); u0, v0: (N, 3).  Returns values, final u, v,
    per-row sweep counts and convergence flags.
    """
    n_rows = c.shape[0]
    u = np.array(u0, dtype=float)
    v = np.array(v0, dtype=float)
    vals = (
        np.einsum("ni,ni->n", c, u)
        + np.einsum("ni,ni->n", b, v)
        + np.einsum("ni,nij,nj->n", v, A, u)
    )
    sweeps = np.zeros(n_rows, dtype=np.int64)
    done = np.zeros(n_rows, dtype=bool)
    for it in range(1, max_iters + 1):
        idx = np.flatnonzero(~done)
        if idx.size == 0:
            break
        ci, bi, Ai = c[idx], b[idx], A[idx]
        ui, vi = u[idx], v[idx]
        old = vals[idx]

        g = ci + np.einsum("nij,ni->nj", Ai, vi)
        gn = np.linalg.norm(g, axis=1)
        has_g = gn > 0.0
        ui = np.where(has_g[:, None], g / np.where(has_g, gn, 1.0)[:, None], ui)
        val_u = np.where(has_g, np.einsum("ni,ni->n", bi, vi) + gn, old)
        _assert_monotone(val_u, old)

        h = bi + np.einsum("nij,nj->ni", Ai, ui)
        hn = np.linalg.norm(h, axis=1)
        has_h = hn > 0.0
        vi = np.where(has_h[:, None], h / np.where(has_h, hn, 1.0)[:, None], vi)
        val_v = np.where(has_h, np.einsum("ni,ni->n", ci, ui) + hn, val_u)
        _assert_monotone(val_v, val_u)

        u[idx], v[idx] = ui, vi
        vals[idx] = val_v
        sweeps[idx] = it
        done[idx] = (val_v - old) <= tol * np.maximum(1.0, np.abs(val_v))
    return vals, u, v, sweeps, done


# ---------------------------------------------------------------------------
# general engine (flat rows, arbitrary dims, eigenvector updates)

_LETTERS = string.ascii_lowercase


def _contract_flat(tensor, kets, party):
    """Effective local matrix for one party with every other party frozen.

    tensor: (N, *dims, *dims); kets: list of (N, n_l).  Returns (N, n_k, n_k).
    """
    m = len(kets)
    rows = _LETTERS[:m]
    cols = _LETTERS[m : 2 * m]
    scripts = ["z" + rows + cols]
    args = [tensor]
    for l in range(m):
        if l == party:
            continue
        scripts.append("z" + rows[l])
        args.append(kets[l].conj())
        scripts.append("z" + cols[l])
        args.append(kets[l])
    out = "z" + rows[party] + cols[party]
    return np.einsum(",".join(scripts) + "->" + out, *args, optimize=True)


def seesaw_general(
    operators,
    dims,
    kets0,
    tol: float = 1e-12,
    max_iters: int = 500,
    herm_tol: float = 1e-8,
):
    """Alternating top-eigenvector sweeps for flat rows of arbitrary dims.

    operators: (N, d, d) Hermitian; kets0: list of per-party (N, n_k) starts.
    """
    dims = tuple(int(d) for d in dims)
    m = len(dims)
    n_rows = operators.shape[0]
    tensor = np.ascontiguousarray(operators).reshape((n_rows,) + dims + dims)
    kets = []
    for arr, d in zip(kets0, dims):
        arr = np.asarray(arr, dtype=complex).reshape(n_rows, d).copy()
        arr /= np.linalg.norm(arr, axis=1)[:, None]
        kets.append(arr)

    eff = _contract_flat(tensor, kets, 0)
    vals = np.einsum("na,nab,nb->n", kets[0].conj(), eff, kets[0]).real
    sweeps = np.zeros(n_rows, dtype=np.int64)
    done = np.zeros(n_rows, dtype=bool)
    for it in range(1, max_iters + 1):
        idx = np.flatnonzero(~done)
        if idx.size == 0:
            break
        sub_tensor = tensor[idx]
        sub_kets = [k[idx] for k in kets]
        current = vals[idx]
        for party in range(m):
            eff = _contract_flat(sub_tensor, sub_kets, party)
            adjoint = np.conj(np.swapaxes(eff, -1, -2))
            herm_err = float(np.abs(eff - adjoint).max()) if eff.size else 0.0
            scale = max(1.0, float(np.abs(eff).max())) if eff.size else 1.0
            if herm_err > herm_tol * scale:
                raise ValidationError(
                    f"non-Hermitian contraction (residual {herm_err:.2e}); witness is corrupted"
                )
            eff = 0.5 * (eff + adjoint)
            lam, vec = _top_eig(eff, dims[party])
            _assert_monotone(lam, current)
            sub_kets[party] = vec
            current = lam
        for party in range(m):
            kets[party][idx] = sub_kets[party]
        old = vals[idx]
        vals[idx] = current
        sweeps[idx] = it
        done[idx] = (current - old) <= tol * np.maximum(1.0, np.abs(current))
    return vals, kets, sweeps, done
