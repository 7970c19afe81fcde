"""Pure-numpy curvature kernels (fallback for the compiled ``_ckernels``)."""

import numpy as np

DEGENERACY_TOL = 1e-12


class DegenerateMetricError(ArithmeticError):
    pass


def inverse_metric(g):
    g = np.asarray(g, dtype=float)
    det = np.linalg.det(g)
    if abs(det) < DEGENERACY_TOL:
        raise DegenerateMetricError(f"degenerate metric: |det g| = {abs(det):.3e}")
    return np.linalg.inv(g)


def christoffel(g, dg):
    """Return ``(ginv, gamma1, gamma)`` from the metric and ``dg[k, i, j] = d_k g_ij``.

    ``gamma1[l, i, j]`` are the symbols of the first kind, ``gamma[k, i, j]`` =
    Gamma^k_ij.
    """
    ginv = inverse_metric(g)
    dg = np.asarray(dg, dtype=float)
    # gamma1[l,i,j] = (d_i g_jl + d_j g_il - d_l g_ij) / 2
    gamma1 = 0.5 * (np.transpose(dg, (2, 0, 1)) + np.transpose(dg, (1, 2, 0)) - dg)
    gamma = np.einsum("kl,lij->kij", ginv, gamma1)
    return ginv, gamma1, gamma


def curvature(g, dg, ddg):
    """Return ``(ginv, gamma, riemann)``.

    ``riemann[i, j, k, l]`` = g(R(d_i, d_j) d_k, d_l) with
    R(x, y) = [nabla_x, nabla_y] - nabla_[x, y].
    """
    ginv, gamma1, gamma = christoffel(g, dg)
    dg = np.asarray(dg, dtype=float)
    ddg = np.asarray(ddg, dtype=float)
    # dgamma1[m,l,i,j] = d_m gamma1[l,i,j]
    dgamma1 = 0.5 * (
        np.transpose(ddg, (0, 3, 1, 2)) + np.transpose(ddg, (0, 2, 3, 1)) - ddg
    )
    riemann = (
        np.einsum("iljk->ijkl", dgamma1)
        - np.einsum("jlik->ijkl", dgamma1)
        - np.einsum("inl,njk->ijkl", dg, gamma)
        + np.einsum("jnl,nik->ijkl", dg, gamma)
        + np.einsum("mjk,lim->ijkl", gamma, gamma1)
        - np.einsum("mik,ljm->ijkl", gamma, gamma1)
    )
    return ginv, gamma, riemann


def nabla_endomorphism(gamma, phi, dphi):
    """Covariant derivative of a (1,1) field: ``out[a, b, c]`` = (nabla_a phi)^b_c."""
    return (
        np.asarray(dphi, dtype=float)
        + np.einsum("bad,dc->abc", gamma, phi)
        - np.einsum("bd,dac->abc", phi, gamma)
    )
