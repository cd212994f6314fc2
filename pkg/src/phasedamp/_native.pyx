# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for the decomposition search.

Same contract and parameter layout as `phasedamp._fallback`, which is the
reference implementation; this version keeps the whole objective/gradient
evaluation in C (LAPACK zheevd for the exponential map, BLAS zgemm for the
products) so the optimizer's inner loop stays cheap.
"""

import numpy as np

from libc.math cimport cos, log, sin
from scipy.linalg.cython_blas cimport zgemm
from scipy.linalg.cython_lapack cimport zheevd

cdef double _LN2 = 0.6931471805599453
cdef double _TINY = 1e-300


cdef void _fill_herm(const double[::1] theta, double complex[::1, :] h, int k) noexcept:
    # layout: k diagonal entries, then (a, b) pairs for i < j lexicographic
    cdef int i, j, idx
    cdef double a, b
    for j in range(k):
        for i in range(k):
            h[i, j] = 0.0
    for i in range(k):
        h[i, i] = theta[i]
    idx = k
    for i in range(k):
        for j in range(i + 1, k):
            a = theta[idx]
            b = theta[idx + 1]
            h[i, j] = b - a * 1j
            h[j, i] = b + a * 1j
            idx += 2


cdef int _eigh(double complex[::1, :] h, double[::1] mu, int k) except -1:
    # overwrites h with the orthonormal eigenvectors, mu ascending
    cdef int n = k, lda = k, info = 0
    cdef int lwork = 2 * k + k * k
    cdef int lrwork = 1 + 5 * k + 2 * k * k
    cdef int liwork = 3 + 5 * k
    work_arr = np.empty(lwork, dtype=np.complex128)
    rwork_arr = np.empty(lrwork, dtype=np.float64)
    iwork_arr = np.empty(liwork, dtype=np.intc)
    cdef double complex[::1] work = work_arr
    cdef double[::1] rwork = rwork_arr
    cdef int[::1] iwork = iwork_arr
    cdef char jobz = b'V'
    cdef char uplo = b'L'
    zheevd(&jobz, &uplo, &n, &h[0, 0], &lda, &mu[0], &work[0], &lwork,
           &rwork[0], &lrwork, &iwork[0], &liwork, &info)
    if info != 0:
        raise RuntimeError(f"zheevd failed with info={info}")
    return 0


cdef void _zmm(char ta, char tb, int m, int n, int kk,
               double complex *a, int lda, double complex *b, int ldb,
               double complex *c, int ldc) noexcept:
    cdef double complex one = 1.0
    cdef double complex zero = 0.0
    zgemm(&ta, &tb, &m, &n, &kk, &one, a, &lda, b, &ldb, &zero, c, &ldc)


cdef double _entropy_terms(double complex[::1, :] c, double[::1] wlog,
                           int nrows, int k) noexcept:
    # returns f in bits; wlog[i] receives ln(w_i) (0 for empty members)
    cdef int i, m
    cdef double p, w, acc = 0.0
    cdef double complex z
    for i in range(k):
        w = 0.0
        for m in range(nrows):
            z = c[m, i]
            p = z.real * z.real + z.imag * z.imag
            w += p
            if p > _TINY:
                acc -= p * log(p)
        if w > _TINY:
            wlog[i] = log(w)
            acc += w * wlog[i]
        else:
            wlog[i] = 0.0
    return acc / _LN2


def avg_ent_isometry(amp, u):
    """Average entanglement (bits) of the decomposition picked by isometry u."""
    a_arr = np.asfortranarray(amp, dtype=np.complex128)
    u_arr = np.asfortranarray(u, dtype=np.complex128)
    cdef double complex[::1, :] a = a_arr
    cdef double complex[::1, :] uv = u_arr
    cdef int nrows = a.shape[0]
    cdef int q = a.shape[1]
    cdef int k = uv.shape[0]
    if uv.shape[1] != q:
        raise ValueError("isometry columns must match the root-factor rank")
    c_arr = np.empty((nrows, k), dtype=np.complex128, order="F")
    wlog_arr = np.empty(k, dtype=np.float64)
    cdef double complex[::1, :] c = c_arr
    cdef double[::1] wlog = wlog_arr
    _zmm(b'N', b'C', nrows, k, q, &a[0, 0], nrows, &uv[0, 0], k, &c[0, 0], nrows)
    return _entropy_terms(c, wlog, nrows, k)


def avg_ent(amp, theta, int k, int q):
    """Objective only, at exp-map parameters theta."""
    return _eval(amp, theta, k, q, None)


def avg_ent_grad(amp, theta, int k, int q):
    """Objective and its exact gradient in the theta parameters."""
    grad = np.empty(k * k, dtype=np.float64)
    f = _eval(amp, theta, k, q, grad)
    return f, grad


def _eval(amp, theta, int k, int q, grad_out):
    a_arr = np.asfortranarray(amp, dtype=np.complex128)
    t_arr = np.ascontiguousarray(theta, dtype=np.float64)
    cdef double complex[::1, :] a = a_arr
    cdef double[::1] t = t_arr
    cdef int nrows = a.shape[0]
    if a.shape[1] != q or t.shape[0] != k * k:
        raise ValueError("inconsistent kernel dimensions")
    if q > k:
        raise ValueError("need decomposition length k >= rank q")

    s_arr = np.empty((k, k), dtype=np.complex128, order="F")
    mu_arr = np.empty(k, dtype=np.float64)
    t1_arr = np.empty((k, k), dtype=np.complex128, order="F")
    u_arr = np.empty((k, k), dtype=np.complex128, order="F")
    c_arr = np.empty((nrows, k), dtype=np.complex128, order="F")
    wlog_arr = np.empty(k, dtype=np.float64)
    cdef double complex[::1, :] s = s_arr
    cdef double[::1] mu = mu_arr
    cdef double complex[::1, :] t1 = t1_arr
    cdef double complex[::1, :] u = u_arr
    cdef double complex[::1, :] c = c_arr
    cdef double[::1] wlog = wlog_arr

    cdef int i, j, m, idx
    cdef double f, p, fac, hd
    cdef double complex z, ph

    _fill_herm(t, s, k)
    _eigh(s, mu, k)

    # U = S diag(e^{i mu}) S^H
    for j in range(k):
        ph = cos(mu[j]) + sin(mu[j]) * 1j
        for i in range(k):
            t1[i, j] = s[i, j] * ph
    _zmm(b'N', b'C', k, k, k, &t1[0, 0], k, &s[0, 0], k, &u[0, 0], k)

    # member coefficients C = A (U[:, :q])^H, then the entropy terms
    _zmm(b'N', b'C', nrows, k, q, &a[0, 0], nrows, &u[0, 0], k, &c[0, 0], nrows)
    f = _entropy_terms(c, wlog, nrows, k)
    if grad_out is None:
        return f

    # overwrite C with W = (log2 w_i - log2 P_mi) * C, the objective's
    # derivative pulled back to the coefficients
    for i in range(k):
        for m in range(nrows):
            z = c[m, i]
            p = z.real * z.real + z.imag * z.imag
            if p > _TINY:
                c[m, i] = z * ((wlog[i] - log(p)) / _LN2)
            else:
                c[m, i] = 0.0

    gu_arr = np.zeros((k, k), dtype=np.complex128, order="F")
    k1_arr = np.empty((k, k), dtype=np.complex128, order="F")
    k2_arr = np.empty((k, k), dtype=np.complex128, order="F")
    cdef double complex[::1, :] gu = gu_arr
    cdef double complex[::1, :] k1 = k1_arr
    cdef double complex[::1, :] k2 = k2_arr
    cdef double[::1] grad = grad_out

    # Euclidean gradient w.r.t. u, embedded in a k x k block
    _zmm(b'C', b'N', k, q, nrows, &c[0, 0], nrows, &a[0, 0], nrows, &gu[0, 0], k)

    # pull back through the exponential map: Z = S ((S^H GU S) * conj(Phi)) S^H
    # with Phi the divided differences of e^{i mu}
    _zmm(b'C', b'N', k, k, k, &s[0, 0], k, &gu[0, 0], k, &k1[0, 0], k)
    _zmm(b'N', b'N', k, k, k, &k1[0, 0], k, &s[0, 0], k, &k2[0, 0], k)
    for j in range(k):
        for i in range(k):
            hd = 0.5 * (mu[i] - mu[j])
            fac = 1.0 if hd == 0.0 else sin(hd) / hd
            ph = cos(0.5 * (mu[i] + mu[j])) - sin(0.5 * (mu[i] + mu[j])) * 1j
            k2[i, j] = k2[i, j] * ph * fac
    _zmm(b'N', b'N', k, k, k, &s[0, 0], k, &k2[0, 0], k, &k1[0, 0], k)
    _zmm(b'N', b'C', k, k, k, &k1[0, 0], k, &s[0, 0], k, &gu[0, 0], k)

    for i in range(k):
        grad[i] = 2.0 * gu[i, i].imag
    idx = k
    for i in range(k):
        for j in range(i + 1, k):
            grad[idx] = 2.0 * (gu[i, j].real - gu[j, i].real)
            grad[idx + 1] = 2.0 * (gu[i, j].imag + gu[j, i].imag)
            idx += 2
    return f
