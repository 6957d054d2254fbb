# Compiled Monte Carlo path kernel. Contract and arithmetic order mirror
# _mc_numpy.run_block / run_block_store; see that module for documentation.
# One-factor runs pass zeta=0, rho=0 through the same expressions.

from libc.math cimport exp, sqrt

import numpy as np


def run_block(double[::1] l, double[::1] m, double[:, :, ::1] draws,
              double beta, double gamma, double sigma, double zeta, double rho,
              double delta):
    cdef Py_ssize_t n = l.shape[0]
    cdef Py_ssize_t n_steps = draws.shape[1]
    cdef double sq = sqrt(delta)
    cdef double s2 = sigma * sigma
    cdef double corr = sqrt(max(1.0 - rho * rho, 0.0))
    cdef double half_l = 0.5 * s2 * delta
    cdef double half_dt = 0.5 * delta
    cdef double bd = beta * delta
    cdef double gd = gamma * delta
    cdef double ssq = sigma * sq
    cdef double zsq = zeta * sq
    cdef double trsz = 2.0 * rho * sigma * zeta
    cdef double z2 = zeta * zeta
    cdef long long floor_count = 0
    cdef double min_l = np.inf
    cdef double min_m = np.inf
    cdef Py_ssize_t i, k
    cdef double li, mi, xl, xm, A, z, b, eta2, ln, mn

    with nogil:
        for i in range(n):
            li = l[i]
            mi = m[i]
            if li < min_l:
                min_l = li
            if mi < min_m:
                min_m = mi
            for k in range(n_steps):
                z = draws[i, k, 0]
                b = rho * z + corr * draws[i, k, 1]
                xl = exp(-li)
                xm = exp(-mi)
                A = bd + ssq * z
                eta2 = s2 * xl * xl - trsz * xl + z2
                ln = li + A * xm + half_l * (xm * xm)
                mn = mi + gd - A * xl + zsq * b + half_dt * eta2
                if ln < 0.0:
                    ln = 0.0
                    floor_count += 1
                if mn < 0.0:
                    mn = 0.0
                    floor_count += 1
                li = ln
                mi = mn
                if li < min_l:
                    min_l = li
                if mi < min_m:
                    min_m = mi
            l[i] = li
            m[i] = mi
    return floor_count, min_l, min_m


def run_block_store(double[::1] l, double[::1] m, double[:, :, ::1] draws,
                    double beta, double gamma, double sigma, double zeta, double rho,
                    double delta, double[:, ::1] l_paths, double[:, ::1] m_paths):
    cdef Py_ssize_t n = l.shape[0]
    cdef Py_ssize_t n_steps = draws.shape[1]
    cdef double sq = sqrt(delta)
    cdef double s2 = sigma * sigma
    cdef double corr = sqrt(max(1.0 - rho * rho, 0.0))
    cdef double half_l = 0.5 * s2 * delta
    cdef double half_dt = 0.5 * delta
    cdef double bd = beta * delta
    cdef double gd = gamma * delta
    cdef double ssq = sigma * sq
    cdef double zsq = zeta * sq
    cdef double trsz = 2.0 * rho * sigma * zeta
    cdef double z2 = zeta * zeta
    cdef long long floor_count = 0
    cdef double min_l = np.inf
    cdef double min_m = np.inf
    cdef Py_ssize_t i, k
    cdef double li, mi, xl, xm, A, z, b, eta2, ln, mn

    with nogil:
        for i in range(n):
            li = l[i]
            mi = m[i]
            if li < min_l:
                min_l = li
            if mi < min_m:
                min_m = mi
            for k in range(n_steps):
                z = draws[i, k, 0]
                b = rho * z + corr * draws[i, k, 1]
                xl = exp(-li)
                xm = exp(-mi)
                A = bd + ssq * z
                eta2 = s2 * xl * xl - trsz * xl + z2
                ln = li + A * xm + half_l * (xm * xm)
                mn = mi + gd - A * xl + zsq * b + half_dt * eta2
                if ln < 0.0:
                    ln = 0.0
                    floor_count += 1
                if mn < 0.0:
                    mn = 0.0
                    floor_count += 1
                li = ln
                mi = mn
                l_paths[i, k + 1] = li
                m_paths[i, k + 1] = mi
                if li < min_l:
                    min_l = li
                if mi < min_m:
                    min_m = mi
            l[i] = li
            m[i] = mi
    return floor_count, min_l, min_m
