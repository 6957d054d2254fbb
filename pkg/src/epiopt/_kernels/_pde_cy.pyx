# Compiled ADI time-stepping kernel. Same contract and floating-point
# operation order as _pde_numpy.douglas_run, so the two backends agree to the
# last bit (exp-free arithmetic; contraction disabled at compile time).

import numpy as np


def douglas_run(double[:, ::1] V_in,
                double[:, ::1] ax_lo, double[:, ::1] ax_di, double[:, ::1] ax_up,
                double[:, ::1] ay_lo, double[:, ::1] ay_di, double[:, ::1] ay_up,
                double[:, ::1] cxy4,
                double[:, ::1] fx_lo, double[:, ::1] fx_cp, double[:, ::1] fx_den,
                double[:, ::1] fy_lo, double[:, ::1] fy_cp, double[:, ::1] fy_den,
                double dtau, double theta, Py_ssize_t n_steps):
    cdef Py_ssize_t nx = V_in.shape[0]
    cdef Py_ssize_t ny = V_in.shape[1]
    V_arr = np.array(V_in, dtype=np.float64, copy=True)
    axv_arr = np.empty((nx, ny))
    ayv_arr = np.empty((nx, ny))
    rhs_arr = np.empty((nx, ny))
    cdef double[:, ::1] V = V_arr
    cdef double[:, ::1] axv = axv_arr
    cdef double[:, ::1] ayv = ayv_arr
    cdef double[:, ::1] rhs = rhs_arr
    cdef double th = theta * dtau
    cdef Py_ssize_t i, j, step
    cdef double v, cv, y0

    with nogil:
        for step in range(n_steps):
            # explicit operator applications (same accumulation order as numpy)
            for i in range(nx):
                for j in range(ny):
                    v = ax_di[i, j] * V[i, j]
                    if i > 0:
                        v = v + ax_lo[i, j] * V[i - 1, j]
                    if i < nx - 1:
                        v = v + ax_up[i, j] * V[i + 1, j]
                    axv[i, j] = v
            for i in range(nx):
                for j in range(ny):
                    v = ay_di[i, j] * V[i, j]
                    if j > 0:
                        v = v + ay_lo[i, j] * V[i, j - 1]
                    if j < ny - 1:
                        v = v + ay_up[i, j] * V[i, j + 1]
                    ayv[i, j] = v
            # rhs of the first sweep: V + dtau*(Ax+Ay+Cross)V - th*Ax V
            for i in range(nx):
                for j in range(ny):
                    if 0 < i < nx - 1 and 0 < j < ny - 1:
                        cv = cxy4[i, j] * (V[i + 1, j + 1] - V[i + 1, j - 1]
                                           - V[i - 1, j + 1] + V[i - 1, j - 1])
                    else:
                        cv = 0.0
                    y0 = V[i, j] + dtau * ((axv[i, j] + ayv[i, j]) + cv)
                    rhs[i, j] = y0 - th * axv[i, j]
            # x sweep: forward elimination then back substitution along axis 0
            for j in range(ny):
                rhs[0, j] = rhs[0, j] / fx_den[0, j]
            for i in range(1, nx):
                for j in range(ny):
                    rhs[i, j] = (rhs[i, j] - fx_lo[i, j] * rhs[i - 1, j]) / fx_den[i, j]
            for i in range(nx - 2, -1, -1):
                for j in range(ny):
                    rhs[i, j] = rhs[i, j] - fx_cp[i, j] * rhs[i + 1, j]
            # subtract th*Ay V, then y sweep along axis 1
            for i in range(nx):
                for j in range(ny):
                    rhs[i, j] = rhs[i, j] - th * ayv[i, j]
            for i in range(nx):
                rhs[i, 0] = rhs[i, 0] / fy_den[i, 0]
                for j in range(1, ny):
                    rhs[i, j] = (rhs[i, j] - fy_lo[i, j] * rhs[i, j - 1]) / fy_den[i, j]
                for j in range(ny - 2, -1, -1):
                    rhs[i, j] = rhs[i, j] - fy_cp[i, j] * rhs[i, j + 1]
            # clamp and commit
            for i in range(nx):
                for j in range(ny):
                    v = rhs[i, j]
                    V[i, j] = v if v > 0.0 else 0.0
    return V_arr
