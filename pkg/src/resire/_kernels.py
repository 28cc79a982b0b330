"""Compiled interpolation loops shared by the projectors.

Gather and scatter evaluate coordinates and weights through the same inline
helper, so they are exact transposes of each other. All loops are serial:
results do not depend on scheduling.
"""
import numba
import numpy as np


@numba.njit(cache=True, inline="always")
def _cell(x, n):
    """Lower neighbor index and fractional offset; a point on the last sample
    uses the cell below with weight one."""
    if n == 1:
        return 0, 0.0
    i = int(np.floor(x))
    if i > n - 2:
        i = n - 2
    return i, x - i


@numba.njit(cache=True)
def affine_gather(image, linear, drift, nz, out):
    """``out[u, v, w] += bilinear(image, slice_map(u, v, w))``, zero off-detector."""
    nx, ny = image.shape
    cx, cy, cz = nx // 2, ny // 2, nz // 2
    for i in range(nx):
        u = i - cx
        for j in range(ny):
            v = j - cy
            bx = linear[0, 0] * u + linear[0, 1] * v
            by = linear[1, 0] * u + linear[1, 1] * v
            for k in range(nz):
                w = k - cz
                x = bx + drift[0] * w + cx
                y = by + drift[1] * w + cy
                if x < 0.0 or x > nx - 1 or y < 0.0 or y > ny - 1:
                    continue
                ix, fx = _cell(x, nx)
                iy, fy = _cell(y, ny)
                ix1 = ix + 1 if nx > 1 else ix
                iy1 = iy + 1 if ny > 1 else iy
                out[i, j, k] += (
                    (1.0 - fx) * (1.0 - fy) * image[ix, iy]
                    + (1.0 - fx) * fy * image[ix, iy1]
                    + fx * (1.0 - fy) * image[ix1, iy]
                    + fx * fy * image[ix1, iy1]
                )


@numba.njit(cache=True)
def affine_scatter(volume, linear, drift, out):
    """Transpose of :func:`affine_gather`: ``out`` accumulates voxel footprints."""
    nx, ny, nz = volume.shape
    cx, cy, cz = nx // 2, ny // 2, nz // 2
    for i in range(nx):
        u = i - cx
        for j in range(ny):
            v = j - cy
            bx = linear[0, 0] * u + linear[0, 1] * v
            by = linear[1, 0] * u + linear[1, 1] * v
            for k in range(nz):
                w = k - cz
                x = bx + drift[0] * w + cx
                y = by + drift[1] * w + cy
                if x < 0.0 or x > nx - 1 or y < 0.0 or y > ny - 1:
                    continue
                ix, fx = _cell(x, nx)
                iy, fy = _cell(y, ny)
                ix1 = ix + 1 if nx > 1 else ix
                iy1 = iy + 1 if ny > 1 else iy
                val = volume[i, j, k]
                out[ix, iy] += (1.0 - fx) * (1.0 - fy) * val
                out[ix, iy1] += (1.0 - fx) * fy * val
                out[ix1, iy] += fx * (1.0 - fy) * val
                out[ix1, iy1] += fx * fy * val


@numba.njit(cache=True)
def plane_sample(grid, axis_x, axis_y, out):
    """Trilinear samples of a centered complex grid on a central plane.

    Output pixel ``(i, j)`` with centered frequencies ``(kx, ky)`` reads the
    grid at ``kx * axis_x + ky * axis_y`` (cycles per sample); points
    outside the grid are zero.
    """
    mx, my, mz = grid.shape
    ox, oy = out.shape
    for i in range(ox):
        # frequencies in output-bin units, rescaled per axis to grid bins
        di = float(i - ox // 2)
        for j in range(oy):
            dj = float(j - oy // 2)
            x = (di * axis_x[0] * (mx / ox) + dj * axis_y[0] * (mx / oy)) + mx // 2
            y = (di * axis_x[1] * (my / ox) + dj * axis_y[1] * (my / oy)) + my // 2
            z = (di * axis_x[2] * (mz / ox) + dj * axis_y[2] * (mz / oy)) + mz // 2
            if x < 0.0 or x > mx - 1 or y < 0.0 or y > my - 1 or z < 0.0 or z > mz - 1:
                out[i, j] = 0.0
                continue
            ix, fx = _cell(x, mx)
            iy, fy = _cell(y, my)
            iz, fz = _cell(z, mz)
            ix1 = ix + 1 if mx > 1 else ix
            iy1 = iy + 1 if my > 1 else iy
            iz1 = iz + 1 if mz > 1 else iz
            gx, gy, gz = 1.0 - fx, 1.0 - fy, 1.0 - fz
            out[i, j] = (
                gx * (gy * (gz * grid[ix, iy, iz] + fz * grid[ix, iy, iz1])
                      + fy * (gz * grid[ix, iy1, iz] + fz * grid[ix, iy1, iz1]))
                + fx * (gy * (gz * grid[ix1, iy, iz] + fz * grid[ix1, iy, iz1])
                        + fy * (gz * grid[ix1, iy1, iz] + fz * grid[ix1, iy1, iz1]))
            )
