"""Euler angles, rotation matrices and the 2D affine slice map.

Orientation convention
----------------------
A tilt is an Euler triple ``(phi, theta, psi)`` in degrees, composed as
``R = Z(phi) @ Y(theta) @ X(psi)`` with the right-handed *active* basic
rotations::

    Z(a) = [[cos a, -sin a, 0],     Y(a) = [[ cos a, 0, sin a],
            [sin a,  cos a, 0],             [     0, 1,     0],
            [    0,      0, 1]]             [-sin a, 0, cos a]]

    X(a) = [[1,     0,      0],
            [0, cos a, -sin a],
            [0, sin a,  cos a]]

Object coordinates ``(u, v, w)`` and detector/beam coordinates ``(x, y, z)``
are related by ``(u, v, w) = R @ (x, y, z)``; the beam runs along ``z``.

Index bookkeeping: the one-based element ``R_{i,j}`` used in the
literature is ``matrix[i - 1, j - 1]`` here. This is the only place the
translation happens; everything else works with 0-based numpy indexing.
"""
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError

__all__ = [
    "EulerTriple",
    "AffineSliceMap",
    "as_euler",
    "basic_rotation",
    "rotation_from_euler",
    "element",
    "slice_map",
]


@dataclass(frozen=True)
class EulerTriple:
    """ZYX Euler angles in degrees, stored exactly as given."""

    phi: float = 0.0
    theta: float = 0.0
    psi: float = 0.0

    def __post_init__(self):
        for name in ("phi", "theta", "psi"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise InvalidArgumentError(f"Euler angle {name} must be finite, got {value}")
            object.__setattr__(self, name, value)

    def as_tuple(self):
        return (self.phi, self.theta, self.psi)


def as_euler(e):
    """Coerce a triple-like or an :class:`EulerTriple` to :class:`EulerTriple`."""
    if isinstance(e, EulerTriple):
        return e
    values = np.asarray(e, dtype=float).ravel()
    if values.shape != (3,):
        raise InvalidArgumentError(f"expected three Euler angles, got shape {values.shape}")
    return EulerTriple(*values)


def basic_rotation(axis, angle_deg):
    """Active right-handed rotation by ``angle_deg`` about ``axis`` ('x', 'y' or 'z')."""
    a = np.deg2rad(angle_deg)
    c, s = np.cos(a), np.sin(a)
    if axis == "z":
        return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    if axis == "y":
        return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
    if axis == "x":
        return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])
    raise InvalidArgumentError(f"unknown rotation axis {axis!r}")


def rotation_from_euler(e):
    """Rotation matrix ``Z(phi) @ Y(theta) @ X(psi)`` for a ZYX Euler triple.

    Parameters
    ----------
    e : EulerTriple or sequence of 3 floats
        Angles in degrees.

    Returns
    -------
    numpy.ndarray
        A 3x3 orthonormal matrix with determinant +1.
    """
    e = as_euler(e)
    return basic_rotation("z", e.phi) @ basic_rotation("y", e.theta) @ basic_rotation("x", e.psi)


def element(r, i, j):
    """One-based element ``R_{i,j}`` of a rotation matrix."""
    return r[i - 1, j - 1]


@dataclass(frozen=True)
class AffineSliceMap:
    """Map from object voxel ``(u, v, w)`` to detector position ``(x, y)``.

    ``(x, y) = linear @ (u, v) + drift * w``, i.e. the first two rows of
    ``R.T @ (u, v, w)``. Every ``w``-slice is the ``w = 0`` slice shifted
    by ``drift * w``.
    """

    linear: np.ndarray
    drift: np.ndarray

    def __call__(self, u, v, w):
        u, v, w = np.asarray(u, float), np.asarray(v, float), np.asarray(w, float)
        x = self.linear[0, 0] * u + self.linear[0, 1] * v + self.drift[0] * w
        y = self.linear[1, 0] * u + self.linear[1, 1] * v + self.drift[1] * w
        return x, y


def slice_map(r):
    """Build the :class:`AffineSliceMap` of a rotation matrix."""
    r = np.asarray(r, dtype=float)
    linear = np.array(
        [
            [element(r, 1, 1), element(r, 2, 1)],
            [element(r, 1, 2), element(r, 2, 2)],
        ]
    )
    drift = np.array([element(r, 3, 1), element(r, 3, 2)])
    linear.setflags(write=False)
    drift.setflags(write=False)
    return AffineSliceMap(linear, drift)
