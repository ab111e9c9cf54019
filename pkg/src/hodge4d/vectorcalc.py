"""Classical vector calculus on exact coefficient fields.

These helpers only use field differentiation and arithmetic; they never touch
the exterior-algebra machinery, so they serve as the independent oracle for
the component-wise expansion checks.
"""

from __future__ import annotations

from .fields import T, X, Y, Z


def gradient(u):
    return (u.diff(X), u.diff(Y), u.diff(Z))


def divergence(v):
    return v[0].diff(X) + v[1].diff(Y) + v[2].diff(Z)


def curl(v):
    return (
        v[2].diff(Y) - v[1].diff(Z),
        v[0].diff(Z) - v[2].diff(X),
        v[1].diff(X) - v[0].diff(Y),
    )


def cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def scale(v, factor):
    return tuple(factor * c for c in v)


def laplacian(u):
    return u.diff(X).diff(X) + u.diff(Y).diff(Y) + u.diff(Z).diff(Z)


def time_derivative(u, order=1):
    for _ in range(order):
        u = u.diff(T)
    return u
