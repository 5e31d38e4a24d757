"""In-place transposition: square submatrices, and n x 2n / 2n x n matrices
via a row interleave (rho) plus two square transposes."""
from dataclasses import dataclass

import numpy as np
from numba import njit

TILE = 16


@dataclass
class MatrixView:
    """Row-major window into a flat array."""

    base: np.ndarray
    rows: int
    cols: int
    row_stride: int
    offset: int = 0

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0 or self.row_stride < self.cols:
            raise ValueError("bad matrix view shape")
        if self.rows and self.offset + (self.rows - 1) * self.row_stride + self.cols > len(self.base):
            raise IndexError("matrix view exceeds its base array")


@njit(cache=True)
def transpose_square_k(a, off, n, stride):
    for bi in range(0, n, TILE):
        ei = min(bi + TILE, n)
        # diagonal tile
        for i in range(bi, ei):
            for j in range(i + 1, ei):
                x = off + i * stride + j
                y = off + j * stride + i
                t = a[x]
                a[x] = a[y]
                a[y] = t
        # swap the off-diagonal tiles of this tile row with their mirror
        for bj in range(ei, n, TILE):
            ej = min(bj + TILE, n)
            for i in range(bi, ei):
                for j in range(bj, ej):
                    x = off + i * stride + j
                    y = off + j * stride + i
                    t = a[x]
                    a[x] = a[y]
                    a[y] = t


@njit(cache=True)
def permute_rho_k(a, off, zeta, n):
    for i in range(2 * n):
        zeta[i] = a[off + i]
    for i in range(n):
        a[off + i] = zeta[2 * i]
        a[off + i + n] = zeta[2 * i + 1]


@njit(cache=True)
def unpermute_rho_k(a, off, zeta, n):
    for i in range(2 * n):
        zeta[i] = a[off + i]
    for i in range(n):
        a[off + 2 * i] = zeta[i]
        a[off + 2 * i + 1] = zeta[i + n]


@njit(cache=True)
def transpose_n_x_2n_k(a, zeta, n):
    for i in range(n):
        permute_rho_k(a, i * 2 * n, zeta, n)
    transpose_square_k(a, 0, n, 2 * n)
    transpose_square_k(a, n, n, 2 * n)


@njit(cache=True)
def transpose_2n_x_n_k(a, zeta, n):
    transpose_square_k(a, 0, n, 2 * n)
    transpose_square_k(a, n, n, 2 * n)
    for i in range(n):
        unpermute_rho_k(a, i * 2 * n, zeta, n)


def make_scratch(n, dtype=np.uint64):
    return np.empty(2 * n, dtype=dtype)


def _check_scratch(scratch, n):
    if len(scratch) < 2 * n:
        raise ValueError(f"scratch buffer needs {2 * n} elements, has {len(scratch)}")


def transpose_square_sub(view):
    if view.rows != view.cols:
        raise ValueError("submatrix is not square")
    if view.rows:
        transpose_square_k(view.base, view.offset, view.rows, view.row_stride)


def permute_rho(row, scratch, n):
    if len(row) != 2 * n:
        raise ValueError("row must hold 2n elements")
    _check_scratch(scratch, n)
    permute_rho_k(row, 0, scratch, n)


def unpermute_rho(row, scratch, n):
    if len(row) != 2 * n:
        raise ValueError("row must hold 2n elements")
    _check_scratch(scratch, n)
    unpermute_rho_k(row, 0, scratch, n)


def transpose_n_x_2n(data, scratch, n):
    if len(data) != 2 * n * n:
        raise ValueError("matrix must hold 2n^2 elements")
    _check_scratch(scratch, n)
    transpose_n_x_2n_k(data, scratch, n)


def transpose_2n_x_n(data, scratch, n):
    if len(data) != 2 * n * n:
        raise ValueError("matrix must hold 2n^2 elements")
    _check_scratch(scratch, n)
    transpose_2n_x_n_k(data, scratch, n)
