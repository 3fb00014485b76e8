import numpy
import scipy.linalg
import sympy
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from preserver_lab.algebra.components.scalar import to_complex


def domain_matrix(rows, domain):
    """ DomainMatrix from rows that already hold elements of `domain`. """
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    return DomainMatrix([list(row) for row in rows], (nrows, ncols), domain)


def exact_pivots(rows, domain):
    """ Pivot columns of the reduced row echelon form; they index a basis of the column space. """
    if not rows or not rows[0]:
        return ()
    _, pivots = domain_matrix(rows, domain).rref()
    return tuple(pivots)


def numeric_pivots(matrix, tolerance):
    """ Numerical rank by singular values, basis columns by QR with column pivoting. """
    matrix = numpy.asarray(matrix, dtype=complex)
    if matrix.size == 0:
        return ()
    sigma = numpy.linalg.svd(matrix, compute_uv=False)
    rank = int(numpy.sum(sigma > tolerance * max(1.0, sigma[0] if len(sigma) else 0.0)))
    if rank == 0:
        return ()
    _, _, perm = scipy.linalg.qr(matrix, pivoting=True)
    return tuple(sorted(int(p) for p in perm[:rank]))


def symmetric_inertia(rows):
    """
    (positive, negative, zero) eigenvalue counts of a rational symmetric matrix. The
    characteristic polynomial is real-rooted, so Descartes' rule of signs counts exactly.
    """
    n = len(rows)
    coeffs = domain_matrix(rows, QQ).charpoly()
    zero = 0
    while zero < n and not coeffs[n - zero]:
        zero += 1
    trimmed = coeffs[:n + 1 - zero]
    positive = sign_changes(trimmed)
    negative = sign_changes([c * (-1) ** (len(trimmed) - 1 - k) for k, c in enumerate(trimmed)])
    return positive, negative, zero


def sign_changes(values):
    """ Sign changes along `values`, zeros skipped. """
    signs = [v > 0 for v in values if v]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def to_sympy_matrix(array):
    """ Exact sympy Matrix from an integer or rational array. """
    return sympy.Matrix([[sympy.Rational(x) for x in row] for row in numpy.asarray(array).tolist()])


def pencil_determinant(A, B, C, z, w):
    """ det(zA + wB + C) expanded, by Berkowitz so the expansion stays division free. """
    pencil = z * to_sympy_matrix(A) + w * to_sympy_matrix(B) + to_sympy_matrix(C)
    return sympy.expand(pencil.det(method='berkowitz'))


def rationalize_vector(v, denominator=64):
    """ Nearest rational vector with a fixed denominator, as sympy Rationals. """
    return [sympy.Rational(int(round(float(x) * denominator)), denominator) for x in numpy.real(v)]


def as_complex_matrix(rows):
    return numpy.array([[to_complex(c) for c in row] for row in rows], dtype=complex)
