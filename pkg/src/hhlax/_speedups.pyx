# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled term-table evaluation, mirroring the pure-Python kernel exactly.

The arithmetic (repeated multiply/divide per exponent, left-to-right term
accumulation) is kept identical to the fallback so both backends return
bit-identical floats.
"""


def eval_stacked(const double[::1] coeffs,
                 const int[:, ::1] exponents,
                 const int[::1] offsets,
                 const double[::1] vals,
                 double[::1] out):
    """Evaluate a stack of polynomials given as flat term tables.

    Polynomial i is rows offsets[i]:offsets[i+1]; each row holds one term's
    exponent vector, with its coefficient in ``coeffs``.
    """
    cdef Py_ssize_t n_polys = offsets.shape[0] - 1
    cdef Py_ssize_t n_vars = exponents.shape[1]
    cdef Py_ssize_t i, row, var, rep
    cdef int exp
    cdef double acc, term, value

    for i in range(n_polys):
        acc = 0.0
        for row in range(offsets[i], offsets[i + 1]):
            term = coeffs[row]
            for var in range(n_vars):
                exp = exponents[row, var]
                if exp == 0:
                    continue
                value = vals[var]
                if exp > 0:
                    for rep in range(exp):
                        term *= value
                else:
                    for rep in range(-exp):
                        term /= value
            acc += term
        out[i] = acc
