"""Numerical machinery: kernels, Hardy-quotient minimization, deficiency shooting."""
