"""
Backend package for the de Sitter Huygens tail toolkit: special functions,
kernels, Cauchy-problem solutions and tail experiments.
"""
