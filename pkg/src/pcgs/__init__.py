"""Parallel communicating grammar systems, counter/register machines and the compilers between them."""

__version__ = "0.1.0"
