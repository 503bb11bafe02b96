"""Expected-goals modeling: shot geometry, prior kernels, logistic fits,
and a dynamic HMC sampler, backed by the C++ core."""

try:
    from ._bayesxg import *  # noqa: F401,F403  (installed package layout)
except ImportError:
    from _bayesxg import *  # noqa: F401,F403  (build-tree layout)

__version__ = "0.1.0"
