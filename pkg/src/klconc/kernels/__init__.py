"""Hot-kernel backend selection.

Prefers the compiled Cython extension (``_speedups``) and falls back to
the pure-Python/numpy twin (``_pyfallback``) when the extension was not
built.  Both expose the same functions with identical semantics; the
module attribute ``BACKEND`` names the one in use.
"""

try:
    from . import _speedups as impl
except ImportError:  # extension not built; pure-Python fallback
    from . import _pyfallback as impl

BACKEND = impl.BACKEND

enumerate_divergence = impl.enumerate_divergence
binom_kl_mgf = impl.binom_kl_mgf
binom_half_mgf = impl.binom_half_mgf
binom_kl_mgf_grid = impl.binom_kl_mgf_grid
binom_half_mgf_grid = impl.binom_half_mgf_grid
