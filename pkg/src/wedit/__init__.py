"""Weighted edit distance with cheap substitutions.

Indels cost 1, substitutions cost 1/a.  The package provides exact solvers
(`eda_exact`, `bicriteria_exact`), gap-deciding approximations (`approx_eda`,
`bicriteria_approx`) built on a sublinear-probe approximate LCE index,
hardness gadget generators (`gadgets`), and independent brute-force oracles
(`oracle`) everything is tested against.
"""

__version__ = "0.1.0"

from .core import (ByteText, ProbeCounter, RandomSource, ScaledCost,  # noqa: F401
                   Threshold, load_text, parse_threshold)
