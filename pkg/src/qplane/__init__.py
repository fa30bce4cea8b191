"""Exact and numerical K-theory of q-normal operator algebras.

The algebra is the crossed product ``C_0(X) x Z`` for a q-invariant spectral
set ``X``; the package builds projections, evaluates their index pairings
and decomposes classes in an explicit generator basis.
"""

__version__ = "0.1.0"

from .crossed import CrossedElement, CrossedMatrix, ev0, evinf, is_member  # noqa: E402
from .errors import (  # noqa: E402
    ConfigError, ConvergenceError, LatticeError, MembershipError, NonIntegralError,
    QPlaneError, SpectrumError, StoreError,
)
from .funcspace import Interval, SmoothFunction, StepFunction  # noqa: E402
from .ktheory import (  # noqa: E402
    KClassVector, KGroupReport, RankFunction, decompose_class, kgroups, pairing_matrix,
    rank_decompose, reconstruct, verify_identity,
)
from .pairing import KHomClass, PairingResult, pair, pairing_vector, telescoping_check  # noqa: E402
from .projlib import (  # noqa: E402
    bott, complement, direct_sum, indicator, powers_rieffel, unit, verify_projection,
)
from .rep import TruncatedRep, rep_pi0_piinf, rep_pi_y, shift_model_check  # noqa: E402
from .spectral import GapStructure, ScaledRational, SpectralSet, gap_structure  # noqa: E402
