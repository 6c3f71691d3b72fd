"""QR and square-root-free QDRD factorizations for least squares and MIMO detection."""

from .counting import NullCounter, OpCounter, OpCounts
from .detector import (
    METHODS,
    Counterexample,
    DetectionResult,
    LlrResult,
    detect,
    detect_qdrd_unweighted,
    detect_qdrd_weighted,
    detect_qr,
    find_counterexample,
    llr_soft,
    oracle_ml,
)
from .factorization import (
    FullQrFactors,
    QdrdFactors,
    QrFactors,
    SingularMatrixError,
    full_qr_householder,
    qdrd_sqrt_free,
    relate_qdrd_to_qr,
    thin_qr_mgs,
)
from .harness import ExperimentConfig, ExperimentRow, op_report, run_montecarlo, run_pipeline
from .lstsq import LsSolution, back_substitute, back_substitute_unit_diag, solve_ls_qdrd, solve_ls_qr
from .matrix_core import hermitian, matmul, sq_norm2
from .mimo import (
    BitPartition,
    Constellation,
    EnumerationCapError,
    MimoInstance,
    bit_partitions,
    enumerate_vectors,
    make_qam,
    sample_instance,
)

__version__ = "0.1.0"
