"""patchgate: stability measurement and CI admission gating for
LLM-generated bug fixes.
"""

from .metrics import (
    SimilarityStats,
    SuccessCategory,
    categorize,
    levenshtein_distance,
    levenshtein_similarity,
    oer,
    pairwise_similarity_stats,
    success_stats,
)
from .corpus import Problem, TestCase, load_corpus, load_problem, validate_problem
from .generation import (
    Cassette,
    PatchCandidate,
    SamplingPlan,
    extract_code,
    render_prompt,
    sample_patches,
)
from .oracle import (
    CaseOutcome,
    Limits,
    OutcomeStatus,
    StubExecutor,
    SubprocessExecutor,
    TrialResult,
    compare_values,
    evaluate_trial,
    outcome_oer,
    run_program,
)
from .analysis import (
    OERRow,
    RunReport,
    StabilityRow,
    build_oer_rows,
    build_report,
    build_stability_rows,
    emit_heatmap_svg,
    export_report,
    general_oer,
)
from .gate import (
    GateDecision,
    PatchCluster,
    SelectionPolicy,
    Verdict,
    cluster_patches,
    decide,
    select_patch,
)

__version__ = "0.1.0"
