"""Collaborative, market-aware task recommendation for competitive crowd workers."""
from .evaluation import EvaluationReport, mre, summarize
from .ingestion import (
    Dataset,
    DatasetError,
    IndicatorTable,
    RegistrationRecord,
    TaskRecord,
    active_workers,
    build_dataset,
    derive_indicators,
    load_dataset,
    load_dataset_dir,
    write_dataset,
)
from .network import CollaborationIndex, build_index, potential_tasks
from .oracle import oracle_recommend
from .pipeline import RecommendationRun, run_recommendation, write_run
from .profile import (
    Belt,
    WorkerProfile,
    avg_proficiency,
    base_duration,
    base_monetary_prize,
    belt_of,
    build_profiles,
    prob_valid_submission,
    proficiency,
    specialty,
    trustworthiness,
)
from .recommender import Recommendation, RecommenderConfig, check_conditions, label, recommend
from .success import (
    SuccessBreakdown,
    avg_proficiency_experience_ratio,
    specialty_participation_ratio,
    success_probability,
    top_k,
)
from .synth import synth_generate

__version__ = "0.1.0"
