"""Mode-stability analysis of monophonic MIDI melodies.

Bars are reduced to candidate modes by mask exclusion, a piece-wide mode
tendency picks one mode per bar, and abnormal mode changes between bars
give a score in [0, 1].
"""

from .batch import AnalysisConfig, ReportRow, analyze_file, batch_analyze
from .kernels import BACKEND
from .midi import (
    Bar,
    melody_bars,
    NoteEvent,
    TimeGrid,
    TrackInfo,
    TrackRole,
    classify_tracks,
    clean_notes,
    parse_smf,
    read_smf,
    segment_bars,
    write_smf,
)
from .modal import (
    UNKNOWN,
    CandidateSet,
    TendencyRanking,
    assign_bar_modes,
    candidate_modes,
    tendency_ranking,
)
from .scoring import (
    analyze_bars,
    Direction,
    Label,
    PolicyKind,
    ProvenanceScore,
    TransitionPolicy,
    abnormal_transitions,
    classify,
    melody_score,
)
from .theory import (
    MAJOR,
    MINOR,
    Mode,
    fifths_distance,
    is_closely_related,
    major_mask,
    major_scale,
    mask_pitch_classes,
    minor_mask,
    minor_scale,
)

__version__ = "0.1.0"

__all__ = [
    "analyze_bars",
    "melody_bars",
    "AnalysisConfig",
    "BACKEND",
    "Bar",
    "CandidateSet",
    "Direction",
    "Label",
    "MAJOR",
    "MINOR",
    "Mode",
    "NoteEvent",
    "PolicyKind",
    "ProvenanceScore",
    "ReportRow",
    "TendencyRanking",
    "TimeGrid",
    "TrackInfo",
    "TrackRole",
    "TransitionPolicy",
    "UNKNOWN",
    "abnormal_transitions",
    "analyze_file",
    "assign_bar_modes",
    "batch_analyze",
    "candidate_modes",
    "classify",
    "classify_tracks",
    "clean_notes",
    "fifths_distance",
    "is_closely_related",
    "major_mask",
    "major_scale",
    "mask_pitch_classes",
    "melody_score",
    "minor_mask",
    "minor_scale",
    "parse_smf",
    "read_smf",
    "segment_bars",
    "tendency_ranking",
    "write_smf",
]
