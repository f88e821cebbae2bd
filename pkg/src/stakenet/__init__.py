"""Social network analysis of ERP-project internal stakeholder networks."""

__version__ = "0.1.0"

from .cohesion import (
    CliqueSet,
    FragilityReport,
    bottleneck_ranking,
    clique_co_membership,
    fragility,
    maximal_cliques,
    mediators,
)
from .errors import StakenetError
from .ingest import (
    EdgeRecord,
    InterviewGraph,
    MergePolicy,
    merge_interviews,
    parse_interview_graph,
    tally_critical_votes,
)
from .metrics import (
    CentralityReport,
    DistanceMatrix,
    betweenness_centrality,
    centrality_report,
    closeness_centrality,
    degree_centrality,
    enumerate_betweenness,
    geodesic_distances,
)
from .network import (
    OrgGroup,
    RelationEdge,
    StakeholderNetwork,
    StakeholderNode,
    TieType,
    build_network,
    from_sociomatrix,
    neighbors,
    symmetrize,
    to_sociomatrix,
)
from .synthesis import (
    ConflictRecord,
    CriticalityScore,
    GenericModel,
    ProjectPhase,
    RoleAliasTable,
    aggregate_generic_model,
    canonicalize_roles,
    criticality_scores,
    match_conflicts,
    phase_coverage_check,
    phase_critical_roles,
    tie_matrices,
)

__all__ = [
    "CentralityReport",
    "CliqueSet",
    "ConflictRecord",
    "CriticalityScore",
    "DistanceMatrix",
    "EdgeRecord",
    "FragilityReport",
    "GenericModel",
    "InterviewGraph",
    "MergePolicy",
    "OrgGroup",
    "ProjectPhase",
    "RelationEdge",
    "RoleAliasTable",
    "StakeholderNetwork",
    "StakeholderNode",
    "StakenetError",
    "TieType",
    "aggregate_generic_model",
    "betweenness_centrality",
    "bottleneck_ranking",
    "build_network",
    "canonicalize_roles",
    "centrality_report",
    "clique_co_membership",
    "closeness_centrality",
    "criticality_scores",
    "degree_centrality",
    "enumerate_betweenness",
    "fragility",
    "from_sociomatrix",
    "geodesic_distances",
    "match_conflicts",
    "maximal_cliques",
    "mediators",
    "merge_interviews",
    "neighbors",
    "parse_interview_graph",
    "phase_coverage_check",
    "phase_critical_roles",
    "symmetrize",
    "tally_critical_votes",
    "tie_matrices",
    "to_sociomatrix",
]
