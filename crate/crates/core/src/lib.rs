//! Exact finite models for metric value sets, quasimetric functions, the
//! topologies they induce, quasiuniform bases, and the entourage-value-set
//! characterization, all verified by brute force on finite carriers.

pub mod character;
pub mod dot;
pub mod io;
pub mod mvs;
pub mod qmetric;
pub mod quniform;
pub mod report;
pub mod set;
pub mod topo;

pub use character::{
    convexify_stage, convexify_until, embed_full, entourage_mvs, full_convex_report,
    metrize_from_base, roundtrip, CharError, ConvexifyOutcome, Embedding, EntourageMvs,
    FullConvexReport, MetrizeOutcome, RoundtripOutcome,
};
pub use mvs::{enumerate_mvs, HomError, MvsAxiom, MvsClass, MvsError, MvsHom, MvsTable};
pub use qmetric::{
    alexandrov_metrize, canonical_metric_space, clique_partition_space, glue, product,
    zero_block_space, BallKind, BallSystem, QmError, QmSpace,
};
pub use quniform::{
    base_from_qm, base_topology, compare_bases, generates_uniformity, in_quasiuniformity,
    validate_base, BaseComparison, BaseError, BaseFlags, Entourage, QmBase,
};
pub use report::{Clause, Report, Status};
pub use set::PointSet;
pub use topo::{
    enumerate_topologies, induced_by_maps, is_open_via_cover, point_finite_refinement,
    subbase_reduction_equivalent, AxiomCheck, CoverData, EnumeratedTopologies, FiniteTopology,
    MapTarget, NbhdFlags, NbhdSystem, TopoError,
};
