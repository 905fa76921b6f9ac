//! Maximal arcs in PG(2, 2^t), the resolvable Steiner 2-designs they cut
//! out, mutually compatible resolutions of those designs, reconstruction of
//! the ambient projective plane from a largest compatible family, and
//! p-ranks of incidence matrices.

pub mod design;
pub mod format;
pub mod geometry;
pub mod gf;
pub mod incidence;
pub mod pipeline;
pub mod rank;
pub mod reconstruct;
pub mod search;

pub use design::{ArcDesign, ArcParams, PairKind, ParallelClass, Resolution, SteinerDesign};
pub use geometry::{Arc, ProjectivePlane};
pub use gf::Field;
pub use incidence::IncidenceStructure;
