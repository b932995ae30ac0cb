//! Designs, codes and association schemes on the unit sphere of `ℂ^d`.

pub mod error;
pub mod poly;
pub mod space;
pub mod design;
pub mod bounds;
pub mod grouprep;
pub mod construct;
pub mod scheme;

pub use error::{Error, Result};
pub use poly::{BiDegree, JacobiExpansion, LowerSet, ZonalPoly};
pub use space::{AngleSet, PointSet};
pub use design::DesignReport;
pub use bounds::{Annihilator, Certificate, LpMode, TightnessReport};
pub use grouprep::{FiniteUnitaryGroup, MolienKind, MolienTable};
pub use scheme::{Eigenmatrices, RelationPartition, SchemeReport};
pub use construct::MubFamily;
