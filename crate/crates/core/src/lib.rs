//! Minuscule posets and Schubert varieties, Hibi toric degenerations,
//! Calabi–Yau complete intersections in them, their periods, Picard–Fuchs
//! operators, monodromy and genus-0 BPS numbers.

pub mod bps;
pub mod catalog;
pub mod hibi;
pub mod invariants;
pub mod linalg;
pub mod monodromy;
pub mod ode;
pub mod period;
pub mod poly;
pub mod poset;
pub mod precision;
pub mod quantum;
pub mod schubert;
pub mod series;

pub use bps::{MirrorMapData, YukawaSeries};
pub use invariants::{CicyInstance, InvariantReport};
pub use monodromy::{ContinuationPlan, MonodromyReport, SymplecticNormalization};
pub use ode::{FrobeniusBasis, RiemannScheme, ThetaOperator};
pub use poset::{BoundedPoset, Contraction, DistributiveLattice, Embedding, Heights, Poset, PosetError, PosetJson};
pub use quantum::QuantumConnection;
pub use schubert::{CicyClass, ColoredPoset, DynkinType, RootSystem, SchubertReport, WQLattice};
pub use series::RationalPowerSeries;
