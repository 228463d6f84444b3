//! Exact symbolic verification of additive group actions on affine
//! varieties: polynomial arithmetic over `Q`, Gröbner bases, presented
//! quotient rings with inverted variables and roots of unity, locally
//! nilpotent derivations and their exponentials, affine modifications,
//! and a scenario-driven batch checker.

pub mod constructions;
pub mod derivation;
pub mod expr;
pub mod ideal;
pub mod linalg;
pub mod modification;
pub mod order;
pub mod poly;
pub mod report;
pub mod scenario;
pub mod scheme;
pub mod suite;

pub use derivation::Derivation;
pub use expr::{parse_poly, ExprError};
pub use ideal::{Basis, Budget, EngineError, Ideal};
pub use order::MonomialOrder;
pub use poly::{Poly, PolyError, VarTable};
pub use report::{Report, Status};
pub use scheme::{Morphism, Scheme, SchemeError};
