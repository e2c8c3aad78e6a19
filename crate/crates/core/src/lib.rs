//! Minus-flavor grid homology of knots and a chain-level model of the
//! connected-sum quasi-isomorphism `C -> GC(g1) (x) GC(g2) / (U_1 = U_p)`.

pub mod algebra;
pub mod complex;
pub mod connected_sum;
pub mod fixtures;
pub mod grid;
pub mod homology;
pub mod legendrian;
pub mod state;

pub use algebra::{
    Bigrading, BigradedUModule, F2Matrix, GenId, Monomial, ModuleElement, Term, Torsion, Var,
};
pub use complex::{ChainMap, FreeComplex, GridComplex};
pub use grid::{GridDiagram, GridError};
pub use state::State;
