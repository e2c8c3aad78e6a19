//! Monomials, formal sums, F2 linear algebra and graded F[U]-modules.

mod element;
mod f2;
mod monomial;
mod umodule;

pub use element::{GenId, ModuleElement, Term};
pub use f2::{sparse_rank, xor_sorted, Echelon, F2Matrix, RankKernelImage, SparseVec};
pub use monomial::{Monomial, Var};
pub use umodule::{AlgebraError, Bigrading, BigradedUModule, Torsion};
