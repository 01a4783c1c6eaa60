//! Split Kac-Moody groups `SL_n(F[t, t⁻¹])` and `SU_3` over small fields.

pub mod cells;
pub mod split;
pub mod su3;

pub use cells::{AffinePermutation, BruhatDecomposition, CellEngine};
pub use split::{AffineRoot, SplitGroup};
pub use su3::HermitianDescentDatum;
