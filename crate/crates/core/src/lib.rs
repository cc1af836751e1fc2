pub mod algebra;
pub mod angles;
pub mod classify;
pub mod error;
pub mod families;
pub mod io;
pub mod model;
pub mod numerics;
pub mod stabilizers;
pub mod subspace;
