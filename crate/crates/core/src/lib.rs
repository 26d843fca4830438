pub mod error;
pub mod group;

pub use error::{Error, Result};
pub use group::{Group, GroupHom, Subgroup, SubgroupLattice};
pub mod gset;
pub mod span;
pub mod burnside;
pub mod semiring;
pub mod mackey;
pub mod duality;
pub mod groupoid;
pub mod operad;
