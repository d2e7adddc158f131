//! Planted instances with known solutions and exact small-case oracles.

mod oracle;
mod plant;

pub use oracle::{scalar_oracle, symbolic_det_oracle};
pub use plant::{det_scale, plant_instance, random_integer_polynomial, PlantedInstance, Planter};
