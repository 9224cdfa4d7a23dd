pub mod algebra;
pub mod classify;
pub mod curve;
pub mod decouple;
pub mod enumerate;
pub mod group;
pub mod model;
