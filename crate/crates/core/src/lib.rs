pub mod constructions;
pub mod error;
pub mod extremal;
pub mod functionals;
pub mod maximize;
pub mod norm;
pub mod poly;
pub mod report;
pub mod sampling;
pub mod verify;
