pub mod prime_engine;
pub mod ec_reduction;
pub mod galois_model;
pub mod density_engine;
pub mod lab;
