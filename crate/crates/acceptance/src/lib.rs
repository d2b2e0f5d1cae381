//! This crate exists for its integration test target: `tests/acceptance.rs`
//! sweeps the envelope formulas against exact kernels, the volume bounds
//! against Monte-Carlo quadrature, and the lattice estimators against groups
//! with known growth, printing one PASS line per criterion.
