//! Positive-real classification and low-complexity RLC realization for the
//! admittance family `Y(s) = k(a0 s^2 + a1 s + 1) / (s(d0 s^2 + d1 s + 1))`.

pub mod admittance;
pub mod analysis;
pub mod netlist;
pub mod oracle;
pub mod ratfunc;
pub mod synthesis;
