//! Constructive PSD completions and Gram witnesses: clique-sum gluing,
//! circuit and series-parallel completion in `R^3`, colouring witnesses and
//! the covariance map onto the suspension.

mod chordal;
mod coloring;
mod glue;
mod witness;

pub use chordal::{complete_circuit, complete_k4free};
pub use coloring::{chromatic_number, coloring_witness, DEFAULT_MAX_COLOR_NODES};
pub use glue::glue_clique_sum;
pub use witness::{covariance_map, witness_transport, Coordinates, EdgeDistances, GramWitness, Transport};

#[cfg(test)]
mod tests;
