use serde::{Deserialize, Serialize};

/// Resource ceilings for the enumerating operations.
///
/// Every operation whose work grows exponentially in the dimension checks
/// its size against one of these before allocating or looping.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest vertex count allowed for a single part.
    pub max_part_size: u64,
    /// Largest bitset (rows times columns) allowed for one cross-part family.
    pub max_matrix_bits: u64,
    /// Visited-node budget for lattice-point enumeration.
    pub lattice_nodes: u64,
    /// Iteration budget for the brute-force triangle oracle.
    pub oracle_iterations: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_part_size: 1 << 24,
            max_matrix_bits: 1 << 33,
            lattice_nodes: 1_000_000_000,
            oracle_iterations: 10_000_000_000,
        }
    }
}
